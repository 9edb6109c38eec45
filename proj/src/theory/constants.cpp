#include "ssam/theory/constants.hpp"

#include <cmath>

#include "ssam/error.hpp"

namespace ssam {

void AssumptionConstants::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("L", "must be positive and finite");
  if (!(G >= 0.0) || !std::isfinite(G)) throw ConfigError("G", "must be non-negative and finite");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma", "must be non-negative and finite");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("radius", "must be positive and finite");
}

AssumptionConstants assumption_constants(const StochasticObjective& obj) {
  const auto known = obj.known_constants();
  const auto* synthetic = dynamic_cast<const SyntheticObjective*>(&obj);
  if (!known || synthetic == nullptr)
    throw UnsupportedOperation("assumption constants are only known for synthetic objectives");
  AssumptionConstants c{known->L, known->G, known->sigma, synthetic->radius()};
  c.validate();
  return c;
}

}  // namespace ssam
