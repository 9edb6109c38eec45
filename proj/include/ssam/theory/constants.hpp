#pragma once

#include <map>
#include <optional>
#include <string>

#include "ssam/numcore/synthetic.hpp"

namespace ssam {

/// L-smoothness, gradient bound on the ball of radius R, and noise level.
struct AssumptionConstants {
  double L = 0.0;
  double G = 0.0;
  double sigma = 0.0;
  double radius = 0.0;

  void validate() const;
};

/// Constants of a synthetic objective. Throws UnsupportedOperation when the
/// objective does not know them.
AssumptionConstants assumption_constants(const StochasticObjective& obj);

/// Outcome of checking one inequality over many trials.
struct BoundReport {
  std::string inequality;
  long trials = 0;
  long violations = 0;
  /// Smallest RHS - LHS seen (negative means the inequality failed there).
  double worst_margin = 0.0;
  /// Standard error at the worst trial, for Monte-Carlo checks.
  std::optional<double> mc_stderr;
  /// Constants and parameters the inequality was instantiated with.
  std::map<std::string, double> instantiation;
  /// Additional named margins (alternative forms of the same inequality).
  std::map<std::string, double> extra;

  bool monte_carlo() const noexcept { return mc_stderr.has_value(); }
  bool passed() const noexcept { return violations == 0; }
};

}  // namespace ssam
