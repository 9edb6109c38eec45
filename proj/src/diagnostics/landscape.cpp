#include "ssam/diagnostics/landscape.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace ssam {

Eigen::VectorXd grid_coordinates(Index resolution, double range) {
  if (resolution < 2) throw InvalidArgument("landscape: resolution must be >= 2");
  if (!(range > 0.0) || !std::isfinite(range)) throw InvalidArgument("landscape: range must be positive");
  Eigen::VectorXd c(resolution);
  const double span = static_cast<double>(resolution - 1);
  for (Index i = 0; i < resolution; ++i) {
    const double k = 2.0 * static_cast<double>(i) - span;
    c[i] = k == 0.0 ? 0.0 : range * k / span;
  }
  return c;
}

LandscapeGrid landscape_grid(const StochasticObjective& obj, const ParamVector& w, const Batch& batch,
                             const ParamVector& d1, const ParamVector& d2, Index resolution, double range,
                             int threads) {
  if (d1.size() != w.size() || d2.size() != w.size())
    throw ConfigError("direction", "landscape: direction length differs from weights");
  LandscapeGrid g{d1, d2, grid_coordinates(resolution, range), Eigen::MatrixXd(resolution, resolution)};

  auto rows = [&](Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      for (Index j = 0; j < resolution; ++j) {
        Eigen::VectorXd p = w.values();
        if (g.coords[i] != 0.0) p += g.coords[i] * d1.values();
        if (g.coords[j] != 0.0) p += g.coords[j] * d2.values();
        g.loss(i, j) = eval_loss(obj, w.like(std::move(p)), batch);
      }
    }
  };

  const Index workers = std::clamp<Index>(threads, 1, resolution);
  if (workers == 1) {
    rows(0, resolution);
    return g;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  const Index chunk = (resolution + workers - 1) / workers;
  for (Index t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        rows(t * chunk, std::min(resolution, (t + 1) * chunk));
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return g;
}

LandscapeGrid landscape_slice(const StochasticObjective& obj, const ParamVector& w, const Batch& batch,
                              std::uint64_t seed, Index resolution, double range, int threads) {
  Rng rng(seed);
  const ParamVector d1 = filter_normalize(w.like(standard_normal(rng, w.size())), w);
  const ParamVector d2 = filter_normalize(w.like(standard_normal(rng, w.size())), w);
  return landscape_grid(obj, w, batch, d1, d2, resolution, range, threads);
}

}  // namespace ssam
