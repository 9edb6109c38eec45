#include <cmath>

#include "ssam/numcore/synthetic.hpp"

namespace ssam {

TrigNonconvex::TrigNonconvex(Index d, double beta, double omega, double sigma, double radius, double init_radius)
    : SyntheticObjective(d, sigma, radius, init_radius), beta_(beta), omega_(omega) {
  if (!std::isfinite(beta) || !std::isfinite(omega)) throw ConfigError("beta", "trig parameters must be finite");
}

std::optional<KnownConstants> TrigNonconvex::known_constants() const {
  const double L = 1.0 + std::abs(beta_) * omega_ * omega_;
  const double G = radius() + std::abs(beta_ * omega_) * std::sqrt(static_cast<double>(dimension()));
  return KnownConstants{L, G, sigma()};
}

double TrigNonconvex::true_loss_kernel(const Eigen::VectorXd& w) const {
  return 0.5 * w.squaredNorm() + beta_ * (omega_ * w.array()).cos().sum();
}

Eigen::VectorXd TrigNonconvex::true_grad_kernel(const Eigen::VectorXd& w) const {
  return (w.array() - beta_ * omega_ * (omega_ * w.array()).sin()).matrix();
}

}  // namespace ssam
