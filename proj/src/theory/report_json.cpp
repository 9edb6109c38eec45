#include "ssam/theory/report_json.hpp"

namespace ssam {

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["inequality"] = r.inequality;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["worst_margin"] = r.worst_margin;
  j["mc_stderr"] = r.mc_stderr ? nlohmann::json(*r.mc_stderr) : nlohmann::json(nullptr);
  j["passed"] = r.passed();
  j["instantiation"] = r.instantiation;
  if (!r.extra.empty()) j["extra"] = r.extra;
  return j;
}

nlohmann::json to_json(const AssumptionConstants& c) {
  return {{"L", c.L}, {"G", c.G}, {"sigma", c.sigma}, {"radius", c.radius}};
}

nlohmann::json trace_summary_json(const ConvergenceTrace& t) {
  const Eigen::VectorXd g = t.mean_grad_sq();
  const Eigen::VectorXd f = t.f_after.colwise().mean().transpose();
  nlohmann::json j;
  j["optimizer"] = to_string(t.config.kind);
  j["eta0"] = t.config.eta0;
  j["rho0"] = t.config.rho0;
  j["steps"] = t.steps();
  j["repeats"] = t.repeats();
  j["f_initial"] = t.f_initial;
  j["mean_grad_sq"] = std::vector<double>(g.begin(), g.end());
  j["mean_f_after"] = std::vector<double>(f.begin(), f.end());
  return j;
}

}  // namespace ssam
