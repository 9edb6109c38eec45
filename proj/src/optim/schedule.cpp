#include "ssam/optim/schedule.hpp"

#include <cmath>

#include "ssam/error.hpp"

namespace ssam {

std::string to_string(ScheduleRule r) { return r == ScheduleRule::Constant ? "constant" : "inverse-sqrt"; }

ScheduleRule parse_schedule_rule(const std::string& s) {
  if (s == "constant") return ScheduleRule::Constant;
  if (s == "inverse-sqrt") return ScheduleRule::InverseSqrt;
  throw ConfigError("schedule", "unknown schedule '" + s + "'");
}

double schedule_at(const Schedule& s, long t) {
  if (t < 1) throw InvalidArgument("schedule step must be at least 1, got " + std::to_string(t));
  if (s.rule == ScheduleRule::Constant) return s.base;
  return s.base / std::sqrt(static_cast<double>(t));
}

}  // namespace ssam
