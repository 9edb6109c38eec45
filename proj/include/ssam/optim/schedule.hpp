#pragma once

#include <string>

namespace ssam {

enum class ScheduleRule { Constant, InverseSqrt };

std::string to_string(ScheduleRule r);
ScheduleRule parse_schedule_rule(const std::string& s);

struct Schedule {
  double base = 0.0;
  ScheduleRule rule = ScheduleRule::Constant;
};

/// base (constant) or base / sqrt(t) (inverse-sqrt). Steps start at 1.
double schedule_at(const Schedule& s, long t);

}  // namespace ssam
