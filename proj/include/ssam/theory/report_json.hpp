#pragma once

#include <json.hpp>

#include "ssam/theory/constants.hpp"
#include "ssam/theory/convergence.hpp"

namespace ssam {

nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const AssumptionConstants& c);
/// Summary of a trace: config, repeat-averaged curves, and f(w_1).
nlohmann::json trace_summary_json(const ConvergenceTrace& t);

}  // namespace ssam
