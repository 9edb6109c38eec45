#pragma once

#include <optional>

#include "ssam/exp/config.hpp"
#include "ssam/exp/dataset.hpp"
#include "ssam/exp/record.hpp"

namespace ssam {

struct Problem {
  ObjectivePtr objective;
  std::optional<Dataset> data;
};

/// Objective (and dataset for classifiers) described by the config.
Problem build_problem(const ExperimentConfig& cfg);

struct TrainResult {
  RunRecord record;
  ParamVector weights;
};

/// Algorithm loop: per epoch, maybe regenerate the mask, then one pass over a
/// freshly shuffled training set. A NumericalError stops the run and is
/// reported through record.status, keeping the rows written so far.
TrainResult train_problem(const ExperimentConfig& cfg, const Problem& problem);
RunRecord train(const ExperimentConfig& cfg);

}  // namespace ssam
