#pragma once

#include <string>

#include "specgraph/gp.hpp"

namespace specgraph {

// Versioned JSON serialization of a trained model. Numbers are written with
// 17 significant digits, which round-trips IEEE doubles exactly; load
// restores a model whose parameters are bitwise equal to the saved one.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace specgraph
