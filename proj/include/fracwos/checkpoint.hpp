#pragma once

#include <iosfwd>

#include <json.hpp>

#include "fracwos/nn.hpp"

namespace fwos::nn {

// {layer_dims, weights: row-major per layer, biases, meta}
struct Checkpoint {
  MlpModel model;
  nlohmann::json meta = nlohmann::json::object();
};

nlohmann::json to_json(const MlpModel& m);
MlpModel model_from_json(const nlohmann::json& j);

void save_checkpoint(std::ostream& os, const Checkpoint& cp);
Checkpoint load_checkpoint(std::istream& is);

}  // namespace fwos::nn
