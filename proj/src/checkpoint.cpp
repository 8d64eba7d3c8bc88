#include "fracwos/checkpoint.hpp"

#include <istream>
#include <ostream>

#include "fracwos/errors.hpp"

namespace fwos::nn {

nlohmann::json to_json(const MlpModel& m) {
  nlohmann::json j;
  j["layer_dims"] = m.layer_dims;
  auto weights = nlohmann::json::array();
  auto biases = nlohmann::json::array();
  for (std::size_t k = 0; k < m.layers(); ++k) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m.weights[k].size()));
    for (Eigen::Index r = 0; r < m.weights[k].rows(); ++r) {
      for (Eigen::Index c = 0; c < m.weights[k].cols(); ++c) flat.push_back(m.weights[k](r, c));
    }
    weights.push_back(flat);
    biases.push_back(std::vector<double>(m.biases[k].data(), m.biases[k].data() + m.biases[k].size()));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  return j;
}

MlpModel model_from_json(const nlohmann::json& j) {
  try {
    MlpModel m = zeros_like(j.at("layer_dims").get<std::vector<int>>());
    const auto& weights = j.at("weights");
    const auto& biases = j.at("biases");
    if (weights.size() != m.layers() || biases.size() != m.layers()) {
      throw DataError("checkpoint layer count does not match layer_dims");
    }
    for (std::size_t k = 0; k < m.layers(); ++k) {
      const auto w = weights[k].get<std::vector<double>>();
      const auto b = biases[k].get<std::vector<double>>();
      if (w.size() != static_cast<std::size_t>(m.weights[k].size()) ||
          b.size() != static_cast<std::size_t>(m.biases[k].size())) {
        throw DataError("checkpoint layer " + std::to_string(k + 1) + " has the wrong number of entries");
      }
      std::size_t idx = 0;
      for (Eigen::Index r = 0; r < m.weights[k].rows(); ++r) {
        for (Eigen::Index c = 0; c < m.weights[k].cols(); ++c) m.weights[k](r, c) = w[idx++];
      }
      for (std::size_t i = 0; i < b.size(); ++i) m.biases[k](static_cast<Eigen::Index>(i)) = b[i];
    }
    if (!m.all_finite()) throw DataError("checkpoint contains non-finite parameters");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(std::ostream& os, const Checkpoint& cp) {
  nlohmann::json j = to_json(cp.model);
  j["meta"] = cp.meta;
  os << j.dump(1) << '\n';
}

Checkpoint load_checkpoint(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  Checkpoint cp;
  cp.model = model_from_json(j);
  if (j.contains("meta")) cp.meta = j["meta"];
  return cp;
}

}  // namespace fwos::nn
