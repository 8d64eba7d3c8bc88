#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracwos/sampler.hpp"

namespace fwos::app {

struct RunConfig {
  std::string command;
  std::string preset;
  int example = 1;
  int d = 2;
  double alpha = 1.0;
  std::size_t paths = 100;    // M
  std::size_t points = 2000;  // P
  std::size_t batch = 400;    // L
  std::size_t iters = 1000;   // N_iter
  double lr = 5e-3;           // gamma
  std::uint64_t seed = 0;
  DirectionMode direction = DirectionMode::Isotropic;
  double delta = 1e-3;
  bool radial_loss = false;
  bool strict_paper = false;
  std::size_t inner_samples = 1;
  int hidden_layers = 7;
  int width = 110;
  double sampling_radius = 1.5;

  std::size_t samples = 100000;  // sample: draws per radial law
  std::size_t eval_points = 5000;
  double eval_radius = 1.0;
  std::size_t profile_points = 5000;
  std::size_t grid = 101;  // surface.csv is grid x grid

  std::vector<std::size_t> sweep_paths{10, 100, 1000, 2000};
  std::vector<std::size_t> sweep_points{10, 100, 1000, 2000};
  std::vector<double> sweep_alphas{0.1, 0.5, 1.0, 1.5, 1.9};

  std::filesystem::path out = "out";
  std::filesystem::path dataset;     // train: defaults to out/dataset.csv
  std::filesystem::path checkpoint;  // evaluate: defaults to out/checkpoint.json
};

// Parameter sets for the benchmark runs of each example and dimension.
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// Range checks shared by every subcommand; throws ConfigError / DomainError.
void validate(const RunConfig& cfg);

// JSON mirror of the configuration; path fields are excluded so that the
// hash depends only on what determines the numbers.
nlohmann::json config_json(const RunConfig& cfg);
std::string manifest_hash(const RunConfig& cfg);
// Inverse of config_json; missing keys keep their defaults.
RunConfig config_from_json(const nlohmann::json& j);

void cmd_sample(const RunConfig& cfg);
void cmd_dataset(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_evaluate(const RunConfig& cfg);
void cmd_sweep(const RunConfig& cfg);

void run(const RunConfig& cfg);

}  // namespace fwos::app
