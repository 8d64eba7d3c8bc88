#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fracwos/estimator.hpp"
#include "fracwos/rng.hpp"

namespace fwos::nn {

inline constexpr int kDefaultHiddenLayers = 7;
inline constexpr int kDefaultWidth = 110;

// Fully connected ReLU network. weights[i] is k_{i+1} x k_i; the last layer is
// affine with no activation.
struct MlpModel {
  std::vector<int> layer_dims;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  int input_dim() const { return layer_dims.front(); }
  std::size_t layers() const { return weights.size(); }
  std::size_t param_count() const;
  bool all_finite() const;
};

// Zero-initialised model of the given layer dimensions.
MlpModel zeros_like(const std::vector<int>& layer_dims);
MlpModel zeros_like(const MlpModel& m);

// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
MlpModel init_mlp(int d, RngStream& rng, int hidden_layers = kDefaultHiddenLayers, int width = kDefaultWidth);

double realize(const MlpModel& m, std::span<const double> x);
// Columns of xs are inputs; returns one output per column.
Eigen::RowVectorXd realize_batch(const MlpModel& m, const Eigen::MatrixXd& xs);

struct Batch {
  Eigen::MatrixXd x;  // d x L
  Eigen::VectorXd u;  // L
  std::size_t size() const { return static_cast<std::size_t>(u.size()); }
};

Batch make_batch(const TrainingSet& ts, std::span<const std::size_t> indices);
Batch make_batch(const TrainingSet& ts);

enum class LossKind { Mse, Radial };

// (1/L) sum (R(x_l) - u_l)^2
double loss_mse(const MlpModel& m, const Batch& batch);
// (1/2L) sum [(R(x_l) - u_l)^2 + (R(x_l) - R(-x_l))^2]
double loss_radial(const MlpModel& m, const Batch& batch);
double loss(const MlpModel& m, const Batch& batch, LossKind kind);

struct LossGradient {
  double loss;
  MlpModel grad;
};

// Reverse-mode gradient of the selected loss; ReLU'(0) = 0.
LossGradient gradient(const MlpModel& m, const Batch& batch, LossKind kind);

struct AdamState {
  MlpModel first;
  MlpModel second;
  std::int64_t t = 0;

  static AdamState for_model(const MlpModel& m);
};

struct AdamCoefficients {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

void adam_step(MlpModel& m, AdamState& s, const MlpModel& grad, double gamma, const AdamCoefficients& c = {});

struct TrainConfig {
  std::size_t iterations = 1000;  // N_iter
  std::size_t batch_size = 400;   // L
  double learning_rate = 5e-3;    // gamma
  bool radial_loss = false;
  std::uint64_t seed = 0;
  int hidden_layers = kDefaultHiddenLayers;
  int width = kDefaultWidth;
};

struct TrainResult {
  MlpModel model;
  std::vector<double> loss_trace;  // minibatch loss before each update
};

// Streams reserved for training: initial weights and minibatch selection.
inline constexpr std::uint64_t kInitStream = kReservedStreamBase + 1;
inline constexpr std::uint64_t kBatchStream = kReservedStreamBase + 2;

// Minibatch SGD with Adam; batches drawn uniformly without replacement.
TrainResult train(const TrainingSet& ts, const TrainConfig& cfg);
TrainResult train_from(MlpModel initial, const TrainingSet& ts, const TrainConfig& cfg);

}  // namespace fwos::nn
