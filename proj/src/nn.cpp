#include "fracwos/nn.hpp"

#include <cmath>
#include <numeric>

#include "fracwos/errors.hpp"

namespace fwos::nn {

namespace {

struct ForwardTrace {
  std::vector<Eigen::MatrixXd> pre;   // Z_i, one per layer
  std::vector<Eigen::MatrixXd> post;  // A_0 = input, A_i = relu(Z_i) for hidden layers
};

void check_input(const MlpModel& m, Eigen::Index rows) {
  if (rows != m.input_dim()) {
    throw DomainError("input has " + std::to_string(rows) + " coordinates, network expects " +
                      std::to_string(m.input_dim()));
  }
}

ForwardTrace forward(const MlpModel& m, const Eigen::MatrixXd& xs) {
  check_input(m, xs.rows());
  ForwardTrace tr;
  tr.pre.reserve(m.layers());
  tr.post.reserve(m.layers());
  tr.post.push_back(xs);
  for (std::size_t i = 0; i < m.layers(); ++i) {
    Eigen::MatrixXd z = m.weights[i] * tr.post.back();
    z.colwise() += m.biases[i];
    if (i + 1 < m.layers()) tr.post.push_back(z.cwiseMax(0.0));
    tr.pre.push_back(std::move(z));
  }
  return tr;
}

// Accumulates dL/dparams into grad given dL/d(output) for each column.
void backward(const MlpModel& m, const ForwardTrace& tr, const Eigen::RowVectorXd& d_out, MlpModel& grad) {
  Eigen::MatrixXd delta = d_out;
  for (std::size_t k = m.layers(); k-- > 0;) {
    grad.weights[k].noalias() += delta * tr.post[k].transpose();
    grad.biases[k] += delta.rowwise().sum();
    if (k == 0) break;
    Eigen::MatrixXd back = m.weights[k].transpose() * delta;
    delta = back.cwiseProduct((tr.pre[k - 1].array() > 0.0).cast<double>().matrix());
  }
}

}  // namespace

std::size_t MlpModel::param_count() const {
  std::size_t n = 0;
  for (std::size_t i = 1; i < layer_dims.size(); ++i) {
    n += static_cast<std::size_t>(layer_dims[i]) * static_cast<std::size_t>(layer_dims[i - 1] + 1);
  }
  return n;
}

bool MlpModel::all_finite() const {
  for (std::size_t i = 0; i < layers(); ++i) {
    if (!weights[i].allFinite() || !biases[i].allFinite()) return false;
  }
  return true;
}

MlpModel zeros_like(const std::vector<int>& layer_dims) {
  if (layer_dims.size() < 2) throw DomainError("a network needs at least an input and an output layer");
  MlpModel m;
  m.layer_dims = layer_dims;
  for (std::size_t i = 1; i < layer_dims.size(); ++i) {
    if (layer_dims[i] < 1 || layer_dims[i - 1] < 1) throw DomainError("layer dimensions must be positive");
    m.weights.push_back(Eigen::MatrixXd::Zero(layer_dims[i], layer_dims[i - 1]));
    m.biases.push_back(Eigen::VectorXd::Zero(layer_dims[i]));
  }
  return m;
}

MlpModel zeros_like(const MlpModel& m) { return zeros_like(m.layer_dims); }

MlpModel init_mlp(int d, RngStream& rng, int hidden_layers, int width) {
  if (d < 1) throw DomainError("input dimension must be >= 1");
  if (hidden_layers < 0 || width < 1) throw DomainError("invalid hidden layout");
  std::vector<int> dims{d};
  for (int i = 0; i < hidden_layers; ++i) dims.push_back(width);
  dims.push_back(1);
  MlpModel m = zeros_like(dims);
  for (auto& w : m.weights) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    // Column-major fill order is part of the seeded layout.
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-scale, scale);
    }
  }
  return m;
}

Eigen::RowVectorXd realize_batch(const MlpModel& m, const Eigen::MatrixXd& xs) {
  check_input(m, xs.rows());
  Eigen::MatrixXd a = xs;
  for (std::size_t i = 0; i < m.layers(); ++i) {
    Eigen::MatrixXd z = m.weights[i] * a;
    z.colwise() += m.biases[i];
    a = (i + 1 < m.layers()) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return a.row(0);
}

double realize(const MlpModel& m, std::span<const double> x) {
  check_input(m, static_cast<Eigen::Index>(x.size()));
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  return realize_batch(m, v)(0);
}

Batch make_batch(const TrainingSet& ts, std::span<const std::size_t> indices) {
  Batch b;
  b.x.resize(ts.d, static_cast<Eigen::Index>(indices.size()));
  b.u.resize(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t l = 0; l < indices.size(); ++l) {
    const auto pt = ts.point(indices[l]);
    for (int i = 0; i < ts.d; ++i) b.x(i, static_cast<Eigen::Index>(l)) = pt[static_cast<std::size_t>(i)];
    b.u(static_cast<Eigen::Index>(l)) = ts.values[indices[l]];
  }
  return b;
}

Batch make_batch(const TrainingSet& ts) {
  std::vector<std::size_t> all(ts.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return make_batch(ts, all);
}

double loss_mse(const MlpModel& m, const Batch& batch) {
  if (batch.size() == 0) throw DomainError("loss of an empty batch");
  const Eigen::RowVectorXd err = realize_batch(m, batch.x) - batch.u.transpose();
  return err.squaredNorm() / static_cast<double>(batch.size());
}

double loss_radial(const MlpModel& m, const Batch& batch) {
  if (batch.size() == 0) throw DomainError("loss of an empty batch");
  const Eigen::RowVectorXd y = realize_batch(m, batch.x);
  const Eigen::RowVectorXd y_neg = realize_batch(m, -batch.x);
  const double fit = (y - batch.u.transpose()).squaredNorm();
  const double sym = (y - y_neg).squaredNorm();
  return (fit + sym) / (2.0 * static_cast<double>(batch.size()));
}

double loss(const MlpModel& m, const Batch& batch, LossKind kind) {
  return kind == LossKind::Mse ? loss_mse(m, batch) : loss_radial(m, batch);
}

LossGradient gradient(const MlpModel& m, const Batch& batch, LossKind kind) {
  if (batch.size() == 0) throw DomainError("gradient of an empty batch");
  const double n = static_cast<double>(batch.size());
  LossGradient out{0.0, zeros_like(m)};
  const ForwardTrace tr = forward(m, batch.x);
  const Eigen::RowVectorXd y = tr.pre.back().row(0);
  const Eigen::RowVectorXd err = y - batch.u.transpose();

  if (kind == LossKind::Mse) {
    out.loss = err.squaredNorm() / n;
    backward(m, tr, (2.0 / n) * err, out.grad);
    return out;
  }

  const ForwardTrace tr_neg = forward(m, -batch.x);
  const Eigen::RowVectorXd sym = y - tr_neg.pre.back().row(0);
  out.loss = (err.squaredNorm() + sym.squaredNorm()) / (2.0 * n);
  backward(m, tr, (err + sym) / n, out.grad);
  backward(m, tr_neg, -sym / n, out.grad);
  return out;
}

AdamState AdamState::for_model(const MlpModel& m) { return {zeros_like(m), zeros_like(m), 0}; }

void adam_step(MlpModel& m, AdamState& s, const MlpModel& grad, double gamma, const AdamCoefficients& c) {
  if (grad.layer_dims != m.layer_dims || s.first.layer_dims != m.layer_dims) {
    throw DomainError("Adam step with mismatched shapes");
  }
  if (!grad.all_finite()) throw NumericalError("non-finite gradient at Adam step " + std::to_string(s.t + 1));
  s.t += 1;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(s.t));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(s.t));
  auto update = [&](auto& param, auto& m1, auto& m2, const auto& g) {
    m1 = c.beta1 * m1 + (1.0 - c.beta1) * g;
    m2 = c.beta2 * m2 + (1.0 - c.beta2) * g.cwiseProduct(g);
    param.array() -= gamma * (m1.array() / bc1) / ((m2.array() / bc2).sqrt() + c.eps);
  };
  for (std::size_t i = 0; i < m.layers(); ++i) {
    update(m.weights[i], s.first.weights[i], s.second.weights[i], grad.weights[i]);
    update(m.biases[i], s.first.biases[i], s.second.biases[i], grad.biases[i]);
  }
}

TrainResult train_from(MlpModel initial, const TrainingSet& ts, const TrainConfig& cfg) {
  TrainResult res{std::move(initial), {}};
  if (cfg.iterations == 0) return res;
  if (ts.d != res.model.input_dim()) throw ConfigError("training set dimension does not match the network");
  if (cfg.batch_size < 1 || cfg.batch_size > ts.size()) {
    throw ConfigError("batch size must satisfy 1 <= L <= P (L=" + std::to_string(cfg.batch_size) +
                      ", P=" + std::to_string(ts.size()) + ")");
  }
  if (!(cfg.learning_rate > 0.0 && cfg.learning_rate < 1.0)) throw ConfigError("learning rate must lie in (0, 1)");

  const LossKind kind = cfg.radial_loss ? LossKind::Radial : LossKind::Mse;
  RngStream rng(cfg.seed, kBatchStream);
  AdamState state = AdamState::for_model(res.model);
  std::vector<std::size_t> order(ts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  res.loss_trace.reserve(cfg.iterations);

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    // Partial Fisher-Yates: the first L entries become a uniform L-subset.
    for (std::size_t l = 0; l < cfg.batch_size; ++l) {
      const auto j = l + static_cast<std::size_t>(rng.below(order.size() - l));
      std::swap(order[l], order[j]);
    }
    const Batch batch = make_batch(ts, std::span(order.data(), cfg.batch_size));
    auto lg = gradient(res.model, batch, kind);
    res.loss_trace.push_back(lg.loss);
    adam_step(res.model, state, lg.grad, cfg.learning_rate);
  }
  return res;
}

TrainResult train(const TrainingSet& ts, const TrainConfig& cfg) {
  RngStream rng(cfg.seed, kInitStream);
  return train_from(init_mlp(ts.d, rng, cfg.hidden_layers, cfg.width), ts, cfg);
}

}  // namespace fwos::nn
