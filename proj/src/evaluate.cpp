#include "fracwos/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracwos/errors.hpp"
#include "fracwos/estimator.hpp"
#include "fracwos/parallel.hpp"

namespace fwos {

namespace {

constexpr std::int64_t kChunk = 256;

struct EvalPoints {
  Eigen::MatrixXd x;
  std::vector<double> exact;
};

EvalPoints draw_points(const ProblemSpec& prob, int d, std::size_t n, double region_radius, std::uint64_t seed) {
  if (!prob.exact) throw DomainError("evaluate_model requires a problem with an exact solution");
  if (n < 1) throw DomainError("evaluate_model requires at least one point");
  if (prob.domain && prob.domain->dim() != d) {
    throw ConfigError("model input dimension " + std::to_string(d) + " does not match the problem dimension " +
                      std::to_string(prob.domain->dim()));
  }
  if (!(region_radius > 0.0)) throw DomainError("evaluation radius must be positive");
  EvalPoints pts;
  pts.x.resize(d, static_cast<Eigen::Index>(n));
  pts.exact.resize(n);
  RngStream rng(seed, kEvalStream);
  for (std::size_t k = 0; k < n; ++k) {
    const auto p = sample_ball_point(d, region_radius, rng);
    std::copy(p.begin(), p.end(), pts.x.col(static_cast<Eigen::Index>(k)).data());
    pts.exact[k] = (*prob.exact)(p);
  }
  return pts;
}

MetricReport reduce(const Eigen::RowVectorXd& pred, const std::vector<double>& exact) {
  MetricReport rep;
  rep.n_points = exact.size();
  double sq = 0.0;
  double rel = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) {
    const double err = pred(static_cast<Eigen::Index>(k)) - exact[k];
    sq += err * err;
    if (std::fabs(exact[k]) <= kRelativeErrorGuard) {
      ++rep.n_excluded;
    } else {
      rel += std::fabs(err) / std::fabs(exact[k]);
    }
  }
  rep.mse = sq / static_cast<double>(rep.n_points);
  const std::size_t kept = rep.n_points - rep.n_excluded;
  rep.mre = kept > 0 ? rel / static_cast<double>(kept) : 0.0;
  return rep;
}

}  // namespace

MetricReport evaluate_model_serial(const nn::MlpModel& m, const ProblemSpec& prob, std::size_t n,
                                   double region_radius, std::uint64_t seed) {
  const auto pts = draw_points(prob, m.input_dim(), n, region_radius, seed);
  const auto total = static_cast<std::int64_t>(n);
  Eigen::RowVectorXd pred(total);
  for (std::int64_t start = 0; start < total; start += kChunk) {
    const auto len = std::min(kChunk, total - start);
    pred.segment(start, len) = nn::realize_batch(m, pts.x.middleCols(start, len));
  }
  return reduce(pred, pts.exact);
}

MetricReport evaluate_model(const nn::MlpModel& m, const ProblemSpec& prob, std::size_t n, double region_radius,
                            std::uint64_t seed) {
  const auto pts = draw_points(prob, m.input_dim(), n, region_radius, seed);
  const auto total = static_cast<std::int64_t>(n);
  Eigen::RowVectorXd pred(total);
  ErrorSlot errors;
#pragma omp parallel for schedule(static)
  for (std::int64_t start = 0; start < total; start += kChunk) {
    errors.run([&] {
      const auto len = std::min(kChunk, total - start);
      pred.segment(start, len) = nn::realize_batch(m, pts.x.middleCols(start, len));
    });
  }
  errors.rethrow();
  return reduce(pred, pts.exact);
}

}  // namespace fwos
