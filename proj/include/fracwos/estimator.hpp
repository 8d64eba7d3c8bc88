#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fracwos/problems.hpp"
#include "fracwos/sampler.hpp"
#include "fracwos/wos.hpp"

namespace fwos {

// kappa_{d,alpha} = (2^{1-alpha} / alpha) G(d/2) / (G(alpha/2) G(d/2 + alpha/2)),
// the total mass of the expected occupation measure of the unit ball.
double kappa(const FractionalParams& p);

struct EstimatorConfig {
  std::size_t paths = 100;  // M
  std::size_t inner_samples = 1;  // K, fresh draws of v per step
  DirectionMode mode = DirectionMode::Isotropic;
  double nr_delta = 1e-3;
  double nr_r0 = 0.5;
  // One v per path reused at every step, as written in the training-set formula.
  bool strict_paper = false;
  std::size_t step_cap = kDefaultStepCap;
};

struct PointEstimate {
  double mean = 0.0;
  double std_error = 0.0;   // sample std / sqrt(M); zero outside D
  double mean_steps = 0.0;  // average exit step N
  std::size_t paths = 0;    // zero when x lies outside D
};

// Per-(d, alpha) state shared by every path: kappa and the inner radial law.
class EstimatorContext {
 public:
  EstimatorContext(const ProblemSpec& prob, const FractionalParams& p, const EstimatorConfig& cfg);

  const ProblemSpec& problem() const { return prob_; }
  const FractionalParams& params() const { return params_; }
  const EstimatorConfig& config() const { return cfg_; }
  double kappa() const { return kappa_; }
  const InnerRadiusLaw& inner_law() const { return inner_law_; }
  const NewtonOptions& newton() const { return newton_; }

 private:
  ProblemSpec prob_;
  FractionalParams params_;
  EstimatorConfig cfg_;
  double kappa_;
  InnerRadiusLaw inner_law_;
  NewtonOptions newton_;
};

// Reusable buffers for one thread.
struct PathScratch {
  WosPath path;
  std::vector<double> v;
  std::vector<double> y;
};

struct PathSample {
  double value;
  std::size_t steps;
};

// g(rho_N) + sum_n kappa r_n^alpha mean_j f(rho_{n-1} + r_n v_{n,j}) for one
// walk drawn from `rng`. The walk consumes the stream first, then the v draws.
PathSample path_estimate(const EstimatorContext& ctx, std::span<const double> x, RngStream& rng,
                         PathScratch& scratch);

// Path i uses RngStream(seed, path_stream_id(point_index, i)).
PointEstimate estimate_u_stats(std::span<const double> x, const EstimatorContext& ctx, std::uint64_t seed,
                               std::uint64_t point_index);
// Serial reference with identical stream assignment and summation order.
PointEstimate estimate_u_stats_serial(std::span<const double> x, const EstimatorContext& ctx,
                                      std::uint64_t seed, std::uint64_t point_index);

double estimate_u(std::span<const double> x, const ProblemSpec& prob, const FractionalParams& p,
                  const EstimatorConfig& cfg, std::uint64_t seed, std::uint64_t point_index = 0);

struct TrainingSet {
  int d = 0;
  std::vector<double> points;  // row-major, size() * d values
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  std::span<const double> point(std::size_t k) const {
    return {points.data() + k * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }
};

inline constexpr double kDefaultSamplingRadius = 1.5;

// Point k is uniform in B(0, sampling_radius) drawn from location_stream_id(k).
std::vector<double> sample_ball_point(int d, double radius, RngStream& rng);

TrainingSet generate_training_set(const ProblemSpec& prob, const FractionalParams& p, std::size_t count,
                                  const EstimatorConfig& cfg, double sampling_radius, std::uint64_t seed);
TrainingSet generate_training_set_serial(const ProblemSpec& prob, const FractionalParams& p,
                                         std::size_t count, const EstimatorConfig& cfg,
                                         double sampling_radius, std::uint64_t seed);

// Header x_1..x_d,u_hat preceded by optional '#' comment lines.
void write_training_set_csv(std::ostream& os, const TrainingSet& ts, const std::string& comment = {});
TrainingSet read_training_set_csv(std::istream& is);

}  // namespace fwos
