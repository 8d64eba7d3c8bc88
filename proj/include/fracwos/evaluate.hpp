#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "fracwos/nn.hpp"
#include "fracwos/problems.hpp"

namespace fwos {

inline constexpr double kRelativeErrorGuard = 1e-8;
inline constexpr std::size_t kDefaultEvalPoints = 5000;
inline constexpr std::uint64_t kEvalStream = kReservedStreamBase + 3;

struct MetricReport {
  double mse = 0.0;
  // Mean of |R(x) - u(x)| / |u(x)| over points with |u(x)| > guard.
  double mre = 0.0;
  std::size_t n_points = 0;
  std::size_t n_excluded = 0;
};

// n points uniform in B(0, region_radius) drawn from RngStream(seed, kEvalStream).
MetricReport evaluate_model(const nn::MlpModel& m, const ProblemSpec& prob, std::size_t n, double region_radius,
                            std::uint64_t seed);
MetricReport evaluate_model_serial(const nn::MlpModel& m, const ProblemSpec& prob, std::size_t n,
                                   double region_radius, std::uint64_t seed);

}  // namespace fwos
