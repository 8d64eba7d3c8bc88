#pragma once

#include <functional>
#include <vector>

namespace fwos::stats {

// One-sample Kolmogorov-Smirnov distance sup |F_n - F|. Sorts a copy.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

// Asymptotic two-sided critical value c(level) / sqrt(n); level 0.01 -> 1.628.
double ks_critical_value(std::size_t n, double level = 0.01);

}  // namespace fwos::stats
