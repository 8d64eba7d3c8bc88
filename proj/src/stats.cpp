#include "fracwos/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fracwos/errors.hpp"

namespace fwos::stats {

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("KS distance of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double k = static_cast<double>(i);
    worst = std::max({worst, (k + 1.0) / n - f, f - k / n});
  }
  return worst;
}

double ks_critical_value(std::size_t n, double level) {
  if (n == 0 || !(level > 0.0 && level < 1.0)) throw DomainError("invalid KS critical-value request");
  return std::sqrt(-0.5 * std::log(0.5 * level)) / std::sqrt(static_cast<double>(n));
}

}  // namespace fwos::stats
