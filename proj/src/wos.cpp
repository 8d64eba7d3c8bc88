#include "fracwos/wos.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "fracwos/io.hpp"

namespace fwos {

Ball::Ball(std::vector<double> center, double radius) : center_(std::move(center)), radius_(radius) {
  if (center_.empty()) throw DomainError("ball center must have at least one coordinate");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("ball radius must be positive and finite");
}

double Ball::distance_to_center(std::span<const double> x) const {
  if (x.size() != center_.size()) throw DomainError("point dimension does not match the ball");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - center_[i];
    s += dx * dx;
  }
  return std::sqrt(s);
}

bool Ball::contains(std::span<const double> x) const { return distance_to_center(x) < radius_; }

double Ball::boundary_distance(std::span<const double> x) const {
  return std::fabs(radius_ - distance_to_center(x));
}

double Ball::circumradius() const {
  double s = 0.0;
  for (double c : center_) s += c * c;
  return std::sqrt(s) + radius_;
}

double boundary_distance(const Domain& dom, std::span<const double> x) { return dom.boundary_distance(x); }

void simulate_wos_path_into(WosPath& path, const Domain& dom, std::span<const double> x0,
                            const FractionalParams& p, DirectionMode mode, RngStream& rng,
                            std::size_t step_cap) {
  const int d = p.d();
  if (dom.dim() != d || x0.size() != static_cast<std::size_t>(d)) {
    throw DomainError("starting point, domain and parameters disagree on the dimension");
  }
  if (!dom.contains(x0)) throw DomainError("walk-on-spheres start point must lie inside the domain");

  path.clear(d);
  path.points.insert(path.points.end(), x0.begin(), x0.end());
  std::vector<double> jump(static_cast<std::size_t>(d));
  const auto ud = static_cast<std::size_t>(d);

  for (std::size_t n = 0;; ++n) {
    const std::span<const double> prev(path.points.data() + n * ud, ud);
    if (!dom.contains(prev)) break;
    if (n == step_cap) {
      std::ostringstream os;
      os << "walk-on-spheres path exceeded the step cap of " << step_cap << " (alpha=" << p.alpha() << ")";
      throw StepCapExceeded(os.str(), path);
    }
    const double r = dom.boundary_distance(prev);
    sample_exit_point(p, mode, rng, jump);
    path.radii.push_back(r);
    // prev may dangle after the resize below; index explicitly.
    path.points.resize(path.points.size() + ud);
    double* next = path.points.data() + (n + 1) * ud;
    const double* last = path.points.data() + n * ud;
    for (std::size_t i = 0; i < ud; ++i) next[i] = last[i] + r * jump[i];
  }
}

WosPath simulate_wos_path(const Domain& dom, std::span<const double> x0, const FractionalParams& p,
                          DirectionMode mode, RngStream& rng, std::size_t step_cap) {
  WosPath path;
  simulate_wos_path_into(path, dom, x0, p, mode, rng, step_cap);
  return path;
}

void write_path_csv(std::ostream& os, const WosPath& path) {
  os << "step";
  for (int i = 1; i <= path.d; ++i) os << ",x_" << i;
  os << ",r\n";
  for (std::size_t n = 0; n <= path.exit_step(); ++n) {
    os << n;
    for (double v : path.point(n)) os << ',' << io::format_double(v);
    os << ',';
    if (n > 0) os << io::format_double(path.radii[n - 1]);
    os << '\n';
  }
}

}  // namespace fwos
