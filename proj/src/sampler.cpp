#include "fracwos/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "fracwos/errors.hpp"
#include "fracwos/specfun.hpp"

namespace fwos {

namespace sf = specfun;

FractionalParams::FractionalParams(int d, double alpha) : d_(d), alpha_(alpha) {
  if (d < 2) throw DomainError("dimension must be >= 2, got " + std::to_string(d));
  if (!(alpha > 0.0 && alpha < 2.0)) {
    std::ostringstream os;
    os << "alpha must lie in the open interval (0, 2), got " << alpha;
    throw DomainError(os.str());
  }
}

DirectionMode parse_direction_mode(std::string_view name) {
  if (name == "isotropic") return DirectionMode::Isotropic;
  if (name == "paper-angles") return DirectionMode::PaperAngles;
  throw ConfigError("unknown direction mode '" + std::string(name) + "' (isotropic|paper-angles)");
}

std::string_view to_string(DirectionMode mode) {
  return mode == DirectionMode::Isotropic ? "isotropic" : "paper-angles";
}

double exit_radius_excess_cdf(double s, const FractionalParams& p) {
  if (!(s > 0.0)) {
    std::ostringstream os;
    os << "exit_radius_excess_cdf requires s > 0, got " << s;
    throw DomainError(os.str());
  }
  if (std::isinf(s)) return 1.0;
  const double a = 0.5 * p.alpha();
  const double r = 1.0 + s;
  // 1 - 1/r^2 = s (2 + s) / r^2, free of cancellation for small s.
  const double y = s * (2.0 + s) / (r * r);
  if (y <= 0.5) return sf::reg_inc_beta(y, {1.0 - a, a});
  return 1.0 - sf::reg_inc_beta(1.0 / (r * r), {a, 1.0 - a});
}

double exit_radius_excess_inverse_cdf(double u, const FractionalParams& p) {
  if (!(u >= 0.0 && u < 1.0)) {
    std::ostringstream os;
    os << "exit_radius_inverse_cdf requires u in [0, 1), got " << u;
    throw DomainError(os.str());
  }
  const double a = 0.5 * p.alpha();
  const sf::BetaPair near{1.0 - a, a};
  if (u <= sf::reg_inc_beta(0.5, near)) {
    const double y = sf::inv_reg_inc_beta(u, near);
    return std::expm1(-0.5 * std::log1p(-y));
  }
  double x = sf::inv_reg_inc_beta(1.0 - u, {a, 1.0 - a});
  // Far tail for small alpha can underflow; keep the radius finite.
  if (x <= 0.0) x = std::numeric_limits<double>::denorm_min();
  return 1.0 / std::sqrt(x) - 1.0;
}

double exit_radius_cdf(double r, const FractionalParams& p) {
  if (!(r > 1.0)) {
    std::ostringstream os;
    os << "exit_radius_cdf requires r > 1, got " << r;
    throw DomainError(os.str());
  }
  return exit_radius_excess_cdf(r - 1.0, p);
}

double exit_radius_inverse_cdf(double u, const FractionalParams& p) {
  return 1.0 + exit_radius_excess_inverse_cdf(u, p);
}

InnerRadiusLaw::InnerRadiusLaw(const FractionalParams& p)
    : params_(p),
      shape_shift_(0.5 * (p.d() - p.alpha())),
      shape_full_(0.5 * p.d()),
      shape_alpha_(0.5 * p.alpha()),
      beta_ratio_(std::exp(sf::ln_beta({shape_shift_, shape_alpha_}) -
                           sf::ln_beta({shape_full_, shape_alpha_}))) {}

double InnerRadiusLaw::pdf(double r) const {
  if (!(r > 0.0 && r < 1.0)) {
    std::ostringstream os;
    os << "inner_radius_pdf requires r in (0, 1), got " << r;
    throw DomainError(os.str());
  }
  const double alpha = params_.alpha();
  const double tail = 1.0 - sf::reg_inc_beta(r * r, {shape_shift_, shape_alpha_});
  return alpha * beta_ratio_ * std::pow(r, alpha - 1.0) * tail;
}

double InnerRadiusLaw::cdf(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) {
    std::ostringstream os;
    os << "inner_radius_cdf requires r in [0, 1], got " << r;
    throw DomainError(os.str());
  }
  if (r == 0.0) return 0.0;
  if (r == 1.0) return 1.0;
  const double r2 = r * r;
  const double full = sf::reg_inc_beta(r2, {shape_full_, shape_alpha_});
  const double tail = 1.0 - sf::reg_inc_beta(r2, {shape_shift_, shape_alpha_});
  return full + std::pow(r, params_.alpha()) * beta_ratio_ * tail;
}

InnerRadiusDraw InnerRadiusLaw::invert(double u, const NewtonOptions& opts) const {
  double r = opts.r0;
  int it = 0;
  for (; it < opts.max_newton_iter; ++it) {
    const double residual = cdf(r) - u;
    if (std::fabs(residual) < opts.delta) return {r, it, false};
    const double next = r - residual / pdf(r);
    if (!(next > 0.0 && next < 1.0) || !std::isfinite(next)) break;
    r = next;
  }

  double lo = 0.0;
  double hi = 1.0;
  for (int b = 0; b < opts.max_bisection_iter; ++b) {
    const double mid = 0.5 * (lo + hi);
    const double residual = cdf(mid) - u;
    if (std::fabs(residual) < opts.delta && mid > 0.0 && mid < 1.0) return {mid, it, true};
    if (residual < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::ostringstream os;
  os << "inner radius inversion failed: u=" << u << " d=" << params_.d() << " alpha=" << params_.alpha()
     << " bracket=[" << lo << ", " << hi << "]";
  throw NumericalError(os.str());
}

double inner_radius_pdf(double r, const FractionalParams& p) { return InnerRadiusLaw(p).pdf(r); }

double inner_radius_cdf(double r, const FractionalParams& p) { return InnerRadiusLaw(p).cdf(r); }

double sample_inner_radius(const FractionalParams& p, double r0, double delta, RngStream& rng) {
  if (!(r0 > 0.0 && r0 < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw DomainError("sample_inner_radius requires r0 and delta in (0, 1)");
  }
  NewtonOptions opts;
  opts.r0 = r0;
  opts.delta = delta;
  return InnerRadiusLaw(p).invert(rng.uniform(), opts).r;
}

void sample_unit_direction(int d, DirectionMode mode, RngStream& rng, std::span<double> out) {
  if (d < 2) throw DomainError("sample_unit_direction requires d >= 2");
  if (out.size() != static_cast<std::size_t>(d)) throw DomainError("direction buffer has wrong length");

  if (mode == DirectionMode::Isotropic) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (auto& w : out) {
        w = rng.normal();
        norm2 += w * w;
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& w : out) w *= inv;
    return;
  }

  // Hyperspherical recursion: w_1 = cos T_1, w_i = cos T_i prod_{k<i} sin T_k,
  // w_d = prod_{k<d} sin T_k.
  double sin_prod = 1.0;
  for (int i = 0; i < d - 1; ++i) {
    const double upper = (i == d - 2) ? 2.0 * std::numbers::pi : std::numbers::pi;
    const double theta = rng.uniform(0.0, upper);
    out[i] = std::cos(theta) * sin_prod;
    sin_prod *= std::sin(theta);
  }
  out[d - 1] = sin_prod;
}

std::vector<double> sample_unit_direction(int d, DirectionMode mode, RngStream& rng) {
  if (d < 2) throw DomainError("sample_unit_direction requires d >= 2");
  std::vector<double> w(static_cast<std::size_t>(d));
  sample_unit_direction(d, mode, rng, w);
  return w;
}

double sample_exit_radius_excess(const FractionalParams& p, RngStream& rng) {
  return exit_radius_excess_inverse_cdf(rng.uniform(), p);
}

void sample_exit_point(const FractionalParams& p, DirectionMode mode, RngStream& rng,
                       std::span<double> out) {
  // Radii that round to 1 are lifted a few ulps so |Y| > 1 survives the
  // product with a unit vector whose norm is itself rounded.
  constexpr double kMinRadius = 1.0 + 8.0 * std::numeric_limits<double>::epsilon();
  const double radius = std::max(1.0 + sample_exit_radius_excess(p, rng), kMinRadius);
  sample_unit_direction(p.d(), mode, rng, out);
  for (auto& y : out) y *= radius;
}

std::vector<double> sample_exit_point(const FractionalParams& p, DirectionMode mode, RngStream& rng) {
  std::vector<double> y(static_cast<std::size_t>(p.d()));
  sample_exit_point(p, mode, rng, y);
  return y;
}

void sample_inner_point(const InnerRadiusLaw& law, DirectionMode mode, const NewtonOptions& opts,
                        RngStream& rng, std::span<double> out) {
  const double radius = law.invert(rng.uniform(), opts).r;
  sample_unit_direction(law.params().d(), mode, rng, out);
  for (auto& v : out) v *= radius;
}

std::vector<double> sample_inner_point(const FractionalParams& p, DirectionMode mode, RngStream& rng,
                                       const NewtonOptions& opts) {
  std::vector<double> v(static_cast<std::size_t>(p.d()));
  sample_inner_point(InnerRadiusLaw(p), mode, opts, rng, v);
  return v;
}

}  // namespace fwos
