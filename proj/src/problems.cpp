#include "fracwos/problems.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "fracwos/errors.hpp"
#include "fracwos/specfun.hpp"

namespace fwos {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

std::shared_ptr<const Domain> unit_ball(int d) { return std::make_shared<Ball>(Ball::unit(d)); }

}  // namespace

double example1_source_constant(const FractionalParams& p) {
  using specfun::ln_gamma;
  const double a = p.alpha();
  const double half_d = 0.5 * p.d();
  return std::exp(a * std::numbers::ln2 + ln_gamma(0.5 * a + half_d) + ln_gamma(0.5 * a + 1.0) -
                  ln_gamma(half_d));
}

double example2_source_scale(const FractionalParams& p) {
  using specfun::ln_gamma;
  const double a = p.alpha();
  const double half_d = 0.5 * p.d();
  return std::exp(a * std::numbers::ln2 + ln_gamma(0.5 * a + half_d) + ln_gamma(0.5 * a + 2.0) -
                  ln_gamma(half_d));
}

double example3_kernel_constant(const FractionalParams& p) {
  using specfun::ln_gamma;
  const double a = p.alpha();
  const double half_d = 0.5 * p.d();
  return std::exp(ln_gamma(half_d - 0.5 * a) - a * std::numbers::ln2 - half_d * std::log(std::numbers::pi) -
                  ln_gamma(0.5 * a));
}

ProblemSpec example1(const FractionalParams& p) {
  const double c = example1_source_constant(p);
  const double half_alpha = 0.5 * p.alpha();
  ProblemSpec spec;
  spec.id = 1;
  spec.name = "constant-source";
  spec.source = [c](std::span<const double>) { return c; };
  spec.boundary = [](std::span<const double>) { return 0.0; };
  spec.domain = unit_ball(p.d());
  spec.exact = [half_alpha](std::span<const double> x) {
    const double s = 1.0 - norm2(x);
    return s > 0.0 ? std::pow(s, half_alpha) : 0.0;
  };
  spec.radial = true;
  return spec;
}

ProblemSpec example2(const FractionalParams& p) {
  const double b = example2_source_scale(p);
  const double slope = 1.0 + p.alpha() / p.d();
  const double power = 1.0 + 0.5 * p.alpha();
  ProblemSpec spec;
  spec.id = 2;
  spec.name = "polynomial-source";
  spec.source = [b, slope](std::span<const double> x) { return b * (1.0 - slope * norm2(x)); };
  spec.boundary = [](std::span<const double>) { return 0.0; };
  spec.domain = unit_ball(p.d());
  spec.exact = [power](std::span<const double> x) {
    const double s = 1.0 - norm2(x);
    return s > 0.0 ? std::pow(s, power) : 0.0;
  };
  spec.radial = true;
  return spec;
}

ProblemSpec example3(const FractionalParams& p) {
  if (!(p.d() > p.alpha())) throw DomainError("example 3 needs d > alpha");
  const double c = example3_kernel_constant(p);
  const double exponent = p.alpha() - p.d();
  auto kernel = [c, exponent](std::span<const double> x) {
    double s = (x[0] - 2.0) * (x[0] - 2.0);
    for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * x[i];
    if (s == 0.0) throw DomainError("example 3 solution is singular at y = (2, 0, ..., 0)");
    return c * std::pow(s, 0.5 * exponent);
  };
  ProblemSpec spec;
  spec.id = 3;
  spec.name = "fundamental-solution";
  spec.source = [](std::span<const double>) { return 0.0; };
  spec.boundary = kernel;
  spec.domain = unit_ball(p.d());
  spec.exact = kernel;
  spec.radial = false;
  return spec;
}

ProblemSpec example4(const FractionalParams& p) {
  auto linear = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  };
  ProblemSpec spec;
  spec.id = 4;
  spec.name = "linear-harmonic";
  spec.source = [](std::span<const double>) { return 0.0; };
  spec.boundary = linear;
  spec.domain = unit_ball(p.d());
  spec.exact = linear;
  spec.radial = false;
  return spec;
}

ProblemSpec make_example(int id, const FractionalParams& p) {
  switch (id) {
    case 1: return example1(p);
    case 2: return example2(p);
    case 3: return example3(p);
    case 4: return example4(p);
    default: throw ConfigError("example id must be 1, 2, 3 or 4, got " + std::to_string(id));
  }
}

}  // namespace fwos
