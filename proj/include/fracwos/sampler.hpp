#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "fracwos/rng.hpp"

namespace fwos {

// Dimension d >= 2 and stability index alpha in (0, 2).
class FractionalParams {
 public:
  FractionalParams(int d, double alpha);

  int d() const { return d_; }
  double alpha() const { return alpha_; }

 private:
  int d_;
  double alpha_;
};

// Isotropic: normalised standard-normal vector, uniform on the sphere.
// PaperAngles: Theta_1..Theta_{d-2} ~ U(0, pi), Theta_{d-1} ~ U(0, 2 pi),
// mapped through the hyperspherical-coordinate recursion. Not uniform for d >= 3.
enum class DirectionMode { Isotropic, PaperAngles };

DirectionMode parse_direction_mode(std::string_view name);
std::string_view to_string(DirectionMode mode);

// ---- exit law of the unit ball, radial part ----

// F(r) = 1 - I(1/r^2; alpha/2, 1 - alpha/2), r > 1. Independent of d.
double exit_radius_cdf(double r, const FractionalParams& p);
// F^{-1}(u) = I^{-1}(1 - u; alpha/2, 1 - alpha/2)^{-1/2}, u in [0, 1).
// Rounds to exactly 1 when r - 1 is below half an ulp; see the excess form.
double exit_radius_inverse_cdf(double u, const FractionalParams& p);

// Same law in the offset s = r - 1. For alpha near 2 a sizeable share of
// the mass sits within one ulp of r = 1, which only this form resolves.
double exit_radius_excess_cdf(double s, const FractionalParams& p);
double exit_radius_excess_inverse_cdf(double u, const FractionalParams& p);
// One draw of R - 1 by inversion of a single uniform.
double sample_exit_radius_excess(const FractionalParams& p, RngStream& rng);

// ---- normalised occupation measure of the unit ball, radial part ----

struct NewtonOptions {
  double r0 = 0.5;
  double delta = 1e-3;
  int max_newton_iter = 100;
  int max_bisection_iter = 200;
};

struct InnerRadiusDraw {
  double r;
  int newton_iterations;
  bool used_bisection;
};

// Precomputes the shape constants of the radial law for one (d, alpha).
class InnerRadiusLaw {
 public:
  explicit InnerRadiusLaw(const FractionalParams& p);

  double pdf(double r) const;
  double cdf(double r) const;
  // Newton-Raphson from opts.r0 until |F(R) - u| < delta, with a bisection
  // fallback on [0, 1] when the iterate leaves (0, 1) or the cap is hit.
  InnerRadiusDraw invert(double u, const NewtonOptions& opts) const;

  const FractionalParams& params() const { return params_; }

 private:
  FractionalParams params_;
  double shape_shift_;  // d/2 - alpha/2
  double shape_full_;   // d/2
  double shape_alpha_;  // alpha/2
  double beta_ratio_;   // B(d/2 - alpha/2, alpha/2) / B(d/2, alpha/2)
};

double inner_radius_pdf(double r, const FractionalParams& p);
double inner_radius_cdf(double r, const FractionalParams& p);
double sample_inner_radius(const FractionalParams& p, double r0, double delta, RngStream& rng);

// ---- vector samples ----

void sample_unit_direction(int d, DirectionMode mode, RngStream& rng, std::span<double> out);
std::vector<double> sample_unit_direction(int d, DirectionMode mode, RngStream& rng);

// Y = R w with R = max(1 + sample_exit_radius_excess, 1 + 8 eps); |Y| > 1.
void sample_exit_point(const FractionalParams& p, DirectionMode mode, RngStream& rng,
                       std::span<double> out);
std::vector<double> sample_exit_point(const FractionalParams& p, DirectionMode mode, RngStream& rng);

// v = R w with R drawn from the inner radial law; |v| < 1.
void sample_inner_point(const InnerRadiusLaw& law, DirectionMode mode, const NewtonOptions& opts,
                        RngStream& rng, std::span<double> out);
std::vector<double> sample_inner_point(const FractionalParams& p, DirectionMode mode, RngStream& rng,
                                       const NewtonOptions& opts = {});

}  // namespace fwos
