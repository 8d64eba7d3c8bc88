#pragma once

// Scalar special functions: log-gamma, beta, and the regularized incomplete
// beta function with its inverse. All functions are pure and thread-safe.

namespace fwos::specfun {

struct BetaPair {
  double a;
  double b;
};

struct Tolerances {
  // Relative stopping threshold of the incomplete-beta continued fraction.
  double cf_eps = 1e-16;
  int cf_max_iter = 20000;
  // Residual target for the inverse, scaled by min(1, u, 1-u) so that the
  // tails are resolved in relative terms.
  double inverse_abs = 1e-13;
  int inverse_max_iter = 300;
};

const Tolerances& default_tolerances();

double ln_gamma(double x);

double beta(BetaPair p);
double ln_beta(BetaPair p);

double reg_inc_beta(double x, BetaPair p, const Tolerances& tol = default_tolerances());

// When the root lies above 1/2 the solve runs on 1-x through
// I(1-x; b, a) = 1-u, so the result is exact up to the spacing of doubles near 1.
double inv_reg_inc_beta(double u, BetaPair p, const Tolerances& tol = default_tolerances());

}  // namespace fwos::specfun
