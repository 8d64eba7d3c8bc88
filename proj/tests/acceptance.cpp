// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fracwos/estimator.hpp"
#include "fracwos/evaluate.hpp"
#include "fracwos/nn.hpp"
#include "fracwos/problems.hpp"
#include "fracwos/sampler.hpp"
#include "fracwos/specfun.hpp"
#include "fracwos/stats.hpp"
#include "fracwos/wos.hpp"

using fwos::DirectionMode;
using fwos::FractionalParams;
using fwos::RngStream;

namespace {

const int kDims[] = {2, 5, 15};
const double kAlphas[] = {0.1, 0.5, 1.0, 1.5, 1.9};
const double kKsAlphas[] = {0.5, 1.0, 1.5, 1.9};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

Outcome zero_variance() {
  double worst = 0.0;
  for (int d : kDims) {
    for (double alpha : kAlphas) {
      const FractionalParams p(d, alpha);
      fwos::EstimatorConfig cfg;
      const fwos::EstimatorContext ctx(fwos::example1(p), p, cfg);
      const std::vector<double> x0(static_cast<std::size_t>(d), 0.0);
      fwos::PathScratch scratch;
      for (std::uint64_t i = 0; i < 1000; ++i) {
        RngStream rng(1, fwos::path_stream_id(0, i));
        worst = std::max(worst, std::fabs(fwos::path_estimate(ctx, x0, rng, scratch).value - 1.0));
      }
    }
  }
  return {worst <= 1e-10, "max |estimate - 1| = " + fmt(worst) + " over 15000 paths (tol 1e-10)"};
}

std::vector<double> norms(const std::function<std::vector<double>()>& draw, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& r : out) {
    const auto v = draw();
    double s = 0.0;
    for (double c : v) s += c * c;
    r = std::sqrt(s);
  }
  return out;
}

Outcome sampler_fit() {
  constexpr int n = 100000;
  double worst = 0.0;
  for (int d : {2, 5}) {
    for (double alpha : kKsAlphas) {
      const FractionalParams p(d, alpha);
      // The statistic is invariant under r -> r - 1; only the offset form
      // resolves the mass packed within one ulp of r = 1 near alpha = 2.
      RngStream exit_rng(2, static_cast<std::uint64_t>(d * 100 + alpha * 10));
      std::vector<double> exit_s(n);
      for (auto& s : exit_s) s = fwos::sample_exit_radius_excess(p, exit_rng);
      worst = std::max(worst, fwos::stats::ks_distance(exit_s, [&](double s) {
        return s > 0.0 ? fwos::exit_radius_excess_cdf(s, p) : 0.0;
      }));
      const fwos::InnerRadiusLaw law(p);
      const fwos::NewtonOptions opts;
      RngStream inner_rng(3, static_cast<std::uint64_t>(d * 100 + alpha * 10));
      std::vector<double> v(static_cast<std::size_t>(d));
      const auto inner_r = norms(
          [&] {
            fwos::sample_inner_point(law, DirectionMode::Isotropic, opts, inner_rng, v);
            return v;
          },
          n);
      worst = std::max(worst, fwos::stats::ks_distance(inner_r, [&](double r) { return law.cdf(std::min(r, 1.0)); }));
    }
  }
  return {worst < 0.01, "max KS distance = " + fmt(worst) + " over 16 laws of 1e5 draws (tol 0.01)"};
}

Outcome roundtrips() {
  double worst_exit = 0.0;
  double worst_beta = 0.0;
  for (double alpha : kAlphas) {
    const FractionalParams p(2, alpha);
    std::vector<fwos::specfun::BetaPair> shapes{{1.0 - alpha / 2, alpha / 2}};
    for (int d : {2, 5}) shapes.push_back({d / 2.0 - alpha / 2, alpha / 2});
    for (int k = 1; k <= 99; ++k) {
      const double u = k / 100.0;
      const double s = fwos::exit_radius_excess_inverse_cdf(u, p);
      worst_exit = std::max(worst_exit, std::fabs(fwos::exit_radius_excess_cdf(s, p) - u));
      for (auto shape : shapes) {
        // Smaller parameter first: I(x; a, b) = 1 - I(1 - x; b, a).
        const fwos::specfun::BetaPair q{std::min(shape.a, shape.b), std::max(shape.a, shape.b)};
        const double x = fwos::specfun::inv_reg_inc_beta(u, q);
        worst_beta = std::max(worst_beta, std::fabs(fwos::specfun::reg_inc_beta(x, q) - u));
      }
    }
  }
  return {worst_exit <= 1e-9 && worst_beta <= 1e-9,
          "max error exit radius " + fmt(worst_exit) + ", incomplete beta " + fmt(worst_beta) + " (tol 1e-9)"};
}

double kappa_by_quadrature(int d, double alpha) {
  namespace bm = boost::math;
  using std::numbers::pi;
  const double hd = 0.5 * d;
  const double ha = 0.5 * alpha;
  const double c = std::pow(2.0, -alpha) * std::pow(pi, -hd) * bm::tgamma(hd) / (bm::tgamma(ha) * bm::tgamma(ha));
  const double sphere = 2.0 * std::pow(pi, hd) / bm::tgamma(hd);
  bm::quadrature::tanh_sinh<double> integrator;
  // s = r^alpha removes the r^{alpha-1} endpoint singularity.
  auto integrand = [&](double s) {
    const double r = std::pow(s, 1.0 / alpha);
    return r < 1.0 ? bm::ibetac(hd - ha, ha, r * r) / alpha : 0.0;
  };
  return c * sphere * bm::beta(hd - ha, ha) * integrator.integrate(integrand, 0.0, 1.0);
}

Outcome kappa_oracle() {
  double worst = 0.0;
  for (int d : kDims) {
    for (double alpha : kAlphas) {
      worst = std::max(worst, std::fabs(fwos::kappa(FractionalParams(d, alpha)) / kappa_by_quadrature(d, alpha) - 1.0));
    }
  }
  return {worst <= 1e-8, "max relative error = " + fmt(worst) + " over 15 (d, alpha) (tol 1e-8)"};
}

Outcome mc_consistency() {
  const FractionalParams p(2, 1.0);
  const std::vector<std::vector<double>> xs{{0.3, 0.0}, {-0.2, 0.5}, {0.6, -0.3}, {0.1, 0.8}, {-0.7, -0.4}};
  fwos::EstimatorConfig cfg;
  cfg.paths = 10000;
  int within = 0;
  double worst_z = 0.0;
  for (int id : {1, 2, 4}) {
    const auto prob = fwos::make_example(id, p);
    const fwos::EstimatorContext ctx(prob, p, cfg);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const auto est = fwos::estimate_u_stats(xs[k], ctx, 5, k);
      const double z = std::fabs(est.mean - (*prob.exact)(xs[k])) / est.std_error;
      worst_z = std::max(worst_z, z);
      within += z <= 3.0;
    }
  }
  return {within >= 13, std::to_string(within) + "/15 estimates within 3 standard errors (need 13), max z = " +
                            fmt(worst_z)};
}

Outcome step_monotonicity() {
  const fwos::Ball ball = fwos::Ball::unit(2);
  const std::vector<double> x0{0.5, 0.0};
  auto stats = [&](double alpha) {
    const FractionalParams p(2, alpha);
    constexpr int paths = 10000;
    double sum = 0.0;
    double sum2 = 0.0;
    fwos::WosPath path;
    for (int i = 0; i < paths; ++i) {
      RngStream rng(6, fwos::path_stream_id(0, static_cast<std::uint64_t>(i)));
      fwos::simulate_wos_path_into(path, ball, x0, p, DirectionMode::Isotropic, rng);
      const double n = static_cast<double>(path.exit_step());
      sum += n;
      sum2 += n * n;
    }
    const double mean = sum / paths;
    return std::pair{mean, (sum2 / paths - mean * mean) / (paths - 1)};
  };
  const auto [low, var_low] = stats(0.5);
  const auto [high, var_high] = stats(1.9);
  const double sigma = std::sqrt(var_low + var_high);
  const double sep = (high - low) / sigma;
  return {sep > 3.0, "mean N " + fmt(low) + " (alpha 0.5) vs " + fmt(high) + " (alpha 1.9), separation " + fmt(sep) +
                         " sigma (need > 3)"};
}

double fd_error(std::uint64_t seed, fwos::nn::LossKind kind) {
  namespace nn = fwos::nn;
  RngStream rng(seed, 0);
  auto m = nn::init_mlp(2, rng, 2, 4);
  for (auto& b : m.biases) {
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = rng.uniform(-0.5, 0.5);
  }
  nn::Batch batch;
  batch.x.resize(2, 16);
  batch.u.resize(16);
  for (int j = 0; j < 16; ++j) {
    batch.x(0, j) = rng.uniform(-1.5, 1.5);
    batch.x(1, j) = rng.uniform(-1.5, 1.5);
    batch.u(j) = rng.uniform(-1.0, 1.0);
  }
  const auto g = nn::gradient(m, batch, kind).grad;
  const double h = 1e-5;
  double worst = 0.0;
  auto check = [&](double& w, double analytic) {
    const double saved = w;
    w = saved + h;
    const double up = nn::loss(m, batch, kind);
    w = saved - h;
    const double down = nn::loss(m, batch, kind);
    w = saved;
    const double fd = (up - down) / (2 * h);
    worst = std::max(worst, std::fabs(analytic - fd) / std::max({std::fabs(analytic), std::fabs(fd), 1e-4}));
  };
  for (std::size_t k = 0; k < m.layers(); ++k) {
    for (Eigen::Index i = 0; i < m.weights[k].size(); ++i) check(m.weights[k].data()[i], g.weights[k].data()[i]);
    for (Eigen::Index i = 0; i < m.biases[k].size(); ++i) check(m.biases[k].data()[i], g.biases[k].data()[i]);
  }
  return worst;
}

Outcome gradient_check() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    worst = std::max({worst, fd_error(seed, fwos::nn::LossKind::Mse), fd_error(seed, fwos::nn::LossKind::Radial)});
  }
  return {worst <= 1e-4, "max relative error = " + fmt(worst) + " over 5 seeds x 2 losses (tol 1e-4)"};
}

// Training budget shared by the end-to-end criteria.
constexpr std::size_t kPoints = 2000;
constexpr std::size_t kPaths = 100;
constexpr std::uint64_t kSeed = 1;

fwos::TrainingSet dataset(const fwos::ProblemSpec& prob, const FractionalParams& p) {
  fwos::EstimatorConfig cfg;
  cfg.paths = kPaths;
  return fwos::generate_training_set(prob, p, kPoints, cfg, fwos::kDefaultSamplingRadius, kSeed);
}

fwos::nn::MlpModel fit(const fwos::TrainingSet& ts, bool radial) {
  fwos::nn::TrainConfig cfg;
  cfg.iterations = 1000;
  cfg.batch_size = 400;
  cfg.learning_rate = 5e-3;
  cfg.radial_loss = radial;
  cfg.seed = kSeed;
  return fwos::nn::train(ts, cfg).model;
}

double asymmetry(const fwos::nn::MlpModel& m) {
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 25; ++j) {
      const std::vector<double> x{-1.0 + 2.0 * i / 39.0, -1.0 + 2.0 * j / 24.0};
      const std::vector<double> mx{-x[0], -x[1]};
      worst = std::max(worst, std::fabs(fwos::nn::realize(m, x) - fwos::nn::realize(m, mx)));
    }
  }
  return worst;
}

struct Example1Models {
  fwos::nn::MlpModel radial;
  fwos::nn::MlpModel mse;
  fwos::ProblemSpec prob;
};

const Example1Models& example1_models() {
  static const Example1Models models = [] {
    const FractionalParams p(2, 1.9);
    auto prob = fwos::example1(p);
    const auto ts = dataset(prob, p);
    return Example1Models{fit(ts, true), fit(ts, false), prob};
  }();
  return models;
}

Outcome end_to_end() {
  const auto& m = example1_models();
  const auto rep = fwos::evaluate_model(m.radial, m.prob, 5000, 1.0, kSeed);
  return {rep.mse <= 1e-2, "example 1, d=2, alpha=1.9: MSE = " + fmt(rep.mse) + ", MRE = " + fmt(rep.mre) +
                               " (need MSE <= 1e-2)"};
}

Outcome radial_benefit() {
  const auto& m = example1_models();
  const double radial = asymmetry(m.radial);
  const double plain = asymmetry(m.mse);
  return {radial <= plain, "max |R(x) - R(-x)| radial " + fmt(radial) + " vs mse " + fmt(plain)};
}

Outcome counterexample() {
  double mse[2];
  const double alphas[2] = {0.5, 1.9};
  for (int i = 0; i < 2; ++i) {
    const FractionalParams p(2, alphas[i]);
    const auto prob = fwos::example4(p);
    // The solution is odd, so the even-symmetry loss term does not apply.
    const auto model = fit(dataset(prob, p), false);
    mse[i] = fwos::evaluate_model(model, prob, 5000, 1.0, kSeed).mse;
  }
  return {mse[0] > mse[1], "example 4, d=2: MSE " + fmt(mse[0]) + " (alpha 0.5) vs " + fmt(mse[1]) + " (alpha 1.9)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"zero-variance identity", zero_variance},
      {"sampler goodness of fit", sampler_fit},
      {"inverse-CDF roundtrips", roundtrips},
      {"kappa quadrature oracle", kappa_oracle},
      {"Monte Carlo consistency", mc_consistency},
      {"step-count monotonicity", step_monotonicity},
      {"gradient correctness", gradient_check},
      {"end-to-end training", end_to_end},
      {"radial-loss benefit", radial_benefit},
      {"small-alpha counterexample", counterexample},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !out.pass;
    std::printf("%s %2zu %s: %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
