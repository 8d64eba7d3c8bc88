#include "fracwos/estimator.hpp"

#include <cmath>
#include <exception>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "fracwos/errors.hpp"
#include "fracwos/io.hpp"
#include "fracwos/parallel.hpp"
#include "fracwos/specfun.hpp"

namespace fwos {

namespace {

std::string describe_point(std::span<const double> x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

double checked(double value, const char* what, std::span<const double> at) {
  if (!std::isfinite(value)) {
    throw DataError(std::string(what) + " is not finite at " + describe_point(at));
  }
  return value;
}

PointEstimate summarize(const std::vector<double>& values, const std::vector<std::size_t>& steps) {
  const auto m = values.size();
  PointEstimate est;
  est.paths = m;
  double sum = 0.0;
  double step_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sum += values[i];
    step_sum += static_cast<double>(steps[i]);
  }
  est.mean = sum / static_cast<double>(m);
  est.mean_steps = step_sum / static_cast<double>(m);
  if (m > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.std_error = std::sqrt(ss / static_cast<double>(m - 1) / static_cast<double>(m));
  }
  return est;
}

void check_config(const EstimatorConfig& cfg) {
  if (cfg.paths < 1) throw ConfigError("Monte Carlo path count M must be >= 1");
  if (cfg.inner_samples < 1) throw ConfigError("inner sample count K must be >= 1");
  if (!(cfg.nr_delta > 0.0 && cfg.nr_delta < 1.0)) throw ConfigError("Newton tolerance must lie in (0, 1)");
  if (!(cfg.nr_r0 > 0.0 && cfg.nr_r0 < 1.0)) throw ConfigError("Newton start point must lie in (0, 1)");
}

}  // namespace

double kappa(const FractionalParams& p) {
  using specfun::ln_gamma;
  const double a = p.alpha();
  const double half_d = 0.5 * p.d();
  return std::exp((1.0 - a) * std::numbers::ln2 - std::log(a) + ln_gamma(half_d) - ln_gamma(0.5 * a) -
                  ln_gamma(half_d + 0.5 * a));
}

EstimatorContext::EstimatorContext(const ProblemSpec& prob, const FractionalParams& p,
                                   const EstimatorConfig& cfg)
    : prob_(prob), params_(p), cfg_(cfg), kappa_(fwos::kappa(p)), inner_law_(p) {
  check_config(cfg);
  if (!prob_.domain || prob_.domain->dim() != p.d()) {
    throw ConfigError("problem domain dimension does not match d");
  }
  newton_.delta = cfg.nr_delta;
  newton_.r0 = cfg.nr_r0;
}

PathSample path_estimate(const EstimatorContext& ctx, std::span<const double> x, RngStream& rng,
                         PathScratch& scratch) {
  const auto& p = ctx.params();
  const auto& cfg = ctx.config();
  const auto& prob = ctx.problem();
  const auto ud = static_cast<std::size_t>(p.d());
  simulate_wos_path_into(scratch.path, *prob.domain, x, p, cfg.mode, rng, cfg.step_cap);
  const WosPath& path = scratch.path;

  scratch.v.resize(ud);
  scratch.y.resize(ud);
  if (cfg.strict_paper) sample_inner_point(ctx.inner_law(), cfg.mode, ctx.newton(), rng, scratch.v);

  const std::size_t n_steps = path.exit_step();
  double running = 0.0;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const auto center = path.point(n - 1);
    const double r = path.radii[n - 1];
    double f_mean = 0.0;
    const std::size_t draws = cfg.strict_paper ? 1 : cfg.inner_samples;
    for (std::size_t j = 0; j < draws; ++j) {
      if (!cfg.strict_paper) sample_inner_point(ctx.inner_law(), cfg.mode, ctx.newton(), rng, scratch.v);
      for (std::size_t i = 0; i < ud; ++i) scratch.y[i] = center[i] + r * scratch.v[i];
      f_mean += checked(prob.source(scratch.y), "source f", scratch.y);
    }
    f_mean /= static_cast<double>(draws);
    running += ctx.kappa() * std::pow(r, p.alpha()) * f_mean;
  }
  const double boundary = checked(prob.boundary(path.exit_point()), "boundary g", path.exit_point());
  return {boundary + running, n_steps};
}

PointEstimate estimate_u_stats_serial(std::span<const double> x, const EstimatorContext& ctx,
                                      std::uint64_t seed, std::uint64_t point_index) {
  const auto& prob = ctx.problem();
  if (!prob.domain->contains(x)) return {checked(prob.boundary(x), "boundary g", x), 0.0, 0.0, 0};
  const std::size_t m = ctx.config().paths;
  std::vector<double> values(m);
  std::vector<std::size_t> steps(m);
  PathScratch scratch;
  for (std::size_t i = 0; i < m; ++i) {
    RngStream rng(seed, path_stream_id(point_index, i));
    const auto s = path_estimate(ctx, x, rng, scratch);
    values[i] = s.value;
    steps[i] = s.steps;
  }
  return summarize(values, steps);
}

PointEstimate estimate_u_stats(std::span<const double> x, const EstimatorContext& ctx, std::uint64_t seed,
                               std::uint64_t point_index) {
  const auto& prob = ctx.problem();
  if (!prob.domain->contains(x)) return {checked(prob.boundary(x), "boundary g", x), 0.0, 0.0, 0};
  const std::size_t m = ctx.config().paths;
  std::vector<double> values(m);
  std::vector<std::size_t> steps(m);
  ErrorSlot errors;
#pragma omp parallel
  {
    PathScratch scratch;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i) {
      errors.run([&] {
        const auto idx = static_cast<std::size_t>(i);
        RngStream rng(seed, path_stream_id(point_index, idx));
        const auto s = path_estimate(ctx, x, rng, scratch);
        values[idx] = s.value;
        steps[idx] = s.steps;
      });
    }
  }
  errors.rethrow();
  return summarize(values, steps);
}

double estimate_u(std::span<const double> x, const ProblemSpec& prob, const FractionalParams& p,
                  const EstimatorConfig& cfg, std::uint64_t seed, std::uint64_t point_index) {
  const EstimatorContext ctx(prob, p, cfg);
  return estimate_u_stats(x, ctx, seed, point_index).mean;
}

std::vector<double> sample_ball_point(int d, double radius, RngStream& rng) {
  const double r = radius * std::pow(rng.uniform(), 1.0 / d);
  auto w = sample_unit_direction(d, DirectionMode::Isotropic, rng);
  for (auto& c : w) c *= r;
  return w;
}

namespace {

TrainingSet prepare_set(const ProblemSpec& prob, const FractionalParams& p, std::size_t count,
                        double sampling_radius, std::uint64_t seed) {
  if (!(sampling_radius >= prob.domain->circumradius())) {
    throw ConfigError("sampling radius must cover the domain");
  }
  TrainingSet ts;
  ts.d = p.d();
  ts.points.reserve(count * static_cast<std::size_t>(p.d()));
  ts.values.assign(count, 0.0);
  for (std::size_t k = 0; k < count; ++k) {
    RngStream rng(seed, location_stream_id(k));
    const auto x = sample_ball_point(p.d(), sampling_radius, rng);
    ts.points.insert(ts.points.end(), x.begin(), x.end());
  }
  return ts;
}

}  // namespace

TrainingSet generate_training_set_serial(const ProblemSpec& prob, const FractionalParams& p,
                                         std::size_t count, const EstimatorConfig& cfg,
                                         double sampling_radius, std::uint64_t seed) {
  const EstimatorContext ctx(prob, p, cfg);
  TrainingSet ts = prepare_set(prob, p, count, sampling_radius, seed);
  for (std::size_t k = 0; k < count; ++k) ts.values[k] = estimate_u_stats_serial(ts.point(k), ctx, seed, k).mean;
  return ts;
}

TrainingSet generate_training_set(const ProblemSpec& prob, const FractionalParams& p, std::size_t count,
                                  const EstimatorConfig& cfg, double sampling_radius, std::uint64_t seed) {
  const EstimatorContext ctx(prob, p, cfg);
  TrainingSet ts = prepare_set(prob, p, count, sampling_radius, seed);
  ErrorSlot errors;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(count); ++k) {
    errors.run([&] {
      const auto idx = static_cast<std::size_t>(k);
      ts.values[idx] = estimate_u_stats_serial(ts.point(idx), ctx, seed, idx).mean;
    });
  }
  errors.rethrow();
  return ts;
}

void write_training_set_csv(std::ostream& os, const TrainingSet& ts, const std::string& comment) {
  if (!comment.empty()) os << comment << '\n';
  for (int i = 1; i <= ts.d; ++i) os << "x_" << i << ',';
  os << "u_hat\n";
  for (std::size_t k = 0; k < ts.size(); ++k) {
    for (double v : ts.point(k)) os << io::format_double(v) << ',';
    os << io::format_double(ts.values[k]) << '\n';
  }
}

TrainingSet read_training_set_csv(std::istream& is) {
  TrainingSet ts;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = io::split_csv_line(line);
    if (!have_header) {
      if (fields.size() < 2 || fields.back() != "u_hat") {
        throw DataError("training set line " + std::to_string(line_no) + ": expected header x_1,...,x_d,u_hat");
      }
      ts.d = static_cast<int>(fields.size() - 1);
      have_header = true;
      continue;
    }
    if (fields.size() != static_cast<std::size_t>(ts.d) + 1) {
      throw DataError("training set line " + std::to_string(line_no) + ": expected " +
                      std::to_string(ts.d + 1) + " fields, got " + std::to_string(fields.size()));
    }
    try {
      for (int i = 0; i < ts.d; ++i) ts.points.push_back(io::parse_double(fields[static_cast<std::size_t>(i)]));
      ts.values.push_back(io::parse_double(fields.back()));
    } catch (const DataError& e) {
      throw DataError("training set line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw DataError("training set is missing its header row");
  return ts;
}

}  // namespace fwos
