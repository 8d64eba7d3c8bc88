#include "fracwos/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "fracwos/checkpoint.hpp"
#include "fracwos/errors.hpp"
#include "fracwos/estimator.hpp"
#include "fracwos/evaluate.hpp"
#include "fracwos/io.hpp"
#include "fracwos/nn.hpp"
#include "fracwos/problems.hpp"
#include "fracwos/stats.hpp"

namespace fwos::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSampleExitStream = kReservedStreamBase + 10;
constexpr std::uint64_t kSampleInnerStream = kReservedStreamBase + 11;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open '" + path.string() + "' for reading");
  return is;
}

std::string slurp(const fs::path& path) {
  auto is = open_input(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void finish(std::ofstream& os, const fs::path& path) {
  os.flush();
  if (!os) throw ConfigError("write failed for '" + path.string() + "'");
}

std::string file_hash(const fs::path& path) { return io::hex64(io::fnv1a64(slurp(path))); }

void write_manifest(const RunConfig& cfg, const fs::path& path, double elapsed,
                    const std::vector<fs::path>& artifacts) {
  json j;
  j["command"] = cfg.command;
  j["config"] = config_json(cfg);
  j["manifest_hash"] = manifest_hash(cfg);
  j["elapsed_seconds"] = elapsed;
  json files = json::object();
  for (const auto& a : artifacts) files[a.filename().string()] = file_hash(a);
  j["artifacts"] = files;
  auto os = open_output(path);
  os << j.dump(2) << '\n';
  finish(os, path);
}

EstimatorConfig estimator_config(const RunConfig& cfg) {
  EstimatorConfig ec;
  ec.paths = cfg.paths;
  ec.inner_samples = cfg.inner_samples;
  ec.mode = cfg.direction;
  ec.nr_delta = cfg.delta;
  ec.strict_paper = cfg.strict_paper;
  return ec;
}

nn::TrainConfig train_config(const RunConfig& cfg, std::size_t batch) {
  nn::TrainConfig tc;
  tc.iterations = cfg.iters;
  tc.batch_size = batch;
  tc.learning_rate = cfg.lr;
  tc.radial_loss = cfg.radial_loss;
  tc.seed = cfg.seed;
  tc.hidden_layers = cfg.hidden_layers;
  tc.width = cfg.width;
  return tc;
}

fs::path dataset_path(const RunConfig& cfg) { return cfg.dataset.empty() ? cfg.out / "dataset.csv" : cfg.dataset; }

fs::path checkpoint_path(const RunConfig& cfg) {
  return cfg.checkpoint.empty() ? cfg.out / "checkpoint.json" : cfg.checkpoint;
}

template <class T>
T meta_or(const json& meta, const char* key, T fallback) {
  return meta.contains(key) ? meta.at(key).get<T>() : fallback;
}

}  // namespace

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.preset = name;
  c.iters = 1000;
  c.lr = 5e-3;
  if (name == "ex1-d2" || name == "ex1-d5" || name == "ex1-d15") {
    c.example = 1;
    c.d = name == "ex1-d2" ? 2 : (name == "ex1-d5" ? 5 : 15);
    c.paths = 100;
    c.points = 2000;
    c.batch = 400;
    c.radial_loss = true;
    if (c.d == 15) c.lr = 5e-4;
  } else if (name == "ex2-d2" || name == "ex2-d5") {
    c.example = 2;
    c.d = name == "ex2-d2" ? 2 : 5;
    c.paths = 500;
    c.points = 1000;
    c.batch = 200;
    c.radial_loss = true;
  } else if (name == "ex3-d2") {
    c.example = 3;
    c.d = 2;
    c.paths = 300;
    c.points = 1000;
    c.batch = 200;
  } else if (name == "ex4-d2") {
    c.example = 4;
    c.d = 2;
    c.paths = 100;
    c.points = 2000;
    c.batch = 400;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

std::vector<std::string> preset_names() {
  return {"ex1-d2", "ex1-d5", "ex1-d15", "ex2-d2", "ex2-d5", "ex3-d2", "ex4-d2"};
}

void validate(const RunConfig& cfg) {
  if (cfg.example < 1 || cfg.example > 4) throw ConfigError("--example must be 1, 2, 3 or 4");
  FractionalParams p(cfg.d, cfg.alpha);  // range checks on d and alpha
  for (double a : cfg.sweep_alphas) FractionalParams(cfg.d, a);
  if (cfg.paths < 1) throw ConfigError("--paths (M) must be >= 1");
  if (cfg.batch < 1) throw ConfigError("--batch (L) must be >= 1");
  if (!(cfg.lr > 0.0 && cfg.lr < 1.0)) throw ConfigError("--lr must lie in (0, 1)");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ConfigError("--delta must lie in (0, 1)");
  if (cfg.inner_samples < 1) throw ConfigError("inner samples K must be >= 1");
  if (!(cfg.sampling_radius >= 1.0)) throw ConfigError("sampling radius must cover the unit ball");
  if (!(cfg.eval_radius > 0.0)) throw ConfigError("evaluation radius must be positive");
  if (cfg.hidden_layers < 0 || cfg.width < 1) throw ConfigError("invalid network layout");
}

json config_json(const RunConfig& cfg) {
  return json{{"command", cfg.command},
              {"preset", cfg.preset},
              {"example", cfg.example},
              {"d", cfg.d},
              {"alpha", cfg.alpha},
              {"M", cfg.paths},
              {"P", cfg.points},
              {"L", cfg.batch},
              {"n_iter", cfg.iters},
              {"gamma", cfg.lr},
              {"seed", cfg.seed},
              {"direction", std::string(to_string(cfg.direction))},
              {"nr_delta", cfg.delta},
              {"radial_loss", cfg.radial_loss},
              {"strict_paper", cfg.strict_paper},
              {"inner_samples", cfg.inner_samples},
              {"hidden_layers", cfg.hidden_layers},
              {"width", cfg.width},
              {"sampling_radius", cfg.sampling_radius},
              {"samples", cfg.samples},
              {"eval_points", cfg.eval_points},
              {"eval_radius", cfg.eval_radius},
              {"profile_points", cfg.profile_points},
              {"grid", cfg.grid},
              {"sweep_paths", cfg.sweep_paths},
              {"sweep_points", cfg.sweep_points},
              {"sweep_alphas", cfg.sweep_alphas}};
}

std::string manifest_hash(const RunConfig& cfg) { return io::hex64(io::fnv1a64(config_json(cfg).dump())); }

RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    auto get = [&j](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("command", c.command);
    get("preset", c.preset);
    get("example", c.example);
    get("d", c.d);
    get("alpha", c.alpha);
    get("M", c.paths);
    get("P", c.points);
    get("L", c.batch);
    get("n_iter", c.iters);
    get("gamma", c.lr);
    get("seed", c.seed);
    if (j.contains("direction")) c.direction = parse_direction_mode(j.at("direction").get<std::string>());
    get("nr_delta", c.delta);
    get("radial_loss", c.radial_loss);
    get("strict_paper", c.strict_paper);
    get("inner_samples", c.inner_samples);
    get("hidden_layers", c.hidden_layers);
    get("width", c.width);
    get("sampling_radius", c.sampling_radius);
    get("samples", c.samples);
    get("eval_points", c.eval_points);
    get("eval_radius", c.eval_radius);
    get("profile_points", c.profile_points);
    get("grid", c.grid);
    get("sweep_paths", c.sweep_paths);
    get("sweep_points", c.sweep_points);
    get("sweep_alphas", c.sweep_alphas);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  return c;
}

void cmd_sample(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.samples < 1) throw ConfigError("--samples must be >= 1");
  const FractionalParams p(cfg.d, cfg.alpha);
  const std::string header = io::manifest_comment(manifest_hash(cfg));

  // Exit radii are kept as s = R - 1: near alpha = 2 much of the mass lies
  // within one ulp of R = 1, where a KS test on R itself cannot resolve F.
  std::vector<double> exit_s(cfg.samples);
  std::vector<double> inner_r(cfg.samples);
  {
    RngStream rng(cfg.seed, kSampleExitStream);
    for (auto& s : exit_s) s = sample_exit_radius_excess(p, rng);
  }
  const InnerRadiusLaw law(p);
  {
    RngStream rng(cfg.seed, kSampleInnerStream);
    NewtonOptions opts;
    opts.delta = cfg.delta;
    for (auto& r : inner_r) r = law.invert(rng.uniform(), opts).r;
  }

  const fs::path samples_path = cfg.out / "samples.csv";
  auto os = open_output(samples_path);
  os << header << "\nindex,exit_radius,exit_radius_minus_1,inner_radius\n";
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    os << i << ',' << io::format_double(1.0 + exit_s[i]) << ',' << io::format_double(exit_s[i]) << ','
       << io::format_double(inner_r[i]) << '\n';
  }
  finish(os, samples_path);

  const double ks_exit = stats::ks_distance(exit_s, [&](double s) { return s > 0.0 ? exit_radius_excess_cdf(s, p) : 0.0; });
  const double ks_inner = stats::ks_distance(inner_r, [&](double r) { return law.cdf(std::clamp(r, 0.0, 1.0)); });
  const double crit = stats::ks_critical_value(cfg.samples);

  const fs::path ks_path = cfg.out / "ks_report.csv";
  auto ks = open_output(ks_path);
  ks << header << "\nlaw,d,alpha,n,ks_distance,critical_1pct\n";
  ks << "exit_radius," << cfg.d << ',' << io::format_double(cfg.alpha) << ',' << cfg.samples << ','
     << io::format_double(ks_exit) << ',' << io::format_double(crit) << '\n';
  ks << "inner_radius," << cfg.d << ',' << io::format_double(cfg.alpha) << ',' << cfg.samples << ','
     << io::format_double(ks_inner) << ',' << io::format_double(crit) << '\n';
  finish(ks, ks_path);
}

void cmd_dataset(const RunConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  const FractionalParams p(cfg.d, cfg.alpha);
  const auto prob = make_example(cfg.example, p);
  const auto ts = generate_training_set(prob, p, cfg.points, estimator_config(cfg), cfg.sampling_radius, cfg.seed);
  const double elapsed = seconds_since(t0);

  const fs::path path = dataset_path(cfg);
  auto os = open_output(path);
  write_training_set_csv(os, ts, io::manifest_comment(manifest_hash(cfg)));
  finish(os, path);
  write_manifest(cfg, cfg.out / "manifest.json", elapsed, {path});
}

void cmd_train(const RunConfig& cfg) {
  validate(cfg);
  const fs::path data = dataset_path(cfg);
  auto is = open_input(data);
  const TrainingSet ts = read_training_set_csv(is);
  if (ts.d != cfg.d) {
    throw ConfigError("dataset '" + data.string() + "' has dimension " + std::to_string(ts.d) + ", --dim is " +
                      std::to_string(cfg.d));
  }
  if (cfg.batch > ts.size()) throw ConfigError("--batch (L) exceeds the dataset size P");

  const auto t0 = Clock::now();
  const auto result = nn::train(ts, train_config(cfg, cfg.batch));
  const double elapsed = seconds_since(t0);
  const std::string hash = manifest_hash(cfg);

  nn::Checkpoint cp;
  cp.model = result.model;
  const double final_loss = result.loss_trace.empty() ? nn::loss(result.model, nn::make_batch(ts),
                                                                 cfg.radial_loss ? nn::LossKind::Radial
                                                                                 : nn::LossKind::Mse)
                                                      : result.loss_trace.back();
  cp.meta = json{{"d", cfg.d},
                 {"alpha", cfg.alpha},
                 {"example", cfg.example},
                 {"seed", cfg.seed},
                 {"n_iter", cfg.iters},
                 {"loss", final_loss},
                 {"M", cfg.paths},
                 {"P", ts.size()},
                 {"L", cfg.batch},
                 {"gamma", cfg.lr},
                 {"radial_loss", cfg.radial_loss},
                 {"manifest", hash},
                 {"dataset_hash", file_hash(data)},
                 {"elapsed_seconds", elapsed}};
  const fs::path cp_path = checkpoint_path(cfg);
  auto os = open_output(cp_path);
  nn::save_checkpoint(os, cp);
  finish(os, cp_path);

  const fs::path trace_path = cfg.out / "loss_trace.csv";
  auto tr = open_output(trace_path);
  tr << io::manifest_comment(hash) << "\niteration,loss\n";
  for (std::size_t i = 0; i < result.loss_trace.size(); ++i) {
    tr << i + 1 << ',' << io::format_double(result.loss_trace[i]) << '\n';
  }
  finish(tr, trace_path);
}

void cmd_evaluate(const RunConfig& cfg) {
  validate(cfg);
  const fs::path cp_path = checkpoint_path(cfg);
  auto is = open_input(cp_path);
  const nn::Checkpoint cp = nn::load_checkpoint(is);
  const json& meta = cp.meta;
  if (cp.model.input_dim() != cfg.d || meta_or<int>(meta, "d", cfg.d) != cfg.d) {
    throw ConfigError("checkpoint was trained for d=" + std::to_string(cp.model.input_dim()) + ", --dim is " +
                      std::to_string(cfg.d));
  }
  if (meta_or<int>(meta, "example", cfg.example) != cfg.example) {
    throw ConfigError("checkpoint belongs to example " + std::to_string(meta.at("example").get<int>()));
  }
  if (meta_or<double>(meta, "alpha", cfg.alpha) != cfg.alpha) {
    throw ConfigError("checkpoint was trained for alpha=" + io::format_double(meta.at("alpha").get<double>()));
  }

  const FractionalParams p(cfg.d, cfg.alpha);
  const auto prob = make_example(cfg.example, p);
  const auto rep = evaluate_model(cp.model, prob, cfg.eval_points, cfg.eval_radius, cfg.seed);
  const std::string header = io::manifest_comment(manifest_hash(cfg));

  const fs::path metrics_path = cfg.out / "metrics.csv";
  auto mo = open_output(metrics_path);
  mo << header << "\nexample,d,alpha,M,P,L,n_iter,gamma,mse,mre,n_excluded,elapsed_seconds\n";
  mo << cfg.example << ',' << cfg.d << ',' << io::format_double(cfg.alpha) << ','
     << meta_or<std::size_t>(meta, "M", cfg.paths) << ',' << meta_or<std::size_t>(meta, "P", cfg.points) << ','
     << meta_or<std::size_t>(meta, "L", cfg.batch) << ',' << meta_or<std::size_t>(meta, "n_iter", cfg.iters) << ','
     << io::format_double(meta_or<double>(meta, "gamma", cfg.lr)) << ',' << io::format_double(rep.mse) << ','
     << io::format_double(rep.mre) << ',' << rep.n_excluded << ','
     << io::format_double(meta_or<double>(meta, "elapsed_seconds", 0.0)) << '\n';
  finish(mo, metrics_path);

  // Diagonal x_1 = ... = x_d = t on [0, 1/sqrt(d) + 0.1].
  const fs::path profile_path = cfg.out / "profile.csv";
  auto po = open_output(profile_path);
  po << header << "\nt,model,exact\n";
  const double t_max = 1.0 / std::sqrt(static_cast<double>(cfg.d)) + 0.1;
  const std::size_t np = std::max<std::size_t>(cfg.profile_points, 2);
  std::vector<double> x(static_cast<std::size_t>(cfg.d));
  for (std::size_t i = 0; i < np; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(np - 1);
    std::fill(x.begin(), x.end(), t);
    po << io::format_double(t) << ',' << io::format_double(nn::realize(cp.model, x)) << ','
       << io::format_double((*prob.exact)(x)) << '\n';
  }
  finish(po, profile_path);

  // Slice x_1 = ... = x_{d-1} = a, x_d = b over [-1, 1]^2.
  const fs::path surface_path = cfg.out / "surface.csv";
  auto so = open_output(surface_path);
  so << header << "\na,b,model,exact\n";
  const std::size_t g = std::max<std::size_t>(cfg.grid, 2);
  for (std::size_t i = 0; i < g; ++i) {
    const double a = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(g - 1);
    for (std::size_t j = 0; j < g; ++j) {
      const double b = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(g - 1);
      std::fill(x.begin(), x.end() - 1, a);
      x.back() = b;
      so << io::format_double(a) << ',' << io::format_double(b) << ','
         << io::format_double(nn::realize(cp.model, x)) << ',' << io::format_double((*prob.exact)(x)) << '\n';
    }
  }
  finish(so, surface_path);
}

void cmd_sweep(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.sweep_paths.empty() || cfg.sweep_points.empty() || cfg.sweep_alphas.empty()) {
    throw ConfigError("sweep needs non-empty M, P and alpha lists");
  }
  struct Cell {
    double seconds = 0.0;
    MetricReport rep;
    std::string status = "ok";
  };
  std::map<std::tuple<double, std::size_t, std::size_t>, Cell> cells;

  for (double alpha : cfg.sweep_alphas) {
    const FractionalParams p(cfg.d, alpha);
    const auto prob = make_example(cfg.example, p);
    for (std::size_t m : cfg.sweep_paths) {
      for (std::size_t pts : cfg.sweep_points) {
        Cell cell;
        const auto t0 = Clock::now();
        try {
          RunConfig c = cfg;
          c.alpha = alpha;
          c.paths = m;
          c.points = pts;
          const auto ts = generate_training_set(prob, p, pts, estimator_config(c), c.sampling_radius, c.seed);
          const auto result = nn::train(ts, train_config(c, std::min(c.batch, pts)));
          cell.rep = evaluate_model(result.model, prob, c.eval_points, c.eval_radius, c.seed);
        } catch (const std::exception& e) {
          cell.status = std::string("error: ") + e.what();
          std::replace(cell.status.begin(), cell.status.end(), ',', ';');
          std::replace(cell.status.begin(), cell.status.end(), '\n', ' ');
        }
        cell.seconds = seconds_since(t0);
        std::cerr << "sweep alpha=" << alpha << " M=" << m << " P=" << pts << " " << cell.status
                  << " mse=" << cell.rep.mse << " (" << cell.seconds << " s)\n";
        cells[{alpha, m, pts}] = cell;
      }
    }
  }

  const std::string header = io::manifest_comment(manifest_hash(cfg));
  const fs::path timing_path = cfg.out / "timing.csv";
  auto to = open_output(timing_path);
  to << header << "\nalpha,M";
  for (std::size_t pts : cfg.sweep_points) to << ",P=" << pts;
  to << '\n';
  for (double alpha : cfg.sweep_alphas) {
    for (std::size_t m : cfg.sweep_paths) {
      to << io::format_double(alpha) << ',' << m;
      for (std::size_t pts : cfg.sweep_points) to << ',' << io::format_double(cells.at({alpha, m, pts}).seconds);
      to << '\n';
    }
  }
  finish(to, timing_path);

  const fs::path errors_path = cfg.out / "errors.csv";
  auto eo = open_output(errors_path);
  eo << header << "\nP,M,alpha,mse,mre,n_excluded,status\n";
  for (std::size_t pts : cfg.sweep_points) {
    for (std::size_t m : cfg.sweep_paths) {
      for (double alpha : cfg.sweep_alphas) {
        const Cell& c = cells.at({alpha, m, pts});
        eo << pts << ',' << m << ',' << io::format_double(alpha) << ',' << io::format_double(c.rep.mse) << ','
           << io::format_double(c.rep.mre) << ',' << c.rep.n_excluded << ',' << c.status << '\n';
      }
    }
  }
  finish(eo, errors_path);
}

void run(const RunConfig& cfg) {
  if (cfg.command == "sample") return cmd_sample(cfg);
  if (cfg.command == "dataset") return cmd_dataset(cfg);
  if (cfg.command == "train") return cmd_train(cfg);
  if (cfg.command == "evaluate") return cmd_evaluate(cfg);
  if (cfg.command == "sweep") return cmd_sweep(cfg);
  throw ConfigError("unknown subcommand '" + cfg.command + "'");
}

}  // namespace fwos::app
