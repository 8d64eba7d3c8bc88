// fracwos: Walk-on-Spheres solver and neural surrogate for the fractional
// Dirichlet problem.
//
//   fracwos sample   --dim 2 --alpha 1 --out runs/s
//   fracwos dataset  --preset ex1-d2 --alpha 1.9 --out runs/a
//   fracwos train    --preset ex1-d2 --alpha 1.9 --out runs/a
//   fracwos evaluate --preset ex1-d2 --alpha 1.9 --out runs/a
//   fracwos sweep    --example 1 --dim 2 --sweep-paths 10,100 --sweep-points 10,100
//
// Exit codes: 0 success, 1 configuration or input error, 2 numerical error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "fracwos/app.hpp"
#include "fracwos/errors.hpp"

namespace {

using fwos::app::RunConfig;

// Presets and manifests seed the defaults; explicit flags parsed afterwards win.
RunConfig initial_config(int argc, char** argv) {
  RunConfig cfg;
  for (int i = 1; i + 1 < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--manifest") {
      std::ifstream is(argv[i + 1]);
      if (!is) throw fwos::ConfigError(std::string("cannot open manifest '") + argv[i + 1] + "'");
      nlohmann::json j;
      try {
        is >> j;
      } catch (const nlohmann::json::exception& e) {
        throw fwos::ConfigError(std::string("manifest is not valid JSON: ") + e.what());
      }
      cfg = fwos::app::config_from_json(j.contains("config") ? j.at("config") : j);
    }
  }
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--preset") cfg = fwos::app::preset(argv[i + 1]);
  }
  return cfg;
}

int run_cli(int argc, char** argv) {
  RunConfig cfg = initial_config(argc, argv);

  CLI::App app{"Walk-on-Spheres Monte Carlo and ReLU surrogates for the fractional Laplacian"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string preset_name = cfg.preset;
  std::string manifest_path;
  std::string direction(fwos::to_string(cfg.direction));
  std::string out = cfg.out.string();
  std::string dataset;
  std::string checkpoint;

  app.add_option("--preset", preset_name, "Parameter preset (ex1-d2, ex1-d5, ex1-d15, ex2-d2, ex2-d5, ex3-d2, ex4-d2)");
  app.add_option("--manifest", manifest_path, "Load the configuration recorded in a manifest JSON");
  app.add_option("--example", cfg.example, "Benchmark problem 1-4")->check(CLI::Range(1, 4));
  app.add_option("--dim", cfg.d, "Spatial dimension d >= 2");
  app.add_option("--alpha", cfg.alpha, "Stability index in (0, 2)");
  app.add_option("--paths", cfg.paths, "Monte Carlo paths per point (M)");
  app.add_option("--points", cfg.points, "Training points (P)");
  app.add_option("--batch", cfg.batch, "Minibatch size (L)");
  app.add_option("--iters", cfg.iters, "SGD iterations (N_iter)");
  app.add_option("--lr", cfg.lr, "Adam learning rate (gamma)");
  app.add_option("--seed", cfg.seed, "Master seed");
  app.add_option("--delta", cfg.delta, "Newton-Raphson tolerance for the inner radius");
  app.add_option("--direction", direction, "Direction sampler")->check(CLI::IsMember({"isotropic", "paper-angles"}));
  app.add_flag("--radial-loss,!--no-radial-loss", cfg.radial_loss, "Use the loss with the radial symmetry term");
  app.add_flag("--strict-paper", cfg.strict_paper, "Reuse one inner sample per path across all steps");
  app.add_option("--inner-samples", cfg.inner_samples, "Inner samples per walk step (K)");
  app.add_option("--hidden-layers", cfg.hidden_layers, "Hidden layers (H)");
  app.add_option("--width", cfg.width, "Hidden layer width");
  app.add_option("--sampling-radius", cfg.sampling_radius, "Training points are uniform in this ball");
  app.add_option("--samples", cfg.samples, "sample: draws per radial law");
  app.add_option("--eval-points", cfg.eval_points, "evaluate: number of metric points");
  app.add_option("--eval-radius", cfg.eval_radius, "evaluate: metric points are uniform in this ball");
  app.add_option("--profile-points", cfg.profile_points, "evaluate: points on the diagonal profile");
  app.add_option("--grid", cfg.grid, "evaluate: surface grid resolution per axis");
  app.add_option("--sweep-paths", cfg.sweep_paths, "sweep: list of M values")->delimiter(',');
  app.add_option("--sweep-points", cfg.sweep_points, "sweep: list of P values")->delimiter(',');
  app.add_option("--sweep-alphas", cfg.sweep_alphas, "sweep: list of alpha values")->delimiter(',');
  app.add_option("--out", out, "Output directory");
  app.add_option("--dataset", dataset, "train: dataset CSV (default OUT/dataset.csv)");
  app.add_option("--checkpoint", checkpoint, "evaluate: checkpoint JSON (default OUT/checkpoint.json)");

  for (const char* name : {"sample", "dataset", "train", "evaluate", "sweep"}) {
    app.add_subcommand(name)->callback([&cfg, name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  cfg.preset = preset_name;
  cfg.direction = fwos::parse_direction_mode(direction);
  cfg.out = out;
  cfg.dataset = dataset;
  cfg.checkpoint = checkpoint;
  fwos::app::run(cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const fwos::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const fwos::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const fwos::DomainError& e) {
    std::cerr << "range error: " << e.what() << '\n';
    return 1;
  } catch (const fwos::DataError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
