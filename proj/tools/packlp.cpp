#include <cstring>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "packlp/cli.hpp"
#include "packlp/error.hpp"

using packlp::cli::RunConfig;

namespace {

// The config file is read before the flags so that flags override it.
std::string config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
  }
  return {};
}

void geometry_options(CLI::App* s, RunConfig& c) {
  s->add_option("-g,--geometry", c.geometry, "euclidean | hyperbolic | sphere | heisenberg");
  s->add_option("-n,--n,--dimension", c.n, "dimension (Heisenberg: H^n has real dimension 2n+1)");
  s->add_option("--measure-scale", c.measure_scale, "constant multiplying the Riemannian measure");
}

void range_options(CLI::App* s, RunConfig& c) {
  s->add_option("--from", c.from);
  s->add_option("--to", c.to);
  s->add_option("--step", c.step);
  s->add_option("--csv", c.csv, "also write the grid as CSV");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    packlp::cli::apply_thread_limit();
    if (const auto path = config_path(argc, argv); !path.empty())
      cfg = packlp::cli::config_from_json(packlp::io::read_file(path));
  } catch (const packlp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return packlp::cli::kUsage;
  }

  CLI::App app{"LP upper bounds on sphere-packing density"};
  app.require_subcommand(1);
  std::string config_file;
  bool dump = false;
  app.add_option("--config", config_file, "JSON run configuration (flags override it)");
  app.add_flag("--dump-config", dump, "print the effective configuration and exit");

  auto* bound = app.add_subcommand("bound", "solve the witness LP and certify the result");
  geometry_options(bound, cfg);
  bound->add_option("-r,--radius", cfg.radius, "packing radius");
  bound->add_option("--family,--basis", cfg.family, "hat | gauss_poly | sphere_harmonic | heis_gauss_poly");
  bound->add_option("-d,--degree", cfg.degree);
  bound->add_option("--budget", cfg.budget, "refinement rounds");
  bound->add_option("--seed", cfg.seed, "seed of the random re-check");
  bound->add_option("--random-points", cfg.random_points);
  bound->add_option("--w2-tolerance", cfg.w2_tolerance);
  bound->add_option("--random-tolerance", cfg.random_tolerance);
  bound->add_option("--spectral-spacing", cfg.spectral_spacing);
  bound->add_option("--max-lambda,--spectral-max", cfg.max_lambda);
  bound->add_option("--spatial-spacing", cfg.spatial_spacing);
  bound->add_option("-o,--output,--out", cfg.output, "certificate path (default cert.json)");

  auto* certify = app.add_subcommand("certify", "re-run the checks of a stored certificate");
  certify->add_option("input", cfg.input, "certificate file");
  certify->add_option("-o,--output", cfg.output, "write the fresh verdict here");

  auto* transform = app.add_subcommand("transform", "spherical transform of a radial function on a grid");
  geometry_options(transform, cfg);
  transform->add_option("-i,--input", cfg.input, "function file (default: a Gaussian)");
  transform->add_option("--gauss-scale", cfg.gauss_scale);
  range_options(transform, cfg);

  auto* abel = app.add_subcommand("abel", "Abel transform or its inverse on hyperbolic space");
  geometry_options(abel, cfg);
  abel->add_option("--direction", cfg.direction, "forward | inverse");
  abel->add_option("-i,--input", cfg.input, "function file (default: a Gaussian)");
  abel->add_option("--gauss-scale", cfg.gauss_scale);
  range_options(abel, cfg);

  auto* density = app.add_subcommand("density", "center density of a lattice packing");
  density->add_option("lattice,--lattice", cfg.lattice, "A2 | D4 | E8 | Z:n | file.json");

  auto* kissing = app.add_subcommand("kissing", "Delsarte bound for spherical codes");
  kissing->add_option("-n,--n,--dimension", cfg.n, "sphere S^n");
  kissing->add_option("--theta", cfg.theta, "minimal angle (radians)");
  kissing->add_option("-d,--degree", cfg.degree);

  auto* selftest = app.add_subcommand("selftest", "quick per-module checks");
  selftest->add_option("target", cfg.target, "module name or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? packlp::cli::kOk : packlp::cli::kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  if (dump) {
    std::cout << packlp::cli::to_json(cfg).dump(2) << '\n';
    return packlp::cli::kOk;
  }
  return packlp::cli::run(cfg, std::cout, std::cerr);
}
