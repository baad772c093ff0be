// dephaselab: reproduce the data behind the dephasing-equivalence figures.
//
//   dephaselab run --config <path> [--out <path>]
//   dephaselab figure <fig3|fig4|fig5|fig6|fig7> [--r v] [--c v] [--d v] [--g v]
//                     [--t-max v] [--points n] --out <path>
//   dephaselab check-equivalence --config <path> [--out <path>]
//   dephaselab blp --config <path> [--out <path>]
//
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 invariant
// violation detected during the run (the CSV is still written).

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dephaselab/error.hpp"
#include "dephaselab/workbench.hpp"

namespace {

using dephaselab::Dataset;
using dephaselab::Error;
using dephaselab::ErrorCode;
using dephaselab::ExperimentConfig;
using dephaselab::Figure;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInvariant = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::OutOfDomain:
    case ErrorCode::BadUnitVector:
    case ErrorCode::NormExceeded:
    case ErrorCode::CouplingMismatch:
      return kExitConfig;
    case ErrorCode::IoError:
      return 1;
    default:
      return kExitNumerical;
  }
}

int emit(const Dataset& ds, const std::string& out) {
  if (out.empty() || out == "-") {
    dephaselab::write_csv(ds, std::cout);
  } else {
    dephaselab::emit_csv(ds, out);
  }
  for (const std::string& v : ds.violations) std::cerr << "invariant violation: " << v << '\n';
  return ds.violations.empty() ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized pure-dephasing equivalence and information-flow workbench"};
  app.set_version_flag("--version", std::string(dephaselab::kToolVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config_path, "JSON config")->required();
  run->add_option("--out", out_path, "CSV output path (stdout if omitted)");

  std::string figure_name;
  double r = 0.4, c = 0.0, d = 0.0, g = 1.0, t_max = 0.0;
  int points = 0;
  auto* figure = app.add_subcommand("figure", "Emit the data of a figure preset");
  figure->add_option("name", figure_name, "fig3, fig4, fig5, fig6 or fig7")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6", "fig7"}));
  figure->add_option("--r", r, "psi_minus_r parameter");
  figure->add_option("--c", c, "reference environment polarization");
  figure->add_option("--d", d, "free component of the partner coupling direction");
  figure->add_option("--g", g, "coupling constant");
  auto* t_max_opt = figure->add_option("--t-max", t_max, "upper end of the time axis");
  auto* points_opt = figure->add_option("--points", points, "samples on the time axis");
  figure->add_option("--out", out_path, "CSV output path")->required();

  auto* equiv = app.add_subcommand("check-equivalence", "Decide local indistinguishability");
  equiv->add_option("--config", config_path, "JSON config")->required();
  equiv->add_option("--out", out_path, "optional CSV of dephasing factors");

  auto* blp = app.add_subcommand("blp", "Discretized BLP non-Markovianity measure");
  blp->add_option("--config", config_path, "JSON config")->required();
  blp->add_option("--out", out_path, "CSV output path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return emit(dephaselab::run_experiment(dephaselab::load_config(config_path)), out_path);
    }
    if (*figure) {
      ExperimentConfig cfg;
      cfg.figure = *dephaselab::parse_figure(figure_name);
      cfg.c = c;
      cfg.d = d;
      cfg.g = g;
      cfg.r = r;
      cfg.second.r = r;
      cfg.t_max = t_max;
      cfg.points = points;
      cfg.t_max_set = t_max_opt->count() > 0;
      cfg.points_set = points_opt->count() > 0;
      dephaselab::finalize_config(cfg);
      return emit(dephaselab::run_experiment(cfg), out_path);
    }
    if (*equiv) {
      ExperimentConfig cfg = dephaselab::load_config(config_path);
      cfg.figure = Figure::Equivalence;
      dephaselab::finalize_config(cfg);
      const Dataset ds = dephaselab::run_experiment(cfg);
      for (const auto& [key, value] : ds.metadata) {
        if (key.rfind("verdict.", 0) == 0) std::cout << key.substr(8) << ": " << value << '\n';
      }
      if (!out_path.empty()) dephaselab::emit_csv(ds, out_path);
      return ds.violations.empty() ? 0 : kExitInvariant;
    }
    if (*blp) {
      ExperimentConfig cfg = dephaselab::load_config(config_path);
      cfg.figure = Figure::Blp;
      dephaselab::finalize_config(cfg);
      return emit(dephaselab::run_experiment(cfg), out_path);
    }
  } catch (const Error& e) {
    std::cerr << "dephaselab: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "dephaselab: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
