#pragma once

// Experiment configuration, orchestration and CSV emission for the
// dephaselab command line tool.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dephaselab/dephasing.hpp"
#include "dephaselab/equivalence.hpp"
#include "dephaselab/infoflow.hpp"

namespace dephaselab {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class Figure { Fig3, Fig4, Fig5, Fig6, Fig7, Equivalence, Blp };

std::string_view to_string(Figure figure);
std::optional<Figure> parse_figure(std::string_view name);

/// A model given directly by its operators.
struct GeneralModelSpec {
  ComplexMatrix env_hamiltonian;
  std::vector<ComplexMatrix> couplings;
  ComplexMatrix env_state;
};

using ModelSpec = std::variant<QubitModelParams, GeneralModelSpec>;

DephasingModel build_model(const ModelSpec& spec);
std::string describe(const ModelSpec& spec);

/// Named initial system state: "psi_plus", "psi_minus" or "psi_minus_r".
struct StatePreset {
  std::string name = "psi_plus";
  double r = 0.4;
};

DensityMatrix build_state(const StatePreset& preset);
std::string describe(const StatePreset& preset);

struct ExperimentConfig {
  Figure figure = Figure::Fig3;
  double c = 0.0;
  double d = 0.0;
  double g = 1.0;
  double r = 0.4;
  ModelSpec model_a;
  ModelSpec model_b;
  StatePreset first{"psi_plus", 0.4};
  StatePreset second{"psi_minus_r", 0.4};
  double t_max = 0.0;   // time (or s) range upper end
  int points = 0;       // samples on [0, t_max]
  double t_fixed = 0.0; // the later time t of Delta_S(t, s) in fig5/fig6
  int r_points = 50;    // fig5 samples of r on [0, 1]
  double tol = kDefaultEquivalenceTol;
  int blp_theta = 6;
  int blp_phi = 12;
  bool models_from_presets = true;
  bool t_max_set = false;   // t_max given explicitly, else derived per figure
  bool points_set = false;  // points given explicitly, else derived per figure
};

/// Preset for a figure with every default applied; c, d, g, r are the
/// shared knobs of the reference model and its partner.
ExperimentConfig default_config(Figure figure, double c = 0.0, double d = 0.0, double g = 1.0,
                                double r = 0.4);

/// Fills derived defaults (models from c, d, g; grids) and checks every
/// invariant. Throws ValidationError listing all violations.
void finalize_config(ExperimentConfig& config);

/// Parses a JSON key/value document. Throws ParseError (with line or field)
/// or ValidationError.
ExperimentConfig load_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

struct Dataset {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // Invariant violations detected while producing the rows.
  std::vector<std::string> violations;
};

Dataset run_experiment(const ExperimentConfig& config);

/// Decimal rendering with 17 significant digits (printf "%.17g" style).
std::string format_number(double value);

/// `#key=value` header, column row, numeric rows; LF endings.
void write_csv(const Dataset& dataset, std::ostream& out);

/// Throws IoError for an empty dataset or an unwritable path.
void emit_csv(const Dataset& dataset, const std::string& path);

}  // namespace dephaselab
