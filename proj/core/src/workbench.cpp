#include "dephaselab/workbench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dephaselab/correlate.hpp"
#include "dephaselab/error.hpp"

namespace dephaselab {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;
constexpr int kPointsPerPeriod = 400;
constexpr double kBoundSlack = 1e-9;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[k] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  return out;
}

// ---- JSON helpers ---------------------------------------------------------

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ParseError, "field '" + field + "': " + what);
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) field_error(field, "expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) field_error(field, "expected a string");
  return j.get<std::string>();
}

BlochVector get_vector3(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) field_error(field, "expected an array of 3 numbers");
  return {get_number(j[0], field + "[0]"), get_number(j[1], field + "[1]"),
          get_number(j[2], field + "[2]")};
}

Complex get_complex(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  field_error(field, "expected a number or [re, im]");
}

ComplexMatrix get_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) field_error(field, "expected a non-empty array of rows");
  const std::size_t n = j.size();
  ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != n) field_error(row_field, "row length must match rows");
    for (std::size_t k = 0; k < n; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          get_complex(j[i][k], row_field + "[" + std::to_string(k) + "]");
    }
  }
  return m;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where,
                    std::vector<std::string>& problems) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) problems.push_back("unknown key '" + where + key + "'");
  }
}

ModelSpec parse_model(const json& j, const std::string& field, std::vector<std::string>& problems) {
  if (!j.is_object()) field_error(field, "expected an object");
  if (j.contains("couplings")) {
    reject_unknown(j, {"env_hamiltonian", "couplings", "env_state"}, field + ".", problems);
    GeneralModelSpec spec;
    if (!j.contains("env_state")) field_error(field + ".env_state", "missing");
    spec.env_state = get_matrix(j.at("env_state"), field + ".env_state");
    spec.env_hamiltonian = j.contains("env_hamiltonian")
                               ? get_matrix(j.at("env_hamiltonian"), field + ".env_hamiltonian")
                               : ComplexMatrix::Zero(spec.env_state.rows(), spec.env_state.cols());
    const json& list = j.at("couplings");
    if (!list.is_array() || list.empty()) field_error(field + ".couplings", "expected a non-empty array");
    for (std::size_t n = 0; n < list.size(); ++n) {
      spec.couplings.push_back(get_matrix(list[n], field + ".couplings[" + std::to_string(n) + "]"));
    }
    return spec;
  }
  reject_unknown(j, {"alpha", "eta", "g"}, field + ".", problems);
  QubitModelParams p;
  if (j.contains("alpha")) p.alpha = get_vector3(j.at("alpha"), field + ".alpha");
  if (j.contains("eta")) p.eta = get_vector3(j.at("eta"), field + ".eta");
  if (j.contains("g")) p.g = get_number(j.at("g"), field + ".g");
  return p;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += sep;
    out += parts[k];
  }
  return out;
}

std::string vec3(const BlochVector& v) {
  return "(" + format_number(v.x()) + " " + format_number(v.y()) + " " + format_number(v.z()) + ")";
}

int model_system_dim(const ModelSpec& spec) {
  if (const auto* g = std::get_if<GeneralModelSpec>(&spec)) {
    return static_cast<int>(g->couplings.size());
  }
  return 2;
}

// ---- figure runners ---------------------------------------------------------

void add_common_metadata(const ExperimentConfig& cfg, Dataset& ds) {
  ds.metadata = {
      {"tool", "dephaselab"},
      {"version", std::string(kToolVersion)},
      {"figure", std::string(to_string(cfg.figure))},
      {"c", format_number(cfg.c)},
      {"d", format_number(cfg.d)},
      {"g", format_number(cfg.g)},
      {"r", format_number(cfg.r)},
      {"t_max", format_number(cfg.t_max)},
      {"points", std::to_string(cfg.points)},
      {"t_fixed", format_number(cfg.t_fixed)},
      {"r_points", std::to_string(cfg.r_points)},
      {"tol", format_number(cfg.tol)},
      {"model_a", describe(cfg.model_a)},
      {"model_b", describe(cfg.model_b)},
      {"state_1", describe(cfg.first)},
      {"state_2", describe(cfg.second)},
      {"coupling_note", "g defaults to 1; times are in units of 1/g"},
      {"picture_note",
       "interaction picture w.r.t. H_S + H_E; both models share the same H_S"},
  };
}

void check_unit_interval(double value, const std::string& what, Dataset& ds) {
  if (value < -kBoundSlack || value > 1.0 + kBoundSlack) {
    ds.violations.push_back(what + " = " + format_number(value) + " outside [0, 1]");
  }
}

void run_fig3(const ExperimentConfig& cfg, const DephasingModel& a, const DephasingModel& b,
              Dataset& ds) {
  ds.columns = {"t", "concurrence_model_a", "concurrence_model_b"};
  const DensityMatrix rho = build_state(cfg.first);
  for (double t : linspace(0.0, cfg.t_max, cfg.points)) {
    const double ca = concurrence(global_state(a, rho, t));
    const double cb = concurrence(global_state(b, rho, t));
    check_unit_interval(ca, "concurrence_model_a", ds);
    check_unit_interval(cb, "concurrence_model_b", ds);
    ds.rows.push_back({t, ca, cb});
  }
}

void run_fig4(const ExperimentConfig& cfg, const DephasingModel& a, const DephasingModel& b,
              Dataset& ds) {
  ds.columns = {"t", "D_global", "D_env"};
  const DensityMatrix rho = build_state(cfg.first);
  for (double t : linspace(0.0, cfg.t_max, cfg.points)) {
    const DensityMatrix ga = global_state(a, rho, t);
    const DensityMatrix gb = global_state(b, rho, t);
    const double d_global = trace_distance(ga, gb);
    const double d_env = trace_distance(ga.marginal(1), gb.marginal(1));
    if (d_env > d_global + kBoundSlack) {
      ds.violations.push_back("contractivity D_env <= D_global fails at t = " + format_number(t));
    }
    ds.rows.push_back({t, d_global, d_env});
  }
}

struct BoundSample {
  double delta_a;
  double delta_b;
  IseTerms terms_a;
  IseTerms terms_b;
};

// Delta_S(t_fixed, s) and I_SE(s) for both models over the s grid.
std::vector<BoundSample> bound_samples(const DephasingModel& a, const DephasingModel& b,
                                       const StatePair& pair, double t_fixed,
                                       const std::vector<Propagation>& pa,
                                       const std::vector<Propagation>& pb) {
  const auto distance = [&pair](const DephasingModel& m, const Propagation& p) {
    return trace_distance(reduced_state(m, pair.first, p), reduced_state(m, pair.second, p));
  };
  const double dta = distance(a, propagate(a, t_fixed));
  const double dtb = distance(b, propagate(b, t_fixed));
  std::vector<BoundSample> out;
  out.reserve(pa.size());
  for (std::size_t k = 0; k < pa.size(); ++k) {
    BoundSample s;
    const DensityMatrix a1 = global_state(a, pair.first, pa[k]);
    const DensityMatrix a2 = global_state(a, pair.second, pa[k]);
    const DensityMatrix b1 = global_state(b, pair.first, pb[k]);
    const DensityMatrix b2 = global_state(b, pair.second, pb[k]);
    s.delta_a = dta - trace_distance(a1.marginal(0), a2.marginal(0));
    s.delta_b = dtb - trace_distance(b1.marginal(0), b2.marginal(0));
    const auto terms = [](const DensityMatrix& g1, const DensityMatrix& g2) {
      IseTerms t;
      t.env_term = trace_distance(g1.marginal(1), g2.marginal(1));
      t.corr_first = total_correlations(g1);
      t.corr_second = total_correlations(g2);
      t.total = t.env_term + t.corr_first + t.corr_second;
      return t;
    };
    s.terms_a = terms(a1, a2);
    s.terms_b = terms(b1, b2);
    out.push_back(s);
  }
  return out;
}

void check_bound(const BoundSample& s, double at_s, double at_r, Dataset& ds) {
  if (s.delta_a > s.terms_a.total + kBoundSlack || s.delta_b > s.terms_b.total + kBoundSlack) {
    ds.violations.push_back("Delta_S exceeds I_SE at s = " + format_number(at_s) +
                            ", r = " + format_number(at_r));
  }
}

std::vector<Propagation> propagations(const DephasingModel& m, const std::vector<double>& times) {
  std::vector<Propagation> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(propagate(m, t));
  return out;
}

void run_fig5(const ExperimentConfig& cfg, const DephasingModel& a, const DephasingModel& b,
              Dataset& ds) {
  ds.columns = {"r", "s", "delta_S", "I_SE_model_a", "I_SE_model_b"};
  const std::vector<double> s_grid = linspace(0.0, cfg.t_max, cfg.points);
  const auto pa = propagations(a, s_grid);
  const auto pb = propagations(b, s_grid);
  const DensityMatrix first = build_state(cfg.first);
  for (double r : linspace(0.0, 1.0, cfg.r_points)) {
    const StatePair pair{first, psi_minus_r(r), "psi_minus_r"};
    const auto samples = bound_samples(a, b, pair, cfg.t_fixed, pa, pb);
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
      check_bound(samples[k], s_grid[k], r, ds);
      ds.rows.push_back({r, s_grid[k], samples[k].delta_a, samples[k].terms_a.total,
                         samples[k].terms_b.total});
    }
  }
}

void run_fig6(const ExperimentConfig& cfg, const DephasingModel& a, const DephasingModel& b,
              Dataset& ds) {
  ds.columns = {"s", "delta_S", "I_SE_model_a", "I_SE_model_b"};
  const std::vector<double> s_grid = linspace(0.0, cfg.t_max, cfg.points);
  const StatePair pair{build_state(cfg.first), build_state(cfg.second), "pair"};
  const auto samples =
      bound_samples(a, b, pair, cfg.t_fixed, propagations(a, s_grid), propagations(b, s_grid));
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    check_bound(samples[k], s_grid[k], cfg.second.r, ds);
    gap = std::min(gap, samples[k].terms_a.total - samples[k].delta_a);
    ds.rows.push_back(
        {s_grid[k], samples[k].delta_a, samples[k].terms_a.total, samples[k].terms_b.total});
  }
  ds.metadata.emplace_back("min_gap_model_a", format_number(gap));
}

void run_fig7(const ExperimentConfig& cfg, const DephasingModel& a, const DephasingModel& b,
              Dataset& ds) {
  ds.columns = {"s",           "t_minus_s",     "delta_S_model_a", "delta_S_model_b",
                "env_term_model_a", "corr_1_model_a", "corr_2_model_a", "env_term_model_b",
                "corr_1_model_b",   "corr_2_model_b"};
  const StatePair pair{build_state(cfg.first), build_state(cfg.second), "pair"};
  const std::vector<double> grid = linspace(0.0, cfg.t_max, cfg.points);
  const InfoFlowReport ra = info_flow_report(a, pair, grid);
  const InfoFlowReport rb = info_flow_report(b, pair, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = grid[i];
    for (double tau : grid) {
      const double t = s + tau;
      const double da = system_distance(a, pair, t) - ra.D_S[i];
      const double db = system_distance(b, pair, t) - rb.D_S[i];
      if (da > ra.I_SE[i] + kBoundSlack || db > rb.I_SE[i] + kBoundSlack) {
        ds.violations.push_back("Delta_S exceeds I_SE at s = " + format_number(s) +
                                ", t = " + format_number(t));
      }
      ds.rows.push_back({s, tau, da, db, ra.env_term[i], ra.corr_term_1[i], ra.corr_term_2[i],
                         rb.env_term[i], rb.corr_term_1[i], rb.corr_term_2[i]});
    }
  }
}

void run_equivalence(const ExperimentConfig& cfg, const DephasingModel& a, const DephasingModel& b,
                     Dataset& ds) {
  ds.columns = {"t", "factor_a_re", "factor_a_im", "factor_b_re", "factor_b_im", "discrepancy"};
  const std::vector<double> grid = linspace(0.0, cfg.t_max, cfg.points);
  const auto verdict_text = [](const EquivalenceVerdict& v) {
    std::string s = v.equivalent ? "equivalent" : "not-equivalent";
    s += " max_discrepancy=" + format_number(v.max_discrepancy);
    if (v.borderline) s += " borderline";
    if (v.witness) {
      if (v.witness->time) s += " witness_t=" + format_number(*v.witness->time);
      if (v.witness->power) s += " witness_k=" + std::to_string(*v.witness->power);
    }
    return s;
  };

  ds.metadata.emplace_back("verdict.time-domain",
                           verdict_text(time_domain_check(a, b, grid, cfg.tol)));
  try {
    const int de = std::max(a.env_dim(), b.env_dim());
    ds.metadata.emplace_back("verdict.moments",
                             verdict_text(moment_check(a, b, de * de - 1, cfg.tol)));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsupportedModel) throw;
    ds.metadata.emplace_back("verdict.moments", "not-applicable");
  }
  const auto* qa = std::get_if<QubitModelParams>(&cfg.model_a);
  const auto* qb = std::get_if<QubitModelParams>(&cfg.model_b);
  if (qa && qb) {
    try {
      ds.metadata.emplace_back("verdict.inner-product",
                               verdict_text(qubit_condition(*qa, *qb, cfg.tol)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CouplingMismatch) throw;
      ds.metadata.emplace_back("verdict.inner-product", "coupling-mismatch");
    }
  } else {
    ds.metadata.emplace_back("verdict.inner-product", "not-applicable");
  }

  for (double t : grid) {
    const ComplexMatrix fa = dephasing_functions(a, t).averaged();
    const ComplexMatrix fb = dephasing_functions(b, t).averaged();
    double gap = 0.0;
    for (Eigen::Index n = 1; n < fa.rows(); ++n)
      for (Eigen::Index m = 0; m < n; ++m) gap = std::max(gap, std::abs(fa(n, m) - fb(n, m)));
    ds.rows.push_back({t, fa(1, 0).real(), fa(1, 0).imag(), fb(1, 0).real(), fb(1, 0).imag(), gap});
  }
}

void run_blp(const ExperimentConfig& cfg, const DephasingModel& a, const DephasingModel& b,
             Dataset& ds) {
  ds.columns = {"pair_index", "measure_model_a", "measure_model_b"};
  std::vector<StatePair> candidates = {
      {build_state(cfg.first), build_state(cfg.second), "configured"}};
  for (StatePair& p : antipodal_pairs(cfg.blp_theta, cfg.blp_phi)) candidates.push_back(std::move(p));
  const std::vector<double> grid = linspace(0.0, cfg.t_max, cfg.points);

  double best_a = -1.0;
  double best_b = -1.0;
  std::size_t arg_a = 0;
  std::size_t arg_b = 0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double ma = blp_measure(a, {candidates[k]}, grid).measure;
    const double mb = blp_measure(b, {candidates[k]}, grid).measure;
    if (ma < 0.0 || mb < 0.0) ds.violations.push_back("negative BLP measure");
    if (ma > best_a) { best_a = ma; arg_a = k; }
    if (mb > best_b) { best_b = mb; arg_b = k; }
    ds.metadata.emplace_back("pair." + std::to_string(k), candidates[k].label);
    ds.rows.push_back({static_cast<double>(k), ma, mb});
  }
  ds.metadata.emplace_back("blp_model_a", format_number(best_a) + " pair=" + std::to_string(arg_a));
  ds.metadata.emplace_back("blp_model_b", format_number(best_b) + " pair=" + std::to_string(arg_b));
}

}  // namespace

std::string_view to_string(Figure figure) {
  switch (figure) {
    case Figure::Fig3: return "fig3";
    case Figure::Fig4: return "fig4";
    case Figure::Fig5: return "fig5";
    case Figure::Fig6: return "fig6";
    case Figure::Fig7: return "fig7";
    case Figure::Equivalence: return "equivalence";
    case Figure::Blp: return "blp";
  }
  return "unknown";
}

std::optional<Figure> parse_figure(std::string_view name) {
  for (Figure f : {Figure::Fig3, Figure::Fig4, Figure::Fig5, Figure::Fig6, Figure::Fig7,
                   Figure::Equivalence, Figure::Blp}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

DephasingModel build_model(const ModelSpec& spec) {
  if (const auto* q = std::get_if<QubitModelParams>(&spec)) return qubit_model(*q);
  const auto& g = std::get<GeneralModelSpec>(spec);
  return DephasingModel(g.env_hamiltonian, g.couplings, DensityMatrix(g.env_state));
}

std::string describe(const ModelSpec& spec) {
  if (const auto* q = std::get_if<QubitModelParams>(&spec)) {
    return "qubit alpha=" + vec3(q->alpha) + " eta=" + vec3(q->eta) + " g=" + format_number(q->g);
  }
  const auto& g = std::get<GeneralModelSpec>(spec);
  return "general d_S=" + std::to_string(g.couplings.size()) +
         " d_E=" + std::to_string(g.env_state.rows());
}

DensityMatrix build_state(const StatePreset& preset) {
  if (preset.name == "psi_plus") return psi_plus();
  if (preset.name == "psi_minus") return psi_minus();
  if (preset.name == "psi_minus_r") return psi_minus_r(preset.r);
  throw Error(ErrorCode::ValidationError, "unknown state preset '" + preset.name + "'");
}

std::string describe(const StatePreset& preset) {
  if (preset.name == "psi_minus_r") return "psi_minus_r(r=" + format_number(preset.r) + ")";
  return preset.name;
}

ExperimentConfig default_config(Figure figure, double c, double d, double g, double r) {
  ExperimentConfig cfg;
  cfg.figure = figure;
  cfg.c = c;
  cfg.d = d;
  cfg.g = g;
  cfg.r = r;
  cfg.second.r = r;
  finalize_config(cfg);
  return cfg;
}

void finalize_config(ExperimentConfig& cfg) {
  std::vector<std::string> problems;
  if (!std::isfinite(cfg.g) || !(cfg.g > 0.0)) problems.push_back("g must be > 0");
  if (!(std::abs(cfg.c) < 1.0)) problems.push_back("c must satisfy |c| < 1");
  if (!(cfg.c * cfg.c + cfg.d * cfg.d <= 1.0)) problems.push_back("c^2 + d^2 must be <= 1");
  if (!(cfg.r >= 0.0 && cfg.r <= 1.0)) problems.push_back("r must lie in [0, 1]");
  for (const StatePreset* p : {&cfg.first, &cfg.second}) {
    if (p->name != "psi_plus" && p->name != "psi_minus" && p->name != "psi_minus_r") {
      problems.push_back("unknown state preset '" + p->name + "'");
    }
    if (!(p->r >= 0.0 && p->r <= 1.0)) problems.push_back("state r must lie in [0, 1]");
  }
  if (cfg.r_points < 2) problems.push_back("r_points must be >= 2");
  if (cfg.blp_theta < 1 || cfg.blp_phi < 1) problems.push_back("blp grid must be >= 1x1");
  if (!(cfg.tol > 0.0)) problems.push_back("tol must be > 0");

  const double g = cfg.g > 0.0 ? cfg.g : 1.0;
  const double period = kPi / g;
  if (cfg.t_fixed <= 0.0) cfg.t_fixed = 0.5 * period;
  if (!cfg.t_max_set) {
    switch (cfg.figure) {
      case Figure::Fig3:
      case Figure::Fig4:
      case Figure::Blp: cfg.t_max = period; break;
      case Figure::Fig5:
      case Figure::Fig6: cfg.t_max = cfg.t_fixed; break;
      case Figure::Fig7: cfg.t_max = 0.5 * period; break;
      case Figure::Equivalence: cfg.t_max = 4.0 * period; break;
    }
  }
  if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) problems.push_back("t_max must be > 0");
  if ((cfg.figure == Figure::Fig5 || cfg.figure == Figure::Fig6) && cfg.t_max > cfg.t_fixed) {
    problems.push_back("t_max (range of s) must not exceed t_fixed");
  }
  if (!cfg.points_set) {
    switch (cfg.figure) {
      case Figure::Fig7: cfg.points = 50; break;
      case Figure::Equivalence: cfg.points = 200; break;
      default:
        cfg.points = static_cast<int>(std::lround(kPointsPerPeriod * cfg.t_max / period)) + 1;
    }
  }
  if (cfg.points < 2) problems.push_back("points must be >= 2");

  if (cfg.models_from_presets && problems.empty()) {
    cfg.model_a = reference_params(cfg.c, cfg.g);
    cfg.model_b = construct_partner(cfg.c, cfg.d, cfg.g);
  }
  if (model_system_dim(cfg.model_a) != model_system_dim(cfg.model_b)) {
    problems.push_back("model_a and model_b have different system dimensions");
  }
  if (cfg.figure != Figure::Equivalence && model_system_dim(cfg.model_a) != 2) {
    problems.push_back("figure experiments need a two-level system");
  }
  if (!problems.empty()) throw Error(ErrorCode::ValidationError, join(problems, "; "));
}

ExperimentConfig load_config(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object");

  std::vector<std::string> problems;
  reject_unknown(doc,
                 {"figure", "c", "d", "g", "r", "t_max", "points", "t_fixed", "r_points", "tol",
                  "model_a", "model_b", "pair", "blp"},
                 "", problems);

  ExperimentConfig cfg;
  if (!doc.contains("figure")) {
    problems.push_back("missing key 'figure'");
  } else {
    const std::string name = get_string(doc.at("figure"), "figure");
    if (auto f = parse_figure(name)) {
      cfg.figure = *f;
    } else {
      problems.push_back("unknown figure '" + name + "'");
    }
  }
  if (doc.contains("c")) cfg.c = get_number(doc.at("c"), "c");
  if (doc.contains("d")) cfg.d = get_number(doc.at("d"), "d");
  if (doc.contains("g")) cfg.g = get_number(doc.at("g"), "g");
  if (doc.contains("r")) cfg.r = get_number(doc.at("r"), "r");
  cfg.second.r = cfg.r;
  if (doc.contains("t_fixed")) cfg.t_fixed = get_number(doc.at("t_fixed"), "t_fixed");
  if (doc.contains("t_max")) cfg.t_max = get_number(doc.at("t_max"), "t_max");
  if (doc.contains("points")) cfg.points = get_int(doc.at("points"), "points");
  if (doc.contains("r_points")) cfg.r_points = get_int(doc.at("r_points"), "r_points");
  if (doc.contains("tol")) cfg.tol = get_number(doc.at("tol"), "tol");
  if (doc.contains("pair")) {
    const json& p = doc.at("pair");
    if (!p.is_object()) field_error("pair", "expected an object");
    reject_unknown(p, {"first", "second", "r"}, "pair.", problems);
    if (p.contains("first")) cfg.first.name = get_string(p.at("first"), "pair.first");
    if (p.contains("second")) cfg.second.name = get_string(p.at("second"), "pair.second");
    if (p.contains("r")) {
      cfg.second.r = get_number(p.at("r"), "pair.r");
      cfg.first.r = cfg.second.r;
    }
  }
  if (doc.contains("blp")) {
    const json& b = doc.at("blp");
    if (!b.is_object()) field_error("blp", "expected an object");
    reject_unknown(b, {"n_theta", "n_phi"}, "blp.", problems);
    if (b.contains("n_theta")) cfg.blp_theta = get_int(b.at("n_theta"), "blp.n_theta");
    if (b.contains("n_phi")) cfg.blp_phi = get_int(b.at("n_phi"), "blp.n_phi");
  }
  const bool has_a = doc.contains("model_a");
  const bool has_b = doc.contains("model_b");
  if (has_a != has_b) problems.push_back("model_a and model_b must be given together");
  if (has_a && has_b) {
    cfg.model_a = parse_model(doc.at("model_a"), "model_a", problems);
    cfg.model_b = parse_model(doc.at("model_b"), "model_b", problems);
    cfg.models_from_presets = false;
  }
  if (!problems.empty()) throw Error(ErrorCode::ValidationError, join(problems, "; "));

  cfg.t_max_set = doc.contains("t_max");
  cfg.points_set = doc.contains("points");
  finalize_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  return load_config(in);
}

Dataset run_experiment(const ExperimentConfig& cfg) {
  const DephasingModel a = build_model(cfg.model_a);
  const DephasingModel b = build_model(cfg.model_b);
  Dataset ds;
  add_common_metadata(cfg, ds);
  switch (cfg.figure) {
    case Figure::Fig3: run_fig3(cfg, a, b, ds); break;
    case Figure::Fig4: run_fig4(cfg, a, b, ds); break;
    case Figure::Fig5: run_fig5(cfg, a, b, ds); break;
    case Figure::Fig6: run_fig6(cfg, a, b, ds); break;
    case Figure::Fig7: run_fig7(cfg, a, b, ds); break;
    case Figure::Equivalence: run_equivalence(cfg, a, b, ds); break;
    case Figure::Blp: run_blp(cfg, a, b, ds); break;
  }
  ds.metadata.emplace_back("invariant_violations", std::to_string(ds.violations.size()));
  return ds;
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  for (const auto& [key, value] : dataset.metadata) out << '#' << key << '=' << value << '\n';
  out << join(dataset.columns, ",") << '\n';
  for (const auto& row : dataset.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      out << format_number(row[k]);
    }
    out << '\n';
  }
}

void emit_csv(const Dataset& dataset, const std::string& path) {
  if (dataset.rows.empty() || dataset.columns.empty()) {
    throw Error(ErrorCode::IoError, "refusing to write an empty dataset");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  write_csv(dataset, out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace dephaselab
