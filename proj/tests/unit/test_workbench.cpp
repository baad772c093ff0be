#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "dephaselab/error.hpp"
#include "dephaselab/workbench.hpp"
#include "support/test_support.hpp"

using namespace dephaselab;
namespace dt = dephaselab::testing;

namespace {

constexpr double kPi = std::numbers::pi;

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return load_config(in);
}

ErrorCode parse_error_code(const std::string& text, std::string* message = nullptr) {
  try {
    parse(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("config accepted: " << text);
  return ErrorCode::IoError;
}

std::string csv_of(const Dataset& ds) {
  std::ostringstream out;
  write_csv(ds, out);
  return out.str();
}

std::string metadata(const Dataset& ds, const std::string& key) {
  for (const auto& [k, v] : ds.metadata)
    if (k == key) return v;
  return {};
}

}  // namespace

TEST_CASE("figure names round trip") {
  for (Figure f : {Figure::Fig3, Figure::Fig4, Figure::Fig5, Figure::Fig6, Figure::Fig7,
                   Figure::Equivalence, Figure::Blp}) {
    CHECK(parse_figure(to_string(f)) == f);
  }
  CHECK_FALSE(parse_figure("fig9"));
}

TEST_CASE("default grids per figure") {
  const ExperimentConfig f3 = default_config(Figure::Fig3);
  CHECK(f3.t_max == doctest::Approx(kPi));
  CHECK(f3.points == 401);
  CHECK(f3.t_fixed == doctest::Approx(kPi / 2));

  const ExperimentConfig f6 = default_config(Figure::Fig6, 0.0, 0.0, 2.0);
  CHECK(f6.t_max == doctest::Approx(kPi / 4));
  CHECK(f6.t_fixed == doctest::Approx(kPi / 4));

  CHECK(default_config(Figure::Fig7).points == 50);
  CHECK(default_config(Figure::Equivalence).t_max == doctest::Approx(4.0 * kPi));
  CHECK(default_config(Figure::Equivalence).points == 200);

  const auto* a = std::get_if<QubitModelParams>(&f3.model_a);
  const auto* b = std::get_if<QubitModelParams>(&f3.model_b);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->alpha.z() == 0.0);
  CHECK(b->alpha.z() == 1.0);
}

TEST_CASE("validation errors") {
  std::string msg;
  CHECK(parse_error_code(R"({"figure": "fig5", "r": 1.5})", &msg) == ErrorCode::ValidationError);
  CHECK(msg.find("r must lie in [0, 1]") != std::string::npos);
  CHECK(parse_error_code(R"({"figure": "fig9"})", &msg) == ErrorCode::ValidationError);
  CHECK(msg.find("fig9") != std::string::npos);
  CHECK(parse_error_code(R"({"figure": "fig3", "colour": 1})", &msg) == ErrorCode::ValidationError);
  CHECK(msg.find("colour") != std::string::npos);
  CHECK(parse_error_code(R"({"c": 0.1})") == ErrorCode::ValidationError);
  CHECK(parse_error_code(R"({"figure": "fig3", "g": 0})") == ErrorCode::ValidationError);
  CHECK(parse_error_code(R"({"figure": "fig3", "c": 0.8, "d": 0.8})") == ErrorCode::ValidationError);
  CHECK(parse_error_code(R"({"figure": "fig3", "points": 1})") == ErrorCode::ValidationError);
  CHECK(parse_error_code(R"({"figure": "fig3", "model_a": {"alpha": [0, 0, 0]}})") ==
        ErrorCode::ValidationError);
  CHECK(parse_error_code(R"({"figure": "fig6", "t_fixed": 1.0, "t_max": 2.0})") ==
        ErrorCode::ValidationError);
  CHECK(parse_error_code(R"({"figure": "fig3", "pair": {"first": "psi_zero"}})") ==
        ErrorCode::ValidationError);

  // Several problems are reported together.
  parse_error_code(R"({"figure": "fig3", "r": 2, "g": -1})", &msg);
  CHECK(msg.find("g must be > 0") != std::string::npos);
  CHECK(msg.find("r must lie") != std::string::npos);
}

TEST_CASE("parse errors carry a line or a field") {
  std::string msg;
  CHECK(parse_error_code("{\n  \"figure\": \"fig3\",\n  \"c\": ,\n}", &msg) == ErrorCode::ParseError);
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(parse_error_code(R"({"figure": "fig3", "c": "half"})", &msg) == ErrorCode::ParseError);
  CHECK(msg.find("'c'") != std::string::npos);
  CHECK(parse_error_code(R"({"figure": "fig3", "points": 2.5})", &msg) == ErrorCode::ParseError);
  CHECK(parse_error_code("[1, 2]") == ErrorCode::ParseError);
  CHECK(parse_error_code(R"({"figure": "fig3", "model_a": {"alpha": [0, 0]}, "model_b": {}})", &msg) ==
        ErrorCode::ParseError);
  CHECK(msg.find("model_a.alpha") != std::string::npos);
}

TEST_CASE("missing config file is an IO error") {
  try {
    load_config(std::string("/nonexistent/dir/config.json"));
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

TEST_CASE("explicit models and general operators") {
  const ExperimentConfig cfg = parse(R"({
    "figure": "equivalence",
    "points": 40,
    "model_a": {"alpha": [0, 0, 0.3], "eta": [0, 0, 1]},
    "model_b": {
      "env_hamiltonian": [[0, 0], [0, 0]],
      "couplings": [[[-1, 0], [0, 1]], [[1, 0], [0, -1]]],
      "env_state": [[0.65, 0], [0, 0.35]]
    }
  })");
  CHECK_FALSE(cfg.models_from_presets);
  CHECK(cfg.points == 40);
  REQUIRE(std::holds_alternative<GeneralModelSpec>(cfg.model_b));
  const Dataset ds = run_experiment(cfg);
  // diag(1, -1) is -sigma_z, so the populations are swapped to keep <G> = 0.3.
  CHECK(metadata(ds, "verdict.time-domain").rfind("equivalent", 0) == 0);
  CHECK(metadata(ds, "verdict.moments").rfind("equivalent", 0) == 0);
  CHECK(metadata(ds, "verdict.inner-product") == "not-applicable");
  CHECK(ds.rows.size() == 40);
}

TEST_CASE("fig3: concurrence of the two models") {
  const Dataset ds = run_experiment(default_config(Figure::Fig3));
  REQUIRE(ds.columns == std::vector<std::string>{"t", "concurrence_model_a", "concurrence_model_b"});
  CHECK(ds.rows.size() == 401);
  CHECK(ds.violations.empty());
  for (const auto& row : ds.rows) {
    CHECK(row[1] <= 1e-10);
    // Pure global state with Schmidt weights cos^2 t, sin^2 t.
    CHECK(row[2] == doctest::Approx(std::abs(std::sin(2.0 * row[0]))).epsilon(1e-9));
  }
}

TEST_CASE("fig4: environment distance") {
  const Dataset ds = run_experiment(default_config(Figure::Fig4));
  CHECK(ds.violations.empty());
  for (const auto& row : ds.rows) {
    CHECK(row[2] == doctest::Approx(std::abs(std::cos(2.0 * row[0])) / 2.0).epsilon(1e-12));
    CHECK(row[2] <= row[1] + 1e-12);
  }
}

TEST_CASE("fig5 and fig6: bound holds, saturation for the reference model") {
  ExperimentConfig f5 = default_config(Figure::Fig5);
  f5.r_points = 5;
  f5.points = 21;
  f5.points_set = true;
  finalize_config(f5);
  const Dataset d5 = run_experiment(f5);
  CHECK(d5.violations.empty());
  CHECK(d5.rows.size() == 5 * 21);

  const Dataset d6 = run_experiment(default_config(Figure::Fig6));
  CHECK(d6.violations.empty());
  CHECK(std::abs(std::stod(metadata(d6, "min_gap_model_a"))) <= 1e-10);
}

TEST_CASE("fig7 grid layout") {
  ExperimentConfig cfg = default_config(Figure::Fig7);
  cfg.points = 6;
  cfg.points_set = true;
  finalize_config(cfg);
  const Dataset ds = run_experiment(cfg);
  CHECK(ds.columns.size() == 10);
  CHECK(ds.rows.size() == 36);
  CHECK(ds.violations.empty());
  // The two models agree on the system, so Delta_S coincides.
  for (const auto& row : ds.rows) CHECK(row[2] == doctest::Approx(row[3]).epsilon(1e-10));
}

TEST_CASE("blp dataset") {
  ExperimentConfig cfg = default_config(Figure::Blp);
  cfg.blp_theta = 2;
  cfg.blp_phi = 2;
  finalize_config(cfg);
  const Dataset ds = run_experiment(cfg);
  CHECK(ds.rows.size() == 6);
  CHECK(metadata(ds, "pair.0") == "configured");
  const std::string blp_a = metadata(ds, "blp_model_a");
  CHECK(std::stod(blp_a.substr(0, blp_a.find(' '))) == doctest::Approx(2.0).epsilon(1e-12));
  for (const auto& row : ds.rows) CHECK(row[1] == doctest::Approx(row[2]).epsilon(1e-10));
}

TEST_CASE("CSV output") {
  const Dataset ds = run_experiment(default_config(Figure::Fig4));
  const std::string text = csv_of(ds);
  CHECK(text.rfind("#tool=dephaselab\n", 0) == 0);
  CHECK(text.find("\nt,D_global,D_env\n") != std::string::npos);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("#invariant_violations=0\n") != std::string::npos);
  CHECK(csv_of(run_experiment(default_config(Figure::Fig4))) == text);
}

TEST_CASE("format_number round trips") {
  for (int k = 0; k < 500; ++k) {
    const double x = dt::gaussian() * std::pow(10.0, dt::uniform(-20, 20));
    const std::string s = format_number(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.0) == "0");
}

TEST_CASE("emit_csv errors") {
  Dataset empty;
  empty.columns = {"t"};
  try {
    emit_csv(empty, (std::filesystem::temp_directory_path() / "dephaselab_empty.csv").string());
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
  Dataset one;
  one.columns = {"t"};
  one.rows = {{1.0}};
  CHECK_THROWS_AS(emit_csv(one, "/nonexistent/dir/out.csv"), Error);

  const auto path = std::filesystem::temp_directory_path() / "dephaselab_one.csv";
  emit_csv(one, path.string());
  CHECK(std::filesystem::file_size(path) == 4);
  std::filesystem::remove(path);
}
