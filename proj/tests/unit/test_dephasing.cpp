#include <doctest.h>

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "dephaselab/dephasing.hpp"
#include "dephaselab/equivalence.hpp"
#include "dephaselab/error.hpp"
#include "dephaselab/infoflow.hpp"
#include "support/test_support.hpp"

using namespace dephaselab;
namespace dt = dephaselab::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// exp(i H_E t) exp(-i (H_E + B) t) via Eigen's Pade exponential.
ComplexMatrix reference_propagator(const ComplexMatrix& he, const ComplexMatrix& b, double t) {
  const Complex i(0.0, 1.0);
  const ComplexMatrix free = (i * t * he).exp();
  const ComplexMatrix full = (-i * t * (he + b)).exp();
  return free * full;
}

// Qubit-model coherence factor: <exp(-2 i g t sigma.eta)> in (1 + alpha.sigma)/2.
Complex qubit_factor(const QubitModelParams& p, double t) {
  const double a = p.alpha.dot(p.eta);
  return {std::cos(2.0 * p.g * t), -a * std::sin(2.0 * p.g * t)};
}

DephasingModel random_model(int ds, int de, bool commuting) {
  ComplexMatrix he = dt::random_hermitian(de);
  std::vector<ComplexMatrix> couplings;
  if (commuting) {
    const EigenSystem es = eig_hermitian(he);
    for (int n = 0; n < ds; ++n) {
      Eigen::VectorXd lam(de);
      for (int k = 0; k < de; ++k) lam(k) = dt::gaussian();
      couplings.push_back(es.eigenvectors * lam.cast<Complex>().asDiagonal() *
                          es.eigenvectors.adjoint());
    }
  } else {
    for (int n = 0; n < ds; ++n) couplings.push_back(dt::random_hermitian(de));
  }
  return DephasingModel(he, couplings, DensityMatrix(dt::random_density(de)));
}

}  // namespace

TEST_CASE("qubit_model: construction and validation") {
  const DephasingModel m = qubit_model({{0.0, 0.0, 0.3}, {0.0, 0.0, 1.0}, 2.0});
  CHECK(m.system_dim() == 2);
  CHECK(m.env_dim() == 2);
  CHECK(m.commuting());
  CHECK(m.default_steps(5.0) == 1);
  CHECK(dt::max_abs(m.couplings()[1] - 2.0 * pauli::z()) == 0.0);
  CHECK(dt::max_abs(m.couplings()[0] + m.couplings()[1]) == 0.0);

  try {
    qubit_model({{0.0, 0.0, 0.0}, {0.0, 0.0, 1.1}, 1.0});
    FAIL("expected BadUnitVector");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadUnitVector);
  }
  try {
    qubit_model({{0.0, 0.9, 0.9}, {0.0, 0.0, 1.0}, 1.0});
    FAIL("expected NormExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NormExceeded);
  }
}

TEST_CASE("DephasingModel: error paths") {
  const ComplexMatrix he = pauli::z();
  const DensityMatrix env(dt::random_density(2));
  ComplexMatrix bad = pauli::x();
  bad(0, 1) = 2.0;
  CHECK_THROWS_AS(DephasingModel(he, {pauli::x(), bad}, env), Error);
  CHECK_THROWS_AS(DephasingModel(he, {pauli::x(), ComplexMatrix::Zero(3, 3)}, env), Error);
  CHECK_THROWS_AS(DephasingModel(he, {}, env), Error);
  CHECK_THROWS_AS(DephasingModel(he, {pauli::x()}, DensityMatrix(dt::random_density(3))), Error);
  CHECK_THROWS_AS(DephasingModel(he, {pauli::x()}, DensityMatrix(2.0 * dt::random_density(2))),
                  Error);

  const DephasingModel m = qubit_model({});
  try {
    reduced_state(m, DensityMatrix(dt::random_density(3)), 1.0);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("qubit dephasing factor matches its closed form") {
  for (int trial = 0; trial < 50; ++trial) {
    QubitModelParams p{dt::random_bloch(), dt::random_unit_vector(), dt::uniform(0.2, 3.0)};
    const DephasingModel m = qubit_model(p);
    const double t = dt::uniform(0.0, 10.0);
    const ComplexMatrix f = dephasing_functions(m, t).averaged();
    CHECK(std::abs(f(1, 0) - qubit_factor(p, t)) <= 1e-12);
    CHECK(std::abs(f(0, 1) - std::conj(qubit_factor(p, t))) <= 1e-12);
  }
}

TEST_CASE("dephasing functions: time zero, diagonal, conjugate symmetry, modulus") {
  const DephasingModel m = random_model(3, 3, false);
  const DephasingFunctions f0 = dephasing_functions(m, 0.0);
  CHECK(dt::max_abs(f0.averaged() - ComplexMatrix::Ones(3, 3)) <= 1e-14);

  const DephasingFunctions f = dephasing_functions(m, 0.8);
  double wsum = 0.0;
  for (std::size_t a = 0; a < f.values.size(); ++a) {
    wsum += f.weights[a];
    const ComplexMatrix& v = f.values[a];
    for (int n = 0; n < 3; ++n) {
      CHECK(v(n, n) == Complex(1.0, 0.0));
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(v(n, k) - std::conj(v(k, n))) <= 1e-13);
        CHECK(std::abs(v(n, k)) <= 1.0 + 1e-12);
      }
    }
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("reduced state: populations invariant, marginal consistent with global state") {
  for (bool commuting : {true, false}) {
    for (int trial = 0; trial < 5; ++trial) {
      const DephasingModel m = random_model(3, 2, commuting);
      const DensityMatrix rho0(dt::random_density(3));
      const double t = dt::uniform(0.0, 2.0);
      const Propagation p = propagate(m, t);
      const DensityMatrix red = reduced_state(m, rho0, p);
      const DensityMatrix glob = global_state(m, rho0, p);
      CHECK(glob.dims() == Dims{3, 2});
      CHECK(glob.is_valid());
      CHECK(red.is_valid());
      CHECK(dt::max_abs(glob.marginal(0).matrix() - red.matrix()) <= 1e-12);
      for (int n = 0; n < 3; ++n) {
        CHECK(std::abs(red.matrix()(n, n) - rho0.matrix()(n, n)) <= 1e-14);
      }
      // Global purity equals the environment's for a pure initial system state.
      const DensityMatrix pure = pure_state(dt::random_pure_vector(3));
      CHECK(global_state(m, pure, p).purity() ==
            doctest::Approx(m.env_state().purity()).epsilon(1e-11));
    }
  }
}

TEST_CASE("global state: environment marginal of the zero-discord model") {
  // alpha = (0,0,c), eta = z: rho_E(t) is time independent.
  const double c = 0.3;
  const DephasingModel m = qubit_model(reference_params(c));
  for (double t : {0.0, 0.4, 1.3}) {
    const DensityMatrix env = global_state(m, psi_plus(), t).marginal(1);
    CHECK(dt::max_abs(env.matrix() - m.env_state().matrix()) <= 1e-14);
  }
}

TEST_CASE("non-commuting propagators agree with a dense reference") {
  const ComplexMatrix he = pauli::z();
  const ComplexMatrix b0 = 0.5 * pauli::x();
  const ComplexMatrix b1 = -0.7 * pauli::x() + 0.2 * pauli::y();
  const DephasingModel m(he, {b0, b1}, from_bloch({0.1, 0.2, 0.3}));
  CHECK_FALSE(m.commuting());
  CHECK(m.default_steps(1.0) == kDefaultStepsPerUnitTime);
  for (double t : {0.25, 1.0, 2.0, kPi}) {
    const std::vector<ComplexMatrix> v = propagators(m, t);
    CHECK(dt::max_abs(v[0] - reference_propagator(he, b0, t)) <= 1e-8);
    CHECK(dt::max_abs(v[1] - reference_propagator(he, b1, t)) <= 1e-8);
    CHECK(unitarity_defect(v[0]) <= 1e-12);
  }
}

TEST_CASE("non-commuting qutrit environment agrees with a dense reference") {
  const DephasingModel m = random_model(2, 3, false);
  const double t = 1.7;
  const std::vector<ComplexMatrix> v = propagators(m, t);
  for (int n = 0; n < 2; ++n) {
    CHECK(dt::max_abs(v[n] - reference_propagator(m.env_hamiltonian(), m.couplings()[n], t)) <=
          1e-8);
  }
}

TEST_CASE("commuting models use exact exponentials") {
  const DephasingModel m = random_model(2, 4, true);
  CHECK(m.commuting());
  const double t = 3.3;
  const std::vector<ComplexMatrix> v = propagators(m, t);
  for (int n = 0; n < 2; ++n) {
    CHECK(dt::max_abs(v[n] - reference_propagator(m.env_hamiltonian(), m.couplings()[n], t)) <=
          1e-11);
  }
}

TEST_CASE("closed form: zero-discord model matches the generic pipeline") {
  for (double c : {0.0, 0.35, -0.8}) {
    for (double g : {1.0, 0.6}) {
      const DephasingModel m = qubit_model(reference_params(c, g));
      const DensityMatrix rho0(dt::random_density(2));
      double worst = 0.0;
      for (int k = 0; k < 50; ++k) {
        const double t = 2.0 * kPi * k / 49.0;
        worst = std::max(worst, dt::max_abs(global_state(m, rho0, t).matrix() -
                                            closed_form_zero_discord(c, g, rho0, t).matrix()));
      }
      CHECK(worst <= 1e-10);
    }
  }
}

TEST_CASE("closed form: entangled partner matches the generic pipeline") {
  for (double c : {0.0, 0.35, -0.8}) {
    const DephasingModel m = qubit_model(construct_partner(c, 0.0));
    const DensityMatrix rho0(dt::random_density(2));
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double t = 2.0 * kPi * k / 49.0;
      worst = std::max(worst, dt::max_abs(global_state(m, rho0, t).matrix() -
                                          closed_form_entangled(c, 1.0, rho0, t).matrix()));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("closed form: entangled state at c = 0, t = pi/4") {
  // (1/2)(i|00> + |01> - i|10> + |11>) for the psi_plus initial state.
  ComplexVector psi(4);
  psi << Complex(0.0, 0.5), 0.5, Complex(0.0, -0.5), 0.5;
  const DensityMatrix rho = closed_form_entangled(0.0, 1.0, psi_plus(), kPi / 4);
  CHECK(dt::max_abs(rho.matrix() - psi * psi.adjoint()) <= 1e-15);
}

TEST_CASE("closed forms: domain errors") {
  CHECK_THROWS_AS(closed_form_zero_discord(1.0, 1.0, psi_plus(), 0.1), Error);
  CHECK_THROWS_AS(closed_form_entangled(-1.2, 1.0, psi_plus(), 0.1), Error);
}

TEST_CASE("Schroedinger picture map preserves distances") {
  const DephasingModel m = qubit_model(construct_partner(0.2, 0.1));
  const double t = 0.9;
  const DensityMatrix a = global_state(m, psi_plus(), t);
  const DensityMatrix b = global_state(m, psi_minus_r(0.4), t);
  const ComplexMatrix hs = dt::random_hermitian(2);
  const ComplexMatrix he = dt::random_hermitian(2);
  const DensityMatrix sa = to_schroedinger_picture(a, hs, he, t);
  const DensityMatrix sb = to_schroedinger_picture(b, hs, he, t);
  CHECK(trace_distance(sa, sb) == doctest::Approx(trace_distance(a, b)).epsilon(1e-12));
  CHECK_THROWS_AS(to_schroedinger_picture(a, dt::random_hermitian(3), he, t), Error);
}
