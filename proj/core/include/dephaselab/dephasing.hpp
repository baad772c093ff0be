#pragma once

// Generalized pure-dephasing models H = H_S + H_E + sum_n |n><n| (x) B_n with
// [H_S, |n><n|] = 0. All dynamics are in the interaction picture with
// respect to H_S + H_E, so H_S never enters and is not stored.

#include <optional>
#include <vector>

#include "dephaselab/matrixcore.hpp"
#include "dephaselab/qstate.hpp"

namespace dephaselab {

/// Fixed-step resolution used for non-commuting models, per unit time.
inline constexpr int kDefaultStepsPerUnitTime = 2000;

class DephasingModel {
 public:
  /// Validates the couplings and environment state, caches the spectral
  /// decomposition of the environment state and decides whether every
  /// coupling commutes with H_E.
  DephasingModel(ComplexMatrix env_hamiltonian, std::vector<ComplexMatrix> couplings,
                 DensityMatrix env_state, const Tolerances& tol = {}, double rank_tol = 1e-12);

  int system_dim() const noexcept { return static_cast<int>(couplings_.size()); }
  int env_dim() const noexcept { return static_cast<int>(env_hamiltonian_.rows()); }
  const ComplexMatrix& env_hamiltonian() const noexcept { return env_hamiltonian_; }
  const std::vector<ComplexMatrix>& couplings() const noexcept { return couplings_; }
  const DensityMatrix& env_state() const noexcept { return env_state_; }
  const std::vector<SpectralComponent>& env_spectrum() const noexcept { return env_spectrum_; }
  bool commuting() const noexcept { return commuting_; }
  const Tolerances& tolerances() const noexcept { return tol_; }

  /// Steps used when a caller does not choose: 1 for commuting models (the
  /// propagator is an exact exponential), otherwise 2000 per unit time.
  int default_steps(double t) const;

 private:
  ComplexMatrix env_hamiltonian_;
  std::vector<ComplexMatrix> couplings_;
  DensityMatrix env_state_;
  std::vector<SpectralComponent> env_spectrum_;
  bool commuting_;
  Tolerances tol_;
};

/// Qubit system coupled to a qubit environment through B = g sigma.eta,
/// environment prepared in (1 + alpha.sigma)/2.
struct QubitModelParams {
  BlochVector alpha;
  BlochVector eta{0.0, 0.0, 1.0};
  double g = 1.0;
};

/// B_0 = -B, B_1 = +B, H_E = 0. Throws BadUnitVector if |eta| != 1 and
/// NormExceeded if |alpha| > 1.
DephasingModel qubit_model(const QubitModelParams& params);

/// V_n(t) for every system level n, evaluated together at one time.
struct Propagation {
  double t = 0.0;
  std::vector<ComplexMatrix> unitaries;
};

/// steps <= 0 selects model.default_steps(t).
Propagation propagate(const DephasingModel& model, double t, int steps = 0);
std::vector<ComplexMatrix> propagators(const DephasingModel& model, double t, int steps = 0);

/// F_{alpha,n,m}(t) = <phi_alpha| V_m^dagger V_n |phi_alpha> for each
/// eigenvector phi_alpha of the environment state.
struct DephasingFunctions {
  double t = 0.0;
  std::vector<double> weights;          // lambda_alpha
  std::vector<ComplexMatrix> values;    // values[alpha](n, m)

  /// sum_alpha lambda_alpha F_{alpha,n,m}: the factor multiplying the
  /// coherence |n><m| of the reduced state.
  ComplexMatrix averaged() const;
};

DephasingFunctions dephasing_functions(const DephasingModel& model, const Propagation& p);
DephasingFunctions dephasing_functions(const DephasingModel& model, double t, int steps = 0);

DensityMatrix reduced_state(const DephasingModel& model, const DensityMatrix& rho_s0,
                            const Propagation& p);
DensityMatrix reduced_state(const DephasingModel& model, const DensityMatrix& rho_s0, double t,
                            int steps = 0);

/// Global system (x) environment state, dims {d_S, d_E}.
DensityMatrix global_state(const DephasingModel& model, const DensityMatrix& rho_s0,
                           const Propagation& p);
DensityMatrix global_state(const DephasingModel& model, const DensityMatrix& rho_s0, double t,
                           int steps = 0);

/// Maps an interaction-picture global state to the Schroedinger picture via
/// exp(-i H_S t) (x) exp(-i H_E t). Trace distances and correlations are
/// unchanged by this map.
DensityMatrix to_schroedinger_picture(const DensityMatrix& rho_se, const ComplexMatrix& system_hamiltonian,
                                      const ComplexMatrix& env_hamiltonian, double t);

/// Closed form for alpha = (0, 0, c), eta = (0, 0, 1): a classical-quantum
/// state, block diagonal in the environment sigma_z basis. Requires |c| < 1.
DensityMatrix closed_form_zero_discord(double c, double g, const DensityMatrix& rho_s0, double t);

/// Closed form for alpha = (0, 0, 1), eta = (sqrt(1 - c^2), 0, c), written
/// with l_t = cos(gt) + i c sin(gt) and k_t = i sqrt(1 - c^2) sin(gt).
/// Requires |c| < 1.
DensityMatrix closed_form_entangled(double c, double g, const DensityMatrix& rho_s0, double t);

}  // namespace dephaselab
