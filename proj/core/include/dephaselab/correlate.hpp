#pragma once

#include "dephaselab/dephasing.hpp"
#include "dephaselab/qstate.hpp"

namespace dephaselab {

/// Wootters concurrence of a two-qubit state.
double concurrence(const DensityMatrix& rho);

/// Smallest eigenvalue of the partial transpose on the second factor.
double min_partial_transpose_eigenvalue(const DensityMatrix& rho);

/// Peres-Horodecki test, exact for dims (2, 2), (2, 3) and (3, 2).
bool ppt_is_entangled(const DensityMatrix& rho, double tol = 1e-10);

struct DiscordSearch {
  int coarse_directions = 1000;
  double initial_step = 0.05;
  double final_step = 1e-12;
  double tolerance = 1e-7;  // residual accepted as zero discord
};

struct ZeroDiscordResult {
  bool is_zero_discord = false;
  double residual = 0.0;
  ComplexMatrix best_basis;  // columns are the projective measurement basis
  BlochVector direction;
};

/// Searches projective qubit measurements {P_k} on `measured_factor` for
/// the one leaving rho most nearly invariant under
/// rho -> sum_k (P_k (x) 1) rho (P_k (x) 1). residual is the trace distance
/// between rho and its pinched form at the best basis found.
ZeroDiscordResult zero_discord_test(const DensityMatrix& rho, int measured_factor = 1,
                                    const DiscordSearch& search = {});

/// Pinching of rho by the projectors onto +-direction on the measured factor.
ComplexMatrix pinch(const DensityMatrix& rho, int measured_factor, const BlochVector& direction);

/// Predicts whether a two-level system in a pure state with both
/// populations nonzero becomes entangled with the environment at time t:
/// true iff V_0 rho_E V_0^dagger != V_1 rho_E V_1^dagger, equivalently
/// [rho_E, V_0^dagger V_1] != 0.
bool entanglement_generation_criterion(const DephasingModel& model, double t, int steps = 0);

/// D(rho_SE, rho_S (x) rho_E).
double total_correlations(const DensityMatrix& rho_se);

}  // namespace dephaselab
