#pragma once

// Trace-distance information flow: the variation Delta_S(t, s), the bound
// I_SE(s) built from environment distinguishability and total correlations,
// and a discretized BLP non-Markovianity measure.

#include <string>
#include <vector>

#include "dephaselab/dephasing.hpp"

namespace dephaselab {

struct StatePair {
  DensityMatrix first;
  DensityMatrix second;
  std::string label;
};

/// Throws DimensionMismatch or InvalidState.
void validate_pair(const StatePair& pair);

/// (|0> + |1>)/sqrt 2
DensityMatrix psi_plus();
/// (|0> - |1>)/sqrt 2
DensityMatrix psi_minus();
/// r|0> - sqrt(1 - r^2)|1>; throws OutOfDomain unless 0 <= r <= 1.
DensityMatrix psi_minus_r(double r);

/// Pure qubit state with Bloch direction (theta, phi).
DensityMatrix bloch_pure_state(double theta, double phi);

/// Antipodal pure-state pairs on a (theta, phi) grid of the Bloch sphere,
/// covering one hemisphere of directions.
std::vector<StatePair> antipodal_pairs(int n_theta, int n_phi);

/// D(rho1_S(t), rho2_S(t)).
double system_distance(const DephasingModel& model, const StatePair& pair, double t, int steps = 0);

/// D_S(t) - D_S(s); throws BadInterval unless 0 <= s <= t.
double delta_S(const DephasingModel& model, const StatePair& pair, double s, double t,
               int steps = 0);

struct IseTerms {
  double env_term = 0.0;     // D(rho1_E(s), rho2_E(s))
  double corr_first = 0.0;   // D(rho1_SE(s), rho1_S(s) (x) rho1_E(s))
  double corr_second = 0.0;  // same for the second state
  double total = 0.0;
};

IseTerms ise_terms(const DephasingModel& model, const StatePair& pair, double s, int steps = 0);

struct BlpResult {
  double measure = 0.0;
  std::size_t best_index = 0;
  StatePair best_pair;
};

/// Sum of positive increments of D_S over consecutive grid points,
/// maximized over the candidate pairs. Throws EmptyInput for no pairs or
/// fewer than two grid points, BadInterval for a non-ascending grid.
BlpResult blp_measure(const DephasingModel& model, const std::vector<StatePair>& candidates,
                      const std::vector<double>& grid, int steps = 0);

/// Positive-increment sum for a single trajectory of distances.
double positive_increments(const std::vector<double>& distances);

struct InfoFlowReport {
  std::vector<double> times;
  std::vector<double> D_S;
  // delta_S[i][j] = D_S(times[j]) - D_S(times[i]) for j >= i, 0 otherwise.
  std::vector<std::vector<double>> delta_S;
  std::vector<double> env_term;
  std::vector<double> corr_term_1;
  std::vector<double> corr_term_2;
  std::vector<double> I_SE;
};

InfoFlowReport info_flow_report(const DephasingModel& model, const StatePair& pair,
                                const std::vector<double>& times, int steps = 0);

}  // namespace dephaselab
