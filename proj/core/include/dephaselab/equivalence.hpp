#pragma once

// Deciding whether two dephasing models are locally indistinguishable, i.e.
// give the same reduced state at every time for every initial system state.

#include <optional>
#include <string_view>
#include <vector>

#include "dephaselab/dephasing.hpp"

namespace dephaselab {

enum class EquivalenceMethod { TimeDomain, Moments, InnerProduct };

std::string_view to_string(EquivalenceMethod method);

/// Location of the largest discrepancy found by a check.
struct Witness {
  int n = -1;
  int m = -1;
  std::optional<double> time;  // time-domain checks
  std::optional<int> power;    // moment checks
};

struct EquivalenceVerdict {
  bool equivalent = false;
  EquivalenceMethod method = EquivalenceMethod::TimeDomain;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  // Set when tol < max_discrepancy <= 2 tol; the verdict is then "not equivalent".
  bool borderline = false;
  std::optional<Witness> witness;
};

inline constexpr double kDefaultEquivalenceTol = 1e-9;

/// 200 points on [0, 4 pi / g].
std::vector<double> default_equivalence_grid(double g = 1.0);

/// Compares sum_alpha lambda_alpha F_{alpha,n,m}(t) between the models for
/// every n > m on the grid.
EquivalenceVerdict time_domain_check(const DephasingModel& a, const DephasingModel& b,
                                     const std::vector<double>& grid,
                                     double tol = kDefaultEquivalenceTol, int steps = 0);

/// tr[rho_E G^k] against tr[rho_E' G'^k] for k = 1..k_max, where
/// G = (B_1 - B_0)/2 is the relative coupling of a two-level system (G = B
/// for qubit_model). Requires d_S = 2 with commuting couplings and
/// [B_0, B_1] = 0, otherwise throws UnsupportedModel.
EquivalenceVerdict moment_check(const DephasingModel& a, const DephasingModel& b, int k_max,
                                double tol = kDefaultEquivalenceTol);

/// k_max = d_E^2 - 1 for the larger environment.
EquivalenceVerdict moment_check(const DephasingModel& a, const DephasingModel& b);

/// Two qubit models are equivalent iff alpha.eta == alpha'.eta' (couplings
/// must agree within tol, else CouplingMismatch).
EquivalenceVerdict qubit_condition(const QubitModelParams& a, const QubitModelParams& b,
                                   double tol = kDefaultEquivalenceTol);

/// Partner of (alpha = (0, 0, c), eta = (0, 0, 1)) with a pure environment:
/// alpha' = (0, 0, 1), eta' = (sqrt(1 - c^2 - d^2), d, c). Throws OutOfDomain
/// unless c^2 + d^2 <= 1 and c < 1.
QubitModelParams construct_partner(double c, double d, double g = 1.0);

/// The reference model (alpha = (0, 0, c), eta = (0, 0, 1)).
QubitModelParams reference_params(double c, double g = 1.0);

}  // namespace dephaselab
