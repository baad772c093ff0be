#include "dephaselab/equivalence.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dephaselab/error.hpp"

namespace dephaselab {

namespace {

EquivalenceVerdict make_verdict(EquivalenceMethod method, double discrepancy, double tol,
                                std::optional<Witness> witness) {
  EquivalenceVerdict v;
  v.method = method;
  v.max_discrepancy = discrepancy;
  v.tolerance = tol;
  v.equivalent = discrepancy <= tol;
  v.borderline = !v.equivalent && discrepancy <= 2.0 * tol;
  if (!v.equivalent || discrepancy > 0.0) v.witness = witness;
  return v;
}

void require_same_system(const DephasingModel& a, const DephasingModel& b) {
  if (a.system_dim() != b.system_dim()) {
    std::ostringstream os;
    os << "system dimensions differ: " << a.system_dim() << " vs " << b.system_dim();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

ComplexMatrix relative_coupling(const DephasingModel& model) {
  if (model.system_dim() != 2) {
    throw Error(ErrorCode::UnsupportedModel, "moment form needs a two-level system");
  }
  const ComplexMatrix& b0 = model.couplings()[0];
  const ComplexMatrix& b1 = model.couplings()[1];
  const double tol = model.tolerances().hermitian;
  if (!model.commuting() || commutator(b0, b1).norm() > tol) {
    throw Error(ErrorCode::UnsupportedModel,
                "moment form needs couplings commuting with H_E and with each other");
  }
  return 0.5 * (b1 - b0);
}

}  // namespace

std::string_view to_string(EquivalenceMethod method) {
  switch (method) {
    case EquivalenceMethod::TimeDomain: return "time-domain";
    case EquivalenceMethod::Moments: return "moments";
    case EquivalenceMethod::InnerProduct: return "inner-product";
  }
  return "unknown";
}

std::vector<double> default_equivalence_grid(double g) {
  constexpr int kPoints = 200;
  const double t_max = 4.0 * std::numbers::pi / g;
  std::vector<double> grid(kPoints);
  for (int k = 0; k < kPoints; ++k) grid[k] = t_max * k / (kPoints - 1);
  return grid;
}

EquivalenceVerdict time_domain_check(const DephasingModel& a, const DephasingModel& b,
                                     const std::vector<double>& grid, double tol, int steps) {
  require_same_system(a, b);
  const int ds = a.system_dim();
  double worst = 0.0;
  Witness witness;
  for (double t : grid) {
    const ComplexMatrix fa = dephasing_functions(a, t, steps).averaged();
    const ComplexMatrix fb = dephasing_functions(b, t, steps).averaged();
    for (int n = 1; n < ds; ++n) {
      for (int m = 0; m < n; ++m) {
        const double gap = std::abs(fa(n, m) - fb(n, m));
        if (gap > worst || witness.n < 0) {
          if (gap > worst) worst = gap;
          witness = Witness{n, m, t, std::nullopt};
        }
      }
    }
  }
  std::optional<Witness> w;
  if (witness.n >= 0) w = witness;
  return make_verdict(EquivalenceMethod::TimeDomain, worst, tol, w);
}

EquivalenceVerdict moment_check(const DephasingModel& a, const DephasingModel& b, int k_max,
                                double tol) {
  require_same_system(a, b);
  if (k_max < 1) throw Error(ErrorCode::OutOfDomain, "moment_check: k_max < 1");
  const ComplexMatrix ga = relative_coupling(a);
  const ComplexMatrix gb = relative_coupling(b);
  const ComplexMatrix& ra = a.env_state().matrix();
  const ComplexMatrix& rb = b.env_state().matrix();

  ComplexMatrix pa = ComplexMatrix::Identity(ga.rows(), ga.cols());
  ComplexMatrix pb = ComplexMatrix::Identity(gb.rows(), gb.cols());
  double worst = 0.0;
  Witness witness{1, 0, std::nullopt, 1};
  for (int k = 1; k <= k_max; ++k) {
    pa = pa * ga;
    pb = pb * gb;
    const double gap = std::abs((ra * pa).trace() - (rb * pb).trace());
    if (gap > worst) {
      worst = gap;
      witness.power = k;
    }
  }
  return make_verdict(EquivalenceMethod::Moments, worst, tol, witness);
}

EquivalenceVerdict moment_check(const DephasingModel& a, const DephasingModel& b) {
  const int de = std::max(a.env_dim(), b.env_dim());
  return moment_check(a, b, de * de - 1);
}

EquivalenceVerdict qubit_condition(const QubitModelParams& a, const QubitModelParams& b,
                                   double tol) {
  if (std::abs(a.g - b.g) > tol) {
    std::ostringstream os;
    os << "couplings differ: " << a.g << " vs " << b.g;
    throw Error(ErrorCode::CouplingMismatch, os.str());
  }
  const double gap = std::abs(a.alpha.dot(a.eta) - b.alpha.dot(b.eta));
  return make_verdict(EquivalenceMethod::InnerProduct, gap, tol, std::nullopt);
}

QubitModelParams construct_partner(double c, double d, double g) {
  if (!(c < 1.0) || !(c * c + d * d <= 1.0)) {
    std::ostringstream os;
    os << "construct_partner: need c < 1 and c^2 + d^2 <= 1 (c = " << c << ", d = " << d << ")";
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
  return QubitModelParams{BlochVector(0.0, 0.0, 1.0),
                          BlochVector(std::sqrt(1.0 - c * c - d * d), d, c), g};
}

QubitModelParams reference_params(double c, double g) {
  if (!(std::abs(c) < 1.0)) throw Error(ErrorCode::OutOfDomain, "reference model needs |c| < 1");
  return QubitModelParams{BlochVector(0.0, 0.0, c), BlochVector(0.0, 0.0, 1.0), g};
}

}  // namespace dephaselab
