#pragma once

#include <array>
#include <vector>

#include "dephaselab/matrixcore.hpp"

namespace dephaselab {

struct StateTolerances {
  double hermitian = 1e-10;
  double trace = 1e-10;
  double positivity = 1e-10;
};

/// A matrix over a list of tensor factors. Construction only checks the
/// shape; call validate() to check that it is a physical state, so that
/// intermediate sums can pass through unnormalized matrices.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix matrix, Dims dims);
  explicit DensityMatrix(ComplexMatrix matrix);  // single factor

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const Dims& dims() const noexcept { return dims_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  int factors() const noexcept { return static_cast<int>(dims_.size()); }

  /// Throws InvalidState naming the first violated invariant.
  void validate(const StateTolerances& tol = {}) const;
  bool is_valid(const StateTolerances& tol = {}) const noexcept;

  double purity() const;

  /// Marginal on a single factor.
  DensityMatrix marginal(int keep) const;

 private:
  ComplexMatrix matrix_;
  Dims dims_;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// |psi><psi| for a normalized copy of psi.
DensityMatrix pure_state(const ComplexVector& psi);

struct BlochVector {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  BlochVector() = default;
  BlochVector(double x, double y, double z) : v{x, y, z} {}

  double x() const { return v[0]; }
  double y() const { return v[1]; }
  double z() const { return v[2]; }
  double norm() const;
  double dot(const BlochVector& o) const { return v[0] * o.v[0] + v[1] * o.v[1] + v[2] * o.v[2]; }
  friend BlochVector operator-(const BlochVector& a, const BlochVector& b) {
    return {a.v[0] - b.v[0], a.v[1] - b.v[1], a.v[2] - b.v[2]};
  }
};

/// (1 + a.sigma)/2. Throws NormExceeded when |a| > 1 + tol.
DensityMatrix from_bloch(const BlochVector& a, double tol = 1e-10);

/// Inverse of from_bloch; throws DimensionMismatch for non-qubit input.
BlochVector to_bloch(const DensityMatrix& rho);

struct SpectralComponent {
  double weight;
  ComplexVector state;
};

/// Eigen-decomposition of a state keeping weights above rank_tol, sorted by
/// decreasing weight and renormalized to sum to one.
std::vector<SpectralComponent> spectral_decompose(const DensityMatrix& rho,
                                                  double rank_tol = 1e-12);

/// Half the trace norm of rho1 - rho2.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);
double trace_distance(const ComplexMatrix& rho1, const ComplexMatrix& rho2);

}  // namespace dephaselab
