#pragma once

// Dense complex linear algebra for small operator spaces (dimension <= ~64).
//
// Tensor convention used throughout the library: factor 0 is the system,
// factor 1 the environment, and composite indices are row-major,
// i.e. index = i_S * d_E + i_E.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dephaselab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;

struct Tolerances {
  double hermitian = 1e-10;
  double eig = 1e-12;
  double unitary = 1e-12;
};

struct EigenSystem {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // columns, unitary
};

double hermiticity_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol);
double unitarity_defect(const ComplexMatrix& u);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Throws NotHermitian or NoConvergence.
EigenSystem eig_hermitian(const ComplexMatrix& h, const Tolerances& tol = {});

/// exp(-i * theta * H) through the spectral decomposition of H.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double theta, const Tolerances& tol = {});

/// f(H) = U f(diag(lambda)) U^dagger for a real function f of the spectrum.
ComplexMatrix hermitian_function(const ComplexMatrix& h, const std::function<double(double)>& f,
                                 const Tolerances& tol = {});

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out every factor except `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims, int keep);

/// Transposes the indices of factor `factor` only.
ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const int> dims, int factor);

/// Closest unitary in Frobenius norm: U (U^dagger U)^{-1/2}.
ComplexMatrix polar_unitary(const ComplexMatrix& v, const Tolerances& tol = {});

using OperatorFunction = std::function<ComplexMatrix(double)>;

/// Solves dV/ds = -i B(s) V, V(0) = 1 on [0, t] with classical RK4 at a fixed
/// step t/steps, then projects the result back onto the unitary group.
ComplexMatrix time_ordered_propagator(const OperatorFunction& generator, double t, int steps,
                                      const Tolerances& tol = {});

// Pauli matrices with basis order {|0>, |1>} and sigma_z = |1><1| - |0><0|,
// so |1> is the +1 eigenvector of sigma_z and (0, 0, 1) on the Bloch ball is
// |1><1|. sigma_x and sigma_y are the usual off-diagonal forms.
namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// a_x sigma_x + a_y sigma_y + a_z sigma_z
ComplexMatrix dot(double ax, double ay, double az);
}  // namespace pauli

}  // namespace dephaselab
