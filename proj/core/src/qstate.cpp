#include "dephaselab/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "dephaselab/error.hpp"

namespace dephaselab {

namespace {

long product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>());
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix matrix, Dims dims)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "density matrix must be square and non-empty");
  }
  if (dims_.empty() || std::any_of(dims_.begin(), dims_.end(), [](int d) { return d < 1; }) ||
      product(dims_) != matrix_.rows()) {
    std::ostringstream os;
    os << "factor dims do not multiply to " << matrix_.rows();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix)
    : DensityMatrix(matrix, Dims{static_cast<int>(matrix.rows())}) {}

void DensityMatrix::validate(const StateTolerances& tol) const {
  if (!matrix_.allFinite()) throw Error(ErrorCode::InvalidState, "non-finite entries");
  const double herm = hermiticity_defect(matrix_);
  if (herm > tol.hermitian) {
    std::ostringstream os;
    os << "not Hermitian (defect " << herm << ")";
    throw Error(ErrorCode::InvalidState, os.str());
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol.trace) {
    std::ostringstream os;
    os << "trace " << tr.real() << " differs from 1";
    throw Error(ErrorCode::InvalidState, os.str());
  }
  const EigenSystem es = eig_hermitian(0.5 * (matrix_ + matrix_.adjoint()));
  if (es.eigenvalues(0) < -tol.positivity) {
    std::ostringstream os;
    os << "negative eigenvalue " << es.eigenvalues(0);
    throw Error(ErrorCode::InvalidState, os.str());
  }
}

bool DensityMatrix::is_valid(const StateTolerances& tol) const noexcept {
  try {
    validate(tol);
    return true;
  } catch (const Error&) {
    return false;
  }
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

DensityMatrix DensityMatrix::marginal(int keep) const {
  ComplexMatrix reduced = partial_trace(matrix_, dims_, keep);
  return DensityMatrix(std::move(reduced), Dims{dims_.at(static_cast<std::size_t>(keep))});
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(kron(a.matrix(), b.matrix()), std::move(dims));
}

DensityMatrix pure_state(const ComplexVector& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidState, "zero state vector");
  const ComplexVector u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

double BlochVector::norm() const { return std::sqrt(dot(*this)); }

DensityMatrix from_bloch(const BlochVector& a, double tol) {
  if (a.norm() > 1.0 + tol) {
    std::ostringstream os;
    os << "Bloch vector norm " << a.norm() << " exceeds 1";
    throw Error(ErrorCode::NormExceeded, os.str());
  }
  return DensityMatrix(0.5 * (pauli::identity() + pauli::dot(a.x(), a.y(), a.z())));
}

BlochVector to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "to_bloch needs a qubit state");
  const ComplexMatrix& m = rho.matrix();
  return {(m * pauli::x()).trace().real(), (m * pauli::y()).trace().real(),
          (m * pauli::z()).trace().real()};
}

std::vector<SpectralComponent> spectral_decompose(const DensityMatrix& rho, double rank_tol) {
  const ComplexMatrix& m = rho.matrix();
  const EigenSystem es = eig_hermitian(0.5 * (m + m.adjoint()));

  std::vector<SpectralComponent> out;
  double total = 0.0;
  for (Eigen::Index k = es.eigenvalues.size() - 1; k >= 0; --k) {
    const double w = es.eigenvalues(k);
    if (w > rank_tol) {
      out.push_back({w, es.eigenvectors.col(k)});
      total += w;
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidState, "state has no weight above rank_tol");
  for (auto& c : out) c.weight /= total;
  return out;
}

double trace_distance(const ComplexMatrix& rho1, const ComplexMatrix& rho2) {
  if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "trace_distance: shapes differ");
  }
  const ComplexMatrix diff = rho1 - rho2;
  const EigenSystem es = eig_hermitian(0.5 * (diff + diff.adjoint()));
  return 0.5 * es.eigenvalues.cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dims() != rho2.dims()) {
    throw Error(ErrorCode::DimensionMismatch, "trace_distance: factor dims differ");
  }
  return trace_distance(rho1.matrix(), rho2.matrix());
}

}  // namespace dephaselab
