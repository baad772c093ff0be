#include "dephaselab/matrixcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dephaselab/error.hpp"

namespace dephaselab {

namespace {

constexpr int kMaxJacobiSweeps = 100;

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

void check_factorization(const ComplexMatrix& m, std::span<const int> dims, int factor,
                         const char* what) {
  require_square(m, what);
  if (dims.empty()) throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": empty dims");
  long product = 1;
  for (int d : dims) {
    if (d < 1) throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": factor dim < 1");
    product *= d;
  }
  if (product != m.rows()) {
    std::ostringstream os;
    os << what << ": dims multiply to " << product << " but matrix is " << m.rows() << "x"
       << m.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (factor < 0 || factor >= static_cast<int>(dims.size())) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": factor index out of range");
  }
}

// Row-major stride of `factor` inside the composite index.
long stride_of(std::span<const int> dims, int factor) {
  long s = 1;
  for (std::size_t f = static_cast<std::size_t>(factor) + 1; f < dims.size(); ++f) s *= dims[f];
  return s;
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).norm();
}

bool is_hermitian(const ComplexMatrix& m, double tol) { return hermiticity_defect(m) <= tol; }

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

EigenSystem eig_hermitian(const ComplexMatrix& h, const Tolerances& tol) {
  require_square(h, "eig_hermitian");
  const double defect = hermiticity_defect(h);
  if (!(defect <= tol.hermitian)) {
    std::ostringstream os;
    os << "||H - H^dagger|| = " << defect << " exceeds " << tol.hermitian;
    throw Error(ErrorCode::NotHermitian, os.str());
  }
  if (!h.allFinite()) throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");

  const Eigen::Index n = h.rows();
  ComplexMatrix a = 0.5 * (h + h.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double scale = a.norm();

  if (scale > 0.0) {
    const double target = std::numeric_limits<double>::epsilon() * scale;
    int sweep = 0;
    while (off_diagonal_norm(a) > target) {
      if (++sweep > kMaxJacobiSweeps) {
        throw Error(ErrorCode::NoConvergence, "Jacobi sweep cap exceeded");
      }
      for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          const Complex apq = a(p, q);
          const double r = std::abs(apq);
          if (r <= std::numeric_limits<double>::min()) continue;
          const double app = a(p, p).real();
          const double aqq = a(q, q).real();
          // Phase the pair so the 2x2 block is real symmetric, then rotate.
          const Complex phase = apq / r;
          const double zeta = (aqq - app) / (2.0 * r);
          const double t =
              (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          // G restricted to (p, q): diag(1, conj(phase)) * [[c, s], [-s, c]]
          const Complex gpp = c;
          const Complex gpq = s;
          const Complex gqp = -s * std::conj(phase);
          const Complex gqq = c * std::conj(phase);

          for (Eigen::Index k = 0; k < n; ++k) {
            const Complex akp = a(k, p);
            const Complex akq = a(k, q);
            a(k, p) = akp * gpp + akq * gqp;
            a(k, q) = akp * gpq + akq * gqq;
          }
          for (Eigen::Index k = 0; k < n; ++k) {
            const Complex apk = a(p, k);
            const Complex aqk = a(q, k);
            a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
            a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
          }
          for (Eigen::Index k = 0; k < n; ++k) {
            const Complex vkp = v(k, p);
            const Complex vkq = v(k, q);
            v(k, p) = vkp * gpp + vkq * gqp;
            v(k, q) = vkp * gpq + vkq * gqq;
          }
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          a(p, p) = a(p, p).real();
          a(q, q) = a(q, q).real();
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenSystem out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src).real();
    out.eigenvectors.col(k) = v.col(src);
  }
  return out;
}

ComplexMatrix hermitian_function(const ComplexMatrix& h, const std::function<double(double)>& f,
                                 const Tolerances& tol) {
  const EigenSystem es = eig_hermitian(h, tol);
  RealVector mapped(es.eigenvalues.size());
  for (Eigen::Index k = 0; k < mapped.size(); ++k) mapped(k) = f(es.eigenvalues(k));
  return es.eigenvectors * mapped.cast<Complex>().asDiagonal() * es.eigenvectors.adjoint();
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double theta, const Tolerances& tol) {
  const EigenSystem es = eig_hermitian(h, tol);
  ComplexVector phases(es.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::polar(1.0, -theta * es.eigenvalues(k));
  }
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims, int keep) {
  check_factorization(m, dims, keep, "partial_trace");
  const long dk = dims[static_cast<std::size_t>(keep)];
  const long stride = stride_of(dims, keep);
  const long rest = m.rows() / dk;

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (long r = 0; r < rest; ++r) {
    const long base = (r / stride) * (dk * stride) + r % stride;
    for (long a = 0; a < dk; ++a)
      for (long b = 0; b < dk; ++b) out(a, b) += m(base + a * stride, base + b * stride);
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const int> dims, int factor) {
  check_factorization(m, dims, factor, "partial_transpose");
  const long df = dims[static_cast<std::size_t>(factor)];
  const long stride = stride_of(dims, factor);
  const long n = m.rows();

  ComplexMatrix out(n, n);
  for (long i = 0; i < n; ++i) {
    const long fi = (i / stride) % df;
    for (long j = 0; j < n; ++j) {
      const long fj = (j / stride) % df;
      const long ii = i + (fj - fi) * stride;
      const long jj = j + (fi - fj) * stride;
      out(ii, jj) = m(i, j);
    }
  }
  return out;
}

ComplexMatrix polar_unitary(const ComplexMatrix& v, const Tolerances& tol) {
  require_square(v, "polar_unitary");
  const ComplexMatrix gram = v.adjoint() * v;
  const ComplexMatrix inv_sqrt = hermitian_function(
      0.5 * (gram + gram.adjoint()), [](double x) { return 1.0 / std::sqrt(x); }, tol);
  return v * inv_sqrt;
}

ComplexMatrix time_ordered_propagator(const OperatorFunction& generator, double t, int steps,
                                      const Tolerances& tol) {
  if (steps < 1) throw Error(ErrorCode::OutOfDomain, "time_ordered_propagator: steps < 1");

  const auto sample = [&](double s) {
    ComplexMatrix b = generator(s);
    const double defect = hermiticity_defect(b);
    if (!(defect <= tol.hermitian)) {
      std::ostringstream os;
      os << "generator at s = " << s << " has hermiticity defect " << defect;
      throw Error(ErrorCode::NonHermitianGenerator, os.str());
    }
    return b;
  };

  const Complex minus_i(0.0, -1.0);
  const double h = t / steps;
  ComplexMatrix b_left = sample(0.0);
  ComplexMatrix v = ComplexMatrix::Identity(b_left.rows(), b_left.cols());

  for (int k = 0; k < steps; ++k) {
    const double s = k * h;
    const ComplexMatrix b_mid = sample(s + 0.5 * h);
    const ComplexMatrix b_right = sample(k + 1 == steps ? t : s + h);
    const ComplexMatrix k1 = minus_i * (b_left * v);
    const ComplexMatrix k2 = minus_i * (b_mid * (v + 0.5 * h * k1));
    const ComplexMatrix k3 = minus_i * (b_mid * (v + 0.5 * h * k2));
    const ComplexMatrix k4 = minus_i * (b_right * (v + h * k3));
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    b_left = b_right;
  }
  return polar_unitary(v, tol);
}

namespace pauli {

ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << -1.0, 0.0, 0.0, 1.0;
  return m;
}

ComplexMatrix dot(double ax, double ay, double az) { return ax * x() + ay * y() + az * z(); }

}  // namespace pauli

}  // namespace dephaselab
