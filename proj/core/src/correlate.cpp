#include "dephaselab/correlate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "dephaselab/error.hpp"

namespace dephaselab {

namespace {

void require_two_qubits(const DensityMatrix& rho, const char* what) {
  if (rho.dims() != Dims{2, 2}) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " needs a two-qubit state");
  }
}

void require_bipartite(const DensityMatrix& rho, const char* what) {
  if (rho.factors() != 2) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " needs a bipartite state");
  }
}

BlochVector normalized(const std::array<double, 3>& v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

// Two unit vectors orthogonal to n and to each other.
std::pair<BlochVector, BlochVector> tangent_basis(const BlochVector& n) {
  const std::array<double, 3> seed =
      std::abs(n.x()) < 0.9 ? std::array<double, 3>{1.0, 0.0, 0.0}
                            : std::array<double, 3>{0.0, 1.0, 0.0};
  const double proj = seed[0] * n.x() + seed[1] * n.y() + seed[2] * n.z();
  const BlochVector e1 =
      normalized({seed[0] - proj * n.x(), seed[1] - proj * n.y(), seed[2] - proj * n.z()});
  const BlochVector e2(n.y() * e1.z() - n.z() * e1.y(), n.z() * e1.x() - n.x() * e1.z(),
                       n.x() * e1.y() - n.y() * e1.x());
  return {e1, e2};
}

BlochVector step_along(const BlochVector& n, const BlochVector& e, double h) {
  return normalized({n.x() + h * e.x(), n.y() + h * e.y(), n.z() + h * e.z()});
}

std::vector<BlochVector> coarse_directions(int count) {
  std::vector<BlochVector> dirs = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    // Fibonacci lattice on the upper hemisphere; n and -n give the same basis.
    const double z = 1.0 - (k + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * k;
    dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return dirs;
}

}  // namespace

double concurrence(const DensityMatrix& rho) {
  require_two_qubits(rho, "concurrence");
  const ComplexMatrix& m = rho.matrix();
  const ComplexMatrix yy = kron(pauli::y(), pauli::y());
  // The square roots of the eigenvalues of rho * (yy rho* yy) are the singular
  // values of sqrt(rho) yy sqrt(rho)*. Taking them from an SVD avoids the
  // sqrt of round-off eigenvalues, which would cost half the digits.
  const ComplexMatrix root =
      hermitian_function(0.5 * (m + m.adjoint()), [](double x) { return std::sqrt(std::max(0.0, x)); });
  const Eigen::JacobiSVD<ComplexMatrix> svd(root * yy * root.conjugate());
  const Eigen::VectorXd& lam = svd.singularValues();  // descending
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double min_partial_transpose_eigenvalue(const DensityMatrix& rho) {
  require_bipartite(rho, "partial transpose test");
  const ComplexMatrix pt = partial_transpose(rho.matrix(), rho.dims(), 1);
  return eig_hermitian(0.5 * (pt + pt.adjoint())).eigenvalues(0);
}

bool ppt_is_entangled(const DensityMatrix& rho, double tol) {
  require_bipartite(rho, "ppt_is_entangled");
  const int a = rho.dims()[0];
  const int b = rho.dims()[1];
  if (a * b > 6 || a < 2 || b < 2) {
    std::ostringstream os;
    os << "PPT is only conclusive for 2x2 and 2x3, got " << a << "x" << b;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  return min_partial_transpose_eigenvalue(rho) < -tol;
}

ComplexMatrix pinch(const DensityMatrix& rho, int measured_factor, const BlochVector& direction) {
  require_bipartite(rho, "pinch");
  if (measured_factor < 0 || measured_factor > 1 ||
      rho.dims()[static_cast<std::size_t>(measured_factor)] != 2) {
    throw Error(ErrorCode::UnsupportedDimension, "measured factor must be a qubit");
  }
  const ComplexMatrix n_sigma = pauli::dot(direction.x(), direction.y(), direction.z());
  const int other = rho.dims()[static_cast<std::size_t>(1 - measured_factor)];
  const ComplexMatrix id = ComplexMatrix::Identity(other, other);
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (double sign : {1.0, -1.0}) {
    const ComplexMatrix proj = 0.5 * (pauli::identity() + sign * n_sigma);
    const ComplexMatrix p = measured_factor == 0 ? kron(proj, id) : kron(id, proj);
    out += p * rho.matrix() * p;
  }
  return out;
}

ZeroDiscordResult zero_discord_test(const DensityMatrix& rho, int measured_factor,
                                    const DiscordSearch& search) {
  require_bipartite(rho, "zero_discord_test");
  const auto residual = [&](const BlochVector& n) {
    return trace_distance(rho.matrix(), pinch(rho, measured_factor, n));
  };

  std::vector<std::pair<double, BlochVector>> scored;
  for (const BlochVector& n : coarse_directions(search.coarse_directions)) {
    scored.emplace_back(residual(n), n);
  }
  const std::size_t keep = std::min<std::size_t>(4, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(keep), scored.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });

  double best = std::numeric_limits<double>::infinity();
  BlochVector best_dir;
  for (std::size_t i = 0; i < keep; ++i) {
    auto [value, n] = scored[i];
    // Compass search in the tangent plane of the current direction.
    for (double h = search.initial_step; h >= search.final_step;) {
      const auto [e1, e2] = tangent_basis(n);
      bool moved = false;
      for (const BlochVector* e : {&e1, &e2}) {
        for (double sign : {1.0, -1.0}) {
          const BlochVector trial = step_along(n, *e, sign * h);
          const double r = residual(trial);
          if (r < value) {
            value = r;
            n = trial;
            moved = true;
          }
        }
      }
      if (!moved) h *= 0.5;
    }
    if (value < best) {
      best = value;
      best_dir = n;
    }
  }

  ZeroDiscordResult out;
  out.residual = best;
  out.direction = best_dir;
  out.is_zero_discord = best <= search.tolerance;
  out.best_basis = eig_hermitian(pauli::dot(best_dir.x(), best_dir.y(), best_dir.z())).eigenvectors;
  return out;
}

bool entanglement_generation_criterion(const DephasingModel& model, double t, int steps) {
  if (model.system_dim() != 2) {
    throw Error(ErrorCode::UnsupportedModel, "criterion needs a two-level system");
  }
  const Propagation p = propagate(model, t, steps);
  const ComplexMatrix& rho = model.env_state().matrix();
  const ComplexMatrix& v0 = p.unitaries[0];
  const ComplexMatrix& v1 = p.unitaries[1];
  const double gap = (v0 * rho * v0.adjoint() - v1 * rho * v1.adjoint()).norm();
  return gap > model.tolerances().hermitian;
}

double total_correlations(const DensityMatrix& rho_se) {
  require_bipartite(rho_se, "total_correlations");
  return trace_distance(rho_se, tensor(rho_se.marginal(0), rho_se.marginal(1)));
}

}  // namespace dephaselab
