#include "dephaselab/dephasing.hpp"

#include <cmath>
#include <sstream>

#include "dephaselab/error.hpp"

namespace dephaselab {

namespace {

void require_system_state(const DephasingModel& model, const DensityMatrix& rho_s0) {
  if (rho_s0.factors() != 1 || rho_s0.dim() != model.system_dim()) {
    std::ostringstream os;
    os << "initial system state has dimension " << rho_s0.dim() << ", model expects "
       << model.system_dim();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

void require_propagation(const DephasingModel& model, const Propagation& p) {
  if (static_cast<int>(p.unitaries.size()) != model.system_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "propagation does not match model");
  }
}

void require_open_unit_interval(double c, const char* what) {
  if (!(std::abs(c) < 1.0)) {
    throw Error(ErrorCode::OutOfDomain, std::string(what) + ": |c| must be < 1");
  }
}

void require_qubit(const DensityMatrix& rho_s0) {
  if (rho_s0.factors() != 1 || rho_s0.dim() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "closed forms need a single-qubit system state");
  }
}

// Converts a 2x2 matrix written in the {|1>, |0>} basis order into the
// library's {|0>, |1>} order.
ComplexMatrix from_one_zero_order(Complex a11, Complex a10, Complex a01, Complex a00) {
  ComplexMatrix m(2, 2);
  m << a00, a01, a10, a11;
  return m;
}

}  // namespace

DephasingModel::DephasingModel(ComplexMatrix env_hamiltonian, std::vector<ComplexMatrix> couplings,
                               DensityMatrix env_state, const Tolerances& tol, double rank_tol)
    : env_hamiltonian_(std::move(env_hamiltonian)),
      couplings_(std::move(couplings)),
      env_state_(std::move(env_state)),
      commuting_(true),
      tol_(tol) {
  const Eigen::Index de = env_hamiltonian_.rows();
  if (de == 0 || env_hamiltonian_.cols() != de) {
    throw Error(ErrorCode::DimensionMismatch, "H_E must be square and non-empty");
  }
  if (!is_hermitian(env_hamiltonian_, tol_.hermitian)) {
    throw Error(ErrorCode::NotHermitian, "H_E is not Hermitian");
  }
  if (couplings_.empty()) throw Error(ErrorCode::EmptyInput, "model needs at least one coupling");
  for (std::size_t n = 0; n < couplings_.size(); ++n) {
    const ComplexMatrix& b = couplings_[n];
    if (b.rows() != de || b.cols() != de) {
      std::ostringstream os;
      os << "B_" << n << " is " << b.rows() << "x" << b.cols() << ", H_E is " << de << "x" << de;
      throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    if (!is_hermitian(b, tol_.hermitian)) {
      throw Error(ErrorCode::NotHermitian, "B_" + std::to_string(n) + " is not Hermitian");
    }
    if (commutator(env_hamiltonian_, b).norm() > tol_.hermitian) commuting_ = false;
  }
  if (env_state_.dim() != de) {
    throw Error(ErrorCode::DimensionMismatch, "environment state does not match H_E");
  }
  env_state_.validate();
  env_spectrum_ = spectral_decompose(env_state_, rank_tol);
}

int DephasingModel::default_steps(double t) const {
  if (commuting_) return 1;
  return std::max(1, static_cast<int>(std::ceil(kDefaultStepsPerUnitTime * std::abs(t))));
}

DephasingModel qubit_model(const QubitModelParams& params) {
  const double eta_norm = params.eta.norm();
  if (std::abs(eta_norm - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "|eta| = " << eta_norm << ", expected 1";
    throw Error(ErrorCode::BadUnitVector, os.str());
  }
  const ComplexMatrix b = params.g * pauli::dot(params.eta.x(), params.eta.y(), params.eta.z());
  return DephasingModel(ComplexMatrix::Zero(2, 2), {-b, b}, from_bloch(params.alpha));
}

Propagation propagate(const DephasingModel& model, double t, int steps) {
  if (steps <= 0) steps = model.default_steps(t);
  Propagation p{t, {}};
  p.unitaries.reserve(model.couplings().size());

  if (model.commuting()) {
    for (const ComplexMatrix& b : model.couplings()) {
      p.unitaries.push_back(expm_hermitian(b, t, model.tolerances()));
    }
    return p;
  }

  const EigenSystem he = eig_hermitian(model.env_hamiltonian(), model.tolerances());
  const auto free_evolution = [&he](double s) {
    ComplexVector phases(he.eigenvalues.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) {
      phases(k) = std::polar(1.0, -s * he.eigenvalues(k));
    }
    return ComplexMatrix(he.eigenvectors * phases.asDiagonal() * he.eigenvectors.adjoint());
  };
  for (const ComplexMatrix& b : model.couplings()) {
    const auto interaction_picture = [&](double s) {
      const ComplexMatrix u = free_evolution(s);
      return ComplexMatrix(u.adjoint() * b * u);
    };
    p.unitaries.push_back(
        time_ordered_propagator(interaction_picture, t, steps, model.tolerances()));
  }
  return p;
}

std::vector<ComplexMatrix> propagators(const DephasingModel& model, double t, int steps) {
  return propagate(model, t, steps).unitaries;
}

ComplexMatrix DephasingFunctions::averaged() const {
  if (values.empty()) return {};
  ComplexMatrix out = ComplexMatrix::Zero(values.front().rows(), values.front().cols());
  for (std::size_t a = 0; a < values.size(); ++a) out += weights[a] * values[a];
  return out;
}

DephasingFunctions dephasing_functions(const DephasingModel& model, const Propagation& p) {
  require_propagation(model, p);
  const int ds = model.system_dim();
  DephasingFunctions f;
  f.t = p.t;
  for (const SpectralComponent& comp : model.env_spectrum()) {
    std::vector<ComplexVector> moved;
    moved.reserve(static_cast<std::size_t>(ds));
    for (const ComplexMatrix& v : p.unitaries) moved.push_back(v * comp.state);
    ComplexMatrix values(ds, ds);
    for (int n = 0; n < ds; ++n) {
      for (int m = 0; m < ds; ++m) {
        values(n, m) = n == m ? Complex(1.0, 0.0) : moved[m].dot(moved[n]);
      }
    }
    f.weights.push_back(comp.weight);
    f.values.push_back(std::move(values));
  }
  return f;
}

DephasingFunctions dephasing_functions(const DephasingModel& model, double t, int steps) {
  return dephasing_functions(model, propagate(model, t, steps));
}

DensityMatrix reduced_state(const DephasingModel& model, const DensityMatrix& rho_s0,
                            const Propagation& p) {
  require_system_state(model, rho_s0);
  const ComplexMatrix factors = dephasing_functions(model, p).averaged();
  return DensityMatrix(rho_s0.matrix().cwiseProduct(factors));
}

DensityMatrix reduced_state(const DephasingModel& model, const DensityMatrix& rho_s0, double t,
                            int steps) {
  return reduced_state(model, rho_s0, propagate(model, t, steps));
}

DensityMatrix global_state(const DephasingModel& model, const DensityMatrix& rho_s0,
                           const Propagation& p) {
  require_system_state(model, rho_s0);
  require_propagation(model, p);
  const int ds = model.system_dim();
  const int de = model.env_dim();
  const ComplexMatrix& c = rho_s0.matrix();

  ComplexMatrix out = ComplexMatrix::Zero(ds * de, ds * de);
  for (const SpectralComponent& comp : model.env_spectrum()) {
    std::vector<ComplexVector> moved;
    moved.reserve(static_cast<std::size_t>(ds));
    for (const ComplexMatrix& v : p.unitaries) moved.push_back(v * comp.state);
    for (int n = 0; n < ds; ++n) {
      for (int m = 0; m < ds; ++m) {
        out.block(n * de, m * de, de, de) +=
            (comp.weight * c(n, m)) * (moved[n] * moved[m].adjoint());
      }
    }
  }
  return DensityMatrix(std::move(out), Dims{ds, de});
}

DensityMatrix global_state(const DephasingModel& model, const DensityMatrix& rho_s0, double t,
                           int steps) {
  return global_state(model, rho_s0, propagate(model, t, steps));
}

DensityMatrix to_schroedinger_picture(const DensityMatrix& rho_se,
                                      const ComplexMatrix& system_hamiltonian,
                                      const ComplexMatrix& env_hamiltonian, double t) {
  if (rho_se.factors() != 2 || rho_se.dims()[0] != system_hamiltonian.rows() ||
      rho_se.dims()[1] != env_hamiltonian.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "Hamiltonians do not match the state factors");
  }
  const ComplexMatrix u =
      kron(expm_hermitian(system_hamiltonian, t), expm_hermitian(env_hamiltonian, t));
  return DensityMatrix(u * rho_se.matrix() * u.adjoint(), rho_se.dims());
}

DensityMatrix closed_form_zero_discord(double c, double g, const DensityMatrix& rho_s0, double t) {
  require_open_unit_interval(c, "closed_form_zero_discord");
  require_qubit(rho_s0);
  const ComplexMatrix& s = rho_s0.matrix();
  const Complex rot = std::polar(1.0, -2.0 * g * t);

  // Environment in |1>: coherence |1><0| picks up exp(-2igt); in |0>, the conjugate.
  ComplexMatrix up = s;
  up(1, 0) *= rot;
  up(0, 1) *= std::conj(rot);
  ComplexMatrix down = s;
  down(1, 0) *= std::conj(rot);
  down(0, 1) *= rot;

  ComplexMatrix env_one = ComplexMatrix::Zero(2, 2);
  env_one(1, 1) = 1.0;
  ComplexMatrix env_zero = ComplexMatrix::Zero(2, 2);
  env_zero(0, 0) = 1.0;

  ComplexMatrix out = 0.5 * (1.0 + c) * kron(up, env_one) + 0.5 * (1.0 - c) * kron(down, env_zero);
  return DensityMatrix(std::move(out), Dims{2, 2});
}

DensityMatrix closed_form_entangled(double c, double g, const DensityMatrix& rho_s0, double t) {
  require_open_unit_interval(c, "closed_form_entangled");
  require_qubit(rho_s0);
  const ComplexMatrix& s = rho_s0.matrix();
  const Complex l(std::cos(g * t), c * std::sin(g * t));
  const Complex k(0.0, std::sqrt(1.0 - c * c) * std::sin(g * t));
  const Complex lc = std::conj(l);
  const Complex kc = std::conj(k);
  const double l2 = std::norm(l);
  const double k2 = std::norm(k);

  const ComplexMatrix block11 = from_one_zero_order(l2, lc * k, l * kc, k2);
  const ComplexMatrix block00 = from_one_zero_order(l2, -l * k, -lc * kc, k2);
  const ComplexMatrix block10 = from_one_zero_order(lc * lc, -lc * k, lc * kc, -k2);

  ComplexMatrix out(4, 4);
  out.block(2, 2, 2, 2) = s(1, 1) * block11;
  out.block(0, 0, 2, 2) = s(0, 0) * block00;
  out.block(2, 0, 2, 2) = s(1, 0) * block10;
  out.block(0, 2, 2, 2) = s(0, 1) * block10.adjoint();
  return DensityMatrix(std::move(out), Dims{2, 2});
}

}  // namespace dephaselab
