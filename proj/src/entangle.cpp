#include "tpslab/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace tpslab {

namespace {

constexpr double kEigenvalueFloor = 1e-12;

void require_grid(std::span<const double> t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!std::isfinite(t_grid[i])) throw Error(ErrorKind::InvalidConfig, "t_grid has non-finite entry");
    if (i > 0 && t_grid[i] < t_grid[i - 1]) {
      throw Error(ErrorKind::InvalidConfig, "t_grid must be ascending");
    }
  }
}

void require_same_dim(const DensityState& state, Index dim, const char* what) {
  if (state.dim() != dim) {
    throw Error(ErrorKind::DimensionMismatch, std::string("state dimension ") +
                                                  std::to_string(state.dim()) + " vs " + what +
                                                  " dimension " + std::to_string(dim));
  }
}

}  // namespace

DensityState::DensityState(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
    throw Error(ErrorKind::InvalidState, "density matrix must be square and nonempty");
  }
  if (!all_finite(rho_)) throw Error(ErrorKind::InvalidState, "density matrix is not finite");
  if (hermiticity_residual(rho_) > kTolerance) {
    throw Error(ErrorKind::InvalidState, "density matrix is not Hermitian");
  }
  rho_ = (rho_ + rho_.adjoint().eval()) / 2.0;
  const double trace = rho_.trace().real();
  if (std::abs(trace - 1.0) > kTolerance) {
    throw Error(ErrorKind::InvalidState, "trace is " + std::to_string(trace));
  }
  const double min_ev = eigh(rho_).eigenvalues.minCoeff();
  if (min_ev < -kTolerance) {
    throw Error(ErrorKind::InvalidState, "negative eigenvalue " + std::to_string(min_ev));
  }
}

DensityState pure_state(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::ZeroVector, "cannot normalize the zero vector");
  const ComplexVector unit = psi / norm;
  return DensityState(unit * unit.adjoint());
}

DensityState product_state(std::span<const DensityState> factors, Index cap) {
  ComplexMatrix rho = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) rho = kron(rho, f.rho(), cap);
  return DensityState(std::move(rho));
}

DensityState maximally_mixed(Index dim) {
  return DensityState(identity(dim) / static_cast<double>(dim));
}

DensityState basis_state(Index dim, Index index) {
  if (index < 0 || index >= dim) throw Error(ErrorKind::DimensionMismatch, "basis index out of range");
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  rho(index, index) = 1.0;
  return DensityState(std::move(rho));
}

DensityState conjugate(const DensityState& state, const ComplexMatrix& u) {
  if (u.rows() != state.dim() || u.cols() != state.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "unitary does not match state dimension");
  }
  ComplexMatrix rho = u * state.rho() * u.adjoint();
  rho = (rho + rho.adjoint().eval()) / 2.0;
  return DensityState(std::move(rho));
}

DensityState evolve(const DensityState& state, const Hamiltonian& h, double t) {
  require_same_dim(state, h.dim(), "Hamiltonian");
  if (t == 0.0) return state;
  return conjugate(state, unitary_exp(h.decomposition(), t, 1));
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  const ComplexMatrix sym = (rho + rho.adjoint()) / 2.0;
  const RealVector ev = eigh(sym).eigenvalues;
  double s = 0.0;
  for (double p : ev) {
    if (p > kEigenvalueFloor) s -= p * std::log(p);
  }
  return std::max(s, 0.0);
}

ComplexMatrix in_frame(const DensityState& state, const TensorProductStructure& tps) {
  require_same_dim(state, tps.dim(), "TPS");
  return tps.frame().adjoint() * state.rho() * tps.frame();
}

EntropyProfile entropy_profile(const DensityState& state, const TensorProductStructure& tps) {
  const ComplexMatrix rho = in_frame(state, tps);
  const auto& dims = tps.factor_dims();
  const Index n = tps.factor_count();

  EntropyProfile out;
  out.per_factor.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const Index keep[] = {j};
    out.per_factor.push_back(von_neumann_entropy(partial_trace(rho, dims, keep)));
  }
  out.sorted_multiset = out.per_factor;
  std::sort(out.sorted_multiset.begin(), out.sorted_multiset.end());

  out.mutual_information = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      const Index keep[] = {j, k};
      const double joint = von_neumann_entropy(partial_trace(rho, dims, keep));
      const double mi = out.per_factor[static_cast<std::size_t>(j)] +
                        out.per_factor[static_cast<std::size_t>(k)] - joint;
      out.mutual_information(j, k) = out.mutual_information(k, j) = mi;
    }
  }
  return out;
}

double product_form_residual(const ComplexMatrix& rho, std::span<const Index> dims) {
  ComplexMatrix product = ComplexMatrix::Identity(1, 1);
  for (Index j = 0; j < static_cast<Index>(dims.size()); ++j) {
    const Index keep[] = {j};
    product = kron(product, partial_trace(rho, dims, keep));
  }
  return (rho - product).norm();
}

EntropyTrajectory entropy_trajectory(const DensityState& state0, const Hamiltonian& h,
                                     const TensorProductStructure& tps,
                                     std::span<const double> t_grid) {
  require_grid(t_grid);
  require_same_dim(state0, h.dim(), "Hamiltonian");
  require_same_dim(state0, tps.dim(), "TPS");

  EntropyTrajectory out;
  out.points.reserve(t_grid.size());
  for (double t : t_grid) {
    const DensityState state = evolve(state0, h, t);
    out.points.push_back(
        {t, entropy_profile(state, tps), product_form_residual(in_frame(state, tps), tps.factor_dims())});
  }
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    const auto& prev = out.points[i - 1];
    const auto& cur = out.points[i];
    const double dt = cur.t - prev.t;
    for (std::size_t j = 0; j < cur.profile.per_factor.size(); ++j) {
      const double jump = std::abs(cur.profile.per_factor[j] - prev.profile.per_factor[j]);
      out.max_entropy_jump = std::max(out.max_entropy_jump, jump);
      if (dt > 0.0) out.lipschitz_estimate = std::max(out.lipschitz_estimate, jump / dt);
    }
  }
  return out;
}

double default_separability_tolerance(Index dim) { return 1e-7 * static_cast<double>(dim); }

SeparabilityReport separability_persistence_test(const DensityState& state0, const Hamiltonian& h,
                                                 const TensorProductStructure& tps,
                                                 std::span<const double> t_grid,
                                                 std::optional<double> tol) {
  require_grid(t_grid);
  require_same_dim(state0, h.dim(), "Hamiltonian");
  SeparabilityReport report;
  report.tol = tol.value_or(default_separability_tolerance(tps.dim()));

  const double initial = product_form_residual(in_frame(state0, tps), tps.factor_dims());
  if (initial > report.tol) {
    throw Error(ErrorKind::NotProductState,
                "initial product-form residual " + std::to_string(initial));
  }

  for (double t : t_grid) {
    const DensityState state = evolve(state0, h, t);
    const ComplexMatrix rho = in_frame(state, tps);
    const auto profile = entropy_profile(state, tps);
    SeparabilityRow row{t, product_form_residual(rho, tps.factor_dims()),
                        profile.sorted_multiset.empty() ? 0.0 : profile.sorted_multiset.back()};
    report.max_residual = std::max(report.max_residual, row.product_residual);
    report.rows.push_back(row);
  }
  report.entangling = report.max_residual > report.tol;
  return report;
}

}  // namespace tpslab
