#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tpslab/numkernel.hpp"
#include "tpslab/spectrum.hpp"
#include "tpslab/tps.hpp"

namespace tpslab {

/// Density operator: Hermitian, unit trace, positive semidefinite (each
/// within 1e-10). Construction validates; instances are immutable.
class DensityState {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit DensityState(ComplexMatrix rho);

  const ComplexMatrix& rho() const noexcept { return rho_; }
  Index dim() const noexcept { return rho_.rows(); }
  double purity() const { return (rho_ * rho_).trace().real(); }

 private:
  ComplexMatrix rho_;
};

DensityState pure_state(const ComplexVector& psi);
DensityState product_state(std::span<const DensityState> factors, Index cap = kDefaultDimensionCap);
DensityState maximally_mixed(Index dim);
/// Computational basis state |index⟩.
DensityState basis_state(Index dim, Index index);

/// e^{−iHt} ρ e^{iHt}.
DensityState evolve(const DensityState& state, const Hamiltonian& h, double t);
DensityState conjugate(const DensityState& state, const ComplexMatrix& u);

/// −tr(ρ ln ρ) in nats; eigenvalues below 1e-12 contribute nothing.
double von_neumann_entropy(const ComplexMatrix& rho);

struct EntropyProfile {
  std::vector<double> per_factor;
  std::vector<double> sorted_multiset;
  Eigen::MatrixXd mutual_information;
};

EntropyProfile entropy_profile(const DensityState& state, const TensorProductStructure& tps);

/// ρ in the TPS's reference product frame: frame† ρ frame.
ComplexMatrix in_frame(const DensityState& state, const TensorProductStructure& tps);

/// ‖ρ − ⊗_j tr_{≠j} ρ‖_F, with ρ already expressed in the product frame.
double product_form_residual(const ComplexMatrix& rho, std::span<const Index> dims);

struct TrajectoryPoint {
  double t = 0.0;
  EntropyProfile profile;
  double product_residual = 0.0;
};

struct EntropyTrajectory {
  std::vector<TrajectoryPoint> points;
  /// max over adjacent samples and factors of |ΔS| / Δt; a logged
  /// continuity witness, not a bound.
  double lipschitz_estimate = 0.0;
  /// max over adjacent samples and factors of |ΔS|.
  double max_entropy_jump = 0.0;
};

EntropyTrajectory entropy_trajectory(const DensityState& state0, const Hamiltonian& h,
                                     const TensorProductStructure& tps,
                                     std::span<const double> t_grid);

struct SeparabilityRow {
  double t = 0.0;
  double product_residual = 0.0;
  double max_entropy = 0.0;
};

struct SeparabilityReport {
  std::vector<SeparabilityRow> rows;
  double tol = 0.0;
  double max_residual = 0.0;
  bool entangling = false;
};

/// Default product-form tolerance, 1e-7 · dim.
double default_separability_tolerance(Index dim);

/// Evolves a product state and reports, per time, how far the state is from
/// the product of its marginals. Throws NotProductState if state0 is not.
SeparabilityReport separability_persistence_test(const DensityState& state0, const Hamiltonian& h,
                                                 const TensorProductStructure& tps,
                                                 std::span<const double> t_grid,
                                                 std::optional<double> tol = std::nullopt);

}  // namespace tpslab
