#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tpslab/numkernel.hpp"

namespace tpslab {

/// One eigenvalue cluster: columns [begin, begin + multiplicity) of the
/// sorted eigenvector matrix.
struct EigenCluster {
  double representative = 0.0;  // mean of the member eigenvalues
  Index multiplicity = 0;
  Index begin = 0;
};

/// Hermitian operator together with its spectral decomposition and the
/// eigenvalue clusters used as its multiplicities.
class Hamiltonian {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const SpectralDecomposition<double>& decomposition() const noexcept { return decomposition_; }
  const std::vector<EigenCluster>& clusters() const noexcept { return clusters_; }
  std::vector<Index> multiplicities() const;
  Index dim() const noexcept { return matrix_.rows(); }
  double cluster_tol() const noexcept { return cluster_tol_; }

  /// Set when some consecutive eigenvalue gap lies in (tol, 10·tol), so the
  /// multiplicities depend on the chosen tolerance.
  bool ambiguous() const noexcept { return ambiguous_; }

 private:
  friend Hamiltonian cluster_spectrum(const ComplexMatrix& h, double cluster_tol);

  ComplexMatrix matrix_;
  SpectralDecomposition<double> decomposition_;
  std::vector<EigenCluster> clusters_;
  double cluster_tol_ = 0.0;
  bool ambiguous_ = false;
};

/// 1e-8 · ‖H‖₂, with a tiny absolute floor so that H = 0 still clusters.
double default_cluster_tolerance(const ComplexMatrix& h);

/// Coarsest partition of the ascending eigenvalues whose within-cluster
/// consecutive gaps are ≤ cluster_tol. Eigenvectors inside each cluster are
/// re-orthonormalized deterministically.
Hamiltonian cluster_spectrum(const ComplexMatrix& h, double cluster_tol);
Hamiltonian cluster_spectrum(const ComplexMatrix& h);

struct CommutantDescription {
  std::vector<Index> multiplicities;
  Index dimension = 0;        // Σ m_i², Lie dimension of U(H)
  Index torus_dimension = 0;  // Σ m_i, maximal abelian subgroup
};

CommutantDescription commutant_dimension(const Hamiltonian& h);

/// Independent route to Σ m_i²: nullity of the vectorized commutation map.
Index commutant_dimension_oracle(const ComplexMatrix& h, double rank_tol = kDefaultRankTolerance);

/// V · blockdiag(U_1, …, U_k) · V† with Haar U_i on each eigenspace.
ComplexMatrix sample_commuting_unitary(const Hamiltonian& h, RandomStream& rng);

/// V · diag(e^{iθ_1}, …, e^{iθ_dim}) · V†.
ComplexMatrix sample_torus_element(const Hamiltonian& h, std::span<const double> angles);

/// Random Hermitian matrix with the given eigenvalue multiplicities: cluster i
/// sits at i + u_i with u_i uniform in [0, 0.5), rotated by a Haar unitary.
ComplexMatrix planted_hamiltonian(std::span<const Index> multiplicities, RandomStream& rng);

}  // namespace tpslab
