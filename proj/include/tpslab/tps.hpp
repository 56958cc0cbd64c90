#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tpslab/numkernel.hpp"

namespace tpslab {

/// H ≅ H_1 ⊗ … ⊗ H_n, stored as factor dimensions plus a frame unitary that
/// maps the reference product basis onto H.
class TensorProductStructure {
 public:
  TensorProductStructure(std::vector<Index> factor_dims, ComplexMatrix frame);

  const std::vector<Index>& factor_dims() const noexcept { return factor_dims_; }
  const ComplexMatrix& frame() const noexcept { return frame_; }
  Index factor_count() const noexcept { return static_cast<Index>(factor_dims_.size()); }
  Index dim() const noexcept { return frame_.rows(); }

 private:
  std::vector<Index> factor_dims_;
  ComplexMatrix frame_;
};

/// Throws InvalidFactorDim unless dims is nonempty with every entry ≥ 2.
void validate_factor_dims(std::span<const Index> dims);

TensorProductStructure standard_tps(std::vector<Index> factor_dims);

/// frame' = S · frame.
TensorProductStructure transform_tps(const TensorProductStructure& tps, const ComplexMatrix& s);

/// ⊗_j u_j.
ComplexMatrix local_unitary(std::span<const ComplexMatrix> factors, Index cap = kDefaultDimensionCap);

/// Unitary that moves old factor perm[j] into slot j. Only factors of equal
/// dimension may be exchanged.
ComplexMatrix factor_permutation(std::span<const Index> dims, std::span<const Index> perm);

/// Identity followed by the d² − 1 generalized Gell-Mann matrices.
std::vector<ComplexMatrix> hermitian_basis(Index d);

/// I ⊗ … ⊗ op ⊗ … ⊗ I with op in slot `factor`.
ComplexMatrix embed_local(const ComplexMatrix& op, std::span<const Index> dims, Index factor,
                          Index cap = kDefaultDimensionCap);

struct ObservableAlgebra {
  Index factor_index = 0;
  std::vector<ComplexMatrix> generators;
};

std::vector<ObservableAlgebra> algebras_of(const TensorProductStructure& tps,
                                           Index cap = kDefaultDimensionCap);

struct AlgebraPairOverlap {
  Index first = 0;
  Index second = 0;
  Index intersection_dim = 0;
};

/// Observable-algebra conditions: pairwise commutation, trivial pairwise
/// intersection, and joint generation of the full operator algebra.
struct TpsConditionReport {
  double max_commutator_norm = 0.0;
  std::vector<AlgebraPairOverlap> overlaps;
  Index generated_dim = 0;
  Index full_dim = 0;

  static constexpr double kCommutatorTolerance = 1e-8;

  bool commute() const noexcept { return max_commutator_norm <= kCommutatorTolerance; }
  bool trivial_intersections() const noexcept;
  bool generates_full_algebra() const noexcept { return generated_dim == full_dim; }
  bool passes() const noexcept {
    return commute() && trivial_intersections() && generates_full_algebra();
  }
};

TpsConditionReport check_tps_conditions(std::span<const ObservableAlgebra> algebras,
                                        double rank_tol = kDefaultRankTolerance);

/// Dimension of span(a) ∩ span(b) for vectorized generator sets.
Index span_intersection_dim(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b,
                            double rank_tol = kDefaultRankTolerance);

/// Whether {A_1, A_2, …} and {B_1, B_2, …} coincide as sets of subspaces.
bool same_algebra_set(std::span<const ObservableAlgebra> a, std::span<const ObservableAlgebra> b,
                      double rank_tol = kDefaultRankTolerance);

/// Closed-form group dimensions for a factorization d_1 … d_n.
struct DimensionLedger {
  std::int64_t dim_u_tps = 0;      // Σ d_j² − n + 1
  std::int64_t dim_u_h_lower = 0;  // Π d_j
  std::int64_t dim_u_h_upper = 0;  // Π d_j²
  std::int64_t d_h = 0;            // Π d_j
  std::int64_t d_tps = 0;          // Σ d_j − n + 1
  std::int64_t gap = 0;            // d_h − d_tps
};

DimensionLedger dimension_ledger(std::span<const Index> factor_dims);

/// Numeric rank of the real Lie algebra spanned by the embedded u(d_j)
/// generators and i·1.
Index local_unitary_group_dimension(const TensorProductStructure& tps,
                                    Index cap = kDefaultDimensionCap);

}  // namespace tpslab
