#include "tpslab/tps.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace tpslab {

namespace {

Eigen::Map<const ComplexVector> vec(const ComplexMatrix& m) {
  return {m.data(), m.size()};
}

ComplexMatrix stack_vectorized(std::span<const ComplexMatrix> ops) {
  if (ops.empty()) return {};
  ComplexMatrix out(ops.front().size(), static_cast<Index>(ops.size()));
  for (Index k = 0; k < out.cols(); ++k) out.col(k) = vec(ops[static_cast<std::size_t>(k)]);
  return out;
}

/// Orthonormal basis (as columns) of the column span of m.
ComplexMatrix orthonormal_span(const ComplexMatrix& m, double rank_tol) {
  if (m.cols() == 0) return m;
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_tol * sv.maxCoeff();
  const Index rank = std::count_if(sv.begin(), sv.end(), [&](double s) { return s > cutoff; });
  return svd.matrixU().leftCols(rank);
}

/// Dimension of the associative algebra generated by all generators: span of
/// words g_1 ⋯ g_k, grown one algebra at a time and then closed under right
/// multiplication.
Index generated_algebra_dim(std::span<const ObservableAlgebra> algebras, double rank_tol) {
  const Index dim = algebras.front().generators.front().rows();
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);

  std::vector<ComplexMatrix> all_generators;
  for (const auto& a : algebras) {
    all_generators.insert(all_generators.end(), a.generators.begin(), a.generators.end());
  }

  ComplexMatrix basis = vec(id);
  auto extend = [&](std::span<const ComplexMatrix> gens) {
    ComplexMatrix candidates(dim * dim, basis.cols() * (1 + static_cast<Index>(gens.size())));
    candidates.leftCols(basis.cols()) = basis;
    Index col = basis.cols();
    for (Index b = 0; b < basis.cols(); ++b) {
      const Eigen::Map<const ComplexMatrix> word(basis.col(b).data(), dim, dim);
      for (const auto& g : gens) {
        const ComplexMatrix product = word * g;
        candidates.col(col++) = vec(product);
      }
    }
    basis = orthonormal_span(candidates, rank_tol);
  };

  for (const auto& a : algebras) extend(a.generators);
  Index previous = -1;
  while (basis.cols() != previous && basis.cols() < dim * dim) {
    previous = basis.cols();
    extend(all_generators);
  }
  return basis.cols();
}

}  // namespace

TensorProductStructure::TensorProductStructure(std::vector<Index> factor_dims, ComplexMatrix frame)
    : factor_dims_(std::move(factor_dims)), frame_(std::move(frame)) {
  validate_factor_dims(factor_dims_);
  const Index dim = product_of(factor_dims_);
  if (frame_.rows() != dim || frame_.cols() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "frame is " + std::to_string(frame_.rows()) + "x" +
                                                  std::to_string(frame_.cols()) +
                                                  ", factor dims give " + std::to_string(dim));
  }
  require_unitary(frame_);
}

void validate_factor_dims(std::span<const Index> dims) {
  if (dims.empty()) throw Error(ErrorKind::InvalidFactorDim, "need at least one factor");
  for (Index d : dims) {
    if (d < 2) throw Error(ErrorKind::InvalidFactorDim, "factor dim " + std::to_string(d) + " < 2");
  }
}

TensorProductStructure standard_tps(std::vector<Index> factor_dims) {
  validate_factor_dims(factor_dims);
  const Index dim = product_of(factor_dims);
  require_within_cap(dim, dim, kDefaultDimensionCap);
  return {std::move(factor_dims), identity(dim)};
}

TensorProductStructure transform_tps(const TensorProductStructure& tps, const ComplexMatrix& s) {
  if (s.rows() != tps.dim() || s.cols() != tps.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "transform dimension does not match the TPS");
  }
  require_unitary(s);
  return {tps.factor_dims(), s * tps.frame()};
}

ComplexMatrix local_unitary(std::span<const ComplexMatrix> factors, Index cap) {
  return kron_all(factors, cap);
}

ComplexMatrix factor_permutation(std::span<const Index> dims, std::span<const Index> perm) {
  const std::size_t n = dims.size();
  if (perm.size() != n) throw Error(ErrorKind::DimensionMismatch, "permutation length mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    const auto p = static_cast<std::size_t>(perm[j]);
    if (perm[j] < 0 || p >= n || seen[p]) {
      throw Error(ErrorKind::DimensionMismatch, "not a permutation");
    }
    if (dims[p] != dims[j]) {
      throw Error(ErrorKind::DimensionMismatch, "can only exchange factors of equal dimension");
    }
    seen[p] = true;
  }

  const Index dim = product_of(dims);
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  std::vector<Index> digits(n);
  for (Index i = 0; i < dim; ++i) {
    Index rem = i;
    for (std::size_t f = n; f-- > 0;) {
      digits[f] = rem % dims[f];
      rem /= dims[f];
    }
    Index target = 0;
    for (std::size_t j = 0; j < n; ++j) {
      target = target * dims[j] + digits[static_cast<std::size_t>(perm[j])];
    }
    out(target, i) = 1.0;
  }
  return out;
}

std::vector<ComplexMatrix> hermitian_basis(Index d) {
  using namespace std::complex_literals;
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(d * d));
  out.push_back(identity(d));
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(d, d);
      sym(j, k) = sym(k, j) = 1.0;
      out.push_back(std::move(sym));
      ComplexMatrix anti = ComplexMatrix::Zero(d, d);
      anti(j, k) = -1i;
      anti(k, j) = 1i;
      out.push_back(std::move(anti));
    }
  }
  for (Index l = 1; l < d; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(d, d);
    const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (Index m = 0; m < l; ++m) diag(m, m) = scale;
    diag(l, l) = -scale * static_cast<double>(l);
    out.push_back(std::move(diag));
  }
  return out;
}

ComplexMatrix embed_local(const ComplexMatrix& op, std::span<const Index> dims, Index factor,
                          Index cap) {
  const auto f = static_cast<std::size_t>(factor);
  if (factor < 0 || f >= dims.size() || op.rows() != dims[f] || op.cols() != dims[f]) {
    throw Error(ErrorKind::DimensionMismatch, "local operator does not fit factor " +
                                                  std::to_string(factor));
  }
  const Index left = product_of(dims.first(f));
  const Index right = product_of(dims.subspan(f + 1));
  return kron(kron(identity(left), op, cap), identity(right), cap);
}

std::vector<ObservableAlgebra> algebras_of(const TensorProductStructure& tps, Index cap) {
  require_within_cap(tps.dim(), tps.dim(), cap);
  const ComplexMatrix& frame = tps.frame();
  std::vector<ObservableAlgebra> out;
  for (Index j = 0; j < tps.factor_count(); ++j) {
    ObservableAlgebra alg{j, {}};
    for (const auto& g : hermitian_basis(tps.factor_dims()[static_cast<std::size_t>(j)])) {
      alg.generators.push_back(frame * embed_local(g, tps.factor_dims(), j, cap) *
                               frame.adjoint());
    }
    out.push_back(std::move(alg));
  }
  return out;
}

bool TpsConditionReport::trivial_intersections() const noexcept {
  return std::all_of(overlaps.begin(), overlaps.end(),
                     [](const AlgebraPairOverlap& o) { return o.intersection_dim == 1; });
}

Index span_intersection_dim(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b,
                            double rank_tol) {
  std::vector<ComplexMatrix> both(a.begin(), a.end());
  both.insert(both.end(), b.begin(), b.end());
  return matrix_rank(stack_vectorized(a), rank_tol) + matrix_rank(stack_vectorized(b), rank_tol) -
         matrix_rank(stack_vectorized(both), rank_tol);
}

TpsConditionReport check_tps_conditions(std::span<const ObservableAlgebra> algebras,
                                        double rank_tol) {
  TpsConditionReport report;
  if (algebras.empty() || algebras.front().generators.empty()) return report;
  const Index dim = algebras.front().generators.front().rows();
  for (const auto& a : algebras) {
    for (const auto& g : a.generators) {
      if (g.rows() != dim || g.cols() != dim) {
        throw Error(ErrorKind::DimensionMismatch, "algebras have different ambient dimensions");
      }
    }
  }
  report.full_dim = dim * dim;

  for (std::size_t j = 0; j < algebras.size(); ++j) {
    for (std::size_t k = j + 1; k < algebras.size(); ++k) {
      for (const auto& a : algebras[j].generators) {
        for (const auto& b : algebras[k].generators) {
          report.max_commutator_norm = std::max(report.max_commutator_norm, commutator(a, b).norm());
        }
      }
      report.overlaps.push_back(
          {static_cast<Index>(j), static_cast<Index>(k),
           span_intersection_dim(algebras[j].generators, algebras[k].generators, rank_tol)});
    }
  }
  report.generated_dim = generated_algebra_dim(algebras, rank_tol);
  return report;
}

bool same_algebra_set(std::span<const ObservableAlgebra> a, std::span<const ObservableAlgebra> b,
                      double rank_tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& alg : a) {
    const Index rank_a = matrix_rank(stack_vectorized(alg.generators), rank_tol);
    bool matched = false;
    for (std::size_t k = 0; k < b.size() && !matched; ++k) {
      if (used[k]) continue;
      const Index rank_b = matrix_rank(stack_vectorized(b[k].generators), rank_tol);
      if (rank_a != rank_b) continue;
      if (span_intersection_dim(alg.generators, b[k].generators, rank_tol) == rank_a) {
        used[k] = matched = true;
      }
    }
    if (!matched) return false;
  }
  return true;
}

DimensionLedger dimension_ledger(std::span<const Index> factor_dims) {
  validate_factor_dims(factor_dims);
  DimensionLedger l;
  const auto n = static_cast<std::int64_t>(factor_dims.size());
  std::int64_t sum_d = 0, sum_d2 = 0, prod_d = 1;
  for (Index d : factor_dims) {
    sum_d += d;
    sum_d2 += d * d;
    prod_d *= d;
  }
  l.dim_u_tps = sum_d2 - n + 1;
  l.dim_u_h_lower = prod_d;
  l.dim_u_h_upper = prod_d * prod_d;
  l.d_h = prod_d;
  l.d_tps = sum_d - n + 1;
  l.gap = l.d_h - l.d_tps;
  return l;
}

Index local_unitary_group_dimension(const TensorProductStructure& tps, Index cap) {
  using namespace std::complex_literals;
  const Index dim = tps.dim();
  require_within_cap(dim, dim, cap);
  std::vector<ComplexMatrix> generators;
  generators.push_back(1i * identity(dim));
  for (const auto& alg : algebras_of(tps, cap)) {
    for (const auto& g : alg.generators) generators.push_back(1i * g);
  }
  return matrix_rank(stack_vectorized(generators));
}

}  // namespace tpslab
