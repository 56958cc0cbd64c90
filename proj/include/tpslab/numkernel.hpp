#pragma once

// Dense complex linear-algebra kernels. Everything here is a free function
// over Eigen expressions, templated on the scalar type of the input.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tpslab/error.hpp"
#include "tpslab/rng.hpp"

namespace tpslab {

using Index = Eigen::Index;

template <typename Real>
using ComplexMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = ComplexMatrixT<double>;
using ComplexVector = ComplexVectorT<double>;
using RealVector = RealVectorT<double>;

/// Largest row or column count any constructor in this library will build.
inline constexpr Index kDefaultDimensionCap = 4096;
/// Singular values at or below this fraction of the largest count as zero.
inline constexpr double kDefaultRankTolerance = 1e-8;

template <typename Real>
struct SpectralDecomposition {
  RealVectorT<Real> eigenvalues;      // ascending
  ComplexMatrixT<Real> eigenvectors;  // columns, unitary

  Index dim() const noexcept { return eigenvalues.size(); }
};

// ---------------------------------------------------------------------------
// Small predicates and residuals.

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

/// ‖A − A†‖_F.
template <typename Derived>
auto hermiticity_residual(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).norm();
}

/// ‖U†U − I‖_F.
template <typename Derived>
auto unitarity_residual(const Eigen::MatrixBase<Derived>& u) {
  using Plain = typename Derived::PlainObject;
  return (u.adjoint() * u - Plain::Identity(u.cols(), u.cols())).norm();
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Plain = typename DerivedA::PlainObject;
  Plain out = a * b;
  out.noalias() -= b * a;
  return out;
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& a, double rel_tol = 1e-10) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::NotHermitian,
                "matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!all_finite(a)) throw Error(ErrorKind::NotHermitian, "matrix has non-finite entries");
  const double res = static_cast<double>(hermiticity_residual(a));
  if (res > rel_tol * static_cast<double>(a.norm())) {
    throw Error(ErrorKind::NotHermitian, "‖A − A†‖_F = " + std::to_string(res));
  }
}

template <typename Derived>
void require_unitary(const Eigen::MatrixBase<Derived>& u, double rel_tol = 1e-9) {
  if (u.rows() != u.cols()) throw Error(ErrorKind::NotUnitary, "matrix is not square");
  const double res = static_cast<double>(unitarity_residual(u));
  if (!(res <= rel_tol * static_cast<double>(u.rows()))) {
    throw Error(ErrorKind::NotUnitary, "‖U†U − I‖_F = " + std::to_string(res));
  }
}

inline void require_within_cap(Index rows, Index cols, Index cap) {
  if (rows > cap || cols > cap) {
    throw Error(ErrorKind::DimensionOverflow, std::to_string(rows) + "x" + std::to_string(cols) +
                                                  " exceeds cap " + std::to_string(cap));
  }
}

// ---------------------------------------------------------------------------
// Decompositions.

/// Hermitian eigendecomposition with ascending eigenvalues.
template <typename Derived>
auto eigh(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  using Matrix = ComplexMatrixT<Real>;
  require_hermitian(a);

  const Matrix sym = (a + a.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "Hermitian eigensolver hit its iteration cap");
  }
  return SpectralDecomposition<Real>{solver.eigenvalues(), solver.eigenvectors()};
}

/// Singular values in descending order, read off the eigenvalues ±σ of the
/// Hermitian dilation [[0, R], [R†, 0]] where R is A (or its QR factor when
/// A is tall). BDCSVD in Eigen 3.4.0 returns wrong values on matrices with
/// many repeated singular values, and JacobiSVD is too slow at dim².
template <typename Derived>
auto singular_values(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  using Matrix = ComplexMatrixT<Real>;
  Matrix m = a.rows() < a.cols() ? Matrix(a.adjoint()) : Matrix(a);
  if (m.rows() > m.cols()) {
    Eigen::HouseholderQR<Matrix> qr(m);
    m = qr.matrixQR().topRows(m.cols()).template triangularView<Eigen::Upper>();
  }
  const Index n = m.cols();
  Matrix dilation = Matrix::Zero(2 * n, 2 * n);
  dilation.topRightCorner(n, n) = m;
  dilation.bottomLeftCorner(n, n) = m.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dilation, Eigen::EigenvaluesOnly);
  RealVectorT<Real> out = solver.eigenvalues().tail(n).reverse();
  return RealVectorT<Real>(out.cwiseMax(Real(0)));
}

/// Number of singular values above rel_tol · max(σ_max, scale). A nonzero
/// scale keeps a matrix made only of round-off from counting as full rank.
template <typename Derived>
Index matrix_rank(const Eigen::MatrixBase<Derived>& a, double rel_tol = kDefaultRankTolerance,
                  double scale = 0.0) {
  if (a.size() == 0) return 0;
  const auto sv = singular_values(a);
  const double cutoff = rel_tol * std::max(static_cast<double>(sv.maxCoeff()), scale);
  return std::count_if(sv.begin(), sv.end(),
                       [cutoff](auto s) { return static_cast<double>(s) > cutoff; });
}

/// cols − rank.
template <typename Derived>
Index nullspace_dim(const Eigen::MatrixBase<Derived>& a, double rel_tol = kDefaultRankTolerance,
                    double scale = 0.0) {
  return a.cols() - matrix_rank(a, rel_tol, scale);
}

// ---------------------------------------------------------------------------
// Tensor operations.

template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
          Index cap = kDefaultDimensionCap) {
  using Plain = typename DerivedA::PlainObject;
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  require_within_cap(rows, cols, cap);

  Plain out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// ⊗ of a list of operators, leftmost factor most significant.
template <typename Matrix>
Matrix kron_all(std::span<const Matrix> factors, Index cap = kDefaultDimensionCap) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f, cap);
  return out;
}

inline Index product_of(std::span<const Index> dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>{});
}

/// Reduction of rho onto the factors in `keep` (factor 0 most significant).
/// Kept factors appear in the result in ascending index order.
template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& rho, std::span<const Index> dims,
                   std::span<const Index> keep) {
  using Plain = typename Derived::PlainObject;
  const Index n = static_cast<Index>(dims.size());
  if (keep.empty()) throw Error(ErrorKind::EmptyKeepSet, "nothing to keep");
  if (rho.rows() != rho.cols() || rho.rows() != product_of(dims)) {
    throw Error(ErrorKind::DimensionMismatch, "rho dimension does not match factor dims");
  }
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (Index k : keep) {
    if (k < 0 || k >= n) throw Error(ErrorKind::DimensionMismatch, "keep index out of range");
    kept[static_cast<std::size_t>(k)] = true;
  }

  // Split every full index into (kept part, traced part) once.
  const Index dim = rho.rows();
  std::vector<Index> kept_idx(static_cast<std::size_t>(dim));
  std::vector<Index> traced_idx(static_cast<std::size_t>(dim));
  Index kept_dim = 1;
  for (Index f = 0; f < n; ++f) {
    if (kept[static_cast<std::size_t>(f)]) kept_dim *= dims[static_cast<std::size_t>(f)];
  }
  for (Index i = 0; i < dim; ++i) {
    Index rem = i;
    Index k_part = 0, k_stride = 1, t_part = 0, t_stride = 1;
    for (Index f = n - 1; f >= 0; --f) {
      const Index d = dims[static_cast<std::size_t>(f)];
      const Index digit = rem % d;
      rem /= d;
      if (kept[static_cast<std::size_t>(f)]) {
        k_part += digit * k_stride;
        k_stride *= d;
      } else {
        t_part += digit * t_stride;
        t_stride *= d;
      }
    }
    kept_idx[static_cast<std::size_t>(i)] = k_part;
    traced_idx[static_cast<std::size_t>(i)] = t_part;
  }

  Plain out = Plain::Zero(kept_dim, kept_dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) {
      if (traced_idx[static_cast<std::size_t>(i)] == traced_idx[static_cast<std::size_t>(j)]) {
        out(kept_idx[static_cast<std::size_t>(i)], kept_idx[static_cast<std::size_t>(j)]) +=
            rho(i, j);
      }
    }
  }
  return out;
}

/// Matrix of S ↦ SH − HS acting on column-major vec(S).
template <typename Derived>
auto commutation_map(const Eigen::MatrixBase<Derived>& h, Index cap = kDefaultDimensionCap) {
  using Plain = typename Derived::PlainObject;
  const Plain id = Plain::Identity(h.rows(), h.cols());
  Plain out = kron(h.transpose(), id, cap);
  out -= kron(id, h, cap);
  return out;
}

// ---------------------------------------------------------------------------
// Random sampling and evolution.

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal pushed into Q.
template <typename Real = double>
ComplexMatrixT<Real> haar_unitary(Index dim, RandomStream& rng, Index cap = kDefaultDimensionCap) {
  using Matrix = ComplexMatrixT<Real>;
  if (dim < 1) throw Error(ErrorKind::InvalidConfig, "haar_unitary needs dim >= 1");
  require_within_cap(dim, dim, cap);

  Matrix z(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) z(i, j) = std::complex<Real>(rng.complex_normal());
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < dim; ++j) {
    const auto d = r(j, j);
    const Real mag = std::abs(d);
    q.col(j) *= mag > Real(0) ? d / mag : std::complex<Real>(1);
  }
  return q;
}

/// exp(sign · (−i) · H · t) from a spectral decomposition of H.
template <typename Real>
ComplexMatrixT<Real> unitary_exp(const SpectralDecomposition<Real>& dec, Real t, int sign = 1) {
  using Complex = std::complex<Real>;
  ComplexVectorT<Real> phases(dec.dim());
  for (Index i = 0; i < dec.dim(); ++i) {
    phases(i) = std::exp(Complex(0, -Real(sign) * dec.eigenvalues(i) * t));
  }
  return dec.eigenvectors * phases.asDiagonal() * dec.eigenvectors.adjoint();
}

template <typename Derived>
auto unitary_exp(const Eigen::MatrixBase<Derived>& h, typename Derived::RealScalar t,
                 int sign = 1) {
  return unitary_exp(eigh(h), t, sign);
}

// ---------------------------------------------------------------------------
// Named operators.

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix pauli_y() {
  using namespace std::complex_literals;
  ComplexMatrix m(2, 2);
  m << 0, -1i, 1i, 0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

/// Random Hermitian matrix from the Gaussian unitary ensemble.
inline ComplexMatrix gue(Index dim, RandomStream& rng) {
  ComplexMatrix g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
  }
  return (g + g.adjoint()) / 2.0;
}

}  // namespace tpslab
