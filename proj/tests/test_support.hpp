#pragma once

// Test-only oracles. Nothing here calls into the code paths it checks.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace tpslab::testing {

/// −p ln p − (1 − p) ln(1 − p), nats.
inline double binary_entropy(double p) {
  auto term = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

/// Entanglement entropy of a bipartite pure state psi on (da, db) from the
/// singular values of its da × db amplitude matrix.
inline double schmidt_entropy(const Eigen::VectorXcd& psi, Eigen::Index da, Eigen::Index db) {
  Eigen::MatrixXcd amp(da, db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < db; ++j) amp(i, j) = psi(i * db + j);
  }
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(amp).singularValues();
  const double norm2 = s.squaredNorm();
  double out = 0.0;
  for (double x : s) {
    const double p = x * x / norm2;
    if (p > 1e-15) out -= p * std::log(p);
  }
  return out;
}

/// tr_B of a (da·db)-dimensional operator by explicit index sums.
inline Eigen::MatrixXcd trace_out_second(const Eigen::MatrixXcd& rho, Eigen::Index da, Eigen::Index db) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(da, da);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      for (Eigen::Index k = 0; k < db; ++k) out(i, j) += rho(i * db + k, j * db + k);
  return out;
}

inline long sum_of_squares(const std::vector<long>& m) {
  long s = 0;
  for (long x : m) s += x * x;
  return s;
}

/// Coefficients c_0..c_n of det(λI − A) = Σ c_k λ^{n−k} via Faddeev–LeVerrier.
inline std::vector<std::complex<double>> characteristic_polynomial(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  std::vector<std::complex<double>> c(static_cast<std::size_t>(n + 1));
  c[0] = 1.0;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<std::size_t>(k - 1)] * Eigen::MatrixXcd::Identity(n, n);
    c[static_cast<std::size_t>(k)] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

inline std::complex<double> evaluate_polynomial(const std::vector<std::complex<double>>& c, double x) {
  std::complex<double> v = 0.0;
  for (const auto& ck : c) v = v * x + ck;
  return v;
}

}  // namespace tpslab::testing
