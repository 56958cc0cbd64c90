#include "tpslab/spectrum.hpp"


namespace tpslab {

std::vector<Index> Hamiltonian::multiplicities() const {
  std::vector<Index> out;
  out.reserve(clusters_.size());
  for (const auto& c : clusters_) out.push_back(c.multiplicity);
  return out;
}

double default_cluster_tolerance(const ComplexMatrix& h) {
  const auto dec = eigh(h);
  const double norm2 = dec.eigenvalues.cwiseAbs().maxCoeff();
  return norm2 > 0.0 ? 1e-8 * norm2 : 1e-12;
}

Hamiltonian cluster_spectrum(const ComplexMatrix& h, double cluster_tol) {
  if (!(cluster_tol > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "cluster_tol must be positive");
  }
  Hamiltonian out;
  out.matrix_ = h;
  out.decomposition_ = eigh(h);
  out.cluster_tol_ = cluster_tol;

  const RealVector& ev = out.decomposition_.eigenvalues;
  const Index dim = ev.size();
  Index begin = 0;
  for (Index i = 1; i <= dim; ++i) {
    const bool split = i == dim || ev(i) - ev(i - 1) > cluster_tol;
    if (i < dim && split && ev(i) - ev(i - 1) < 10.0 * cluster_tol) out.ambiguous_ = true;
    if (!split) continue;
    const Index m = i - begin;
    out.clusters_.push_back({ev.segment(begin, m).mean(), m, begin});
    begin = i;
  }

  // Fix each degenerate block by a phase-normalized QR.
  ComplexMatrix& vecs = out.decomposition_.eigenvectors;
  for (const auto& c : out.clusters_) {
    if (c.multiplicity < 2) continue;
    const ComplexMatrix block = vecs.middleCols(c.begin, c.multiplicity);
    Eigen::HouseholderQR<ComplexMatrix> qr(block);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, c.multiplicity);
    for (Index j = 0; j < c.multiplicity; ++j) {
      const auto d = qr.matrixQR()(j, j);
      if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    vecs.middleCols(c.begin, c.multiplicity) = q;
  }
  return out;
}

Hamiltonian cluster_spectrum(const ComplexMatrix& h) {
  return cluster_spectrum(h, default_cluster_tolerance(h));
}

CommutantDescription commutant_dimension(const Hamiltonian& h) {
  CommutantDescription out;
  out.multiplicities = h.multiplicities();
  for (Index m : out.multiplicities) {
    out.dimension += m * m;
    out.torus_dimension += m;
  }
  return out;
}

Index commutant_dimension_oracle(const ComplexMatrix& h, double rank_tol) {
  require_hermitian(h);
  // Singular values of the map are |λ_i − λ_j|; measure them against ‖H‖.
  return nullspace_dim(commutation_map(h), rank_tol, h.norm());
}

ComplexMatrix sample_commuting_unitary(const Hamiltonian& h, RandomStream& rng) {
  const Index dim = h.dim();
  ComplexMatrix blocks = ComplexMatrix::Zero(dim, dim);
  for (const auto& c : h.clusters()) {
    blocks.block(c.begin, c.begin, c.multiplicity, c.multiplicity) =
        haar_unitary(c.multiplicity, rng);
  }
  const ComplexMatrix& v = h.decomposition().eigenvectors;
  return v * blocks * v.adjoint();
}

ComplexMatrix sample_torus_element(const Hamiltonian& h, std::span<const double> angles) {
  if (static_cast<Index>(angles.size()) != h.dim()) {
    throw Error(ErrorKind::AngleLengthMismatch, "expected " + std::to_string(h.dim()) +
                                                    " angles, got " +
                                                    std::to_string(angles.size()));
  }
  ComplexVector phases(h.dim());
  for (Index i = 0; i < h.dim(); ++i) {
    phases(i) = std::polar(1.0, angles[static_cast<std::size_t>(i)]);
  }
  const ComplexMatrix& v = h.decomposition().eigenvectors;
  return v * phases.asDiagonal() * v.adjoint();
}

ComplexMatrix planted_hamiltonian(std::span<const Index> multiplicities, RandomStream& rng) {
  Index dim = 0;
  for (Index m : multiplicities) dim += m;
  RealVector diag(dim);
  Index pos = 0;
  for (std::size_t i = 0; i < multiplicities.size(); ++i) {
    const double level = static_cast<double>(i) + 0.5 * rng.uniform();
    diag.segment(pos, multiplicities[i]).setConstant(level);
    pos += multiplicities[i];
  }
  const ComplexMatrix v = haar_unitary(dim, rng);
  ComplexMatrix h = v * diag.cast<std::complex<double>>().asDiagonal() * v.adjoint();
  return (h + h.adjoint().eval()) / 2.0;
}

}  // namespace tpslab
