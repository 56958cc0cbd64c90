#include "tpslab/nonequivalence.hpp"

#include <algorithm>
#include <cmath>

namespace tpslab {

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::NonequivalentCertified ? "NonequivalentCertified" : "NotDistinguished";
}

ComplexVector haar_state(Index dim, RandomStream& rng) {
  ComplexVector psi(dim);
  for (Index i = 0; i < dim; ++i) psi(i) = rng.complex_normal();
  return psi / psi.norm();
}

std::vector<Probe> probe_family(Index dim, const ProbeFamilySpec& spec, RandomStream& rng) {
  std::vector<Probe> out;
  if (spec.basis) {
    for (Index i = 0; i < dim; ++i) out.push_back({"basis:" + std::to_string(i), basis_state(dim, i)});
  }
  if (spec.uniform) out.push_back({"uniform", pure_state(ComplexVector::Ones(dim))});
  for (Index k = 0; k < spec.haar; ++k) {
    out.push_back({"haar:" + std::to_string(k), pure_state(haar_state(dim, rng))});
  }
  return out;
}

TpsEquivalenceWitness certify_nonequivalence(const TensorProductStructure& a,
                                             const TensorProductStructure& b,
                                             std::span<const Probe> probes, double threshold) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "TPSs live on different Hilbert spaces");
  }
  TpsEquivalenceWitness w;
  auto dims_a = a.factor_dims();
  auto dims_b = b.factor_dims();
  std::sort(dims_a.begin(), dims_a.end());
  std::sort(dims_b.begin(), dims_b.end());
  if (dims_a != dims_b) {
    w.factor_dims_differ = true;
    w.verdict = Verdict::NonequivalentCertified;
    return w;
  }

  for (const auto& probe : probes) {
    ProbeReport r{probe.id, entropy_profile(probe.state, a).sorted_multiset,
                  entropy_profile(probe.state, b).sorted_multiset, 0.0};
    for (std::size_t j = 0; j < r.entropies_a.size(); ++j) {
      r.discrepancy = std::max(r.discrepancy, std::abs(r.entropies_a[j] - r.entropies_b[j]));
    }
    w.max_discrepancy = std::max(w.max_discrepancy, r.discrepancy);
    w.probe_reports.push_back(std::move(r));
  }
  w.verdict = w.max_discrepancy > threshold ? Verdict::NonequivalentCertified
                                            : Verdict::NotDistinguished;
  return w;
}

}  // namespace tpslab
