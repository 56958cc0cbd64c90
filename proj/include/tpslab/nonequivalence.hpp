#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tpslab/entangle.hpp"
#include "tpslab/tps.hpp"

namespace tpslab {

inline constexpr double kDefaultCertificateThreshold = 1e-6;

struct Probe {
  std::string id;
  DensityState state;
};

/// Which canonical probe states to build.
struct ProbeFamilySpec {
  bool basis = true;    // every computational basis state
  bool uniform = true;  // uniform superposition
  Index haar = 8;       // seeded Haar-random pure states
};

std::vector<Probe> probe_family(Index dim, const ProbeFamilySpec& spec, RandomStream& rng);

/// Haar-random pure state vector.
ComplexVector haar_state(Index dim, RandomStream& rng);

enum class Verdict { NonequivalentCertified, NotDistinguished };

std::string_view to_string(Verdict v) noexcept;

struct ProbeReport {
  std::string probe_id;
  std::vector<double> entropies_a;  // sorted single-factor entropies
  std::vector<double> entropies_b;
  double discrepancy = 0.0;
};

/// NotDistinguished is not a claim of equivalence.
struct TpsEquivalenceWitness {
  Verdict verdict = Verdict::NotDistinguished;
  bool factor_dims_differ = false;
  double max_discrepancy = 0.0;
  std::vector<ProbeReport> probe_reports;
};

/// Compares sorted single-factor entropy multisets of each probe under the
/// two TPSs. These multisets are invariant under local unitaries and factor
/// permutations, so any discrepancy above `threshold` certifies the two
/// structures are not related by such a map.
TpsEquivalenceWitness certify_nonequivalence(const TensorProductStructure& a,
                                             const TensorProductStructure& b,
                                             std::span<const Probe> probes,
                                             double threshold = kDefaultCertificateThreshold);

}  // namespace tpslab
