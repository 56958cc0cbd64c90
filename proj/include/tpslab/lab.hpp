#pragma once

// Seeded, persisted experiment runs: the dimension-gap scan, the
// commutant-orbit counterexample family and the entangling-evolution run.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tpslab/entangle.hpp"
#include "tpslab/io.hpp"
#include "tpslab/nonequivalence.hpp"
#include "tpslab/spectrum.hpp"
#include "tpslab/tps.hpp"

namespace tpslab {

// ---------------------------------------------------------------------------
// Dimension counting.

/// All multisets {d_1 ≤ … ≤ d_n} with n ≥ 2, d_j ≥ 2 and Π d_j = dim.
std::vector<std::vector<Index>> factorizations(Index dim);

struct DimensionScanRow {
  Index dim = 0;
  std::vector<Index> factors;
  DimensionLedger ledger;
};

/// Every factorization of every dim in 4..max_dim. Throws InvalidState if a
/// row has gap ≤ 0.
std::vector<DimensionScanRow> run_dimension_scan(Index max_dim);

struct QuditRow {
  Index n = 0;
  DimensionLedger ledger;
};

/// Ledger for (d, d, …, d) with n = 1..n_max.
std::vector<QuditRow> qudit_scaling_table(Index d, Index n_max);

std::string dimension_scan_csv(const std::vector<DimensionScanRow>& rows);
std::string qudit_table_csv(const std::vector<QuditRow>& rows);

// ---------------------------------------------------------------------------
// Configuration.

struct HamiltonianSource {
  enum class Kind { Explicit, Preset, Ensemble };
  Kind kind = Kind::Preset;
  ComplexMatrix matrix;  // Explicit
  std::string preset;    // Preset: ising2, local2, heisenberg2, gue(dim)
  Index ensemble_dim = 0;  // Ensemble: GUE of this dimension
};

struct Thresholds {
  std::optional<double> cluster_tol;  // default 1e-8·‖H‖₂
  double certificate = kDefaultCertificateThreshold;
  std::optional<double> separability;  // default 1e-7·dim
};

struct ExperimentConfig {
  std::string id = "experiment";
  std::uint64_t seed = 0;
  std::vector<Index> factor_dims{2, 2};
  HamiltonianSource hamiltonian;
  std::vector<double> t_grid;        // trajectory / separability grid
  std::vector<double> family_times;  // evolution transforms; default kπ/(2K)
  Index transforms = 10;             // K
  ProbeFamilySpec probes;
  Thresholds thresholds;
  std::string initial_state = "zeros";  // zeros | uniform | maximally_mixed
};

/// Parses "start:stop:step" (inclusive stop). Each field is a number, "pi",
/// or a form like "3pi/16" / "0.5*pi".
std::vector<double> parse_t_grid(std::string_view spec);
double parse_real(std::string_view text);

ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& cfg);

/// Named preset Hamiltonians; "gue(n)" draws from rng.
ComplexMatrix preset_hamiltonian(std::string_view name, RandomStream& rng);
ComplexMatrix resolve_hamiltonian(const HamiltonianSource& source, RandomStream& rng);
DensityState named_initial_state(std::string_view name, std::span<const Index> factor_dims);

// ---------------------------------------------------------------------------
// Runs.

struct RunRecord {
  std::string experiment;
  Json config;
  std::string code_version;
  Json outputs;
  Json verdicts;
  double wall_time_ms = 0.0;
  /// (file name, contents) written next to record.jsonl.
  std::vector<std::pair<std::string, std::string>> sidecars;

  Json to_json() const;
  /// Everything except wall time, serialized; identical for identical configs.
  std::string numeric_payload() const;
};

RunRecord run_counterexample_family(const ExperimentConfig& cfg);
RunRecord run_entangling_contradiction(const ExperimentConfig& cfg);

/// Appends to <root>/<id>/<seed>/record.jsonl and writes the sidecar CSVs.
std::filesystem::path persist_record(const RunRecord& record, const ExperimentConfig& cfg,
                                     const std::filesystem::path& root);

std::string trajectory_csv(const EntropyTrajectory& trajectory);

// ---------------------------------------------------------------------------
// Built-in invariant checks for `selftest`.

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<SelfTestCheck> run_selftest(std::uint64_t seed);

}  // namespace tpslab
