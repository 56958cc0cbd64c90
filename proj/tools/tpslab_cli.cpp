// tpslab command-line front end.
//
// Exit codes: 0 success, 2 validation error, 3 numerical-quality failure,
// 4 selftest assertion failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tpslab/entangle.hpp"
#include "tpslab/io.hpp"
#include "tpslab/lab.hpp"
#include "tpslab/nonequivalence.hpp"
#include "tpslab/spectrum.hpp"
#include "tpslab/tps.hpp"
#include "tpslab/version.hpp"

namespace {

using namespace tpslab;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitSelftest = 4;

/// Largest Hilbert-space dimension for which the dim² × dim² oracle runs.
constexpr Index kOracleMaxDim = 64;

std::vector<Index> parse_factors(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<Index>(v));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidConfig, "bad --factors entry '" + item + "'");
    }
  }
  validate_factor_dims(out);
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidConfig, "cannot write " + out_path);
  out << text;
}

void emit_json(Json j, const std::string& out_path) {
  j["version"] = std::string(kVersion);
  j["schema_version"] = kSchemaVersion;
  emit(j.dump(2) + "\n", out_path);
}

Hamiltonian load_hamiltonian(const ComplexMatrix& h, std::optional<double> cluster_tol, bool strict) {
  Hamiltonian ham = cluster_tol ? cluster_spectrum(h, *cluster_tol) : cluster_spectrum(h);
  if (ham.ambiguous()) {
    std::cerr << "warning: eigenvalue clustering is tolerance-sensitive (gap within 10x cluster_tol)\n";
    if (strict) throw Error(ErrorKind::AmbiguousClustering, "rejected under --strict");
  }
  return ham;
}

Json summarize(const Hamiltonian& h) {
  const auto c = commutant_dimension(h);
  return {{"multiplicities", c.multiplicities},
          {"dimension", c.dimension},
          {"torus_dimension", c.torus_dimension},
          {"ambiguous", h.ambiguous()},
          {"cluster_tol", h.cluster_tol()}};
}

struct Options {
  std::string factors;
  std::vector<Index> table;
  Index scan = 0;
  std::string format;
  std::string out;
  std::string hamiltonian_path;
  std::string tps_path;
  std::string config_path;
  std::string preset;
  std::string t_grid;
  std::string state = "zeros";
  std::string runs_dir = "runs";
  std::optional<std::uint64_t> seed;
  std::optional<double> cluster_tol;
  Index count = 10;
  bool strict = false;
};

ComplexMatrix hamiltonian_from_options(const Options& o, RandomStream& rng) {
  if (!o.hamiltonian_path.empty() && !o.preset.empty()) {
    throw Error(ErrorKind::InvalidConfig, "give either --hamiltonian or --preset, not both");
  }
  if (!o.hamiltonian_path.empty()) {
    ComplexMatrix h = matrix_from_json(read_json_file(o.hamiltonian_path));
    require_hermitian(h);
    return h;
  }
  if (o.preset.empty()) throw Error(ErrorKind::InvalidConfig, "need --hamiltonian or --preset");
  return preset_hamiltonian(o.preset, rng);
}

bool preset_is_stochastic(const Options& o) { return o.preset.starts_with("gue"); }

std::uint64_t require_seed(const Options& o) {
  if (!o.seed) throw Error(ErrorKind::InvalidConfig, "--seed is required for this subcommand");
  return *o.seed;
}

int cmd_dims(const Options& o) {
  if (!o.table.empty()) {
    if (o.format == "json") throw Error(ErrorKind::InvalidConfig, "--table emits CSV only");
    if (o.table[0] < 2 || o.table[1] < 1) {
      throw Error(ErrorKind::InvalidFactorDim, "--table needs d >= 2 and n_max >= 1");
    }
    emit(qudit_table_csv(qudit_scaling_table(o.table[0], o.table[1])), o.out);
    return kExitOk;
  }
  if (o.scan > 0) {
    emit(dimension_scan_csv(run_dimension_scan(o.scan)), o.out);
    return kExitOk;
  }
  if (o.factors.empty()) throw Error(ErrorKind::InvalidConfig, "dims needs --factors, --table or --scan");
  const auto dims = parse_factors(o.factors);
  const auto l = dimension_ledger(dims);
  Json j = {{"factor_dims", dims},    {"dim_u_tps", l.dim_u_tps}, {"dim_u_h_lower", l.dim_u_h_lower},
            {"dim_u_h_upper", l.dim_u_h_upper}, {"D_H", l.d_h},  {"D_TPS", l.d_tps},
            {"gap", l.gap},           {"dim_u_tps_numeric", nullptr}};
  if (product_of(dims) <= kOracleMaxDim) {
    j["dim_u_tps_numeric"] = local_unitary_group_dimension(standard_tps(dims));
  }
  if (o.format == "csv") {
    emit("dim_u_tps,dim_u_h_lower,dim_u_h_upper,D_H,D_TPS,gap\n" + std::to_string(l.dim_u_tps) + "," +
             std::to_string(l.dim_u_h_lower) + "," + std::to_string(l.dim_u_h_upper) + "," +
             std::to_string(l.d_h) + "," + std::to_string(l.d_tps) + "," + std::to_string(l.gap) + "\n",
         o.out);
    return kExitOk;
  }
  emit_json(std::move(j), o.out);
  return kExitOk;
}

int cmd_commutant(const Options& o) {
  const ComplexMatrix h = matrix_from_json(read_json_file(o.hamiltonian_path));
  const Hamiltonian ham = load_hamiltonian(h, o.cluster_tol, o.strict);
  const auto c = commutant_dimension(ham);
  Json j = {{"multiplicities", c.multiplicities},
            {"dimension", c.dimension},
            {"torus_dimension", c.torus_dimension},
            {"oracle_dimension", nullptr},
            {"oracle_agrees", nullptr},
            {"ambiguous", ham.ambiguous()},
            {"cluster_tol", ham.cluster_tol()}};
  if (ham.dim() <= kOracleMaxDim) {
    const Index oracle = commutant_dimension_oracle(h);
    j["oracle_dimension"] = oracle;
    j["oracle_agrees"] = oracle == c.dimension;
  }
  emit_json(std::move(j), o.out);
  return kExitOk;
}

int cmd_tps_check(const Options& o) {
  const auto tps = tps_from_json(read_json_file(o.tps_path));
  const auto algebras = algebras_of(tps);
  const auto report = check_tps_conditions(algebras);
  Json overlaps = Json::array();
  for (const auto& ov : report.overlaps) {
    overlaps.push_back({{"first", ov.first}, {"second", ov.second}, {"intersection_dim", ov.intersection_dim}});
  }
  emit_json({{"factor_dims", tps.factor_dims()},
             {"max_commutator_norm", report.max_commutator_norm},
             {"commute", report.commute()},
             {"overlaps", overlaps},
             {"trivial_intersections", report.trivial_intersections()},
             {"generated_dim", report.generated_dim},
             {"full_dim", report.full_dim},
             {"generates_full_algebra", report.generates_full_algebra()},
             {"passes", report.passes()}},
            o.out);
  return kExitOk;
}

int cmd_orbit(const Options& o) {
  RandomStream root(require_seed(o));
  RandomStream ham_rng = root.split();
  RandomStream probe_rng = root.split();
  RandomStream sample_rng = root.split();
  const auto dims = parse_factors(o.factors.empty() ? "2,2" : o.factors);
  const auto ref = standard_tps(dims);
  const ComplexMatrix h = hamiltonian_from_options(o, ham_rng);
  if (h.rows() != ref.dim()) throw Error(ErrorKind::DimensionMismatch, "Hamiltonian does not match --factors");
  const Hamiltonian ham = load_hamiltonian(h, o.cluster_tol, o.strict);
  const auto probes = probe_family(ref.dim(), {}, probe_rng);
  const auto ref_algebras = algebras_of(ref);

  Json samples = Json::array();
  Index changed = 0, certified = 0;
  for (Index k = 0; k < o.count; ++k) {
    const ComplexMatrix s = sample_commuting_unitary(ham, sample_rng);
    const auto moved = transform_tps(ref, s);
    const bool preserved = same_algebra_set(ref_algebras, algebras_of(moved));
    const auto w = certify_nonequivalence(ref, moved, probes);
    changed += !preserved;
    certified += w.verdict == Verdict::NonequivalentCertified;
    samples.push_back({{"sample", k},
                       {"commutation_residual", commutator(s, h).norm()},
                       {"unitarity_residual", unitarity_residual(s)},
                       {"algebra_set_preserved", preserved},
                       {"verdict", to_string(w.verdict)},
                       {"max_discrepancy", w.max_discrepancy}});
  }
  emit_json({{"factor_dims", dims},
             {"hamiltonian", summarize(ham)},
             {"samples", samples},
             {"algebra_set_changed", changed},
             {"certified", certified},
             {"count", o.count}},
            o.out);
  return kExitOk;
}

ExperimentConfig config_from_options(const Options& o) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    Json j = read_json_file(o.config_path);
    if (o.seed) j["seed"] = *o.seed;
    cfg = config_from_json(j);
  } else {
    cfg.seed = require_seed(o);
    if (!o.factors.empty()) cfg.factor_dims = parse_factors(o.factors);
    if (!o.hamiltonian_path.empty()) {
      cfg.hamiltonian.kind = HamiltonianSource::Kind::Explicit;
      cfg.hamiltonian.matrix = matrix_from_json(read_json_file(o.hamiltonian_path));
      cfg.id = "explicit";
    } else {
      cfg.hamiltonian.preset = o.preset.empty() ? "ising2" : o.preset;
      cfg.id = cfg.hamiltonian.preset;
    }
    cfg.thresholds.cluster_tol = o.cluster_tol;
    cfg.initial_state = o.state;
    cfg.transforms = o.count;
  }
  if (!o.t_grid.empty()) cfg.t_grid = parse_t_grid(o.t_grid);
  return cfg;
}

void check_strict(const RunRecord& r, bool strict) {
  if (r.outputs["hamiltonian"]["ambiguous"].get<bool>()) {
    std::cerr << "warning: eigenvalue clustering is tolerance-sensitive\n";
    if (strict) throw Error(ErrorKind::AmbiguousClustering, "rejected under --strict");
  }
}

int cmd_counterexamples(const Options& o) {
  const ExperimentConfig cfg = config_from_options(o);
  const RunRecord family = run_counterexample_family(cfg);
  check_strict(family, o.strict);
  const RunRecord contradiction = run_entangling_contradiction(cfg);
  persist_record(family, cfg, o.runs_dir);
  const auto path = persist_record(contradiction, cfg, o.runs_dir);
  std::cerr << "records appended to " << path.string() << "\n";
  emit(family.to_json().dump() + "\n" + contradiction.to_json().dump() + "\n", o.out);
  return kExitOk;
}

int cmd_entropy_trajectory(const Options& o) {
  if (preset_is_stochastic(o)) require_seed(o);
  RandomStream root(o.seed.value_or(0));
  RandomStream ham_rng = root.split();
  const auto dims = parse_factors(o.factors.empty() ? "2,2" : o.factors);
  const auto tps = standard_tps(dims);
  const ComplexMatrix h = hamiltonian_from_options(o, ham_rng);
  if (h.rows() != tps.dim()) throw Error(ErrorKind::DimensionMismatch, "Hamiltonian does not match --factors");
  const Hamiltonian ham = load_hamiltonian(h, o.cluster_tol, o.strict);
  const auto grid = parse_t_grid(o.t_grid.empty() ? "0:pi/4:pi/16" : o.t_grid);
  const auto state0 = named_initial_state(o.state, dims);
  const auto trajectory = entropy_trajectory(state0, ham, tps, grid);
  std::cerr << "lipschitz estimate " << trajectory.lipschitz_estimate << "\n";
  if (o.format == "json") {
    Json points = Json::array();
    for (const auto& p : trajectory.points) {
      points.push_back({{"t", p.t}, {"entropies", p.profile.per_factor}, {"product_residual", p.product_residual}});
    }
    emit_json({{"points", points}, {"lipschitz_estimate", trajectory.lipschitz_estimate}}, o.out);
    return kExitOk;
  }
  emit(trajectory_csv(trajectory), o.out);
  return kExitOk;
}

int cmd_selftest(const Options& o) {
  const auto checks = run_selftest(o.seed.value_or(20240607));
  bool all = true;
  for (const auto& c : checks) {
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
    all = all && c.passed;
  }
  Json results = Json::array();
  for (const auto& c : checks) results.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  emit_json({{"checks", results}, {"passed", all}}, o.out);
  return all ? kExitOk : kExitSelftest;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AmbiguousClustering:
    case ErrorKind::NoConvergence:
      return kExitNumerical;
    default:
      return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor product structures, Hamiltonian commutants and entanglement certificates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Options o;

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "Output path (default stdout)"); };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "64-bit seed"); };
  auto add_hamiltonian = [&](CLI::App* sub) {
    sub->add_option("--hamiltonian", o.hamiltonian_path, "Hamiltonian matrix JSON")->check(CLI::ExistingFile);
    sub->add_option("--preset", o.preset, "ising2 | local2 | heisenberg2 | gue(n)");
    sub->add_option("--cluster-tol", o.cluster_tol, "Eigenvalue clustering tolerance");
    sub->add_flag("--strict", o.strict, "Fail (exit 3) on tolerance-sensitive clustering");
  };

  auto* dims = app.add_subcommand("dims", "Dimension ledger for a factorization");
  dims->add_option("--factors", o.factors, "Factor dims, e.g. 2,2,2");
  dims->add_option("--table", o.table, "d n_max: qudit scaling table as CSV")->expected(2);
  dims->add_option("--scan", o.scan, "All factorizations of dims 4..max_dim as CSV");
  dims->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  add_out(dims);

  auto* commutant = app.add_subcommand("commutant", "Commutant dimension of a Hamiltonian");
  commutant->add_option("--hamiltonian", o.hamiltonian_path, "Hamiltonian matrix JSON")
      ->required()
      ->check(CLI::ExistingFile);
  commutant->add_option("--cluster-tol", o.cluster_tol, "Eigenvalue clustering tolerance");
  commutant->add_flag("--strict", o.strict, "Fail (exit 3) on tolerance-sensitive clustering");
  add_out(commutant);

  auto* tps_check = app.add_subcommand("tps-check", "Observable-algebra conditions of a TPS");
  tps_check->add_option("--tps", o.tps_path, "TPS JSON")->required()->check(CLI::ExistingFile);
  add_out(tps_check);

  auto* orbit = app.add_subcommand("orbit", "Transform a TPS by sampled symmetries of H");
  orbit->add_option("--factors", o.factors, "Factor dims (default 2,2)");
  orbit->add_option("--count", o.count, "Number of commuting unitaries")->check(CLI::NonNegativeNumber);
  add_hamiltonian(orbit);
  add_seed(orbit);
  add_out(orbit);

  auto* counterexamples = app.add_subcommand("counterexamples", "Counterexample family and entangling run");
  counterexamples->add_option("--config", o.config_path, "ExperimentConfig JSON")->check(CLI::ExistingFile);
  counterexamples->add_option("--factors", o.factors, "Factor dims (default 2,2)");
  counterexamples->add_option("--t-grid", o.t_grid, "start:stop:step");
  counterexamples->add_option("--count", o.count, "Transforms per family (K)")->check(CLI::NonNegativeNumber);
  counterexamples->add_option("--state", o.state, "zeros | uniform | maximally_mixed");
  counterexamples->add_option("--runs-dir", o.runs_dir, "Run directory root");
  add_hamiltonian(counterexamples);
  add_seed(counterexamples);
  add_out(counterexamples);

  auto* trajectory = app.add_subcommand("entropy-trajectory", "Entropy trajectory CSV");
  trajectory->add_option("--factors", o.factors, "Factor dims (default 2,2)");
  trajectory->add_option("--t-grid", o.t_grid, "start:stop:step (default 0:pi/4:pi/16)");
  trajectory->add_option("--state", o.state, "zeros | uniform | maximally_mixed");
  trajectory->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  add_hamiltonian(trajectory);
  add_seed(trajectory);
  add_out(trajectory);

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant suite");
  add_seed(selftest);
  add_out(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (dims->parsed()) return cmd_dims(o);
    if (commutant->parsed()) return cmd_commutant(o);
    if (tps_check->parsed()) return cmd_tps_check(o);
    if (orbit->parsed()) return cmd_orbit(o);
    if (counterexamples->parsed()) return cmd_counterexamples(o);
    if (trajectory->parsed()) return cmd_entropy_trajectory(o);
    if (selftest->parsed()) return cmd_selftest(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
