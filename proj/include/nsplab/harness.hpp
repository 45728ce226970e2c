#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsplab/dictionary.hpp"
#include "nsplab/smallball.hpp"
#include "nsplab/subgaussian.hpp"

namespace nsplab {

enum class ExperimentKind { kPreserveNsp, kPhaseTransition, kWidthCompare, kBoundsTable };
const char* to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kPreserveNsp;
  Index d = 1;
  Index n = 1;
  Index s = 1;
  double gamma = 0.5;
  DictionaryKind dictionary = DictionaryKind::kGaussianUnitNorm;
  std::string dictionary_path;  // kUserMatrix only
  SubgaussianKind spec = SubgaussianKind::kStdGaussian;
  std::string covariance_path;  // kGaussianSigma only
  std::optional<double> spec_C;
  std::vector<Index> m_grid;
  Index trials = 1;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::string output;

  // phase_transition
  double success_factor = 10.0;  // success iff err_x <= max(1e-6, success_factor * eps)
  double tail_scale = 0.0;       // off-support entries ~ tail_scale * N(0, 1); 0 gives exactly sparse x0
  bool audit_bounds = false;     // certify Phi D per trial and check the recovery error bound

  // width_compare grid; empty lists fall back to {n}, {s}, {gamma}
  std::vector<Index> n_grid;
  std::vector<Index> s_grid;
  std::vector<double> gamma_grid;
  std::int64_t samples = 2000;

  // bounds_table
  BoundInputs bounds;
  std::optional<double> width;  // defaults to the closed-form width bound
  std::optional<double> bounds_m;  // prob_at_m evaluated here; defaults to each m_min
};

/// Throws DomainError on missing or inconsistent fields.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& cfg);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

/// Header line, comma-separated rows, LF endings. When `comment` is nonempty
/// it is written first as "# <comment>".
void write_csv(std::ostream& out, const CsvTable& table, const std::string& comment = {});
std::string csv_string(const CsvTable& table);

struct ExperimentOutput {
  CsvTable records;
  CsvTable summary;
};

/// Stream id of one trial: a pure function of (experiment, m, trial).
std::uint64_t trial_stream_id(ExperimentKind kind, Index m, Index trial);

/// Builds the configured dictionary; random kinds draw from a dedicated stream of cfg.seed.
Dictionary build_dictionary(const ExperimentConfig& cfg, Index n);
SubgaussianSpec build_spec(const ExperimentConfig& cfg);

/// Aborts with DomainError when D itself fails the NSP; otherwise certifies
/// Phi D for every (m, trial). Columns {m, trial, verdict, gamma_star}.
ExperimentOutput run_preserve_nsp(const ExperimentConfig& cfg);

struct NecessityReport {
  Index trials = 0;
  Index phi_d_failed = 0;  // trials where Phi D also failed, as it must
  bool passed() const { return trials > 0 && phi_d_failed == trials; }
};

/// For a D that fails the NSP, ker(D) is inside ker(Phi D), so Phi D must fail
/// for every Phi. Runs `trials` draws at measurement count m and counts them.
NecessityReport check_preservation_necessity(const ExperimentConfig& cfg, Index m, Index trials);

/// Columns {m, trial, success, err_x, err_z, sigma_s, status}, plus
/// {gamma_star, gamma, eta_lower, bound_x, bound_z, bound_violated} with audit_bounds.
ExperimentOutput run_phase_transition(const ExperimentConfig& cfg);

/// One width_compare row for a fixed dictionary. The Monte Carlo and dual
/// estimators consume identical Gaussian draws from stream (seed, stream_id).
std::vector<std::string> width_compare_row(const Dictionary& dict, Index s, double gamma, std::int64_t samples,
                                           std::uint64_t seed, std::uint64_t stream_id);
inline const std::vector<std::string> kWidthCompareHeader = {"n",       "s",       "gamma",     "rho",
                                                             "mc_mean", "mc_se",   "dual_mean", "dual_se",
                                                             "theory_bound", "crude_bound"};

ExperimentOutput run_width_compare(const ExperimentConfig& cfg);

/// Columns {formula_id, m_min, rate, prob_at_m}.
CsvTable bounds_table(const BoundInputs& b, std::optional<double> width, std::optional<double> m);

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// "<dir>/<stem>_summary.csv" next to the given output path.
std::string summary_path(const std::string& output);

/// Writes the records (and summary, when it has rows) with a timestamped comment line.
void write_experiment(const ExperimentConfig& cfg, const ExperimentOutput& out);

}  // namespace nsplab
