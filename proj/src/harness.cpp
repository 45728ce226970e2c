#include "nsplab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "nsplab/errors.hpp"
#include "nsplab/matrix_io.hpp"
#include "nsplab/nsp.hpp"
#include "nsplab/parallel.hpp"
#include "nsplab/solver.hpp"
#include "nsplab/width.hpp"

namespace nsplab {

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kPreserveNsp: return "preserve_nsp";
    case ExperimentKind::kPhaseTransition: return "phase_transition";
    case ExperimentKind::kWidthCompare: return "width_compare";
    case ExperimentKind::kBoundsTable: return "bounds_table";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto kind : {ExperimentKind::kPreserveNsp, ExperimentKind::kPhaseTransition, ExperimentKind::kWidthCompare,
                    ExperimentKind::kBoundsTable})
    if (name == to_string(kind)) return kind;
  throw DomainError("unknown experiment: " + name);
}

namespace {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(std::string("config: field '") + key + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> get_optional(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(std::string("config: field '") + key + "' has the wrong type");
  }
}

template <typename T>
T get_required(const nlohmann::json& j, const char* key) {
  auto v = get_optional<T>(j, key);
  if (!v) throw DomainError(std::string("config: missing field '") + key + "'");
  return *v;
}

std::string fmt(double x) { return format_double(x); }
std::string fmt(Index x) { return std::to_string(x); }

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  require(j.is_object(), "config: top level must be a JSON object");
  ExperimentConfig cfg;
  cfg.experiment = parse_experiment_kind(get_required<std::string>(j, "experiment"));
  cfg.d = get_or<Index>(j, "d", cfg.d);
  cfg.n = get_or<Index>(j, "n", cfg.n);
  cfg.s = get_or<Index>(j, "s", cfg.s);
  cfg.gamma = get_or<double>(j, "gamma", cfg.gamma);

  if (auto it = j.find("dictionary"); it != j.end()) {
    if (it->is_string()) {
      cfg.dictionary = parse_dictionary_kind(it->get<std::string>());
    } else {
      require(it->is_object(), "config: 'dictionary' must be a string or an object");
      cfg.dictionary = parse_dictionary_kind(get_required<std::string>(*it, "kind"));
      cfg.dictionary_path = get_or<std::string>(*it, "path", "");
    }
  }
  if (auto it = j.find("spec"); it != j.end()) {
    if (it->is_string()) {
      cfg.spec = parse_subgaussian_kind(it->get<std::string>());
    } else {
      require(it->is_object(), "config: 'spec' must be a string or an object");
      cfg.spec = parse_subgaussian_kind(get_required<std::string>(*it, "kind"));
      cfg.covariance_path = get_or<std::string>(*it, "covariance_path", "");
      cfg.spec_C = get_optional<double>(*it, "C");
    }
  }
  cfg.m_grid = get_or<std::vector<Index>>(j, "m_grid", {});
  cfg.trials = get_or<Index>(j, "trials", cfg.trials);
  cfg.eps = get_or<double>(j, "eps", cfg.eps);
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.output = get_or<std::string>(j, "output", "");
  cfg.success_factor = get_or<double>(j, "success_factor", cfg.success_factor);
  cfg.tail_scale = get_or<double>(j, "tail_scale", cfg.tail_scale);
  cfg.audit_bounds = get_or<bool>(j, "audit_bounds", cfg.audit_bounds);
  cfg.n_grid = get_or<std::vector<Index>>(j, "n_grid", {});
  cfg.s_grid = get_or<std::vector<Index>>(j, "s_grid", {});
  cfg.gamma_grid = get_or<std::vector<double>>(j, "gamma_grid", {});
  cfg.samples = get_or<std::int64_t>(j, "samples", cfg.samples);

  if (auto it = j.find("bounds"); it != j.end()) {
    require(it->is_object(), "config: 'bounds' must be an object");
    BoundInputs& b = cfg.bounds;
    b.eta = get_or<double>(*it, "eta", b.eta);
    b.gamma = get_or<double>(*it, "gamma", cfg.gamma);
    b.rho = get_or<double>(*it, "rho", b.rho);
    b.alpha = get_or<double>(*it, "alpha", b.alpha);
    b.sigma = get_or<double>(*it, "sigma", b.sigma);
    b.C = get_or<double>(*it, "C", b.C);
    b.s = get_or<Index>(*it, "s", cfg.s);
    b.n = get_or<Index>(*it, "n", cfg.n);
    b.d = get_or<Index>(*it, "d", cfg.d);
    b.kappa = get_optional<double>(*it, "kappa");
    cfg.width = get_optional<double>(*it, "width");
    cfg.bounds_m = get_optional<double>(*it, "m");
  } else {
    cfg.bounds.gamma = cfg.gamma;
    cfg.bounds.s = cfg.s;
    cfg.bounds.n = cfg.n;
    cfg.bounds.d = cfg.d;
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("config: " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void validate(const ExperimentConfig& cfg) {
  require(cfg.d >= 1 && cfg.n >= 1, "config: d and n must be positive");
  require(cfg.s >= 1 && cfg.s <= cfg.n, "config: sparsity must satisfy 1 <= s <= n");
  require(cfg.gamma > 0.0 && cfg.gamma <= 1.0, "config: gamma must lie in (0, 1]");
  require(cfg.trials >= 1, "config: trials must be at least 1");
  require(cfg.eps >= 0.0, "config: eps must be nonnegative");
  require(cfg.success_factor >= 0.0 && cfg.tail_scale >= 0.0, "config: success_factor and tail_scale must be >= 0");
  require(cfg.dictionary != DictionaryKind::kUserMatrix || !cfg.dictionary_path.empty(),
          "config: user_matrix dictionary needs a path");
  require(cfg.spec != SubgaussianKind::kGaussianSigma || !cfg.covariance_path.empty(),
          "config: gaussian_sigma spec needs a covariance_path");
  if (cfg.experiment == ExperimentKind::kPreserveNsp || cfg.experiment == ExperimentKind::kPhaseTransition) {
    require(!cfg.m_grid.empty(), "config: m_grid must be nonempty");
    require(cfg.m_grid.front() >= 1, "config: m_grid entries must be positive");
    for (std::size_t i = 1; i < cfg.m_grid.size(); ++i)
      require(cfg.m_grid[i] > cfg.m_grid[i - 1], "config: m_grid must be strictly ascending");
  }
  if (cfg.experiment == ExperimentKind::kWidthCompare) require(cfg.samples >= 100, "config: samples must be >= 100");
}

std::size_t CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DomainError("csv: no column named " + name);
  return static_cast<std::size_t>(it - header.begin());
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << row[i];
  }
  out << '\n';
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& table, const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  write_row(out, table.header);
  for (const auto& row : table.rows) write_row(out, row);
}

std::string csv_string(const CsvTable& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

std::uint64_t trial_stream_id(ExperimentKind kind, Index m, Index trial) {
  const auto tag = static_cast<std::uint64_t>(kind) + 1;
  return hash_combine(hash_combine(tag, static_cast<std::uint64_t>(m)), static_cast<std::uint64_t>(trial));
}

namespace {
constexpr std::uint64_t kDictionaryStream = 0x6469637469ULL;
}

Dictionary build_dictionary(const ExperimentConfig& cfg, Index n) {
  std::optional<Matrix> user;
  if (cfg.dictionary == DictionaryKind::kUserMatrix) user = read_matrix_file(cfg.dictionary_path);
  RngStream rng(cfg.seed, hash_combine(kDictionaryStream, static_cast<std::uint64_t>(n)));
  return make_dictionary(cfg.dictionary, cfg.d, n, rng, user);
}

SubgaussianSpec build_spec(const ExperimentConfig& cfg) {
  std::optional<Matrix> cov;
  if (cfg.spec == SubgaussianKind::kGaussianSigma) cov = read_matrix_file(cfg.covariance_path);
  SubgaussianSpec spec = make_spec(cfg.spec, cfg.d, cov, cfg.spec_C);
  spec.covariance_path = cfg.covariance_path;
  return spec;
}

namespace {

struct Task {
  Index m;
  Index trial;
};

std::vector<Task> grid_tasks(const ExperimentConfig& cfg) {
  std::vector<Task> tasks;
  for (Index m : cfg.m_grid)
    for (Index t = 0; t < cfg.trials; ++t) tasks.push_back({m, t});
  return tasks;
}

}  // namespace

ExperimentOutput run_preserve_nsp(const ExperimentConfig& cfg) {
  validate(cfg);
  const Dictionary dict = build_dictionary(cfg, cfg.n);
  const NspCertificate base = certify_nsp(dict.matrix(), cfg.s);
  if (!base.holds())
    throw DomainError("preserve_nsp: the dictionary fails the NSP (gamma_star = " + format_double(base.gamma_star) +
                      "), so no Phi D can have it; aborting before sampling");
  const SubgaussianSpec spec = build_spec(cfg);

  const auto tasks = grid_tasks(cfg);
  std::vector<NspCertificate> certs(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    RngStream rng(cfg.seed, trial_stream_id(cfg.experiment, tasks[i].m, tasks[i].trial));
    const Matrix phi = sample_measurement_matrix(spec, tasks[i].m, cfg.d, rng);
    NspCertificate cert = certify_nsp(phi * dict.matrix(), cfg.s);
    cert.per_support_values.clear();
    certs[i] = std::move(cert);
  });

  ExperimentOutput out;
  out.records.header = {"m", "trial", "verdict", "gamma_star"};
  out.summary.header = {"m", "trials", "preserved", "frequency"};
  std::size_t k = 0;
  for (Index m : cfg.m_grid) {
    Index preserved = 0;
    for (Index t = 0; t < cfg.trials; ++t, ++k) {
      const auto& c = certs[k];
      out.records.rows.push_back({fmt(m), fmt(t), to_string(c.verdict), fmt(c.gamma_star)});
      if (c.holds()) ++preserved;
    }
    out.summary.rows.push_back({fmt(m), fmt(cfg.trials), fmt(preserved),
                                fmt(static_cast<double>(preserved) / static_cast<double>(cfg.trials))});
  }
  return out;
}

NecessityReport check_preservation_necessity(const ExperimentConfig& cfg, Index m, Index trials) {
  require(m >= 1 && trials >= 1, "necessity check: m and trials must be positive");
  const Dictionary dict = build_dictionary(cfg, cfg.n);
  const SubgaussianSpec spec = build_spec(cfg);
  NecessityReport rep;
  for (Index t = 0; t < trials; ++t) {
    RngStream rng(cfg.seed, trial_stream_id(cfg.experiment, m, t));
    const Matrix phi = sample_measurement_matrix(spec, m, cfg.d, rng);
    ++rep.trials;
    if (!certify_nsp(phi * dict.matrix(), cfg.s).holds()) ++rep.phi_d_failed;
  }
  return rep;
}

namespace {

struct PhaseRecord {
  bool success = false;
  double err_x = 0.0;
  double err_z = 0.0;
  double sigma_s = 0.0;
  SolverStatus status = SolverStatus::kConverged;
  // audit
  double gamma_star = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double eta_lower = std::numeric_limits<double>::quiet_NaN();
  double bound_x = std::numeric_limits<double>::quiet_NaN();
  double bound_z = std::numeric_limits<double>::quiet_NaN();
  bool audited = false;
  bool violated = false;
};

// Smallest certified error bound over a few admissible gamma in (gamma_star, 1).
void audit_trial(const Matrix& b, const Dictionary& dict, const ExperimentConfig& cfg, const Vector& x0,
                 const RecoveryResult& res, PhaseRecord& rec) {
  const NspCertificate cert = certify_nsp(b, cfg.s);
  rec.gamma_star = cert.gamma_star;
  if (!cert.holds() || res.status != SolverStatus::kConverged) return;
  std::vector<double> candidates;
  if (cfg.gamma > cert.gamma_star && cfg.gamma < 1.0) candidates.push_back(cfg.gamma);
  for (int k = 1; k < 8; ++k) candidates.push_back(cert.gamma_star + (1.0 - cert.gamma_star) * k / 8.0);
  for (double g : candidates) {
    if (g <= 0.0) continue;
    const double eta = certified_eta_lower_bound(b, cert, g);
    if (!(eta > 0.0)) continue;
    const RecoveryReport rep = evaluate_recovery(x0, res, dict, cfg.s, RecoveryBoundInputs{g, eta, cfg.eps, 1.0, 1.0});
    if (!rec.audited || rep.coef_bound < rec.bound_x) {
      rec.audited = true;
      rec.gamma = g;
      rec.eta_lower = eta;
      rec.bound_x = rep.coef_bound;
      rec.bound_z = rep.signal_bound;
      rec.violated = rep.violated();
    }
  }
}

}  // namespace

ExperimentOutput run_phase_transition(const ExperimentConfig& cfg) {
  validate(cfg);
  const Dictionary dict = build_dictionary(cfg, cfg.n);
  const SubgaussianSpec spec = build_spec(cfg);
  const auto tasks = grid_tasks(cfg);
  const double threshold = std::max(1e-6, cfg.success_factor * cfg.eps);

  std::vector<PhaseRecord> records(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    RngStream rng(cfg.seed, trial_stream_id(cfg.experiment, tasks[i].m, tasks[i].trial));
    const Matrix phi = sample_measurement_matrix(spec, tasks[i].m, cfg.d, rng);
    Vector x0 = Vector::Zero(cfg.n);
    for (Index j : random_support(cfg.n, cfg.s, rng)) x0(j) = rng.gaussian();
    if (cfg.tail_scale > 0.0) {
      for (Index j = 0; j < cfg.n; ++j)
        if (x0(j) == 0.0) x0(j) = cfg.tail_scale * rng.gaussian();
    }
    Vector e = Vector::Zero(tasks[i].m);
    if (cfg.eps > 0.0) {
      for (Index j = 0; j < e.size(); ++j) e(j) = rng.gaussian();
      e *= cfg.eps / e.norm();
    }
    const Matrix b = phi * dict.matrix();
    RecoveryProblem prob{b, b * x0 + e, cfg.eps, std::nullopt};
    const RecoveryResult res = solve_l1_synthesis(prob);

    PhaseRecord& rec = records[i];
    rec.status = res.status;
    rec.err_x = (res.x_hat - x0).norm();
    rec.err_z = (dict.matrix() * (res.x_hat - x0)).norm();
    rec.sigma_s = best_s_term_error(x0, cfg.s);
    rec.success = rec.err_x <= threshold;
    if (cfg.audit_bounds) audit_trial(b, dict, cfg, x0, res, rec);
  });

  ExperimentOutput out;
  out.records.header = {"m", "trial", "success", "err_x", "err_z", "sigma_s", "status"};
  out.summary.header = {"m", "trials", "successes", "success_rate", "converged"};
  if (cfg.audit_bounds) {
    for (const char* col : {"gamma_star", "gamma", "eta_lower", "bound_x", "bound_z", "bound_violated"})
      out.records.header.push_back(col);
    for (const char* col : {"audited", "bound_violations"}) out.summary.header.push_back(col);
  }
  std::size_t k = 0;
  for (Index m : cfg.m_grid) {
    Index successes = 0, converged = 0, audited = 0, violations = 0;
    for (Index t = 0; t < cfg.trials; ++t, ++k) {
      const PhaseRecord& r = records[k];
      std::vector<std::string> row = {fmt(m),        fmt(t),        r.success ? "1" : "0", fmt(r.err_x),
                                      fmt(r.err_z), fmt(r.sigma_s), to_string(r.status)};
      if (cfg.audit_bounds) {
        for (double v : {r.gamma_star, r.gamma, r.eta_lower, r.bound_x, r.bound_z}) row.push_back(fmt(v));
        row.push_back(r.audited ? (r.violated ? "1" : "0") : "");
      }
      out.records.rows.push_back(std::move(row));
      successes += r.success ? 1 : 0;
      converged += r.status == SolverStatus::kConverged ? 1 : 0;
      audited += r.audited ? 1 : 0;
      violations += (r.audited && r.violated) ? 1 : 0;
    }
    std::vector<std::string> row = {fmt(m), fmt(cfg.trials), fmt(successes),
                                    fmt(static_cast<double>(successes) / static_cast<double>(cfg.trials)),
                                    fmt(converged)};
    if (cfg.audit_bounds) {
      row.push_back(fmt(audited));
      row.push_back(fmt(violations));
    }
    out.summary.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<std::string> width_compare_row(const Dictionary& dict, Index s, double gamma, std::int64_t samples,
                                           std::uint64_t seed, std::uint64_t stream_id) {
  const ConeParams c{gamma, s, dict.size()};
  RngStream mc_rng(seed, stream_id);
  RngStream dual_rng(seed, stream_id);
  const WidthEstimate mc = width_DS_gamma_mc(dict, c, samples, mc_rng);
  const WidthEstimate dual = width_DS_gamma_dual(dict, c, samples, dual_rng);
  const double theory = dict.rho() > 0.0 ? theory_width_bound(c, dict.rho()) : 0.0;
  return {fmt(dict.size()), fmt(s),         fmt(gamma),         fmt(dict.rho()), fmt(mc.mean),
          fmt(mc.std_error), fmt(dual.mean), fmt(dual.std_error), fmt(theory),     fmt(crude_width_bound(dict, dict.size()))};
}

ExperimentOutput run_width_compare(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::vector<Index> ns = cfg.n_grid.empty() ? std::vector<Index>{cfg.n} : cfg.n_grid;
  const std::vector<Index> ss = cfg.s_grid.empty() ? std::vector<Index>{cfg.s} : cfg.s_grid;
  const std::vector<double> gs = cfg.gamma_grid.empty() ? std::vector<double>{cfg.gamma} : cfg.gamma_grid;
  struct Cell {
    Index n;
    Index s;
    double gamma;
  };
  std::vector<Cell> cells;
  for (Index n : ns)
    for (Index s : ss)
      for (double g : gs)
        if (s <= n) cells.push_back({n, s, g});

  std::vector<std::vector<std::string>> rows(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const Dictionary dict = build_dictionary(cfg, cells[i].n);
    // Same draws for every (s, gamma) at a given n, so rows are comparable.
    rows[i] = width_compare_row(dict, cells[i].s, cells[i].gamma, cfg.samples, cfg.seed,
                                trial_stream_id(cfg.experiment, cells[i].n, 0));
  });
  ExperimentOutput out;
  out.records.header = kWidthCompareHeader;
  out.records.rows = std::move(rows);
  return out;
}

CsvTable bounds_table(const BoundInputs& b, std::optional<double> width, std::optional<double> m) {
  validate(b);
  BoundInputs in = b;
  if (!in.kappa) in.kappa = 1.0;
  const double w = width ? *width : theory_width_bound(ConeParams{in.gamma, in.s, in.n}, in.rho);
  CsvTable table;
  table.header = {"formula_id", "m_min", "rate", "prob_at_m"};
  for (FormulaId id : kAllFormulas) {
    const MeasurementBound mb = measurement_bound(id, in, w);
    const double at = m ? *m : mb.m_min;
    table.rows.push_back({to_string(id), fmt(mb.m_min), fmt(mb.rate), fmt(success_probability(id, in, at))});
  }
  return table;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::kPreserveNsp: return run_preserve_nsp(cfg);
    case ExperimentKind::kPhaseTransition: return run_phase_transition(cfg);
    case ExperimentKind::kWidthCompare: return run_width_compare(cfg);
    case ExperimentKind::kBoundsTable: {
      ExperimentOutput out;
      out.records = bounds_table(cfg.bounds, cfg.width, cfg.bounds_m);
      return out;
    }
  }
  throw DomainError("unknown experiment");
}

std::string summary_path(const std::string& output) {
  const std::filesystem::path p(output);
  std::filesystem::path out = p.parent_path() / (p.stem().string() + "_summary" + p.extension().string());
  if (!p.has_extension()) out += ".csv";
  return out.string();
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const CsvTable& table, const std::string& comment) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_csv(out, table, comment);
}

}  // namespace

void write_experiment(const ExperimentConfig& cfg, const ExperimentOutput& out) {
  require(!cfg.output.empty(), "config: no output path");
  const std::string comment =
      std::string("nsplab ") + to_string(cfg.experiment) + " seed=" + std::to_string(cfg.seed) +
      " generated=" + utc_timestamp();
  write_file(cfg.output, out.records, comment);
  if (!out.summary.rows.empty()) write_file(summary_path(cfg.output), out.summary, comment);
}

}  // namespace nsplab
