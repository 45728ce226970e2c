#include "nsplab/cli.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <string>

#include "nsplab/errors.hpp"
#include "nsplab/harness.hpp"
#include "nsplab/matrix_io.hpp"
#include "nsplab/nsp.hpp"
#include "nsplab/serialize.hpp"
#include "nsplab/solver.hpp"
#include "nsplab/width.hpp"

namespace nsplab {

namespace {

struct NspCheckArgs {
  std::string a_path, d_path, phi_path;
  Index s = 1;
  double tol = 1e-9;
};

struct WidthArgs {
  std::string d_path, kind = "gaussian_unit_norm", config, out, estimator = "both";
  Index d = 0, n = 0, s = 1;
  double gamma = 1.0;
  std::int64_t samples = 10000;
  std::uint64_t seed = 0;
};

struct BoundsArgs {
  BoundInputs b;
  std::optional<double> kappa, width, m;
  std::string config;
};

struct RecoverArgs {
  std::string b_path, y_path, d_path, x0_path;
  double eps = 0.0;
  int max_iter = AdmmParams{}.max_iter;
};

struct RunArgs {
  std::string config, out;
  std::uint64_t seed = 0;
};

int run_nsp_check(const NspCheckArgs& a, std::ostream& out) {
  const bool composed = !a.d_path.empty() || !a.phi_path.empty();
  if (composed == !a.a_path.empty())
    throw CLI::ValidationError("nsp-check", "give either --A, or both --D and --phi");
  if (composed) {
    if (a.d_path.empty() || a.phi_path.empty()) throw CLI::ValidationError("nsp-check", "--D and --phi go together");
    const Dictionary dict(read_matrix_file(a.d_path));
    out << to_json(d_nsp_check(dict, read_matrix_file(a.phi_path), a.s, a.tol)).dump(2) << '\n';
  } else {
    out << to_json(certify_nsp(read_matrix_file(a.a_path), a.s, a.tol)).dump(2) << '\n';
  }
  return 0;
}

void emit_experiment(ExperimentConfig cfg, const RunArgs& a, std::ostream& out) {
  cfg.seed = a.seed;
  if (!a.out.empty()) cfg.output = a.out;
  const ExperimentOutput result = run_experiment(cfg);
  if (cfg.output.empty()) {
    write_csv(out, result.records);
    return;
  }
  write_experiment(cfg, result);
  if (!result.summary.rows.empty()) write_csv(out, result.summary);
  else out << "wrote " << cfg.output << '\n';
}

int run_width(const WidthArgs& a, std::ostream& out) {
  if (!a.config.empty()) {
    const ExperimentConfig cfg = load_config(a.config);
    require(cfg.experiment == ExperimentKind::kWidthCompare, "width --config expects a width_compare experiment");
    emit_experiment(cfg, RunArgs{a.config, a.out, a.seed}, out);
    return 0;
  }
  std::optional<Dictionary> dict;
  if (!a.d_path.empty()) {
    dict.emplace(read_matrix_file(a.d_path));
  } else {
    if (a.d <= 0 || a.n <= 0) throw CLI::ValidationError("width", "give --D, or --d and --n for a generated dictionary");
    RngStream rng(a.seed, 0);
    dict.emplace(make_dictionary(parse_dictionary_kind(a.kind), a.d, a.n, rng));
  }
  const ConeParams c{a.gamma, a.s, dict->size()};
  nlohmann::json j;
  if (a.estimator == "mc" || a.estimator == "both") {
    RngStream rng(a.seed, 1);
    j[to_string(WidthEstimator::kConeProjectionExact)] = to_json(width_DS_gamma_mc(*dict, c, a.samples, rng));
  }
  if (a.estimator == "dual" || a.estimator == "both") {
    RngStream rng(a.seed, 1);
    j[to_string(WidthEstimator::kDualUpperBound)] = to_json(width_DS_gamma_dual(*dict, c, a.samples, rng));
  }
  j["crude_bound"] = number_json(crude_width_bound(*dict, dict->size()));
  out << j.dump(2) << '\n';
  return 0;
}

int run_bounds(BoundsArgs a, std::ostream& out) {
  if (!a.config.empty()) {
    const ExperimentConfig cfg = load_config(a.config);
    require(cfg.experiment == ExperimentKind::kBoundsTable, "bounds --config expects a bounds_table experiment");
    write_csv(out, bounds_table(cfg.bounds, cfg.width, cfg.bounds_m));
    return 0;
  }
  a.b.kappa = a.kappa;
  write_csv(out, bounds_table(a.b, a.width, a.m));
  return 0;
}

int run_recover(const RecoverArgs& a, std::ostream& out) {
  RecoveryProblem p;
  p.B = read_matrix_file(a.b_path);
  p.y = read_vector_file(a.y_path);
  p.eps = a.eps;
  if (!a.d_path.empty()) p.D.emplace(read_matrix_file(a.d_path));
  AdmmParams params;
  params.max_iter = a.max_iter;
  const RecoveryResult r = solve_l1_synthesis(p, params);
  nlohmann::json j = to_json(r);
  if (!a.x0_path.empty()) {
    const Vector x0 = read_vector_file(a.x0_path);
    require(x0.size() == r.x_hat.size(), "recover: x0 has the wrong length");
    j["err_x"] = number_json((r.x_hat - x0).norm());
    if (p.D) j["err_z"] = number_json((p.D->matrix() * (r.x_hat - x0)).norm());
  }
  out << j.dump(2) << '\n';
  return 0;
}

int run_config(const RunArgs& a, ExperimentKind expected, std::ostream& out) {
  const ExperimentConfig cfg = load_config(a.config);
  require(cfg.experiment == expected,
          std::string("config describes '") + to_string(cfg.experiment) + "', expected '" + to_string(expected) + "'");
  emit_experiment(cfg, a, out);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Null space property, width and recovery toolkit for sparse dictionaries", "nsplab"};
  app.require_subcommand(1);

  NspCheckArgs nsp;
  auto* nsp_cmd = app.add_subcommand("nsp-check", "Certify the stable NSP of A (or of Phi D for a full-spark D)");
  nsp_cmd->add_option("--A", nsp.a_path, "matrix file");
  nsp_cmd->add_option("--D", nsp.d_path, "dictionary file");
  nsp_cmd->add_option("--phi", nsp.phi_path, "measurement matrix file");
  nsp_cmd->add_option("--s", nsp.s, "sparsity")->required();
  nsp_cmd->add_option("--tol", nsp.tol, "verdict tolerance");

  WidthArgs width;
  auto* width_cmd = app.add_subcommand("width", "Monte Carlo widths of D S_gamma, or a width_compare campaign");
  width_cmd->add_option("--D", width.d_path, "dictionary file");
  width_cmd->add_option("--kind", width.kind, "generated dictionary kind");
  width_cmd->add_option("--d", width.d, "rows of a generated dictionary");
  width_cmd->add_option("--n", width.n, "atoms of a generated dictionary");
  width_cmd->add_option("--s", width.s, "sparsity");
  width_cmd->add_option("--gamma", width.gamma, "gamma in (0, 1]");
  width_cmd->add_option("--samples", width.samples, "Monte Carlo samples");
  width_cmd->add_option("--estimator", width.estimator, "mc, dual or both")
      ->check(CLI::IsMember({"mc", "dual", "both"}));
  width_cmd->add_option("--config", width.config, "width_compare config file");
  width_cmd->add_option("--out", width.out, "CSV output path (with --config)");
  width_cmd->add_option("--seed", width.seed, "random seed")->required();

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Measurement-count formulas as CSV");
  bounds_cmd->add_option("--config", bounds.config, "bounds_table config file");
  auto* eta_opt = bounds_cmd->add_option("--eta", bounds.b.eta, "lower bound on ||D x|| over S_gamma");
  auto* gamma_opt = bounds_cmd->add_option("--gamma", bounds.b.gamma, "gamma in (0, 1)");
  auto* rho_opt = bounds_cmd->add_option("--rho", bounds.b.rho, "max squared column norm of D");
  auto* s_opt = bounds_cmd->add_option("--s", bounds.b.s, "sparsity");
  auto* n_opt = bounds_cmd->add_option("--n", bounds.b.n, "number of atoms");
  auto* alpha_opt = bounds_cmd->add_option("--alpha", bounds.b.alpha, "first-moment constant alpha");
  auto* sigma_opt = bounds_cmd->add_option("--sigma", bounds.b.sigma, "tail parameter sigma");
  auto* c_opt = bounds_cmd->add_option("--C", bounds.b.C, "empirical width constant C");
  bounds_cmd->add_option("--d", bounds.b.d, "ambient dimension");
  bounds_cmd->add_option("--kappa", bounds.kappa, "covariance condition number (default 1)");
  bounds_cmd->add_option("--width", bounds.width, "w(D S) for thm_S (default: closed-form bound)");
  bounds_cmd->add_option("--m", bounds.m, "measurement count for prob_at_m (default: each m_min)");
  for (auto* opt : {eta_opt, gamma_opt, rho_opt, s_opt, n_opt, alpha_opt, sigma_opt, c_opt})
    opt->excludes(bounds_cmd->get_option("--config"));

  RecoverArgs rec;
  auto* rec_cmd = app.add_subcommand("recover", "l1-synthesis recovery, JSON result");
  rec_cmd->add_option("--B", rec.b_path, "matrix B = Phi D")->required();
  rec_cmd->add_option("--y", rec.y_path, "measurement vector")->required();
  rec_cmd->add_option("--eps", rec.eps, "noise radius")->required();
  rec_cmd->add_option("--D", rec.d_path, "dictionary (reports z_hat = D x_hat)");
  rec_cmd->add_option("--x0", rec.x0_path, "reference coefficients (reports errors)");
  rec_cmd->add_option("--max-iter", rec.max_iter, "iteration cap");

  RunArgs phase, preserve;
  auto* phase_cmd = app.add_subcommand("phase", "Recovery phase-transition campaign");
  phase_cmd->add_option("--config", phase.config, "phase_transition config file")->required();
  phase_cmd->add_option("--seed", phase.seed, "random seed")->required();
  phase_cmd->add_option("--out", phase.out, "CSV output path (overrides the config)");
  auto* preserve_cmd = app.add_subcommand("preserve", "NSP preservation campaign");
  preserve_cmd->add_option("--config", preserve.config, "preserve_nsp config file")->required();
  preserve_cmd->add_option("--seed", preserve.seed, "random seed")->required();
  preserve_cmd->add_option("--out", preserve.out, "CSV output path (overrides the config)");

  try {
    app.parse(argc, argv);
    if (bounds_cmd->parsed() && bounds.config.empty()) {
      for (auto* opt : {eta_opt, gamma_opt, rho_opt, s_opt, n_opt, alpha_opt, sigma_opt, c_opt})
        if (opt->count() == 0) throw CLI::RequiredError(opt->get_name());
    }
    if (nsp_cmd->parsed()) return run_nsp_check(nsp, out);
    if (width_cmd->parsed()) return run_width(width, out);
    if (bounds_cmd->parsed()) return run_bounds(bounds, out);
    if (rec_cmd->parsed()) return run_recover(rec, out);
    if (phase_cmd->parsed()) return run_config(phase, ExperimentKind::kPhaseTransition, out);
    if (preserve_cmd->parsed()) return run_config(preserve, ExperimentKind::kPreserveNsp, out);
    return 2;
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace nsplab
