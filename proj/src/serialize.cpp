#include "nsplab/serialize.hpp"

#include <cmath>

namespace nsplab {

nlohmann::json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

namespace {

nlohmann::json vector_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number_json(v(i)));
  return out;
}

}  // namespace

nlohmann::json to_json(const NspCertificate& cert) {
  nlohmann::json out;
  out["gamma_star"] = number_json(cert.gamma_star);
  out["verdict"] = to_string(cert.verdict);
  out["witness_support"] = cert.witness_support ? nlohmann::json(*cert.witness_support) : nlohmann::json(nullptr);
  out["witness_vector"] = cert.witness ? vector_json(*cert.witness) : nlohmann::json(nullptr);
  out["s"] = cert.s;
  out["tol"] = cert.tol;
  out["kernel_dim"] = cert.kernel_dim;
  return out;
}

nlohmann::json to_json(const DnspResult& result) {
  nlohmann::json out;
  out["verdict"] = to_string(result.verdict);
  out["route"] = to_string(result.route);
  out["certificate"] = to_json(result.certificate);
  return out;
}

nlohmann::json to_json(const SubgaussianSpec& spec) {
  nlohmann::json out;
  out["kind"] = to_string(spec.kind);
  out["alpha"] = spec.alpha;
  out["sigma"] = spec.sigma;
  out["C"] = spec.width_constant;
  out["covariance_path"] = spec.covariance_path.empty() ? nlohmann::json(nullptr) : nlohmann::json(spec.covariance_path);
  return out;
}

nlohmann::json to_json(const WidthEstimate& est) {
  nlohmann::json out;
  out["mean"] = number_json(est.mean);
  out["std_error"] = number_json(est.std_error);
  out["samples"] = est.samples;
  out["estimator"] = to_string(est.estimator);
  out["theory_bound"] = number_json(est.theory_bound);
  return out;
}

nlohmann::json to_json(const RecoveryResult& result) {
  nlohmann::json out;
  out["x_hat"] = vector_json(result.x_hat);
  out["z_hat"] = result.z_hat ? vector_json(*result.z_hat) : nlohmann::json(nullptr);
  out["objective"] = number_json(result.objective);
  out["residual_norm"] = number_json(result.residual_norm);
  out["iterations"] = result.iterations;
  out["status"] = to_string(result.status);
  return out;
}

nlohmann::json to_json(const RecoveryReport& report) {
  nlohmann::json out;
  out["err_x"] = number_json(report.err_x);
  out["err_z"] = number_json(report.err_z);
  out["sigma_s"] = number_json(report.sigma_s);
  out["coef_bound"] = number_json(report.coef_bound);
  out["signal_bound"] = number_json(report.signal_bound);
  out["violated"] = report.violated();
  return out;
}

}  // namespace nsplab
