#pragma once

#include <json.hpp>

#include "nsplab/nsp.hpp"
#include "nsplab/solver.hpp"
#include "nsplab/subgaussian.hpp"
#include "nsplab/width.hpp"

namespace nsplab {

/// Non-finite numbers are written as the strings "inf", "-inf" or "nan"
/// because JSON has no literal for them.
nlohmann::json number_json(double x);

/// {gamma_star, verdict, witness_support, witness_vector, s, tol, kernel_dim}
nlohmann::json to_json(const NspCertificate& cert);
nlohmann::json to_json(const DnspResult& result);
/// {kind, alpha, sigma, C, covariance_path}
nlohmann::json to_json(const SubgaussianSpec& spec);
/// {mean, std_error, samples, estimator, theory_bound}
nlohmann::json to_json(const WidthEstimate& est);
nlohmann::json to_json(const RecoveryResult& result);
nlohmann::json to_json(const RecoveryReport& report);

}  // namespace nsplab
