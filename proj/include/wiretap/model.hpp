#pragma once

// Problem instance and operating-point types for the K-user wiretap
// interference channel with power-splitting receivers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "wiretap/error.hpp"

namespace wiretap {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Harvested-energy model at a power-splitting receiver.
///
/// ProductForm:  E_k = (1 - eta_k) (sum_j p_j |h_kj|^2 + rho2_k)
/// Reformulated: E_k = sigma2_k + (1 - eta_k) sum_j p_j |h_kj|^2
///
/// The two disagree on which noise term reaches the harvester. Only the
/// reformulated model reproduces the published E = {0.8, 0.8} curves, so it is
/// the default.
enum class EnergyModel { ProductForm, Reformulated };

/// Whether the per-user rate under optimization is the secrecy rate or the
/// plain (reliable) TIN rate.
enum class RateMode { Secure, Reliable };

inline const char* to_string(RateMode mode) noexcept {
  return mode == RateMode::Secure ? "secure" : "reliable";
}

/// The deterministic problem instance. Gains are row = receiver, column =
/// transmitter. Noise quantities are variances.
struct SystemConfig {
  std::size_t num_users = 0;
  std::size_t num_eve_antennas = 0;
  std::vector<ComplexVector> gains;
  std::vector<ComplexVector> eve_channels;
  std::vector<double> antenna_noise_vars;
  std::vector<double> processing_noise_vars;
  double eve_antenna_noise_var = 0.0;
  double eve_processing_noise_var = 0.0;
  std::vector<double> power_budget;
  std::vector<double> eh_demands;
  EnergyModel energy_model = EnergyModel::Reformulated;

  /// |h_kj|^2
  [[nodiscard]] double gain2(std::size_t rx, std::size_t tx) const {
    return std::norm(gains[rx][tx]);
  }

  /// Total eavesdropper noise variance (antenna + processing).
  [[nodiscard]] double eve_noise_var() const {
    return eve_antenna_noise_var + eve_processing_noise_var;
  }

  bool operator==(const SystemConfig&) const = default;
};

struct ConfigIssue {
  ErrorCode code;
  std::string field;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues)
      : Error(ErrorCode::ConfigError, summarize(issues)), issues_(std::move(issues)) {}

  [[nodiscard]] const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  static std::string summarize(const std::vector<ConfigIssue>& issues) {
    std::string out;
    for (const auto& issue : issues) {
      if (!out.empty()) out += "; ";
      out += std::string(to_string(issue.code)) + " in '" + issue.field + "': " + issue.message;
    }
    return out;
  }

  std::vector<ConfigIssue> issues_;
};

/// Every invariant violation of `cfg`, in field order. Empty means valid.
[[nodiscard]] inline std::vector<ConfigIssue> find_config_issues(const SystemConfig& cfg) {
  std::vector<ConfigIssue> issues;
  const std::size_t K = cfg.num_users;
  const std::size_t M = cfg.num_eve_antennas;
  auto add = [&](ErrorCode code, std::string field, std::string msg) {
    issues.push_back({code, std::move(field), std::move(msg)});
  };
  auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };

  if (K == 0) add(ErrorCode::DimensionMismatch, "num_users", "must be positive");
  if (M == 0) add(ErrorCode::DimensionMismatch, "num_eve_antennas", "must be positive");

  if (cfg.gains.size() != K) {
    add(ErrorCode::DimensionMismatch, "gains", "expected " + std::to_string(K) + " rows");
  }
  for (std::size_t k = 0; k < cfg.gains.size(); ++k) {
    if (cfg.gains[k].size() != K) {
      add(ErrorCode::DimensionMismatch, "gains[" + std::to_string(k) + "]",
          "expected " + std::to_string(K) + " columns");
    }
  }

  if (cfg.eve_channels.size() != K) {
    add(ErrorCode::DimensionMismatch, "eve_channels", "expected " + std::to_string(K) + " vectors");
  }
  for (std::size_t k = 0; k < cfg.eve_channels.size(); ++k) {
    if (cfg.eve_channels[k].size() != M) {
      add(ErrorCode::DimensionMismatch, "eve_channels[" + std::to_string(k) + "]",
          "expected length " + std::to_string(M));
    }
  }

  auto check_vector = [&](const std::vector<double>& v, const char* name, bool allow_zero,
                          ErrorCode bad_value) {
    if (v.size() != K) {
      add(ErrorCode::DimensionMismatch, name, "expected " + std::to_string(K) + " entries");
      return;
    }
    for (std::size_t k = 0; k < v.size(); ++k) {
      const bool ok = allow_zero ? (std::isfinite(v[k]) && v[k] >= 0.0) : finite_positive(v[k]);
      if (!ok) {
        add(bad_value, std::string(name) + "[" + std::to_string(k) + "]",
            allow_zero ? "must be non-negative" : "must be strictly positive");
      }
    }
  };
  check_vector(cfg.antenna_noise_vars, "antenna_noise_vars", false, ErrorCode::NonPositiveVariance);
  check_vector(cfg.processing_noise_vars, "processing_noise_vars", false,
               ErrorCode::NonPositiveVariance);
  if (!finite_positive(cfg.eve_antenna_noise_var)) {
    add(ErrorCode::NonPositiveVariance, "eve_antenna_noise_var", "must be strictly positive");
  }
  if (!finite_positive(cfg.eve_processing_noise_var)) {
    add(ErrorCode::NonPositiveVariance, "eve_processing_noise_var", "must be strictly positive");
  }
  // Budgets are not variances, but the same positivity rule applies.
  check_vector(cfg.power_budget, "power_budget", false, ErrorCode::NonPositiveVariance);
  check_vector(cfg.eh_demands, "eh_demands", true, ErrorCode::NegativeDemand);
  return issues;
}

/// Returns `cfg` unchanged when every invariant holds; throws ConfigError
/// carrying the complete list of violations otherwise.
inline SystemConfig validate_config(SystemConfig cfg) {
  auto issues = find_config_issues(cfg);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

/// Transmit powers and power-splitting coefficients for all users.
struct OperatingPoint {
  std::vector<double> powers;
  std::vector<double> splits;

  bool operator==(const OperatingPoint&) const = default;
};

inline void check_operating_point(const SystemConfig& cfg, const OperatingPoint& op,
                                  double tol = 1e-12) {
  if (op.powers.size() != cfg.num_users || op.splits.size() != cfg.num_users) {
    throw Error(ErrorCode::DimensionMismatch, "operating point must have K powers and K splits");
  }
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    if (!(op.powers[k] >= -tol && op.powers[k] <= cfg.power_budget[k] * (1.0 + tol) + tol)) {
      throw Error(ErrorCode::InvalidArgument, "power p_" + std::to_string(k + 1) + " out of range");
    }
    if (!(op.splits[k] >= -tol && op.splits[k] <= 1.0 + tol)) {
      throw Error(ErrorCode::InvalidArgument, "split eta_" + std::to_string(k + 1) + " out of [0,1]");
    }
  }
}

/// A permutation of user indices: the eavesdropper's successive-decoding
/// order. The user at position i is decoded while every user at a later
/// position is still present as interference. Indices are 0-based.
class DecodingOrder {
 public:
  explicit DecodingOrder(std::vector<std::size_t> sequence) : seq_(std::move(sequence)) {
    std::vector<bool> seen(seq_.size(), false);
    for (auto u : seq_) {
      if (u >= seq_.size() || seen[u]) {
        throw Error(ErrorCode::InvalidPermutation, "decoding order is not a permutation");
      }
      seen[u] = true;
    }
  }

  static DecodingOrder identity(std::size_t num_users) {
    std::vector<std::size_t> seq(num_users);
    std::iota(seq.begin(), seq.end(), std::size_t{0});
    return DecodingOrder(std::move(seq));
  }

  /// All K! orders, lexicographic.
  static std::vector<DecodingOrder> all(std::size_t num_users) {
    std::vector<std::size_t> seq(num_users);
    std::iota(seq.begin(), seq.end(), std::size_t{0});
    std::vector<DecodingOrder> out;
    do {
      out.emplace_back(seq);
    } while (std::next_permutation(seq.begin(), seq.end()));
    return out;
  }

  [[nodiscard]] std::size_t size() const noexcept { return seq_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& sequence() const noexcept { return seq_; }
  [[nodiscard]] std::size_t operator[](std::size_t i) const { return seq_[i]; }

  /// 1-based rendering, e.g. "2-1".
  [[nodiscard]] std::string tag() const {
    std::string out;
    for (std::size_t i = 0; i < seq_.size(); ++i) {
      if (i) out += '-';
      out += std::to_string(seq_[i] + 1);
    }
    return out;
  }

  bool operator==(const DecodingOrder&) const = default;

 private:
  std::vector<std::size_t> seq_;
};

/// Max-min weights on the probability simplex.
class Weights {
 public:
  explicit Weights(std::vector<double> alpha) : alpha_(std::move(alpha)) {
    if (alpha_.empty()) throw Error(ErrorCode::InvalidArgument, "weights must be non-empty");
    double sum = 0.0;
    for (double a : alpha_) {
      if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorCode::InvalidArgument, "weight outside [0,1]");
      sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidArgument, "weights must sum to 1");
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return alpha_.size(); }
  [[nodiscard]] double operator[](std::size_t k) const { return alpha_[k]; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return alpha_; }

 private:
  std::vector<double> alpha_;
};

}  // namespace wiretap
