#pragma once

// Closed-form rates and energies at a fixed operating point. All logs are
// base 2 (bits per channel use).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "wiretap/linalg.hpp"
#include "wiretap/model.hpp"

namespace wiretap {

struct RateTuple {
  std::vector<double> per_user;

  [[nodiscard]] std::size_t size() const noexcept { return per_user.size(); }
  [[nodiscard]] double operator[](std::size_t k) const { return per_user[k]; }
  bool operator==(const RateTuple&) const = default;
};

struct EnergyVector {
  std::vector<double> per_user;
};

/// TIN rate of user k with power splitting:
/// log2(1 + eta p_k |h_kk|^2 / (sigma2 + eta (rho2 + sum_{j!=k} p_j |h_kj|^2)))
inline double legitimate_rate(const SystemConfig& cfg, const OperatingPoint& op, std::size_t k) {
  const double eta = op.splits[k];
  double interference = cfg.antenna_noise_vars[k];
  for (std::size_t j = 0; j < cfg.num_users; ++j) {
    if (j != k) interference += op.powers[j] * cfg.gain2(k, j);
  }
  const double signal = eta * op.powers[k] * cfg.gain2(k, k);
  const double noise = cfg.processing_noise_vars[k] + eta * interference;
  return std::log2(1.0 + signal / noise);
}

inline RateTuple legitimate_rates(const SystemConfig& cfg, const OperatingPoint& op) {
  RateTuple out;
  for (std::size_t k = 0; k < cfg.num_users; ++k) out.per_user.push_back(legitimate_rate(cfg, op, k));
  return out;
}

/// Power reaching the harvester of user k under the configured energy model.
inline double harvested_energy(const SystemConfig& cfg, const OperatingPoint& op, std::size_t k) {
  double received = 0.0;
  for (std::size_t j = 0; j < cfg.num_users; ++j) received += op.powers[j] * cfg.gain2(k, j);
  const double to_harvester = 1.0 - op.splits[k];
  if (cfg.energy_model == EnergyModel::ProductForm) {
    return to_harvester * (received + cfg.antenna_noise_vars[k]);
  }
  return cfg.processing_noise_vars[k] + to_harvester * received;
}

inline EnergyVector harvested_energies(const SystemConfig& cfg, const OperatingPoint& op) {
  EnergyVector out;
  for (std::size_t k = 0; k < cfg.num_users; ++k) out.per_user.push_back(harvested_energy(cfg, op, k));
  return out;
}

namespace detail {

inline std::vector<bool> subset_mask(std::size_t num_users, std::span<const std::size_t> subset) {
  if (subset.empty()) throw Error(ErrorCode::EmptySubset, "user subset must be non-empty");
  std::vector<bool> mask(num_users, false);
  for (auto u : subset) {
    if (u >= num_users) throw Error(ErrorCode::InvalidArgument, "user index out of range");
    mask[u] = true;
  }
  return mask;
}

/// I + sum_{l in users} p_l h_El h_El^H / sigma2_E
inline HermitianMatrix eve_covariance(const SystemConfig& cfg, std::span<const double> powers,
                                      const std::vector<bool>& users) {
  auto q = HermitianMatrix::identity(cfg.num_eve_antennas);
  const double scale = 1.0 / cfg.eve_noise_var();
  for (std::size_t l = 0; l < cfg.num_users; ++l) {
    if (users[l] && powers[l] > 0.0) q.add_rank_one(powers[l] * scale, cfg.eve_channels[l]);
  }
  return q;
}

}  // namespace detail

/// Interference-plus-noise covariance seen by the eavesdropper when decoding
/// a user while `interferers` remain undecoded.
inline HermitianMatrix eve_interference_covariance(const SystemConfig& cfg,
                                                   std::span<const double> powers,
                                                   const std::vector<bool>& interferers) {
  return detail::eve_covariance(cfg, powers, interferers);
}

/// Users still present as interference at the eavesdropper when user
/// `order[position]` is decoded: later users of `in_subset`, plus every user
/// outside the subset.
inline std::vector<bool> eve_interferers(const DecodingOrder& order, std::size_t position,
                                         const std::vector<bool>& in_subset) {
  std::vector<bool> out(order.size(), false);
  for (std::size_t l = 0; l < order.size(); ++l) out[l] = !in_subset[l];
  for (std::size_t i = position + 1; i < order.size(); ++i) {
    if (in_subset[order[i]]) out[order[i]] = true;
  }
  return out;
}

/// h^H Q^{-1} h for user k against the given interference covariance.
inline double eve_effective_gain(const SystemConfig& cfg, const HermitianMatrix& q, std::size_t k) {
  return inv_quadratic_form(q, cfg.eve_channels[k]);
}

/// Sum information leaked about users in S, with users outside S as noise:
/// log2 det(I + A_all) - log2 det(I + A_{S^c}).
inline double eve_sum_rate(const SystemConfig& cfg, std::span<const double> powers,
                           std::span<const std::size_t> subset) {
  const auto in_s = detail::subset_mask(cfg.num_users, subset);
  std::vector<bool> everyone(cfg.num_users, true);
  std::vector<bool> complement(cfg.num_users);
  for (std::size_t l = 0; l < cfg.num_users; ++l) complement[l] = !in_s[l];
  const double full = log2_det(detail::eve_covariance(cfg, powers, everyone));
  const double rest = log2_det(detail::eve_covariance(cfg, powers, complement));
  return std::max(0.0, full - rest);
}

/// Chain-rule split of eve_sum_rate(S) along `order`. The returned vector has
/// K entries; users outside S get 0.
inline std::vector<double> eve_rate_chain(const SystemConfig& cfg, std::span<const double> powers,
                                          const DecodingOrder& order,
                                          std::span<const std::size_t> subset) {
  if (order.size() != cfg.num_users) {
    throw Error(ErrorCode::InvalidPermutation, "decoding order length must equal K");
  }
  const auto in_s = detail::subset_mask(cfg.num_users, subset);
  std::vector<double> out(cfg.num_users, 0.0);
  const double inv_noise = 1.0 / cfg.eve_noise_var();
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t k = order[pos];
    if (!in_s[k]) continue;
    const auto q = detail::eve_covariance(cfg, powers, eve_interferers(order, pos, in_s));
    out[k] = std::log2(1.0 + powers[k] * inv_noise * eve_effective_gain(cfg, q, k));
  }
  return out;
}

inline std::vector<std::size_t> all_users(std::size_t num_users) {
  std::vector<std::size_t> out(num_users);
  for (std::size_t k = 0; k < num_users; ++k) out[k] = k;
  return out;
}

/// R_k - R_Ek(order) for every user, without the [.]^+ clamp.
inline std::vector<double> secrecy_margins(const SystemConfig& cfg, const OperatingPoint& op,
                                           const DecodingOrder& order) {
  const auto users = all_users(cfg.num_users);
  const auto leak = eve_rate_chain(cfg, op.powers, order, users);
  std::vector<double> out(cfg.num_users);
  for (std::size_t k = 0; k < cfg.num_users; ++k) out[k] = legitimate_rate(cfg, op, k) - leak[k];
  return out;
}

/// One corner of the secrecy polytope: ([R_k - R_Ek(order)]^+)_k.
inline RateTuple secrecy_corner(const SystemConfig& cfg, const OperatingPoint& op,
                                const DecodingOrder& order) {
  RateTuple out;
  for (double m : secrecy_margins(cfg, op, order)) out.per_user.push_back(std::max(0.0, m));
  return out;
}

/// Per-user rate the optimizer works with: the secrecy corner in secure mode,
/// the TIN rate otherwise. Not clamped.
inline std::vector<double> effective_rates(const SystemConfig& cfg, const OperatingPoint& op,
                                           RateMode mode, const DecodingOrder& order) {
  if (mode == RateMode::Secure) return secrecy_margins(cfg, op, order);
  return legitimate_rates(cfg, op).per_user;
}

struct SubsetCheck {
  bool satisfied = true;
  double worst_violation = 0.0;
  std::vector<std::size_t> worst_subset;
};

/// Checks sum_{k in S} tuple_k <= [sum_{k in S} R_k - eve_sum_rate(S)]^+ + tol
/// for every non-empty S. K is limited to 16 (65535 subsets).
inline SubsetCheck subset_constraints_satisfied(const SystemConfig& cfg, const OperatingPoint& op,
                                                const RateTuple& tuple, double tol) {
  const std::size_t K = cfg.num_users;
  if (K > 16) throw Error(ErrorCode::TooManyUsers, "subset enumeration is limited to K <= 16");
  if (tuple.size() != K) throw Error(ErrorCode::DimensionMismatch, "rate tuple length must equal K");
  const auto rates = legitimate_rates(cfg, op);
  SubsetCheck result;
  result.worst_violation = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> subset;
  for (std::uint32_t mask = 1; mask < (1u << K); ++mask) {
    subset.clear();
    double claimed = 0.0;
    double reliable = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      if (mask & (1u << k)) {
        subset.push_back(k);
        claimed += tuple[k];
        reliable += rates[k];
      }
    }
    const double bound = std::max(0.0, reliable - eve_sum_rate(cfg, op.powers, subset));
    const double violation = claimed - bound;
    if (violation > result.worst_violation) {
      result.worst_violation = violation;
      result.worst_subset = subset;
    }
  }
  result.satisfied = result.worst_violation <= tol;
  return result;
}

}  // namespace wiretap
