#pragma once

// Weighted max-min rate allocation for one (alpha, decoding order) pair.
//
// The epigraph form  max beta  s.t.  beta * alpha_k <= R_k  is rewritten with
// lambda = 2^beta as ratio constraints
//
//   lambda^alpha_k * F_k * I_k / (I_k + eta_k p_k |h_kk|^2) <= 1,
//
// where I_k = sigma2_k + eta_k rho2_k + eta_k sum_{j!=k} p_j |h_kj|^2 and, in
// secure mode, F_k = 1 + p_k h_Ek^H Q_k^{-1} h_Ek / sigma2_E. Every posynomial
// denominator is replaced by its condensed monomial at the current anchor,
// which yields a GP; the GP solution becomes the next anchor. Q_k is frozen at
// the previous iterate's powers.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "wiretap/gp.hpp"
#include "wiretap/metrics.hpp"
#include "wiretap/model.hpp"
#include "wiretap/posynomial.hpp"

namespace wiretap {

struct SolverOptions {
  /// p_k >= floor * p_max,k and eta_k >= floor.
  double floor = 1e-6;
  double initial_split = 0.5;
  double convergence_tol = 1e-6;
  int max_iters = 100;
  /// Lower bound on log2(lambda); keeps the GP bounded when secrecy is
  /// unattainable for some user.
  double min_log2_lambda = -200.0;
  GpSolverOptions gp;
};

struct SolveReport {
  RateMode mode = RateMode::Reliable;
  /// 2^beta where beta = min_k R_k^eff / alpha_k, re-evaluated exactly at the
  /// final point.
  double lambda = 0.0;
  double beta = 0.0;
  OperatingPoint point;
  /// Mode rates at the final point, clamped at zero.
  RateTuple rates;
  int iterations = 0;
  /// GP optimum of every iteration.
  std::vector<double> lambda_trace;
  /// lambda implied by each iteration's anchor under that iteration's lagged
  /// matrices; NaN where the anchor is not feasible for its own GP.
  std::vector<double> anchor_lambda_trace;
  /// B = den(x) - condensed(x) for each condensed denominator of the last GP.
  std::vector<double> condensation_gaps;
  bool converged = false;
  /// False flags a NonMonotoneTrace warning.
  bool monotone = true;
  /// Some user ended with a negative secrecy margin (reported as 0).
  bool clamped = false;
};

namespace detail {

inline double lagged_lambda_log2(const SystemConfig& cfg, const Weights& alpha,
                                 const OperatingPoint& op, RateMode mode,
                                 std::span<const double> lagged_gain) {
  double beta = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    if (alpha[k] <= 0.0) continue;
    double rate = legitimate_rate(cfg, op, k);
    if (mode == RateMode::Secure) {
      rate -= std::log2(1.0 + op.powers[k] * lagged_gain[k] / cfg.eve_noise_var());
    }
    beta = std::min(beta, rate / alpha[k]);
  }
  return beta;
}

}  // namespace detail

/// Builds the condensed GP at `anchor`. `prev_powers` fixes the eavesdropper
/// covariance matrices (secure mode).
inline GpInstance build_gp(const SystemConfig& cfg, const Weights& alpha, const DecodingOrder& order,
                           const OperatingPoint& anchor, RateMode mode,
                           std::span<const double> prev_powers, const SolverOptions& options = {}) {
  const std::size_t K = cfg.num_users;
  if (alpha.size() != K || order.size() != K || prev_powers.size() != K ||
      anchor.powers.size() != K || anchor.splits.size() != K) {
    throw Error(ErrorCode::DimensionMismatch, "build_gp inputs must all have K entries");
  }
  const double slack = 1.0 - 1e-9;
  for (std::size_t k = 0; k < K; ++k) {
    const double pmax = cfg.power_budget[k];
    if (!(anchor.powers[k] >= options.floor * pmax * slack && anchor.powers[k] <= pmax / slack &&
          anchor.splits[k] >= options.floor * slack && anchor.splits[k] <= 1.0 / slack)) {
      throw Error(ErrorCode::InfeasibleAnchor,
                  "anchor of user " + std::to_string(k + 1) + " lies outside the floored box");
    }
  }

  GpInstance gp;
  const GpLayout lay{K};
  gp.layout = lay;
  gp.num_vars = lay.num_vars();
  gp.objective_index = lay.lambda();
  const std::size_t n = gp.num_vars;

  OperatingPoint clamped = anchor;
  for (std::size_t k = 0; k < K; ++k) {
    clamped.powers[k] = std::clamp(anchor.powers[k], options.floor * cfg.power_budget[k], cfg.power_budget[k]);
    clamped.splits[k] = std::clamp(anchor.splits[k], options.floor, 1.0);
  }

  gp.lagged_gain.assign(K, 0.0);
  if (mode == RateMode::Secure) {
    const auto everyone = std::vector<bool>(K, true);
    // Indexed by user, not by decoding position.
    gp.lagged_q.assign(K, HermitianMatrix::identity(cfg.num_eve_antennas));
    for (std::size_t pos = 0; pos < K; ++pos) {
      gp.lagged_q[order[pos]] =
          eve_interference_covariance(cfg, prev_powers, eve_interferers(order, pos, everyone));
    }
    for (std::size_t k = 0; k < K; ++k) gp.lagged_gain[k] = eve_effective_gain(cfg, gp.lagged_q[k], k);
  }

  const double beta0 = detail::lagged_lambda_log2(cfg, alpha, clamped, mode, gp.lagged_gain);
  const double log2_lambda0 =
      std::clamp(std::isfinite(beta0) ? beta0 : 0.0, options.min_log2_lambda + 1.0, 100.0);

  gp.anchor.resize(n);
  for (std::size_t k = 0; k < K; ++k) {
    gp.anchor[lay.power(k)] = clamped.powers[k];
    gp.anchor[lay.split(k)] = clamped.splits[k];
  }
  gp.anchor[lay.lambda()] = std::exp2(log2_lambda0);

  auto var = [n](std::size_t i, double coef = 1.0, double power = 1.0) {
    return Monomial::variable(n, i, power, coef);
  };
  auto constant = [n](double value) { return Monomial::constant(n, value); };

  for (std::size_t k = 0; k < K; ++k) {
    const auto eta = var(lay.split(k));

    // Rate (or secrecy) constraint. A zero-weight user is unconstrained in
    // reliable mode; in secure mode it keeps a non-negative secrecy margin so
    // its corner rate never needs clamping.
    if (alpha[k] > 0.0 || mode == RateMode::Secure) {
      Posynomial interference(constant(cfg.processing_noise_vars[k]));
      interference.add(eta * constant(cfg.antenna_noise_vars[k]));
      for (std::size_t j = 0; j < K; ++j) {
        if (j != k) interference.add(eta * var(lay.power(j), cfg.gain2(k, j)));
      }
      Posynomial denominator = interference;
      denominator.add(eta * var(lay.power(k), cfg.gain2(k, k)));

      Posynomial numerator = interference * var(lay.lambda(), 1.0, alpha[k]);
      if (mode == RateMode::Secure) {
        Posynomial leak(constant(1.0));
        leak.add(var(lay.power(k), gp.lagged_gain[k] / cfg.eve_noise_var()));
        numerator = numerator * leak;
      }
      const Monomial condensed = condense(denominator, gp.anchor);
      gp.constraints.push_back(
          {numerator * condensed.inverse(), ConstraintKind::Rate, k, denominator, condensed});
    }

    // Energy harvesting. When the demand is met for every eta <= 1 the
    // constraint reduces exactly to eta_k <= 1.
    Posynomial received(n);
    for (std::size_t j = 0; j < K; ++j) received.add(var(lay.power(j), cfg.gain2(k, j)));
    const double demand = cfg.eh_demands[k];
    if (cfg.energy_model == EnergyModel::Reformulated) {
      // psi - sigma2 + eta S <= S
      const double excess = demand - cfg.processing_noise_vars[k];
      if (excess <= 0.0) {
        gp.constraints.push_back({Posynomial(eta), ConstraintKind::Energy, k, {}, {}});
      } else {
        if (received.empty()) {
          throw Error(ErrorCode::Infeasible, "user " + std::to_string(k + 1) + " receives no power to harvest");
        }
        Posynomial numerator(constant(excess));
        numerator = numerator + received * eta;
        const Monomial condensed = condense(received, gp.anchor);
        gp.constraints.push_back(
            {numerator * condensed.inverse(), ConstraintKind::Energy, k, received, condensed});
      }
    } else {
      // psi + eta (S + rho2) <= S + rho2
      if (demand <= 0.0) {
        gp.constraints.push_back({Posynomial(eta), ConstraintKind::Energy, k, {}, {}});
      } else {
        Posynomial total = received;
        total.add(constant(cfg.antenna_noise_vars[k]));
        Posynomial numerator(constant(demand));
        numerator = numerator + total * eta;
        const Monomial condensed = condense(total, gp.anchor);
        gp.constraints.push_back(
            {numerator * condensed.inverse(), ConstraintKind::Energy, k, total, condensed});
      }
    }
  }

  for (std::size_t k = 0; k < K; ++k) {
    gp.constraints.push_back(
        {Posynomial(var(lay.power(k), 1.0 / cfg.power_budget[k])), ConstraintKind::PowerBudget, k, {}, {}});
  }
  for (std::size_t k = 0; k < K; ++k) {
    gp.constraints.push_back({Posynomial(var(lay.split(k))), ConstraintKind::SplitBound, k, {}, {}});
  }
  for (std::size_t k = 0; k < K; ++k) {
    gp.constraints.push_back(
        {Posynomial(var(lay.power(k), options.floor * cfg.power_budget[k], -1.0)), ConstraintKind::Floor, k, {}, {}});
    gp.constraints.push_back(
        {Posynomial(var(lay.split(k), options.floor, -1.0)), ConstraintKind::Floor, k, {}, {}});
  }
  gp.constraints.push_back(
      {Posynomial(var(lay.lambda(), std::exp2(options.min_log2_lambda), -1.0)), ConstraintKind::Floor, K, {}, {}});
  return gp;
}

/// Successive condensation: build, solve, re-anchor until lambda settles.
inline SolveReport iterate(const SystemConfig& cfg, const Weights& alpha, const DecodingOrder& order,
                           RateMode mode, const SolverOptions& options = {}) {
  const std::size_t K = cfg.num_users;
  if (alpha.size() != K) throw Error(ErrorCode::DimensionMismatch, "weights must have K entries");
  if (order.size() != K) throw Error(ErrorCode::InvalidPermutation, "decoding order must have K entries");

  SolveReport report;
  report.mode = mode;
  OperatingPoint anchor{cfg.power_budget, std::vector<double>(K, options.initial_split)};
  std::vector<double> prev_powers = cfg.power_budget;
  GpInstance gp;
  GpSolution sol;

  for (int l = 1; l <= options.max_iters; ++l) {
    gp = build_gp(cfg, alpha, order, anchor, mode, prev_powers, options);
    sol = solve_gp(gp, options.gp);
    report.iterations = l;
    report.lambda_trace.push_back(sol.lambda);

    // From the second iteration the anchor solved the previous GP, so it is
    // feasible here and its lambda lower-bounds this GP's optimum.
    report.anchor_lambda_trace.push_back(
        l > 1 ? std::exp2(detail::lagged_lambda_log2(cfg, alpha, anchor, mode, gp.lagged_gain))
              : std::numeric_limits<double>::quiet_NaN());

    if (l > 1) {
      const double prev = report.lambda_trace[static_cast<std::size_t>(l - 2)];
      if (sol.lambda < prev * (1.0 - 1e-7) - 1e-12) report.monotone = false;
      anchor = *sol.point;
      prev_powers = anchor.powers;
      if (std::abs(sol.lambda - prev) <= options.convergence_tol * std::max(1.0, sol.lambda)) {
        report.converged = true;
        break;
      }
    } else {
      anchor = *sol.point;
      prev_powers = anchor.powers;
    }
  }

  report.point = *sol.point;
  for (const auto& c : gp.constraints) {
    if (c.denominator && c.condensed) {
      report.condensation_gaps.push_back(condensation_gap(*c.denominator, *c.condensed, sol.x));
    }
  }
  const auto eff = effective_rates(cfg, report.point, mode, order);
  report.beta = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < K; ++k) {
    report.rates.per_user.push_back(std::max(0.0, eff[k]));
    if (alpha[k] > 0.0) report.beta = std::min(report.beta, eff[k] / alpha[k]);
    if (mode == RateMode::Secure && eff[k] < 0.0) report.clamped = true;
  }
  report.lambda = std::exp2(report.beta);
  return report;
}

}  // namespace wiretap
