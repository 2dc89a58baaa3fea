#pragma once

// Exhaustive grid search over (p_1, p_2, eta_1, eta_2) for the exact,
// uncondensed weighted max-min objective. Independent of the GP path; used to
// validate the solver.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "wiretap/metrics.hpp"
#include "wiretap/model.hpp"

namespace wiretap {

struct OracleResult {
  /// min_k [R_k^eff]^+ / alpha_k over users with alpha_k > 0.
  double objective = 0.0;
  RateTuple rates;
  OperatingPoint point;
  std::size_t evaluated = 0;
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

struct OracleBox {
  std::vector<double> p1, p2, eta1, eta2;
};

/// Searches one box. For fixed powers each user's rate and energy depend only
/// on its own split, so scanning every split per user and combining the
/// per-user optima visits the full product grid.
inline bool oracle_scan(const SystemConfig& cfg, RateMode mode, const Weights& alpha,
                        const DecodingOrder& order, const OracleBox& box, OracleResult& best) {
  bool found = false;
  const auto users = all_users(2);
  const std::vector<const std::vector<double>*> splits{&box.eta1, &box.eta2};
  OperatingPoint op{{0.0, 0.0}, {0.0, 0.0}};
  for (double p1 : box.p1) {
    for (double p2 : box.p2) {
      op.powers = {p1, p2};
      std::vector<double> leak(2, 0.0);
      if (mode == RateMode::Secure) leak = eve_rate_chain(cfg, op.powers, order, users);

      std::vector<double> best_rate(2, -1.0);
      std::vector<double> best_eta(2, 0.0);
      bool feasible = true;
      for (std::size_t k = 0; k < 2 && feasible; ++k) {
        bool any = false;
        for (double eta : *splits[k]) {
          op.splits[k] = eta;
          ++best.evaluated;
          if (harvested_energy(cfg, op, k) < cfg.eh_demands[k]) continue;
          const double rate = std::max(0.0, legitimate_rate(cfg, op, k) - leak[k]);
          if (!any || rate > best_rate[k]) {
            best_rate[k] = rate;
            best_eta[k] = eta;
          }
          any = true;
        }
        feasible = any;
      }
      if (!feasible) continue;

      double objective = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < 2; ++k) {
        if (alpha[k] > 0.0) objective = std::min(objective, best_rate[k] / alpha[k]);
      }
      if (objective > best.objective) {
        best.objective = objective;
        best.rates.per_user = best_rate;
        best.point = {{p1, p2}, best_eta};
      }
      found = true;
    }
  }
  return found;
}

}  // namespace detail

/// Best grid point for the weighted max-min problem of one corner (secure) or
/// of the TIN rates (reliable), followed by one zoomed grid of the same
/// resolution spanning one coarse step around the incumbent. K must be 2.
inline OracleResult oracle_grid_search(const SystemConfig& cfg, RateMode mode,
                                       std::span<const double> eh_demands, const Weights& alpha,
                                       const DecodingOrder& order, std::size_t resolution) {
  if (cfg.num_users != 2) throw Error(ErrorCode::InvalidArgument, "grid oracle supports K = 2 only");
  if (resolution < 11) throw Error(ErrorCode::InvalidArgument, "oracle resolution must be >= 11");
  if (eh_demands.size() != 2 || alpha.size() != 2 || order.size() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "oracle inputs must have two entries");
  }
  SystemConfig c = cfg;
  c.eh_demands.assign(eh_demands.begin(), eh_demands.end());

  const double pmax1 = c.power_budget[0];
  const double pmax2 = c.power_budget[1];
  detail::OracleBox coarse{detail::linspace(0.0, pmax1, resolution), detail::linspace(0.0, pmax2, resolution),
                           detail::linspace(0.0, 1.0, resolution), detail::linspace(0.0, 1.0, resolution)};
  OracleResult best;
  best.objective = -std::numeric_limits<double>::infinity();
  if (!detail::oracle_scan(c, mode, alpha, order, coarse, best)) {
    throw Error(ErrorCode::NoFeasiblePoint, "no grid point meets the energy demands");
  }

  const double steps = static_cast<double>(resolution - 1);
  auto around = [&](double centre, double step, double hi) {
    return detail::linspace(std::max(0.0, centre - step), std::min(hi, centre + step), resolution);
  };
  const detail::OracleBox zoom{around(best.point.powers[0], pmax1 / steps, pmax1),
                               around(best.point.powers[1], pmax2 / steps, pmax2),
                               around(best.point.splits[0], 1.0 / steps, 1.0),
                               around(best.point.splits[1], 1.0 / steps, 1.0)};
  detail::oracle_scan(c, mode, alpha, order, zoom, best);
  return best;
}

}  // namespace wiretap
