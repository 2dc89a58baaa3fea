#pragma once

// Pareto boundaries by sweeping the max-min weights, plus the time-sharing
// hull of the union of the corner branches.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "wiretap/metrics.hpp"
#include "wiretap/model.hpp"
#include "wiretap/solver.hpp"

namespace wiretap {

/// Rates below this are rendered as exactly zero in hull output.
inline constexpr double kRenderZero = 1e-4;

struct RegionPoint {
  std::vector<double> alpha;
  /// Secure mode only.
  std::optional<DecodingOrder> order;
  RateTuple rates;
  OperatingPoint point;
  double beta = 0.0;
  int iterations = 0;
  bool converged = false;
  bool monotone = true;
  bool clamped = false;
};

struct FailedPoint {
  std::vector<double> alpha;
  std::optional<DecodingOrder> order;
  ErrorCode code = ErrorCode::NumericalFailure;
  std::string message;
};

struct RegionBoundary {
  RateMode mode = RateMode::Reliable;
  std::vector<double> eh_demands;
  /// Ordered by alpha index, then decoding order.
  std::vector<RegionPoint> points;
  std::vector<FailedPoint> failures;
  std::vector<RateTuple> hull;
  std::vector<std::string> diagnostics;
};

struct SweepOptions {
  SolverOptions solver;
  /// 0 = hardware concurrency.
  unsigned threads = 0;
};

inline RateTuple render(const RateTuple& r) {
  RateTuple out = r;
  for (auto& v : out.per_user) {
    if (v < kRenderZero) v = 0.0;
  }
  return out;
}

/// Upper-right convex hull of `points` together with their axis projections,
/// sorted by first coordinate. Only the Pareto part is returned: it starts on
/// the R2 axis and ends on the R1 axis. K must be 2.
inline std::vector<RateTuple> time_share_hull(std::span<const RateTuple> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "no rate tuples to hull");
  using Pt = std::array<double, 2>;
  std::vector<Pt> pts;
  double xmax = 0.0;
  double ymax = 0.0;
  for (const auto& r : points) {
    if (r.size() != 2) throw Error(ErrorCode::DimensionMismatch, "time-sharing hull needs K = 2");
    const Pt p{std::max(0.0, r[0]), std::max(0.0, r[1])};
    pts.push_back(p);
    xmax = std::max(xmax, p[0]);
    ymax = std::max(ymax, p[1]);
  }
  pts.push_back({0.0, ymax});
  pts.push_back({xmax, 0.0});
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] > b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Monotone-chain upper hull; collinear points are dropped.
  auto cross = [](const Pt& o, const Pt& a, const Pt& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Pt> hull;
  for (const auto& p : pts) {
    if (!hull.empty() && hull.back()[0] == p[0]) {
      // Same abscissa, lower ordinate: only the final axis drop is kept.
      if (p[1] != 0.0 || p[0] != xmax) continue;
    }
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0) hull.pop_back();
    hull.push_back(p);
  }

  std::vector<RateTuple> out;
  out.reserve(hull.size());
  for (const auto& p : hull) out.push_back(RateTuple{{p[0], p[1]}});
  return out;
}

/// Height of the hull boundary at abscissa x, or -inf beyond its extent.
inline double hull_height(std::span<const RateTuple> hull, double x) {
  if (hull.empty() || x < hull.front()[0] || x > hull.back()[0]) {
    return -std::numeric_limits<double>::infinity();
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const double x0 = hull[i][0], x1 = hull[i + 1][0];
    if (x < x0 || x > x1) continue;
    if (x1 == x0) {
      best = std::max({best, hull[i][1], hull[i + 1][1]});
    } else {
      const double w = (x - x0) / (x1 - x0);
      best = std::max(best, hull[i][1] + w * (hull[i + 1][1] - hull[i][1]));
    }
  }
  if (hull.size() == 1) best = hull.front()[1];
  return best;
}

/// True when `point` lies in the region under the hull, within `tol`.
inline bool hull_dominates(std::span<const RateTuple> hull, const RateTuple& point, double tol) {
  if (hull.empty()) return false;
  const double x = std::clamp(point[0], hull.front()[0], hull.back()[0]);
  if (point[0] > hull.back()[0] + tol) return false;
  return point[1] <= hull_height(hull, x) + tol;
}

/// Hull edges that no swept point reaches: at least one branch point lies
/// inside the edge's abscissa range (more than `margin` from either end, so
/// duplicates of the vertices do not count) and all such points sit more than
/// `margin` below it. These are the segments only time sharing attains.
inline std::vector<std::size_t> bridging_segments(std::span<const RateTuple> hull,
                                                  std::span<const RateTuple> branch_points,
                                                  double margin) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const double x0 = hull[i][0], x1 = hull[i + 1][0];
    if (x1 <= x0) continue;
    bool any = false;
    bool all_below = true;
    for (const auto& p : branch_points) {
      if (p[0] <= x0 + margin || p[0] >= x1 - margin) continue;
      any = true;
      const double w = (p[0] - x0) / (x1 - x0);
      const double edge = hull[i][1] + w * (hull[i + 1][1] - hull[i][1]);
      if (p[1] > edge - margin) all_below = false;
    }
    if (any && all_below) out.push_back(i);
  }
  return out;
}

/// Weight grid for K = 2: alpha_1 = i / (grid - 1).
inline std::vector<std::vector<double>> alpha_grid(std::size_t grid) {
  if (grid < 2) throw Error(ErrorCode::InvalidArgument, "alpha grid needs at least 2 samples");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < grid; ++i) {
    const double a1 = static_cast<double>(i) / static_cast<double>(grid - 1);
    out.push_back({a1, 1.0 - a1});
  }
  return out;
}

/// Solves the max-min problem for every alpha on the grid (and, in secure
/// mode, for every decoding order). A zero weight removes that user's rate
/// constraint, which gives the single-user axis endpoints exactly.
inline RegionBoundary sweep(const SystemConfig& cfg, RateMode mode, std::span<const double> eh_demands,
                            std::size_t grid, const SweepOptions& options = {}) {
  if (cfg.num_users != 2) throw Error(ErrorCode::InvalidArgument, "region sweep supports K = 2 only");
  if (eh_demands.size() != cfg.num_users) throw Error(ErrorCode::DimensionMismatch, "EH demands need K entries");
  SystemConfig c = cfg;
  c.eh_demands.assign(eh_demands.begin(), eh_demands.end());
  c = validate_config(std::move(c));

  const auto alphas = alpha_grid(grid);
  const auto orders = mode == RateMode::Secure ? DecodingOrder::all(2)
                                               : std::vector<DecodingOrder>{DecodingOrder::identity(2)};
  const std::size_t items = alphas.size() * orders.size();

  struct Slot {
    std::optional<RegionPoint> point;
    std::optional<FailedPoint> failure;
  };
  std::vector<Slot> slots(items);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items; i = next++) {
      const auto& alpha = alphas[i / orders.size()];
      const auto& order = orders[i % orders.size()];
      std::optional<DecodingOrder> tag;
      if (mode == RateMode::Secure) tag = order;
      try {
        const auto rep = iterate(c, Weights(alpha), order, mode, options.solver);
        slots[i].point = RegionPoint{alpha, tag, rep.rates, rep.point, rep.beta, rep.iterations,
                                     rep.converged, rep.monotone, rep.clamped};
      } catch (const Error& e) {
        slots[i].failure = FailedPoint{alpha, tag, e.code(), e.what()};
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, items));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  RegionBoundary out;
  out.mode = mode;
  out.eh_demands = c.eh_demands;
  for (auto& s : slots) {
    if (s.point) out.points.push_back(std::move(*s.point));
    if (s.failure) out.failures.push_back(std::move(*s.failure));
  }
  if (out.points.empty()) {
    out.diagnostics.push_back("every sweep point failed; first error: " +
                              (out.failures.empty() ? std::string("none") : out.failures.front().message));
    return out;
  }
  if (!out.failures.empty()) {
    out.diagnostics.push_back(std::to_string(out.failures.size()) + " sweep point(s) failed");
  }
  std::vector<RateTuple> rendered;
  for (const auto& p : out.points) rendered.push_back(render(p.rates));
  out.hull = time_share_hull(rendered);
  return out;
}

}  // namespace wiretap
