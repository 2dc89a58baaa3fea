#pragma once

// Geometric programs in standard form,
//
//   maximize x[objective]  s.t.  posy_i(x) <= 1,
//
// solved in log variables y = log x where every constraint becomes a convex
// log-sum-exp. A two-phase log-barrier method with damped Newton steps is
// used; the problems here have at most a few dozen variables.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "wiretap/linalg.hpp"
#include "wiretap/model.hpp"
#include "wiretap/posynomial.hpp"

namespace wiretap {

enum class ConstraintKind { Rate, Energy, PowerBudget, SplitBound, Floor };

struct GpConstraint {
  Posynomial lhs;
  ConstraintKind kind;
  std::size_t user = 0;
  // Set when lhs = numerator / condense(denominator).
  std::optional<Posynomial> denominator;
  std::optional<Monomial> condensed;
};

/// Index layout of the decision vector used by the rate-region problems:
/// [p_1..p_K, eta_1..eta_K, lambda].
struct GpLayout {
  std::size_t num_users = 0;

  [[nodiscard]] std::size_t power(std::size_t k) const noexcept { return k; }
  [[nodiscard]] std::size_t split(std::size_t k) const noexcept { return num_users + k; }
  [[nodiscard]] std::size_t lambda() const noexcept { return 2 * num_users; }
  [[nodiscard]] std::size_t num_vars() const noexcept { return 2 * num_users + 1; }
};

struct GpInstance {
  std::size_t num_vars = 0;
  std::size_t objective_index = 0;
  std::vector<GpConstraint> constraints;
  /// Strictly positive point used for condensation and as the solver's start.
  std::vector<double> anchor;
  /// Present for rate-region instances.
  std::optional<GpLayout> layout;
  /// Eavesdropper interference covariances, frozen at the previous powers
  /// (secure mode only; one per user).
  std::vector<HermitianMatrix> lagged_q;
  /// h_Ek^H Q_k^{-1} h_Ek for the lagged matrices.
  std::vector<double> lagged_gain;

  [[nodiscard]] std::size_t count(ConstraintKind kind) const {
    std::size_t n = 0;
    for (const auto& c : constraints) n += c.kind == kind ? 1 : 0;
    return n;
  }
};

struct GpSolution {
  std::vector<double> x;
  double lambda = 0.0;
  std::optional<OperatingPoint> point;
  int newton_steps = 0;
};

namespace detail {

/// log sum_t exp(b_t + A_t . v)
struct LogSumExp {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;

  [[nodiscard]] double value(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd z = a * v + b;
    const double zmax = z.maxCoeff();
    return zmax + std::log((z.array() - zmax).exp().sum());
  }

  void evaluate(const Eigen::VectorXd& v, double& f, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    const Eigen::VectorXd z = a * v + b;
    const double zmax = z.maxCoeff();
    Eigen::VectorXd w = (z.array() - zmax).exp().matrix();
    const double sum = w.sum();
    f = zmax + std::log(sum);
    w /= sum;
    grad = a.transpose() * w;
    hess = a.transpose() * w.asDiagonal() * a - grad * grad.transpose();
  }
};

inline LogSumExp to_log_sum_exp(const Posynomial& p, bool phase_one) {
  const auto n = static_cast<Eigen::Index>(p.num_vars());
  const auto m = static_cast<Eigen::Index>(p.terms().size());
  LogSumExp out{Eigen::MatrixXd::Zero(m, phase_one ? n + 1 : n), Eigen::VectorXd(m)};
  for (Eigen::Index t = 0; t < m; ++t) {
    const auto& term = p.terms()[static_cast<std::size_t>(t)];
    out.b(t) = std::log(term.coef);
    for (Eigen::Index i = 0; i < n; ++i) out.a(t, i) = term.exponents[static_cast<std::size_t>(i)];
    if (phase_one) out.a(t, n) = -1.0;
  }
  return out;
}

/// Minimizes t * c.v - sum log(-f_i(v)) over the strict interior.
class BarrierProblem {
 public:
  BarrierProblem(std::vector<LogSumExp> constraints, Eigen::VectorXd objective)
      : cons_(std::move(constraints)), c_(std::move(objective)) {}

  [[nodiscard]] std::size_t num_constraints() const noexcept { return cons_.size(); }

  [[nodiscard]] double max_violation(const Eigen::VectorXd& v) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& c : cons_) worst = std::max(worst, c.value(v));
    return worst;
  }

  [[nodiscard]] double merit(const Eigen::VectorXd& v, double t) const {
    double out = t * c_.dot(v);
    for (const auto& c : cons_) {
      const double f = c.value(v);
      if (!(f < 0.0)) return std::numeric_limits<double>::infinity();
      out -= std::log(-f);
    }
    return out;
  }

  /// Damped Newton centering. Returns the number of steps taken, or -1 on a
  /// numerical breakdown. `stop` may end the centering early.
  template <typename Stop>
  int center(Eigen::VectorXd& v, double t, int max_steps, Stop&& stop) const {
    const auto n = v.size();
    Eigen::VectorXd grad(n), g_i(n);
    Eigen::MatrixXd hess(n, n), h_i(n, n);
    for (int step = 0; step < max_steps; ++step) {
      grad = t * c_;
      hess.setZero();
      for (const auto& c : cons_) {
        double f = 0.0;
        c.evaluate(v, f, g_i, h_i);
        const double inv = -1.0 / f;
        grad += inv * g_i;
        hess += (inv * inv) * (g_i * g_i.transpose()) + inv * h_i;
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd dv = ldlt.solve(-grad);
      if (ldlt.info() != Eigen::Success || !dv.allFinite()) {
        const double shift = 1e-12 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
        hess.diagonal().array() += shift;
        dv = hess.ldlt().solve(-grad);
        if (!dv.allFinite()) return -1;
      }
      const double decrement2 = -grad.dot(dv);
      if (!(decrement2 >= 0.0)) return -1;
      if (decrement2 * 0.5 <= 1e-12) return step;

      const double f0 = merit(v, t);
      double s = 1.0;
      Eigen::VectorXd trial = v + s * dv;
      double f1 = merit(trial, t);
      while (!(f1 <= f0 - 0.25 * s * decrement2)) {
        s *= 0.5;
        if (s < 1e-14) return step;  // no progress possible at this precision
        trial = v + s * dv;
        f1 = merit(trial, t);
      }
      v = trial;
      if (stop(v)) return step + 1;
    }
    return max_steps;
  }

 private:
  std::vector<LogSumExp> cons_;
  Eigen::VectorXd c_;
};

}  // namespace detail

struct GpSolverOptions {
  /// Absolute gap on log(objective) at termination.
  double tolerance = 1e-9;
  double mu = 20.0;
  int max_newton_steps = 20000;
  /// Phase I stops once every constraint holds with this log-margin.
  double interior_margin = 1e-3;
};

/// Solves `gp`. Throws Infeasible when the constraint set has no interior
/// and NumericalFailure when the Newton budget is exhausted.
inline GpSolution solve_gp(const GpInstance& gp, const GpSolverOptions& options = {}) {
  const std::size_t n = gp.num_vars;
  if (gp.anchor.size() != n) throw Error(ErrorCode::DimensionMismatch, "GP anchor arity");
  if (gp.constraints.empty()) throw Error(ErrorCode::InvalidArgument, "GP has no constraints");
  for (double a : gp.anchor) {
    if (!(a > 0.0)) throw Error(ErrorCode::NonPositiveAnchor, "GP anchor must be strictly positive");
  }
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::VectorXd y(ni);
  for (std::size_t i = 0; i < n; ++i) y(static_cast<Eigen::Index>(i)) = std::log(gp.anchor[i]);

  int steps_used = 0;
  auto charge = [&](int steps) {
    if (steps < 0) throw Error(ErrorCode::NumericalFailure, "Newton system breakdown");
    steps_used += steps;
    if (steps_used > options.max_newton_steps) {
      throw Error(ErrorCode::NumericalFailure, "Newton step budget exhausted");
    }
  };

  // Phase I: minimize s subject to f_i(y) <= s.
  std::vector<detail::LogSumExp> phase_one;
  std::vector<detail::LogSumExp> phase_two;
  for (const auto& c : gp.constraints) {
    if (c.lhs.num_vars() != n) throw Error(ErrorCode::DimensionMismatch, "GP constraint arity");
    if (c.lhs.empty()) continue;  // 0 <= 1
    phase_one.push_back(detail::to_log_sum_exp(c.lhs, true));
    phase_two.push_back(detail::to_log_sum_exp(c.lhs, false));
  }
  if (phase_two.empty()) throw Error(ErrorCode::InvalidArgument, "GP has no non-trivial constraints");
  const double m = static_cast<double>(phase_two.size());

  {
    const detail::BarrierProblem probe(phase_two, Eigen::VectorXd::Zero(ni));
    if (!(probe.max_violation(y) < -options.interior_margin)) {
      Eigen::VectorXd c1 = Eigen::VectorXd::Zero(ni + 1);
      c1(ni) = 1.0;
      const detail::BarrierProblem p1(phase_one, c1);
      Eigen::VectorXd v(ni + 1);
      v.head(ni) = y;
      v(ni) = probe.max_violation(y) + 1.0;
      const auto reached = [&](const Eigen::VectorXd& w) { return w(ni) < -options.interior_margin; };
      double t = 1.0;
      bool feasible = false;
      for (;;) {
        charge(p1.center(v, t, 200, reached));
        if (reached(v)) {
          feasible = true;
          break;
        }
        // At a central point, min s >= s - m/t.
        if (v(ni) - m / t > 0.0) break;
        if (m / t < 1e-13) {
          feasible = v(ni) < -1e-12;
          break;
        }
        t *= options.mu;
      }
      if (!feasible) throw Error(ErrorCode::Infeasible, "GP constraint set has no interior point");
      y = v.head(ni);
    }
  }

  // Phase II: maximize y[objective].
  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(ni);
  c2(static_cast<Eigen::Index>(gp.objective_index)) = -1.0;
  const detail::BarrierProblem p2(std::move(phase_two), c2);
  const auto never = [](const Eigen::VectorXd&) { return false; };
  double t = 1.0;
  for (;;) {
    charge(p2.center(y, t, 200, never));
    if (m / t < options.tolerance) break;
    t *= options.mu;
  }
  if (!y.allFinite()) throw Error(ErrorCode::NumericalFailure, "non-finite GP iterate");

  GpSolution out;
  out.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.x[i] = std::exp(y(static_cast<Eigen::Index>(i)));
  out.lambda = out.x[gp.objective_index];
  out.newton_steps = steps_used;
  if (gp.layout) {
    const auto& lay = *gp.layout;
    OperatingPoint op;
    for (std::size_t k = 0; k < lay.num_users; ++k) {
      op.powers.push_back(out.x[lay.power(k)]);
      op.splits.push_back(out.x[lay.split(k)]);
    }
    out.point = std::move(op);
  }
  return out;
}

}  // namespace wiretap
