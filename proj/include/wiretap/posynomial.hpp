#pragma once

// Monomials, posynomials and single condensation (AM-GM lower bound of a
// posynomial by a monomial, tight at an anchor point).

#include <cmath>
#include <span>
#include <vector>

#include "wiretap/error.hpp"

namespace wiretap {

/// coef * prod_i x_i^exponents[i]
struct Monomial {
  double coef = 1.0;
  std::vector<double> exponents;

  static Monomial constant(std::size_t num_vars, double value) {
    return {value, std::vector<double>(num_vars, 0.0)};
  }
  static Monomial variable(std::size_t num_vars, std::size_t index, double power = 1.0,
                           double coef = 1.0) {
    Monomial m = constant(num_vars, coef);
    m.exponents[index] = power;
    return m;
  }

  [[nodiscard]] std::size_t num_vars() const noexcept { return exponents.size(); }

  [[nodiscard]] double operator()(std::span<const double> x) const {
    double log_value = std::log(coef);
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      if (exponents[i] != 0.0) log_value += exponents[i] * std::log(x[i]);
    }
    return std::exp(log_value);
  }

  Monomial& operator*=(const Monomial& o) {
    coef *= o.coef;
    for (std::size_t i = 0; i < exponents.size(); ++i) exponents[i] += o.exponents[i];
    return *this;
  }
  friend Monomial operator*(Monomial a, const Monomial& b) { return a *= b; }

  [[nodiscard]] Monomial inverse() const {
    Monomial m{1.0 / coef, exponents};
    for (auto& e : m.exponents) e = -e;
    return m;
  }
};

/// Sum of monomials with strictly positive coefficients.
class Posynomial {
 public:
  explicit Posynomial(std::size_t num_vars) : num_vars_(num_vars) {}
  Posynomial(const Monomial& m) : num_vars_(m.num_vars()) { add(m); }  // NOLINT(google-explicit-constructor)

  /// Appends a term; zero-coefficient terms are dropped.
  Posynomial& add(const Monomial& m) {
    if (m.num_vars() != num_vars_) throw Error(ErrorCode::DimensionMismatch, "monomial arity");
    if (m.coef < 0.0 || !std::isfinite(m.coef)) {
      throw Error(ErrorCode::NonPositiveTerm, "posynomial coefficients must be positive");
    }
    if (m.coef > 0.0) terms_.push_back(m);
    return *this;
  }

  [[nodiscard]] std::size_t num_vars() const noexcept { return num_vars_; }
  [[nodiscard]] const std::vector<Monomial>& terms() const noexcept { return terms_; }
  [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }

  [[nodiscard]] double operator()(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& t : terms_) sum += t(x);
    return sum;
  }

  friend Posynomial operator+(Posynomial a, const Posynomial& b) {
    for (const auto& t : b.terms_) a.add(t);
    return a;
  }

  friend Posynomial operator*(const Posynomial& a, const Posynomial& b) {
    Posynomial out(a.num_vars_);
    for (const auto& s : a.terms_) {
      for (const auto& t : b.terms_) out.add(s * t);
    }
    return out;
  }

  friend Posynomial operator*(const Posynomial& a, const Monomial& m) {
    Posynomial out(a.num_vars_);
    for (const auto& s : a.terms_) out.add(s * m);
    return out;
  }

 private:
  std::size_t num_vars_;
  std::vector<Monomial> terms_;
};

/// c_j = t_j / sum(t): the weights that make the AM-GM bound tight.
inline std::vector<double> optimal_condensation_weights(std::span<const double> terms) {
  if (terms.empty()) throw Error(ErrorCode::NonPositiveTerm, "no terms to condense");
  double sum = 0.0;
  for (double t : terms) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw Error(ErrorCode::NonPositiveTerm, "condensation terms must be strictly positive");
    }
    sum += t;
  }
  std::vector<double> c;
  c.reserve(terms.size());
  for (double t : terms) c.push_back(t / sum);
  return c;
}

/// Monomial prod_j (t_j(x)/c_j)^{c_j} with c chosen at `anchor`. It
/// under-estimates `posy` everywhere and matches it at the anchor.
inline Monomial condense(const Posynomial& posy, std::span<const double> anchor) {
  if (posy.empty()) throw Error(ErrorCode::NonPositiveTerm, "cannot condense an empty posynomial");
  if (anchor.size() != posy.num_vars()) throw Error(ErrorCode::DimensionMismatch, "anchor arity");
  for (double a : anchor) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw Error(ErrorCode::NonPositiveAnchor, "condensation anchor must be strictly positive");
    }
  }
  const auto& terms = posy.terms();
  if (terms.size() == 1) return terms.front();

  std::vector<double> values;
  values.reserve(terms.size());
  for (const auto& t : terms) values.push_back(t(anchor));
  const auto c = optimal_condensation_weights(values);

  Monomial out = Monomial::constant(posy.num_vars(), 1.0);
  double log_coef = 0.0;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    log_coef += c[j] * (std::log(terms[j].coef) - std::log(c[j]));
    for (std::size_t i = 0; i < out.exponents.size(); ++i) {
      out.exponents[i] += c[j] * terms[j].exponents[i];
    }
  }
  out.coef = std::exp(log_coef);
  return out;
}

/// Approximation gap B = posy(x) - condensed(x) >= 0.
inline double condensation_gap(const Posynomial& posy, const Monomial& condensed,
                               std::span<const double> x) {
  return posy(x) - condensed(x);
}

}  // namespace wiretap
