#pragma once

// Small dense Hermitian algebra for the eavesdropper covariance terms.
// M is tiny (2-8), so plain Cholesky is used throughout.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wiretap/error.hpp"
#include "wiretap/model.hpp"

namespace wiretap {

class HermitianMatrix {
 public:
  using Storage = Eigen::MatrixXcd;

  static HermitianMatrix identity(std::size_t dim) {
    return HermitianMatrix(Storage::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
  }

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  [[nodiscard]] Complex operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  [[nodiscard]] const Storage& matrix() const noexcept { return m_; }

  /// this += coef * v v^H, written to the upper triangle and mirrored so the
  /// result stays exactly Hermitian.
  void add_rank_one(double coef, std::span<const Complex> v) {
    if (v.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "rank-one vector length");
    const auto n = static_cast<Eigen::Index>(dim());
    for (Eigen::Index i = 0; i < n; ++i) {
      m_(i, i) = Complex(m_(i, i).real() + coef * std::norm(v[i]), 0.0);
      for (Eigen::Index j = i + 1; j < n; ++j) {
        m_(i, j) += coef * v[i] * std::conj(v[j]);
        m_(j, i) = std::conj(m_(i, j));
      }
    }
  }

 private:
  explicit HermitianMatrix(Storage m) : m_(std::move(m)) {}
  Storage m_;
};

struct RankOneTerm {
  double coef;
  std::span<const Complex> vec;
};

/// I + sum_j coef_j v_j v_j^H
inline HermitianMatrix rank_one_update_sum(std::size_t dim, std::span<const RankOneTerm> terms) {
  auto out = HermitianMatrix::identity(dim);
  for (const auto& t : terms) {
    if (!(t.coef >= 0.0)) throw Error(ErrorCode::InvalidArgument, "rank-one coefficient must be >= 0");
    out.add_rank_one(t.coef, t.vec);
  }
  return out;
}

namespace detail {

inline Eigen::LLT<Eigen::MatrixXcd> cholesky(const HermitianMatrix& a) {
  Eigen::LLT<Eigen::MatrixXcd> llt(a.matrix());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization failed");
  }
  return llt;
}

}  // namespace detail

inline double log2_det(const HermitianMatrix& a) {
  const auto llt = detail::cholesky(a);
  const auto& l = llt.matrixLLT();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log(l(i, i).real());
  return 2.0 * acc / std::numbers::ln2;
}

/// v^H A^{-1} v via a triangular solve; the inverse is never formed.
inline double inv_quadratic_form(const HermitianMatrix& a, std::span<const Complex> v) {
  if (v.size() != a.dim()) throw Error(ErrorCode::DimensionMismatch, "quadratic-form vector length");
  const auto llt = detail::cholesky(a);
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) rhs(static_cast<Eigen::Index>(i)) = v[i];
  // v^H (L L^H)^{-1} v = |L^{-1} v|^2
  const Eigen::VectorXcd w = llt.matrixL().solve(rhs);
  return w.squaredNorm();
}

}  // namespace wiretap
