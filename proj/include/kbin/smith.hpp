#pragma once

// Smith normal form over a Euclidean domain and the linear algebra built on
// it: solving A X = B, kernel and column-space bases.

#include <optional>
#include <vector>

#include "kbin/matrix.hpp"

namespace kbin {

/// U * A * V == S with U, V invertible; S diagonal with d1 | d2 | ... and the
/// nonzero diagonal entries first. Uinv and Vinv are the exact inverses.
template <class R>
struct SmithDecomposition {
  Matrix<R> U, S, V, Uinv, Vinv;
  std::size_t rank = 0;

  std::vector<typename R::value_type> diagonal() const {
    std::vector<typename R::value_type> d;
    for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
    return d;
  }
};

namespace detail {

template <class R>
class SmithWorker {
 public:
  explicit SmithWorker(const Matrix<R>& a)
      : ring_(a.ring()),
        s_(a),
        u_(Matrix<R>::identity(a.ring(), a.rows())),
        uinv_(Matrix<R>::identity(a.ring(), a.rows())),
        v_(Matrix<R>::identity(a.ring(), a.cols())),
        vinv_(Matrix<R>::identity(a.ring(), a.cols())) {}

  SmithDecomposition<R> run() {
    const std::size_t m = s_.rows(), n = s_.cols();
    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
      if (!reduce_at(t)) break;
      auto u = ring_.canonical_unit(s_(t, t));
      if (!ring_.equal(u, ring_.one())) scale_row(t, u);
    }
    return {std::move(u_), std::move(s_), std::move(v_), std::move(uinv_), std::move(vinv_), t};
  }

 private:
  // Brings a pivot to (t, t) dividing the whole trailing block and clears its
  // row and column. Returns false if the trailing block is zero.
  bool reduce_at(std::size_t t) {
    const std::size_t m = s_.rows(), n = s_.cols();
    for (;;) {
      // smallest norm, first in row-major order
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (ring_.is_zero(s_(i, j))) continue;
          if (pi == m || ring_.norm_less(s_(i, j), s_(pi, pj))) {
            pi = i;
            pj = j;
          }
        }
      if (pi == m) return false;
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (ring_.is_zero(s_(i, t))) continue;
        auto q = ring_.divmod(s_(i, t), s_(t, t)).quotient;
        add_row_multiple(i, t, ring_.neg(q));
        if (!ring_.is_zero(s_(i, t))) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (ring_.is_zero(s_(t, j))) continue;
        auto q = ring_.divmod(s_(t, j), s_(t, t)).quotient;
        add_col_multiple(j, t, ring_.neg(q));
        if (!ring_.is_zero(s_(t, j))) clean = false;
      }
      if (!clean) continue;

      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j) {
          if (ring_.is_zero(s_(i, j))) continue;
          if (!ring_.divide_exact(s_(i, j), s_(t, t))) {
            add_row_multiple(t, i, ring_.one());
            divides = false;
            break;
          }
        }
      if (divides) return true;
    }
  }

  void swap_rows(std::size_t a, std::size_t b) {
    s_.swap_rows(a, b);
    u_.swap_rows(a, b);
    uinv_.swap_cols(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    s_.swap_cols(a, b);
    v_.swap_cols(a, b);
    vinv_.swap_rows(a, b);
  }
  void add_row_multiple(std::size_t target, std::size_t source, const typename R::value_type& c) {
    s_.add_row_multiple(target, source, c);
    u_.add_row_multiple(target, source, c);
    uinv_.add_col_multiple(source, target, ring_.neg(c));
  }
  void add_col_multiple(std::size_t target, std::size_t source, const typename R::value_type& c) {
    s_.add_col_multiple(target, source, c);
    v_.add_col_multiple(target, source, c);
    vinv_.add_row_multiple(source, target, ring_.neg(c));
  }
  void scale_row(std::size_t r, const typename R::value_type& unit) {
    s_.scale_row(r, unit);
    u_.scale_row(r, unit);
    uinv_.scale_col(r, ring_.unit_inverse(unit));
  }

  R ring_;
  Matrix<R> s_, u_, uinv_, v_, vinv_;
};

}  // namespace detail

template <class R>
SmithDecomposition<R> smith(const Matrix<R>& a) {
  return detail::SmithWorker<R>(a).run();
}

template <class R>
std::size_t rank(const Matrix<R>& a) {
  return smith(a).rank;
}

/// Reusable solver for A X = B against a fixed A.
template <class R>
class LinearSolver {
 public:
  explicit LinearSolver(const Matrix<R>& a) : a_rows_(a.rows()), a_cols_(a.cols()), snf_(smith(a)) {}
  explicit LinearSolver(SmithDecomposition<R> snf)
      : a_rows_(snf.S.rows()), a_cols_(snf.S.cols()), snf_(std::move(snf)) {}

  const SmithDecomposition<R>& decomposition() const { return snf_; }

  /// X with A X = B, or nothing when no solution exists over the ring.
  std::optional<Matrix<R>> solve(const Matrix<R>& b) const {
    if (b.rows() != a_rows_)
      throw error("solve: A has " + std::to_string(a_rows_) + " rows, B is " + b.shape());
    const R& ring = snf_.S.ring();
    Matrix<R> ub = snf_.U * b;
    Matrix<R> y(ring, a_cols_, b.cols());
    for (std::size_t i = 0; i < a_rows_; ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (i < snf_.rank) {
          auto q = ring.divide_exact(ub(i, j), snf_.S(i, i));
          if (!q) return std::nullopt;
          y(i, j) = *q;
        } else if (!ring.is_zero(ub(i, j))) {
          return std::nullopt;
        }
      }
    return snf_.V * y;
  }

 private:
  std::size_t a_rows_, a_cols_;
  SmithDecomposition<R> snf_;
};

template <class R>
std::optional<Matrix<R>> solve(const Matrix<R>& a, const Matrix<R>& b) {
  if (a.rows() != b.rows()) throw error("solve: A is " + a.shape() + ", B is " + b.shape());
  return LinearSolver<R>(a).solve(b);
}

/// Columns form a basis of {x : A x = 0}.
template <class R>
Matrix<R> kernel_basis(const SmithDecomposition<R>& snf) {
  return snf.V.columns(snf.rank, snf.V.cols() - snf.rank);
}
template <class R>
Matrix<R> kernel_basis(const Matrix<R>& a) {
  return kernel_basis(smith(a));
}

/// Columns form a basis of the column span of A (free over a PID).
template <class R>
Matrix<R> column_space_basis(const SmithDecomposition<R>& snf) {
  Matrix<R> b = snf.Uinv.columns(0, snf.rank);
  for (std::size_t t = 0; t < snf.rank; ++t) b.scale_col(t, snf.S(t, t));
  return b;
}
template <class R>
Matrix<R> column_space_basis(const Matrix<R>& a) {
  return column_space_basis(smith(a));
}

}  // namespace kbin
