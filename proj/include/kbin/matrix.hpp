#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "kbin/ring.hpp"

namespace kbin {

/// Dense row-major matrix over an exact ring.
template <class R>
class Matrix {
 public:
  using ring_type = R;
  using value_type = typename R::value_type;

  Matrix() = default;
  Matrix(R ring, std::size_t rows, std::size_t cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows * cols, ring_.zero()) {}
  Matrix(R ring, std::size_t rows, std::size_t cols, std::vector<value_type> entries)
      : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) throw error("matrix: entry count does not match shape");
  }

  static Matrix zero(const R& ring, std::size_t rows, std::size_t cols) { return Matrix(ring, rows, cols); }
  static Matrix identity(const R& ring, std::size_t n) {
    Matrix m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ring.one();
    return m;
  }
  /// Rows given as integers, mapped into the ring.
  static Matrix from_ints(const R& ring, std::initializer_list<std::initializer_list<long>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(ring, r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw error("from_ints: ragged rows");
      std::size_t j = 0;
      for (long v : row) m(i, j++) = ring.from_int(v);
      ++i;
    }
    return m;
  }
  static Matrix from_ints(const R& ring, std::size_t rows, std::size_t cols, const std::vector<long>& v) {
    Matrix m(ring, rows, cols);
    if (v.size() != rows * cols) throw error("from_ints: entry count does not match shape");
    for (std::size_t k = 0; k < v.size(); ++k) m.data_[k] = ring.from_int(v[k]);
    return m;
  }

  const R& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<value_type>& entries() const { return data_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [&](const value_type& a) { return ring_.is_zero(a); });
  }
  bool is_square() const { return rows_ == cols_; }

  bool operator==(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (!ring_.equal(data_[k], o.data_[k])) return false;
    return true;
  }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o, "+");
    Matrix r(ring_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = ring_.add(data_[k], o.data_[k]);
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    check_same_shape(o, "-");
    Matrix r(ring_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = ring_.sub(data_[k], o.data_[k]);
    return r;
  }
  Matrix operator-() const {
    Matrix r(ring_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = ring_.neg(data_[k]);
    return r;
  }
  Matrix operator*(const Matrix& o) const {
    if (!(ring_ == o.ring_)) throw error("matrix product: ring mismatch");
    if (cols_ != o.rows_)
      throw error("matrix product: shape " + shape() + " times " + o.shape());
    Matrix r(ring_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const value_type& a = (*this)(i, k);
        if (ring_.is_zero(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          const value_type& b = o(k, j);
          if (ring_.is_zero(b)) continue;
          r(i, j) = ring_.add(r(i, j), ring_.mul(a, b));
        }
      }
    return r;
  }
  Matrix scaled(const value_type& s) const {
    Matrix r(ring_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = ring_.mul(s, data_[k]);
    return r;
  }

  Matrix transpose() const {
    Matrix r(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw error("block: out of range");
    Matrix r(ring_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
    return r;
  }
  Matrix columns(std::size_t c0, std::size_t nc) const { return block(0, c0, rows_, nc); }
  Matrix rows_range(std::size_t r0, std::size_t nr) const { return block(r0, 0, nr, cols_); }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw error("set_block: out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[target] += c * row[source]
  void add_row_multiple(std::size_t target, std::size_t source, const value_type& c) {
    if (ring_.is_zero(c)) return;
    for (std::size_t j = 0; j < cols_; ++j)
      if (!ring_.is_zero((*this)(source, j)))
        (*this)(target, j) = ring_.add((*this)(target, j), ring_.mul(c, (*this)(source, j)));
  }
  // col[target] += c * col[source]
  void add_col_multiple(std::size_t target, std::size_t source, const value_type& c) {
    if (ring_.is_zero(c)) return;
    for (std::size_t i = 0; i < rows_; ++i)
      if (!ring_.is_zero((*this)(i, source)))
        (*this)(i, target) = ring_.add((*this)(i, target), ring_.mul(c, (*this)(i, source)));
  }
  void scale_row(std::size_t r, const value_type& c) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = ring_.mul(c, (*this)(r, j));
  }
  void scale_col(std::size_t col, const value_type& c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, col) = ring_.mul(c, (*this)(i, col));
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void check_same_shape(const Matrix& o, const char* op) const {
    if (!(ring_ == o.ring_)) throw error(std::string("matrix ") + op + ": ring mismatch");
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw error(std::string("matrix ") + op + ": shape " + shape() + " vs " + o.shape());
  }

  R ring_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

template <class R>
Matrix<R> hcat(const Matrix<R>& a, const Matrix<R>& b) {
  if (a.rows() != b.rows()) throw error("hcat: row counts " + a.shape() + " vs " + b.shape());
  Matrix<R> r(a.ring(), a.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

template <class R>
Matrix<R> vcat(const Matrix<R>& a, const Matrix<R>& b) {
  if (a.cols() != b.cols()) throw error("vcat: column counts " + a.shape() + " vs " + b.shape());
  Matrix<R> r(a.ring(), a.rows() + b.rows(), a.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), 0, b);
  return r;
}

template <class R>
Matrix<R> block_diag(const Matrix<R>& a, const Matrix<R>& b) {
  Matrix<R> r(a.ring(), a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

/// Assemble a matrix from a grid of blocks; every block row must agree in
/// height and every block column in width.
template <class R>
Matrix<R> from_blocks(const R& ring, const std::vector<std::vector<Matrix<R>>>& grid) {
  if (grid.empty()) return Matrix<R>(ring, 0, 0);
  const std::size_t br = grid.size(), bc = grid[0].size();
  std::vector<std::size_t> heights(br), widths(bc);
  for (std::size_t i = 0; i < br; ++i) {
    if (grid[i].size() != bc) throw error("from_blocks: ragged block grid");
    heights[i] = grid[i][0].rows();
  }
  for (std::size_t j = 0; j < bc; ++j) widths[j] = grid[0][j].cols();
  std::size_t total_r = 0, total_c = 0;
  for (auto h : heights) total_r += h;
  for (auto w : widths) total_c += w;
  Matrix<R> out(ring, total_r, total_c);
  std::size_t r0 = 0;
  for (std::size_t i = 0; i < br; ++i) {
    std::size_t c0 = 0;
    for (std::size_t j = 0; j < bc; ++j) {
      const auto& b = grid[i][j];
      if (b.rows() != heights[i] || b.cols() != widths[j])
        throw error("from_blocks: block (" + std::to_string(i) + "," + std::to_string(j) + ") has shape " +
                    b.shape());
      out.set_block(r0, c0, b);
      c0 += widths[j];
    }
    r0 += heights[i];
  }
  return out;
}

/// Fraction-free (Bareiss) determinant; exact over any integral domain.
template <class R>
typename R::value_type determinant(const Matrix<R>& m) {
  const R& ring = m.ring();
  if (!m.is_square()) throw error("determinant: matrix " + m.shape() + " is not square");
  const std::size_t n = m.rows();
  if (n == 0) return ring.one();
  Matrix<R> a = m;
  typename R::value_type prev = ring.one();
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (ring.is_zero(a(k, k))) {
      std::size_t p = k + 1;
      while (p < n && ring.is_zero(a(p, k))) ++p;
      if (p == n) return ring.zero();
      a.swap_rows(k, p);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        auto num = ring.sub(ring.mul(a(i, j), a(k, k)), ring.mul(a(i, k), a(k, j)));
        auto q = ring.divide_exact(num, prev);
        if (!q) throw error("determinant: inexact Bareiss division");
        a(i, j) = *q;
      }
    prev = a(k, k);
  }
  auto d = a(n - 1, n - 1);
  return negate ? ring.neg(d) : d;
}

template <class R>
std::ostream& operator<<(std::ostream& out, const Matrix<R>& m) {
  out << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << (i ? "; " : "");
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m.ring().format(m(i, j));
  }
  return out << "]";
}

}  // namespace kbin
