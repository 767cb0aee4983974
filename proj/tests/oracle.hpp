#pragma once

// Reference computations used only by the tests. They share no code with
// the library's elimination routines: ranks come from Gaussian elimination
// over the fraction field, invariant factors from gcds of minors, and
// prime-field questions from exhaustive enumeration.

#include <gmpxx.h>

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using IntMatrix = std::vector<std::vector<mpz_class>>;

inline std::size_t rows(const IntMatrix& a) { return a.size(); }
inline std::size_t cols(const IntMatrix& a) { return a.empty() ? 0 : a[0].size(); }

/// Rank over the rationals by plain fraction Gaussian elimination.
inline std::size_t rational_rank(const IntMatrix& a) {
  std::vector<std::vector<mpq_class>> m(rows(a), std::vector<mpq_class>(cols(a)));
  for (std::size_t i = 0; i < rows(a); ++i)
    for (std::size_t j = 0; j < cols(a); ++j) m[i][j] = a[i][j];
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols(a) && r < rows(a); ++c) {
    std::size_t p = r;
    while (p < rows(a) && m[p][c] == 0) ++p;
    if (p == rows(a)) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < rows(a); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const mpq_class f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols(a); ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

/// Determinant by cofactor expansion along the first row.
inline mpz_class laplace_det(const IntMatrix& a) {
  const std::size_t n = rows(a);
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  mpz_class total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a[0][j] == 0) continue;
    IntMatrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(std::move(row));
    }
    const mpz_class term = a[0][j] * laplace_det(minor);
    total += (j % 2 == 0) ? term : mpz_class(-term);
  }
  return total;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

/// d_k = gcd of all k x k minors, for k = 1 .. min(rows, cols); zero when
/// every minor vanishes.
inline std::vector<mpz_class> determinantal_divisors(const IntMatrix& a) {
  std::vector<mpz_class> d;
  const std::size_t kmax = std::min(rows(a), cols(a));
  for (std::size_t k = 1; k <= kmax; ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(rows(a), k, 0, cur, rs);
    subsets(cols(a), k, 0, cur, cs);
    mpz_class g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        IntMatrix m(k, std::vector<mpz_class>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m[i][j] = a[r[i]][c[j]];
        mpz_class det = laplace_det(m);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), det.get_mpz_t());
      }
    d.push_back(g);
  }
  return d;
}

/// Invariant factors (positive, divisibility ordered, excluding zeros) from
/// the determinantal divisors: s_k = d_k / d_{k-1}.
inline std::vector<mpz_class> invariant_factors(const IntMatrix& a) {
  std::vector<mpz_class> s;
  mpz_class prev = 1;
  for (const auto& dk : determinantal_divisors(a)) {
    if (dk == 0) break;
    s.push_back(dk / prev);
    prev = dk;
  }
  return s;
}

/// Cyclic decomposition data of Z^g / span(rels): free rank and the non-unit
/// invariant factors of the relation matrix.
struct ModuleShape {
  std::size_t free_rank = 0;
  std::vector<mpz_class> torsion;
  bool operator==(const ModuleShape&) const = default;
};

inline ModuleShape module_shape(std::size_t gens, const IntMatrix& rels) {
  ModuleShape s;
  const auto f = rels.empty() || cols(rels) == 0 ? std::vector<mpz_class>{} : invariant_factors(rels);
  s.free_rank = gens - f.size();
  for (const auto& x : f)
    if (x != 1) s.torsion.push_back(x);
  return s;
}

/// Homology of Z^{n_{k+1}} -d_{k+1}-> Z^{n_k} -d_k-> Z^{n_{k-1}} for free
/// objects: free rank from rational ranks, torsion from the invariant factors
/// of d_{k+1}. Empty matrices stand for zero maps.
inline ModuleShape free_homology(std::size_t n_k, const IntMatrix& d_k, const IntMatrix& d_k1) {
  const std::size_t r_out = d_k.empty() ? 0 : rational_rank(d_k);
  const std::size_t r_in = d_k1.empty() ? 0 : rational_rank(d_k1);
  ModuleShape s;
  s.free_rank = n_k - r_out - r_in;
  if (!d_k1.empty() && cols(d_k1) > 0)
    for (const auto& x : invariant_factors(d_k1))
      if (x != 1) s.torsion.push_back(x);
  return s;
}

// ---------------------------------------------------------------------------
// Prime fields by enumeration

using Vec = std::vector<std::int64_t>;
using FpMatrix = std::vector<std::vector<std::int64_t>>;  // rows

inline std::vector<Vec> all_vectors(std::size_t n, std::int64_t p) {
  std::vector<Vec> out(1, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vec> next;
    for (const auto& v : out)
      for (std::int64_t a = 0; a < p; ++a) {
        Vec w = v;
        w[i] = a;
        next.push_back(w);
      }
    out = std::move(next);
  }
  return out;
}

inline Vec apply(const FpMatrix& m, std::size_t out_dim, const Vec& x, std::int64_t p) {
  Vec y(out_dim, 0);
  for (std::size_t i = 0; i < out_dim; ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] = (y[i] + m[i][j] * x[j]) % p;
  return y;
}

/// Rank over GF(p) by Gaussian elimination on a copy.
inline std::size_t rank_mod_p(FpMatrix m, std::int64_t p) {
  const std::size_t r_total = m.size(), c_total = m.empty() ? 0 : m[0].size();
  auto inv = [p](std::int64_t a) {
    std::int64_t r = 1, e = p - 2;
    for (a %= p; e > 0; e >>= 1, a = a * a % p)
      if (e & 1) r = r * a % p;
    return r;
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < c_total && r < r_total; ++c) {
    std::size_t q = r;
    while (q < r_total && ((m[q][c] % p) + p) % p == 0) ++q;
    if (q == r_total) continue;
    std::swap(m[q], m[r]);
    const std::int64_t pivot_inv = inv(((m[r][c] % p) + p) % p);
    for (std::size_t i = 0; i < r_total; ++i) {
      if (i == r) continue;
      const std::int64_t f = ((m[i][c] % p) + p) % p * pivot_inv % p;
      if (f == 0) continue;
      for (std::size_t j = c; j < c_total; ++j) m[i][j] = ((m[i][j] - f * m[r][j]) % p + p) % p;
    }
    ++r;
  }
  return r;
}

/// All vectors in the column span of m (m has `dim` rows, `k` columns).
inline std::set<Vec> span(const FpMatrix& m, std::size_t dim, std::size_t k, std::int64_t p) {
  std::set<Vec> s;
  for (const auto& c : all_vectors(k, p)) s.insert(apply(m, dim, c, p));
  return s;
}

/// Sizes of kernel and cokernel of x -> f x from F^gs / span(rs) to
/// F^gt / span(rt), by counting.
struct CountedMap {
  std::size_t kernel_size = 0, cokernel_size = 0;
};

inline CountedMap count_map(std::size_t gs, const FpMatrix& rs, std::size_t ks, std::size_t gt, const FpMatrix& rt,
                            std::size_t kt, const FpMatrix& f, std::int64_t p) {
  const auto src_rel = span(rs, gs, ks, p);
  const auto tgt_rel = span(rt, gt, kt, p);
  std::size_t in_kernel = 0;
  std::set<Vec> image_plus_rel;
  for (const auto& x : all_vectors(gs, p)) {
    const Vec y = apply(f, gt, x, p);
    if (tgt_rel.count(y)) ++in_kernel;
    for (const auto& r : tgt_rel) {
      Vec z(gt);
      for (std::size_t i = 0; i < gt; ++i) z[i] = (y[i] + r[i]) % p;
      image_plus_rel.insert(z);
    }
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < gt; ++i) total *= static_cast<std::size_t>(p);
  return {in_kernel / src_rel.size(), total / image_plus_rel.size()};
}

}  // namespace oracle
