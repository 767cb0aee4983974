#pragma once

// Seeded random instances: matrices, automorphisms, complexes and acyclic
// binary multicomplexes. Draws use modulo reduction on a fixed engine so the
// stream is identical across standard libraries.

#include <cstdint>
#include <random>
#include <vector>

#include "kbin/multicomplex.hpp"

namespace kbin {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi].
  long uniform(long lo, long hi) {
    if (hi <= lo) return lo;
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(engine_() % span);
  }
  bool chance(long num, long den) { return uniform(0, den - 1) < num; }
  /// Derived generator for an independent sub-stream.
  Rng split() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 engine_;
};

template <class R>
typename R::value_type random_scalar(const R& ring, Rng& rng, long bound = 3) {
  if constexpr (requires { ring.monomial(ring.field().one(), 1); }) {
    auto p = ring.from_int(rng.uniform(-bound, bound));
    if (rng.chance(1, 3)) p = ring.add(p, ring.monomial(ring.field().from_int(rng.uniform(1, bound)), 1));
    return p;
  } else {
    return ring.from_int(rng.uniform(-bound, bound));
  }
}

template <class R>
typename R::value_type random_unit(const R& ring, Rng& rng) {
  for (;;) {
    auto v = ring.from_int(rng.uniform(-6, 6));
    if (ring.is_unit(v)) return v;
  }
}

template <class R>
Matrix<R> random_matrix(const R& ring, std::size_t rows, std::size_t cols, Rng& rng, long bound = 3) {
  Matrix<R> m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_scalar(ring, rng, bound);
  return m;
}

/// Invertible matrix with its inverse, built from elementary operations.
template <class R>
std::pair<Matrix<R>, Matrix<R>> random_automorphism(const R& ring, std::size_t n, Rng& rng, std::size_t steps = 0) {
  Matrix<R> u = Matrix<R>::identity(ring, n), ui = u;
  if (n == 0) return {u, ui};
  if (steps == 0) steps = 2 * n;
  for (std::size_t s = 0; s < steps; ++s) {
    const auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(n) - 1));
    const auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(n) - 1));
    const long kind = rng.uniform(0, 3);
    if (kind == 0 && i != j) {
      u.swap_rows(i, j);
      ui.swap_cols(i, j);
    } else if (kind == 1) {
      auto c = random_unit(ring, rng);
      u.scale_row(i, c);
      ui.scale_col(i, ring.unit_inverse(c));
    } else if (i != j) {
      auto c = random_scalar(ring, rng, 2);
      u.add_row_multiple(i, j, c);
      ui.add_col_multiple(j, i, ring.neg(c));
    }
  }
  return {u, ui};
}

/// Random module presentation: free part plus cyclic torsion, presented with
/// scrambled generators.
template <class R>
FpModule<R> random_module(const R& ring, Rng& rng, std::size_t max_gens = 3, long torsion_bound = 6) {
  const auto g = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(max_gens)));
  Matrix<R> rels(ring, g, 0);
  for (std::size_t i = 0; i < g; ++i) {
    if (!rng.chance(1, 2)) continue;
    Matrix<R> col(ring, g, 1);
    col(i, 0) = ring.from_int(rng.uniform(0, torsion_bound));
    rels = hcat(rels, col);
  }
  auto [u, ui] = random_automorphism(ring, g, rng);
  Matrix<R> scrambled = u * rels;
  if (scrambled.cols() > 0 && rng.chance(1, 3)) scrambled = hcat(scrambled, scrambled * random_matrix(ring, scrambled.cols(), 1, rng));
  return FpModule<R>(g, scrambled);
}

/// Random complex of free modules, acyclic or not: split-exact pieces plus
/// optional free or torsion homology, conjugated degreewise; or a complex
/// whose differentials factor through kernels of the previous ones.
template <class R>
ChainComplex<R> random_complex(const R& ring, Rng& rng, std::size_t max_length = 6, std::size_t max_rank = 5,
                               bool allow_homology = true) {
  for (;;) {
    const auto len = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(max_length)));
    std::vector<std::size_t> rank(len, 0);
    std::vector<Matrix<R>> diffs;
    std::vector<FpModule<R>> objs;
    if (allow_homology && rng.chance(1, 3)) {
      // d_{k+1} = (kernel basis of d_k) * random, which squares to zero
      for (std::size_t k = 0; k < len; ++k) rank[k] = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(max_rank)));
      Matrix<R> prev_kernel = Matrix<R>::identity(ring, rank[0]);
      for (std::size_t k = 1; k < len; ++k) {
        Matrix<R> d = prev_kernel * random_matrix(ring, prev_kernel.cols(), rank[k], rng);
        diffs.push_back(d);
        prev_kernel = kernel_basis(d);
      }
      for (std::size_t k = 0; k < len; ++k) objs.push_back(FpModule<R>::free(ring, rank[k]));
      return ChainComplex<R>(std::move(objs), std::move(diffs));
    }
    // pieces: a_k split pieces linking degree k+1 -> k; h_k free homology;
    // t_k torsion pieces R -m-> R linking k+1 -> k
    std::vector<std::size_t> a(len, 0), h(len, 0), t(len, 0);
    for (std::size_t k = 0; k + 1 < len; ++k) {
      a[k] = static_cast<std::size_t>(rng.uniform(0, 2));
      if (allow_homology && rng.chance(1, 4)) t[k] = 1;
    }
    if (allow_homology)
      for (std::size_t k = 0; k < len; ++k) h[k] = rng.chance(1, 5) ? 1 : 0;
    bool fits = true;
    for (std::size_t k = 0; k < len; ++k) {
      rank[k] = a[k] + t[k] + h[k] + (k ? a[k - 1] + t[k - 1] : 0);
      if (rank[k] > max_rank) fits = false;
    }
    if (!fits) continue;
    // layout of degree k: [a_k targets | t_k targets | h_k | a_{k-1} sources | t_{k-1} sources]
    for (std::size_t k = 1; k < len; ++k) {
      Matrix<R> d(ring, rank[k - 1], rank[k]);
      const std::size_t src0 = a[k] + t[k] + h[k];
      for (std::size_t i = 0; i < a[k - 1]; ++i) d(i, src0 + i) = ring.one();
      for (std::size_t i = 0; i < t[k - 1]; ++i) {
        typename R::value_type m = ring.from_int(rng.uniform(0, 6));
        d(a[k - 1] + i, src0 + a[k - 1] + i) = m;
      }
      diffs.push_back(d);
    }
    std::vector<std::pair<Matrix<R>, Matrix<R>>> g;
    for (std::size_t k = 0; k < len; ++k) g.push_back(random_automorphism(ring, rank[k], rng));
    for (std::size_t k = 1; k < len; ++k) diffs[k - 1] = g[k - 1].first * diffs[k - 1] * g[k].second;
    for (std::size_t k = 0; k < len; ++k) objs.push_back(FpModule<R>::free(ring, rank[k]));
    return ChainComplex<R>(std::move(objs), std::move(diffs));
  }
}

/// Acyclic free binary complex: split-exact top differential and a bottom
/// differential conjugate to it (or equal when diagonal). With `nonzero` at
/// least one split piece is present.
template <class R>
Multicomplex<R> random_binary_free(const R& ring, Rng& rng, std::size_t max_length, std::size_t max_rank,
                                   bool diagonal = false, bool nonzero = false, long max_piece = 2) {
  for (;;) {
    const auto len = static_cast<std::size_t>(rng.uniform(nonzero ? 2 : 0, static_cast<long>(max_length)));
    std::vector<std::size_t> a(len, 0), rank(len, 0);
    std::size_t pieces = 0;
    for (std::size_t k = 0; k + 1 < len; ++k) pieces += a[k] = static_cast<std::size_t>(rng.uniform(0, max_piece));
    bool fits = !nonzero || pieces > 0;
    for (std::size_t k = 0; k < len; ++k) {
      rank[k] = a[k] + (k ? a[k - 1] : 0);
      if (rank[k] > max_rank) fits = false;
    }
    if (!fits) continue;
    std::vector<Matrix<R>> d;
    for (std::size_t k = 1; k < len; ++k) {
      Matrix<R> m(ring, rank[k - 1], rank[k]);
      for (std::size_t i = 0; i < a[k - 1]; ++i) m(i, a[k] + i) = ring.one();
      d.push_back(m);
    }
    std::vector<std::pair<Matrix<R>, Matrix<R>>> g, h;
    for (std::size_t k = 0; k < len; ++k) {
      g.push_back(random_automorphism(ring, rank[k], rng));
      h.push_back(random_automorphism(ring, rank[k], rng));
    }
    std::vector<Matrix<R>> top, bottom;
    for (std::size_t k = 1; k < len; ++k) {
      top.push_back(g[k - 1].first * d[k - 1] * g[k].second);
      bottom.push_back(diagonal ? top.back() : h[k - 1].first * top.back() * h[k].second);
    }
    std::vector<FpModule<R>> objs;
    for (std::size_t k = 0; k < len; ++k) objs.push_back(FpModule<R>::free(ring, rank[k]));
    return binary_complex(ring, std::move(objs), std::move(top), std::move(bottom));
  }
}

/// Kronecker product of binary complexes: direction i carries the
/// differentials of factor i.
template <class R>
Multicomplex<R> tensor_product(const R& ring, const std::vector<Multicomplex<R>>& factors) {
  std::vector<std::size_t> e;
  for (const auto& f : factors) {
    if (f.dim() != 1 || !f.all_free()) throw error("tensor_product: factors must be free binary complexes");
    e.push_back(f.box.extent(0));
  }
  const Box box(e);
  const std::size_t n = factors.size();
  auto kron = [&](const std::vector<Matrix<R>>& ms) {
    Matrix<R> acc = Matrix<R>::identity(ring, 1);
    for (const auto& m : ms) {
      Matrix<R> r(ring, acc.rows() * m.rows(), acc.cols() * m.cols());
      for (std::size_t i = 0; i < acc.rows(); ++i)
        for (std::size_t j = 0; j < acc.cols(); ++j)
          for (std::size_t p = 0; p < m.rows(); ++p)
            for (std::size_t q = 0; q < m.cols(); ++q)
              r(i * m.rows() + p, j * m.cols() + q) = ring.mul(acc(i, j), m(p, q));
      acc = std::move(r);
    }
    return acc;
  };
  std::vector<FpModule<R>> objs;
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    const Coord c = box.coord(idx);
    std::size_t r = 1;
    for (std::size_t i = 0; i < n; ++i) r *= factors[i].objects[c[i]].gens();
    objs.push_back(FpModule<R>::free(ring, r));
  }
  Multicomplex<R> m = Multicomplex<R>::with_objects(ring, box, std::move(objs));
  for (std::size_t d = 0; d < n; ++d)
    for (Side s : {Side::top, Side::bottom})
      for (std::size_t idx = 0; idx < box.size(); ++idx) {
        const Coord c = box.coord(idx);
        if (c[d] == 0) continue;
        std::vector<Matrix<R>> ms;
        for (std::size_t i = 0; i < n; ++i) {
          const auto g = factors[i].objects[c[i]].gens();
          ms.push_back(i == d ? factors[i].diff(0, s, c[i]) : Matrix<R>::identity(ring, g));
        }
        m.diff(d, s, idx) = kron(ms);
      }
  return m;
}

/// Reduces every object modulo m (relations m * I); exactness of split
/// lines is preserved.
template <class R>
Multicomplex<R> with_coefficients_mod(const Multicomplex<R>& x, const typename R::value_type& m) {
  Multicomplex<R> r = x;
  for (auto& o : r.objects) {
    Matrix<R> rels = Matrix<R>::identity(x.ring, o.gens());
    for (std::size_t i = 0; i < o.gens(); ++i) rels(i, i) = m;
    o = FpModule<R>(o.gens(), rels);
  }
  return r;
}

/// Conjugates every object by an automorphism: d' = g_target d g_source^-1.
/// Relations transform along (rels' = g rels).
template <class R>
Multicomplex<R> conjugate_randomly(const Multicomplex<R>& x, Rng& rng) {
  Multicomplex<R> r = x;
  std::vector<std::pair<Matrix<R>, Matrix<R>>> g;
  for (std::size_t idx = 0; idx < x.box.size(); ++idx) {
    g.push_back(random_automorphism(x.ring, x.objects[idx].gens(), rng));
    r.objects[idx] = FpModule<R>(x.objects[idx].gens(), g.back().first * x.objects[idx].rels());
  }
  for (std::size_t d = 0; d < x.dim(); ++d)
    for (Side s : {Side::top, Side::bottom})
      for (std::size_t idx = 0; idx < x.box.size(); ++idx) {
        if (!x.has_target(d, idx)) continue;
        r.diff(d, s, idx) = g[x.target_index(d, idx)].first * x.diff(d, s, idx) * g[idx].second;
      }
  return r;
}

struct MultiOptions {
  std::size_t dim = 1;
  std::size_t max_extent = 3;  // support per axis
  std::size_t max_rank = 3;    // generators per object
  std::size_t max_summands = 2;
  bool fp = false;             // allow torsion coefficients
  long diagonal_direction = -1;  // 0-based, -1 for none
};

/// Acyclic binary multicomplex: direct sum of conjugated tensor products of
/// binary complexes, optionally reduced modulo small integers.
template <class R>
Multicomplex<R> random_multicomplex(const R& ring, Rng& rng, const MultiOptions& opt) {
  for (;;) {
    const auto summands = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(opt.max_summands)));
    Multicomplex<R> acc = Multicomplex<R>::zero(ring, Box(std::vector<std::size_t>(opt.dim, 0)));
    for (std::size_t s = 0; s < summands; ++s) {
      std::vector<Multicomplex<R>> factors;
      std::vector<std::size_t> offset(opt.dim, 0);
      for (std::size_t i = 0; i < opt.dim; ++i) {
        const bool diag = static_cast<long>(i) == opt.diagonal_direction;
        Multicomplex<R> f =
            random_binary_free(ring, rng, opt.max_extent, opt.max_rank, diag, true, opt.dim >= 2 ? 1 : 2);
        if (f.box.extent(0) < opt.max_extent)
          offset[i] = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(opt.max_extent - f.box.extent(0))));
        factors.push_back(std::move(f));
      }
      Multicomplex<R> t = opt.dim == 0 ? Multicomplex<R>::with_objects(ring, Box{}, {FpModule<R>::free(ring, 1)})
                                       : tensor_product(ring, factors);
      if (opt.fp && rng.chance(1, 2)) t = with_coefficients_mod(t, ring.from_int(rng.uniform(0, 6)));
      std::vector<std::size_t> e(opt.dim);
      for (std::size_t i = 0; i < opt.dim; ++i) e[i] = t.box.extent(i) + offset[i];
      acc = direct_sum(acc, embed(t, Box(e), offset));
    }
    bool fits = true;
    for (const auto& o : acc.objects)
      if (o.gens() > opt.max_rank) fits = false;
    if (!fits) continue;
    return conjugate_randomly(acc, rng);
  }
}

}  // namespace kbin
