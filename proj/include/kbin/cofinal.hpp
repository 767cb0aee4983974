#pragma once

// Complements in the subcategory of binary multicomplexes of free modules of
// even rank inside all binary multicomplexes of free modules, and the
// rewriting of signed sums of diagonal generators into a single generator
// diagonal in a chosen direction.

#include <set>
#include <string>
#include <vector>

#include "kbin/kgroups.hpp"

namespace kbin {

/// Image of a coordinatewise map into a free multicomplex, with the induced
/// differentials. Objects are free of rank rank(f_c).
template <class R>
Multicomplex<R> image_multicomplex(const Multicomplex<R>& target, const MultiMorphism<R>& f) {
  const Box& box = target.box;
  std::vector<Matrix<R>> basis;
  std::vector<FpModule<R>> objs;
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    basis.push_back(column_space_basis(f.components[idx]));
    objs.push_back(FpModule<R>::free(target.ring, basis.back().cols()));
  }
  Multicomplex<R> c = Multicomplex<R>::with_objects(target.ring, box, std::move(objs));
  std::vector<std::optional<LinearSolver<R>>> solvers(box.size());
  for (std::size_t d = 0; d < box.dim(); ++d)
    for (Side s : {Side::top, Side::bottom})
      for (std::size_t idx = 0; idx < box.size(); ++idx) {
        if (!c.has_target(d, idx)) continue;
        const std::size_t t = c.target_index(d, idx);
        if (basis[idx].cols() == 0 || basis[t].cols() == 0) continue;
        if (!solvers[t]) solvers[t].emplace(basis[t]);
        auto x = solvers[t]->solve(target.diff(d, s, idx) * basis[idx]);
        if (!x) throw error("image_multicomplex: image not preserved at " + format_coord(box.coord(idx)));
        c.diff(d, s, idx) = *x;
      }
  return c;
}

/// Coordinates carrying an odd rank; additive under direct sum as symmetric
/// difference and empty exactly on the even-rank subcategory.
template <class R>
std::set<Coord> rel_class(const Multicomplex<R>& m) {
  std::set<Coord> odd;
  for (std::size_t idx = 0; idx < m.box.size(); ++idx)
    if (m.objects[idx].gens() % 2 == 1) odd.insert(m.box.coord(idx));
  return odd;
}

inline std::set<Coord> rel_class_sum(const std::set<Coord>& a, const std::set<Coord>& b) {
  std::set<Coord> r;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.begin()));
  return r;
}

template <class R>
Multicomplex<R> complement(const Multicomplex<R>& n, long direction);

template <class R>
Multicomplex<R> pair_complement(const Multicomplex<R>& n1, const Multicomplex<R>& n2);

namespace detail {

/// Zero objects on the box of m.
template <class R>
Multicomplex<R> zero_like(const Multicomplex<R>& m) {
  return Multicomplex<R>::with_objects(m.ring, m.box, std::vector<FpModule<R>>(m.box.size(), FpModule<R>::zero(m.ring)));
}

/// Shift complex from the pieces t[1..len-1] (t[0] = t[len] = 0): degree k is
/// t_{k+1} + t_k and the differential is [[0, 1], [0, 0]]; placed diagonally
/// in direction dir.
template <class R>
Multicomplex<R> shift_complex(const std::vector<Multicomplex<R>>& t, std::size_t dir, const R& ring,
                              const Box& term_box) {
  const std::size_t len = t.size();
  ComplexOf<R> c;
  for (std::size_t k = 0; k < len; ++k) {
    const Multicomplex<R>& upper = k + 1 < len ? t[k + 1] : t[0];
    c.terms.push_back(direct_sum(upper, t[k]));
  }
  for (std::size_t k = 1; k < len; ++k) {
    const Multicomplex<R>& src = c.terms[k];
    const Multicomplex<R>& tgt = c.terms[k - 1];
    MultiMorphism<R> e = MultiMorphism<R>::zero(src, tgt);
    // src = t_{k+1} + t_k, tgt = t_k + t_{k-1}: identity from the t_k part of
    // src to the t_k part of tgt
    const Multicomplex<R>& upper = k + 1 < len ? t[k + 1] : t[0];
    for (std::size_t idx = 0; idx < term_box.size(); ++idx) {
      const std::size_t off = upper.objects[idx].gens();
      const std::size_t g = t[k].objects[idx].gens();
      e.components[idx].set_block(0, off, Matrix<R>::identity(ring, g));
    }
    c.diffs.push_back(std::move(e));
  }
  BinaryComplexOf<R> b{c.terms, c.diffs, c.diffs};
  return collapse_along(b, dir, ring, term_box);
}

}  // namespace detail

/// T diagonal in `direction` (0-based; -1 for no preference) with every
/// object of N + T of even rank. When N is diagonal in a direction j other
/// than `direction`, T is diagonal in j as well. N must be valid with free
/// objects; T lives on the box of N.
template <class R>
Multicomplex<R> complement(const Multicomplex<R>& n, long direction) {
  if (!n.all_free()) throw error("complement: objects must be free");
  const R& ring = n.ring;
  const std::size_t dim = n.dim();
  if (in_subcategory_even(n)) return detail::zero_like(n);
  if (dim == 0) {
    return Multicomplex<R>::with_objects(ring, n.box, {FpModule<R>::free(ring, n.objects[0].gens() % 2)});
  }
  const std::size_t i = direction < 0 ? 0 : static_cast<std::size_t>(direction);
  if (i >= dim) throw error("complement: direction " + std::to_string(i + 1) + " out of range");
  const Box& box = n.box;

  std::optional<std::size_t> j;
  for (std::size_t d = 0; d < dim; ++d)
    if (d != i && is_diagonal(n, d)) {
      j = d;
      break;
    }
  const std::size_t dir = j ? *j : i;
  const BinaryComplexOf<R> ex = expand_along(n, dir);
  const std::size_t len = ex.terms.size();
  const Box term_box = box.without(dir);
  std::vector<Multicomplex<R>> t(len, Multicomplex<R>::with_objects(
                                          ring, term_box, std::vector<FpModule<R>>(term_box.size(), FpModule<R>::zero(ring))));
  for (std::size_t k = 1; k < len; ++k) {
    const Multicomplex<R> c = image_multicomplex(ex.terms[k - 1], ex.top[k - 1]);
    if (j) {
      const long sub_dir = static_cast<long>(i < *j ? i : i - 1);
      t[k] = complement(c, sub_dir);
    } else {
      const Multicomplex<R> ct = image_multicomplex(ex.terms[k - 1], ex.bottom[k - 1]);
      t[k] = pair_complement(c, ct);
    }
  }
  return detail::shift_complex(t, dir, ring, term_box);
}

/// N' with N1 + N' and N2 + N' both of even rank everywhere; refuses pairs
/// with different odd-rank patterns.
template <class R>
Multicomplex<R> pair_complement(const Multicomplex<R>& n1, const Multicomplex<R>& n2) {
  if (n1.dim() != n2.dim()) throw error("pair_complement: dimensions differ");
  const Box box = detail::common_box<R>({&n1, &n2});
  const Multicomplex<R> a = detail::embed_origin(n1, box), b = detail::embed_origin(n2, box);
  if (rel_class(a) != rel_class(b)) throw error("pair_complement: the relative classes differ");
  const Multicomplex<R> p = complement(a, -1);
  const Multicomplex<R> p1 = complement(direct_sum(a, p), -1);
  const Multicomplex<R> p2 = complement(direct_sum(b, p), -1);
  return direct_sum(direct_sum(p, p1), p2);
}

/// Replaces the bottom differential in direction i by the top one.
template <class R>
Multicomplex<R> delta_top_retract(const Multicomplex<R>& m, std::size_t i) {
  return delta_top(m, i);
}

// ---------------------------------------------------------------------------
// Diagonal representation

template <class R>
struct DiagonalRepresentation {
  Multicomplex<R> t;
  std::string t_name;
  RelationChain<R> chain;
  GeneratorPool<R> pool;  // input pool plus every generator the chain introduces
};

/// Rewrites x (a signed sum of generators, each diagonal in the direction
/// cited by `directions`) as the class of one generator t diagonal in
/// direction i, modulo diagonal generators of even rank. The chain records
/// every rewrite and verifies with the even-rank predicate.
template <class R>
DiagonalRepresentation<R> diagonal_represent(const FormalClass& x, const GeneratorPool<R>& pool,
                                             const std::map<std::string, std::size_t>& directions, std::size_t i) {
  std::string why;
  if (!tn_membership_certificate(x, pool, directions, &why))
    throw error("diagonal_represent: class is not certified: " + why);
  std::optional<std::size_t> dim;
  for (const auto& [name, c] : x.coef) {
    const auto& m = pool.at(name);
    if (!m.all_free()) throw error("diagonal_represent: generator '" + name + "' has non-free objects");
    if (dim && *dim != m.dim()) throw error("diagonal_represent: generators of different dimensions");
    dim = m.dim();
  }
  DiagonalRepresentation<R> out;
  out.pool = pool;
  out.chain.start = x;
  std::size_t counter = 0;
  auto fresh = [&](const std::string& stem, Multicomplex<R> m) {
    std::string name;
    do {
      name = stem + std::to_string(++counter);
    } while (out.pool.count(name));
    out.pool.emplace(name, std::move(m));
    return name;
  };
  auto add_step = [&](StepKind kind, long c, std::string sub, std::string mid, std::string quot, long dir) {
    RelationStep<R> st;
    st.kind = kind;
    st.coefficient = c;
    st.sub = std::move(sub);
    st.mid = std::move(mid);
    st.quot = std::move(quot);
    st.direction = dir;
    if (kind == StepKind::ses) {
      auto [mono, epi] = split_ses(out.pool.at(st.sub), out.pool.at(st.quot));
      st.mono = std::move(mono);
      st.epi = std::move(epi);
    }
    out.chain.steps.push_back(std::move(st));
  };

  if (!dim) {
    // empty class: the zero multicomplex of any dimension represents it; use
    // dimension i + 1 so that direction i exists
    const R ring = pool.empty() ? R{} : pool.begin()->second.ring;
    out.t = Multicomplex<R>::zero(ring, Box(std::vector<std::size_t>(i + 1, 0)));
    out.t_name = fresh("zero", out.t);
    add_step(StepKind::diagonal, 1, "", out.t_name, "", static_cast<long>(i));
    out.chain.end.add(out.t_name, 1);
    return out;
  }
  if (i >= *dim) throw error("diagonal_represent: direction out of range");
  const R ring = pool.at(x.coef.begin()->first).ring;

  std::vector<std::string> positive, negative;
  for (const auto& [name, c] : x.coef) {
    const std::size_t j = directions.at(name);
    const long sign = c > 0 ? 1 : -1;
    for (long copy = 0; copy < (c > 0 ? c : -c); ++copy) {
      if (j == i || is_diagonal(pool.at(name), i)) {
        (sign > 0 ? positive : negative).push_back(name);
        continue;
      }
      const Multicomplex<R>& g = pool.at(name);
      Multicomplex<R> s = complement(g, static_cast<long>(i));
      if (s.all_zero_gens()) {
        // g itself is an even-rank diagonal generator
        add_step(StepKind::diagonal, -sign, "", name, "", static_cast<long>(j));
        continue;
      }
      const std::string s_name = fresh("s", s);
      const std::string gs_name = fresh("gs", direct_sum(g, out.pool.at(s_name)));
      add_step(StepKind::diagonal, -sign, "", gs_name, "", static_cast<long>(j));
      add_step(StepKind::ses, sign, name, gs_name, s_name, -1);
      (sign > 0 ? negative : positive).push_back(s_name);
    }
  }

  auto combine = [&](const std::vector<std::string>& names, long sign, const std::string& stem) -> std::string {
    std::string acc = names.front();
    for (std::size_t k = 1; k < names.size(); ++k) {
      const std::string sum = fresh(stem, direct_sum(out.pool.at(acc), out.pool.at(names[k])));
      add_step(StepKind::ses, sign, acc, sum, names[k], -1);
      acc = sum;
    }
    return acc;
  };
  std::optional<std::string> u1, u2p;
  if (!positive.empty()) u1 = combine(positive, 1, "u1_");
  if (!negative.empty()) {
    const std::string u2 = combine(negative, -1, "u2_");
    Multicomplex<R> c = complement(out.pool.at(u2), static_cast<long>(i));
    if (c.all_zero_gens()) {
      add_step(StepKind::diagonal, 1, "", u2, "", static_cast<long>(i));
    } else {
      const std::string c_name = fresh("u2c", std::move(c));
      const std::string both = fresh("u2sum", direct_sum(out.pool.at(u2), out.pool.at(c_name)));
      add_step(StepKind::diagonal, 1, "", both, "", static_cast<long>(i));
      add_step(StepKind::ses, -1, u2, both, c_name, -1);
      u2p = c_name;
    }
  }
  if (u1 && u2p) {
    out.t_name = fresh("t", direct_sum(out.pool.at(*u1), out.pool.at(*u2p)));
    add_step(StepKind::ses, 1, *u1, out.t_name, *u2p, -1);
  } else if (u1) {
    out.t_name = *u1;
  } else if (u2p) {
    out.t_name = *u2p;
  } else {
    out.t_name = fresh("zero", Multicomplex<R>::zero(ring, Box(std::vector<std::size_t>(*dim, 0))));
    add_step(StepKind::diagonal, 1, "", out.t_name, "", static_cast<long>(i));
  }
  out.t = out.pool.at(out.t_name);
  out.chain.end.add(out.t_name, 1);
  return out;
}

}  // namespace kbin
