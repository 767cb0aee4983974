#pragma once

// Free resolutions of acyclic binary multicomplexes: 0 -> P' -> P -> M -> 0
// with P, P' acyclic and free. The resolution occupies one extra slice in
// front of M in every direction, so the target is M padded by one zero slice
// per axis.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kbin/multicomplex.hpp"

namespace kbin {

// ---------------------------------------------------------------------------
// Sums of morphisms into a common target

template <class R>
struct SumFactorizationStage {
  // source -> N + Q -> N + Q -> N
  FpMorphism<R> first, second, third;
  bool first_epi = false, second_epi = false, third_epi = false;
};

template <class R>
struct SumFactorization {
  bool ok = false;
  std::string explanation;
  std::size_t epi_index = 0;
  std::vector<SumFactorizationStage<R>> stages;
  /// Reorders the original summands so the epimorphism comes first.
  Matrix<R> permutation;
  Matrix<R> composite;  // [f_1 ... f_m]
  bool composite_matches = false;
};

/// Factors [f_1 ... f_m] : Q_1 + ... + Q_m -> N into steps that are each
/// epimorphisms, starting from a summand that is already an epimorphism.
template <class R>
SumFactorization<R> admissible_sum_factorization(const std::vector<FpMorphism<R>>& fs) {
  SumFactorization<R> out;
  if (fs.empty()) {
    out.explanation = "no morphisms given";
    return out;
  }
  const FpModule<R>& n = fs[0].target();
  const R& ring = n.ring();
  for (const auto& f : fs)
    if (!(f.target() == n)) {
      out.explanation = "morphisms have different targets";
      return out;
    }
  std::size_t e = fs.size();
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (analyze(fs[i]).is_epi) {
      e = i;
      break;
    }
  if (e == fs.size()) {
    out.explanation = "none of the morphisms is an epimorphism";
    return out;
  }
  out.epi_index = e;

  std::vector<std::size_t> order{e};
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (i != e) order.push_back(i);

  FpModule<R> src = fs[e].source();
  Matrix<R> g = fs[e].mat();
  bool all_epi = true;
  for (std::size_t t = 1; t < order.size(); ++t) {
    const FpMorphism<R>& f = fs[order[t]];
    const FpModule<R>& q = f.source();
    const std::size_t gn = n.gens(), gq = q.gens();
    FpModule<R> nq = direct_sum(n, q);
    SumFactorizationStage<R> st;
    st.first = FpMorphism<R>(direct_sum(src, q), nq, block_diag(g, Matrix<R>::identity(ring, gq)));
    st.second = FpMorphism<R>(
        nq, nq,
        from_blocks(ring, std::vector<std::vector<Matrix<R>>>{{Matrix<R>::identity(ring, gn), f.mat()},
                                                             {Matrix<R>(ring, gq, gn), Matrix<R>::identity(ring, gq)}}));
    st.third = FpMorphism<R>(nq, n, hcat(Matrix<R>::identity(ring, gn), Matrix<R>(ring, gn, gq)));
    st.first_epi = analyze(st.first).is_epi;
    st.second_epi = analyze(st.second).is_epi;
    st.third_epi = analyze(st.third).is_epi;
    all_epi = all_epi && st.first_epi && st.second_epi && st.third_epi;
    g = st.third.mat() * st.second.mat() * st.first.mat();
    src = direct_sum(src, q);
    out.stages.push_back(std::move(st));
  }

  // Column permutation from the original order to the reordered one.
  std::vector<std::size_t> offset(fs.size() + 1, 0);
  for (std::size_t i = 0; i < fs.size(); ++i) offset[i + 1] = offset[i] + fs[i].source().gens();
  const std::size_t total = offset.back();
  out.permutation = Matrix<R>(ring, total, total);
  std::size_t row = 0;
  for (std::size_t i : order)
    for (std::size_t c = offset[i]; c < offset[i + 1]; ++c) out.permutation(row++, c) = ring.one();

  out.composite = Matrix<R>(ring, n.gens(), 0);
  for (const auto& f : fs) out.composite = hcat(out.composite, f.mat());
  out.composite_matches = n.equal_maps(g * out.permutation, out.composite);
  out.ok = all_epi && out.composite_matches && analyze(src, n, g).is_epi;
  out.explanation = out.ok ? "every step is an epimorphism" : "a factorization step failed verification";
  return out;
}

// ---------------------------------------------------------------------------
// Resolution data

template <class R>
struct ResolutionResult {
  Multicomplex<R> P, Pprime;
  /// M padded by one zero slice in front of every axis.
  Multicomplex<R> target;
  MultiMorphism<R> zeta;  // P -> target, coordinatewise epi
  MultiMorphism<R> iota;  // P' -> P, coordinatewise kernel inclusion
  std::string route;      // "free-cover", "binary" or "diagonal"
  long direction = -1;    // expanded direction, 0-based
};

/// Epimorphism from a free object onto a (padded) term.
template <class R>
struct Cover {
  Multicomplex<R> Q;
  MultiMorphism<R> eps;
  Multicomplex<R> target;
};

template <class R>
using CoverProvider = std::function<Cover<R>(const Multicomplex<R>&)>;

/// delta[k][l-1], delta_prime[k][l-1] : Q_k -> term k-l (unpadded degrees).
template <class R>
struct DeltaLadder {
  std::vector<std::vector<MultiMorphism<R>>> delta, delta_prime;
};

/// Kernel of a coordinatewise epimorphism from a free multicomplex, with the
/// induced differentials and the inclusion.
template <class R>
std::pair<Multicomplex<R>, MultiMorphism<R>> kernel_of(const Multicomplex<R>& p, const Multicomplex<R>& m,
                                                       const MultiMorphism<R>& zeta) {
  const R& ring = p.ring;
  const Box& box = p.box;
  std::vector<Matrix<R>> basis(box.size());
  std::vector<FpModule<R>> objs;
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    basis[idx] = preimage_of_relations(zeta.components[idx], m.objects[idx]);
    objs.push_back(FpModule<R>::free(ring, basis[idx].cols()));
  }
  Multicomplex<R> k = Multicomplex<R>::with_objects(ring, box, std::move(objs));
  std::vector<std::optional<LinearSolver<R>>> solvers(box.size());
  for (std::size_t d = 0; d < box.dim(); ++d)
    for (Side s : {Side::top, Side::bottom})
      for (std::size_t idx = 0; idx < box.size(); ++idx) {
        if (!k.has_target(d, idx)) continue;
        const std::size_t t = k.target_index(d, idx);
        if (basis[idx].cols() == 0 || basis[t].cols() == 0) continue;
        if (!solvers[t]) solvers[t].emplace(basis[t]);
        auto x = solvers[t]->solve(p.diff(d, s, idx) * basis[idx]);
        if (!x) throw error("kernel_of: differential does not preserve the kernel at " + format_coord(box.coord(idx)));
        k.diff(d, s, idx) = *x;
      }
  return {std::move(k), MultiMorphism<R>{box, std::move(basis)}};
}

namespace detail {

template <class R>
Cover<R> free_cover_of(const Multicomplex<R>& term) {
  if (term.dim() != 0) throw error("free_cover_of: expects a single module");
  const auto& o = term.objects.at(0);
  Cover<R> c;
  c.Q = Multicomplex<R>::with_objects(term.ring, term.box, {FpModule<R>::free(term.ring, o.gens())});
  c.eps = MultiMorphism<R>{term.box, {Matrix<R>::identity(term.ring, o.gens())}};
  c.target = term;
  return c;
}

template <class R>
MultiMorphism<R> zero_morphism(const Multicomplex<R>& s, const Multicomplex<R>& t) {
  return MultiMorphism<R>::zero(s, t);
}

template <class R>
MultiMorphism<R> ident(const Multicomplex<R>& q) {
  return MultiMorphism<R>::identity(q);
}

// Block morphisms between Q and Q + Q.
template <class R>
MultiMorphism<R> blocks(const R& ring, const Multicomplex<R>& q, std::vector<std::vector<int>> pattern) {
  std::vector<std::vector<MultiMorphism<R>>> grid;
  for (const auto& row : pattern) {
    std::vector<MultiMorphism<R>> r;
    for (int v : row) r.push_back(v ? ident(q) : zero_morphism(q, q));
    grid.push_back(std::move(r));
  }
  return from_blocks(ring, grid);
}

template <class R>
ResolutionResult<R> assemble(const Multicomplex<R>& mp, std::size_t dir, std::vector<Multicomplex<R>> parts,
                             std::vector<MultiMorphism<R>> zetas, std::string route) {
  ResolutionResult<R> res;
  res.target = mp;
  res.route = std::move(route);
  res.direction = static_cast<long>(dir);
  res.P = Multicomplex<R>::zero(mp.ring, mp.box);
  res.zeta = MultiMorphism<R>::zero(res.P, mp);
  for (std::size_t t = 0; t < parts.size(); ++t) {
    res.P = direct_sum(res.P, parts[t]);
    for (std::size_t idx = 0; idx < mp.box.size(); ++idx)
      res.zeta.components[idx] = hcat(res.zeta.components[idx], zetas[t].components[idx]);
  }
  auto [k, inc] = kernel_of(res.P, mp, res.zeta);
  res.Pprime = std::move(k);
  res.iota = std::move(inc);
  return res;
}

}  // namespace detail

/// Builds the ladder of composites delta_{k,l}, delta'_{k,l} from the covers.
/// terms / top / bottom describe the padded target along the resolved
/// direction; covers[k] maps onto terms[k + 1].
template <class R>
DeltaLadder<R> delta_ladder(const BinaryComplexOf<R>& mp, const std::vector<Cover<R>>& covers) {
  DeltaLadder<R> ladder;
  const std::size_t len = covers.size();
  ladder.delta.resize(len);
  ladder.delta_prime.resize(len);
  for (std::size_t k = 0; k < len; ++k) {
    // padded index of Q_k is k + 1; top[j - 1] : terms[j] -> terms[j - 1]
    for (std::size_t l = 1; l <= k; ++l) {
      const std::size_t j = k + 1 - l;  // padded index of the target term
      if (l == 1) {
        ladder.delta[k].push_back(compose(mp.top[j], covers[k].eps));
        ladder.delta_prime[k].push_back(compose(mp.bottom[j], covers[k].eps));
      } else {
        ladder.delta[k].push_back(compose(mp.top[j], ladder.delta_prime[k][l - 2]));
        ladder.delta_prime[k].push_back(compose(mp.bottom[j], ladder.delta[k][l - 2]));
      }
    }
  }
  return ladder;
}

/// Resolution along direction dir, with covers of the slices supplied by
/// `provider`. With `diagonal` the staircase construction is used (requires
/// M diagonal in dir), otherwise the doubled complexes.
template <class R>
ResolutionResult<R> resolve_along(const Multicomplex<R>& m, std::size_t dir, const CoverProvider<R>& provider,
                                  bool diagonal, DeltaLadder<R>* ladder_out = nullptr) {
  if (dir >= m.dim()) throw error("resolve: direction out of range");
  if (diagonal && !is_diagonal(m, dir))
    throw error("resolve_diagonal: input is not diagonal in direction " + std::to_string(dir + 1));
  const R& ring = m.ring;
  const Multicomplex<R> mp = pad_front(m, 1);
  const BinaryComplexOf<R> ex = expand_along(mp, dir);
  const Box term_box = mp.box.without(dir);
  const std::size_t len = m.box.extent(dir);

  std::vector<Cover<R>> covers;
  for (std::size_t k = 0; k < len; ++k) {
    covers.push_back(provider(slice(m, dir, k)));
    if (!(covers.back().Q.box == term_box) || !(covers.back().target.box == term_box))
      throw error("resolve: cover lives on an unexpected box");
  }
  const Multicomplex<R> zero_term = Multicomplex<R>::zero(ring, term_box);

  std::vector<Multicomplex<R>> parts;
  std::vector<MultiMorphism<R>> zetas;
  DeltaLadder<R> ladder;
  if (!diagonal) ladder = delta_ladder(ex, covers);

  // summands ordered k = len-1 .. 0
  for (std::size_t kk = len; kk-- > 0;) {
    const Multicomplex<R>& q = covers[kk].Q;
    BinaryComplexOf<R> b;
    std::vector<MultiMorphism<R>> z;
    const std::size_t top_index = kk + 1;
    Multicomplex<R> qq = direct_sum(q, q);
    for (std::size_t j = 0; j <= len; ++j) {
      const Multicomplex<R>* term = &zero_term;
      if (diagonal) {
        if (j == top_index || j + 1 == top_index) term = &q;
      } else {
        if (j == top_index || j == 0) term = &q;
        else if (j < top_index) term = &qq;
      }
      b.terms.push_back(*term);
    }
    for (std::size_t j = 1; j <= len; ++j) {
      MultiMorphism<R> t = MultiMorphism<R>::zero(b.terms[j], b.terms[j - 1]);
      MultiMorphism<R> u = t;
      if (diagonal) {
        if (j == top_index) t = u = detail::ident(q);
      } else if (kk == 0) {
        if (j == 1) t = u = detail::ident(q);
      } else if (j == top_index) {
        t = detail::blocks(ring, q, {{1}, {0}});
        u = detail::blocks(ring, q, {{0}, {1}});
      } else if (j == 1) {
        t = detail::blocks(ring, q, {{0, 1}});
        u = detail::blocks(ring, q, {{1, 0}});
      } else if (j < top_index) {
        t = detail::blocks(ring, q, {{0, 1}, {0, 0}});
        u = detail::blocks(ring, q, {{0, 0}, {1, 0}});
      }
      b.top.push_back(std::move(t));
      b.bottom.push_back(std::move(u));
    }
    for (std::size_t j = 0; j <= len; ++j) {
      if (j == top_index) {
        z.push_back(covers[kk].eps);
      } else if (diagonal && j + 1 == top_index) {
        z.push_back(compose(ex.top[top_index - 1], covers[kk].eps));
      } else if (!diagonal && j >= 1 && j < top_index) {
        const std::size_t l = top_index - j;
        MultiMorphism<R> row = ladder.delta[kk][l - 1];
        for (std::size_t idx = 0; idx < term_box.size(); ++idx)
          row.components[idx] = hcat(row.components[idx], ladder.delta_prime[kk][l - 1].components[idx]);
        z.push_back(std::move(row));
      } else {
        z.push_back(MultiMorphism<R>::zero(b.terms[j], ex.terms[j]));
      }
    }
    Multicomplex<R> part = collapse_along(b, dir, ring, term_box);
    // collapse the per-term morphisms into one on the full box
    MultiMorphism<R> zeta = MultiMorphism<R>::zero(part, mp);
    for (std::size_t idx = 0; idx < mp.box.size(); ++idx) {
      const Coord c = mp.box.coord(idx);
      zeta.components[idx] = z[c[dir]].components[term_box.index(drop_axis(c, dir))];
    }
    parts.push_back(std::move(part));
    zetas.push_back(std::move(zeta));
  }
  if (ladder_out) *ladder_out = std::move(ladder);
  return detail::assemble(mp, dir, std::move(parts), std::move(zetas), diagonal ? "diagonal" : "binary");
}

/// Resolution of a single module by its canonical free cover.
template <class R>
ResolutionResult<R> resolve_module(const Multicomplex<R>& m) {
  if (m.dim() != 0) throw error("resolve_module: expects a 0-dimensional multicomplex");
  Cover<R> c = detail::free_cover_of(m);
  ResolutionResult<R> res;
  res.target = m;
  res.P = c.Q;
  res.zeta = c.eps;
  res.route = "free-cover";
  auto [k, inc] = kernel_of(res.P, m, res.zeta);
  res.Pprime = std::move(k);
  res.iota = std::move(inc);
  return res;
}

template <class R>
ResolutionResult<R> resolve_diagonal(const Multicomplex<R>& m, DeltaLadder<R>* = nullptr) {
  if (m.dim() != 1) throw error("resolve_diagonal: expects a binary complex (dimension 1)");
  return resolve_along<R>(m, 0, detail::free_cover_of<R>, true);
}

template <class R>
ResolutionResult<R> resolve_binary(const Multicomplex<R>& m, DeltaLadder<R>* ladder = nullptr) {
  if (m.dim() != 1) throw error("resolve_binary: expects a binary complex (dimension 1)");
  return resolve_along<R>(m, 0, detail::free_cover_of<R>, false, ladder);
}

/// Inductive resolution: expand along the first diagonal direction if there
/// is one (staircase construction), otherwise along direction 1 (doubled
/// complexes); slices are covered by recursive resolutions.
template <class R>
ResolutionResult<R> resolve_multi(const Multicomplex<R>& m) {
  if (m.dim() == 0) return resolve_module(m);
  CoverProvider<R> provider = [](const Multicomplex<R>& term) {
    ResolutionResult<R> r = resolve_multi(term);
    return Cover<R>{std::move(r.P), std::move(r.zeta), std::move(r.target)};
  };
  auto diag = diagonal_directions(m);
  if (!diag.empty()) return resolve_along(m, diag.directions.front(), provider, true);
  return resolve_along(m, 0, provider, false);
}

// ---------------------------------------------------------------------------
// Verification

struct ResolutionVerdict {
  bool ok = true;
  std::vector<std::string> failures;
  bool target_matches = false, p_valid = false, pprime_valid = false, zeta_epi = false, ses = false,
       kernel_forms = false, diagonality = false;

  void fail(std::string msg) {
    ok = false;
    failures.push_back(std::move(msg));
  }
};

/// Full witness check of a resolution of m. Diagonal directions of m must
/// survive in P and P' unless the doubled-complex route was used.
template <class R>
ResolutionVerdict verify_resolution(const Multicomplex<R>& m, const ResolutionResult<R>& r) {
  ResolutionVerdict v;
  v.target_matches = same_multicomplex(m, r.target);
  if (!v.target_matches) v.fail("target is not the input multicomplex");
  auto vp = validate(r.P, AcyclicityMode::free);
  v.p_valid = vp.ok;
  if (!vp.ok) v.fail("P invalid: " + vp.message + " at " + format_coord(vp.coord));
  auto vk = validate(r.Pprime, AcyclicityMode::free);
  v.pprime_valid = vk.ok;
  if (!vk.ok)
    v.fail("P' invalid: " + vk.message + " at " + format_coord(vk.coord) +
           (vk.direction >= 0 ? " direction " + std::to_string(vk.direction + 1) + " " + vk.side : ""));
  if (!(r.P.box == r.target.box) || !(r.Pprime.box == r.P.box)) {
    v.fail("boxes of P, P' and target differ");
    return v;
  }
  std::string why;
  if (!is_morphism(r.zeta, r.P, r.target, &why)) v.fail("zeta is not a morphism: " + why);
  if (!is_morphism(r.iota, r.Pprime, r.P, &why)) v.fail("iota is not a morphism: " + why);
  v.zeta_epi = v.ses = v.kernel_forms = true;
  for (std::size_t idx = 0; idx < r.P.box.size(); ++idx) {
    const auto& src = r.P.objects[idx];
    const auto& tgt = r.target.objects[idx];
    auto a = analyze(src, tgt, r.zeta.components[idx]);
    const std::string at = format_coord(r.P.box.coord(idx));
    if (!a.is_epi) {
      v.zeta_epi = false;
      v.fail("zeta is not surjective at " + at);
    }
    if (!(a.kernel.canonical() == r.Pprime.objects[idx].canonical())) {
      v.kernel_forms = false;
      v.fail("kernel of zeta differs from P' at " + at);
    }
    if (!is_short_exact(r.Pprime.objects[idx], src, tgt, r.iota.components[idx], r.zeta.components[idx], &why)) {
      v.ses = false;
      v.fail("not short exact at " + at + ": " + why);
    }
  }
  // The doubled-complex construction makes no diagonality promise.
  v.diagonality = true;
  if (r.route != "binary")
    for (std::size_t d : diagonal_directions(m).directions)
      if (!is_diagonal(r.P, d) || !is_diagonal(r.Pprime, d)) {
        v.diagonality = false;
        v.fail("diagonality in direction " + std::to_string(d + 1) + " not preserved");
      }
  return v;
}

/// Checks the ladder recursion identities exactly.
template <class R>
bool verify_delta_ladder(const BinaryComplexOf<R>& mp, const std::vector<Cover<R>>& covers,
                         const DeltaLadder<R>& ladder) {
  if (ladder.delta.size() != covers.size()) return false;
  for (std::size_t k = 0; k < covers.size(); ++k) {
    if (ladder.delta[k].size() != k || ladder.delta_prime[k].size() != k) return false;
    for (std::size_t l = 1; l <= k; ++l) {
      const std::size_t j = k + 1 - l;  // top[j] : terms[j + 1] -> terms[j]
      const auto& tgt = mp.terms[j];
      auto eq = [&](const MultiMorphism<R>& a, const MultiMorphism<R>& b) {
        for (std::size_t idx = 0; idx < tgt.box.size(); ++idx)
          if (!tgt.objects[idx].equal_maps(a.components[idx], b.components[idx])) return false;
        return true;
      };
      const auto& d = mp.top[j];
      const auto& dp = mp.bottom[j];
      const auto& lhs = ladder.delta[k][l - 1];
      const auto& lhs_p = ladder.delta_prime[k][l - 1];
      if (l == 1) {
        if (!eq(lhs, compose(d, covers[k].eps)) || !eq(lhs_p, compose(dp, covers[k].eps))) return false;
      } else {
        if (!eq(lhs, compose(d, ladder.delta_prime[k][l - 2])) || !eq(lhs_p, compose(dp, ladder.delta[k][l - 2])))
          return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Classes of modules through free resolutions

/// rank(P) - rank(P') for 0 -> P' -> P -> M -> 0 built from an epimorphism
/// `epi` : R^k -> M.
template <class R>
long phi_class_with(const FpModule<R>& m, const Matrix<R>& epi) {
  if (!is_epi(FpModule<R>::free(m.ring(), epi.cols()), m, epi)) throw error("phi_class: map is not surjective");
  const Matrix<R> k = preimage_of_relations(epi, m);
  return static_cast<long>(epi.cols()) - static_cast<long>(k.cols());
}

template <class R>
long phi_class(const FpModule<R>& m) {
  return phi_class_with(m, free_cover(m).mat());
}

}  // namespace kbin
