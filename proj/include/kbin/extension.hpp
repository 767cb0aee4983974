#pragma once

// Short exact sequences A >-> B ->> C of binary multicomplexes, and the
// equivalent view as a binary multicomplex whose objects are short exact
// sequences of modules.

#include <string>
#include <vector>

#include "kbin/multicomplex.hpp"
#include "kbin/random.hpp"

namespace kbin {

/// A >-> B ->> C, coordinatewise short exact.
template <class R>
struct ExtensionObject {
  Multicomplex<R> A, B, C;
  MultiMorphism<R> mono, epi;

  bool operator==(const ExtensionObject&) const = default;
};

/// One short exact sequence of modules.
template <class R>
struct ModuleExtension {
  FpModule<R> A, B, C;
  Matrix<R> mono, epi;

  bool operator==(const ModuleExtension&) const = default;
};

/// Map of module extensions: one matrix per component.
template <class R>
struct ExtensionMap {
  Matrix<R> a, b, c;

  bool operator==(const ExtensionMap&) const = default;
};

/// Binary multicomplex with short exact sequences as objects.
template <class R>
struct ExtensionMulticomplex {
  R ring{};
  Box box;
  std::vector<ModuleExtension<R>> objects;
  std::vector<std::vector<ExtensionMap<R>>> top, bottom;  // [dir][idx], as in Multicomplex

  bool operator==(const ExtensionMulticomplex& o) const {
    return ring == o.ring && box == o.box && objects == o.objects && top == o.top && bottom == o.bottom;
  }
};

/// Checks the multicomplexes, the two morphisms and coordinatewise exactness.
template <class R>
ValidationReport validate(const ExtensionObject<R>& e) {
  for (const auto* m : {&e.A, &e.B, &e.C}) {
    auto v = validate(*m);
    if (!v.ok) return v;
  }
  std::string why;
  if (!is_short_exact(e.mono, e.epi, e.A, e.B, e.C, &why)) return ValidationReport::fail(why);
  return ValidationReport::pass();
}

/// Multicomplex of extensions -> extension of multicomplexes.
template <class R>
ExtensionObject<R> repack_extension(const ExtensionMulticomplex<R>& x) {
  const std::size_t n = x.box.dim();
  if (x.objects.size() != x.box.size() || x.top.size() != n || x.bottom.size() != n)
    throw error("repack_extension: malformed extension multicomplex");
  ExtensionObject<R> e;
  std::vector<FpModule<R>> a, b, c;
  for (const auto& o : x.objects) {
    a.push_back(o.A);
    b.push_back(o.B);
    c.push_back(o.C);
  }
  e.A = Multicomplex<R>::with_objects(x.ring, x.box, std::move(a));
  e.B = Multicomplex<R>::with_objects(x.ring, x.box, std::move(b));
  e.C = Multicomplex<R>::with_objects(x.ring, x.box, std::move(c));
  e.mono.box = e.epi.box = x.box;
  for (const auto& o : x.objects) {
    e.mono.components.push_back(o.mono);
    e.epi.components.push_back(o.epi);
  }
  for (std::size_t d = 0; d < n; ++d)
    for (Side s : {Side::top, Side::bottom}) {
      const auto& fam = s == Side::top ? x.top[d] : x.bottom[d];
      if (fam.size() != x.box.size()) throw error("repack_extension: malformed differential family");
      for (std::size_t idx = 0; idx < x.box.size(); ++idx) {
        e.A.diff(d, s, idx) = fam[idx].a;
        e.B.diff(d, s, idx) = fam[idx].b;
        e.C.diff(d, s, idx) = fam[idx].c;
      }
    }
  return e;
}

/// Extension of multicomplexes -> multicomplex of extensions.
template <class R>
ExtensionMulticomplex<R> unpack_extension(const ExtensionObject<R>& e) {
  if (!(e.A.box == e.B.box) || !(e.B.box == e.C.box) || !(e.mono.box == e.A.box) || !(e.epi.box == e.A.box))
    throw error("unpack_extension: components live on different boxes");
  ExtensionMulticomplex<R> x;
  x.ring = e.B.ring;
  x.box = e.B.box;
  for (std::size_t idx = 0; idx < x.box.size(); ++idx)
    x.objects.push_back(
        {e.A.objects[idx], e.B.objects[idx], e.C.objects[idx], e.mono.components[idx], e.epi.components[idx]});
  const std::size_t n = x.box.dim();
  x.top.assign(n, {});
  x.bottom.assign(n, {});
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t idx = 0; idx < x.box.size(); ++idx) {
      x.top[d].push_back({e.A.top[d][idx], e.B.top[d][idx], e.C.top[d][idx]});
      x.bottom[d].push_back({e.A.bottom[d][idx], e.B.bottom[d][idx], e.C.bottom[d][idx]});
    }
  return x;
}

/// Direction dir is diagonal when every top map of extensions equals the
/// bottom one, compared componentwise modulo relations.
template <class R>
bool is_diagonal(const ExtensionMulticomplex<R>& x, std::size_t dir) {
  if (dir >= x.box.dim()) return false;
  for (std::size_t idx = 0; idx < x.box.size(); ++idx) {
    if (x.box.coord(idx)[dir] == 0) continue;
    const auto& t = x.objects[idx - x.box.stride(dir)];
    const auto& u = x.top[dir][idx];
    const auto& v = x.bottom[dir][idx];
    if (!t.A.equal_maps(u.a, v.a) || !t.B.equal_maps(u.b, v.b) || !t.C.equal_maps(u.c, v.c)) return false;
  }
  return true;
}

/// Split extension (A, A + C, C) with the middle term conjugated by random
/// coordinatewise automorphisms. A and C are embedded in a common box.
template <class R>
ExtensionObject<R> random_extension(const R& ring, Rng& rng, const MultiOptions& opt) {
  Multicomplex<R> a = random_multicomplex(ring, rng, opt);
  Multicomplex<R> c = random_multicomplex(ring, rng, opt);
  std::vector<std::size_t> ext(opt.dim);
  for (std::size_t d = 0; d < opt.dim; ++d) ext[d] = std::max(a.box.extent(d), c.box.extent(d));
  const Box box(ext);
  const Coord origin(opt.dim, 0);
  a = embed(a, box, origin);
  c = embed(c, box, origin);
  Multicomplex<R> b = direct_sum(a, c);
  ExtensionObject<R> e;
  e.mono.box = e.epi.box = box;
  std::vector<std::pair<Matrix<R>, Matrix<R>>> g;
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    const std::size_t ga = a.objects[idx].gens(), gc = c.objects[idx].gens();
    auto auto_a = random_automorphism(ring, ga, rng);
    auto auto_c = random_automorphism(ring, gc, rng);
    Matrix<R> u = block_diag(auto_a.first, auto_c.first), ui = block_diag(auto_a.second, auto_c.second);
    if (ga > 0 && gc > 0) {
      Matrix<R> x = random_matrix(ring, ga, gc, rng, 2);
      Matrix<R> shear = Matrix<R>::identity(ring, ga + gc), shear_inv = shear;
      shear.set_block(0, ga, x);
      shear_inv.set_block(0, ga, -x);
      u = shear * u;
      ui = ui * shear_inv;
    }
    g.emplace_back(u, ui);
    b.objects[idx] = FpModule<R>(b.objects[idx].gens(), u * b.objects[idx].rels());
    Matrix<R> inc = vcat(Matrix<R>::identity(ring, ga), Matrix<R>(ring, gc, ga));
    Matrix<R> proj = hcat(Matrix<R>(ring, gc, ga), Matrix<R>::identity(ring, gc));
    e.mono.components.push_back(u * inc);
    e.epi.components.push_back(proj * ui);
  }
  for (std::size_t d = 0; d < opt.dim; ++d)
    for (Side s : {Side::top, Side::bottom})
      for (std::size_t idx = 0; idx < box.size(); ++idx) {
        if (!b.has_target(d, idx)) continue;
        b.diff(d, s, idx) = g[b.target_index(d, idx)].first * b.diff(d, s, idx) * g[idx].second;
      }
  e.A = std::move(a);
  e.B = std::move(b);
  e.C = std::move(c);
  return e;
}

}  // namespace kbin
