#pragma once

// Bounded binary multicomplexes: Z^n-graded finitely presented modules with a
// pair of differentials (top d^i, bottom d~^i) in every direction i, lowering
// coordinate i by one. Directions are 0-based in this API.

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kbin/complex.hpp"

namespace kbin {

using Coord = std::vector<std::size_t>;

inline std::string format_coord(const Coord& c) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
  out << ")";
  return out.str();
}

/// Grid [0, e_0) x ... x [0, e_{n-1}), row-major with the last axis fastest.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<std::size_t> extents) : extents_(std::move(extents)) {
    strides_.assign(extents_.size(), 1);
    for (std::size_t d = extents_.size(); d-- > 1;) strides_[d - 1] = strides_[d] * extents_[d];
  }

  std::size_t dim() const { return extents_.size(); }
  const std::vector<std::size_t>& extents() const { return extents_; }
  std::size_t extent(std::size_t d) const { return extents_.at(d); }
  std::size_t stride(std::size_t d) const { return strides_.at(d); }
  std::size_t size() const {
    return std::accumulate(extents_.begin(), extents_.end(), std::size_t{1}, std::multiplies<>());
  }

  bool contains(const Coord& c) const {
    if (c.size() != extents_.size()) return false;
    for (std::size_t d = 0; d < c.size(); ++d)
      if (c[d] >= extents_[d]) return false;
    return true;
  }
  std::size_t index(const Coord& c) const {
    std::size_t idx = 0;
    for (std::size_t d = 0; d < c.size(); ++d) idx += c[d] * strides_[d];
    return idx;
  }
  Coord coord(std::size_t idx) const {
    Coord c(extents_.size());
    for (std::size_t d = 0; d < extents_.size(); ++d) {
      c[d] = idx / strides_[d];
      idx %= strides_[d];
    }
    return c;
  }

  Box without(std::size_t dir) const {
    auto e = extents_;
    e.erase(e.begin() + static_cast<std::ptrdiff_t>(dir));
    return Box(e);
  }
  Box with_inserted(std::size_t dir, std::size_t extent) const {
    auto e = extents_;
    e.insert(e.begin() + static_cast<std::ptrdiff_t>(dir), extent);
    return Box(e);
  }

  bool operator==(const Box& o) const { return extents_ == o.extents_; }

 private:
  std::vector<std::size_t> extents_;
  std::vector<std::size_t> strides_;
};

inline Coord drop_axis(const Coord& c, std::size_t dir) {
  Coord r = c;
  r.erase(r.begin() + static_cast<std::ptrdiff_t>(dir));
  return r;
}
inline Coord insert_axis(const Coord& c, std::size_t dir, std::size_t value) {
  Coord r = c;
  r.insert(r.begin() + static_cast<std::ptrdiff_t>(dir), value);
  return r;
}

enum class Side { top, bottom };

inline const char* side_name(Side s) { return s == Side::top ? "top" : "bottom"; }

template <class R>
struct Multicomplex {
  R ring{};
  Box box;
  std::vector<FpModule<R>> objects;
  // top[dir][idx] : objects[idx] -> objects[idx - stride(dir)]; when the
  // coordinate along dir is 0 the target is outside the box and the matrix
  // has zero rows.
  std::vector<std::vector<Matrix<R>>> top, bottom;

  std::size_t dim() const { return box.dim(); }

  static Multicomplex zero(const R& ring, const Box& box) {
    Multicomplex m;
    m.ring = ring;
    m.box = box;
    m.objects.assign(box.size(), FpModule<R>::zero(ring));
    m.top.assign(box.dim(), std::vector<Matrix<R>>(box.size(), Matrix<R>(ring, 0, 0)));
    m.bottom = m.top;
    return m;
  }
  /// Objects given, all differentials zero.
  static Multicomplex with_objects(const R& ring, const Box& box, std::vector<FpModule<R>> objects) {
    Multicomplex m;
    m.ring = ring;
    m.box = box;
    if (objects.size() != box.size()) throw error("Multicomplex: object count does not match the box");
    m.objects = std::move(objects);
    m.top.assign(box.dim(), std::vector<Matrix<R>>(box.size()));
    for (std::size_t d = 0; d < box.dim(); ++d)
      for (std::size_t idx = 0; idx < box.size(); ++idx)
        m.top[d][idx] = Matrix<R>(ring, m.target_gens(d, idx), m.objects[idx].gens());
    m.bottom = m.top;
    return m;
  }

  const FpModule<R>& object(const Coord& c) const { return objects[box.index(c)]; }

  bool has_target(std::size_t dir, std::size_t idx) const { return box.coord(idx)[dir] >= 1; }
  std::size_t target_index(std::size_t dir, std::size_t idx) const { return idx - box.stride(dir); }
  std::size_t target_gens(std::size_t dir, std::size_t idx) const {
    return has_target(dir, idx) ? objects[target_index(dir, idx)].gens() : 0;
  }
  const Matrix<R>& diff(std::size_t dir, Side s, std::size_t idx) const {
    return s == Side::top ? top[dir][idx] : bottom[dir][idx];
  }
  Matrix<R>& diff(std::size_t dir, Side s, std::size_t idx) {
    return s == Side::top ? top[dir][idx] : bottom[dir][idx];
  }

  bool all_free() const {
    return std::all_of(objects.begin(), objects.end(), [](const auto& o) { return o.is_free_presentation(); });
  }
  bool all_zero_gens() const {
    return std::all_of(objects.begin(), objects.end(), [](const auto& o) { return o.gens() == 0; });
  }

  /// Structural equality: same box, presentations and matrices.
  bool operator==(const Multicomplex& o) const {
    return ring == o.ring && box == o.box && objects == o.objects && top == o.top && bottom == o.bottom;
  }
};

/// Morphism of multicomplexes on a common box: one matrix per coordinate.
template <class R>
struct MultiMorphism {
  Box box;
  std::vector<Matrix<R>> components;

  static MultiMorphism identity(const Multicomplex<R>& m) {
    MultiMorphism f{m.box, {}};
    for (const auto& o : m.objects) f.components.push_back(Matrix<R>::identity(m.ring, o.gens()));
    return f;
  }
  static MultiMorphism zero(const Multicomplex<R>& s, const Multicomplex<R>& t) {
    if (!(s.box == t.box)) throw error("MultiMorphism::zero: boxes differ");
    MultiMorphism f{s.box, {}};
    for (std::size_t i = 0; i < s.objects.size(); ++i)
      f.components.push_back(Matrix<R>(s.ring, t.objects[i].gens(), s.objects[i].gens()));
    return f;
  }

  bool operator==(const MultiMorphism& o) const { return box == o.box && components == o.components; }
};

/// g after f, coordinatewise.
template <class R>
MultiMorphism<R> compose(const MultiMorphism<R>& g, const MultiMorphism<R>& f) {
  if (!(g.box == f.box)) throw error("compose: boxes differ");
  MultiMorphism<R> h{f.box, {}};
  for (std::size_t i = 0; i < f.components.size(); ++i) h.components.push_back(g.components[i] * f.components[i]);
  return h;
}

template <class R>
MultiMorphism<R> operator+(const MultiMorphism<R>& a, const MultiMorphism<R>& b) {
  if (!(a.box == b.box)) throw error("MultiMorphism +: boxes differ");
  MultiMorphism<R> h{a.box, {}};
  for (std::size_t i = 0; i < a.components.size(); ++i) h.components.push_back(a.components[i] + b.components[i]);
  return h;
}

/// Assemble block morphisms coordinatewise from a grid of MultiMorphisms.
template <class R>
MultiMorphism<R> from_blocks(const R& ring, const std::vector<std::vector<MultiMorphism<R>>>& grid) {
  if (grid.empty() || grid[0].empty()) throw error("from_blocks: empty grid");
  const Box box = grid[0][0].box;
  MultiMorphism<R> h{box, {}};
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    std::vector<std::vector<Matrix<R>>> g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (const auto& b : grid[i]) g[i].push_back(b.components.at(idx));
    h.components.push_back(from_blocks(ring, g));
  }
  return h;
}

struct ValidationReport {
  bool ok = true;
  std::string message;
  Coord coord;
  long direction = -1;  // 0-based; -1 when not direction specific
  std::string side;

  static ValidationReport pass() { return {}; }
  static ValidationReport fail(std::string msg, Coord c = {}, long dir = -1, std::string side = {}) {
    return {false, std::move(msg), std::move(c), dir, std::move(side)};
  }
};

/// The complex along direction dir through base (whose dir-coordinate is ignored).
template <class R>
ChainComplex<R> line(const Multicomplex<R>& m, std::size_t dir, Side s, Coord base) {
  std::vector<FpModule<R>> objs;
  std::vector<Matrix<R>> diffs;
  for (std::size_t k = 0; k < m.box.extent(dir); ++k) {
    base[dir] = k;
    const std::size_t idx = m.box.index(base);
    objs.push_back(m.objects[idx]);
    if (k >= 1) diffs.push_back(m.diff(dir, s, idx));
  }
  return ChainComplex<R>(std::move(objs), std::move(diffs));
}

namespace detail {

template <class R>
ValidationReport check_shapes(const Multicomplex<R>& m) {
  if (m.objects.size() != m.box.size())
    return ValidationReport::fail("object count " + std::to_string(m.objects.size()) + " does not match box size " +
                                  std::to_string(m.box.size()));
  if (m.top.size() != m.dim() || m.bottom.size() != m.dim())
    return ValidationReport::fail("differential families do not match the dimension");
  for (std::size_t d = 0; d < m.dim(); ++d)
    for (Side s : {Side::top, Side::bottom}) {
      const auto& fam = s == Side::top ? m.top[d] : m.bottom[d];
      if (fam.size() != m.box.size())
        return ValidationReport::fail("differential family has the wrong size", {}, static_cast<long>(d),
                                      side_name(s));
      for (std::size_t idx = 0; idx < m.box.size(); ++idx) {
        const auto& mat = fam[idx];
        if (mat.rows() != m.target_gens(d, idx) || mat.cols() != m.objects[idx].gens())
          return ValidationReport::fail("differential has shape " + mat.shape(), m.box.coord(idx),
                                        static_cast<long>(d), side_name(s));
        if (!(mat.ring() == m.ring))
          return ValidationReport::fail("differential over a different ring", m.box.coord(idx), static_cast<long>(d),
                                        side_name(s));
      }
    }
  for (std::size_t idx = 0; idx < m.box.size(); ++idx)
    if (!(m.objects[idx].ring() == m.ring))
      return ValidationReport::fail("object over a different ring", m.box.coord(idx));
  return ValidationReport::pass();
}

}  // namespace detail

/// Checks every defining condition of an acyclic binary multicomplex: shapes,
/// well-definedness, d d = 0, commutation of differentials in different
/// directions (all four pairings) and acyclicity of every line for both
/// differentials. In free mode all objects must be free.
template <class R>
ValidationReport validate(const Multicomplex<R>& m, AcyclicityMode mode = AcyclicityMode::fp) {
  if (auto r = detail::check_shapes(m); !r.ok) return r;
  const Box& box = m.box;
  const std::size_t n = m.dim();
  if (mode == AcyclicityMode::free)
    for (std::size_t idx = 0; idx < box.size(); ++idx)
      if (!m.objects[idx].is_free_presentation())
        return ValidationReport::fail("object is not free", box.coord(idx));

  for (std::size_t d = 0; d < n; ++d)
    for (Side s : {Side::top, Side::bottom})
      for (std::size_t idx = 0; idx < box.size(); ++idx) {
        if (!m.has_target(d, idx)) continue;
        const auto& tgt = m.objects[m.target_index(d, idx)];
        if (!is_well_defined(m.objects[idx], tgt, m.diff(d, s, idx)))
          return ValidationReport::fail("differential does not respect relations", box.coord(idx),
                                        static_cast<long>(d), side_name(s));
        const Coord c = box.coord(idx);
        if (c[d] >= 2) {
          const std::size_t t2 = m.target_index(d, m.target_index(d, idx));
          if (!m.objects[t2].in_relation_span(m.diff(d, s, m.target_index(d, idx)) * m.diff(d, s, idx)))
            return ValidationReport::fail("differential does not square to zero", c, static_cast<long>(d),
                                          side_name(s));
        }
      }

  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    const Coord c = box.coord(idx);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (c[i] == 0 || c[j] == 0) continue;
        const std::size_t ci = m.target_index(i, idx), cj = m.target_index(j, idx);
        const std::size_t cij = m.target_index(j, ci);
        for (Side a : {Side::top, Side::bottom})
          for (Side b : {Side::top, Side::bottom}) {
            // a^i b^j = b^j a^i
            Matrix<R> lhs = m.diff(i, a, cj) * m.diff(j, b, idx);
            Matrix<R> rhs = m.diff(j, b, ci) * m.diff(i, a, idx);
            if (!m.objects[cij].equal_maps(lhs, rhs))
              return ValidationReport::fail(std::string("differentials ") + side_name(a) + "^" + std::to_string(i + 1) +
                                                " and " + side_name(b) + "^" + std::to_string(j + 1) +
                                                " do not commute",
                                            c, static_cast<long>(i), side_name(a));
          }
      }
  }

  for (std::size_t d = 0; d < n; ++d) {
    const Box base_box = box.without(d);
    for (std::size_t b = 0; b < base_box.size(); ++b) {
      const Coord base = insert_axis(base_box.coord(b), d, 0);
      for (Side s : {Side::top, Side::bottom}) {
        auto l = line(m, d, s, base);
        bool ok;
        long failing = -1;
        if (l.all_free()) {
          ok = is_acyclic_free(l, m.ring, &failing);
        } else {
          ok = true;
          for (long k = 0; k < static_cast<long>(l.size()) && ok; ++k)
            if (!homology(l, k, m.ring).is_zero()) {
              ok = false;
              failing = k;
            }
        }
        if (!ok) {
          Coord at = base;
          at[d] = static_cast<std::size_t>(failing);
          return ValidationReport::fail("line is not acyclic (first failing degree " + std::to_string(failing) + ")",
                                        at, static_cast<long>(d), side_name(s));
        }
      }
    }
  }
  return ValidationReport::pass();
}

/// d^dir == d~^dir on every edge, modulo target relations.
template <class R>
bool is_diagonal(const Multicomplex<R>& m, std::size_t dir) {
  if (dir >= m.dim()) return false;
  for (std::size_t idx = 0; idx < m.box.size(); ++idx) {
    if (!m.has_target(dir, idx)) continue;
    if (!m.objects[m.target_index(dir, idx)].equal_maps(m.top[dir][idx], m.bottom[dir][idx])) return false;
  }
  return true;
}

struct DiagonalityReport {
  std::vector<std::size_t> directions;  // 0-based
  bool contains(std::size_t d) const { return std::find(directions.begin(), directions.end(), d) != directions.end(); }
  bool empty() const { return directions.empty(); }
  bool operator==(const DiagonalityReport&) const = default;
};

template <class R>
DiagonalityReport diagonal_directions(const Multicomplex<R>& m) {
  DiagonalityReport r;
  for (std::size_t d = 0; d < m.dim(); ++d)
    if (is_diagonal(m, d)) r.directions.push_back(d);
  return r;
}

/// Places m inside a larger box at the given offset; new positions hold zero.
template <class R>
Multicomplex<R> embed(const Multicomplex<R>& m, const Box& box, const Coord& offset) {
  if (box.dim() != m.dim() || offset.size() != m.dim()) throw error("embed: dimension mismatch");
  for (std::size_t d = 0; d < m.dim(); ++d)
    if (offset[d] + m.box.extent(d) > box.extent(d)) throw error("embed: target box too small");
  std::vector<FpModule<R>> objs(box.size(), FpModule<R>::zero(m.ring));
  std::vector<long> map(box.size(), -1);
  for (std::size_t idx = 0; idx < m.box.size(); ++idx) {
    Coord c = m.box.coord(idx);
    for (std::size_t d = 0; d < c.size(); ++d) c[d] += offset[d];
    const std::size_t j = box.index(c);
    objs[j] = m.objects[idx];
    map[j] = static_cast<long>(idx);
  }
  Multicomplex<R> r = Multicomplex<R>::with_objects(m.ring, box, std::move(objs));
  for (std::size_t d = 0; d < m.dim(); ++d)
    for (std::size_t j = 0; j < box.size(); ++j) {
      if (map[j] < 0 || !r.has_target(d, j)) continue;
      const std::size_t src = static_cast<std::size_t>(map[j]);
      if (!m.has_target(d, src)) continue;  // target lies in the padding
      r.top[d][j] = m.top[d][src];
      r.bottom[d][j] = m.bottom[d][src];
    }
  return r;
}

template <class R>
MultiMorphism<R> embed(const MultiMorphism<R>& f, const Box& box, const Coord& offset, const Multicomplex<R>& src,
                       const Multicomplex<R>& tgt) {
  // src, tgt are the already-embedded endpoints
  MultiMorphism<R> g = MultiMorphism<R>::zero(src, tgt);
  for (std::size_t idx = 0; idx < f.box.size(); ++idx) {
    Coord c = f.box.coord(idx);
    for (std::size_t d = 0; d < c.size(); ++d) c[d] += offset[d];
    g.components[box.index(c)] = f.components[idx];
  }
  return g;
}

/// Adds `amount` zero slices before every axis.
template <class R>
Multicomplex<R> pad_front(const Multicomplex<R>& m, std::size_t amount = 1) {
  auto e = m.box.extents();
  for (auto& x : e) x += amount;
  return embed(m, Box(e), Coord(m.dim(), amount));
}

template <class R>
Multicomplex<R> direct_sum(const Multicomplex<R>& a, const Multicomplex<R>& b) {
  if (a.dim() != b.dim())
    throw error("direct_sum: dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  if (!(a.ring == b.ring)) throw error("direct_sum: ring mismatch");
  std::vector<std::size_t> e(a.dim());
  for (std::size_t d = 0; d < a.dim(); ++d) e[d] = std::max(a.box.extent(d), b.box.extent(d));
  const Box box(e);
  const Coord origin(a.dim(), 0);
  const Multicomplex<R> x = a.box == box ? a : embed(a, box, origin);
  const Multicomplex<R> y = b.box == box ? b : embed(b, box, origin);
  Multicomplex<R> r;
  r.ring = a.ring;
  r.box = box;
  for (std::size_t idx = 0; idx < box.size(); ++idx) r.objects.push_back(direct_sum(x.objects[idx], y.objects[idx]));
  r.top.assign(a.dim(), {});
  r.bottom.assign(a.dim(), {});
  for (std::size_t d = 0; d < a.dim(); ++d)
    for (std::size_t idx = 0; idx < box.size(); ++idx) {
      r.top[d].push_back(block_diag(x.top[d][idx], y.top[d][idx]));
      r.bottom[d].push_back(block_diag(x.bottom[d][idx], y.bottom[d][idx]));
    }
  return r;
}

template <class R>
Multicomplex<R> direct_sum(const std::vector<Multicomplex<R>>& parts, const R& ring, const Box& box) {
  Multicomplex<R> acc = Multicomplex<R>::zero(ring, box);
  for (const auto& p : parts) acc = direct_sum(acc, p);
  return acc;
}

/// Drops leading and trailing slices whose objects all have no generators.
template <class R>
Multicomplex<R> normalized(const Multicomplex<R>& m) {
  const std::size_t n = m.dim();
  if (n == 0) return m;
  std::vector<std::size_t> lo(n), hi(n);
  bool any = false;
  for (std::size_t d = 0; d < n; ++d) {
    lo[d] = m.box.extent(d);
    hi[d] = 0;
  }
  for (std::size_t idx = 0; idx < m.box.size(); ++idx) {
    if (m.objects[idx].gens() == 0) continue;
    any = true;
    const Coord c = m.box.coord(idx);
    for (std::size_t d = 0; d < n; ++d) {
      lo[d] = std::min(lo[d], c[d]);
      hi[d] = std::max(hi[d], c[d] + 1);
    }
  }
  if (!any) return Multicomplex<R>::zero(m.ring, Box(std::vector<std::size_t>(n, 0)));
  std::vector<std::size_t> e(n);
  for (std::size_t d = 0; d < n; ++d) e[d] = hi[d] - lo[d];
  const Box box(e);
  if (box == m.box) return m;
  std::vector<FpModule<R>> objs;
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    Coord c = box.coord(idx);
    for (std::size_t d = 0; d < n; ++d) c[d] += lo[d];
    objs.push_back(m.object(c));
  }
  Multicomplex<R> r = Multicomplex<R>::with_objects(m.ring, box, std::move(objs));
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t idx = 0; idx < box.size(); ++idx) {
      if (!r.has_target(d, idx)) continue;
      Coord c = box.coord(idx);
      for (std::size_t k = 0; k < n; ++k) c[k] += lo[k];
      const std::size_t src = m.box.index(c);
      r.top[d][idx] = m.top[d][src];
      r.bottom[d][idx] = m.bottom[d][src];
    }
  return r;
}

/// Equality of multicomplexes up to the zero padding of their supports.
template <class R>
bool same_multicomplex(const Multicomplex<R>& a, const Multicomplex<R>& b) {
  return a.dim() == b.dim() && normalized(a) == normalized(b);
}

template <class R>
bool in_subcategory_even(const Multicomplex<R>& m) {
  for (const auto& o : m.objects)
    if (o.gens() % 2 != 0 || !o.is_free_presentation()) return false;
  return true;
}

/// f : a -> b commutes with every differential of both families and is
/// coordinatewise well defined.
template <class R>
bool is_morphism(const MultiMorphism<R>& f, const Multicomplex<R>& a, const Multicomplex<R>& b,
                 std::string* reason = nullptr) {
  if (!(f.box == a.box) || !(a.box == b.box) || f.components.size() != a.box.size()) {
    if (reason) *reason = "boxes differ";
    return false;
  }
  for (std::size_t idx = 0; idx < a.box.size(); ++idx)
    if (!is_well_defined(a.objects[idx], b.objects[idx], f.components[idx])) {
      if (reason) *reason = "component at " + format_coord(a.box.coord(idx)) + " is not well defined";
      return false;
    }
  for (std::size_t d = 0; d < a.dim(); ++d)
    for (Side s : {Side::top, Side::bottom})
      for (std::size_t idx = 0; idx < a.box.size(); ++idx) {
        if (!a.has_target(d, idx)) continue;
        const std::size_t t = a.target_index(d, idx);
        if (!b.objects[t].equal_maps(b.diff(d, s, idx) * f.components[idx], f.components[t] * a.diff(d, s, idx))) {
          if (reason)
            *reason = std::string("does not commute with ") + side_name(s) + " differential in direction " +
                      std::to_string(d + 1) + " at " + format_coord(a.box.coord(idx));
          return false;
        }
      }
  return true;
}

/// Coordinatewise short exactness of a >-f-> b ->g->> c.
template <class R>
bool is_short_exact(const MultiMorphism<R>& f, const MultiMorphism<R>& g, const Multicomplex<R>& a,
                    const Multicomplex<R>& b, const Multicomplex<R>& c, std::string* reason = nullptr) {
  if (!is_morphism(f, a, b, reason) || !is_morphism(g, b, c, reason)) return false;
  for (std::size_t idx = 0; idx < a.box.size(); ++idx) {
    std::string why;
    if (!is_short_exact(a.objects[idx], b.objects[idx], c.objects[idx], f.components[idx], g.components[idx], &why)) {
      if (reason) *reason = "at " + format_coord(a.box.coord(idx)) + ": " + why;
      return false;
    }
  }
  return true;
}

/// Complex of (n-1)-multicomplexes with one differential.
template <class R>
struct ComplexOf {
  std::vector<Multicomplex<R>> terms;
  std::vector<MultiMorphism<R>> diffs;  // diffs[k-1] : terms[k] -> terms[k-1]

  bool operator==(const ComplexOf& o) const { return terms == o.terms && diffs == o.diffs; }
};

/// Binary complex of (n-1)-multicomplexes.
template <class R>
struct BinaryComplexOf {
  std::vector<Multicomplex<R>> terms;
  std::vector<MultiMorphism<R>> top, bottom;  // [k-1] : terms[k] -> terms[k-1]

  bool operator==(const BinaryComplexOf& o) const {
    return terms == o.terms && top == o.top && bottom == o.bottom;
  }
};

/// The (n-1)-multicomplex at coordinate k along dir.
template <class R>
Multicomplex<R> slice(const Multicomplex<R>& m, std::size_t dir, std::size_t k) {
  const Box sb = m.box.without(dir);
  std::vector<FpModule<R>> objs;
  std::vector<std::size_t> full(sb.size());
  for (std::size_t s = 0; s < sb.size(); ++s) {
    full[s] = m.box.index(insert_axis(sb.coord(s), dir, k));
    objs.push_back(m.objects[full[s]]);
  }
  Multicomplex<R> r = Multicomplex<R>::with_objects(m.ring, sb, std::move(objs));
  for (std::size_t d = 0; d < m.dim(); ++d) {
    if (d == dir) continue;
    const std::size_t sd = d < dir ? d : d - 1;
    for (std::size_t s = 0; s < sb.size(); ++s) {
      if (!r.has_target(sd, s)) continue;
      r.top[sd][s] = m.top[d][full[s]];
      r.bottom[sd][s] = m.bottom[d][full[s]];
    }
  }
  return r;
}

/// Views m as a binary complex along dir whose terms are (n-1)-multicomplexes.
template <class R>
BinaryComplexOf<R> expand_along(const Multicomplex<R>& m, std::size_t dir) {
  if (dir >= m.dim()) throw error("expand_along: direction " + std::to_string(dir + 1) + " out of range");
  BinaryComplexOf<R> b;
  const Box sb = m.box.without(dir);
  for (std::size_t k = 0; k < m.box.extent(dir); ++k) {
    b.terms.push_back(slice(m, dir, k));
    if (k == 0) continue;
    MultiMorphism<R> t{sb, {}}, u{sb, {}};
    for (std::size_t s = 0; s < sb.size(); ++s) {
      const std::size_t idx = m.box.index(insert_axis(sb.coord(s), dir, k));
      t.components.push_back(m.top[dir][idx]);
      u.components.push_back(m.bottom[dir][idx]);
    }
    b.top.push_back(std::move(t));
    b.bottom.push_back(std::move(u));
  }
  return b;
}

/// Inverse of expand_along; all terms must share one box.
template <class R>
Multicomplex<R> collapse_along(const BinaryComplexOf<R>& b, std::size_t dir, const R& ring, const Box& term_box) {
  const std::size_t len = b.terms.size();
  if (b.top.size() + 1 != std::max<std::size_t>(len, 1) || b.bottom.size() != b.top.size())
    throw error("collapse_along: differential count does not match the terms");
  if (dir > term_box.dim()) throw error("collapse_along: direction out of range");
  for (const auto& t : b.terms)
    if (!(t.box == term_box)) throw error("collapse_along: terms live on different boxes");
  const Box box = term_box.with_inserted(dir, len);
  std::vector<FpModule<R>> objs(box.size(), FpModule<R>::zero(ring));
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    const Coord c = box.coord(idx);
    objs[idx] = b.terms[c[dir]].objects[term_box.index(drop_axis(c, dir))];
  }
  Multicomplex<R> m = Multicomplex<R>::with_objects(ring, box, std::move(objs));
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    const Coord c = box.coord(idx);
    const std::size_t k = c[dir];
    const std::size_t s = term_box.index(drop_axis(c, dir));
    for (std::size_t d = 0; d < box.dim(); ++d) {
      if (!m.has_target(d, idx)) continue;
      if (d == dir) {
        m.top[d][idx] = b.top[k - 1].components[s];
        m.bottom[d][idx] = b.bottom[k - 1].components[s];
      } else {
        const std::size_t sd = d < dir ? d : d - 1;
        m.top[d][idx] = b.terms[k].top[sd][s];
        m.bottom[d][idx] = b.terms[k].bottom[sd][s];
      }
    }
  }
  return m;
}

template <class R>
Multicomplex<R> collapse_along(const BinaryComplexOf<R>& b, std::size_t dir, const R& ring) {
  if (b.terms.empty()) throw error("collapse_along: empty complex needs an explicit term box");
  return collapse_along(b, dir, ring, b.terms.front().box);
}

/// Doubles the differential of c and places it in direction dir.
template <class R>
Multicomplex<R> delta(const ComplexOf<R>& c, std::size_t dir, const R& ring, const Box& term_box) {
  BinaryComplexOf<R> b{c.terms, c.diffs, c.diffs};
  Multicomplex<R> m = collapse_along(b, dir, ring, term_box);
  if (auto v = validate(m); !v.ok) throw error("delta: input complex is not acyclic: " + v.message);
  return m;
}
template <class R>
Multicomplex<R> delta(const ComplexOf<R>& c, std::size_t dir, const R& ring) {
  if (c.terms.empty()) throw error("delta: empty complex needs an explicit term box");
  return delta(c, dir, ring, c.terms.front().box);
}

template <class R>
ComplexOf<R> top(const Multicomplex<R>& m, std::size_t dir) {
  auto b = expand_along(m, dir);
  return {std::move(b.terms), std::move(b.top)};
}

template <class R>
ComplexOf<R> bot(const Multicomplex<R>& m, std::size_t dir) {
  auto b = expand_along(m, dir);
  return {std::move(b.terms), std::move(b.bottom)};
}

/// A plain chain complex of modules as a complex of 0-dimensional multicomplexes.
template <class R>
ComplexOf<R> as_complex_of(const ChainComplex<R>& c, const R& ring) {
  ComplexOf<R> r;
  const Box point{std::vector<std::size_t>{}};
  for (const auto& o : c.objects()) r.terms.push_back(Multicomplex<R>::with_objects(ring, point, {o}));
  for (const auto& d : c.diffs()) r.diffs.push_back(MultiMorphism<R>{point, {d}});
  return r;
}

template <class R>
ChainComplex<R> as_chain_complex(const ComplexOf<R>& c) {
  std::vector<FpModule<R>> objs;
  std::vector<Matrix<R>> diffs;
  for (const auto& t : c.terms) {
    if (t.dim() != 0) throw error("as_chain_complex: terms must be 0-dimensional");
    objs.push_back(t.objects.at(0));
  }
  for (const auto& d : c.diffs) diffs.push_back(d.components.at(0));
  return ChainComplex<R>(std::move(objs), std::move(diffs));
}

/// Binary complex (n = 1) from two differentials on the same objects.
template <class R>
Multicomplex<R> binary_complex(const R& ring, std::vector<FpModule<R>> objects, std::vector<Matrix<R>> d,
                               std::vector<Matrix<R>> dt) {
  const std::size_t len = objects.size();
  if (d.size() + 1 != std::max<std::size_t>(len, 1) || dt.size() != d.size())
    throw error("binary_complex: differential count does not match the objects");
  Multicomplex<R> m = Multicomplex<R>::with_objects(ring, Box({len}), std::move(objects));
  for (std::size_t k = 1; k < len; ++k) {
    m.top[0][k] = d[k - 1];
    m.bottom[0][k] = dt[k - 1];
  }
  if (auto v = detail::check_shapes(m); !v.ok) throw error("binary_complex: " + v.message);
  return m;
}

/// Replaces the bottom differential in direction dir by the top one.
template <class R>
Multicomplex<R> delta_top(const Multicomplex<R>& m, std::size_t dir) {
  if (dir >= m.dim()) throw error("delta_top: direction out of range");
  Multicomplex<R> r = m;
  r.bottom[dir] = r.top[dir];
  return r;
}

}  // namespace kbin
