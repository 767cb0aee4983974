#pragma once

// Formal classes of binary multicomplexes, checkable relation chains, and the
// torsion determinant of binary complexes of free modules.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kbin/multicomplex.hpp"

namespace kbin {

/// Named generators referenced by formal classes and relation steps.
template <class R>
using GeneratorPool = std::map<std::string, Multicomplex<R>>;

/// Signed formal sum of generators; zero coefficients are dropped.
struct FormalClass {
  std::map<std::string, long> coef;

  void add(const std::string& name, long c) {
    if (c == 0) return;
    long& v = coef[name];
    v += c;
    if (v == 0) coef.erase(name);
  }
  bool operator==(const FormalClass&) const = default;

  std::string format() const {
    std::string s;
    for (const auto& [name, c] : coef) {
      if (!s.empty()) s += " ";
      s += (c < 0 ? "- " : (s.empty() ? "" : "+ "));
      const long a = c < 0 ? -c : c;
      if (a != 1) s += std::to_string(a) + "*";
      s += "[" + name + "]";
    }
    return s.empty() ? "0" : s;
  }
};

enum class StepKind { ses, diagonal, iso };

inline const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::ses: return "ses";
    case StepKind::diagonal: return "diagonal";
    case StepKind::iso: return "iso";
  }
  return "?";
}

/// One relation applied to the running class with a coefficient:
///   ses       sub >-mono-> mid ->>epi quot   adds c([mid] - [sub] - [quot])
///   diagonal  mid diagonal in `direction`    adds c[mid]
///   iso       mono : sub -> mid invertible   adds c([mid] - [sub])
/// For ses and iso the morphisms live on the componentwise maximal box of the
/// generators involved, each embedded at the origin.
template <class R>
struct RelationStep {
  StepKind kind = StepKind::ses;
  long coefficient = 1;
  std::string sub, mid, quot;
  MultiMorphism<R> mono, epi;
  long direction = -1;  // 0-based; -1 accepts any diagonal direction
};

template <class R>
struct RelationChain {
  FormalClass start, end;
  std::vector<RelationStep<R>> steps;
};

struct ChainVerdict {
  bool ok = true;
  long failing_step = -1;  // index into steps, or steps.size() for the final comparison
  std::string message;
  FormalClass final_class;
};

/// Which generators a diagonal step may cite; the default accepts all.
template <class R>
using GeneratorPredicate = std::function<bool(const Multicomplex<R>&)>;

namespace detail {

template <class R>
Multicomplex<R> embed_origin(const Multicomplex<R>& m, const Box& box) {
  return m.box == box ? m : embed(m, box, Coord(m.dim(), 0));
}

template <class R>
Box common_box(const std::vector<const Multicomplex<R>*>& ms) {
  std::vector<std::size_t> e(ms.front()->dim(), 0);
  for (const auto* m : ms) {
    if (m->dim() != e.size()) throw error("generators of different dimensions");
    for (std::size_t d = 0; d < e.size(); ++d) e[d] = std::max(e[d], m->box.extent(d));
  }
  return Box(e);
}

/// Representative name per generator: the first name whose normalized
/// multicomplex is equal, so classes refer to multicomplexes, not labels.
template <class R>
std::map<std::string, std::string> canonical_names(const GeneratorPool<R>& pool) {
  std::map<std::string, std::string> rep;
  std::vector<std::pair<std::string, Multicomplex<R>>> seen;
  for (const auto& [name, m] : pool) {
    Multicomplex<R> nm = normalized(m);
    std::string r = name;
    for (const auto& [other, om] : seen)
      if (om == nm) {
        r = other;
        break;
      }
    if (r == name) seen.emplace_back(name, std::move(nm));
    rep[name] = r;
  }
  return rep;
}

inline FormalClass rename(const FormalClass& x, const std::map<std::string, std::string>& rep) {
  FormalClass y;
  for (const auto& [name, c] : x.coef) y.add(rep.at(name), c);
  return y;
}

}  // namespace detail

/// Checks every step's witness and the bookkeeping from start to end.
template <class R>
ChainVerdict verify_chain(const RelationChain<R>& chain, const GeneratorPool<R>& pool,
                          const GeneratorPredicate<R>& diagonal_allowed = nullptr) {
  ChainVerdict v;
  auto fail = [&](long step, std::string msg) {
    v.ok = false;
    v.failing_step = step;
    v.message = std::move(msg);
    return v;
  };
  auto lookup = [&](const std::string& name) -> const Multicomplex<R>* {
    auto it = pool.find(name);
    return it == pool.end() ? nullptr : &it->second;
  };
  for (const auto* cls : {&chain.start, &chain.end})
    for (const auto& [name, c] : cls->coef)
      if (!lookup(name)) return fail(-1, "unknown generator '" + name + "'");
  std::optional<std::size_t> dim;
  for (const auto& [name, m] : pool) {
    if (dim && *dim != m.dim()) return fail(-1, "generators of different dimensions");
    dim = m.dim();
  }
  const auto rep = detail::canonical_names(pool);

  FormalClass running = detail::rename(chain.start, rep);
  for (std::size_t s = 0; s < chain.steps.size(); ++s) {
    const RelationStep<R>& st = chain.steps[s];
    const long step = static_cast<long>(s);
    const Multicomplex<R>* mid = lookup(st.mid);
    if (!mid) return fail(step, "unknown generator '" + st.mid + "'");
    if (auto r = validate(*mid); !r.ok) return fail(step, "generator '" + st.mid + "' invalid: " + r.message);
    switch (st.kind) {
      case StepKind::diagonal: {
        const bool diag = st.direction >= 0 ? is_diagonal(*mid, static_cast<std::size_t>(st.direction))
                                            : !diagonal_directions(*mid).empty();
        if (!diag) return fail(step, "generator '" + st.mid + "' is not diagonal");
        if (diagonal_allowed && !diagonal_allowed(*mid))
          return fail(step, "generator '" + st.mid + "' is outside the admissible subcategory");
        running.add(rep.at(st.mid), st.coefficient);
        break;
      }
      case StepKind::ses:
      case StepKind::iso: {
        const Multicomplex<R>* sub = lookup(st.sub);
        if (!sub) return fail(step, "unknown generator '" + st.sub + "'");
        if (auto r = validate(*sub); !r.ok) return fail(step, "generator '" + st.sub + "' invalid: " + r.message);
        const Multicomplex<R>* quot = nullptr;
        if (st.kind == StepKind::ses) {
          quot = lookup(st.quot);
          if (!quot) return fail(step, "unknown generator '" + st.quot + "'");
          if (auto r = validate(*quot); !r.ok) return fail(step, "generator '" + st.quot + "' invalid: " + r.message);
        }
        std::vector<const Multicomplex<R>*> all{sub, mid};
        if (quot) all.push_back(quot);
        Box box;
        try {
          box = detail::common_box(all);
        } catch (const error& e) {
          return fail(step, e.what());
        }
        const Multicomplex<R> a = detail::embed_origin(*sub, box), b = detail::embed_origin(*mid, box);
        if (!(st.mono.box == box) || st.mono.components.size() != box.size())
          return fail(step, "first morphism lives on the wrong box");
        std::string why;
        if (st.kind == StepKind::ses) {
          const Multicomplex<R> c = detail::embed_origin(*quot, box);
          if (!(st.epi.box == box) || st.epi.components.size() != box.size())
            return fail(step, "second morphism lives on the wrong box");
          if (!is_short_exact(st.mono, st.epi, a, b, c, &why)) return fail(step, "not a short exact sequence: " + why);
          running.add(rep.at(st.mid), st.coefficient);
          running.add(rep.at(st.sub), -st.coefficient);
          running.add(rep.at(st.quot), -st.coefficient);
        } else {
          // sub >-> mid ->> 0
          const Multicomplex<R> z = Multicomplex<R>::zero(a.ring, box);
          if (!is_short_exact(st.mono, MultiMorphism<R>::zero(b, z), a, b, z, &why))
            return fail(step, "not an isomorphism: " + why);
          running.add(rep.at(st.mid), st.coefficient);
          running.add(rep.at(st.sub), -st.coefficient);
        }
        break;
      }
    }
  }
  v.final_class = running;
  if (!(running == detail::rename(chain.end, rep)))
    return fail(static_cast<long>(chain.steps.size()),
                "final class " + running.format() + " differs from " + chain.end.format());
  return v;
}

/// x is a signed sum of generators each diagonal in its cited direction.
template <class R>
bool tn_membership_certificate(const FormalClass& x, const GeneratorPool<R>& pool,
                               const std::map<std::string, std::size_t>& directions, std::string* reason = nullptr) {
  for (const auto& [name, c] : x.coef) {
    auto it = pool.find(name);
    auto dt = directions.find(name);
    if (it == pool.end() || dt == directions.end()) {
      if (reason) *reason = "no witness for generator '" + name + "'";
      return false;
    }
    if (!is_diagonal(it->second, dt->second)) {
      if (reason) *reason = "generator '" + name + "' is not diagonal in direction " + std::to_string(dt->second + 1);
      return false;
    }
  }
  return true;
}

/// Split short exact sequence a >-> a + b ->> b on the common box.
template <class R>
std::pair<MultiMorphism<R>, MultiMorphism<R>> split_ses(const Multicomplex<R>& a, const Multicomplex<R>& b) {
  const Box box = detail::common_box<R>({&a, &b});
  const Multicomplex<R> x = detail::embed_origin(a, box), y = detail::embed_origin(b, box);
  MultiMorphism<R> mono{box, {}}, epi{box, {}};
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    const std::size_t ga = x.objects[idx].gens(), gb = y.objects[idx].gens();
    mono.components.push_back(vcat(Matrix<R>::identity(a.ring, ga), Matrix<R>(a.ring, gb, ga)));
    epi.components.push_back(hcat(Matrix<R>(a.ring, gb, ga), Matrix<R>::identity(a.ring, gb)));
  }
  return {mono, epi};
}

// ---------------------------------------------------------------------------
// Torsion determinant

/// Contraction s_k : N_k -> N_{k+1} with d s + s d = 1, built from degree 0
/// upward; nothing when the complex is not acyclic.
template <class R>
std::optional<std::vector<Matrix<R>>> contraction(const ChainComplex<R>& c, const R& ring) {
  const std::size_t len = c.size();
  std::vector<Matrix<R>> s;
  for (std::size_t k = 0; k < len; ++k) {
    const std::size_t gk = c.object(static_cast<long>(k), ring).gens();
    Matrix<R> rhs = Matrix<R>::identity(ring, gk);
    if (k >= 1) rhs = rhs - s[k - 1] * c.diff(static_cast<long>(k), ring);
    if (k + 1 == len) {
      if (!rhs.is_zero()) return std::nullopt;
      s.push_back(Matrix<R>(ring, 0, gk));
      break;
    }
    auto x = solve(c.diff(static_cast<long>(k + 1), ring), rhs);
    if (!x) return std::nullopt;
    s.push_back(*x);
  }
  return s;
}

/// det(d + s : N_odd -> N_even) with blocks in ascending degree.
template <class R>
typename R::value_type torsion_of_complex(const ChainComplex<R>& c, const R& ring) {
  if (!c.all_free()) throw error("torsion: objects must be free");
  auto s = contraction(c, ring);
  if (!s) throw error("torsion: complex is not acyclic");
  const std::size_t len = c.size();
  std::vector<std::size_t> even_off(len + 1, 0), odd_off(len + 1, 0);
  std::size_t ne = 0, no = 0;
  for (std::size_t k = 0; k < len; ++k) {
    const std::size_t g = c.object(static_cast<long>(k), ring).gens();
    if (k % 2 == 0) {
      even_off[k] = ne;
      ne += g;
    } else {
      odd_off[k] = no;
      no += g;
    }
  }
  if (ne != no) throw error("torsion: odd and even ranks differ");
  Matrix<R> m(ring, ne, no);
  for (std::size_t k = 1; k < len; k += 2) {
    m.set_block(even_off[k - 1], odd_off[k], c.diff(static_cast<long>(k), ring));
    if (k + 1 < len) m.set_block(even_off[k + 1], odd_off[k], (*s)[k]);
  }
  return determinant(m);
}

/// tau(d) * tau(d~)^{-1} for a binary complex of free modules.
template <class R>
typename R::value_type torsion(const Multicomplex<R>& m) {
  if (m.dim() != 1) throw error("torsion: expects a binary complex (dimension 1)");
  if (!m.all_free()) throw error("torsion: objects must be free");
  const R& ring = m.ring;
  const auto top = line(m, 0, Side::top, Coord{0});
  const auto bottom = line(m, 0, Side::bottom, Coord{0});
  const auto a = torsion_of_complex(top, ring);
  const auto b = torsion_of_complex(bottom, ring);
  if (!ring.is_unit(a) || !ring.is_unit(b)) throw error("torsion: determinant is not a unit");
  return ring.mul(a, ring.unit_inverse(b));
}

}  // namespace kbin
