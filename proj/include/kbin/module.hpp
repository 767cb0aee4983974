#pragma once

// Finitely presented modules over a Euclidean domain and their morphisms.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kbin/smith.hpp"

namespace kbin {

/// Isomorphism invariant of a finitely presented module: free rank plus the
/// non-unit invariant factors, each a canonical associate, in divisibility
/// order.
template <class R>
struct CanonicalForm {
  std::size_t free_rank = 0;
  std::vector<typename R::value_type> torsion;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  bool is_free() const { return torsion.empty(); }

  bool operator==(const CanonicalForm& o) const {
    if (free_rank != o.free_rank || torsion.size() != o.torsion.size()) return false;
    for (std::size_t i = 0; i < torsion.size(); ++i)
      if (!(torsion[i] == o.torsion[i])) return false;
    return true;
  }

  std::string format(const R& ring) const {
    std::ostringstream out;
    bool first = true;
    for (const auto& t : torsion) {
      out << (first ? "" : " + ") << "R/(" << ring.format(t) << ")";
      first = false;
    }
    if (free_rank > 0 || first) out << (first ? "" : " + ") << "R^" << free_rank;
    return out.str();
  }
};

/// R^gens modulo the column span of rels (gens x relation-count).
template <class R>
class FpModule {
 public:
  FpModule() = default;
  FpModule(const R& ring, std::size_t gens) : ring_(ring), gens_(gens), rels_(ring, gens, 0) {}
  FpModule(std::size_t gens, Matrix<R> rels) : ring_(rels.ring()), gens_(gens), rels_(std::move(rels)) {
    if (rels_.rows() != gens_)
      throw error("FpModule: relation matrix " + rels_.shape() + " does not have " + std::to_string(gens_) +
                  " rows");
  }

  static FpModule free(const R& ring, std::size_t rank) { return FpModule(ring, rank); }
  static FpModule zero(const R& ring) { return FpModule(ring, 0); }
  /// R/(a)
  static FpModule cyclic(const R& ring, const typename R::value_type& a) {
    Matrix<R> rel(ring, 1, 1);
    rel(0, 0) = a;
    return FpModule(1, rel);
  }

  const R& ring() const { return ring_; }
  std::size_t gens() const { return gens_; }
  const Matrix<R>& rels() const { return rels_; }

  /// Presented without (nonzero) relations.
  bool is_free_presentation() const { return rels_.is_zero(); }

  CanonicalForm<R> canonical() const {
    CanonicalForm<R> form;
    auto snf = smith(rels_);
    form.free_rank = gens_ - snf.rank;
    for (std::size_t i = 0; i < snf.rank; ++i)
      if (!ring_.is_unit(snf.S(i, i))) form.torsion.push_back(snf.S(i, i));
    return form;
  }
  bool is_zero() const { return canonical().is_zero(); }
  bool isomorphic_to(const FpModule& o) const { return canonical() == o.canonical(); }

  /// v (gens x k) lies in the relation span column by column.
  bool in_relation_span(const Matrix<R>& v) const {
    if (v.is_zero()) return true;
    return solve(rels_, v).has_value();
  }
  /// Equality of two maps into this module.
  bool equal_maps(const Matrix<R>& a, const Matrix<R>& b) const { return in_relation_span(a - b); }

  /// Structural equality of presentations.
  bool operator==(const FpModule& o) const { return gens_ == o.gens_ && rels_ == o.rels_; }

 private:
  R ring_{};
  std::size_t gens_ = 0;
  Matrix<R> rels_;
};

template <class R>
FpModule<R> direct_sum(const FpModule<R>& a, const FpModule<R>& b) {
  return FpModule<R>(a.gens() + b.gens(), block_diag(a.rels(), b.rels()));
}

/// mat * source.rels must land in the span of target.rels.
template <class R>
bool is_well_defined(const FpModule<R>& source, const FpModule<R>& target, const Matrix<R>& mat) {
  if (mat.rows() != target.gens() || mat.cols() != source.gens()) return false;
  return target.in_relation_span(mat * source.rels());
}

template <class R>
class FpMorphism {
 public:
  FpMorphism() = default;
  FpMorphism(FpModule<R> source, FpModule<R> target, Matrix<R> mat)
      : source_(std::move(source)), target_(std::move(target)), mat_(std::move(mat)) {
    if (mat_.rows() != target_.gens() || mat_.cols() != source_.gens())
      throw error("FpMorphism: matrix " + mat_.shape() + " does not map " + std::to_string(source_.gens()) +
                  " generators to " + std::to_string(target_.gens()));
    if (!is_well_defined(source_, target_, mat_))
      throw error("FpMorphism: matrix does not respect the relations");
  }

  static FpMorphism identity(const FpModule<R>& m) {
    return FpMorphism(m, m, Matrix<R>::identity(m.ring(), m.gens()));
  }
  static FpMorphism zero(const FpModule<R>& s, const FpModule<R>& t) {
    return FpMorphism(s, t, Matrix<R>(s.ring(), t.gens(), s.gens()));
  }

  const FpModule<R>& source() const { return source_; }
  const FpModule<R>& target() const { return target_; }
  const Matrix<R>& mat() const { return mat_; }

  /// Equality modulo target relations.
  bool equals(const FpMorphism& o) const { return target_.equal_maps(mat_, o.mat_); }
  bool is_zero() const { return target_.in_relation_span(mat_); }

 private:
  FpModule<R> source_, target_;
  Matrix<R> mat_;
};

/// g after f
template <class R>
FpMorphism<R> compose(const FpMorphism<R>& g, const FpMorphism<R>& f) {
  if (!(f.target() == g.source())) throw error("compose: target of f is not the source of g");
  return FpMorphism<R>(f.source(), g.target(), g.mat() * f.mat());
}

/// Sub-module {x in R^source.gens : mat x in span(target.rels)} as a basis
/// (columns). It contains span(source.rels) whenever mat is well defined.
template <class R>
Matrix<R> preimage_of_relations(const Matrix<R>& mat, const FpModule<R>& target) {
  const std::size_t g = mat.cols();
  Matrix<R> joint = hcat(mat, target.rels());
  Matrix<R> k = kernel_basis(joint).rows_range(0, g);
  return column_space_basis(k);
}

template <class R>
struct MorphismAnalysis {
  bool is_epi = false;
  bool is_mono = false;
  FpModule<R> kernel;
  Matrix<R> kernel_inclusion;  // kernel -> source
  FpModule<R> cokernel;
  Matrix<R> cokernel_projection;  // target -> cokernel
  FpModule<R> image;
  Matrix<R> image_inclusion;  // image -> target
  Matrix<R> image_corestriction;  // source -> image
};

/// Kernel, cokernel and image of a module map, with their structure maps.
template <class R>
MorphismAnalysis<R> analyze(const FpModule<R>& source, const FpModule<R>& target, const Matrix<R>& mat) {
  if (!is_well_defined(source, target, mat)) throw error("analyze: ill-defined morphism");
  const R& ring = mat.ring();
  MorphismAnalysis<R> a;

  // K' = f^{-1}(span target.rels), a free submodule of R^g with basis G.
  Matrix<R> basis = preimage_of_relations(mat, target);
  // ker f = K' / span(source.rels); relations in G-coordinates.
  Matrix<R> kernel_rels(ring, basis.cols(), source.rels().cols());
  if (source.rels().cols() > 0 && basis.cols() > 0) {
    auto w = solve(basis, source.rels());
    if (!w) throw error("analyze: source relations not contained in kernel lift");
    kernel_rels = *w;
  } else if (source.rels().cols() > 0) {
    if (!source.rels().is_zero()) throw error("analyze: source relations not contained in kernel lift");
  }
  a.kernel = FpModule<R>(basis.cols(), kernel_rels);
  a.kernel_inclusion = basis;

  a.cokernel = FpModule<R>(target.gens(), hcat(target.rels(), mat));
  a.cokernel_projection = Matrix<R>::identity(ring, target.gens());

  a.image = FpModule<R>(source.gens(), basis);
  a.image_inclusion = mat;
  a.image_corestriction = Matrix<R>::identity(ring, source.gens());

  a.is_epi = a.cokernel.is_zero();
  a.is_mono = a.kernel.is_zero();
  return a;
}

template <class R>
MorphismAnalysis<R> analyze(const FpMorphism<R>& f) {
  return analyze(f.source(), f.target(), f.mat());
}

template <class R>
bool is_epi(const FpModule<R>& source, const FpModule<R>& target, const Matrix<R>& mat) {
  return FpModule<R>(target.gens(), hcat(target.rels(), mat)).is_zero();
}

template <class R>
bool is_mono(const FpModule<R>& source, const FpModule<R>& target, const Matrix<R>& mat) {
  return analyze(source, target, mat).is_mono;
}

/// Canonical epimorphism R^gens -> M sending basis vectors to generators.
template <class R>
FpMorphism<R> free_cover(const FpModule<R>& m) {
  return FpMorphism<R>(FpModule<R>::free(m.ring(), m.gens()), m, Matrix<R>::identity(m.ring(), m.gens()));
}

/// Is A --f--> B --g--> C short exact?  On failure `reason` names the
/// violated condition.
template <class R>
bool is_short_exact(const FpModule<R>& a, const FpModule<R>& b, const FpModule<R>& c, const Matrix<R>& f,
                    const Matrix<R>& g, std::string* reason = nullptr) {
  auto fail = [&](const char* why) {
    if (reason) *reason = why;
    return false;
  };
  if (!is_well_defined(a, b, f)) return fail("first map is not a well-defined morphism");
  if (!is_well_defined(b, c, g)) return fail("second map is not a well-defined morphism");
  if (!c.in_relation_span(g * f)) return fail("composite is not zero");
  auto fa = analyze(a, b, f);
  if (!fa.is_mono) return fail("first map is not injective");
  auto ga = analyze(b, c, g);
  if (!ga.is_epi) return fail("second map is not surjective");
  // ker g within im f: f X = kernel_inclusion modulo b.rels
  if (ga.kernel_inclusion.cols() > 0) {
    Matrix<R> joint = hcat(f, b.rels());
    if (!solve(joint, ga.kernel_inclusion)) return fail("kernel of the second map exceeds the image of the first");
  }
  return true;
}

}  // namespace kbin
