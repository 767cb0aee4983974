#pragma once

// Bounded chain complexes of finitely presented modules, homological grading
// starting at degree 0 (d_k : N_k -> N_{k-1}).

#include <optional>
#include <string>
#include <vector>

#include "kbin/module.hpp"

namespace kbin {

enum class AcyclicityMode { fp, free };

template <class R>
class ChainComplex {
 public:
  ChainComplex() = default;
  /// diffs[k-1] is d_k : objects[k] -> objects[k-1], for k = 1 .. size-1.
  ChainComplex(std::vector<FpModule<R>> objects, std::vector<Matrix<R>> diffs)
      : objects_(std::move(objects)), diffs_(std::move(diffs)) {
    const std::size_t expected = objects_.empty() ? 0 : objects_.size() - 1;
    if (diffs_.size() != expected)
      throw error("ChainComplex: " + std::to_string(objects_.size()) + " objects need " +
                  std::to_string(expected) + " differentials, got " + std::to_string(diffs_.size()));
    for (std::size_t k = 1; k < objects_.size(); ++k) {
      if (!is_well_defined(objects_[k], objects_[k - 1], diffs_[k - 1]))
        throw error("ChainComplex: d_" + std::to_string(k) + " is not a well-defined morphism");
    }
    for (std::size_t k = 2; k < objects_.size(); ++k) {
      if (!objects_[k - 2].in_relation_span(diffs_[k - 2] * diffs_[k - 1]))
        throw error("ChainComplex: d_" + std::to_string(k - 1) + " d_" + std::to_string(k) + " != 0");
    }
  }

  std::size_t size() const { return objects_.size(); }
  const std::vector<FpModule<R>>& objects() const { return objects_; }
  const std::vector<Matrix<R>>& diffs() const { return diffs_; }

  /// N_k, the zero module outside the support.
  FpModule<R> object(long k, const R& ring) const {
    if (k < 0 || static_cast<std::size_t>(k) >= objects_.size()) return FpModule<R>::zero(ring);
    return objects_[k];
  }
  /// d_k : N_k -> N_{k-1}, a zero matrix of the right shape outside the support.
  Matrix<R> diff(long k, const R& ring) const {
    if (k >= 1 && static_cast<std::size_t>(k) < objects_.size()) return diffs_[k - 1];
    return Matrix<R>(ring, object(k - 1, ring).gens(), object(k, ring).gens());
  }

  bool all_free() const {
    for (const auto& o : objects_)
      if (!o.is_free_presentation()) return false;
    return true;
  }

  bool operator==(const ChainComplex& o) const { return objects_ == o.objects_ && diffs_ == o.diffs_; }

 private:
  std::vector<FpModule<R>> objects_;
  std::vector<Matrix<R>> diffs_;
};

/// H_k = ker d_k / im d_{k+1}, presented by quotienting a presentation of the
/// kernel by the lifted image.
template <class R>
FpModule<R> homology(const ChainComplex<R>& c, long k, const R& ring) {
  if (k < 0 || static_cast<std::size_t>(k) >= c.size()) return FpModule<R>::zero(ring);
  const FpModule<R> n = c.object(k, ring);
  auto ker = analyze(n, c.object(k - 1, ring), c.diff(k, ring));
  const Matrix<R>& inc = ker.kernel_inclusion;  // n.gens x kg
  const Matrix<R> in = c.diff(k + 1, ring);     // n.gens x n_{k+1}.gens
  // inc * L = in modulo n.rels
  Matrix<R> lift(ring, inc.cols(), in.cols());
  if (in.cols() > 0) {
    auto sol = solve(hcat(inc, n.rels()), in);
    if (!sol) throw error("homology: image is not contained in the kernel");
    lift = sol->rows_range(0, inc.cols());
  }
  return FpModule<R>(inc.cols(), hcat(ker.kernel.rels(), lift));
}

template <class R>
struct AcyclicityWitness {
  // Z[k] for k = 0 .. size-1; Z[k] is the image of d_{k+1}.
  std::vector<FpModule<R>> z;
  // epi[k] : N_k ->> Z_{k-1}, mono[k] : Z_{k-1} >-> N_{k-1}, for k = 0 .. size
  // (k = 0 and k = size involve zero modules).
  std::vector<Matrix<R>> epi, mono;
};

template <class R>
struct AcyclicityResult {
  bool ok = false;
  AcyclicityWitness<R> witness;
  long failing_degree = -1;
  FpModule<R> obstruction;  // homology at the failing degree
  std::string message;
};

namespace detail {

// Z_{k-1} = image of d_k, with the factorization N_k ->> Z_{k-1} >-> N_{k-1}.
template <class R>
void image_factorization(const FpModule<R>& src, const FpModule<R>& tgt, const Matrix<R>& d, AcyclicityMode mode,
                         FpModule<R>& z, Matrix<R>& epi, Matrix<R>& mono) {
  const R& ring = d.ring();
  if (mode == AcyclicityMode::free) {
    // d's column span is free over a PID; factor d = B * E with B a basis.
    Matrix<R> b = column_space_basis(d);
    auto e = solve(b, d);
    if (!e) throw error("image_factorization: basis does not span the image");
    z = FpModule<R>::free(ring, b.cols());
    epi = *e;
    mono = b;
  } else {
    auto a = analyze(src, tgt, d);
    z = a.image;
    epi = a.image_corestriction;
    mono = a.image_inclusion;
  }
}

}  // namespace detail

/// Factors every differential through a short exact sequence
/// Z_k >-> N_k ->> Z_{k-1}, or reports the lowest degree where that fails.
template <class R>
AcyclicityResult<R> acyclicity_witness(const ChainComplex<R>& c, AcyclicityMode mode, const R& ring) {
  AcyclicityResult<R> res;
  const long n = static_cast<long>(c.size());
  if (mode == AcyclicityMode::free && !c.all_free()) {
    res.message = "free mode requires free objects";
    res.failing_degree = 0;
    return res;
  }
  auto& w = res.witness;
  w.z.resize(c.size());
  w.epi.resize(c.size() + 1);
  w.mono.resize(c.size() + 1);
  // Z_{k-1} for k = 1 .. n-1 from d_k; Z_{n-1} = im d_n = 0.
  for (long k = 0; k <= n; ++k) {
    const FpModule<R> src = c.object(k, ring), tgt = c.object(k - 1, ring);
    if (k >= 1 && k <= n - 1) {
      detail::image_factorization(src, tgt, c.diff(k, ring), mode, w.z[k - 1], w.epi[k], w.mono[k]);
    } else {
      // the image of a map into or out of zero
      FpModule<R> zero = FpModule<R>::zero(ring);
      if (k >= 1) w.z[k - 1] = zero;
      w.epi[k] = Matrix<R>(ring, 0, src.gens());
      w.mono[k] = Matrix<R>(ring, tgt.gens(), 0);
    }
  }
  // Z_k >-> N_k ->> Z_{k-1}
  for (long k = 0; k < n; ++k) {
    const FpModule<R> zk = w.z[k];
    const FpModule<R> zk1 = k >= 1 ? w.z[k - 1] : FpModule<R>::zero(ring);
    std::string why;
    if (!is_short_exact(zk, c.object(k, ring), zk1, w.mono[k + 1], w.epi[k], &why)) {
      res.failing_degree = k;
      res.obstruction = homology(c, k, ring);
      res.message = "not exact at degree " + std::to_string(k) + ": " + why + "; homology " +
                    res.obstruction.canonical().format(ring);
      return res;
    }
  }
  res.ok = true;
  return res;
}

/// Independent check of a witness: mono_k epi_k = d_k and every sequence
/// Z_k >-> N_k ->> Z_{k-1} is short exact.
template <class R>
bool verify_acyclicity_witness(const ChainComplex<R>& c, const AcyclicityWitness<R>& w, AcyclicityMode mode,
                               const R& ring, std::string* reason = nullptr) {
  const long n = static_cast<long>(c.size());
  if (w.z.size() != c.size() || w.epi.size() != c.size() + 1 || w.mono.size() != c.size() + 1) {
    if (reason) *reason = "witness has the wrong number of components";
    return false;
  }
  for (long k = 1; k < n; ++k) {
    if (!c.object(k - 1, ring).equal_maps(w.mono[k] * w.epi[k], c.diff(k, ring))) {
      if (reason) *reason = "mono*epi != d_" + std::to_string(k);
      return false;
    }
  }
  for (long k = 0; k < n; ++k) {
    if (mode == AcyclicityMode::free && !w.z[k].is_free_presentation()) {
      if (reason) *reason = "Z_" + std::to_string(k) + " is not free";
      return false;
    }
    const FpModule<R> zk1 = k >= 1 ? w.z[k - 1] : FpModule<R>::zero(ring);
    if (!is_short_exact(w.z[k], c.object(k, ring), zk1, w.mono[k + 1], w.epi[k], reason)) return false;
  }
  return true;
}

template <class R>
bool is_acyclic(const ChainComplex<R>& c, const R& ring) {
  for (long k = 0; k < static_cast<long>(c.size()); ++k)
    if (!homology(c, k, ring).is_zero()) return false;
  return true;
}

/// Exactness of a complex of free modules from one Smith form per
/// differential: exact at N_k iff rank d_k + rank d_{k+1} = rank N_k and
/// d_{k+1} has unit invariant factors (its image is saturated).
template <class R>
bool is_acyclic_free(const ChainComplex<R>& c, const R& ring, long* failing = nullptr) {
  const long n = static_cast<long>(c.size());
  std::vector<std::size_t> ranks(n + 1, 0);
  std::vector<bool> saturated(n + 1, true);
  for (long k = 1; k < n; ++k) {
    auto snf = smith(c.diff(k, ring));
    ranks[k] = snf.rank;
    for (std::size_t t = 0; t < snf.rank; ++t)
      if (!ring.is_unit(snf.S(t, t))) saturated[k] = false;
  }
  for (long k = 0; k < n; ++k) {
    const std::size_t below = k >= 1 ? ranks[k] : 0;
    const std::size_t above = k + 1 < n ? ranks[k + 1] : 0;
    const bool sat = k + 1 < n ? saturated[k + 1] : true;
    if (below + above != c.object(k, ring).gens() || !sat) {
      if (failing) *failing = k;
      return false;
    }
  }
  return true;
}

template <class R>
struct ChainMap {
  ChainComplex<R> source, target;
  std::vector<Matrix<R>> components;  // components[k] : source_k -> target_k

  Matrix<R> component(long k, const R& ring) const {
    if (k >= 0 && static_cast<std::size_t>(k) < components.size()) return components[k];
    return Matrix<R>(ring, target.object(k, ring).gens(), source.object(k, ring).gens());
  }
};

/// Chain map condition d' f_k = f_{k-1} d in every degree.
template <class R>
bool is_chain_map(const ChainMap<R>& f, const R& ring, std::string* reason = nullptr) {
  const long n = static_cast<long>(std::max(f.source.size(), f.target.size()));
  for (long k = 0; k < n; ++k) {
    const Matrix<R> fk = f.component(k, ring);
    if (fk.rows() != f.target.object(k, ring).gens() || fk.cols() != f.source.object(k, ring).gens()) {
      if (reason) *reason = "component " + std::to_string(k) + " has the wrong shape";
      return false;
    }
    if (!is_well_defined(f.source.object(k, ring), f.target.object(k, ring), fk)) {
      if (reason) *reason = "component " + std::to_string(k) + " is not well defined";
      return false;
    }
  }
  for (long k = 1; k < n; ++k) {
    if (!f.target.object(k - 1, ring).equal_maps(f.target.diff(k, ring) * f.component(k, ring),
                                                 f.component(k - 1, ring) * f.source.diff(k, ring))) {
      if (reason) *reason = "does not commute with d_" + std::to_string(k);
      return false;
    }
  }
  return true;
}

struct SesVerdict {
  bool ok = false;
  long failing_degree = -1;
  std::string message;
};

/// A composable pair of chain maps is short exact iff it is so degreewise.
template <class R>
SesVerdict check_cq_ses(const ChainMap<R>& phi, const ChainMap<R>& psi, const R& ring) {
  SesVerdict v;
  if (!(phi.target == psi.source)) throw error("check_cq_ses: chain maps are not composable");
  std::string why;
  if (!is_chain_map(phi, ring, &why) || !is_chain_map(psi, ring, &why)) {
    v.message = "not a chain map: " + why;
    return v;
  }
  const long n = static_cast<long>(std::max({phi.source.size(), phi.target.size(), psi.target.size()}));
  for (long k = 0; k < n; ++k) {
    if (!is_short_exact(phi.source.object(k, ring), phi.target.object(k, ring), psi.target.object(k, ring),
                        phi.component(k, ring), psi.component(k, ring), &why)) {
      v.failing_degree = k;
      v.message = "degree " + std::to_string(k) + ": " + why;
      return v;
    }
  }
  v.ok = true;
  return v;
}

template <class R>
struct AdmissibleEpiReport {
  bool degreewise_epi = false;
  ChainComplex<R> kernel_complex;
  std::vector<Matrix<R>> kernel_inclusions;
  bool kernel_acyclic = false;
  long failing_degree = -1;
  bool admissible() const { return degreewise_epi && kernel_acyclic; }
};

/// A chain map is an admissible epimorphism of acyclic complexes iff it is a
/// degreewise epimorphism whose degreewise kernels form an acyclic complex.
template <class R>
AdmissibleEpiReport<R> admissible_epi_check(const ChainMap<R>& phi, AcyclicityMode mode, const R& ring) {
  AdmissibleEpiReport<R> rep;
  const long n = static_cast<long>(std::max(phi.source.size(), phi.target.size()));
  rep.degreewise_epi = true;
  std::vector<FpModule<R>> kobj(n);
  std::vector<Matrix<R>> kinc(n);
  for (long k = 0; k < n; ++k) {
    const auto src = phi.source.object(k, ring);
    const auto a = analyze(src, phi.target.object(k, ring), phi.component(k, ring));
    if (!a.is_epi && rep.degreewise_epi) {
      rep.degreewise_epi = false;
      rep.failing_degree = k;
    }
    kobj[k] = a.kernel;
    kinc[k] = a.kernel_inclusion;
  }
  // induced differentials: inc_{k-1} e_k = d_k inc_k modulo N_{k-1} relations
  std::vector<Matrix<R>> kd;
  for (long k = 1; k < n; ++k) {
    const auto nk1 = phi.source.object(k - 1, ring);
    Matrix<R> rhs = phi.source.diff(k, ring) * kinc[k];
    Matrix<R> e(ring, kinc[k - 1].cols(), kinc[k].cols());
    if (rhs.cols() > 0) {
      auto sol = solve(hcat(kinc[k - 1], nk1.rels()), rhs);
      if (!sol) throw error("admissible_epi_check: differential does not preserve kernels");
      e = sol->rows_range(0, kinc[k - 1].cols());
    }
    kd.push_back(e);
  }
  rep.kernel_complex = ChainComplex<R>(kobj, kd);
  rep.kernel_inclusions = kinc;
  rep.kernel_acyclic = acyclicity_witness(rep.kernel_complex, mode, ring).ok;
  return rep;
}

}  // namespace kbin
