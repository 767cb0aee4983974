#include <gtest/gtest.h>

#include "kbin/kbin.hpp"
#include "oracle.hpp"

using namespace kbin;

namespace {

const Integers Z;

Matrix<Integers> zm(std::initializer_list<std::initializer_list<long>> rows) { return Matrix<Integers>::from_ints(Z, rows); }

FpModule<Integers> free_z(std::size_t r) { return FpModule<Integers>::free(Z, r); }
FpModule<Integers> cyclic(long n) { return FpModule<Integers>(1, zm({{n}})); }

oracle::IntMatrix to_oracle(const Matrix<Integers>& m) {
  oracle::IntMatrix a(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  return a;
}

std::size_t oracle_rank(const FpModule<Integers>& m) {
  return oracle::module_shape(m.gens(), to_oracle(m.rels())).free_rank;
}

Multicomplex<Integers> unit_complex(long u) { return binary_complex(Z, {free_z(1), free_z(1)}, {zm({{1}})}, {zm({{u}})}); }

void expect_verified(const Multicomplex<Integers>& m, const ResolutionResult<Integers>& r) {
  const auto v = verify_resolution(m, r);
  EXPECT_TRUE(v.ok) << (v.failures.empty() ? std::string() : v.failures.front());
  EXPECT_TRUE(r.P.all_free());
  EXPECT_TRUE(r.Pprime.all_free());
}

/// rank P - rank P' at every coordinate is the rank of the target object.
void expect_rank_bookkeeping(const ResolutionResult<Integers>& r) {
  for (std::size_t idx = 0; idx < r.target.box.size(); ++idx)
    EXPECT_EQ(r.P.objects[idx].gens() - r.Pprime.objects[idx].gens(), oracle_rank(r.target.objects[idx]));
}

}  // namespace

TEST(SumFactorization, EpiSummandAbsorbsTheRest) {
  const FpMorphism<Integers> twice(free_z(1), free_z(1), zm({{2}}));
  const FpMorphism<Integers> once(free_z(1), free_z(1), zm({{1}}));
  const auto f = admissible_sum_factorization<Integers>({twice, once});
  EXPECT_TRUE(f.ok) << f.explanation;
  EXPECT_EQ(f.epi_index, 1u);
  ASSERT_EQ(f.stages.size(), 1u);
  EXPECT_TRUE(f.stages[0].first_epi && f.stages[0].second_epi && f.stages[0].third_epi);
  EXPECT_TRUE(f.composite_matches);
  EXPECT_EQ(f.composite, zm({{2, 1}}));
  EXPECT_EQ(f.permutation, zm({{0, 1}, {1, 0}}));
}

TEST(SumFactorization, TwoSummandStagesAreTheDisplayedMatrices) {
  // [f1 f2] = [1 0] . [[1, f2], [0, 1]] . (f1 + 1)
  const FpMorphism<Integers> f1(free_z(2), free_z(1), zm({{1, 2}}));
  const FpMorphism<Integers> f2(free_z(1), free_z(1), zm({{3}}));
  const auto f = admissible_sum_factorization<Integers>({f1, f2});
  ASSERT_TRUE(f.ok) << f.explanation;
  ASSERT_EQ(f.stages.size(), 1u);
  EXPECT_EQ(f.stages[0].first.mat(), zm({{1, 2, 0}, {0, 0, 1}}));
  EXPECT_EQ(f.stages[0].second.mat(), zm({{1, 3}, {0, 1}}));
  EXPECT_EQ(f.stages[0].third.mat(), zm({{1, 0}}));
  EXPECT_EQ(f.composite, zm({{1, 2, 3}}));
  EXPECT_EQ(f.permutation, Matrix<Integers>::identity(Z, 3));
}

TEST(SumFactorization, RandomEpiFirstSummand) {
  Rng rng(408);
  for (int t = 0; t < 100; ++t) {
    const auto n = random_module(Z, rng, 3, 6);
    const auto cover = free_cover(n);
    const auto extra = static_cast<std::size_t>(rng.uniform(0, 2));
    const FpMorphism<Integers> f1(FpModule<Integers>::free(Z, n.gens() + extra), n,
                                  hcat(cover.mat(), random_matrix(Z, n.gens(), extra, rng)));
    const auto q = random_module(Z, rng, 2, 4);
    // any matrix out of a free module is well defined
    const FpMorphism<Integers> f2(free_z(q.gens()), n, random_matrix(Z, n.gens(), q.gens(), rng));
    const auto f = admissible_sum_factorization<Integers>({f1, f2});
    EXPECT_TRUE(f.ok) << f.explanation;
    EXPECT_EQ(f.epi_index, 0u);
    EXPECT_TRUE(analyze(FpModule<Integers>::free(Z, f.composite.cols()), n, f.composite).is_epi);
  }
}

TEST(SumFactorization, TorsionTarget) {
  const auto n = cyclic(6);
  const FpMorphism<Integers> a(free_z(1), n, zm({{2}}));
  const FpMorphism<Integers> b(free_z(2), n, zm({{1, 3}}));
  const FpMorphism<Integers> c(cyclic(3), n, zm({{2}}));
  const auto f = admissible_sum_factorization<Integers>({a, b, c});
  EXPECT_TRUE(f.ok) << f.explanation;
  EXPECT_EQ(f.epi_index, 1u);
  EXPECT_EQ(f.stages.size(), 2u);
}

TEST(SumFactorization, RefusesWithoutAnEpiSummand) {
  // jointly surjective (gcd(2, 3) = 1) but neither summand is
  const FpMorphism<Integers> a(free_z(1), free_z(1), zm({{2}}));
  const FpMorphism<Integers> b(free_z(1), free_z(1), zm({{3}}));
  const auto f = admissible_sum_factorization<Integers>({a, b});
  EXPECT_FALSE(f.ok);
  EXPECT_EQ(f.explanation, "none of the morphisms is an epimorphism");
  EXPECT_FALSE(admissible_sum_factorization<Integers>({}).ok);
  const FpMorphism<Integers> other(free_z(1), cyclic(2), zm({{1}}));
  EXPECT_EQ(admissible_sum_factorization<Integers>({a, other}).explanation, "morphisms have different targets");
}

TEST(ResolveDiagonal, IdentityComplex) {
  const auto m = unit_complex(1);
  const auto r = resolve_diagonal(m);
  EXPECT_EQ(r.route, "diagonal");
  expect_verified(m, r);
  EXPECT_TRUE(is_diagonal(r.P, 0));
  EXPECT_TRUE(is_diagonal(r.Pprime, 0));
  expect_rank_bookkeeping(r);
  // staircase over padded slots 0..2: P has ranks 1, 2, 1 onto 0, Z, Z
  std::vector<std::size_t> p, k;
  for (std::size_t idx = 0; idx < 3; ++idx) {
    p.push_back(r.P.objects[idx].gens());
    k.push_back(r.Pprime.objects[idx].gens());
  }
  EXPECT_EQ(p, (std::vector<std::size_t>{1, 2, 1}));
  EXPECT_EQ(k, (std::vector<std::size_t>{1, 1, 0}));
}

TEST(ResolveDiagonal, ZeroComplex) {
  const auto m = Multicomplex<Integers>::zero(Z, Box({3}));
  const auto r = resolve_diagonal(m);
  expect_verified(m, r);
  EXPECT_TRUE(r.P.all_zero_gens());
}

TEST(ResolveDiagonal, CyclicTorsionComplex) {
  // Z/6 =(1,1)=> Z/6
  const auto m = binary_complex(Z, {cyclic(6), cyclic(6)}, {zm({{1}})}, {zm({{1}})});
  ASSERT_TRUE(validate(m).ok);
  const auto r = resolve_diagonal(m);
  expect_verified(m, r);
  EXPECT_TRUE(is_diagonal(r.P, 0));
  // P has ranks 1, 2, 1 onto torsion objects, so P' has full rank everywhere
  std::size_t kernel_gens = 0;
  for (const auto& o : r.Pprime.objects) kernel_gens += o.gens();
  EXPECT_EQ(kernel_gens, 4u);
  expect_rank_bookkeeping(r);
  // both lines of P and P' have no homology (rational ranks and minors)
  for (const auto* x : {&r.P, &r.Pprime})
    for (Side s : {Side::top, Side::bottom}) {
      const auto c = line(*x, 0, s, Coord{0});
      for (long k = 0; k < static_cast<long>(c.size()); ++k) {
        oracle::IntMatrix dk, dk1;
        if (k >= 1 && c.diff(k, Z).rows() > 0 && c.diff(k, Z).cols() > 0) dk = to_oracle(c.diff(k, Z));
        if (c.diff(k + 1, Z).rows() > 0 && c.diff(k + 1, Z).cols() > 0) dk1 = to_oracle(c.diff(k + 1, Z));
        EXPECT_EQ(oracle::free_homology(c.object(k, Z).gens(), dk, dk1), oracle::ModuleShape{});
      }
    }
}

TEST(ResolveDiagonal, RejectsNonDiagonalInput) {
  EXPECT_THROW(resolve_diagonal(unit_complex(-1)), error);
}

TEST(ResolveBinary, UnitComplex) {
  const auto m = unit_complex(-1);
  const auto r = resolve_binary(m);
  EXPECT_EQ(r.route, "binary");
  expect_verified(m, r);
  expect_rank_bookkeeping(r);
}

TEST(ResolveBinary, SingleTermZeroComplex) {
  const auto m = binary_complex(Z, {FpModule<Integers>::zero(Z)}, {}, {});
  const auto r = resolve_binary(m);
  expect_verified(m, r);
}

TEST(ResolveBinary, RandomTorsionComplexes) {
  Rng rng(401);
  MultiOptions o;
  o.dim = 1;
  o.max_extent = 4;
  o.fp = true;
  for (int t = 0; t < 60; ++t) {
    const auto m = random_multicomplex(Z, rng, o);
    const auto r = resolve_binary(m);
    expect_verified(m, r);
    expect_rank_bookkeeping(r);
  }
}

TEST(ResolveBinary, AgreesWithDiagonalRouteOnRanks) {
  Rng rng(402);
  MultiOptions o;
  o.dim = 1;
  o.max_extent = 4;
  o.fp = true;
  o.diagonal_direction = 0;
  for (int t = 0; t < 40; ++t) {
    const auto m = random_multicomplex(Z, rng, o);
    const auto a = resolve_binary(m);
    const auto b = resolve_diagonal(m);
    expect_verified(m, a);
    expect_verified(m, b);
    for (std::size_t idx = 0; idx < a.target.box.size(); ++idx)
      EXPECT_EQ(a.P.objects[idx].gens() - a.Pprime.objects[idx].gens(),
                b.P.objects[idx].gens() - b.Pprime.objects[idx].gens());
  }
}

TEST(DeltaLadder, RecursionHoldsAndDetectsTampering) {
  Rng rng(403);
  MultiOptions o;
  o.dim = 1;
  o.max_extent = 5;
  o.fp = true;
  std::size_t tampered = 0;
  for (int t = 0; t < 30; ++t) {
    const auto m = random_multicomplex(Z, rng, o);
    DeltaLadder<Integers> ladder;
    resolve_binary(m, &ladder);
    std::vector<Cover<Integers>> covers;
    for (std::size_t k = 0; k < m.box.extent(0); ++k) covers.push_back(detail::free_cover_of(slice(m, 0, k)));
    const auto ex = expand_along(pad_front(m), 0);
    EXPECT_TRUE(verify_delta_ladder(ex, covers, ladder));
    for (std::size_t k = 0; k < ladder.delta.size(); ++k)
      for (std::size_t l = 0; l < ladder.delta[k].size(); ++l) {
        auto bad = ladder;
        auto& comp = bad.delta[k][l].components[0];
        if (comp.rows() == 0 || comp.cols() == 0) continue;
        const std::size_t j = k - l;  // padded index of the target term
        Matrix<Integers> e0(Z, comp.rows(), 1);
        e0(0, 0) = Z.one();
        if (ex.terms[j].objects[0].in_relation_span(e0)) continue;
        comp(0, 0) = Z.add(comp(0, 0), Z.one());
        EXPECT_FALSE(verify_delta_ladder(ex, covers, bad));
        ++tampered;
      }
  }
  EXPECT_GT(tampered, 10u);
}

TEST(ResolveMulti, SquaresAndCubes) {
  Rng rng(404);
  for (std::size_t n : {2u, 3u}) {
    MultiOptions o;
    o.dim = n;
    o.max_extent = n == 2 ? 3 : 2;
    o.fp = true;
    for (int t = 0; t < (n == 2 ? 20 : 5); ++t) {
      const auto m = random_multicomplex(Z, rng, o);
      const auto r = resolve_multi(m);
      expect_verified(m, r);
      expect_rank_bookkeeping(r);
    }
  }
}

TEST(ResolveMulti, UsesTheDiagonalDirectionAndKeepsIt) {
  Rng rng(405);
  MultiOptions o;
  o.dim = 2;
  o.fp = true;
  o.diagonal_direction = 1;
  for (int t = 0; t < 15; ++t) {
    const auto m = random_multicomplex(Z, rng, o);
    const auto r = resolve_multi(m);
    const auto first = diagonal_directions(m).directions.front();
    EXPECT_EQ(r.direction, static_cast<long>(first));
    EXPECT_EQ(r.route, "diagonal");
    expect_verified(m, r);
    EXPECT_TRUE(is_diagonal(r.P, 1));
    EXPECT_TRUE(is_diagonal(r.Pprime, 1));
  }
}

TEST(ResolveMulti, TamperedResultFailsVerification) {
  Rng rng(406);
  MultiOptions o;
  o.dim = 2;
  const auto m = random_multicomplex(Z, rng, o);
  auto r = resolve_multi(m);
  ASSERT_TRUE(verify_resolution(m, r).ok);
  for (auto& c : r.zeta.components)
    if (c.rows() > 0 && c.cols() > 0) {
      c = Matrix<Integers>(Z, c.rows(), c.cols());
      break;
    }
  EXPECT_FALSE(verify_resolution(m, r).ok);
}

TEST(Phi, FreeAndTorsionModules) {
  for (std::size_t r = 0; r < 5; ++r) EXPECT_EQ(phi_class(free_z(r)), static_cast<long>(r));
  EXPECT_EQ(phi_class(cyclic(6)), 0);
  EXPECT_EQ(phi_class(FpModule<Integers>(2, zm({{2}, {0}}))), 1);
  EXPECT_THROW(phi_class_with(cyclic(6), zm({{2}})), error);
  const PrimeField f7(7);
  EXPECT_EQ(phi_class(FpModule<PrimeField>::free(f7, 3)), 3);
}

TEST(Phi, IndependentOfTheChosenEpimorphism) {
  Rng rng(407);
  for (int t = 0; t < 100; ++t) {
    const auto m = random_module(Z, rng, 3, 6);
    const long expected = static_cast<long>(oracle_rank(m));
    EXPECT_EQ(phi_class(m), expected);
    for (int e = 0; e < 2; ++e) {
      const auto extra = static_cast<std::size_t>(rng.uniform(0, 2));
      const Matrix<Integers> w = random_matrix(Z, m.gens(), extra, rng);
      const auto [v, vi] = random_automorphism(Z, m.gens() + extra, rng);
      const Matrix<Integers> epi = hcat(Matrix<Integers>::identity(Z, m.gens()), w) * v;
      EXPECT_EQ(phi_class_with(m, epi), expected);
    }
  }
}
