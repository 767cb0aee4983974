#include <gtest/gtest.h>

#include "kbin/kbin.hpp"
#include "oracle.hpp"

using namespace kbin;

namespace {

const Integers Z;
const Rationals Q;

Matrix<Integers> zm(std::initializer_list<std::initializer_list<long>> rows) { return Matrix<Integers>::from_ints(Z, rows); }

oracle::IntMatrix to_oracle(const Matrix<Integers>& m) {
  oracle::IntMatrix a(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  return a;
}

oracle::FpMatrix to_fp_oracle(const Matrix<PrimeField>& m) {
  oracle::FpMatrix a(m.rows(), std::vector<std::int64_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  return a;
}

template <class R>
void expect_smith_invariants(const Matrix<R>& a, const SmithDecomposition<R>& d) {
  const R& ring = a.ring();
  EXPECT_EQ(d.U * a * d.V, d.S);
  EXPECT_EQ(d.U * d.Uinv, Matrix<R>::identity(ring, a.rows()));
  EXPECT_EQ(d.V * d.Vinv, Matrix<R>::identity(ring, a.cols()));
  for (std::size_t i = 0; i < d.S.rows(); ++i)
    for (std::size_t j = 0; j < d.S.cols(); ++j)
      if (i != j) EXPECT_TRUE(ring.is_zero(d.S(i, j)));
  for (std::size_t i = 0; i + 1 < d.rank; ++i) EXPECT_TRUE(ring.divide_exact(d.S(i + 1, i + 1), d.S(i, i)).has_value());
  for (std::size_t i = d.rank; i < std::min(d.S.rows(), d.S.cols()); ++i) EXPECT_TRUE(ring.is_zero(d.S(i, i)));
}

}  // namespace

TEST(Rings, IntegerDivisionHasSmallRemainder) {
  for (long a = -20; a <= 20; ++a)
    for (long b : {-7L, -3L, 2L, 5L}) {
      auto qr = Z.divmod(a, b);
      EXPECT_EQ(qr.quotient * b + qr.remainder, a);
      EXPECT_LE(2 * abs(qr.remainder), abs(mpz_class(b)));
    }
}

TEST(Rings, PrimeFieldInverses) {
  PrimeField f(7);
  for (long a = 1; a < 7; ++a) EXPECT_EQ(f.mul(a, f.unit_inverse(a)), 1);
  EXPECT_THROW(PrimeField(8), error);
}

TEST(Rings, PolynomialDivision) {
  Polynomials<Rationals> P(Q);
  auto x = P.monomial(1, 1);
  auto a = P.add(P.mul(x, x), P.from_int(-1));  // x^2 - 1
  auto b = P.add(x, P.from_int(1));             // x + 1
  auto q = P.divide_exact(a, b);
  ASSERT_TRUE(q.has_value());
  EXPECT_TRUE(P.equal(*q, P.add(x, P.from_int(-1))));
  EXPECT_FALSE(P.divide_exact(b, a).has_value());
}

TEST(Smith, IdentityIsFixed) {
  auto d = smith(Matrix<Integers>::identity(Z, 2));
  EXPECT_EQ(d.S, Matrix<Integers>::identity(Z, 2));
  expect_smith_invariants(Matrix<Integers>::identity(Z, 2), d);
}

TEST(Smith, TwoByTwoWorkedExample) {
  // Hand reduction: column 2 minus 2 * column 1 gives [[2,0],[0,6]].
  const auto a = zm({{2, 4}, {0, 6}});
  auto d = smith(a);
  EXPECT_EQ(d.S, zm({{2, 0}, {0, 6}}));
  expect_smith_invariants(a, d);
}

TEST(Smith, ZeroMatrix) {
  const Matrix<Integers> a(Z, 3, 2);
  auto d = smith(a);
  EXPECT_TRUE(d.S.is_zero());
  EXPECT_EQ(d.rank, 0u);
  expect_smith_invariants(a, d);
}

TEST(Smith, PolynomialEntriesAreMonic) {
  Polynomials<Rationals> P(Q);
  Matrix<Polynomials<Rationals>> a(P, 2, 2);
  a(0, 0) = P.monomial(2, 1);                    // 2x
  a(1, 1) = P.monomial(3, 2);                    // 3x^2
  auto d = smith(a);
  expect_smith_invariants(a, d);
  EXPECT_TRUE(P.equal(d.S(0, 0), P.monomial(1, 1)));
  EXPECT_TRUE(P.equal(d.S(1, 1), P.monomial(1, 2)));
}

TEST(Smith, RandomIntegerMatricesSatisfyAllInvariants) {
  Rng rng(101);
  for (int t = 0; t < 500; ++t) {
    const auto r = static_cast<std::size_t>(rng.uniform(1, 6)), c = static_cast<std::size_t>(rng.uniform(1, 6));
    Matrix<Integers> a(Z, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) a(i, j) = rng.uniform(-9, 9);
    auto d = smith(a);
    expect_smith_invariants(a, d);
    // Unit determinants by cofactor expansion.
    EXPECT_EQ(abs(oracle::laplace_det(to_oracle(d.U))), 1);
    EXPECT_EQ(abs(oracle::laplace_det(to_oracle(d.V))), 1);
    // Idempotent on its own output.
    EXPECT_EQ(smith(d.S).S, d.S);
    EXPECT_EQ(d.rank, oracle::rational_rank(to_oracle(a)));
  }
}

TEST(Smith, InvariantFactorsMatchDeterminantalDivisors) {
  Rng rng(102);
  for (int t = 0; t < 150; ++t) {
    const auto r = static_cast<std::size_t>(rng.uniform(1, 4)), c = static_cast<std::size_t>(rng.uniform(1, 4));
    Matrix<Integers> a(Z, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) a(i, j) = rng.uniform(-9, 9);
    auto d = smith(a);
    const auto expected = oracle::invariant_factors(to_oracle(a));
    ASSERT_EQ(d.rank, expected.size());
    for (std::size_t i = 0; i < d.rank; ++i) EXPECT_EQ(d.S(i, i), expected[i]);
  }
}

TEST(Solve, IdentityReturnsRightHandSide) {
  const auto b = zm({{1, -2}, {3, 4}});
  auto x = solve(Matrix<Integers>::identity(Z, 2), b);
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, b);
}

TEST(Solve, DivisibilityOverIntegersAndRationals) {
  EXPECT_FALSE(solve(zm({{2}}), zm({{3}})).has_value());
  auto x = solve(Matrix<Rationals>::from_ints(Q, {{2}}), Matrix<Rationals>::from_ints(Q, {{3}}));
  ASSERT_TRUE(x);
  EXPECT_EQ((*x)(0, 0), mpq_class(3, 2));
}

TEST(Solve, RejectsMismatchedShapes) { EXPECT_THROW(solve(zm({{1, 0}}), zm({{1}, {2}})), error); }

TEST(Solve, RandomConsistentSystems) {
  Rng rng(103);
  for (int t = 0; t < 200; ++t) {
    auto a = random_matrix(Z, rng.uniform(1, 5), rng.uniform(1, 5), rng, 5);
    auto x0 = random_matrix(Z, a.cols(), 2, rng, 5);
    auto x = solve(a, a * x0);
    ASSERT_TRUE(x);
    EXPECT_EQ(a * *x, a * x0);
  }
}

TEST(Modules, DoublingIsInjectiveWithCokernelZ2) {
  auto f = FpMorphism<Integers>(FpModule<Integers>::free(Z, 1), FpModule<Integers>::free(Z, 1), zm({{2}}));
  auto a = analyze(f);
  EXPECT_TRUE(a.is_mono);
  EXPECT_FALSE(a.is_epi);
  EXPECT_TRUE(a.cokernel.isomorphic_to(FpModule<Integers>::cyclic(Z, 2)));
}

TEST(Modules, ProjectionIsSurjectiveWithFreeKernel) {
  auto f = FpMorphism<Integers>(FpModule<Integers>::free(Z, 2), FpModule<Integers>::free(Z, 1), zm({{1, 0}}));
  auto a = analyze(f);
  EXPECT_TRUE(a.is_epi);
  EXPECT_EQ(a.kernel.canonical().free_rank, 1u);
  EXPECT_TRUE(a.kernel.canonical().is_free());
}

TEST(Modules, RankNullityAgainstRationalRank) {
  Rng rng(104);
  for (int t = 0; t < 100; ++t) {
    auto m = random_matrix(Z, 4, 4, rng, 3);
    if (rng.chance(1, 2)) m.set_block(0, 3, m.columns(0, 1) + m.columns(1, 1));
    auto a = analyze(FpModule<Integers>::free(Z, 4), FpModule<Integers>::free(Z, 4), m);
    const std::size_t rank = oracle::rational_rank(to_oracle(m));
    EXPECT_EQ(a.kernel.canonical().free_rank, 4 - rank);
    EXPECT_EQ(a.image.canonical().free_rank, rank);
  }
}

TEST(Modules, IllDefinedMorphismIsRejected) {
  // Z/2 -> Z sending the generator to 1 does not respect 2 = 0.
  EXPECT_THROW(FpMorphism<Integers>(FpModule<Integers>::cyclic(Z, 2), FpModule<Integers>::free(Z, 1), zm({{1}})),
               error);
}

TEST(Modules, KernelAndCokernelCompositesVanish) {
  Rng rng(105);
  int checked = 0;
  for (int t = 0; t < 150; ++t) {
    auto src = random_module(Z, rng, 3, 6);
    auto tgt = random_module(Z, rng, 3, 6);
    // A well-defined map: send relations into target relations by scaling.
    Matrix<Integers> f = random_matrix(Z, tgt.gens(), src.gens(), rng, 3);
    if (!is_well_defined(src, tgt, f)) {
      mpz_class scale = 1;
      for (const auto& x : tgt.canonical().torsion) scale *= x;
      f = f.scaled(scale);
      if (!is_well_defined(src, tgt, f)) continue;
    }
    auto a = analyze(src, tgt, f);
    EXPECT_TRUE(tgt.in_relation_span(f * a.kernel_inclusion));
    EXPECT_TRUE(a.cokernel.in_relation_span(a.cokernel_projection * f));
    EXPECT_EQ(a.is_epi, a.cokernel.is_zero());
    EXPECT_EQ(a.is_mono, a.kernel.is_zero());
    ++checked;
  }
  EXPECT_GE(checked, 100);
}

TEST(Modules, AnalyzeMatchesEnumerationOverGF3) {
  const PrimeField F(3);
  Rng rng(106);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    const auto gs = static_cast<std::size_t>(rng.uniform(0, 3)), gt = static_cast<std::size_t>(rng.uniform(0, 3));
    const auto ks = static_cast<std::size_t>(rng.uniform(0, 2)), kt = static_cast<std::size_t>(rng.uniform(0, 2));
    auto rs = random_matrix(F, gs, ks, rng), rt = random_matrix(F, gt, kt, rng);
    FpModule<PrimeField> src(gs, rs), tgt(gt, rt);
    auto f = random_matrix(F, gt, gs, rng);
    if (!is_well_defined(src, tgt, f)) continue;
    auto a = analyze(src, tgt, f);
    auto counted = oracle::count_map(gs, to_fp_oracle(rs), ks, gt, to_fp_oracle(rt), kt, to_fp_oracle(f), 3);
    std::size_t ksize = 1, csize = 1;
    for (std::size_t i = 0; i < a.kernel.canonical().free_rank; ++i) ksize *= 3;
    for (std::size_t i = 0; i < a.cokernel.canonical().free_rank; ++i) csize *= 3;
    EXPECT_EQ(ksize, counted.kernel_size);
    EXPECT_EQ(csize, counted.cokernel_size);
    EXPECT_EQ(a.is_mono, counted.kernel_size == 1);
    EXPECT_EQ(a.is_epi, counted.cokernel_size == 1);
    ++checked;
  }
  EXPECT_GE(checked, 100);
}

TEST(Modules, FreeCoverExamples) {
  auto z6 = FpModule<Integers>::cyclic(Z, 6);
  auto a = analyze(free_cover(z6));
  EXPECT_TRUE(a.is_epi);
  EXPECT_EQ(a.kernel.canonical().free_rank, 1u);
  EXPECT_TRUE(a.kernel.canonical().is_free());

  auto f3 = FpModule<Integers>::free(Z, 3);
  auto b = analyze(free_cover(f3));
  EXPECT_TRUE(b.is_epi);
  EXPECT_TRUE(b.kernel.is_zero());

  // Z + Z/2 on two generators, relation 2 e_2.
  FpModule<Integers> m(2, zm({{0}, {2}}));
  auto c = analyze(free_cover(m));
  EXPECT_TRUE(c.is_epi);
  EXPECT_EQ(c.kernel.canonical().free_rank, 1u);
  EXPECT_EQ(m.canonical().free_rank, 1u);
  ASSERT_EQ(m.canonical().torsion.size(), 1u);
  EXPECT_EQ(m.canonical().torsion[0], 2);
}

TEST(Modules, CanonicalFormSurvivesPresentationMoves) {
  Rng rng(107);
  for (int t = 0; t < 200; ++t) {
    auto m = random_module(Z, rng, 3, 8);
    auto [u, uinv] = random_automorphism(Z, m.gens(), rng);
    const std::size_t k = m.rels().cols();
    auto [v, vinv] = random_automorphism(Z, k, rng);
    Matrix<Integers> rels = u * m.rels() * v;
    // Stabilize: one new generator killed by a unit relation.
    Matrix<Integers> stab = block_diag(rels, zm({{-1}}));
    FpModule<Integers> moved(m.gens() + 1, stab);
    EXPECT_EQ(moved.canonical(), m.canonical());
    const auto shape = oracle::module_shape(m.gens(), to_oracle(m.rels()));
    EXPECT_EQ(m.canonical().free_rank, shape.free_rank);
    ASSERT_EQ(m.canonical().torsion.size(), shape.torsion.size());
    for (std::size_t i = 0; i < shape.torsion.size(); ++i) EXPECT_EQ(m.canonical().torsion[i], shape.torsion[i]);
  }
}

TEST(Modules, ShortExactSequenceChecks) {
  // Z --2--> Z --> Z/2
  auto z = FpModule<Integers>::free(Z, 1);
  auto z2 = FpModule<Integers>::cyclic(Z, 2);
  EXPECT_TRUE(is_short_exact(z, z, z2, zm({{2}}), zm({{1}})));
  std::string why;
  EXPECT_FALSE(is_short_exact(z, z, z2, zm({{4}}), zm({{1}}), &why));
  EXPECT_FALSE(why.empty());
}
