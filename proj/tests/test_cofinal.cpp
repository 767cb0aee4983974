#include <gtest/gtest.h>

#include "kbin/kbin.hpp"

using namespace kbin;

namespace {

const Integers Z;

Matrix<Integers> zm(std::initializer_list<std::initializer_list<long>> rows) { return Matrix<Integers>::from_ints(Z, rows); }

FpModule<Integers> free_z(std::size_t r) { return FpModule<Integers>::free(Z, r); }

Multicomplex<Integers> unit_complex(long u) { return binary_complex(Z, {free_z(1), free_z(1)}, {zm({{1}})}, {zm({{u}})}); }

Multicomplex<Integers> random_free(Rng& rng, std::size_t n, long diag = -1) {
  MultiOptions o;
  o.dim = n;
  o.max_extent = n >= 3 ? 2 : 3;
  o.diagonal_direction = diag;
  return random_multicomplex(Z, rng, o);
}

/// Checks the defining properties of T = complement(N, i).
void expect_complement(const Multicomplex<Integers>& n, std::size_t i) {
  const auto t = complement(n, static_cast<long>(i));
  EXPECT_EQ(t.box, n.box);
  EXPECT_TRUE(validate(t, AcyclicityMode::free).ok);
  EXPECT_TRUE(t.all_free());
  EXPECT_TRUE(in_subcategory_even(direct_sum(n, t)));
  EXPECT_TRUE(is_diagonal(t, i));
  for (std::size_t j : diagonal_directions(n).directions) EXPECT_TRUE(is_diagonal(t, j)) << "direction " << j;
}

FormalClass cls(std::initializer_list<std::pair<const char*, long>> terms) {
  FormalClass x;
  for (const auto& [n, c] : terms) x.add(n, c);
  return x;
}

void expect_representation(const DiagonalRepresentation<Integers>& r, const FormalClass& x, std::size_t i) {
  const auto v = verify_chain(r.chain, r.pool, GeneratorPredicate<Integers>(in_subcategory_even<Integers>));
  EXPECT_TRUE(v.ok) << v.message << " at step " << v.failing_step;
  EXPECT_EQ(r.chain.start, x);
  EXPECT_EQ(r.chain.end, cls({{r.t_name.c_str(), 1}}));
  EXPECT_TRUE(is_diagonal(r.t, i));
  EXPECT_TRUE(validate(r.t).ok);
  EXPECT_EQ(r.pool.at(r.t_name), r.t);
}

}  // namespace

TEST(Complement, SingleModules) {
  const auto m = Multicomplex<Integers>::with_objects(Z, Box{}, {free_z(3)});
  const auto t = complement(m, -1);
  EXPECT_EQ(t.objects[0].gens(), 1u);
  const auto e = Multicomplex<Integers>::with_objects(Z, Box{}, {free_z(4)});
  EXPECT_TRUE(complement(e, -1).all_zero_gens());
}

TEST(Complement, EvenInputNeedsNothing) {
  const auto m = direct_sum(unit_complex(-1), unit_complex(-1));
  const auto t = complement(m, 0);
  EXPECT_TRUE(t.all_zero_gens());
  EXPECT_EQ(t.box, m.box);
}

TEST(Complement, TwistedUnitComplex) {
  const auto n = unit_complex(-1);
  expect_complement(n, 0);
  // ranks 1, 1: the complement has odd rank in both degrees
  const auto t = complement(n, 0);
  EXPECT_EQ(t.objects[0].gens() % 2, 1u);
  EXPECT_EQ(t.objects[1].gens() % 2, 1u);
}

TEST(Complement, RejectsTorsionObjects) {
  const auto m = binary_complex(Z, {FpModule<Integers>(1, zm({{6}})), FpModule<Integers>(1, zm({{6}}))}, {zm({{1}})},
                                {zm({{1}})});
  EXPECT_THROW(complement(m, 0), error);
  EXPECT_THROW(complement(unit_complex(-1), 1), error);
}

TEST(Complement, RandomMulticomplexesEveryDirection) {
  Rng rng(601);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
    const auto m = random_free(rng, n);
    for (std::size_t i = 0; i < n; ++i) expect_complement(m, i);
  }
}

TEST(Complement, KeepsAnExistingDiagonalDirection) {
  Rng rng(602);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(2, 3));
    const long j = rng.uniform(0, static_cast<long>(n) - 1);
    const auto m = random_free(rng, n, j);
    ASSERT_TRUE(is_diagonal(m, static_cast<std::size_t>(j)));
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = complement(m, static_cast<long>(i));
      EXPECT_TRUE(is_diagonal(c, static_cast<std::size_t>(j)));
      EXPECT_TRUE(is_diagonal(c, i));
    }
  }
}

TEST(RelClass, AdditiveUnderDirectSum) {
  Rng rng(603);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
    const auto a = random_free(rng, n), b = random_free(rng, n);
    const auto s = direct_sum(a, b);
    const Coord origin(n, 0);
    const auto ra = rel_class(embed(a, s.box, origin)), rb = rel_class(embed(b, s.box, origin));
    EXPECT_EQ(rel_class(s), rel_class_sum(ra, rb));
    EXPECT_TRUE(rel_class(direct_sum(a, a)).empty());
  }
}

TEST(PairComplement, WorksForMatchingClasses) {
  Rng rng(604);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 2));
    const auto n1 = random_free(rng, n);
    const auto x = random_free(rng, n);
    const auto n2 = direct_sum(n1, direct_sum(x, x));
    const auto p = pair_complement(n1, n2);
    EXPECT_TRUE(validate(p, AcyclicityMode::free).ok);
    EXPECT_TRUE(in_subcategory_even(direct_sum(n1, p)));
    EXPECT_TRUE(in_subcategory_even(direct_sum(n2, p)));
  }
}

TEST(PairComplement, RanksOneAndThree) {
  const auto n1 = unit_complex(-1);
  const auto n2 = direct_sum(unit_complex(-1), direct_sum(unit_complex(1), unit_complex(1)));
  ASSERT_EQ(n2.objects[0].gens(), 3u);
  EXPECT_EQ(rel_class(n1), rel_class(n2));
  const auto p = pair_complement(n1, n2);
  EXPECT_TRUE(validate(p, AcyclicityMode::free).ok);
  EXPECT_TRUE(in_subcategory_even(direct_sum(n1, p)));
  EXPECT_TRUE(in_subcategory_even(direct_sum(n2, p)));
}

TEST(PairComplement, RefusesDifferentClasses) {
  const auto u = unit_complex(-1);
  EXPECT_THROW(pair_complement(u, Multicomplex<Integers>::zero(Z, u.box)), error);
  EXPECT_THROW(pair_complement(u, direct_sum(u, u)), error);
}

TEST(DeltaTopRetract, FixesDiagonalInputsAndIsIdempotent) {
  Rng rng(605);
  for (int t = 0; t < 40; ++t) {
    const auto d = random_free(rng, 2, 0);
    EXPECT_EQ(delta_top_retract(d, 0), d);
    const auto m = random_free(rng, 2);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto r = delta_top_retract(m, i);
      EXPECT_TRUE(validate(r).ok);
      EXPECT_TRUE(is_diagonal(r, i));
      EXPECT_EQ(delta_top_retract(r, i), r);
      EXPECT_EQ(r.top, m.top);
    }
  }
}

TEST(ShiftComplex, IsAcyclicAndDiagonal) {
  Rng rng(606);
  for (int t = 0; t < 40; ++t) {
    const std::size_t len = static_cast<std::size_t>(rng.uniform(2, 5));
    const auto piece_dim = static_cast<std::size_t>(rng.uniform(0, 1));
    const Box term_box(std::vector<std::size_t>(piece_dim, 2));
    std::vector<Multicomplex<Integers>> pieces;
    pieces.push_back(Multicomplex<Integers>::zero(Z, term_box));
    for (std::size_t k = 1; k < len; ++k) {
      if (piece_dim == 0)
        pieces.push_back(Multicomplex<Integers>::with_objects(Z, term_box, {free_z(static_cast<std::size_t>(rng.uniform(0, 2)))}));
      else
        pieces.push_back(rng.chance(1, 3) ? Multicomplex<Integers>::zero(Z, term_box) : unit_complex(rng.chance(1, 2) ? 1 : -1));
    }
    const auto s = detail::shift_complex(pieces, 0, Z, term_box);
    EXPECT_TRUE(validate(s).ok);
    EXPECT_TRUE(is_diagonal(s, 0));
  }
}

TEST(DiagonalRepresent, SingleGeneratorInAnotherDirection) {
  Rng rng(607);
  const auto g = random_free(rng, 2, 0);
  const GeneratorPool<Integers> pool{{"g", g}};
  const auto x = cls({{"g", 1}});
  const auto r = diagonal_represent(x, pool, {{"g", 0}}, 1);
  expect_representation(r, x, 1);
}

TEST(DiagonalRepresent, AlreadyDiagonalGeneratorIsItsOwnRepresentative) {
  Rng rng(608);
  const auto g = random_free(rng, 2, 1);
  const auto x = cls({{"g", 1}});
  const auto r = diagonal_represent(x, GeneratorPool<Integers>{{"g", g}}, {{"g", 1}}, 1);
  expect_representation(r, x, 1);
  EXPECT_EQ(r.t_name, "g");
  EXPECT_TRUE(r.chain.steps.empty());
}

TEST(DiagonalRepresent, MixedSignsAcrossDirections) {
  Rng rng(609);
  const GeneratorPool<Integers> pool{{"a", random_free(rng, 2, 0)}, {"b", random_free(rng, 2, 1)},
                                     {"c", random_free(rng, 2, 0)}};
  const auto x = cls({{"a", 2}, {"b", -1}, {"c", -1}});
  for (std::size_t i = 0; i < 2; ++i)
    expect_representation(diagonal_represent(x, pool, {{"a", 0}, {"b", 1}, {"c", 0}}, i), x, i);
}

TEST(DiagonalRepresent, DifferenceOfGeneratorsInTwoDirections) {
  Rng rng(611);
  const GeneratorPool<Integers> pool{{"t1", random_free(rng, 2, 0)}, {"t2", random_free(rng, 2, 1)}};
  const auto x = cls({{"t1", 1}, {"t2", -1}});
  expect_representation(diagonal_represent(x, pool, {{"t1", 0}, {"t2", 1}}, 0), x, 0);
}

TEST(DiagonalRepresent, EmptyClass) {
  const auto r = diagonal_represent(FormalClass{}, GeneratorPool<Integers>{}, {}, 0);
  expect_representation(r, FormalClass{}, 0);
}

TEST(DiagonalRepresent, RejectsUncertifiedClasses) {
  const GeneratorPool<Integers> pool{{"u", unit_complex(-1)}};
  EXPECT_THROW(diagonal_represent(cls({{"u", 1}}), pool, {{"u", 0}}, 0), error);
  EXPECT_THROW(diagonal_represent(cls({{"u", 1}}), pool, {}, 0), error);
}

TEST(DiagonalRepresent, RandomClasses) {
  Rng rng(610);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
    GeneratorPool<Integers> pool;
    std::map<std::string, std::size_t> dirs;
    FormalClass x;
    const auto count = rng.uniform(1, 3);
    for (long g = 0; g < count; ++g) {
      const std::string name = "g" + std::to_string(g);
      const auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(n) - 1));
      pool.emplace(name, random_free(rng, n, static_cast<long>(j)));
      dirs[name] = j;
      x.add(name, rng.chance(1, 2) ? rng.uniform(1, 2) : -rng.uniform(1, 2));
    }
    const auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(n) - 1));
    expect_representation(diagonal_represent(x, pool, dirs, i), x, i);
  }
}
