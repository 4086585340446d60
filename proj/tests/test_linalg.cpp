#include <gtest/gtest.h>

#include <random>

#include "mbq/algebra.hpp"
#include "mbq/fixtures.hpp"
#include "mbq/linalg.hpp"

using namespace mbq;

namespace {

constexpr int kIterations = 200;

Scalar random_scalar(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-7, 7), den(1, 5);
  return Scalar(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
}

LinMap random_map(std::mt19937& rng, size_t cod, size_t dom, int zero_percent = 40) {
  std::uniform_int_distribution<int> pct(0, 99);
  LinMap r(cod, dom);
  for (size_t j = 0; j < dom; ++j) {
    Vec c(cod);
    for (auto& x : c)
      if (pct(rng) >= zero_percent) x = random_scalar(rng);
    r.set_column(j, c);
  }
  return r;
}

}  // namespace

// ---- Scalar ----

TEST(Scalar, ParseAndPrintCanonical) {
  EXPECT_EQ(Scalar::parse("2/4").str(), "1/2");
  EXPECT_EQ(Scalar::parse("-3").str(), "-3");
  EXPECT_EQ(Scalar::parse("1/2+3/4 i").str(), "1/2+3/4 i");
  EXPECT_EQ(Scalar::parse("1/2-3/4 i").str(), "1/2-3/4 i");
  EXPECT_EQ(Scalar::parse("i"), Scalar::i());
  EXPECT_EQ(Scalar::parse("-2 i"), Scalar(0, -2));
  EXPECT_EQ(Scalar::parse("0+1 i").str(), "0+1 i");
}

TEST(Scalar, RejectsFloatsAndGarbage) {
  for (const char* bad : {"0.5", "1e3", "", "1/0", "abc", "1//2", "1/2+", "+-1", "1.0 i"})
    EXPECT_THROW(Scalar::parse(bad), ParseError) << bad;
}

TEST(Scalar, ConjugationIsInvolutiveAutomorphism) {
  std::mt19937 rng(7);
  for (int k = 0; k < kIterations; ++k) {
    Scalar a = random_scalar(rng), b = random_scalar(rng);
    EXPECT_EQ(a.conj().conj(), a);
    EXPECT_EQ((a * b).conj(), a.conj() * b.conj());
    EXPECT_EQ((a + b).conj(), a.conj() + b.conj());
  }
}

TEST(Scalar, FieldAxiomsRandomized) {
  std::mt19937 rng(11);
  for (int k = 0; k < kIterations; ++k) {
    Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    if (!b.is_zero()) EXPECT_EQ((a / b) * b, a);
    Scalar acc = a;
    acc.add_product(b, c);
    EXPECT_EQ(acc, a + b * c);
  }
}

TEST(Scalar, WordOverflowPromotesAndDemotesExactly) {
  const Scalar big = Scalar::parse("9223372036854775807");
  const Scalar sq = big * big;
  EXPECT_EQ(sq.str(), "85070591730234615847396907784232501249");
  EXPECT_EQ(sq / big, big);
  EXPECT_EQ(Scalar::parse(sq.str()), sq);
  EXPECT_EQ((sq + Scalar(1)) - sq, Scalar(1));
  const Scalar tiny = Scalar(1) / big;
  EXPECT_EQ((tiny * tiny).str(), "1/85070591730234615847396907784232501249");
  EXPECT_EQ(tiny * tiny * sq, Scalar(1));
  EXPECT_EQ(Scalar::parse("-9223372036854775808").str(), "-9223372036854775808");
  EXPECT_EQ(-Scalar::parse("-9223372036854775808"), Scalar::parse("9223372036854775808"));
  std::mt19937 rng(5);
  for (int k = 0; k < kIterations; ++k) {
    Scalar a = random_scalar(rng) * sq, b = random_scalar(rng);
    EXPECT_EQ((a * b) / sq, (a / sq) * b);
    EXPECT_EQ(Scalar::parse((a + b).str()), a + b);
  }
}

// ---- compose / kron / permutation ----

TEST(LinMap, ComposeOracles) {
  EXPECT_EQ(id(2) * id(2), id(2));
  LinMap psi = flip(2, 2);
  EXPECT_EQ(psi * psi, id(4));
  std::mt19937 rng(3);
  LinMap z = LinMap::zero(2, 3) * random_map(rng, 3, 5);
  EXPECT_EQ(z, LinMap::zero(2, 5));
  EXPECT_THROW(id(2) * id(3), DimensionMismatch);
}

TEST(LinMap, KronOracles) {
  EXPECT_EQ(kron(id(2), id(3)), id(6));
  auto k2 = fixtures::fix_k2().group;
  Vec phi_g = k2.phi.column(1);
  EXPECT_EQ(kron(k2.eps, id(2)).apply(phi_g), basis_vector(2, 1));
}

TEST(LinMap, KronMixedProductRandomized) {
  std::mt19937 rng(5);
  for (int k = 0; k < 50; ++k) {
    LinMap f = random_map(rng, 2, 2), g = random_map(rng, 2, 2), u = random_map(rng, 2, 2), v = random_map(rng, 2, 2);
    EXPECT_EQ(kron(f, g) * kron(u, v), kron(f * u, g * v));
    LinMap a = random_map(rng, 3, 2), b = random_map(rng, 2, 4), c = random_map(rng, 2, 3), d = random_map(rng, 4, 1);
    EXPECT_EQ(kron(a, b) * kron(c, d), kron(a * c, b * d));
  }
}

TEST(LinMap, PermutationOracles) {
  EXPECT_EQ(permutation_map({0}, {3}), id(3));
  LinMap psi = permutation_map({1, 0}, {2, 2});
  EXPECT_EQ(psi.apply(kron_vec(basis_vector(2, 0), basis_vector(2, 1))),
            kron_vec(basis_vector(2, 1), basis_vector(2, 0)));
  EXPECT_EQ(permutation_map({1, 2, 0}, {2, 2, 2}), kron(flip(2, 2), id(2)) * kron(id(2), flip(2, 2)));
  EXPECT_THROW(permutation_map({0, 0}, {2, 2}), Error);
  EXPECT_THROW(permutation_map({0, 1}, {2}), Error);
}

TEST(LinMap, PermutationOnUnequalDims) {
  LinMap p = permutation_map({1, 0}, {2, 3});
  EXPECT_EQ(p.cod(), 6u);
  EXPECT_EQ(p * kron(id(2), id(3)), p);
  std::mt19937 rng(9);
  LinMap a = random_map(rng, 2, 2), b = random_map(rng, 3, 3);
  EXPECT_EQ(p * kron(a, b), kron(b, a) * p);
}

TEST(AntilinMap, CompositionTyping) {
  LinMap m = LinMap::from_rows(2, 2, {{Scalar::i(), Scalar(1)}, {Scalar(0), Scalar(2)}});
  AntilinMap f(m);
  Vec v{Scalar(1, 1), Scalar(0, 3)};
  LinMap ff = f * f;
  EXPECT_EQ(ff.apply(v), f.apply(f.apply(v)));
  LinMap l = LinMap::from_rows(2, 2, {{Scalar(1), Scalar::i()}, {Scalar(3), Scalar(0)}});
  EXPECT_EQ((f * l).apply(v), f.apply(l.apply(v)));
  EXPECT_EQ((l * f).apply(v), l.apply(f.apply(v)));
}

// ---- kernel / image / invert / factor_through / quotient ----

TEST(Linalg, KernelImageInvertOracles) {
  auto k2 = fixtures::fix_k2().group;
  EXPECT_EQ(kernel(k2.eps), Subspace::span(2, {basis_vector(2, 1)}));
  LinMap psi = flip(2, 2);
  EXPECT_EQ(invert(psi), psi);
  EXPECT_EQ(image(LinMap::zero(3, 2)).dim(), 0u);
  EXPECT_THROW(invert(LinMap::from_rows(2, 2, {{1, 1}, {1, 1}})), NotInvertible);
}

TEST(Linalg, InvertRandomized) {
  std::mt19937 rng(13);
  for (int k = 0; k < 30; ++k) {
    LinMap a = random_map(rng, 4, 4, 30);
    if (rank(a) < 4) continue;
    EXPECT_EQ(invert(a) * a, id(4));
    EXPECT_EQ(a * invert(a), id(4));
  }
}

TEST(Linalg, FactorThroughOracles) {
  std::mt19937 rng(17);
  LinMap g = random_map(rng, 3, 4);
  EXPECT_EQ(factor_through(id(4), g), g);
  LinMap f = LinMap::from_rows(2, 3, {{1, 0, 1}, {0, 1, 1}});
  EXPECT_EQ(factor_through(f, f), id(2));
  // ker f = span(e1), ker g = span(e0): crossing kernels.
  LinMap f2 = LinMap::from_rows(1, 2, {{1, 0}});
  LinMap g2 = LinMap::from_rows(1, 2, {{0, 1}});
  try {
    factor_through(f2, g2);
    FAIL() << "expected NoFactor";
  } catch (const NoFactor& e) {
    EXPECT_TRUE(is_zero_vec(f2.apply(e.witness.input)));
    EXPECT_FALSE(is_zero_vec(g2.apply(e.witness.input)));
    EXPECT_EQ(g2.apply(e.witness.input), e.witness.residual);
  }
}

TEST(Linalg, FactorThroughResidualZeroRandomized) {
  std::mt19937 rng(19);
  for (int k = 0; k < 60; ++k) {
    LinMap f = random_map(rng, 3, 5, 50);
    LinMap x = random_map(rng, 2, 3);
    LinMap g = x * f;
    LinMap y = factor_through(f, g);
    EXPECT_EQ(y * f, g);
  }
}

TEST(Linalg, QuotientOracles) {
  Quotient q0 = quotient(3, Subspace::zero(3));
  EXPECT_EQ(q0.proj, id(3));
  EXPECT_EQ(q0.qdim, 3u);
  Quotient qf = quotient(3, Subspace::full(3));
  EXPECT_EQ(qf.qdim, 0u);
  EXPECT_EQ(qf.proj.cod(), 0u);
  Quotient q = quotient(2, Subspace::span(2, {basis_vector(2, 1)}));
  EXPECT_EQ(q.qdim, 1u);
  EXPECT_FALSE(is_zero_vec(q.proj.apply(basis_vector(2, 0))));
}

TEST(Linalg, QuotientPropertyRandomized) {
  std::mt19937 rng(23);
  for (int k = 0; k < 40; ++k) {
    LinMap gens = random_map(rng, 5, 2 + k % 3, 40);
    Subspace s = image(gens);
    Quotient q = quotient(5, s);
    EXPECT_TRUE((q.proj * s.inclusion()).is_zero());
    EXPECT_EQ(rank(q.proj), q.qdim);
    EXPECT_EQ(q.qdim, 5 - s.dim());
    EXPECT_EQ(kernel(q.proj), s);
  }
}

TEST(Linalg, SubspaceOperations) {
  Subspace a = Subspace::span(3, {fixtures::vec({1, 0, 0}), fixtures::vec({0, 1, 0})});
  Subspace b = Subspace::span(3, {fixtures::vec({0, 1, 0}), fixtures::vec({0, 0, 1})});
  EXPECT_EQ(intersect(a, b), Subspace::span(3, {fixtures::vec({0, 1, 0})}));
  EXPECT_EQ(a + b, Subspace::full(3));
  EXPECT_TRUE(intersect(a, b).subset_of(a));
  EXPECT_FALSE(a.subset_of(b));
}

// ---- algebra-core ----

TEST(Algebra, FixturesPass) {
  for (const auto& f : fixtures::all()) EXPECT_TRUE(check_algebra(f.group.alg).ok()) << f.name;
}

TEST(Algebra, CorruptedMultFailsAssocWithWitness) {
  auto a = fixtures::fix_k2().group.alg;
  // delta_e * delta_g := 2 delta_g
  a.mult.set_column(0 * 2 + 1, fixtures::vec({0, 2}));
  Report r = check_algebra(a);
  const Entry* e = r.find("ASSOC");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->status, Status::Fail);
  ASSERT_TRUE(e->witness);
  // Substitute the witness basis triple directly.
  Vec w = e->witness->input;
  Vec lhs = a.mult.apply(kron(a.mult, id(2)).apply(w));
  Vec rhs = a.mult.apply(kron(id(2), a.mult).apply(w));
  Vec diff(2);
  for (size_t i = 0; i < 2; ++i) diff[i] = lhs[i] - rhs[i];
  EXPECT_EQ(diff, e->witness->residual);
  EXPECT_FALSE(is_zero_vec(diff));
}

TEST(Algebra, MultiplyOracles) {
  auto gr = fixtures::fix_gr().group.alg;
  Vec theta = basis_vector(2, 1);
  EXPECT_TRUE(is_zero_vec(multiply(gr, theta, theta)));
  auto k2 = fixtures::fix_k2().group.alg;
  EXPECT_TRUE(is_zero_vec(multiply(k2, basis_vector(2, 0), basis_vector(2, 1))));
  for (const auto& f : fixtures::all()) {
    const auto& al = f.group.alg;
    for (size_t j = 0; j < al.dim; ++j) EXPECT_EQ(multiply(al, al.one(), basis_vector(al.dim, j)), basis_vector(al.dim, j));
  }
  EXPECT_THROW(multiply(k2, theta, Vec(3)), DimensionMismatch);
}
