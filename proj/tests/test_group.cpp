#include <gtest/gtest.h>

#include <random>

#include "mbq/braided_group.hpp"
#include "mbq/fixtures.hpp"
#include "support.hpp"

using namespace mbq;
using mbq::testing::random_invertible;
using mbq::testing::reproduces;
using mbq::testing::transport_group;

namespace {

constexpr int kIterations = 12;

MultiBraidedGroup make(const fixtures::Fixture& f) { return MultiBraidedGroup(f.group); }

void expect_all_pass(const Report& r) {
  for (const auto& e : r.entries()) EXPECT_NE(e.status, Status::Fail) << e.id << " " << e.note;
}

}  // namespace

// ---- Oracles on the canonical fixtures ----

TEST(GroupOracle, AxiomSuitePassesOnEveryFixture) {
  for (const auto& f : fixtures::all()) {
    Report r = check_group(f.group);
    EXPECT_TRUE(r.ok()) << f.name;
    for (const char* id : {"COASSOC", "COUNIT_L", "ANTIPODE_L", "SIGMA_YB", "HEX_L", "HEX_R", "PHI_MULT", "TAU_OK",
                           "SYS_OK", "EPS_SIGMA", "EQ_B1", "EQ_B3", "EQ_B4"}) {
      const Entry* e = r.find(id);
      ASSERT_NE(e, nullptr) << f.name << " " << id;
      EXPECT_EQ(e->status, Status::Pass) << f.name << " " << id;
    }
  }
}

TEST(GroupOracle, K2TauIsFlipAndAdIsTrivial) {
  MultiBraidedGroup g = make(fixtures::fix_k2());
  EXPECT_EQ(g.tau(), flip(2, 2));
  // ad(delta_x) = delta_x (x) 1 on functions of an abelian group.
  EXPECT_EQ(g.ad(), kron(id(2), g.u()));
  EXPECT_EQ(g.kappa0(), g.kappa());
}

TEST(GroupOracle, GrassmannTauIsGradedFlip) {
  MultiBraidedGroup g = make(fixtures::fix_gr());
  EXPECT_EQ(g.tau(), fixtures::graded_flip({0, 1}));
  EXPECT_EQ(g.m0(), g.m());
  EXPECT_EQ(g.kappa0(), g.kappa());
  EXPECT_EQ(g.kappa0().apply(fixtures::vec({0, 1})), fixtures::vec({0, -1}));
}

TEST(GroupOracle, ClassicalLimitOnK2AndGrassmann) {
  for (const auto& f : {fixtures::fix_k2(), fixtures::fix_gr()}) {
    MultiBraidedGroup g = make(f);
    Report r = classical_limit(g, 4);
    EXPECT_TRUE(r.ok()) << f.name;
    for (int k = -4; k <= 4; ++k) EXPECT_EQ(g.sigma_n(k), g.sigma()) << f.name << " n=" << k;
    EXPECT_EQ(g.simplified_algebra().mult, g.m()) << f.name;
  }
}

TEST(GroupOracle, SweedlerAntipodeHasOrderFour) {
  MultiBraidedGroup g = make(fixtures::fix_h4());
  const LinMap k2 = g.kappa() * g.kappa();
  EXPECT_NE(k2, id(4));
  EXPECT_EQ(k2 * k2, id(4));
  EXPECT_EQ(g.kappa_inv(), k2 * g.kappa());
}

TEST(GroupOracle, SigmaMinusTwoClosedForm) {
  for (const auto& f : fixtures::all()) {
    MultiBraidedGroup g = make(f);
    EXPECT_EQ(g.sigma_n(-2), g.tau() * g.sigma_inv() * g.tau() * g.sigma_inv() * g.tau()) << f.name;
    EXPECT_EQ(g.sigma_n(0), g.tau()) << f.name;
  }
}

TEST(GroupOracle, ParanoidModeAgreesWithCache) {
  for (const auto& f : fixtures::all()) {
    GroupOptions opt;
    opt.paranoid = true;
    MultiBraidedGroup g(f.group, opt);
    for (int k = -4; k <= 4; ++k) EXPECT_NO_THROW((void)g.sigma_n(k)) << f.name;
    EXPECT_NO_THROW((void)g.tau());
    EXPECT_NO_THROW((void)g.kappa0());
  }
}

TEST(GroupOracle, KappaShiftScanHoldsEverywhereInClassicalCase) {
  MultiBraidedGroup g = make(fixtures::fix_k2());
  for (const auto& s : explore_kappa_shifts(g, 2))
    if (s.n == s.j) EXPECT_TRUE(s.holds) << s.pattern << " " << s.n;
}

TEST(BraidSystem, CompletionOfClassicalPairIsSingleton) {
  MultiBraidedGroup g = make(fixtures::fix_gr());
  Completion c = complete_braid_system(BraidSystem{2, {g.sigma(), g.tau()}}, 8);
  EXPECT_FALSE(c.truncated);
  EXPECT_EQ(c.system.elements.size(), 1u);
  EXPECT_TRUE(check_braid_system(c.system, g.simplified_algebra()).ok());
}

TEST(BraidSystem, CompletionStopsAtBound) {
  const LinMap p = flip(2, 2);
  const LinMap q = Scalar(2) * p;
  Completion c = complete_braid_system(BraidSystem{2, {p, q}}, 2);
  EXPECT_TRUE(c.truncated);
  EXPECT_EQ(c.system.elements.size(), 2u);
}

// ---- Negative cases ----

TEST(GroupNegative, CorruptedSigmaBreaksHexagonWithWitness) {
  GroupData d = fixtures::fix_k2().group;
  Vec col = d.sigma.column(0);
  col[0] = Scalar(2);
  d.sigma.set_column(0, col);
  Report r = check_group(d);
  EXPECT_FALSE(r.ok());
  const Entry* e = r.find("HEX_L");
  ASSERT_NE(e, nullptr);
  ASSERT_EQ(e->status, Status::Fail);
  ASSERT_TRUE(e->witness);
  const LinMap i = id(2), &m = d.alg.mult, &s = d.sigma;
  EXPECT_TRUE(reproduces(*e->witness, kron(i, m) * kron(s, i) * kron(i, s), s * kron(m, i)));
}

TEST(GroupNegative, SingularBraidingSkipsDerivedChecks) {
  GroupData d = fixtures::fix_k2().group;
  d.sigma = LinMap::zero(4, 4);
  Report r = check_group(d);
  ASSERT_NE(r.find("SIGMA_INV"), nullptr);
  EXPECT_EQ(r.find("SIGMA_INV")->status, Status::Fail);
  EXPECT_EQ(r.find("TAU_OK")->status, Status::Skipped);
  EXPECT_THROW(MultiBraidedGroup{d}, NotInvertible);
}

TEST(GroupNegative, ShapeErrorsAreRejected) {
  GroupData d = fixtures::fix_k2().group;
  d.eps = LinMap::zero(1, 3);
  EXPECT_THROW(check_group(d), DimensionMismatch);
}

// ---- Properties under change of basis ----

TEST(GroupProperty, AxiomsSurviveRandomBasisChange) {
  std::mt19937 rng(2024);
  const auto fx = fixtures::all();
  for (int it = 0; it < kIterations; ++it) {
    const auto& f = fx[static_cast<size_t>(it) % fx.size()];
    const LinMap t = random_invertible(rng, f.group.n(), it % 2 == 1);
    Report r = check_group(transport_group(f.group, t));
    EXPECT_TRUE(r.ok()) << f.name << " iteration " << it;
  }
}

TEST(GroupProperty, DerivedMapsTransportCovariantly) {
  std::mt19937 rng(99);
  const auto fx = fixtures::all();
  for (int it = 0; it < kIterations; ++it) {
    const auto& f = fx[static_cast<size_t>(it) % fx.size()];
    const LinMap t = random_invertible(rng, f.group.n());
    const LinMap ti = invert(t);
    MultiBraidedGroup g(f.group), h(transport_group(f.group, t));
    EXPECT_EQ(h.tau(), kron(t, t) * g.tau() * kron(ti, ti)) << f.name;
    EXPECT_EQ(h.kappa0(), t * g.kappa0() * ti) << f.name;
    EXPECT_EQ(h.ad(), kron(t, t) * g.ad() * ti) << f.name;
    EXPECT_EQ(h.m0(), t * g.m0() * kron(ti, ti)) << f.name;
    EXPECT_EQ(h.sigma_n(-3), kron(t, t) * g.sigma_n(-3) * kron(ti, ti)) << f.name;
  }
}

TEST(GroupProperty, SigmaTernaryLawOnRandomTriples) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> shift(-3, 3);
  for (const auto& f : fixtures::all()) {
    MultiBraidedGroup g = make(f);
    for (int it = 0; it < kIterations; ++it) {
      const int a = shift(rng), b = shift(rng), c = shift(rng);
      EXPECT_EQ(g.sigma_n(a) * g.sigma_n_inv(b) * g.sigma_n(c), g.sigma_n(a - b + c)) << f.name;
    }
  }
}

TEST(GroupProperty, SimplifiedAlgebraIsAssociativeAndUnital) {
  for (const auto& f : fixtures::all()) {
    MultiBraidedGroup g = make(f);
    expect_all_pass(check_algebra(g.simplified_algebra()));
  }
}
