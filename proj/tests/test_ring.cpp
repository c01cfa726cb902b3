#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "oracles.hpp"
#include "plgroup/ring.hpp"

using namespace plgroup;

namespace {

SlopeGroup P(std::initializer_list<const char*> gens) {
  std::vector<Rational> v;
  for (auto g : gens) v.push_back(parse_rational(g));
  return SlopeGroup(v);
}

}  // namespace

TEST(Ring, MembershipInA) {
  EXPECT_TRUE(P({"2", "3"}).in_A(Rational(17, 12)));
  EXPECT_FALSE(P({"2", "3"}).in_A(Rational(1, 5)));
  EXPECT_TRUE(P({"3/2"}).in_A(Rational(4, 9)));
  EXPECT_EQ(P({"3/2"}).N(), 6);
}

TEST(Ring, MembershipInP) {
  auto p23 = P({"2", "3"});
  EXPECT_TRUE(p23.in_P(6));
  EXPECT_EQ(p23.p_exponents(6), (IntVec{1, 1}));
  EXPECT_EQ(p23.p_exponents(Rational(4, 27)), (IntVec{2, -3}));
  auto p46 = P({"4", "6"});
  EXPECT_TRUE(p46.in_P(9));
  EXPECT_EQ(p46.p_exponents(9), (IntVec{-1, 2}));
  EXPECT_FALSE(p46.in_P(2));
  EXPECT_THROW(p46.p_exponents(2), Error);
  EXPECT_FALSE(p23.in_P(5));
  EXPECT_FALSE(p23.in_P(-6));
}

TEST(Ring, DependentGenerators) {
  auto p = P({"4", "6", "9"});
  EXPECT_FALSE(p.independent());
  EXPECT_TRUE(p.in_P(Rational(3, 2)));
  try {
    p.p_exponents(6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "DependentGenerators");
  }
  auto rel = p.relation_basis();
  ASSERT_EQ(rel.size(), 1u);
  EXPECT_EQ(p.from_exponents(rel[0]), 1);
}

TEST(Ring, DeltaValues) {
  EXPECT_EQ(P({"65", "97"}).delta(), 32);
  EXPECT_EQ(P({"3/2"}).delta(), 1);
  auto p75 = P({"7/5"});
  EXPECT_EQ(p75.delta(), 2);
  EXPECT_FALSE(p75.in_IPA(3));
  EXPECT_TRUE(p75.in_IPA(Rational(2, 35)));
  EXPECT_THROW(p75.in_IPA(Rational(1, 3)), Error);
}

TEST(Ring, ExpressInIPA) {
  EXPECT_TRUE(P({"2"}).express_in_IPA(0).empty());
  auto t = P({"2"}).express_in_IPA(Rational(5, 4));
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].p, 2);
  EXPECT_EQ(t[0].b, Rational(5, 4));
  auto p = P({"65", "97"});
  Rational sum = 0;
  auto terms = p.express_in_IPA(32);
  EXPECT_LE(terms.size(), 2u);
  for (const auto& x : terms) {
    EXPECT_TRUE(p.in_A(x.b));
    sum += (x.p - 1) * x.b;
  }
  EXPECT_EQ(sum, 32);
  try {
    p.express_in_IPA(1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NotInIPA");
  }
}

TEST(Ring, AutAndOrbits) {
  auto p = P({"65", "97"});
  EXPECT_EQ(p.prime_support(), (std::vector<Integer>{5, 13, 97}));
  std::vector<long> expected{8, 4, 8, 2, 8, 4, 8, 1};
  for (int b = 1; b <= 8; ++b) EXPECT_EQ(p.q_b_order(5, b), expected[b - 1]) << b;
  EXPECT_EQ(p.interval_iso_classes().size(), 10u);
  EXPECT_EQ(P({"2"}).interval_iso_classes().size(), 1u);
  EXPECT_THROW(p.q_b_order(7, 1), Error);
}

// A separate count of the orbits: classes of b mod 32 under multiplication by
// 5, 13 and 97 found by union-find.
TEST(Ring, OrbitCountOracle) {
  std::vector<int> parent(32);
  for (int i = 0; i < 32; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int b = 0; b < 32; ++b)
    for (int s : {5, 13, 97}) parent[find(b)] = find((b * s) % 32);
  std::set<int> roots;
  for (int b = 0; b < 32; ++b) roots.insert(find(b));
  EXPECT_EQ(roots.size(), P({"65", "97"}).interval_iso_classes().size());
}

TEST(Ring, IPAAgreesWithClosureOracle) {
  std::mt19937_64 rng(11);
  for (auto gens : {std::vector<const char*>{"7/5"}, {"65", "97"}, {"3/2"}, {"2", "3"}, {"4", "6"}, {"9/4", "5/3"}}) {
    std::vector<Rational> g;
    for (auto s : gens) g.push_back(parse_rational(s));
    SlopeGroup p(g);
    for (int i = 0; i < 1000 / 6 + 1; ++i) {
      Rational a = oracle::random_in_A(rng, p.N(), 1, -200, 200);
      bool in = p.in_IPA(a);
      EXPECT_EQ(in, oracle::in_IPA_closure(a, g, 3)) << a.get_str();
      if (in) {
        Rational s = 0;
        for (const auto& t : p.express_in_IPA(a)) s += (t.p - 1) * t.b;
        EXPECT_EQ(s, a);
      }
    }
  }
}

TEST(Ring, CosetInvariance) {
  std::mt19937_64 rng(5);
  auto p = P({"65", "97"});
  for (int i = 0; i < 200; ++i) {
    Rational a = oracle::random_in_A(rng, p.N(), 1, -50, 50);
    Rational b = oracle::random_in_A(rng, p.N(), 1, -5, 5);
    for (const auto& g : p.generators()) EXPECT_EQ(p.coset(a + (g - 1) * b), p.coset(a));
    Rational a2 = oracle::random_in_A(rng, p.N(), 1, -50, 50);
    EXPECT_EQ(p.coset(a) == p.coset(a2), p.in_IPA(a - a2));
  }
}

TEST(Ring, PExponentsRoundTrip) {
  std::mt19937_64 rng(3);
  auto p = P({"3/2", "5"});
  std::uniform_int_distribution<int> e(-6, 6);
  for (int i = 0; i < 200; ++i) {
    IntVec v{e(rng), e(rng)};
    Rational q = p.from_exponents(v);
    EXPECT_EQ(p.p_exponents(q), v);
  }
}

TEST(Ring, InPAgreesWithShortProducts) {
  for (auto gens : {std::vector<const char*>{"4", "6"}, {"2", "3"}, {"3/2"}, {"9/4", "5/3"}}) {
    std::vector<Rational> g;
    for (auto s : gens) g.push_back(parse_rational(s));
    SlopeGroup p(g);
    auto prods = oracle::short_products(g, 4);
    for (const auto& q : prods) EXPECT_TRUE(p.in_P(q));
    // Every prime-power monomial with small exponents: in P iff in the product set.
    const auto& pr = p.prime_support();
    std::vector<int> ex(pr.size(), -2);
    for (;;) {
      Rational q = 1;
      for (std::size_t i = 0; i < pr.size(); ++i) q *= rpow(Rational(pr[i]), ex[i]);
      EXPECT_EQ(p.in_P(q), prods.count(q) > 0) << q.get_str();
      std::size_t k = 0;
      while (k < ex.size() && ++ex[k] > 2) ex[k++] = -2;
      if (k == ex.size()) break;
    }
  }
}

TEST(Ring, DeltaInvariantUnderGeneratorChange) {
  std::vector<std::vector<Rational>> sets{{Rational(65), Rational(97)}, {Rational(7, 5)}, {Rational(3, 2), Rational(5)}};
  for (const auto& g : sets) {
    Integer d = SlopeGroup(g).delta();
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto h = g;
      h[i] = 1 / h[i];
      EXPECT_EQ(SlopeGroup(h).delta(), d);
      if (g.size() > 1) {
        auto k = g;
        k[i] = g[i] * g[(i + 1) % g.size()];
        EXPECT_EQ(SlopeGroup(k).delta(), d);
      }
    }
  }
}
