#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "plgroup/breakhom.hpp"
#include "random_elements.hpp"

using namespace plgroup;

namespace {

GroupContext half(std::vector<Rational> g) { return {Interval::up(0), SlopeGroup(std::move(g))}; }

// u/v -> u * v^-1 mod delta, with v a unit mod delta.
Integer residue(const Rational& x, const Integer& delta) {
  Integer inv;
  mpz_invert(inv.get_mpz_t(), x.get_den().get_mpz_t(), delta.get_mpz_t());
  Integer prod = x.get_num() * inv;
  return mod(prod, delta);
}

// Break vector computed straight from the definition: walk the vertices of
// every piece and read slope ratios off neighbouring segments.
std::map<std::string, IntVec> nu_reference(const PLMap& f, const GroupContext& ctx) {
  std::map<std::string, IntVec> out;
  auto s = f.slopes();
  const auto& v = f.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational jump = s[i + 1] / s[i];
    std::string label = v[i].x == 0 ? "left" : "interior:" + residue(v[i].x, ctx.P.delta()).get_str();
    auto e = ctx.P.p_exponents(jump);
    auto& slot = out[label];
    if (slot.empty()) slot.assign(e.size(), 0);
    for (std::size_t k = 0; k < e.size(); ++k) slot[k] += e[k];
  }
  for (auto it = out.begin(); it != out.end();) {
    bool zero = true;
    for (auto& x : it->second) zero = zero && x == 0;
    it = zero ? out.erase(it) : std::next(it);
  }
  return out;
}

std::map<std::string, IntVec> as_map(const BreakVector& b) {
  std::map<std::string, IntVec> out;
  for (const auto& [l, v] : b.terms()) out[l.str()] = v;
  return out;
}

}  // namespace

TEST(BreakHom, Examples) {
  auto ctx = half({Rational(7, 5)});
  EXPECT_TRUE(nu(PLMap(), ctx).empty());
  auto v = nu(g_map(3, Rational(7, 5)), ctx);
  ASSERT_EQ(v.terms().size(), 1u);
  EXPECT_EQ(v.terms().begin()->first, OrbitLabel::interior(1));
  EXPECT_EQ(v.terms().begin()->second, IntVec{1});
  EXPECT_EQ(epsilon(v, 1), IntVec{1});

  // b(a, D; p) contributes p, p^-2, p at a, a+D, a+2D up to orbit.
  Rational p(7, 5);
  PLMap b = b_map(2, 1, p);
  BreakVector expect;
  expect.add(orbit_label(2, ctx), {1});
  expect.add(orbit_label(3, ctx), {-2});
  expect.add(orbit_label(4, ctx), {1});
  EXPECT_EQ(nu(b, ctx), expect);
  EXPECT_EQ(epsilon(nu(b, ctx), 1), IntVec{0});
  EXPECT_EQ(nu(g_map(0, 2), half({Rational(2)})).terms().begin()->first, OrbitLabel::left());
}

TEST(BreakHom, MatchesReference) {
  std::mt19937_64 rng(1);
  auto ctx = half({Rational(7, 5)});
  GroupContext cc{Interval::compact(0, 8), ctx.P};
  for (int i = 0; i < 100; ++i) {
    PLMap f = testing_support::random_element(rng, cc, 4);
    if (!member(f, ctx)) continue;
    EXPECT_EQ(as_map(nu(f, ctx)), nu_reference(f, ctx));
  }
}

TEST(BreakHom, Homomorphism) {
  std::mt19937_64 rng(2);
  for (auto gens : {std::vector<Rational>{Rational(7, 5)}, {Rational(2), Rational(3)}, {Rational(65), Rational(97)}}) {
    GroupContext cc{Interval::compact(0, 4), SlopeGroup(gens)};
    for (int i = 0; i < 60; ++i) {
      PLMap f = testing_support::random_element(rng, cc), g = testing_support::random_element(rng, cc);
      EXPECT_EQ(nu(compose(f, g), cc), nu(f, cc) + nu(g, cc));
      PLMap b = testing_support::random_bump(rng, cc.P, 1, 3);
      EXPECT_EQ(epsilon(nu(b, cc), gens.size()), IntVec(gens.size(), 0));
    }
  }
}

TEST(BreakHom, LineCollapsesLabels) {
  GroupContext line{Interval::line(), SlopeGroup({Rational(7, 5)})};
  PLMap f = compose(g_map(0, Rational(7, 5)), g_map(1, Rational(7, 5)));
  auto v = nu(f, line);
  ASSERT_EQ(v.terms().size(), 1u);
  EXPECT_EQ(v.terms().begin()->second, IntVec{2});
  // Same information as the end slopes.
  EXPECT_EQ(line.P.from_exponents(v.terms().begin()->second), f.right().slope / f.left().slope);
}

TEST(BreakHom, Gamma) {
  SlopeGroup P({Rational(7, 5)});
  EXPECT_EQ(gamma(PLMap(), P), 0);
  EXPECT_EQ(gamma(aff(3, 1), P), 1);
  EXPECT_EQ(gamma(b_map(1, 1, Rational(7, 5)), P), 0);
  std::mt19937_64 rng(3);
  GroupContext line{Interval::line(), P};
  for (int i = 0; i < 50; ++i) {
    Rational t1 = oracle::random_in_A(rng, 35, 1, -5, 5), t2 = oracle::random_in_A(rng, 35, 1, -5, 5);
    PLMap f = compose(aff(t1, 1), compose(g_map(oracle::random_in_A(rng, 35, 1, -3, 3), Rational(7, 5)),
                                           b_map(oracle::random_in_A(rng, 35, 1, -3, 3), Rational(1, 5), Rational(5, 7))));
    PLMap g = compose(aff(t2, Rational(25, 49)), g_map(1, Rational(7, 5)));
    EXPECT_EQ(gamma(compose(f, g), P), mod(gamma(f, P) + gamma(g, P), P.delta()));
    for (Rational a0 : {Rational(-3), Rational(0), Rational(1, 35), Rational(17, 5), Rational(100)})
      EXPECT_EQ(gamma(f, P, a0), gamma(f, P));
  }
}

TEST(BreakHom, RankFormulas) {
  auto r2 = rank_formulas({Interval::compact(0, 1), SlopeGroup({Rational(2)})});
  EXPECT_EQ(r2.g_pp_ab_rank, 2);
  EXPECT_EQ(r2.g_p_compact_ab_rank, 2);
  auto r32 = rank_formulas({Interval::up(0), SlopeGroup({Rational(3, 2)})});
  EXPECT_EQ(r32.b_ab_rank, 0);
  EXPECT_FALSE(r32.g_pp_ab_rank);
  auto r75 = rank_formulas({Interval::up(0), SlopeGroup({Rational(7, 5)})});
  EXPECT_EQ(r75.b_ab_rank, 1);
  EXPECT_EQ(r75.g_halfline_ab_rank, 3);
  auto r23 = rank_formulas({Interval::compact(0, 1), SlopeGroup({Rational(2), Rational(3)})});
  EXPECT_EQ(r23.g_pp_ab_rank, 4);
  EXPECT_FALSE(r23.b_ab_rank);
}

TEST(BreakHom, InteriorLatticeRank) {
  std::mt19937_64 rng(4);
  for (auto [gen, expect] : {std::pair{Rational(7, 5), 1}, std::pair{Rational(3, 2), 0}}) {
    GroupContext ctx{Interval::up(0), SlopeGroup({gen})};
    long d = to_long(ctx.P.delta());
    IntMatrix rows;
    for (int i = 0; i < 50; ++i) {
      PLMap f = testing_support::random_bump(rng, ctx.P, Rational(1, 7), 5);
      if (i % 2) f = compose(f, testing_support::random_bump(rng, ctx.P, Rational(1, 7), 5));
      IntVec row(static_cast<std::size_t>(d), 0);
      for (const auto& [l, v] : nu(f, ctx).terms()) {
        ASSERT_EQ(l.tag, OrbitLabel::Tag::interior);
        row[to_long(l.residue)] += v[0];
      }
      rows.push_back(row);
    }
    EXPECT_EQ(static_cast<int>(lattice_rank(rows)), expect);
  }
}

TEST(BreakHom, Naturality) {
  // For phi fixing the half line and g bounded, nu(^phi g) moves each break b
  // of g to phi(b) with the same jump.
  std::mt19937_64 rng(5);
  GroupContext ctx{Interval::up(0), SlopeGroup({Rational(7, 5)})};
  GroupContext cc{Interval::compact(0, 6), ctx.P};
  for (int i = 0; i < 20; ++i) {
    PLMap g = testing_support::random_bump(rng, ctx.P, 1, 3);
    PLMap phi = testing_support::random_element(rng, cc, 3);
    BreakVector expect;
    for (const auto& v : g.vertices())
      expect.add(orbit_label(phi(v.x), ctx), ctx.P.p_exponents(g.slope_right_of(v.x) / g.slope_left_of(v.x)));
    EXPECT_EQ(nu(conj(phi, g), ctx), expect);
    EXPECT_EQ(nu(conj(phi, g), ctx), nu(g, ctx));
  }
}
