// Acceptance run: one PASS/FAIL line per criterion with its wall time and
// time bound. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "plgroup/breakhom.hpp"
#include "plgroup/construct.hpp"
#include "plgroup/subdivide.hpp"
#include "plgroup/tails.hpp"
#include "plgroup/words.hpp"
#include "random_elements.hpp"

using namespace plgroup;
using namespace testing_support;

namespace {

Rational R(long n, long d = 1) { return make_rational(n, d); }

// Collects the first few failures of a criterion.
struct Check {
  long failures = 0;
  std::ostringstream first;
  void operator()(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ < 3) first << (failures > 1 ? "; " : "") << what;
  }
};

// 1. Group laws on 500 elements of G([0,1]; Z[1/6], <2,3>).
void group_laws(Check& ok) {
  std::mt19937_64 rng(101);
  GroupContext ctx{Interval::compact(0, 1), SlopeGroup({2, 3})};
  std::vector<PLMap> fs;
  for (int i = 0; i < 500; ++i) {
    PLMap f = random_element(rng, ctx, 4);
    if (i % 3 == 0) f = compose(f, random_element(rng, ctx, 2));
    ok(member(f, ctx).ok, "random element outside the context");
    fs.push_back(f);
  }
  const PLMap id;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const PLMap &f = fs[i], &g = fs[(i + 1) % fs.size()], &h = fs[(i + 7) % fs.size()];
    ok(compose(compose(f, g), h) == compose(f, compose(g, h)), "associativity");
    ok(compose(f, inverse(f)) == id && compose(inverse(f), f) == id, "inverse");
    ok(compose(f, id) == f && compose(id, f) == f, "identity");
    ok(inverse(inverse(f)) == f, "double inverse");
    ok(member(compose(f, g), ctx).ok && member(inverse(f), ctx).ok, "closure");
  }
}

// 2. map_interval succeeds exactly on congruent quadruples.
void interval_maps(Check& ok) {
  std::mt19937_64 rng(102);
  ok(SlopeGroup({R(3, 2)}).delta() == 1, "delta(<3/2>) != 1");
  ok(SlopeGroup({65, 97}).delta() == 32, "delta(<65,97>) != 32");
  std::vector<std::vector<Rational>> all{{2}, {R(3, 2)}, {65, 97}, {R(7, 5)}};
  for (const auto& gens : all) {
    SlopeGroup P(gens);
    GroupContext line{Interval::line(), P};
    int done = 0, succeeded = 0;
    while (done < 200) {
      Rational a = oracle::random_in_A(rng, P.N(), 1, -20, 20);
      Rational c = a + oracle::random_in_A(rng, P.N(), 1, R(1, 100), 40);
      Rational a2 = oracle::random_in_A(rng, P.N(), 1, -20, 20);
      Rational c2 = a2 + oracle::random_in_A(rng, P.N(), 1, R(1, 100), 40);
      if (c <= a || c2 <= a2) continue;
      if (done % 2 == 0) {
        Rational len = P.near_point_in_coset(c - a, c2 - a2, R(1, 10));
        if (len <= 0) continue;
        c2 = a2 + len;
      }
      ++done;
      bool congruent = oracle::in_IPA_closure((c2 - a2) - (c - a), gens, 3);
      ok(congruent == P.in_IPA((c2 - a2) - (c - a)), "in_IPA disagrees with the closure oracle");
      try {
        PLMap f = map_interval(a, c, a2, c2, P);
        ++succeeded;
        ok(congruent, "constructed a map for a non-congruent quadruple");
        ok(f(a) == a2 && f(c) == c2, "endpoint images");
        ok(member(f, line).ok, "constructed map not a member");
      } catch (const Error& e) {
        ok(!congruent && e.code() == "CongruenceViolated", "refused a congruent quadruple: " + e.code());
      }
    }
    ok(succeeded >= 100, "too few congruent quadruples sampled");
  }
}

// 3. Every relator of the listed presentations is the identity.
void presentations(Check& ok) {
  auto finite = [](const PresentationReport& r) { return r.count("n0") + r.count("n1") + r.count("n2"); };
  try {
    ok(verify_presentation(Presentation::f_classic()).total() == 2, "F: 2 relators");
    ok(finite(verify_presentation(Presentation::gp_finite(2))) == 2, "G[2]: 2 relators");
    ok(finite(verify_presentation(Presentation::gp_finite(3))) == 6, "G[3]: 6 relators");
    for (long p : {2, 3}) {
      auto r = verify_presentation(Presentation::ghalf_finite(p), 8);
      ok(finite(r) == (p == 2 ? 2 : 6), "half line: finite relation count");
      ok(r.count("family") > 0, "half line: family sampled");
    }
    for (long p : {2, 3, 5}) {
      auto r = verify_presentation(Presentation::gp_infinite(p), 8, 12);
      ok(r.count("conjugation") == 12 * 13 / 2, "x_i x_j family count for i < j <= 12");
    }
  } catch (const Error& e) {
    ok(false, std::string("relator failed: ") + e.what());
  }
}

// 4. Seminormal forms and both word-problem methods on p = 2.
void normal_forms(Check& ok) {
  std::mt19937_64 rng(104);
  auto pr = Presentation::gp_infinite(2);
  auto rel = relators(pr, 8, 6);
  std::vector<Word> words;
  for (int k = 0; k < 200; ++k) words.push_back(random_word(rng, pr, 5, 2 + k % 14));
  std::vector<Word> planted;
  for (int k = 0; k < 50; ++k) {
    Word u = random_word(rng, pr, 5, 1 + k % 6);
    if (k % 2) planted.push_back(u * rel[static_cast<std::size_t>(k) % rel.size()].word * u.inverse());
    else planted.push_back(u * seminormal(u).inverse());
  }
  for (const auto& w : words) {
    Word s = seminormal(w);
    ok(is_seminormal(s), "seminormal shape");
    ok(eval_word(s) == eval_word(w), "seminormal changes the element");
  }
  for (const auto* set : {&words, &planted})
    for (const auto& w : *set) {
      bool by_eval = eval_word(w).is_identity(), by_rewriting = normal_form(w).empty();
      ok(by_eval == by_rewriting, "word-problem methods disagree on " + word_str(w));
      try {
        ok(word_problem(w) == by_eval, "word_problem");
      } catch (const Error& e) {
        ok(false, e.what());
      }
    }
  for (const auto& w : planted) ok(normal_form(w).empty(), "planted identity not recognized");
}

// 5. factor and decompose round trips.
void subdivisions(Check& ok) {
  std::mt19937_64 rng(105);
  for (auto ps : {make_pset({2}), make_pset({2, 3}), make_pset({4, 6})}) {
    for (int i = 0; i < 100; ++i) {
      PLMap f = random_gp_element(rng, ps, 4);
      auto [c, c2] = factor(f, ps);
      ok(interpolate(from_code(c), from_code(c2)) == f, "factor -> interpolate");
      GenWord w = decompose(f, ps);
      for (const auto& l : w) ok(is_generator(l.sym, ps), "non-generator letter " + l.sym.str());
      ok(eval_gen_word(w) == f, "decompose -> product");
    }
  }
  PSet ps = make_pset({4, 6});
  PLMap f = PLMap::interpolate_fixing_ends({{0, 0}, {R(1, 18), R(1, 2)}, {R(1, 2), R(17, 18)}, {1, 1}});
  ok(f.slopes() == std::vector<Rational>{1, 9, 1, R(1, 9), 1}, "worked example slopes");
  auto [c, c2] = factor(f, ps);
  ok(interpolate(from_code(c), from_code(c2)) == f, "worked example factor");
  ok(eval_gen_word(decompose(f, ps)) == f, "worked example decompose");
}

// 6. The break homomorphism.
void nu_suite(Check& ok) {
  std::mt19937_64 rng(106);
  std::vector<std::vector<Rational>> gs{{R(7, 5)}, {2, 3}, {65, 97}, {R(3, 2)}};
  for (int i = 0; i < 200; ++i) {
    GroupContext cc{Interval::compact(0, 4), SlopeGroup(gs[static_cast<std::size_t>(i) % gs.size()])};
    PLMap f = random_element(rng, cc), g = random_element(rng, cc);
    ok(nu(compose(f, g), cc) == nu(f, cc) + nu(g, cc), "nu not a homomorphism");
    PLMap b = random_bump(rng, cc.P, 1, 3);
    if (i % 2) b = compose(b, random_bump(rng, cc.P, R(1, 2), R(7, 2)));
    std::size_t rk = cc.P.generators().size();
    ok(epsilon(nu(b, cc), rk) == IntVec(rk, 0), "epsilon(nu(b)) != 0");
  }
  // nu(b(a, D; p)) = a (x) p + (a + D) (x) p^-2 + (a + 2D) (x) p, up to orbits.
  for (const auto& p : {R(7, 5), R(3, 2), R(65)}) {
    GroupContext half{Interval::up(0), SlopeGroup({p})};
    for (int i = 0; i < 10; ++i) {
      Rational a = oracle::random_in_A(rng, half.P.N(), 1, R(1, 10), 5);
      Rational d = oracle::random_in_A(rng, half.P.N(), 2, R(1, 100), 2);
      if (a <= 0 || d <= 0) continue;
      BreakVector expect;
      expect.add(orbit_label(a, half), {1});
      expect.add(orbit_label(a + d, half), {-2});
      expect.add(orbit_label(a + 2 * d, half), {1});
      ok(nu(b_map(a, d, p), half) == expect, "nu of b(a,D;p)");
    }
  }
  for (auto [gen, expect] : {std::pair{R(7, 5), 1}, std::pair{R(3, 2), 0}}) {
    GroupContext ctx{Interval::up(0), SlopeGroup({gen})};
    long d = to_long(ctx.P.delta());
    IntMatrix rows;
    for (int i = 0; i < 50; ++i) {
      PLMap f = random_bump(rng, ctx.P, R(1, 7), 5);
      if (i % 2) f = compose(f, random_bump(rng, ctx.P, R(1, 7), 5));
      IntVec row(static_cast<std::size_t>(d), 0);
      for (const auto& [l, v] : nu(f, ctx).terms()) {
        ok(l.tag == OrbitLabel::Tag::interior, "bounded element breaks at an end");
        row[static_cast<std::size_t>(to_long(l.residue))] += v[0];
      }
      rows.push_back(row);
    }
    ok(static_cast<long>(lattice_rank(rows)) == expect, "interior nu-lattice rank");
  }
  GroupContext ctx{Interval::up(0), SlopeGroup({R(7, 5)})};
  GroupContext cc{Interval::compact(0, 6), ctx.P};
  for (int i = 0; i < 20; ++i) {
    PLMap g = random_bump(rng, ctx.P, 1, 3);
    PLMap phi = random_element(rng, cc, 3);
    BreakVector moved;
    for (const auto& v : g.vertices())
      moved.add(orbit_label(phi(v.x), ctx), ctx.P.p_exponents(g.slope_right_of(v.x) / g.slope_left_of(v.x)));
    ok(nu(conj(phi, g), ctx) == moved, "naturality");
  }
}

// 7. Correspondences under the tail maps.
void tails(Check& ok) {
  std::mt19937_64 rng(107);
  try {
    for (long p : {2, 3, 5}) {
      TailMap psi_inv = make_psi2(1, p).inverse();
      ok(conj(psi_inv, f_map(0, 1, p)) == aff(p - 1, 1), "z_0 is not the translation by p-1");
      for (long i = 1; i <= 10; ++i) ok(conj(psi_inv, f_map(i, 1, p)) == f_map(i - 1, 1, p), "z_i != y_{i-1}");
      TailMap phi = make_phi1(1, p);
      for (long i = 0; i <= 2 * p; ++i)
        ok(conj(phi, f_map(i, 1, p)) == reflect_conj(xi_generator(i, p), 1), "preimage of y_i");
    }
    TailMap resc = make_rescale(1, R(3, 4), R(1, 2));
    GroupContext c1{Interval::compact(0, 1), SlopeGroup({2})}, c2{Interval::compact(0, R(3, 4)), SlopeGroup({2})};
    for (int k = 0; k < 50; ++k) {
      PLMap f = random_element(rng, c1);
      PLMap g = conj(resc, f);
      ok(member(g, c2).ok, "rescaled image not in G([0,b'])");
      ok(conj(resc.inverse(), g) == f, "rescale round trip");
      PLMap h = random_element(rng, c2);
      PLMap back = conj(resc.inverse(), h);
      ok(member(back, c1).ok && conj(resc, back) == h, "rescale inverse round trip");
    }
    for (int k = 0; k < 50; ++k) {
      const Rational p = k % 2 ? R(1, 3) : R(1, 2);
      GroupContext ctx{Interval::compact(0, 1), SlopeGroup({1 / p})};
      PLMap f = random_element(rng, ctx);
      auto [j, l] = pi(f, p, 1);
      for (long m = 1; m <= 3; ++m)
        for (long n = 1; n <= 3; ++n) {
          auto [j2, l2] = pi_of_mu(m, n, f, p, 1);
          ok(j2 == m * j && l2 == n * l, "pi scaling under mu_m, nu_n");
        }
    }
  } catch (const Error& e) {
    ok(false, e.what());
  }
}

// 8. Lattice parameters against brute-force enumeration, index <= 12.
struct Points {
  std::set<std::pair<long, long>> s;
};

Points enumerate(const std::vector<std::array<long, 2>>& gens, long box) {
  Points out;
  std::vector<std::pair<long, long>> stack{{0, 0}};
  out.s.insert({0, 0});
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    for (const auto& g : gens)
      for (long sg : {1L, -1L}) {
        std::pair<long, long> n{x + sg * g[0], y + sg * g[1]};
        if (std::abs(n.first) > box || std::abs(n.second) > box || out.s.count(n)) continue;
        out.s.insert(n);
        stack.push_back(n);
      }
  }
  return out;
}

void lattices(Check& ok) {
  const long box = 30;
  std::vector<LatticeSubgroup> all;
  for (long a = 1; a <= 12; ++a)
    for (long d = 1; a * d <= 12; ++d)
      for (long b = 0; b < d; ++b) all.push_back({{{a, b}, {0, d}}});
  // Q rescaled to full projections (x/m, y/n), enumerated in the same box.
  std::vector<std::set<std::pair<long, long>>> normalized;
  for (const auto& q : all) {
    Points pts = enumerate(q.generators, box);
    long m = 0, n = 0;
    for (const auto& [x, y] : pts.s) m = std::gcd(m, x), n = std::gcd(n, y);
    long m1 = 0, n1 = 0;
    for (long x = 1; x <= box && !m1; ++x)
      if (pts.s.count({x, 0})) m1 = x;
    for (long y = 1; y <= box && !n1; ++y)
      if (pts.s.count({0, y})) n1 = y;
    long cosets = 0;
    for (long x = 0; x < m1; ++x)
      for (long y = 0; y < n1; ++y) cosets += pts.s.count({x, y});
    LatticeParams r = params(q);
    ok(r.m == m && r.n == n, "projections m, n");
    ok(m1 == r.c * m && n1 == r.c * n, "axis subgroups c m, c n");
    ok(cosets == r.c, "c is the index of the axis rectangle");
    ok(r.index == m1 * n1 / r.c, "index");
    ok(pts.s.count({r.d * m, n}) && pts.s.count({m, r.e * n}), "(d m, n) and (m, e n) in Q");
    ok(enumerate({{{r.c * m, 0}, {r.d * m, n}}}, box).s == pts.s, "generating set (c m, 0), (d m, n)");
    ok(enumerate({{{0, r.c * n}, {m, r.e * n}}}, box).s == pts.s, "generating set (0, c n), (m, e n)");
    ok(r.c == 1 || (r.d * r.e) % r.c == 1, "d e = 1 mod c");
    LatticeParams s = params(q.swapped());
    ok(s.m == r.n && s.n == r.m && s.c == r.c && s.d == r.e && s.e == r.d, "swap invariance");
    // Every point of Q has x in mZ and y in nZ, so the generators rescale to integers.
    std::vector<std::array<long, 2>> scaled;
    for (const auto& g : q.generators) scaled.push_back({g[0] / m, g[1] / n});
    normalized.push_back(enumerate(scaled, box).s);
  }
  std::vector<std::set<std::pair<long, long>>> swapped;
  for (const auto& s : normalized) {
    std::set<std::pair<long, long>> t;
    for (const auto& [x, y] : s) t.insert({y, x});
    swapped.push_back(std::move(t));
  }
  // Isomorphic exactly when equal after rescaling the axes, up to the swap.
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j) {
      bool brute = normalized[i] == normalized[j] || normalized[i] == swapped[j];
      ok(iso_decide(all[i], all[j]) == brute, "iso_decide disagrees with rescaling oracle");
      ok(iso_decide(all[i], all[j]) == iso_decide(all[j], all[i]), "iso_decide not symmetric");
    }
}

// 9. Q_b table and interval classes for <65, 97>.
void aut_numerics(Check& ok) {
  SlopeGroup P({65, 97});
  std::vector<long> expect{8, 4, 8, 2, 8, 4, 8, 1};
  for (long b = 1; b <= 8; ++b) ok(P.q_b_order(5, b) == expect[static_cast<std::size_t>(b - 1)], "Q_b order");
  ok(P.interval_iso_classes().size() == 10, "10 interval classes");
}

// 10. Higman's commutator identity with the constructed witness.
void higman(Check& ok) {
  std::mt19937_64 rng(110);
  std::vector<std::vector<Rational>> gs{{2}, {R(7, 5)}, {2, 3}, {R(3, 2)}};
  for (int i = 0; i < 50; ++i) {
    GroupContext ctx{Interval::compact(0, 1), SlopeGroup(gs[static_cast<std::size_t>(i) % gs.size()])};
    PLMap x = random_bump(rng, ctx.P, R(1, 8), R(7, 8));
    PLMap y = compose(random_bump(rng, ctx.P, R(1, 8), R(7, 8)), random_bump(rng, ctx.P, R(1, 8), R(7, 8)));
    PLMap z = random_bump(rng, ctx.P, R(1, 8), R(7, 8));
    PLMap u = higman_witness(x, y, z, ctx);
    ok(member(u, ctx).ok, "witness not in the group");
    PLMap ui = inverse(u), zi = inverse(z);
    PLMap rhs = product({conj(product({x, y, ui}), z), conj(compose(x, ui), zi), conj(ui, z), conj(compose(y, ui), zi)});
    ok(commutator(x, y) == rhs, "commutator relation");
  }
}

// 11. Approximation within 2^-10 at every sample.
void density(Check& ok) {
  GroupContext ctx{Interval::compact(0, 1), SlopeGroup({2})};
  std::vector<std::function<Rational(const Rational&)>> targets{
      [](const Rational& t) -> Rational { return t * t; },
      [](const Rational& t) -> Rational { return t * t * t; },
      [](const Rational& t) -> Rational { return 1 - (1 - t) * (1 - t); },
      [](const Rational& t) -> Rational { return 3 * t * t - 2 * t * t * t; },
      [](const Rational& t) -> Rational { return t / (2 - t); },
      [](const Rational& t) -> Rational { return 2 * t / (1 + t); },
      [](const Rational& t) -> Rational { return (t * t + t) / 2; },
      [](const Rational& t) -> Rational { if (t <= R(1, 3)) return t / 2;
        return R(1, 6) + (t - R(1, 3)) * R(5, 4); },
      [](const Rational& t) -> Rational { return t == 0 || t == 1 ? t : Rational(std::sqrt(t.get_d())); },
      [](const Rational& t) -> Rational { return t == 0 || t == 1 ? t : Rational((std::exp(t.get_d()) - 1) / (std::exp(1.0) - 1)); }};
  const Rational eps = rpow(Rational(2), -10);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    std::vector<Sample> s;
    long n = k % 2 ? 60 : 64;
    for (long i = 0; i <= n; ++i) s.push_back({R(i, n), targets[k](R(i, n))});
    PLMap f = approximate(s, eps, ctx);
    ok(member(f, ctx).ok, "approximant not in F");
    for (const auto& x : s) ok(abs(f(x.t) - x.g) <= eps, "sample missed by more than eps");
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double bound;
    void (*run)(Check&);
  };
  const Criterion criteria[] = {
      {"exact group laws", 10, group_laws},        {"interval maps iff congruence", 30, interval_maps},
      {"presentation relators", 20, presentations}, {"normal forms and word problem", 10, normal_forms},
      {"subdivision round trips", 60, subdivisions}, {"break homomorphism", 30, nu_suite},
      {"tail-map correspondences", 60, tails},      {"finite-index classification", 20, lattices},
      {"Aut/Q_b numerics", 5, aut_numerics},         {"Higman identity", 20, higman},
      {"density", 10, density}};
  int failed = 0, i = 0;
  for (const auto& c : criteria) {
    Check ok;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(ok);
    } catch (const std::exception& e) {
      ok(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = ok.failures == 0 && secs <= c.bound;
    failed += !pass;
    std::printf("%s %2d %-32s %7.2fs (bound %3.0fs)", pass ? "PASS" : "FAIL", ++i, c.name, secs, c.bound);
    if (ok.failures) std::printf("  %ld failures: %s", ok.failures, ok.first.str().c_str());
    else if (!pass) std::printf("  over time bound");
    std::printf("\n");
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
