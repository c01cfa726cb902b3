#pragma once
// Constructions of elements with prescribed behaviour: interval maps built
// from stretch steps, multi-point transitivity, approximation of sampled
// homeomorphisms, and the commutator witness for boundedly supported elements.

#include <algorithm>
#include <optional>
#include <vector>

#include "plgroup/plmap.hpp"

namespace plgroup {

// Smallest k >= 0 with a / p^k < b (p > 1).
inline long minimal_k(const Rational& a, const Rational& b, const Rational& p) {
  long k = 0;
  Rational x = a;
  while (x >= b) {
    x /= p;
    ++k;
  }
  return k;
}

// Maps [0, b] onto [0, b + (p-1)a]; breaks 0, a'/p, a' with a' = a / p^k.
inline PLMap stretch_map(const Rational& b, const Rational& a, const Rational& p, long k, const SlopeGroup& P) {
  if (!P.in_A(a) || !P.in_A(b)) throw Error("ParamNotInA", "stretch parameters must lie in A");
  if (!P.in_P(p)) throw Error("ParamNotInP", "stretch slope must lie in P");
  if (!(a > 0 && b > 0 && p > 1 && k >= 0)) throw Error("BadParameters", "need a, b > 0, p > 1, k >= 0");
  Rational ap = a / rpow(p, k);
  if (ap >= b) throw Error("BadK", "a/p^k must be smaller than b");
  return PLMap({{0, 0}, {ap / p, ap}, {ap, ap + (p - 1) * a}}, AffineMap{},
               AffineMap::translation((p - 1) * a));
}

namespace detail {

// Glues maps pieces[i] : [knots[i], knots[i+1]] -> [images[i], images[i+1]]
// and extends by the given affine ends.
inline PLMap glue(const std::vector<Rational>& knots, const std::vector<Rational>& images,
                  const std::vector<PLMap>& pieces, const AffineMap& left, const AffineMap& right) {
  std::vector<Vertex> pts;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    pts.push_back({knots[i], images[i]});
    if (i < pieces.size())
      for (const auto& v : pieces[i].vertices())
        if (knots[i] < v.x && v.x < knots[i + 1]) pts.push_back(v);
  }
  return PLMap(std::move(pts), left, right);
}

}  // namespace detail

// f in G(R; A, P) with f([a, c]) = [a', c'].
inline PLMap map_interval(const Rational& a, const Rational& c, const Rational& a2, const Rational& c2,
                          const SlopeGroup& P) {
  for (const auto* q : {&a, &c, &a2, &c2}) P.require_A(*q);
  if (!(a < c && a2 < c2)) throw Error("BadParameters", "map_interval needs a < c and a' < c'");
  Rational d = (c2 - a2) - (c - a);
  if (!P.in_IPA(d))
    throw Error("CongruenceViolated", "length difference not in IP.A").with("delta", P.delta().get_str());
  struct Step {
    Rational q, x;  // q > 1, increment (q - 1) x
  };
  std::vector<Step> steps;
  for (const auto& t : P.express_in_IPA(d)) {
    if (t.p > 1)
      steps.push_back({t.p, t.b});
    else
      steps.push_back({1 / t.p, -t.p * t.b});
  }
  // Greedy order keeping every partial length positive.
  std::vector<bool> used(steps.size(), false);
  Rational len = c - a;
  PLMap f = PLMap::affine(AffineMap::translation(-a));
  for (std::size_t n = 0; n < steps.size(); ++n) {
    std::size_t j = 0;
    while (used[j] || len + (steps[j].q - 1) * steps[j].x <= 0) ++j;
    used[j] = true;
    const auto& s = steps[j];
    Rational next = len + (s.q - 1) * s.x;
    PLMap step = s.x > 0 ? stretch_map(len, s.x, s.q, minimal_k(s.x, len, s.q), P)
                         : inverse(stretch_map(next, -s.x, s.q, minimal_k(-s.x, next, s.q), P));
    f = compose(step, f);
    len = next;
  }
  return compose(PLMap::affine(AffineMap::translation(a2)), f);
}

namespace detail {

// Identity outside [knots.front(), knots.back()], which must be fixed.
inline PLMap glue_fixed_ends(const std::vector<Rational>& knots, const std::vector<Rational>& images,
                             const SlopeGroup& P) {
  std::vector<PLMap> pieces;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    pieces.push_back(map_interval(knots[i], knots[i + 1], images[i], images[i + 1], P));
  return glue(knots, images, pieces, AffineMap{}, AffineMap{});
}

}  // namespace detail

// f in G(I; A, P) with f(points_i) = images_i; identity outside a compact
// subinterval of int(I) unless I is the whole line.
inline PLMap tuple_map(const std::vector<Rational>& points, const std::vector<Rational>& images,
                       const GroupContext& ctx) {
  const auto& P = ctx.P;
  const auto& I = ctx.interval;
  if (points.size() != images.size() || points.empty())
    throw Error("BadParameters", "points and images need equal nonzero length");
  for (std::size_t i = 0; i < points.size(); ++i) {
    P.require_A(points[i]);
    P.require_A(images[i]);
    if (!I.interior(points[i]) || !I.interior(images[i]))
      throw Error("NotInInterior", "points must lie in the interior of I");
    if (i && !(points[i - 1] < points[i] && images[i - 1] < images[i]))
      throw Error("BadParameters", "points and images must increase strictly");
  }
  bool line = I.kind == IntervalKind::line;
  Rational shift0 = images[0] - points[0];
  for (std::size_t i = 0; i < points.size(); ++i) {
    Rational diff = images[i] - points[i] - (line ? shift0 : Rational(0));
    if (!P.in_IPA(diff))
      throw Error("CongruenceViolated", "points and images are not congruent modulo IP.A")
          .with("delta", P.delta().get_str());
  }
  if (line) {
    std::vector<PLMap> pieces;
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
      pieces.push_back(map_interval(points[i], points[i + 1], images[i], images[i + 1], P));
    return detail::glue(points, images, pieces, AffineMap::translation(shift0),
                        AffineMap::translation(images.back() - points.back()));
  }
  Rational lo = std::min(points.front(), images.front());
  Rational hi = std::max(points.back(), images.back());
  Rational a = I.lo ? P.point_between(*I.lo, lo) : lo - 1;
  Rational c = I.hi ? P.point_between(hi, *I.hi) : hi + 1;
  std::vector<Rational> knots{a}, imgs{a};
  knots.insert(knots.end(), points.begin(), points.end());
  imgs.insert(imgs.end(), images.begin(), images.end());
  knots.push_back(c);
  imgs.push_back(c);
  return detail::glue_fixed_ends(knots, imgs, P);
}

struct Sample {
  Rational t, g;
};

// Approximates the homeomorphism of the compact interval I sampled by
// `target` (strictly increasing, fixing both endpoints). The result is within
// eps at every sample; between consecutive nodes both maps are monotone and the
// target moves by at most eps/2, so the sup distance to the piecewise-linear
// interpolant of the samples is at most eps.
inline PLMap approximate(const std::vector<Sample>& target, const Rational& eps, const GroupContext& ctx) {
  if (eps <= 0) throw Error("EpsilonTooTight", "eps must be positive");
  const auto& I = ctx.interval;
  const auto& P = ctx.P;
  if (I.kind != IntervalKind::compact || !ctx.lo_in_A() || !ctx.hi_in_A())
    throw Error("UnsupportedContext", "approximation needs a compact interval with endpoints in A");
  if (target.size() < 2 || target.front().t != *I.lo || target.front().g != *I.lo ||
      target.back().t != *I.hi || target.back().g != *I.hi)
    throw Error("BadParameters", "target must fix both endpoints of I");
  for (std::size_t i = 1; i < target.size(); ++i)
    if (!(target[i - 1].t < target[i].t && target[i - 1].g < target[i].g))
      throw Error("BadParameters", "target must be strictly increasing");

  std::vector<Vertex> poly;
  for (const auto& s : target) poly.push_back({s.t, s.g});
  const PLMap G = PLMap::interpolate_fixing_ends(poly);
  const PLMap Ginv = inverse(G);
  Rational max_slope = 1;
  for (const auto& s : G.slopes()) max_slope = std::max(max_slope, s);

  // Sample nodes are the samples lying in A.
  std::vector<Rational> nodes;
  for (const auto& s : target)
    if (P.in_A(s.t)) nodes.push_back(s.t);
  std::vector<Rational> imgs(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (j == 0 || j + 1 == nodes.size()) {
      imgs[j] = nodes[j];
      continue;
    }
    Rational gj = G(nodes[j]);
    Rational tol = std::min({Rational(eps / 2), Rational((gj - G(nodes[j - 1])) / 3), Rational((G(nodes[j + 1]) - gj) / 3)});
    imgs[j] = P.near_point_in_coset(nodes[j], gj, tol);
  }

  // Refine so that the target moves by at most eps/2 between nodes.
  std::vector<Rational> knots{nodes[0]}, kimgs{imgs[0]};
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    Rational g0 = G(nodes[j]), g1 = G(nodes[j + 1]);
    Integer n = ceil_of((g1 - g0) / (eps / 4));
    Rational xtol = std::min(Rational(eps / 8 / max_slope), Rational((nodes[j + 1] - nodes[j]) / (4 * Rational(n) + 4)));
    for (Integer k = 1; k < n; ++k) {
      Rational x = P.near_point(Ginv(g0 + (g1 - g0) * Rational(k) / Rational(n)), xtol);
      if (!(knots.back() < x && x < nodes[j + 1])) continue;
      Rational L = kimgs.back(), U = imgs[j + 1];
      Rational mu = (U - L) / (2 * (Rational(n - k) + 2));
      Rational want = std::clamp(G(x), Rational(L + mu), Rational(U - mu));
      knots.push_back(x);
      kimgs.push_back(P.near_point_in_coset(x, want, std::min(Rational(eps / 4), Rational(mu / 2))));
    }
    knots.push_back(nodes[j + 1]);
    kimgs.push_back(imgs[j + 1]);
  }
  PLMap f = detail::glue_fixed_ends(knots, kimgs, P);
  for (const auto& s : target)
    if (abs(f(s.t) - s.g) > eps) return approximate(target, eps / 2, ctx);
  return f;
}

// u in B with u([b1, b2]) inside an interval I' disjoint from z(I'), where
// [b1, b2] contains the supports of x and y; then ^u x and ^{zu} y commute.
inline PLMap higman_witness(const PLMap& x, const PLMap& y, const PLMap& z, const GroupContext& ctx) {
  if (z.is_identity()) throw Error("ZIsIdentity", "z must not be the identity");
  const auto& P = ctx.P;
  const auto& I = ctx.interval;
  for (const auto* f : {&x, &y, &z}) {
    require_member(*f, ctx);
    auto h = f->support();
    if (h && (!h->lo || !h->hi || !I.interior(*h->lo) || !I.interior(*h->hi)))
      throw Error("NotBounded", "x, y, z must have compact support in the interior of I");
  }
  const auto& zv = z.vertices();
  Rational ts = (zv[0].x + zv[1].x) / 2;
  Rational d = abs(z(ts) - ts);
  Rational m = 1;
  for (const auto& s : z.slopes()) m = std::max(m, s);
  Rational r = d / (m + 1) / 2;
  Rational b1p = P.near_point_in_coset(0, ts - r / 2, r / 4);
  Rational b2p = P.near_point_in_coset(0, ts + r / 2, r / 4);

  std::optional<Rational> slo, shi;
  for (const auto* f : {&x, &y}) {
    if (auto h = f->support()) {
      slo = slo ? std::min(*slo, *h->lo) : *h->lo;
      shi = shi ? std::max(*shi, *h->hi) : *h->hi;
    }
  }
  if (!slo) return PLMap();
  // IP.A points strictly between the given bound and the end of I.
  auto below = [&](const Rational& v) {
    return I.lo ? P.near_point_in_coset(0, (*I.lo + v) / 2, (v - *I.lo) / 4) : P.near_point_in_coset(0, v - 1, 1);
  };
  auto above = [&](const Rational& v) {
    return I.hi ? P.near_point_in_coset(0, (*I.hi + v) / 2, (*I.hi - v) / 4) : P.near_point_in_coset(0, v + 1, 1);
  };
  Rational b1 = below(*slo), b2 = above(*shi);
  Rational a = below(std::min(b1, b1p)), c = above(std::max(b2, b2p));
  return detail::glue_fixed_ends({a, b1, b2, c}, {a, b1p, b2p, c}, P);
}

// [x, y] = ^{x y u^-1} z . ^{x u^-1} z^-1 . ^{u^-1} z . ^{y u^-1} z^-1
inline bool commutator_identity_check(const PLMap& x, const PLMap& y, const PLMap& z, const PLMap& u) {
  PLMap ui = inverse(u), zi = inverse(z);
  PLMap rhs = product({conj(product({x, y, ui}), z), conj(compose(x, ui), zi), conj(ui, z), conj(compose(y, ui), zi)});
  return commutator(x, y) == rhs;
}

}  // namespace plgroup
