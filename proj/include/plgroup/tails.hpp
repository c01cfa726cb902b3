#pragma once
// Infinitary PL homeomorphisms with self-similar tails, conjugation of
// finitary maps by them, and the classification of finite-index subgroups
// of Z^2 that describe subgroups of G([0,b]; A, P) containing B for cyclic P.

#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "plgroup/construct.hpp"
#include "plgroup/lattice.hpp"

namespace plgroup {

inline AffineMap affine_power(const AffineMap& a, long k) {
  AffineMap base = k < 0 ? a.inverse() : a, r;
  for (long i = 0; i < (k < 0 ? -k : k); ++i) r = base.after(r);
  return r;
}

// Conjugate of a by the reflection t -> c - t.
inline AffineMap reflect_affine(const AffineMap& a, const Rational& c) {
  return {a.slope, c - a.slope * c - a.offset};
}

// Fixed point of a non-translation affine map; nullopt for translations.
inline std::optional<Rational> fixed_point(const AffineMap& a) {
  if (a.slope == 1) return std::nullopt;
  return Rational(a.offset / (1 - a.slope));
}

// Beyond the core the map satisfies f(beta(t)) = alpha(f(t)). beta moves
// points away from the core, towards the end of the domain.
struct TailRule {
  AffineMap beta, alpha;
};

class TailMap {
 public:
  TailMap(std::vector<Vertex> core, std::optional<TailRule> left, std::optional<TailRule> right,
          std::optional<AffineMap> left_ext = std::nullopt, std::optional<AffineMap> right_ext = std::nullopt)
      : core_(std::move(core)), left_(std::move(left)), right_(std::move(right)) {
    if (core_.size() < 2) throw Error("BadParameters", "a tail map needs at least two core vertices");
    for (std::size_t i = 1; i < core_.size(); ++i)
      if (!(core_[i - 1].x < core_[i].x) || !(core_[i - 1].y < core_[i].y))
        throw Error("NotMonotone", "core vertices must increase strictly");
    const Vertex &u = core_.front(), &v = core_.back();
    left_ext_ = left_ext ? *left_ext : AffineMap::through(slope(0), u.x, u.y);
    right_ext_ = right_ext ? *right_ext : AffineMap::through(slope(core_.size() - 2), v.x, v.y);
    if (left_ext_(u.x) != u.y || right_ext_(v.x) != v.y)
      throw Error("BadVertices", "extensions must pass through the end vertices");
    if (right_) {
      const auto& r = *right_;
      Rational start = r.beta.inverse()(v.x);
      if (!(r.beta.slope > 0 && r.alpha.slope > 0 && r.beta(v.x) > v.x && start >= u.x))
        throw Error("BadParameters", "right tail rule must move outward with its fundamental domain in the core");
      if (r.alpha(core_eval(start)) != v.y) throw Error("BadParameters", "right tail rule does not weld to the core");
    }
    if (left_) {
      const auto& r = *left_;
      Rational start = r.beta.inverse()(u.x);
      if (!(r.beta.slope > 0 && r.alpha.slope > 0 && r.beta(u.x) < u.x && start <= v.x))
        throw Error("BadParameters", "left tail rule must move outward with its fundamental domain in the core");
      if (r.alpha(core_eval(start)) != u.y) throw Error("BadParameters", "left tail rule does not weld to the core");
    }
  }

  const std::vector<Vertex>& core() const { return core_; }
  const std::optional<TailRule>& left_rule() const { return left_; }
  const std::optional<TailRule>& right_rule() const { return right_; }
  const AffineMap& left_ext() const { return left_ext_; }
  const AffineMap& right_ext() const { return right_ext_; }

  // Ends of the open domain and range; nullopt means infinite.
  std::optional<Rational> domain_lo() const { return left_ ? fixed_point(left_->beta) : std::nullopt; }
  std::optional<Rational> domain_hi() const { return right_ ? fixed_point(right_->beta) : std::nullopt; }
  std::optional<Rational> range_lo() const { return left_ ? fixed_point(left_->alpha) : std::nullopt; }
  std::optional<Rational> range_hi() const { return right_ ? fixed_point(right_->alpha) : std::nullopt; }

  bool in_domain(const Rational& t) const {
    auto lo = domain_lo(), hi = domain_hi();
    return (!lo || *lo < t) && (!hi || t < *hi);
  }

  Rational operator()(const Rational& t) const { return eval(t); }

  Rational eval(const Rational& t) const {
    if (!in_domain(t)) throw Error("OutsideDomain", "point outside the domain of the tail map: " + t.get_str());
    const Vertex &u = core_.front(), &v = core_.back();
    if (t > v.x) {
      if (!right_) return right_ext_(t);
      Rational s = t;
      long k = 0;
      AffineMap back = right_->beta.inverse();
      while (s > v.x) s = back(s), ++k;
      return affine_power(right_->alpha, k)(core_eval(s));
    }
    if (t < u.x) {
      if (!left_) return left_ext_(t);
      Rational s = t;
      long k = 0;
      AffineMap back = left_->beta.inverse();
      while (s < u.x) s = back(s), ++k;
      return affine_power(left_->alpha, k)(core_eval(s));
    }
    return core_eval(t);
  }

  TailMap inverse() const {
    std::vector<Vertex> c;
    for (const auto& p : core_) c.push_back({p.y, p.x});
    auto swap = [](const std::optional<TailRule>& r) -> std::optional<TailRule> {
      if (!r) return std::nullopt;
      return TailRule{r->alpha, r->beta};
    };
    return TailMap(std::move(c), swap(left_), swap(right_), left_ext_.inverse(), right_ext_.inverse());
  }

  // Conjugate by t -> c - t on both sides.
  TailMap reflect(const Rational& c) const {
    std::vector<Vertex> v;
    for (auto it = core_.rbegin(); it != core_.rend(); ++it) v.push_back({c - it->x, c - it->y});
    auto refl = [&](const std::optional<TailRule>& r) -> std::optional<TailRule> {
      if (!r) return std::nullopt;
      return TailRule{reflect_affine(r->beta, c), reflect_affine(r->alpha, c)};
    };
    return TailMap(std::move(v), refl(right_), refl(left_), reflect_affine(right_ext_, c), reflect_affine(left_ext_, c));
  }

  // Break candidates of the map in [lo, hi]: core vertices and their images
  // under the tail rules.
  std::vector<Rational> vertices_between(const Rational& lo, const Rational& hi) const {
    std::vector<Rational> out;
    for (const auto& p : core_)
      if (lo <= p.x && p.x <= hi) out.push_back(p.x);
    const Rational &u = core_.front().x, &v = core_.back().x;
    if (right_ && hi > v) {
      Rational start = right_->beta.inverse()(v);
      std::vector<Rational> cell;
      for (const auto& p : core_)
        if (start < p.x && p.x <= v) cell.push_back(p.x);
      for (Rational s = start; s < hi; s = right_->beta(s))
        for (auto& x : cell) {
          x = right_->beta(x);
          if (lo <= x && x <= hi) out.push_back(x);
        }
    }
    if (left_ && lo < u) {
      Rational start = left_->beta.inverse()(u);
      std::vector<Rational> cell;
      for (const auto& p : core_)
        if (u <= p.x && p.x < start) cell.push_back(p.x);
      for (Rational s = start; s > lo; s = left_->beta(s))
        for (auto& x : cell) {
          x = left_->beta(x);
          if (lo <= x && x <= hi) out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  Rational slope(std::size_t i) const {
    return (core_[i + 1].y - core_[i].y) / (core_[i + 1].x - core_[i].x);
  }

  Rational core_eval(const Rational& t) const {
    auto it = std::upper_bound(core_.begin(), core_.end(), t, [](const Rational& x, const Vertex& a) { return x < a.x; });
    std::size_t k = it == core_.begin() ? 0 : static_cast<std::size_t>(it - core_.begin()) - 1;
    if (k + 1 >= core_.size()) k = core_.size() - 2;
    const Vertex &a = core_[k], &b = core_[k + 1];
    return a.y + (b.y - a.y) * (t - a.x) / (b.x - a.x);
  }

  std::vector<Vertex> core_;
  std::optional<TailRule> left_, right_;
  AffineMap left_ext_, right_ext_;
};

// Mirror image t -> c - t of a PL map.
inline PLMap reflect_map(const PLMap& f, const Rational& c) {
  std::vector<Vertex> v;
  for (auto it = f.vertices().rbegin(); it != f.vertices().rend(); ++it) v.push_back({c - it->x, c - it->y});
  return PLMap(std::move(v), reflect_affine(f.right(), c), reflect_affine(f.left(), c));
}

// Exact k with base^k = x, if any.
inline std::optional<long> exact_log(const Rational& x, const Rational& base) {
  if (x <= 0 || base <= 0 || base == 1) return std::nullopt;
  if (x == 1) return 0L;
  double est = std::log(std::abs(x.get_d())) / std::log(base.get_d());
  if (!std::isfinite(est)) return std::nullopt;
  long k0 = std::lround(est);
  for (long k : {k0, k0 - 1, k0 + 1})
    if (rpow(base, k) == x) return k;
  return std::nullopt;
}

namespace detail {

struct TailGerm {
  Rational s0;                     // the conjugate is `outer` on T([s0, end))
  AffineMap outer;
  std::optional<Rational> range_end;  // finite end of T's range on this side
};

// Right-hand behaviour of T f T^-1.
inline TailGerm right_germ(const TailMap& T, const PLMap& f) {
  auto end = T.domain_hi();
  std::optional<Rational> last_break;
  for (const auto& p : f.vertices())
    if (T.in_domain(p.x)) last_break = p.x;
  auto not_affine = [] { return Error("NotEventuallyAffine", "map is not a power of the tail step near the end"); };
  const Rational v = T.core().back().x;
  TailGerm g;
  if (!T.right_rule()) {
    g.s0 = std::max(v, inverse(f)(v));
    if (last_break) g.s0 = std::max(g.s0, *last_break);
    g.outer = T.right_ext().after(f.right()).after(T.right_ext().inverse());
    return g;
  }
  const TailRule& r = *T.right_rule();
  long k;
  if (!end) {
    // beta is a translation by a; f must be a translation by k a.
    const AffineMap& fr = f.right();
    if (fr.slope != 1) throw not_affine();
    Rational q = fr.offset / r.beta.offset;
    if (q.get_den() != 1) throw not_affine();
    k = to_long(q.get_num());
  } else {
    if (f(*end) != *end) throw not_affine();
    auto e = exact_log(f.slope_left_of(*end), r.beta.slope);
    if (!e) throw not_affine();
    k = *e;
  }
  Rational start = r.beta.inverse()(v);
  g.s0 = std::max(start, affine_power(r.beta, -k)(start));
  if (last_break) g.s0 = std::max(g.s0, *last_break);
  g.outer = affine_power(r.alpha, k);
  g.range_end = T.range_hi();
  return g;
}

inline TailGerm left_germ(const TailMap& T, const PLMap& f) {
  TailGerm g = right_germ(T.reflect(0), reflect_map(f, 0));
  g.s0 = -g.s0;
  g.outer = reflect_affine(g.outer, 0);
  if (g.range_end) g.range_end = -*g.range_end;
  return g;
}

}  // namespace detail

// T o f o T^-1 as a finitary map of the range of T. f must be a power of the
// tail step near every end governed by a rule.
inline PLMap conj(const TailMap& T, const PLMap& f) {
  detail::TailGerm L = detail::left_germ(T, f), R = detail::right_germ(T, f);
  if (R.s0 < L.s0) R.s0 = L.s0;
  std::vector<Rational> s{L.s0, R.s0};
  for (const auto& x : T.vertices_between(L.s0, R.s0)) s.push_back(x);
  for (const auto& p : f.vertices())
    if (L.s0 <= p.x && p.x <= R.s0) s.push_back(p.x);
  PLMap finv = inverse(f);
  for (const auto& y : T.vertices_between(f(L.s0), f(R.s0))) s.push_back(finv(y));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<Vertex> pts;
  if (L.range_end) pts.push_back({*L.range_end, *L.range_end});
  for (const auto& x : s) pts.push_back({T(x), T(f(x))});
  if (R.range_end) pts.push_back({*R.range_end, *R.range_end});
  AffineMap left = L.range_end ? AffineMap{} : L.outer;
  AffineMap right = R.range_end ? AffineMap{} : R.outer;
  return PLMap(std::move(pts), left, right);
}

// Conjugate by t -> b - t of a map supported in [0, b].
inline PLMap reflect_conj(const PLMap& f, const Rational& b) {
  if (auto h = f.support(); h && (!h->lo || !h->hi || *h->lo < 0 || *h->hi > b))
    throw Error("SupportOutside", "support must lie in [0, b]");
  return reflect_map(f, b);
}

// ---------------------------------------------------------------------------
// The specific tail maps. Constructors for the half-line and line embeddings
// take the generator p > 1; those acting on ]0, b] take either generator and
// use the one below 1 internally.

namespace detail {

inline Rational below_one(const Rational& p) {
  if (p <= 0 || p == 1) throw Error("BadParameters", "slope generator must be positive and != 1");
  return p < 1 ? p : Rational(1 / p);
}

inline Rational above_one(const Rational& p) { return 1 / below_one(p); }

inline void require_positive_in_A(const Rational& b, const Rational& p) {
  SlopeGroup P({p});
  if (b <= 0 || !P.in_A(b)) throw Error("BadParameters", "b must be a positive element of A");
}

}  // namespace detail

// [0, oo) -> [0, b[ interpolating (j (p-1) b, (1 - p^-j) b).
inline TailMap make_phi1(const Rational& b, const Rational& p_in) {
  Rational p = detail::above_one(p_in);
  detail::require_positive_in_A(b, p);
  Rational step = (p - 1) * b;
  return TailMap({{0, 0}, {step, b - b / p}}, std::nullopt,
                 TailRule{AffineMap::translation(step), AffineMap{1 / p, b - b / p}});
}

// R -> ]0, oo[ interpolating (-j (p-1) b, p^-j b), translation by b on [0, oo).
inline TailMap make_psi2(const Rational& b, const Rational& p_in) {
  Rational p = detail::above_one(p_in);
  detail::require_positive_in_A(b, p);
  Rational step = (p - 1) * b;
  return TailMap({{-step, b / p}, {0, b}}, TailRule{AffineMap::translation(-step), AffineMap::scaling(1 / p)},
                 std::nullopt, std::nullopt, AffineMap::translation(b));
}

// ]0, b] -> ]0, bbar] interpolating (b_i, bbar_i); needs p b < bbar < b.
inline TailMap make_rescale(const Rational& b, const Rational& bbar, const Rational& p_in) {
  Rational p = detail::below_one(p_in);
  detail::require_positive_in_A(b, p);
  detail::require_positive_in_A(bbar, p);
  if (!(p * b < bbar && bbar < b)) throw Error("BadParameters", "need p b < bbar < b");
  return TailMap({{p * b, p * bbar}, {bbar, bbar + p * (bbar - b)}, {b, bbar}},
                 TailRule{AffineMap::scaling(p), AffineMap::scaling(p)}, std::nullopt, std::nullopt,
                 AffineMap::translation(bbar - b));
}

// ]0, b] -> ]0, b] mapping [p^(j+1) b, p^j b] onto [p^(m(j+1)) b, p^(mj) b]
// by rescaled copies of one f with f([p b, b]) = [p^m b, b].
inline TailMap make_mu_m(long m, const Rational& b, const Rational& p_in) {
  if (m < 1) throw Error("BadParameters", "m must be >= 1");
  Rational p = detail::below_one(p_in);
  detail::require_positive_in_A(b, p);
  Rational pm = rpow(p, m);
  std::vector<Vertex> core{{p * b, pm * b}};
  if (m > 1) {
    PLMap f = map_interval(p * b, b, pm * b, b, SlopeGroup({p}));
    for (const auto& v : f.vertices())
      if (p * b < v.x && v.x < b) core.push_back(v);
  }
  core.push_back({b, b});
  return TailMap(std::move(core), TailRule{AffineMap::scaling(p), AffineMap::scaling(pm)}, std::nullopt,
                 std::nullopt, AffineMap{});
}

// The mirror image of mu_n under t -> b - t; it scales the right exponent.
inline TailMap make_nu_n(long n, const Rational& b, const Rational& p) { return make_mu_m(n, b, p).reflect(b); }

// (log_p sigma_-, log_p sigma_+) for p the generator below 1.
inline std::pair<long, long> pi(const PLMap& f, const Rational& p_in, const Rational& b) {
  Rational p = detail::below_one(p_in);
  auto j = exact_log(f.slope_right_of(0), p), l = exact_log(f.slope_left_of(b), p);
  if (!j || !l) throw Error("NotMember", "end slopes are not powers of p");
  return {*j, *l};
}

inline std::pair<long, long> pi_of_mu(long m, long n, const PLMap& f, const Rational& p, const Rational& b) {
  return pi(conj(make_mu_m(m, b, p), conj(make_nu_n(n, b, p), f)), p, b);
}

// ---------------------------------------------------------------------------
// Finite-index subgroups of Z^2

struct LatticeSubgroup {
  std::vector<std::array<long, 2>> generators;

  LatticeSubgroup swapped() const {
    LatticeSubgroup s;
    for (const auto& g : generators) s.generators.push_back({g[1], g[0]});
    return s;
  }
};

struct LatticeParams {
  long m = 1, n = 1, c = 1, d = 0, e = 0;  // d, e reduced mod c
  long index = 1;
  bool operator==(const LatticeParams&) const = default;
};

namespace detail {

// Echelon rows (a, y), (0, z) with a, z > 0.
inline std::pair<std::array<long, 2>, long> lattice_echelon(const LatticeSubgroup& q) {
  IntMatrix rows;
  for (const auto& g : q.generators) rows.push_back({Integer(g[0]), Integer(g[1])});
  Echelon e = echelon(rows, 2);
  if (e.rank() < 2) throw Error("NotFiniteIndex", "subgroup has infinite index in Z^2");
  IntVec r0 = e.h[0], r1 = e.h[1];
  if (r0[0] < 0) r0[0] = -r0[0], r0[1] = -r0[1];
  return {{to_long(r0[0]), to_long(r0[1])}, to_long(abs(r1[1]))};
}

inline long mod_pos(long a, long c) { return ((a % c) + c) % c; }

}  // namespace detail

inline LatticeParams params(const LatticeSubgroup& q) {
  auto [row, n2] = detail::lattice_echelon(q);           // (m, y), (0, c n)
  auto [srow, m2] = detail::lattice_echelon(q.swapped());  // (n, x), (0, c m)
  LatticeParams r;
  r.m = row[0];
  r.n = srow[0];
  r.c = m2 / r.m;
  if (r.c * r.m != m2 || r.c * r.n != n2) throw Error("Internal", "inconsistent lattice parameters");
  r.index = r.m * n2;
  r.d = detail::mod_pos(srow[1] / r.m, r.c);
  r.e = detail::mod_pos(row[1] / r.n, r.c);
  return r;
}

inline bool iso_decide(const LatticeSubgroup& q, const LatticeSubgroup& qbar) {
  LatticeParams a = params(q), b = params(qbar);
  if (a.c != b.c) return false;
  if (a.c == 1) return true;
  return a.d == b.d || a.d == b.e;
}

}  // namespace plgroup
