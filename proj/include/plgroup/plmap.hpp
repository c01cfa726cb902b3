#pragma once
// Finitary PL homeomorphisms of the real line with exact rational data.
// The group law is composition: compose(f, g) = f o g.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plgroup/ring.hpp"

namespace plgroup {

struct AffineMap {
  Rational slope = 1;
  Rational offset = 0;

  Rational operator()(const Rational& t) const { return slope * t + offset; }
  AffineMap after(const AffineMap& g) const { return {slope * g.slope, slope * g.offset + offset}; }
  AffineMap inverse() const { return {1 / slope, -offset / slope}; }
  bool is_identity() const { return slope == 1 && offset == 0; }
  bool operator==(const AffineMap&) const = default;

  static AffineMap through(const Rational& slope, const Rational& x, const Rational& y) {
    return {slope, y - slope * x};
  }
  static AffineMap translation(const Rational& a) { return {1, a}; }
  static AffineMap scaling(const Rational& s) { return {s, 0}; }
};

struct Vertex {
  Rational x, y;
  bool operator==(const Vertex&) const = default;
};

class PLMap {
 public:
  PLMap() = default;

  // Validates and canonicalizes. left must pass through the first vertex and
  // right through the last one.
  PLMap(std::vector<Vertex> vertices, AffineMap left, AffineMap right)
      : v_(std::move(vertices)), left_(std::move(left)), right_(std::move(right)) {
    if (left_.slope <= 0 || right_.slope <= 0) throw Error("NotMonotone", "slopes must be positive");
    for (std::size_t i = 1; i < v_.size(); ++i)
      if (!(v_[i - 1].x < v_[i].x) || !(v_[i - 1].y < v_[i].y))
        throw Error("NotMonotone", "vertices must increase strictly in both coordinates");
    if (v_.empty()) {
      if (!(left_ == right_)) throw Error("BadVertices", "vertex-free map must be affine");
    } else {
      if (left_(v_.front().x) != v_.front().y || right_(v_.back().x) != v_.back().y)
        throw Error("BadVertices", "affine ends do not meet the boundary vertices");
    }
    canonicalize();
  }

  // Interpolates the given points; slopes outside are the given end slopes.
  static PLMap interpolate_points(std::vector<Vertex> pts, const Rational& left_slope,
                                  const Rational& right_slope) {
    if (pts.empty()) throw Error("BadVertices", "need at least one point");
    AffineMap l = AffineMap::through(left_slope, pts.front().x, pts.front().y);
    AffineMap r = AffineMap::through(right_slope, pts.back().x, pts.back().y);
    return PLMap(std::move(pts), l, r);
  }

  // Interpolates points and is the identity outside [first.x, last.x]; the
  // endpoints must be fixed.
  static PLMap interpolate_fixing_ends(std::vector<Vertex> pts) {
    if (pts.front().x != pts.front().y || pts.back().x != pts.back().y)
      throw Error("BadVertices", "endpoints must be fixed");
    return interpolate_points(std::move(pts), 1, 1);
  }

  static PLMap affine(const AffineMap& a) { return PLMap({}, a, a); }
  static PLMap identity() { return PLMap(); }

  const std::vector<Vertex>& vertices() const { return v_; }
  const AffineMap& left() const { return left_; }
  const AffineMap& right() const { return right_; }
  bool is_identity() const { return v_.empty() && left_.is_identity(); }

  Rational operator()(const Rational& t) const { return eval(t); }

  Rational eval(const Rational& t) const {
    if (v_.empty() || t <= v_.front().x) return left_(t);
    if (t >= v_.back().x) return right_(t);
    std::size_t k = segment_index(t);
    const Vertex &a = v_[k], &b = v_[k + 1];
    return a.y + (b.y - a.y) * (t - a.x) / (b.x - a.x);
  }

  // Slope on the piece immediately to the right of t.
  Rational slope_right_of(const Rational& t) const {
    if (v_.empty() || t < v_.front().x) return left_.slope;
    if (t >= v_.back().x) return right_.slope;
    return segment_slope(segment_index(t));
  }

  // Slope on the piece immediately to the left of t.
  Rational slope_left_of(const Rational& t) const {
    if (v_.empty() || t <= v_.front().x) return left_.slope;
    if (t > v_.back().x) return right_.slope;
    auto it = std::lower_bound(v_.begin(), v_.end(), t, [](const Vertex& a, const Rational& x) { return a.x < x; });
    return segment_slope(static_cast<std::size_t>(it - v_.begin()) - 1);
  }

  // Slopes of all pieces from left to right, including the two affine ends.
  std::vector<Rational> slopes() const {
    std::vector<Rational> s{left_.slope};
    for (std::size_t i = 0; i + 1 < v_.size(); ++i) s.push_back(segment_slope(i));
    if (!v_.empty()) s.push_back(right_.slope);
    return s;
  }

  std::vector<Rational> breaks() const {
    std::vector<Rational> b;
    for (const auto& p : v_) b.push_back(p.x);
    return b;
  }

  Rational segment_slope(std::size_t i) const {
    return (v_[i + 1].y - v_[i].y) / (v_[i + 1].x - v_[i].x);
  }

  // Convex hull of the support; nullopt bounds are infinite. Returns nullopt
  // for the identity.
  struct Hull {
    std::optional<Rational> lo, hi;
  };
  std::optional<Hull> support() const {
    if (is_identity()) return std::nullopt;
    Hull h;
    if (left_.is_identity()) h.lo = v_.front().x;
    if (right_.is_identity()) h.hi = v_.back().x;
    return h;
  }

  bool operator==(const PLMap& o) const { return v_ == o.v_ && left_ == o.left_ && right_ == o.right_; }

 private:
  std::size_t segment_index(const Rational& t) const {
    auto it = std::upper_bound(v_.begin(), v_.end(), t, [](const Rational& x, const Vertex& a) { return x < a.x; });
    return static_cast<std::size_t>(it - v_.begin()) - 1;
  }

  void canonicalize() {
    std::vector<Vertex> out;
    Rational in = left_.slope;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      Rational next = i + 1 < v_.size() ? (v_[i + 1].y - v_[i].y) / (v_[i + 1].x - v_[i].x) : right_.slope;
      if (next != in) out.push_back(v_[i]);
      in = next;
    }
    v_ = std::move(out);
    if (v_.empty()) right_ = left_;
  }

  std::vector<Vertex> v_;
  AffineMap left_, right_;
};

inline Rational eval(const PLMap& f, const Rational& t) { return f.eval(t); }

inline PLMap compose(const PLMap& f, const PLMap& g) {
  std::vector<Rational> xs = g.breaks();
  // Preimages under g of the breaks of f.
  for (const auto& p : f.vertices()) {
    const Rational& y = p.x;
    // invert g at y
    const auto& gv = g.vertices();
    Rational x;
    if (gv.empty() || y <= gv.front().y)
      x = g.left().inverse()(y);
    else if (y >= gv.back().y)
      x = g.right().inverse()(y);
    else {
      auto it = std::upper_bound(gv.begin(), gv.end(), y, [](const Rational& t, const Vertex& a) { return t < a.y; });
      const Vertex& b = *it;
      const Vertex& a = *(it - 1);
      x = a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y);
    }
    xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Vertex> pts;
  pts.reserve(xs.size());
  for (const auto& x : xs) pts.push_back({x, f.eval(g.eval(x))});
  return PLMap(std::move(pts), f.left().after(g.left()), f.right().after(g.right()));
}

inline PLMap inverse(const PLMap& f) {
  std::vector<Vertex> pts;
  pts.reserve(f.vertices().size());
  for (const auto& p : f.vertices()) pts.push_back({p.y, p.x});
  return PLMap(std::move(pts), f.left().inverse(), f.right().inverse());
}

inline bool equals(const PLMap& f, const PLMap& g) { return f == g; }

// ^g h = g o h o g^-1
inline PLMap conj(const PLMap& g, const PLMap& h) { return compose(compose(g, h), inverse(g)); }

// [f, g] = f g f^-1 g^-1
inline PLMap commutator(const PLMap& f, const PLMap& g) {
  return compose(compose(f, g), compose(inverse(f), inverse(g)));
}

inline PLMap power(const PLMap& f, long n) {
  PLMap base = n < 0 ? inverse(f) : f;
  PLMap r;
  for (long i = 0; i < (n < 0 ? -n : n); ++i) r = compose(r, base);
  return r;
}

inline PLMap product(const std::vector<PLMap>& fs) {
  PLMap r;
  for (const auto& f : fs) r = compose(r, f);
  return r;
}

// Elementary maps.

// t -> p t + a
inline PLMap aff(const Rational& a, const Rational& p) { return PLMap::affine({p, a}); }

// Identity for t <= a, then p(t - a) + a.
inline PLMap g_map(const Rational& a, const Rational& p) {
  if (p == 1) return PLMap();
  return PLMap({{a, a}}, AffineMap{}, AffineMap::through(p, a, a));
}

// Identity below a, slope p on [a, a+b], translation by (p-1)b beyond.
inline PLMap f_map(const Rational& a, const Rational& b, const Rational& p) {
  if (b <= 0) throw Error("BadParameters", "f(a,b;p) needs b > 0");
  return PLMap({{a, a}, {a + b, a + p * b}}, AffineMap{}, AffineMap::translation((p - 1) * b));
}

// Bounded element with slopes 1, p, 1/p, 1 and breaks a, a+D, a+(p+1)D.
inline PLMap b_map(const Rational& a, const Rational& d, const Rational& p) {
  if (d <= 0) throw Error("BadParameters", "b(a,D;p) needs D > 0");
  if (p == 1) return PLMap();
  Rational c = a + (p + 1) * d;
  return PLMap({{a, a}, {a + d, a + p * d}, {c, c}}, AffineMap{}, AffineMap{});
}

// Intervals and contexts.

enum class IntervalKind { line, half_line_up, half_line_down, compact };

struct Interval {
  IntervalKind kind = IntervalKind::line;
  std::optional<Rational> lo, hi;

  static Interval line() { return {}; }
  static Interval up(const Rational& a) { return {IntervalKind::half_line_up, a, std::nullopt}; }
  static Interval down(const Rational& c) { return {IntervalKind::half_line_down, std::nullopt, c}; }
  static Interval compact(const Rational& a, const Rational& c) {
    if (!(a < c)) throw Error("BadContext", "compact interval needs a < c");
    return {IntervalKind::compact, a, c};
  }

  bool contains(const Rational& t) const { return (!lo || *lo <= t) && (!hi || t <= *hi); }
  bool interior(const Rational& t) const { return (!lo || *lo < t) && (!hi || t < *hi); }
};

struct GroupContext {
  Interval interval;
  SlopeGroup P;

  bool lo_in_A() const { return interval.lo && P.in_A(*interval.lo); }
  bool hi_in_A() const { return interval.hi && P.in_A(*interval.hi); }
};

struct MemberResult {
  bool ok = true;
  std::string diagnostic;  // empty, or the first violated condition
  explicit operator bool() const { return ok; }
};

inline MemberResult member(const PLMap& f, const GroupContext& ctx) {
  const auto& I = ctx.interval;
  const auto& v = f.vertices();
  if (I.lo && !(f.left().is_identity() && (v.empty() || v.front().x >= *I.lo)))
    return {false, "SupportNotInI"};
  if (I.hi && !(f.right().is_identity() && (v.empty() || v.back().x <= *I.hi)))
    return {false, "SupportNotInI"};
  for (const auto& s : f.slopes())
    if (!ctx.P.in_P(s)) return {false, "SlopeNotInP"};
  for (const auto& p : v)
    if (!ctx.P.in_A(p.x) || !ctx.P.in_A(p.y)) return {false, "VertexNotInA"};
  if (v.empty() && !ctx.P.in_A(f.left().offset)) return {false, "VertexNotInA"};
  return {};
}

inline void require_member(const PLMap& f, const GroupContext& ctx) {
  auto r = member(f, ctx);
  if (!r) throw Error("NotMember", "not a member of the context group: " + r.diagnostic);
}

struct EndpointData {
  AffineMap lambda, rho;
  Rational sigma_minus, sigma_plus, tau_minus, tau_plus;
};

// Germs at the ends of I. For a bounded end the germ is the affine map that
// agrees with f near that endpoint and tau is 0.
inline EndpointData endpoint_data(const PLMap& f, const GroupContext& ctx) {
  require_member(f, ctx);
  const auto& I = ctx.interval;
  EndpointData d;
  if (I.lo) {
    d.sigma_minus = f.slope_right_of(*I.lo);
    d.lambda = AffineMap::through(d.sigma_minus, *I.lo, *I.lo);
    d.tau_minus = 0;
  } else {
    d.lambda = f.left();
    d.sigma_minus = d.lambda.slope;
    d.tau_minus = d.lambda.offset;
  }
  if (I.hi) {
    d.sigma_plus = f.slope_left_of(*I.hi);
    d.rho = AffineMap::through(d.sigma_plus, *I.hi, *I.hi);
    d.tau_plus = 0;
  } else {
    d.rho = f.right();
    d.sigma_plus = d.rho.slope;
    d.tau_plus = d.rho.offset;
  }
  return d;
}

// The six interval types: 1 line; 2 half line with endpoint in A; 3 half line
// with endpoint outside A; 4 compact, both endpoints in A; 5 exactly one;
// 6 neither.
inline int interval_type(const GroupContext& ctx) {
  const auto& I = ctx.interval;
  int in = (ctx.lo_in_A() ? 1 : 0) + (ctx.hi_in_A() ? 1 : 0);
  switch (I.kind) {
    case IntervalKind::line: return 1;
    case IntervalKind::half_line_up:
    case IntervalKind::half_line_down: return in == 1 ? 2 : 3;
    case IntervalKind::compact: return in == 2 ? 4 : (in == 1 ? 5 : 6);
  }
  return 0;
}

}  // namespace plgroup
