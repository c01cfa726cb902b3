#pragma once
// The break homomorphism nu, its augmentation, the class map gamma and the
// abelianization-rank formulas.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plgroup/plmap.hpp"

namespace plgroup {

struct OrbitLabel {
  enum class Tag { left_endpoint, interior, right_endpoint };
  Tag tag = Tag::interior;
  Integer residue = 0;  // meaningful for interior labels only

  static OrbitLabel left() { return {Tag::left_endpoint, 0}; }
  static OrbitLabel right() { return {Tag::right_endpoint, 0}; }
  static OrbitLabel interior(const Integer& r) { return {Tag::interior, r}; }

  std::string str() const {
    switch (tag) {
      case Tag::left_endpoint: return "left";
      case Tag::right_endpoint: return "right";
      default: return "interior:" + residue.get_str();
    }
  }
  bool operator<(const OrbitLabel& o) const {
    if (tag != o.tag) return tag < o.tag;
    return residue < o.residue;
  }
  bool operator==(const OrbitLabel& o) const { return tag == o.tag && residue == o.residue; }
};

// Finitely supported map from orbit labels to exponent vectors; zero vectors
// are never stored.
class BreakVector {
 public:
  void add(const OrbitLabel& l, const IntVec& v) {
    auto [it, fresh] = terms_.try_emplace(l, IntVec(v.size(), 0));
    for (std::size_t i = 0; i < v.size(); ++i) it->second[i] += v[i];
    bool zero = true;
    for (const auto& x : it->second) zero = zero && x == 0;
    if (zero) terms_.erase(it);
  }
  BreakVector operator+(const BreakVector& o) const {
    BreakVector r = *this;
    for (const auto& [l, v] : o.terms_) r.add(l, v);
    return r;
  }
  bool operator==(const BreakVector& o) const { return terms_ == o.terms_; }
  bool empty() const { return terms_.empty(); }
  const std::map<OrbitLabel, IntVec>& terms() const& { return terms_; }
  // By value on temporaries so that `for (auto& t : nu(f, ctx).terms())` is safe.
  std::map<OrbitLabel, IntVec> terms() && { return std::move(terms_); }

 private:
  std::map<OrbitLabel, IntVec> terms_;
};

// Orbit label of a point of A in I. On the whole line every point lies in one orbit.
inline OrbitLabel orbit_label(const Rational& a, const GroupContext& ctx) {
  const auto& I = ctx.interval;
  if (I.kind == IntervalKind::line) return OrbitLabel::interior(0);
  if (I.lo && a == *I.lo) return OrbitLabel::left();
  if (I.hi && a == *I.hi) return OrbitLabel::right();
  return OrbitLabel::interior(ctx.P.coset(a));
}

inline BreakVector nu(const PLMap& f, const GroupContext& ctx) {
  require_member(f, ctx);
  BreakVector out;
  for (const auto& v : f.vertices()) {
    Rational jump = f.slope_right_of(v.x) / f.slope_left_of(v.x);
    out.add(orbit_label(v.x, ctx), ctx.P.p_exponents(jump));
  }
  return out;
}

inline IntVec epsilon(const BreakVector& v, std::size_t rank) {
  IntVec s(rank, 0);
  for (const auto& [l, e] : v.terms())
    for (std::size_t i = 0; i < rank; ++i) s[i] += e[i];
  return s;
}

// Class of f(a0) - a0 in A/(IP.A).
inline Integer gamma(const PLMap& f, const SlopeGroup& P, const Rational& a0 = 0) {
  GroupContext line{Interval::line(), P};
  require_member(f, line);
  P.require_A(a0);
  return P.coset(f(a0) - a0);
}

struct RankFormulas {
  long g_halfline_ab_rank = 0;
  std::optional<long> b_ab_rank;        // cyclic P only
  std::optional<long> g_pp_ab_rank;     // integer basis only
  std::optional<long> g_p_compact_ab_rank;  // single integer generator only
};

inline RankFormulas rank_formulas(const GroupContext& ctx) {
  const auto& P = ctx.P;
  RankFormulas r;
  long rk = static_cast<long>(P.rank());
  long d = to_long(P.delta());
  const auto& I = ctx.interval;
  bool half = I.kind == IntervalKind::half_line_up || I.kind == IntervalKind::half_line_down;
  bool end_in_A = !half || ctx.lo_in_A() || ctx.hi_in_A();
  r.g_halfline_ab_rank = rk * (end_in_A ? 1 + d : d);
  if (P.generators().size() == 1) r.b_ab_rank = d - 1;
  bool integers = P.independent();
  for (const auto& g : P.generators()) integers = integers && g.get_den() == 1;
  if (integers) r.g_pp_ab_rank = static_cast<long>(P.generators().size()) * (1 + d);
  if (integers && P.generators().size() == 1) r.g_p_compact_ab_rank = to_long(P.generators()[0].get_num());
  return r;
}

}  // namespace plgroup
