#pragma once
// Regular and standard subdivisions of [0,1] for an integer generating set,
// tree-pair factorization of elements of G[P] and their decomposition into
// the generators f, g, t and h.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "plgroup/plmap.hpp"

namespace plgroup {

// Sorted set of integers > 1.
using PSet = std::vector<long>;

inline PSet make_pset(std::vector<long> ps) {
  if (ps.empty()) throw Error("BadParameter", "empty generating set");
  for (long p : ps)
    if (p < 2) throw Error("BadParameter", "generators must be integers > 1").with("p", std::to_string(p));
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

inline GroupContext unit_context(const PSet& ps) {
  std::vector<Rational> g(ps.begin(), ps.end());
  return {Interval::compact(0, 1), SlopeGroup(std::move(g))};
}

// ---------------------------------------------------------------------------
// Codes, trees and subdivisions

struct CodeStep {
  long n;  // 1-based index of the interval being subdivided
  long p;
  bool operator==(const CodeStep&) const = default;
};
using CodeSeq = std::vector<CodeStep>;

// A subdivision together with the code that witnesses its regularity.
struct Subdivision {
  std::vector<Rational> points;
  CodeSeq code;
};

// Subdivision tree: a leaf is an interval, an inner node splits its interval
// into p equal parts.
struct Tree {
  long p = 0;
  std::vector<Tree> kids;

  bool leaf() const { return p == 0; }
  static Tree split(long p) {
    Tree t;
    t.p = p;
    t.kids.resize(static_cast<std::size_t>(p));
    return t;
  }
  long leaves() const {
    if (leaf()) return 1;
    long n = 0;
    for (const auto& k : kids) n += k.leaves();
    return n;
  }
  bool operator==(const Tree&) const = default;
};

namespace detail {

inline void tree_points(const Tree& t, const Rational& x, const Rational& len, std::vector<Rational>& out) {
  if (t.leaf()) {
    out.push_back(x);
    return;
  }
  Rational step = len / t.p;
  for (long i = 0; i < t.p; ++i) tree_points(t.kids[static_cast<std::size_t>(i)], x + step * i, step, out);
}

// Finds the n-th leaf (1-based) counting from the left; decrements n as it goes.
inline Tree* nth_leaf(Tree& t, long& n) {
  if (t.leaf()) return --n == 0 ? &t : nullptr;
  for (auto& k : t.kids)
    if (Tree* r = nth_leaf(k, n)) return r;
  return nullptr;
}

inline void tree_code(const Tree& t, long left_leaves, CodeSeq& out) {
  if (t.leaf()) return;
  out.push_back({left_leaves + 1, t.p});
  for (const auto& k : t.kids) {
    tree_code(k, left_leaves, out);
    left_leaves += k.leaves();
  }
}

}  // namespace detail

inline std::vector<Rational> tree_points(const Tree& t) {
  std::vector<Rational> out;
  detail::tree_points(t, 0, 1, out);
  out.push_back(1);
  return out;
}

inline Tree tree_from_code(const CodeSeq& code) {
  Tree t;
  for (std::size_t i = 0; i < code.size(); ++i) {
    const auto& s = code[i];
    if (s.p < 2) throw Error("BadParameter", "subdivision factor must be > 1").with("p", std::to_string(s.p));
    if (i == 0 && s.n != 1) throw Error("BadIndex", "first step must subdivide interval 1").with("n", std::to_string(s.n));
    long n = s.n;
    Tree* leaf = n >= 1 ? detail::nth_leaf(t, n) : nullptr;
    if (!leaf)
      throw Error("BadIndex", "interval index out of range").with("n", std::to_string(s.n)).with("step", std::to_string(i + 1));
    *leaf = Tree::split(s.p);
  }
  return t;
}

// Preorder code: each node is split before its children, left to right.
inline CodeSeq tree_code(const Tree& t) {
  CodeSeq out;
  detail::tree_code(t, 0, out);
  return out;
}

inline Subdivision from_code(const CodeSeq& code) { return {tree_points(tree_from_code(code)), code}; }

inline CodeSeq standard_code(const std::vector<long>& ps) {
  CodeSeq c;
  for (long p : ps) c.push_back({1, p});
  return c;
}

inline Subdivision standard(const std::vector<long>& ps) { return from_code(standard_code(ps)); }

inline PLMap interpolate_points01(const std::vector<Rational>& d, const std::vector<Rational>& d2) {
  if (d.size() != d2.size())
    throw Error("LengthMismatch", "subdivisions have different lengths")
        .with("left", std::to_string(d.size()))
        .with("right", std::to_string(d2.size()));
  std::vector<Vertex> pts;
  pts.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) pts.push_back({d[i], d2[i]});
  return PLMap::interpolate_fixing_ends(std::move(pts));
}

inline PLMap interpolate(const Subdivision& d, const Subdivision& d2) { return interpolate_points01(d.points, d2.points); }

// ---------------------------------------------------------------------------
// The monoid generated by P

namespace detail {

// Factorization of x as a product of elements of ps, if one exists.
class MonoidFactorizer {
 public:
  explicit MonoidFactorizer(const PSet& ps) : ps_(ps) {}

  std::optional<std::vector<long>> factor(const Integer& x) {
    if (x < 1) return std::nullopt;
    if (x == 1) return std::vector<long>{};
    auto it = memo_.find(x);
    if (it != memo_.end()) return it->second;
    std::optional<std::vector<long>> r;
    for (auto p = ps_.rbegin(); p != ps_.rend() && !r; ++p) {
      if (mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(*p))) {
        Integer y = x / *p;
        if (auto s = factor(y)) {
          s->push_back(*p);
          r = std::move(s);
        }
      }
    }
    memo_.emplace(x, r);
    return r;
  }

  // Smallest k in the monoid with pred(k); the search is unbounded, so pred
  // must be satisfiable.
  template <class Pred>
  Integer smallest(Pred pred) {
    std::priority_queue<Integer, std::vector<Integer>, std::greater<Integer>> heap;
    std::set<Integer> seen{Integer(1)};
    heap.push(1);
    while (true) {
      Integer k = heap.top();
      heap.pop();
      if (pred(k)) return k;
      for (long p : ps_) {
        Integer n = k * p;
        if (seen.insert(n).second) heap.push(n);
      }
    }
  }

 private:
  PSet ps_;
  std::map<Integer, std::optional<std::vector<long>>> memo_;
};

inline void split_chain(Tree& t, const std::vector<long>& factors, std::size_t i = 0) {
  if (i == factors.size()) return;
  t = Tree::split(factors[i]);
  for (auto& k : t.kids) split_chain(k, factors, i + 1);
}

// Refines a leaf covering [x, x+len] until every target point inside it is a
// subdivision point. Each split strictly reduces the denominator of the
// relative position of the first interior target.
inline void refine_to_contain(Tree& t, const Rational& x, const Rational& len, const std::vector<Rational>& targets,
                              const PSet& ps) {
  auto lo = std::upper_bound(targets.begin(), targets.end(), x);
  if (lo == targets.end() || *lo >= x + len) return;
  if (t.leaf()) {
    Rational rel = (*lo - x) / len;
    Integer v = rel.get_den();
    long best = 0;
    Integer best_g = 1;
    for (long p : ps) {
      Integer g = gcd(v, Integer(p));
      if (g > best_g) best_g = g, best = p;
    }
    if (best == 0) throw Error("NotMember", "point not reachable by regular subdivision").with("t", lo->get_str());
    t = Tree::split(best);
  }
  Rational step = len / t.p;
  for (long i = 0; i < t.p; ++i)
    refine_to_contain(t.kids[static_cast<std::size_t>(i)], x + step * i, step, targets, ps);
}

struct LeafInfo {
  Rational x, len;
  Integer inv_len;             // 1 / len
  std::vector<long> path;      // split factors from the root
  Tree* node;
};

inline void collect_leaves(Tree& t, const Rational& x, const Rational& len, std::vector<long>& path,
                           std::vector<LeafInfo>& out) {
  if (t.leaf()) {
    Integer inv = 1;
    for (long p : path) inv *= p;
    out.push_back({x, len, inv, path, &t});
    return;
  }
  Rational step = len / t.p;
  path.push_back(t.p);
  for (long i = 0; i < t.p; ++i) collect_leaves(t.kids[static_cast<std::size_t>(i)], x + step * i, step, path, out);
  path.pop_back();
}

inline std::vector<LeafInfo> leaves_of(Tree& t) {
  std::vector<LeafInfo> out;
  std::vector<long> path;
  collect_leaves(t, 0, 1, path, out);
  return out;
}

// Nodes whose children are all leaves, keyed by the index of their first leaf.
inline void carets(Tree& t, long first, std::map<long, Tree*>& out) {
  if (t.leaf()) return;
  bool all = true;
  for (const auto& k : t.kids) all = all && k.leaf();
  if (all) out[first] = &t;
  for (auto& k : t.kids) {
    carets(k, first, out);
    first += k.leaves();
  }
}

}  // namespace detail

struct TreePair {
  Tree domain, range;
};

// Removes carets that occur at the same leaf positions in both trees.
inline void reduce_carets(TreePair& tp) {
  while (true) {
    std::map<long, Tree*> a, b;
    detail::carets(tp.domain, 0, a);
    detail::carets(tp.range, 0, b);
    bool changed = false;
    for (auto& [i, na] : a) {
      auto it = b.find(i);
      if (it != b.end() && it->second->p == na->p) {
        *na = Tree();
        *it->second = Tree();
        changed = true;
        break;
      }
    }
    if (!changed) return;
  }
}

inline PLMap interpolate(const TreePair& tp) { return interpolate_points01(tree_points(tp.domain), tree_points(tp.range)); }

// Tree pair (D, D') with f the affine interpolation of D x D'.
inline TreePair factor_trees(const PLMap& f, const PSet& ps) {
  require_member(f, unit_context(ps));
  detail::MonoidFactorizer mf(ps);

  // Domain: all breaks are subdivision points, so f is affine on every leaf.
  Tree dom;
  detail::refine_to_contain(dom, 0, 1, f.breaks(), ps);
  auto dleaves = detail::leaves_of(dom);

  // Range: all images of domain points are subdivision points.
  std::vector<Rational> images;
  for (const auto& l : dleaves) images.push_back(f(l.x));
  std::sort(images.begin(), images.end());
  Tree ran;
  detail::refine_to_contain(ran, 0, 1, images, ps);
  auto rleaves = detail::leaves_of(ran);

  // For each domain leaf I, make the range leaves inside f(I) a uniform grid
  // of m equal cells with m in the monoid, then split I into m equal parts.
  std::size_t j = 0;
  for (auto& I : dleaves) {
    Rational hi = f(I.x + I.len);
    std::size_t j0 = j;
    while (j < rleaves.size() && rleaves[j].x < hi) ++j;
    Integer n = rleaves[j0].inv_len;
    for (std::size_t k = j0 + 1; k < j; ++k) {
      const Integer nj = rleaves[k].inv_len;
      Integer kk = mf.smallest([&](const Integer& c) {
        Integer t = n * c;
        return mpz_divisible_p(t.get_mpz_t(), nj.get_mpz_t()) && mf.factor(t / nj).has_value();
      });
      n *= kk;
    }
    Rational cells = (hi - f(I.x)) * n;
    Integer m = cells.get_num();
    Integer extra = mf.smallest([&](const Integer& c) { return mf.factor(m * c).has_value(); });
    auto extra_f = *mf.factor(extra);
    for (std::size_t k = j0; k < j; ++k) {
      auto fs = *mf.factor(n / rleaves[k].inv_len);
      fs.insert(fs.end(), extra_f.begin(), extra_f.end());
      detail::split_chain(*rleaves[k].node, fs);
    }
    detail::split_chain(*I.node, *mf.factor(m * extra));
  }
  TreePair tp{std::move(dom), std::move(ran)};
  reduce_carets(tp);
  return tp;
}

inline std::pair<CodeSeq, CodeSeq> factor(const PLMap& f, const PSet& ps) {
  TreePair tp = factor_trees(f, ps);
  return {tree_code(tp.domain), tree_code(tp.range)};
}

// ---------------------------------------------------------------------------
// Generators

struct GeneratorSymbol {
  enum class Family { F, G, T, H };
  Family family = Family::F;
  std::vector<long> q;        // factors of q for F and T; the map depends only on their product
  long p = 0, r = 0, p2 = 0;  // F: f(q;p;r,p2)  G: g(p,p2) with p = p*  T: t(q;p,p2)
  std::vector<long> sigma, sigma2;  // H: h(sigma; sigma2)

  Integer q_value() const {
    Integer v = 1;
    for (long x : q) v *= x;
    return v;
  }

  static GeneratorSymbol f(std::vector<long> q, long p, long r, long p2) {
    GeneratorSymbol s;
    s.family = Family::F, s.q = std::move(q), s.p = p, s.r = r, s.p2 = p2;
    return s;
  }
  static GeneratorSymbol g(long pstar, long p) {
    GeneratorSymbol s;
    s.family = Family::G, s.p = pstar, s.p2 = p;
    return s;
  }
  static GeneratorSymbol t(std::vector<long> q, long p, long p2) {
    GeneratorSymbol s;
    s.family = Family::T, s.q = std::move(q), s.p = p, s.p2 = p2;
    return s;
  }
  static GeneratorSymbol h(std::vector<long> a, std::vector<long> b) {
    GeneratorSymbol s;
    s.family = Family::H, s.sigma = std::move(a), s.sigma2 = std::move(b);
    return s;
  }

  std::string str() const {
    auto join = [](const std::vector<long>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s;
    };
    switch (family) {
      case Family::F:
        return "f(" + q_value().get_str() + ";" + std::to_string(p) + ";" + std::to_string(r) + "," + std::to_string(p2) + ")";
      case Family::G: return "g(" + std::to_string(p) + "," + std::to_string(p2) + ")";
      case Family::T: return "t(" + q_value().get_str() + ";" + std::to_string(p) + "," + std::to_string(p2) + ")";
      default: return "h(" + join(sigma) + ";" + join(sigma2) + ")";
    }
  }
};

struct Letter {
  GeneratorSymbol sym;
  int exp = 1;  // +1 or -1
};
using GenWord = std::vector<Letter>;

inline PLMap h_map(const std::vector<long>& a, const std::vector<long>& b) {
  return interpolate(standard(a), standard(b));
}

// Conjugate of m by t -> t/q: the same map squeezed into [0, 1/q].
inline PLMap squeeze(const PLMap& m, const Integer& q) {
  if (q == 1) return m;
  return conj(aff(0, make_rational(1, q)), m);
}

inline PLMap eval_symbol(const GeneratorSymbol& s) {
  using F = GeneratorSymbol::Family;
  switch (s.family) {
    case F::F: {
      if (s.r < 2 || s.r > s.p) throw Error("BadParameter", "f needs 1 < r <= p").with("r", std::to_string(s.r));
      PLMap base = interpolate(from_code({{1, s.p}, {s.r, s.p2}}), standard({s.p, s.p2}));
      return squeeze(base, s.q_value());
    }
    case F::G:
      return h_map(std::vector<long>(static_cast<std::size_t>(s.p2 - 1), s.p),
                   std::vector<long>(static_cast<std::size_t>(s.p - 1), s.p2));
    case F::T: return squeeze(h_map({s.p, s.p2}, {s.p2, s.p}), s.q_value());
    default: return h_map(s.sigma, s.sigma2);
  }
}

inline PLMap eval_letter(const Letter& l) {
  PLMap m = eval_symbol(l.sym);
  return l.exp < 0 ? inverse(m) : m;
}

// Words repeat few distinct symbols, so each is evaluated once.
inline PLMap eval_gen_word(const GenWord& w) {
  std::map<std::string, std::pair<PLMap, PLMap>> cache;
  std::vector<PLMap> level;
  level.reserve(w.size());
  for (const auto& l : w) {
    auto key = l.sym.str();
    auto it = cache.find(key);
    if (it == cache.end()) {
      PLMap m = eval_symbol(l.sym);
      it = cache.emplace(key, std::pair{m, inverse(m)}).first;
    }
    level.push_back(l.exp < 0 ? it->second.second : it->second.first);
  }
  // Balanced pairwise products keep the operands of each composition small.
  while (level.size() > 1) {
    std::vector<PLMap> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(compose(level[i], level[i + 1]));
    if (level.size() % 2) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return level.empty() ? PLMap() : level[0];
}

inline bool same_symbol(const GeneratorSymbol& a, const GeneratorSymbol& b) {
  return a.family == b.family && a.q_value() == b.q_value() && a.p == b.p && a.r == b.r && a.p2 == b.p2 &&
         a.sigma == b.sigma && a.sigma2 == b.sigma2;
}

// Cancels adjacent inverse pairs.
inline GenWord free_reduce(const GenWord& w) {
  GenWord out;
  for (const auto& l : w) {
    if (!out.empty() && out.back().exp == -l.exp && same_symbol(out.back().sym, l.sym))
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

inline GenWord invert_word(const GenWord& w) {
  GenWord r(w.rbegin(), w.rend());
  for (auto& l : r) l.exp = -l.exp;
  return r;
}

// Whether s lies in the generating set F u G u T u R.
inline bool is_generator(const GeneratorSymbol& s, const PSet& ps) {
  using F = GeneratorSymbol::Family;
  auto inP = [&](long x) { return std::binary_search(ps.begin(), ps.end(), x); };
  long pstar = ps.front();
  bool q_ok = s.q.empty() || (s.q.size() == 1 && inP(s.q[0]));
  switch (s.family) {
    case F::F: return q_ok && inP(s.p) && inP(s.p2) && 1 < s.r && s.r <= s.p;
    case F::G: return s.p == pstar && inP(s.p2) && s.p2 != pstar;
    case F::T: return q_ok && inP(s.p) && inP(s.p2) && s.p < s.p2;
    default: {
      const auto &a = s.sigma, &b = s.sigma2;
      if (a.empty() || b.empty()) return false;
      long ca = 0, cb = 0;
      for (long x : a) ca += x - 1;
      for (long x : b) cb += x - 1;
      if (ca != cb) return false;
      if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end()) || a[0] >= b[0]) return false;
      for (long x : a)
        if (std::find(b.begin(), b.end(), x) != b.end()) return false;
      for (const auto* v : {&a, &b})
        for (long x : *v) {
          if (!inP(x)) return false;
          if (x != pstar && std::count(v->begin(), v->end(), x) >= pstar - 1) return false;
        }
      return true;
    }
  }
}

namespace detail {

// Maps St(cur) onto St(next) where next swaps positions k, k+1 of cur.
inline Letter swap_letter(const std::vector<long>& cur, std::size_t k) {
  std::vector<long> q(cur.begin(), cur.begin() + static_cast<long>(k));
  long a = cur[k], b = cur[k + 1];
  if (a < b) return {GeneratorSymbol::t(q, a, b), 1};
  return {GeneratorSymbol::t(q, b, a), -1};
}

// Swaps positions k, k+1; equal neighbours need no letter.
inline void swap_at(std::vector<long>& cur, std::size_t k, std::vector<Letter>& moves) {
  if (cur[k] == cur[k + 1]) return;
  moves.push_back(swap_letter(cur, k));
  std::swap(cur[k], cur[k + 1]);
}

// Moves the element at position from to position to by adjacent swaps,
// appending one letter per swap (first applied first).
inline void move_elem(std::vector<long>& cur, std::size_t from, std::size_t to, std::vector<Letter>& moves) {
  for (; from > to; --from) swap_at(cur, from - 1, moves);
  for (; from < to; ++from) swap_at(cur, from, moves);
}

inline void sort_by_swaps(std::vector<long>& cur, std::vector<Letter>& moves) {
  for (std::size_t i = 1; i < cur.size(); ++i)
    for (std::size_t j = i; j > 0 && cur[j - 1] > cur[j]; --j) swap_at(cur, j - 1, moves);
}

// Drops values common to both sides: one copy is brought to the end of each.
inline void drop_common(std::vector<long>& a, std::vector<long>& b, std::vector<Letter>& ma, std::vector<Letter>& mb) {
  while (true) {
    std::optional<std::pair<std::size_t, std::size_t>> hit;
    for (std::size_t i = 0; i < a.size() && !hit; ++i)
      for (std::size_t j = 0; j < b.size() && !hit; ++j)
        if (a[i] == b[j]) hit = {{i, j}};
    if (!hit) return;
    move_elem(a, hit->first, a.size() - 1, ma);
    move_elem(b, hit->second, b.size() - 1, mb);
    a.pop_back();
    b.pop_back();
  }
}

// Rewrites cur with moves St(cur) -> St(next) until no p != p* occurs at
// least p*-1 times.
inline void trade_for_pstar(std::vector<long>& cur, long pstar, std::vector<Letter>& moves) {
  while (true) {
    long target = 0;
    for (long x : cur)
      if (x != pstar && std::count(cur.begin(), cur.end(), x) >= pstar - 1) {
        target = x;
        break;
      }
    if (!target) return;
    std::size_t placed = 0;
    for (std::size_t i = 0; i < cur.size() && placed < static_cast<std::size_t>(pstar - 1); ++i)
      if (cur[i] == target) move_elem(cur, i, placed++, moves);
    moves.push_back({GeneratorSymbol::g(pstar, target), -1});
    std::vector<long> next(static_cast<std::size_t>(target - 1), pstar);
    next.insert(next.end(), cur.begin() + (pstar - 1), cur.end());
    cur = std::move(next);
  }
}

}  // namespace detail

namespace detail {

// Word for h(a; b) over G, T-sharp and R: moves on both sides to a normal
// pair, which is then in R, R^-1 or trivial.
inline GenWord normalize_h(std::vector<long> a, std::vector<long> b, const PSet& ps) {
  long pstar = ps.front();
  std::vector<Letter> ma, mb;
  detail::drop_common(a, b, ma, mb);
  detail::trade_for_pstar(a, pstar, ma);
  detail::trade_for_pstar(b, pstar, mb);
  detail::drop_common(a, b, ma, mb);
  detail::sort_by_swaps(a, ma);
  detail::sort_by_swaps(b, mb);
  GenWord w;
  for (const auto& l : mb) w.push_back({l.sym, -l.exp});
  if (!a.empty()) {
    if (a[0] < b[0])
      w.push_back({GeneratorSymbol::h(a, b), 1});
    else
      w.push_back({GeneratorSymbol::h(b, a), -1});
  }
  for (auto it = ma.rbegin(); it != ma.rend(); ++it) w.push_back(*it);
  return w;
}

}  // namespace detail

namespace detail {

// Word over F-sharp with product the interpolation of D(t) x St(sigma); sigma
// is returned alongside.
inline std::pair<GenWord, std::vector<long>> reduce_regular(Tree t) {
  if (t.leaf()) return {{}, {}};
  const long p1 = t.p;
  std::vector<Letter> applied;
  while (true) {
    long m = 0;
    for (long i = p1; i >= 1; --i)
      if (!t.kids[static_cast<std::size_t>(i - 1)].leaf()) {
        m = i;
        break;
      }
    if (m <= 1) break;
    Tree& cm = t.kids[static_cast<std::size_t>(m - 1)];
    const long q = cm.p;
    applied.push_back({GeneratorSymbol::f({}, p1, m, q), 1});
    std::vector<Tree> pieces;
    for (long i = 1; i <= p1; ++i) {
      auto& k = t.kids[static_cast<std::size_t>(i - 1)];
      if (i == m)
        for (auto& s : k.kids) pieces.push_back(std::move(s));
      else
        pieces.push_back(std::move(k));
    }
    Tree nt = Tree::split(p1);
    nt.kids[0] = Tree::split(q);
    for (long i = 0; i < q; ++i) nt.kids[0].kids[static_cast<std::size_t>(i)] = std::move(pieces[static_cast<std::size_t>(i)]);
    for (long i = 1; i < p1; ++i) nt.kids[static_cast<std::size_t>(i)] = std::move(pieces[static_cast<std::size_t>(q + i - 1)]);
    t = std::move(nt);
  }
  auto [w1, s1] = reduce_regular(std::move(t.kids[0]));
  GenWord w;
  for (auto l : w1) {
    l.sym.q.insert(l.sym.q.begin(), p1);
    w.push_back(std::move(l));
  }
  for (auto it = applied.rbegin(); it != applied.rend(); ++it) w.push_back(*it);
  std::vector<long> sigma{p1};
  sigma.insert(sigma.end(), s1.begin(), s1.end());
  return {w, sigma};
}

// Replaces F-sharp and T-sharp letters whose q is a product of two or more
// factors by conjugates of letters with smaller q.
inline void sharpen(const Letter& l, long pstar, GenWord& out) {
  using F = GeneratorSymbol::Family;
  if ((l.sym.family != F::F && l.sym.family != F::T) || l.sym.q.size() <= 1) {
    out.push_back(l);
    return;
  }
  long pbar = l.sym.q.front();
  Letter inner = l;
  inner.sym.q.erase(inner.sym.q.begin());
  GeneratorSymbol c = GeneratorSymbol::f({}, pstar, pstar, pbar);
  out.push_back({c, 1});
  sharpen(inner, pstar, out);
  out.push_back({c, -1});
}

}  // namespace detail

inline GenWord sharpen(const GenWord& w, const PSet& ps) {
  GenWord out;
  for (const auto& l : w) detail::sharpen(l, ps.front(), out);
  return out;
}

// f = g'^-1 o h(sigma; sigma') o g where g, g' carry the regular
// subdivisions of a tree pair to standard ones.
inline GenWord decompose(const PLMap& f, const PSet& ps) {
  TreePair tp = factor_trees(f, ps);
  auto [wd, sd] = detail::reduce_regular(tp.domain);
  auto [wr, sr] = detail::reduce_regular(tp.range);
  GenWord w = invert_word(wr);
  GenWord h = detail::normalize_h(sd, sr, ps);
  w.insert(w.end(), h.begin(), h.end());
  w.insert(w.end(), wd.begin(), wd.end());
  return free_reduce(sharpen(free_reduce(w), ps));
}

inline GenWord decompose_h(const std::vector<long>& a, const std::vector<long>& b, const PSet& ps) {
  return free_reduce(sharpen(detail::normalize_h(a, b, ps), ps));
}

// x_i = f(p^m; p; r, p) with i = (p-1) m + (p - r).
inline GeneratorSymbol xi_symbol(long i, long p) {
  if (i < 0 || p < 2) throw Error("BadParameter", "need i >= 0 and p >= 2");
  long m = i / (p - 1), r = p - i % (p - 1);
  return GeneratorSymbol::f(std::vector<long>(static_cast<std::size_t>(m), p), p, r, p);
}

inline PLMap xi_generator(long i, long p) { return eval_symbol(xi_symbol(i, p)); }

// Inverse of xi_symbol for symbols f(p^m; p; r, p).
inline std::optional<long> xi_index(const GeneratorSymbol& s) {
  if (s.family != GeneratorSymbol::Family::F || s.p != s.p2) return std::nullopt;
  for (long x : s.q)
    if (x != s.p) return std::nullopt;
  return (s.p - 1) * static_cast<long>(s.q.size()) + (s.p - s.r);
}

}  // namespace plgroup
