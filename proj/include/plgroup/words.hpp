#pragma once
// Words over the generators of the Thompson-style presentations, seminormal
// forms for the infinite presentation of G[p], the word problem and relator
// verification for the finite presentations.
//
// Products are compositions read left to right: the word a b is a o b, and
// ^u v stands for u v u^-1.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "plgroup/subdivide.hpp"

namespace plgroup {

enum class PresentationKind { Gp_infinite, Gp_finite, Ghalf_finite, GPP, F_classic };

struct Presentation {
  PresentationKind kind = PresentationKind::F_classic;
  long p = 2;   // the integer p; for GPP the distinguished p0
  PSet ps;      // GPP only

  static Presentation gp_infinite(long p) { return make(PresentationKind::Gp_infinite, p); }
  static Presentation gp_finite(long p) { return make(PresentationKind::Gp_finite, p); }
  static Presentation ghalf_finite(long p) { return make(PresentationKind::Ghalf_finite, p); }
  static Presentation f_classic() { return make(PresentationKind::F_classic, 2); }
  static Presentation gpp(std::vector<long> ps, long p0) {
    Presentation r = make(PresentationKind::GPP, p0);
    r.ps = make_pset(std::move(ps));
    if (std::find(r.ps.begin(), r.ps.end(), p0) == r.ps.end())
      throw Error("BadParameter", "p0 must belong to the generating set").with("p0", std::to_string(p0));
    return r;
  }

  // Number of generators; -1 when infinite.
  long rank() const {
    switch (kind) {
      case PresentationKind::Gp_infinite: return -1;
      case PresentationKind::GPP: return 1 + p * static_cast<long>(ps.size());
      default: return p;
    }
  }

  bool valid_id(long id) const { return id >= 0 && (rank() < 0 || id < rank()); }

  // Uses x_i on the unit interval: Gp_infinite, Gp_finite and F_classic.
  bool unit_interval() const { return kind != PresentationKind::Ghalf_finite && kind != PresentationKind::GPP; }

  std::string name() const {
    switch (kind) {
      case PresentationKind::Gp_infinite: return "Gp_infinite";
      case PresentationKind::Gp_finite: return "Gp_finite";
      case PresentationKind::Ghalf_finite: return "Ghalf_finite";
      case PresentationKind::GPP: return "GPP";
      default: return "F_classic";
    }
  }

  // GPP ids: 0 is f, 1 + k p0 + r is f(r, ps[k]).
  long gpp_id(long r, long prime) const {
    auto it = std::find(ps.begin(), ps.end(), prime);
    if (kind != PresentationKind::GPP || it == ps.end() || r < 0 || r >= p)
      throw Error("BadSymbol", "no generator f(r,p) with these parameters").with("r", std::to_string(r));
    return 1 + static_cast<long>(it - ps.begin()) * p + r;
  }

  std::string symbol_name(long id) const {
    if (!valid_id(id)) throw Error("BadSymbol", "symbol id out of range").with("id", std::to_string(id));
    switch (kind) {
      case PresentationKind::Ghalf_finite: return id == 0 ? "x" : "x" + std::to_string(id);
      case PresentationKind::GPP: {
        if (id == 0) return "f";
        long k = (id - 1) / p, r = (id - 1) % p;
        return "f(" + std::to_string(r) + "," + std::to_string(ps[static_cast<std::size_t>(k)]) + ")";
      }
      default: return "x" + std::to_string(id);
    }
  }

  long parse_symbol(const std::string& s) const {
    auto bad = [&] { return Error("BadSymbol", "unknown generator '" + s + "' for " + name()); };
    if (kind == PresentationKind::GPP) {
      if (s == "f") return 0;
      long r, q;
      char tail;
      if (std::sscanf(s.c_str(), "f(%ld,%ld%c", &r, &q, &tail) != 3 || tail != ')') throw bad();
      return gpp_id(r, q);
    }
    if (s == "x") return 0;
    if (s.size() < 2 || s[0] != 'x' || !std::all_of(s.begin() + 1, s.end(), ::isdigit)) throw bad();
    long id = std::stol(s.substr(1));
    if (!valid_id(id)) throw bad();
    return id;
  }

 private:
  static Presentation make(PresentationKind k, long p) {
    if (p < 2) throw Error("BadParameter", "p must be >= 2").with("p", std::to_string(p));
    Presentation r;
    r.kind = k, r.p = p;
    return r;
  }
};

struct WordLetter {
  long id = 0;
  int exp = 1;  // +1 or -1
  bool operator==(const WordLetter&) const = default;
};

struct Word {
  Presentation pres;
  std::vector<WordLetter> letters;

  Word() = default;
  Word(Presentation pr, std::vector<WordLetter> ls) : pres(std::move(pr)), letters(std::move(ls)) {
    for (const auto& l : letters) {
      if (!pres.valid_id(l.id)) throw Error("BadSymbol", "symbol id out of range").with("id", std::to_string(l.id));
      if (l.exp != 1 && l.exp != -1) throw Error("BadSymbol", "letter exponents are +1 or -1");
    }
  }

  static Word gen(const Presentation& pr, long id, long power = 1) {
    std::vector<WordLetter> ls;
    for (long k = 0; k < (power < 0 ? -power : power); ++k) ls.push_back({id, power < 0 ? -1 : 1});
    return Word(pr, std::move(ls));
  }

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }

  Word operator*(const Word& o) const {
    Word r = *this;
    r.letters.insert(r.letters.end(), o.letters.begin(), o.letters.end());
    return r;
  }

  Word inverse() const {
    Word r = *this;
    std::reverse(r.letters.begin(), r.letters.end());
    for (auto& l : r.letters) l.exp = -l.exp;
    return r;
  }

  bool operator==(const Word& o) const { return letters == o.letters; }
};

// ^u v = u v u^-1
inline Word conj(const Word& u, const Word& v) { return u * v * u.inverse(); }

inline Word free_reduce(const Word& w) {
  Word r = w;
  r.letters.clear();
  for (const auto& l : w.letters) {
    if (!r.letters.empty() && r.letters.back().id == l.id && r.letters.back().exp == -l.exp)
      r.letters.pop_back();
    else
      r.letters.push_back(l);
  }
  return r;
}

// JSON-style tokens "x0", "x1^-1", "f(2,3)"; exponents of other sizes expand.
inline std::vector<std::string> word_tokens(const Word& w) {
  std::vector<std::string> out;
  for (const auto& l : w.letters) out.push_back(w.pres.symbol_name(l.id) + (l.exp < 0 ? "^-1" : ""));
  return out;
}

inline std::string word_str(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (const auto& t : word_tokens(w)) s += (s.empty() ? "" : " ") + t;
  return s;
}

inline Word parse_word(const Presentation& pr, const std::vector<std::string>& tokens) {
  std::vector<WordLetter> ls;
  for (const auto& t : tokens) {
    auto caret = t.find('^');
    long e = 1;
    if (caret != std::string::npos) {
      try {
        std::size_t used = 0;
        e = std::stol(t.substr(caret + 1), &used);
        if (used != t.size() - caret - 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw Error("BadSymbol", "bad exponent in '" + t + "'");
      }
    }
    long id = pr.parse_symbol(t.substr(0, caret));
    for (long k = 0; k < (e < 0 ? -e : e); ++k) ls.push_back({id, e < 0 ? -1 : 1});
  }
  return Word(pr, std::move(ls));
}

// ---------------------------------------------------------------------------
// Evaluation

inline PLMap generator_map(const Presentation& pr, long id) {
  if (!pr.valid_id(id)) throw Error("BadSymbol", "symbol id out of range").with("id", std::to_string(id));
  switch (pr.kind) {
    case PresentationKind::Ghalf_finite:
      if (id == 0) return compose(g_map(0, pr.p), inverse(g_map(1, pr.p)));
      return g_map(id, pr.p);
    case PresentationKind::GPP: {
      // f = g(p0,p0)^-1 g(0,p0) is the translation by p0 - 1 on [1, oo).
      if (id == 0) return compose(inverse(g_map(pr.p, pr.p)), g_map(0, pr.p));
      long k = (id - 1) / pr.p, r = (id - 1) % pr.p;
      return g_map(r, pr.ps[static_cast<std::size_t>(k)]);
    }
    default: return xi_generator(id, pr.p);
  }
}

inline GroupContext word_context(const Presentation& pr) {
  if (pr.unit_interval()) return unit_context({pr.p});
  if (pr.kind == PresentationKind::Ghalf_finite) return {Interval::up(0), SlopeGroup({Rational(pr.p)})};
  std::vector<Rational> g(pr.ps.begin(), pr.ps.end());
  return {Interval::up(0), SlopeGroup(std::move(g))};
}

// Caches generator maps across calls for one presentation.
class WordEvaluator {
 public:
  explicit WordEvaluator(Presentation pr) : pres_(std::move(pr)) {}

  const PLMap& letter(const WordLetter& l) {
    auto it = cache_.find(l.id);
    if (it == cache_.end()) {
      PLMap m = generator_map(pres_, l.id);
      it = cache_.emplace(l.id, std::pair{m, inverse(m)}).first;
    }
    return l.exp < 0 ? it->second.second : it->second.first;
  }

  PLMap operator()(const Word& w) {
    std::vector<PLMap> level;
    level.reserve(w.letters.size());
    for (const auto& l : free_reduce(w).letters) level.push_back(letter(l));
    // Balanced products keep the operands of each composition small.
    while (level.size() > 1) {
      std::vector<PLMap> next;
      next.reserve(level.size() / 2 + 1);
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(compose(level[i], level[i + 1]));
      if (level.size() % 2) next.push_back(std::move(level.back()));
      level = std::move(next);
    }
    return level.empty() ? PLMap() : level[0];
  }

 private:
  Presentation pres_;
  std::map<long, std::pair<PLMap, PLMap>> cache_;
};

inline PLMap eval_word(const Word& w) { return WordEvaluator(w.pres)(w); }

// ---------------------------------------------------------------------------
// Seminormal form for the infinite presentation ^{x_i} x_j = x_{j+p-1}, i < j.
//
// A seminormal word is u1^-1 u2 with u1, u2 positive and each written with
// non-increasing indices from left to right. Both are kept as multisets.

namespace detail {

struct Seminormal {
  long p;
  std::vector<long> neg, pos;  // indices of u1 and u2, sorted ascending

  // u1^-1 u2 x_j: x_j moves left through the smaller indices of u2, gaining
  // p - 1 for each.
  void push_pos(long j) {
    auto it = pos.begin();
    while (it != pos.end() && *it < j) j += p - 1, ++it;
    pos.insert(it, j);
  }

  // u1^-1 u2 x_c^-1: x_c^-1 moves left through u2 (x_w x_c^-1 = x_c^-1 x_{w+p-1}
  // for w > c and x_w x_c^-1 = x_{c+p-1}^-1 x_w for w < c), then x_c joins u1
  // from the left (x_c x_z = x_{z+p-1} x_c for c < z).
  void push_neg(long c) {
    std::size_t k = 0;
    while (k < pos.size() && pos[k] < c) c += p - 1, ++k;
    if (k < pos.size() && pos[k] == c) {
      pos.erase(pos.begin() + static_cast<long>(k));
      return;
    }
    for (std::size_t m = k; m < pos.size(); ++m) pos[m] += p - 1;
    auto it = std::upper_bound(neg.begin(), neg.end(), c);
    for (auto jt = it; jt != neg.end(); ++jt) *jt += p - 1;
    neg.insert(it, c);
  }

  // Free cancellation at the junction x_a^-1 x_a of the two largest indices.
  void cancel_junction() {
    while (!neg.empty() && !pos.empty() && neg.back() == pos.back()) neg.pop_back(), pos.pop_back();
  }
};

}  // namespace detail

inline Word seminormal(const Word& w) {
  if (!w.pres.unit_interval())
    throw Error("BadPresentation", "seminormal forms exist for the presentations of G[p] only");
  detail::Seminormal s{w.pres.p, {}, {}};
  for (const auto& l : w.letters) {
    if (l.exp > 0)
      s.push_pos(l.id);
    else
      s.push_neg(l.id);
    s.cancel_junction();
  }
  std::vector<WordLetter> out;
  for (long i : s.neg) out.push_back({i, -1});
  for (auto it = s.pos.rbegin(); it != s.pos.rend(); ++it) out.push_back({*it, 1});
  // Indices may exceed the finite generating set; report in the infinite one.
  return Word(Presentation::gp_infinite(w.pres.p), std::move(out));
}

// Negative letters with non-decreasing indices, then positive letters with
// non-increasing indices, and no cancellation at the junction.
inline bool is_seminormal(const Word& w) {
  std::size_t k = 0;
  const auto& ls = w.letters;
  while (k < ls.size() && ls[k].exp < 0) {
    if (k > 0 && ls[k - 1].id > ls[k].id) return false;
    ++k;
  }
  if (k > 0 && k < ls.size() && ls[k - 1].id == ls[k].id) return false;
  for (std::size_t m = k; m < ls.size(); ++m) {
    if (ls[m].exp < 0) return false;
    if (m > k && ls[m - 1].id < ls[m].id) return false;
  }
  return true;
}

// Rewrites x_i, i >= p, as ^{x^m} x_r with i = r + m(p-1), 1 <= r <= p-1.
inline Word eliminate_to_finite(const Word& w) {
  const long p = w.pres.p;
  Presentation fin = Presentation::gp_finite(p);
  Word out(fin, {});
  for (const auto& l : w.letters) {
    if (l.id < p) {
      out.letters.push_back(l);
      continue;
    }
    long m = (l.id - 1) / (p - 1), r = l.id - m * (p - 1);
    Word x = Word::gen(fin, 0, m);
    Word xr = Word::gen(fin, r, l.exp);
    out = out * conj(x, xr);
  }
  return out;
}

// Seminormal form with every removable pair dropped: if x_i occurs in both
// blocks and no letter has index in (i, i+p-1], then x_i^-1 (B^-1 C) x_i with
// B, C of indices >= i+p equals B'^-1 C' with all indices lowered by p-1.
// Distinct outputs give distinct maps (checked empirically in the tests).
inline Word normal_form(const Word& w) {
  Word s = seminormal(w);
  const long p = w.pres.p;
  std::vector<long> neg, pos;
  for (const auto& l : s.letters) (l.exp < 0 ? neg : pos).push_back(l.id);
  std::sort(neg.begin(), neg.end());
  std::sort(pos.begin(), pos.end());
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<long> all(neg);
    all.insert(all.end(), pos.begin(), pos.end());
    std::sort(all.begin(), all.end());
    for (auto it = neg.rbegin(); it != neg.rend(); ++it) {
      long i = *it;
      if (!std::binary_search(pos.begin(), pos.end(), i)) continue;
      auto above = std::upper_bound(all.begin(), all.end(), i);
      if (above != all.end() && *above <= i + p - 1) continue;
      for (auto* v : {&neg, &pos}) {
        v->erase(std::lower_bound(v->begin(), v->end(), i));
        for (auto& x : *v)
          if (x > i) x -= p - 1;
      }
      changed = true;
      break;
    }
  }
  std::vector<WordLetter> out;
  for (long i : neg) out.push_back({i, -1});
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.push_back({*it, 1});
  return Word(s.pres, std::move(out));
}

// Whether w represents the identity. For the presentations of G[p] the
// rewriting answer is checked against evaluation.
inline bool word_problem(const Word& w) {
  bool by_eval = eval_word(w).is_identity();
  if (!w.pres.unit_interval()) return by_eval;
  bool by_rewriting = normal_form(w).empty();
  if (by_eval != by_rewriting)
    throw Error("MethodDisagreement", "rewriting and evaluation disagree on " + word_str(w));
  return by_eval;
}

// ---------------------------------------------------------------------------
// Relator families

struct Relator {
  std::string family;
  Word word;  // represents the identity
};

namespace detail {

inline Word rel(const Word& lhs, const Word& rhs) { return lhs * rhs.inverse(); }

// ^{x_i x^n} x_j = ^{x^e} x_j
inline Word x_relator(const Presentation& pr, long i, long n, long j, long e) {
  Word xi = Word::gen(pr, i), xj = Word::gen(pr, j);
  return rel(conj(xi * Word::gen(pr, 0, n), xj), conj(Word::gen(pr, 0, e), xj));
}

inline void finite_relators(const Presentation& pr, long bound, bool half, std::vector<Relator>& out) {
  const long p = pr.p;
  // Exponent on the right: n + 1 for G[p], pn + j - i on the half line.
  auto e = [&](long i, long n, long j) { return half ? p * n + j - i : n + 1; };
  for (long i = 1; i < p; ++i)
    for (long j = i + 1; j < p; ++j) out.push_back({"n0", x_relator(pr, i, 0, j, e(i, 0, j))});
  for (long i = 1; i < p; ++i)
    for (long j = 1; j <= std::min(i + 1, p - 1); ++j) out.push_back({"n1", x_relator(pr, i, 1, j, e(i, 1, j))});
  out.push_back({"n2", x_relator(pr, p - 1, 2, 1, e(p - 1, 2, 1))});
  for (long n = 0; n <= bound; ++n)
    for (long i = 1; i < p; ++i)
      for (long j = 1; j < p; ++j)
        if (j > i || n > 0) out.push_back({"family", x_relator(pr, i, n, j, e(i, n, j))});
}

// g(i, p) in the GPP generators, using g(r + s(p0-1), p) = ^{f^s} g(r, p).
inline Word gpp_g(const Presentation& pr, long i, long q) {
  const long p0 = pr.p;
  if (i < p0) return Word::gen(pr, pr.gpp_id(i, q));
  long r = (i - 1) % (p0 - 1) + 1, s = (i - r) / (p0 - 1);
  return conj(Word::gen(pr, 0, s), Word::gen(pr, pr.gpp_id(r, q)));
}

inline void gpp_relators(const Presentation& pr, long bound, std::vector<Relator>& out) {
  const long p0 = pr.p;
  const auto& ps = pr.ps;
  auto f = [&](long r, long q) { return Word::gen(pr, pr.gpp_id(r, q)); };
  Word F = Word::gen(pr, 0);
  out.push_back({"link", F * f(1, p0) * f(0, p0).inverse()});

  SlopeGroup P(std::vector<Rational>(ps.begin(), ps.end()));
  for (const auto& x : P.relation_basis())
    for (long r = 0; r < p0; ++r) {
      Word w(pr, {});
      for (std::size_t k = 0; k < ps.size(); ++k) w = w * Word::gen(pr, pr.gpp_id(r, ps[k]), to_long(x[k]));
      out.push_back({"kernel", w});
    }

  for (long r = 0; r < p0; ++r)
    for (long q : ps)
      for (long q2 : ps)
        if (q < q2) {
          Word a = f(r, q), b = f(r, q2);
          out.push_back({"commutator", a * b * a.inverse() * b.inverse()});
        }

  for (long s1 = 0; s1 <= bound; ++s1)
    for (long r = 0; r < p0; ++r)
      for (long r1 = 1; r1 < p0; ++r1) {
        if (!(r1 > r || s1 > 0)) continue;
        for (long q : ps)
          for (long q2 : ps) {
            long i1 = (p0 - 1) * s1 + r1, i2 = r + q * (i1 - r);
            long r2 = (i2 - 1) % (p0 - 1) + 1, s2 = (i2 - r2) / (p0 - 1);
            Word lhs = conj(f(r, q) * Word::gen(pr, 0, s1), f(r1, q2));
            out.push_back({"conjugation", rel(lhs, conj(Word::gen(pr, 0, s2), f(r2, q2)))});
          }
      }

  // Base relations of the infinite presentation on [0, oo), with the
  // generators g(b, p), b >= p0, expressed through f.
  for (long b = 0; b <= bound; ++b)
    for (long b2 = b + 1; b2 <= bound; ++b2)
      for (long q : ps)
        for (long q2 : ps) {
          Word lhs = conj(gpp_g(pr, b, q), gpp_g(pr, b2, q2));
          out.push_back({"base_conjugation", rel(lhs, gpp_g(pr, b + q * (b2 - b), q2))});
        }
}

}  // namespace detail

// Relators of the named presentation; infinite families are cut at n <= bound
// (or s' <= bound, b <= bound) and indices <= index_bound.
inline std::vector<Relator> relators(const Presentation& pr, long bound = 8, long index_bound = 12) {
  std::vector<Relator> out;
  switch (pr.kind) {
    case PresentationKind::Gp_infinite:
      for (long j = 1; j <= index_bound; ++j)
        for (long i = 0; i < j; ++i)
          out.push_back({"conjugation", detail::rel(conj(Word::gen(pr, i), Word::gen(pr, j)),
                                                    Word::gen(pr, j + pr.p - 1))});
      break;
    case PresentationKind::F_classic:
      out.push_back({"relator", detail::x_relator(pr, 1, 1, 1, 2)});
      out.push_back({"relator", detail::x_relator(pr, 1, 2, 1, 3)});
      break;
    case PresentationKind::Gp_finite: detail::finite_relators(pr, bound, false, out); break;
    case PresentationKind::Ghalf_finite: detail::finite_relators(pr, bound, true, out); break;
    case PresentationKind::GPP: detail::gpp_relators(pr, bound, out); break;
  }
  return out;
}

struct FamilyCount {
  std::string family;
  long count = 0;
};

struct PresentationReport {
  std::string name;
  std::vector<FamilyCount> families;  // in order of first appearance
  long total() const {
    long t = 0;
    for (const auto& f : families) t += f.count;
    return t;
  }
  long count(const std::string& family) const {
    for (const auto& f : families)
      if (f.family == family) return f.count;
    return 0;
  }
};

// Evaluates every relator; throws RelatorFails on the first one that is not
// the identity. GPP also checks g(b,p) g(b,p') = g(b,pp') on the maps.
inline PresentationReport verify_presentation(const Presentation& pr, long bound = 8, long index_bound = 12) {
  if (bound < 0 || index_bound < 1) throw Error("BadParameter", "bounds must be positive");
  PresentationReport rep{pr.name(), {}};
  auto tally = [&](const std::string& fam) {
    for (auto& f : rep.families)
      if (f.family == fam) return void(++f.count);
    rep.families.push_back({fam, 1});
  };
  WordEvaluator ev(pr);
  for (const auto& r : relators(pr, bound, index_bound)) {
    if (!ev(r.word).is_identity())
      throw Error("RelatorFails", "relator " + word_str(r.word) + " of family " + r.family + " is not the identity")
          .with("length", std::to_string(r.word.size()));
    tally(r.family);
  }
  if (pr.kind == PresentationKind::GPP) {
    for (long b = 0; b <= bound; ++b)
      for (long q : pr.ps)
        for (long q2 : pr.ps) {
          PLMap lhs = ev(detail::gpp_g(pr, b, q) * detail::gpp_g(pr, b, q2));
          if (!(lhs == g_map(b, Rational(q) * q2)))
            throw Error("RelatorFails", "g(b,p) g(b,p') != g(b,pp')").with("b", std::to_string(b));
          tally("base_product");
        }
  }
  return rep;
}

inline Presentation presentation_by_name(const std::string& name, long p, const std::vector<long>& ps = {}) {
  if (name == "Gp_infinite") return Presentation::gp_infinite(p);
  if (name == "Gp_finite") return Presentation::gp_finite(p);
  if (name == "Ghalf_finite") return Presentation::ghalf_finite(p);
  if (name == "F_classic") return Presentation::f_classic();
  if (name == "GPP") return Presentation::gpp(ps.empty() ? std::vector<long>{p} : ps, p);
  throw Error("BadPresentation", "unknown presentation '" + name + "'");
}

}  // namespace plgroup
