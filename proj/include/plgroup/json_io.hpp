#pragma once
// JSON encoding of rationals, elements, contexts and results. Rationals are
// lowest-terms "num/den" strings ("3" for integers); never floats.

#include <string>
#include <vector>

#include "json.hpp"
#include "plgroup/breakhom.hpp"
#include "plgroup/plmap.hpp"
#include "plgroup/subdivide.hpp"
#include "plgroup/words.hpp"

namespace plgroup {

using Json = nlohmann::json;

inline std::string rational_str(const Rational& q) { return q.get_str(); }

// Strings as "n" or "n/d" (canonicalized), or JSON integers.
inline Rational parse_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.dump());
  throw Error("BadInput", "rationals are encoded as strings: " + j.dump());
}

inline Json to_json(const AffineMap& a) { return {{"slope", rational_str(a.slope)}, {"offset", rational_str(a.offset)}}; }

inline AffineMap affine_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("slope") || !j.contains("offset"))
    throw Error("BadInput", "affine map needs slope and offset");
  return {parse_rational(j.at("slope")), parse_rational(j.at("offset"))};
}

inline Json to_json(const PLMap& f) {
  Json vs = Json::array();
  for (const auto& v : f.vertices()) vs.push_back({rational_str(v.x), rational_str(v.y)});
  return {{"vertices", vs}, {"left", to_json(f.left())}, {"right", to_json(f.right())}};
}

// Missing ends default to the identity.
inline PLMap plmap_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.at("vertices").is_array())
    throw Error("BadInput", "element needs a vertices array");
  std::vector<Vertex> vs;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_array() || v.size() != 2) throw Error("BadInput", "vertex must be a pair");
    vs.push_back({parse_rational(v[0]), parse_rational(v[1])});
  }
  AffineMap l = j.contains("left") ? affine_from_json(j.at("left")) : AffineMap{};
  AffineMap r = j.contains("right") ? affine_from_json(j.at("right")) : AffineMap{};
  return PLMap(std::move(vs), l, r);
}

inline Json to_json(const Interval& I) {
  switch (I.kind) {
    case IntervalKind::compact: return {{"kind", "compact"}, {"a", rational_str(*I.lo)}, {"c", rational_str(*I.hi)}};
    case IntervalKind::half_line_up: return {{"kind", "up"}, {"a", rational_str(*I.lo)}};
    case IntervalKind::half_line_down: return {{"kind", "down"}, {"c", rational_str(*I.hi)}};
    default: return {{"kind", "line"}};
  }
}

inline Interval interval_from_json(const Json& j) {
  std::string kind = j.value("kind", "");
  if (kind == "compact") return Interval::compact(parse_rational(j.at("a")), parse_rational(j.at("c")));
  if (kind == "up") return Interval::up(parse_rational(j.at("a")));
  if (kind == "down") return Interval::down(parse_rational(j.at("c")));
  if (kind == "line") return Interval::line();
  throw Error("BadInput", "interval kind must be compact, up, down or line");
}

inline Json to_json(const GroupContext& ctx) {
  Json g = Json::array();
  for (const auto& p : ctx.P.generators()) g.push_back(rational_str(p));
  return {{"interval", to_json(ctx.interval)}, {"P", {{"generators", g}}}};
}

inline GroupContext context_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("interval") || !j.contains("P")) throw Error("BadInput", "context needs interval and P");
  std::vector<Rational> gens;
  for (const auto& g : j.at("P").at("generators")) gens.push_back(parse_rational(g));
  return {interval_from_json(j.at("interval")), SlopeGroup(std::move(gens))};
}

// {"error": code, "message": …, field: integer …}
inline Json to_json(const Error& e) {
  Json j{{"error", e.code()}, {"message", e.what()}};
  for (const auto& [k, v] : e.fields()) {
    try {
      j[k] = Json::parse(v);
    } catch (const Json::exception&) {
      j[k] = v;
    }
  }
  return j;
}

inline Json to_json(const BreakVector& v) {
  Json terms = Json::array();
  for (const auto& [label, e] : v.terms()) {
    Json xs = Json::array();
    for (const auto& x : e) xs.push_back(Json::parse(x.get_str()));
    terms.push_back({{"label", label.str()}, {"exponents", xs}});
  }
  return {{"terms", terms}};
}

inline Json to_json(const CodeSeq& c) {
  Json j = Json::array();
  for (const auto& s : c) j.push_back({s.n, s.p});
  return j;
}

inline Json to_json(const GenWord& w) {
  Json j = Json::array();
  for (const auto& l : w) j.push_back(l.sym.str() + (l.exp < 0 ? "^-1" : ""));
  return j;
}

inline Json to_json(const Word& w) { return word_tokens(w); }

inline Word word_from_json(const Presentation& pr, const Json& j) {
  if (!j.is_array()) throw Error("BadInput", "a word is a list of letters");
  std::vector<std::string> tokens;
  for (const auto& t : j) {
    if (!t.is_string()) throw Error("BadInput", "letters are strings");
    tokens.push_back(t.get<std::string>());
  }
  return parse_word(pr, tokens);
}

}  // namespace plgroup
