// plgroup: command-line front end. Results are JSON (or SVG) on stdout.
// Exit codes: 0 success, 1 usage or malformed input, 2 domain error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "plgroup/breakhom.hpp"
#include "plgroup/construct.hpp"
#include "plgroup/json_io.hpp"
#include "plgroup/subdivide.hpp"
#include "plgroup/svg.hpp"
#include "plgroup/tails.hpp"
#include "plgroup/words.hpp"

using namespace plgroup;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inline JSON if it starts like JSON, "-" for stdin, otherwise a file name.
Json load_json(const std::string& src) {
  std::string text;
  if (!src.empty() && (src[0] == '{' || src[0] == '[')) {
    text = src;
  } else if (src == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(src);
    if (!in) throw UsageError("cannot read '" + src + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
}

std::vector<Rational> rational_list(const std::string& s) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_rational(item));
  return out;
}

std::vector<long> long_list(const std::string& s) {
  std::vector<long> out;
  for (const auto& q : rational_list(s)) {
    if (q.get_den() != 1 || !q.get_num().fits_slong_p()) throw UsageError("expected integers: '" + s + "'");
    out.push_back(q.get_num().get_si());
  }
  return out;
}

struct Options {
  std::string ctx, gens, out, name = "Gp_finite", pp, mode = "map_interval", map, params, word, q, qbar;
  std::vector<std::string> in;
  std::string a, c, a2, c2, points, images, eps = "1/1024", t, lo, hi, s, bmax = "8";
  long p = 2, bound = 8, index_bound = 12, width = 600, height = 200, count = 1, bumps = 3;
  bool inverse = false;
};

// --ctx wins; --gens alone means the unit interval.
GroupContext context(const Options& o) {
  if (!o.ctx.empty()) return context_from_json(load_json(o.ctx));
  if (!o.gens.empty()) return {Interval::compact(0, 1), SlopeGroup(rational_list(o.gens))};
  throw UsageError("a context is required (--ctx or --gens)");
}

PLMap input_map(const Options& o, std::size_t k = 0) {
  if (o.in.size() <= k) throw UsageError("missing --in element");
  return plmap_from_json(load_json(o.in[k]));
}

Rational need(const std::string& v, const char* flag) {
  if (v.empty()) throw UsageError(std::string("missing ") + flag);
  return parse_rational(v);
}

Json ring_info(const Options& o) {
  GroupContext ctx = context(o);
  const auto& P = ctx.P;
  Json gens = Json::array(), primes = Json::array();
  for (const auto& g : P.generators()) gens.push_back(rational_str(g));
  for (const auto& q : P.prime_support()) primes.push_back(Json::parse(q.get_str()));
  RankFormulas r = rank_formulas(ctx);
  Json ranks{{"g_halfline_ab", r.g_halfline_ab_rank}};
  if (r.b_ab_rank) ranks["b_ab"] = *r.b_ab_rank;
  if (r.g_pp_ab_rank) ranks["g_pp_ab"] = *r.g_pp_ab_rank;
  if (r.g_p_compact_ab_rank) ranks["g_p_compact_ab"] = *r.g_p_compact_ab_rank;
  return {{"context", to_json(ctx)},     {"generators", gens},
          {"N", Json::parse(P.N().get_str())}, {"primes", primes},
          {"rank", P.rank()},             {"independent", P.independent()},
          {"delta", Json::parse(P.delta().get_str())}, {"ab_ranks", ranks}};
}

Json construct_cmd(const Options& o) {
  GroupContext ctx = context(o);
  if (o.mode == "map_interval") {
    PLMap f = map_interval(need(o.a, "--a"), need(o.c, "--c"), need(o.a2, "--a2"), need(o.c2, "--c2"), ctx.P);
    return to_json(f);
  }
  if (o.mode == "tuple") {
    return to_json(tuple_map(rational_list(o.points), rational_list(o.images), ctx));
  }
  if (o.mode == "approximate") {
    Json j = load_json(o.in.empty() ? throw UsageError("approximate needs --in samples") : o.in[0]);
    std::vector<Sample> samples;
    for (const auto& s : j) {
      if (!s.is_array() || s.size() != 2) throw Error("BadInput", "samples are [t, g] pairs");
      samples.push_back({parse_rational(s[0]), parse_rational(s[1])});
    }
    return to_json(approximate(samples, parse_rational(o.eps), ctx));
  }
  throw UsageError("--mode must be map_interval, tuple or approximate");
}

Json member_cmd(const Options& o) {
  GroupContext ctx = context(o);
  MemberResult r = member(input_map(o), ctx);
  Json j{{"member", r.ok}};
  if (!r.ok) j["diagnostic"] = r.diagnostic;
  return j;
}

Json factor_cmd(const Options& o) {
  PSet ps = make_pset(long_list(o.pp.empty() ? std::to_string(o.p) : o.pp));
  PLMap f = input_map(o);
  auto [d, r] = factor(f, ps);
  return {{"domain", to_json(d)}, {"range", to_json(r)}};
}

Json decompose_cmd(const Options& o) {
  PSet ps = make_pset(long_list(o.pp.empty() ? std::to_string(o.p) : o.pp));
  GenWord w = decompose(input_map(o), ps);
  return {{"word", to_json(w)}, {"length", w.size()}};
}

Presentation presentation(const Options& o) {
  return presentation_by_name(o.name, o.p, o.pp.empty() ? std::vector<long>{} : long_list(o.pp));
}

Word input_word(const Options& o, const Presentation& pr) {
  if (!o.word.empty()) return word_from_json(pr, load_json(o.word));
  if (!o.in.empty()) return word_from_json(pr, load_json(o.in[0]));
  throw UsageError("missing --word");
}

Json normalform_cmd(const Options& o) {
  Presentation pr = presentation(o);
  if (!pr.unit_interval()) throw Error("BadPresentation", "normal forms exist for the presentations of G[p] only");
  Word w = input_word(o, pr);
  if (pr.kind != PresentationKind::Gp_infinite) w = Word(Presentation::gp_infinite(pr.p), w.letters);
  return {{"seminormal", to_json(seminormal(w))}, {"normal", to_json(normal_form(w))}};
}

Json verify_cmd(const Options& o) {
  Presentation pr = presentation(o);
  PresentationReport r = verify_presentation(pr, o.bound, o.index_bound);
  Json fams = Json::object();
  for (const auto& f : r.families) fams[f.family] = f.count;
  return {{"presentation", r.name}, {"families", fams}, {"total", r.total()}, {"verified", true}};
}

Json iso_classes_cmd(const Options& o) {
  GroupContext ctx = context(o);
  Json j{{"delta", Json::parse(ctx.P.delta().get_str())}, {"classes", ctx.P.interval_iso_classes()}};
  j["count"] = j["classes"].size();
  if (!o.s.empty()) {
    Rational s = parse_rational(o.s);
    Json table = Json::array();
    for (long b = 1; b <= to_long(need(o.bmax, "--bmax").get_num()); ++b) table.push_back(ctx.P.q_b_order(s, b));
    j["q_b"] = table;
  }
  return j;
}

LatticeSubgroup lattice(const std::string& src) {
  Json j = load_json(src);
  LatticeSubgroup q;
  for (const auto& g : j) {
    if (!g.is_array() || g.size() != 2) throw Error("BadInput", "lattice generators are integer pairs");
    q.generators.push_back({g[0].get<long>(), g[1].get<long>()});
  }
  return q;
}

Json to_json_params(const LatticeParams& p) {
  return {{"m", p.m}, {"n", p.n}, {"c", p.c}, {"d", p.d}, {"e", p.e}, {"index", p.index}};
}

Json subgroup_iso_cmd(const Options& o) {
  if (o.q.empty() || o.qbar.empty()) throw UsageError("subgroup-iso needs --q and --qbar");
  LatticeSubgroup q = lattice(o.q), qbar = lattice(o.qbar);
  return {{"q", to_json_params(params(q))}, {"qbar", to_json_params(params(qbar))}, {"isomorphic", iso_decide(q, qbar)}};
}

Json conjugate_tail_cmd(const Options& o) {
  std::vector<Rational> v = rational_list(o.params);
  auto want = [&](std::size_t n) {
    if (v.size() != n) throw UsageError("--params for " + o.map + " needs " + std::to_string(n) + " values");
  };
  auto as_long = [](const Rational& q) {
    if (q.get_den() != 1) throw UsageError("expected an integer parameter");
    return to_long(q.get_num());
  };
  std::optional<TailMap> T;
  if (o.map == "phi1") want(2), T = make_phi1(v[0], v[1]);
  else if (o.map == "psi2") want(2), T = make_psi2(v[0], v[1]);
  else if (o.map == "rescale" || o.map == "e07") want(3), T = make_rescale(v[0], v[1], v[2]);
  else if (o.map == "mu_m") want(3), T = make_mu_m(as_long(v[0]), v[1], v[2]);
  else if (o.map == "nu_n") want(3), T = make_nu_n(as_long(v[0]), v[1], v[2]);
  else throw UsageError("--map must be phi1, psi2, rescale, mu_m or nu_n");
  if (o.inverse) T = T->inverse();
  return to_json(conj(*T, input_map(o)));
}

std::string render_cmd(const Options& o) {
  std::optional<SvgWindow> w;
  if (!o.lo.empty() || !o.hi.empty()) w = SvgWindow{need(o.lo, "--lo"), need(o.hi, "--hi")};
  return render_svg(input_map(o), static_cast<int>(o.width), static_cast<int>(o.height), w);
}

// Random product of bumps b(a, D; p) in a compact context with ends in A.
Json sample_cmd(const Options& o) {
  GroupContext ctx = context(o);
  const auto& I = ctx.interval;
  if (I.kind != IntervalKind::compact || !ctx.lo_in_A() || !ctx.hi_in_A())
    throw Error("UnsupportedContext", "sampling needs a compact interval with endpoints in A");
  const char* env = std::getenv("PLGROUP_SEED");
  std::mt19937_64 rng(env ? std::strtoull(env, nullptr, 10) : std::random_device{}());
  const auto& P = ctx.P;
  const Rational lo = *I.lo, hi = *I.hi;
  Rational unit = (hi - lo) / Rational(P.N() * P.N() * P.N());
  long cells = to_long(Rational((hi - lo) / unit).get_num());
  std::uniform_int_distribution<long> cell(0, cells - 1);
  std::uniform_int_distribution<int> expo(-2, 2);
  Json out = Json::array();
  for (long k = 0; k < o.count; ++k) {
    PLMap f;
    for (long i = 0; i < o.bumps; ++i) {
      IntVec e;
      for (std::size_t g = 0; g < P.generators().size(); ++g) e.push_back(expo(rng));
      Rational p = P.from_exponents(e);
      Rational a = lo + unit * cell(rng);
      Rational d = unit;
      if (p == 1 || a + (p + 1) * d > hi) continue;
      while (a + (p + 1) * d * P.N() <= hi && cell(rng) % 2) d *= Rational(P.N());
      f = compose(f, b_map(a, d, p));
    }
    out.push_back(to_json(f));
  }
  return o.count == 1 ? out[0] : out;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw UsageError("cannot write '" + o.out + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations in groups of piecewise-linear homeomorphisms"};
  app.require_subcommand(1);
  Options o;

  auto ctx_flags = [&](CLI::App* s) {
    s->add_option("--ctx", o.ctx, "context JSON (file, '-' or inline)");
    s->add_option("--gens", o.gens, "slope generators, comma separated; context [0,1]");
  };
  auto in_flag = [&](CLI::App* s) { s->add_option("--in", o.in, "element JSON (file, '-' or inline); repeatable"); };
  auto word_flags = [&](CLI::App* s) {
    s->add_option("--name", o.name, "Gp_finite, Gp_infinite, Ghalf_finite, F_classic or GPP");
    s->add_option("--p", o.p, "p (or p0 for GPP)");
    s->add_option("--pp", o.pp, "integer generating set for GPP, comma separated");
  };

  auto* ring = app.add_subcommand("ring-info", "slope group, A, delta and abelianization ranks");
  ctx_flags(ring);
  auto* cons = app.add_subcommand("construct", "build an element");
  ctx_flags(cons);
  in_flag(cons);
  cons->add_option("--mode", o.mode, "map_interval, tuple or approximate");
  cons->add_option("--a", o.a);
  cons->add_option("--c", o.c);
  cons->add_option("--a2", o.a2);
  cons->add_option("--c2", o.c2);
  cons->add_option("--points", o.points, "comma separated");
  cons->add_option("--images", o.images, "comma separated");
  cons->add_option("--eps", o.eps);
  auto* comp = app.add_subcommand("compose", "f1 o f2 o ... for the given --in elements");
  in_flag(comp);
  auto* inv = app.add_subcommand("invert", "inverse element");
  in_flag(inv);
  auto* ev = app.add_subcommand("eval", "value at --t");
  in_flag(ev);
  ev->add_option("--t", o.t)->required();
  auto* mem = app.add_subcommand("member", "membership in the context");
  ctx_flags(mem);
  in_flag(mem);
  auto* nu_c = app.add_subcommand("nu", "break vector");
  ctx_flags(nu_c);
  in_flag(nu_c);
  auto* fac = app.add_subcommand("factor", "regular subdivision codes of an element of G[P]");
  in_flag(fac);
  fac->add_option("--p", o.p);
  fac->add_option("--pp", o.pp);
  auto* dec = app.add_subcommand("decompose", "word in the generators of G[P]");
  in_flag(dec);
  dec->add_option("--p", o.p);
  dec->add_option("--pp", o.pp);
  auto* nf = app.add_subcommand("normalform", "seminormal and normal form of a word");
  word_flags(nf);
  in_flag(nf);
  nf->add_option("--word", o.word, "JSON list of letters");
  auto* wp = app.add_subcommand("wordproblem", "decide whether a word is trivial");
  word_flags(wp);
  in_flag(wp);
  wp->add_option("--word", o.word, "JSON list of letters");
  auto* vp = app.add_subcommand("verify-presentation", "evaluate all relators");
  word_flags(vp);
  vp->add_option("--bound", o.bound, "largest n in infinite families");
  vp->add_option("--index-bound", o.index_bound, "largest generator index");
  auto* iso = app.add_subcommand("iso-classes", "isomorphism classes of interval lengths");
  ctx_flags(iso);
  iso->add_option("--s", o.s, "unit of A for the Q_b table");
  iso->add_option("--bmax", o.bmax);
  auto* sub = app.add_subcommand("subgroup-iso", "finite-index lattice subgroups");
  sub->add_option("--q", o.q, "generators as JSON pairs");
  sub->add_option("--qbar", o.qbar, "generators as JSON pairs");
  auto* ct = app.add_subcommand("conjugate-tail", "conjugate by a tail map");
  in_flag(ct);
  ct->add_option("--map", o.map, "phi1, psi2, rescale, mu_m or nu_n")->required();
  ct->add_option("--params", o.params, "phi1/psi2: b,p  rescale: b,bbar,p  mu_m/nu_n: m,b,p")->required();
  ct->add_flag("--inverse", o.inverse, "conjugate by the inverse tail map");
  auto* svg = app.add_subcommand("render-svg", "rectangle diagram");
  in_flag(svg);
  svg->add_option("--width", o.width);
  svg->add_option("--height", o.height);
  svg->add_option("--lo", o.lo, "window start");
  svg->add_option("--hi", o.hi, "window end");
  auto* smp = app.add_subcommand("sample", "random elements (seed from PLGROUP_SEED)");
  ctx_flags(smp);
  smp->add_option("--count", o.count);
  smp->add_option("--bumps", o.bumps);
  for (auto* s : app.get_subcommands({})) s->add_option("--out", o.out, "write the result here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << Json{{"error", "Usage"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }

  try {
    std::string text;
    auto json = [&](const Json& j) { text = j.dump() + "\n"; };
    if (ring->parsed()) json(ring_info(o));
    else if (cons->parsed()) json(construct_cmd(o));
    else if (comp->parsed()) {
      if (o.in.empty()) throw UsageError("compose needs --in elements");
      PLMap f;
      for (std::size_t k = 0; k < o.in.size(); ++k) f = compose(f, input_map(o, k));
      json(to_json(f));
    } else if (inv->parsed()) json(to_json(inverse(input_map(o))));
    else if (ev->parsed()) json({{"value", rational_str(input_map(o)(parse_rational(o.t)))}});
    else if (mem->parsed()) json(member_cmd(o));
    else if (nu_c->parsed()) json(to_json(nu(input_map(o), context(o))));
    else if (fac->parsed()) json(factor_cmd(o));
    else if (dec->parsed()) json(decompose_cmd(o));
    else if (nf->parsed()) json(normalform_cmd(o));
    else if (wp->parsed()) {
      Presentation pr = presentation(o);
      json({{"identity", word_problem(input_word(o, pr))}});
    } else if (vp->parsed()) json(verify_cmd(o));
    else if (iso->parsed()) json(iso_classes_cmd(o));
    else if (sub->parsed()) json(subgroup_iso_cmd(o));
    else if (ct->parsed()) json(conjugate_tail_cmd(o));
    else if (svg->parsed()) text = render_cmd(o);
    else if (smp->parsed()) json(sample_cmd(o));
    emit(o, text);
    return 0;
  } catch (const UsageError& e) {
    std::cout << Json{{"error", "Usage"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cout << to_json(e).dump() << "\n";
    return e.code() == "BadInput" || e.code() == "ParseError" ? 1 : 2;
  } catch (const Json::exception& e) {
    std::cout << Json{{"error", "BadInput"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}
