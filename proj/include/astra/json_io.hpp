#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "astra/cells.hpp"
#include "astra/eqstruct.hpp"
#include "astra/growth.hpp"
#include "astra/presentation.hpp"

namespace astra {

// Order-preserving JSON keeps serialization deterministic: objects print in
// the order fields are inserted, never in hash order.
using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& jfield(const Json& j, const char* key) {
  if (!j.is_object()) throw error(std::string("json: expected an object with field '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw error(std::string("json: missing field '") + key + "'");
  return *it;
}

inline int jint(const Json& j) {
  if (!j.is_number_integer()) throw error("json: expected an integer");
  return j.get<int>();
}

inline std::string jstring(const Json& j) {
  if (!j.is_string()) throw error("json: expected a string");
  return j.get<std::string>();
}

inline std::vector<std::string> jstrings(const Json& j) {
  if (!j.is_array()) throw error("json: expected an array of strings");
  std::vector<std::string> out;
  for (const Json& e : j) out.push_back(jstring(e));
  return out;
}

inline std::vector<int> jints(const Json& j) {
  if (!j.is_array()) throw error("json: expected an array of integers");
  std::vector<int> out;
  for (const Json& e : j) out.push_back(jint(e));
  return out;
}

}  // namespace detail

// Integers print as JSON numbers while exactly representable in a double
// (|v| < 2^53) and as decimal strings beyond that.
inline Json json_of_mpz(const mpz_class& v) {
  static const mpz_class limit = mpz_class(1) << 53;
  if (v > -limit && v < limit) return Json(v.get_si());
  return Json(v.get_str());
}

inline mpz_class mpz_of_json(const Json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) {
    try {
      return mpz_class(j.get<std::string>(), 10);
    } catch (const std::invalid_argument&) {
      throw error("json: bad integer string '" + j.get<std::string>() + "'");
    }
  }
  throw error("json: expected an integer or a decimal string");
}

inline std::vector<mpz_class> mpz_vector_of_json(const Json& j) {
  if (!j.is_array()) throw error("json: expected an array of integers");
  std::vector<mpz_class> out;
  for (const Json& e : j) out.push_back(mpz_of_json(e));
  return out;
}

inline Json json_of_mpz_vector(const std::vector<mpz_class>& v) {
  Json out = Json::array();
  for (const mpz_class& x : v) out.push_back(json_of_mpz(x));
  return out;
}

// Rationals reuse the integer forms when the denominator is 1 and print as
// "num/den" strings otherwise.
inline Json json_of_mpq(const mpq_class& v) {
  if (v.get_den() == 1) return json_of_mpz(v.get_num());
  return Json(v.get_str());
}

inline mpq_class mpq_of_json(const Json& j) {
  if (j.is_string() && j.get<std::string>().find('/') != std::string::npos) {
    try {
      mpq_class q(j.get<std::string>());
      q.canonicalize();
      return q;
    } catch (const std::invalid_argument&) {
      throw error("json: bad rational string '" + j.get<std::string>() + "'");
    }
  }
  return mpq_class(mpz_of_json(j));
}

// ---------------------------------------------------------------------------
// Words. A word prints via Alphabet::format: concatenated tokens when every
// token is one character, space-separated tokens otherwise. Parsing mirrors
// that choice, so the representation is determined by the alphabet.

inline std::string word_to_text(const Alphabet& sigma, const Word& w) { return sigma.format(w); }

inline Word word_from_text(const Alphabet& sigma, const std::string& text) {
  bool single = true;
  for (const std::string& t : sigma.tokens()) single = single && t.size() == 1;
  if (single) return sigma.word(text);
  Word w;
  size_t i = 0;
  while (i < text.size()) {
    size_t j = text.find(' ', i);
    if (j == std::string::npos) j = text.size();
    std::string tok = text.substr(i, j - i);
    int sym = sigma.index_of(tok);
    if (sym < 0) throw error("json: unknown token '" + tok + "'");
    w.push_back(sym);
    i = j + (j < text.size() ? 1 : 0);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Automata: {"alphabet":[tokens], "states":N, "initial":[...],
// "accepting":[...], "transitions":[[from,symbol,to],...],
// "deterministic":bool}. The constructor sorts and deduplicates, so
// parse + serialize is canonical: transitions ascend lexicographically.

namespace detail {

inline Json automaton_body(const Automaton& a, Json alphabet) {
  Json j;
  j["alphabet"] = std::move(alphabet);
  j["states"] = a.states();
  j["initial"] = a.initial();
  j["accepting"] = a.accepting();
  Json tr = Json::array();
  for (const Transition& t : a.transitions()) tr.push_back(Json::array({t.from, t.sym, t.to}));
  j["transitions"] = std::move(tr);
  j["deterministic"] = a.deterministic();
  return j;
}

// States, state sets, and transitions of an acceptor, with symbols remapped
// through remap (identity when empty). The deterministic field is derived on
// construction, never read back.
inline Automaton automaton_with_alphabet(const Json& j, Alphabet alphabet, const std::vector<int>& remap) {
  int states = jint(jfield(j, "states"));
  std::vector<int> initial = jints(jfield(j, "initial"));
  std::vector<int> accepting = jints(jfield(j, "accepting"));
  const Json& jt = jfield(j, "transitions");
  if (!jt.is_array()) throw error("json: transitions must be an array");
  std::vector<Transition> transitions;
  for (const Json& e : jt) {
    if (!e.is_array() || e.size() != 3) throw error("json: each transition is [from, symbol, to]");
    int sym = jint(e[1]);
    if (!remap.empty()) {
      if (sym < 0 || sym >= static_cast<int>(remap.size())) throw error("json: transition symbol out of range");
      sym = remap[sym];
    }
    transitions.push_back({jint(e[0]), sym, jint(e[2])});
  }
  return Automaton(std::move(alphabet), states, std::move(initial), std::move(accepting), std::move(transitions));
}

}  // namespace detail

inline Json automaton_to_json(const Automaton& a) {
  return detail::automaton_body(a, Json(a.alphabet().tokens()));
}

inline Automaton automaton_from_json(const Json& j) {
  Alphabet sigma(detail::jstrings(detail::jfield(j, "alphabet")));
  return detail::automaton_with_alphabet(j, std::move(sigma), {});
}

// ---------------------------------------------------------------------------
// Relations: {"arity":n, "base":[tokens], "acceptor":<automaton>} where the
// acceptor's alphabet lists each padded symbol as its array of track tokens,
// "_" standing for the pad ("_" is excluded from bases by construction).
// Arbitrary symbol orderings are accepted on input and remapped to the
// canonical mixed-radix order.

namespace detail {

inline Json padded_acceptor_to_json(const PaddedAlphabet& pa, const Automaton& acceptor) {
  Json alphabet = Json::array();
  for (int sym = 0; sym < pa.alphabet().size(); ++sym) {
    Json entry = Json::array();
    for (int t = 0; t < pa.arity(); ++t) {
      int comp = pa.component(sym, t);
      entry.push_back(comp == pa.pad() ? "_" : pa.base().token(comp));
    }
    alphabet.push_back(std::move(entry));
  }
  return automaton_body(acceptor, std::move(alphabet));
}

inline Automaton padded_acceptor_from_json(const PaddedAlphabet& pa, const Json& j) {
  const Json& alphabet = jfield(j, "alphabet");
  if (!alphabet.is_array()) throw error("json: acceptor alphabet must be an array");
  std::vector<int> remap;
  std::vector<bool> seen(pa.alphabet().size(), false);
  for (const Json& entry : alphabet) {
    if (!entry.is_array() || static_cast<int>(entry.size()) != pa.arity())
      throw error("json: padded symbol must list one token per track");
    std::vector<int> comps(pa.arity());
    for (int t = 0; t < pa.arity(); ++t) {
      std::string tok = jstring(entry[t]);
      comps[t] = tok == "_" ? pa.pad() : pa.base().index_of(tok);
      if (comps[t] < 0) throw error("json: unknown track token '" + tok + "'");
    }
    int sym = pa.symbol(comps);
    if (seen[sym]) throw error("json: duplicate padded symbol");
    seen[sym] = true;
    remap.push_back(sym);
  }
  return automaton_with_alphabet(j, pa.alphabet(), remap);
}

}  // namespace detail

inline Json relation_to_json(const RegularRelation& r) {
  Json j;
  j["arity"] = r.arity();
  j["base"] = r.base().tokens();
  j["acceptor"] = detail::padded_acceptor_to_json(r.pa(), r.acceptor());
  return j;
}

inline RegularRelation relation_from_json(const Json& j) {
  int arity = detail::jint(detail::jfield(j, "arity"));
  Alphabet base(detail::jstrings(detail::jfield(j, "base")));
  PaddedAlphabet pa(std::move(base), arity);
  Automaton acceptor = detail::padded_acceptor_from_json(pa, detail::jfield(j, "acceptor"));
  return RegularRelation(std::move(pa), std::move(acceptor));
}

// ---------------------------------------------------------------------------
// Presentations: {"base":[tokens], "domain":<automaton>,
// "relations":{"R":{"arity":n,"acceptor":<automaton>},...}}. Relation
// acceptors use the padded-symbol form over the shared base.

inline Json presentation_to_json(const Presentation& p) {
  Json j;
  j["base"] = p.base().tokens();
  j["domain"] = automaton_to_json(p.domain());
  Json rels = Json::object();
  for (const auto& [name, r] : p.relations()) {
    Json e;
    e["arity"] = r.arity();
    e["acceptor"] = detail::padded_acceptor_to_json(r.pa(), r.acceptor());
    rels[name] = std::move(e);
  }
  j["relations"] = std::move(rels);
  return j;
}

inline Presentation presentation_from_json(const Json& j) {
  Alphabet base(detail::jstrings(detail::jfield(j, "base")));
  Automaton domain = automaton_from_json(detail::jfield(j, "domain"));
  const Json& rels = detail::jfield(j, "relations");
  if (!rels.is_object()) throw error("json: relations must be an object");
  std::map<std::string, RegularRelation> out;
  for (const auto& [name, e] : rels.items()) {
    int arity = detail::jint(detail::jfield(e, "arity"));
    PaddedAlphabet pa(base, arity);
    Automaton acceptor = detail::padded_acceptor_from_json(pa, detail::jfield(e, "acceptor"));
    out.emplace(name, RegularRelation(std::move(pa), std::move(acceptor)));
  }
  return Presentation(std::move(base), std::move(domain), std::move(out));
}

// ---------------------------------------------------------------------------
// Growth: {"prefixes":[words], "loops":[words]} relative to an alphabet;
// a report mirrors its fields, patterns listed only when polynomial.

inline Json pattern_to_json(const Alphabet& sigma, const BoundedPattern& p) {
  Json j;
  Json pre = Json::array(), loops = Json::array();
  for (const Word& w : p.prefixes) pre.push_back(word_to_text(sigma, w));
  for (const Word& w : p.loops) loops.push_back(word_to_text(sigma, w));
  j["prefixes"] = std::move(pre);
  j["loops"] = std::move(loops);
  return j;
}

inline BoundedPattern pattern_from_json(const Alphabet& sigma, const Json& j) {
  BoundedPattern p;
  for (const std::string& s : detail::jstrings(detail::jfield(j, "prefixes")))
    p.prefixes.push_back(word_from_text(sigma, s));
  for (const std::string& s : detail::jstrings(detail::jfield(j, "loops")))
    p.loops.push_back(word_from_text(sigma, s));
  return p;
}

inline Json growth_report_to_json(const Alphabet& sigma, const GrowthReport& r) {
  Json j;
  j["polynomial"] = r.polynomial;
  j["degree"] = r.degree;
  Json pats = Json::array();
  for (const BoundedPattern& p : r.patterns) pats.push_back(pattern_to_json(sigma, p));
  j["patterns"] = std::move(pats);
  return j;
}

inline Json normalized_to_json(const Normalized& n) {
  Json j;
  Json pats = Json::array();
  for (const BoundedPattern& p : n.patterns) pats.push_back(pattern_to_json(n.alphabet, p));
  j["patterns"] = std::move(pats);
  j["alphabet"] = n.alphabet.tokens();
  j["recode"] = relation_to_json(n.recode.relation);
  return j;
}

// ---------------------------------------------------------------------------
// Cells: {"n":n, "s":s, "sigma":[...], "d":[int or "inf",...]}; a union
// wraps its cells as {"n","s","cells":[...]}.

inline Json cell_to_json(const SCell& c) {
  Json j;
  j["n"] = c.n;
  j["s"] = c.s;
  j["sigma"] = c.sigma;
  Json d = Json::array();
  for (int g : c.d) {
    if (g == kGapInf)
      d.push_back("inf");
    else
      d.push_back(g);
  }
  j["d"] = std::move(d);
  return j;
}

inline SCell cell_from_json(const Json& j) {
  const Json& jd = detail::jfield(j, "d");
  if (!jd.is_array()) throw error("json: cell gaps must be an array");
  std::vector<int> d;
  for (const Json& e : jd) {
    if (e.is_string()) {
      if (e.get<std::string>() != "inf") throw error("json: cell gap must be an integer or \"inf\"");
      d.push_back(kGapInf);
    } else {
      d.push_back(detail::jint(e));
    }
  }
  return SCell(detail::jint(detail::jfield(j, "n")), detail::jint(detail::jfield(j, "s")),
               detail::jints(detail::jfield(j, "sigma")), std::move(d));
}

inline Json cell_union_to_json(const CellUnion& u) {
  Json j;
  j["n"] = u.n;
  j["s"] = u.s;
  Json cells = Json::array();
  for (const SCell& c : u.cells) cells.push_back(cell_to_json(c));
  j["cells"] = std::move(cells);
  return j;
}

inline CellUnion cell_union_from_json(const Json& j) {
  CellUnion u;
  u.n = detail::jint(detail::jfield(j, "n"));
  u.s = detail::jint(detail::jfield(j, "s"));
  const Json& jc = detail::jfield(j, "cells");
  if (!jc.is_array()) throw error("json: cells must be an array");
  for (const Json& e : jc) u.cells.push_back(cell_from_json(e));
  return u;
}

// ---------------------------------------------------------------------------
// Basic polynomials print as their term list
// [{"coeff":c,"atoms":[{"a":[...],"b":b,"c":c},...]},...]; the arity is
// supplied by context when parsing. Fiber data pairs a guard formula text
// with either "inf" or such a term list.

inline Json basic_poly_to_json(const BasicPolynomial& p) {
  Json terms = Json::array();
  for (const BasicTerm& t : p.terms) {
    Json jt;
    jt["coeff"] = json_of_mpz(t.coeff);
    Json atoms = Json::array();
    for (const BinomAtom& a : t.atoms) {
      Json ja;
      ja["a"] = json_of_mpz_vector(a.a);
      ja["b"] = json_of_mpz(a.b);
      ja["c"] = static_cast<long>(a.c);
      atoms.push_back(std::move(ja));
    }
    jt["atoms"] = std::move(atoms);
    terms.push_back(std::move(jt));
  }
  return terms;
}

inline BasicPolynomial basic_poly_from_json(const Json& j, int arity) {
  if (!j.is_array()) throw error("json: basic polynomial must be an array of terms");
  BasicPolynomial p{arity, {}};
  for (const Json& jt : j) {
    BasicTerm t;
    t.coeff = mpz_of_json(detail::jfield(jt, "coeff"));
    const Json& atoms = detail::jfield(jt, "atoms");
    if (!atoms.is_array()) throw error("json: atoms must be an array");
    for (const Json& ja : atoms) {
      BinomAtom a;
      a.a = mpz_vector_of_json(detail::jfield(ja, "a"));
      if (static_cast<int>(a.a.size()) != arity) throw error("json: binomial atom arity mismatch");
      a.b = mpz_of_json(detail::jfield(ja, "b"));
      int c = detail::jint(detail::jfield(ja, "c"));
      if (c < 0) throw error("json: binomial atom depth must be nonnegative");
      a.c = static_cast<unsigned long>(c);
      t.atoms.push_back(std::move(a));
    }
    p.terms.push_back(std::move(t));
  }
  return p;
}

inline Json fiber_to_json(const FiberData& f) {
  Json j;
  j["guard"] = format_omega(f.guard ? f.guard : o_true());
  if (f.value)
    j["value"] = basic_poly_to_json(*f.value);
  else
    j["value"] = "inf";
  return j;
}

inline FiberData fiber_from_json(const Json& j, int arity) {
  FiberData f;
  f.guard = parse_omega(detail::jstring(detail::jfield(j, "guard")));
  const Json& v = detail::jfield(j, "value");
  if (v.is_string()) {
    if (v.get<std::string>() != "inf") throw error("json: fiber value must be \"inf\" or a term list");
  } else {
    f.value = basic_poly_from_json(v, arity);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Affine maps and semilinear sets. Periods and matrix rows print row-major:
// each inner array is one period vector (a column of the map) or one matrix
// row, respectively.

inline Json affine_to_json(const AffineMap& m) {
  Json j;
  j["offset"] = json_of_mpz_vector(m.offset());
  Json cols = Json::array();
  for (const auto& c : m.columns()) cols.push_back(json_of_mpz_vector(c));
  j["columns"] = std::move(cols);
  return j;
}

inline AffineMap affine_from_json(const Json& j) {
  std::vector<std::vector<mpz_class>> cols;
  const Json& jc = detail::jfield(j, "columns");
  if (!jc.is_array()) throw error("json: columns must be an array");
  for (const Json& e : jc) cols.push_back(mpz_vector_of_json(e));
  return AffineMap(mpz_vector_of_json(detail::jfield(j, "offset")), std::move(cols));
}

inline Json semilinear_to_json(const SemilinearSet& s) {
  Json j;
  j["n"] = s.dim();
  Json pieces = Json::array();
  for (const LinearSet& l : s.pieces()) {
    Json p;
    p["offset"] = json_of_mpz_vector(l.map().offset());
    Json periods = Json::array();
    for (const auto& c : l.map().columns()) periods.push_back(json_of_mpz_vector(c));
    p["periods"] = std::move(periods);
    pieces.push_back(std::move(p));
  }
  j["pieces"] = std::move(pieces);
  j["disjointSimple"] = s.disjoint_simple();
  return j;
}

inline SemilinearSet semilinear_from_json(const Json& j) {
  int n = detail::jint(detail::jfield(j, "n"));
  const Json& jp = detail::jfield(j, "pieces");
  if (!jp.is_array()) throw error("json: pieces must be an array");
  std::vector<LinearSet> pieces;
  for (const Json& e : jp) {
    std::vector<std::vector<mpz_class>> periods;
    const Json& jper = detail::jfield(e, "periods");
    if (!jper.is_array()) throw error("json: periods must be an array");
    for (const Json& col : jper) periods.push_back(mpz_vector_of_json(col));
    pieces.emplace_back(AffineMap(mpz_vector_of_json(detail::jfield(e, "offset")), std::move(periods)));
  }
  const Json& ds = detail::jfield(j, "disjointSimple");
  if (!ds.is_boolean()) throw error("json: disjointSimple must be a boolean");
  return SemilinearSet(n, std::move(pieces), ds.get<bool>());
}

// ---------------------------------------------------------------------------
// Vector partition functions: {"rows":[[...],...]} row-major; generalized
// sums add per-term shifts: {"n":n,"terms":[{"rows":...,"shift":[...]},...]}.

inline Json vpf_to_json(const VectorPartitionFn& psi) {
  Json j;
  Json rows = Json::array();
  for (const auto& r : psi.rows()) rows.push_back(json_of_mpz_vector(r));
  j["rows"] = std::move(rows);
  return j;
}

inline VectorPartitionFn vpf_from_json(const Json& j) {
  const Json& jr = detail::jfield(j, "rows");
  if (!jr.is_array()) throw error("json: rows must be an array");
  std::vector<std::vector<mpz_class>> rows;
  for (const Json& e : jr) rows.push_back(mpz_vector_of_json(e));
  return VectorPartitionFn(std::move(rows));
}

inline Json gvpf_to_json(const GeneralizedVpf& g) {
  Json j;
  j["n"] = g.dim();
  Json terms = Json::array();
  for (const GvpfTerm& t : g.terms()) {
    Json jt = vpf_to_json(t.psi);
    jt["shift"] = json_of_mpz_vector(t.shift);
    terms.push_back(std::move(jt));
  }
  j["terms"] = std::move(terms);
  return j;
}

inline GeneralizedVpf gvpf_from_json(const Json& j) {
  int n = detail::jint(detail::jfield(j, "n"));
  const Json& jt = detail::jfield(j, "terms");
  if (!jt.is_array()) throw error("json: terms must be an array");
  std::vector<GvpfTerm> terms;
  for (const Json& e : jt)
    terms.push_back({vpf_from_json(e), mpz_vector_of_json(detail::jfield(e, "shift"))});
  return GeneralizedVpf(n, std::move(terms));
}

// ---------------------------------------------------------------------------
// Polynomials and equivalence-structure descriptors:
// {"arity":n,"monomials":[{"coeff":c,"exps":[...]},...]} and
// {"polys":[...],"infiniteClasses":int or "omega"}. Monomials ascend in the
// exponent order of the coefficient map.

inline Json poly_to_json(const Polynomial& p) {
  Json j;
  j["arity"] = p.arity;
  Json mons = Json::array();
  for (const auto& [exps, coeff] : p.coeffs) {
    Json m;
    m["coeff"] = json_of_mpq(coeff);
    m["exps"] = exps;
    mons.push_back(std::move(m));
  }
  j["monomials"] = std::move(mons);
  return j;
}

inline Polynomial poly_from_json(const Json& j) {
  Polynomial p(detail::jint(detail::jfield(j, "arity")));
  const Json& mons = detail::jfield(j, "monomials");
  if (!mons.is_array()) throw error("json: monomials must be an array");
  for (const Json& m : mons) {
    std::vector<int> exps = detail::jints(detail::jfield(m, "exps"));
    if (static_cast<int>(exps.size()) != p.arity) throw error("json: monomial exponent arity mismatch");
    for (int e : exps)
      if (e < 0) throw error("json: negative exponent");
    mpq_class c = mpq_of_json(detail::jfield(m, "coeff"));
    if (c != 0) {
      auto [it, fresh] = p.coeffs.emplace(std::move(exps), std::move(c));
      if (!fresh) throw error("json: duplicate monomial");
    }
  }
  return p;
}

inline Json descriptor_to_json(const EqDescriptor& d) {
  Json j;
  Json polys = Json::array();
  for (const Polynomial& p : d.polys) polys.push_back(poly_to_json(p));
  j["polys"] = std::move(polys);
  if (d.infinite_classes)
    j["infiniteClasses"] = *d.infinite_classes;
  else
    j["infiniteClasses"] = "omega";
  return j;
}

inline EqDescriptor descriptor_from_json(const Json& j) {
  const Json& jp = detail::jfield(j, "polys");
  if (!jp.is_array()) throw error("json: polys must be an array");
  std::vector<Polynomial> polys;
  for (const Json& e : jp) polys.push_back(poly_from_json(e));
  const Json& inf = detail::jfield(j, "infiniteClasses");
  std::optional<long> count;
  if (inf.is_string()) {
    if (inf.get<std::string>() != "omega") throw error("json: infiniteClasses must be an integer or \"omega\"");
  } else {
    count = static_cast<long>(detail::jint(inf));
  }
  return EqDescriptor(std::move(polys), count);
}

// Class-size counts keyed by decimal size, ascending.
inline Json multiset_to_json(const ClassMultiset& m) {
  Json j;
  Json counts = Json::object();
  for (const auto& [size, count] : m.counts) counts[std::to_string(size)] = count;
  j["counts"] = std::move(counts);
  j["infiniteClasses"] = m.infinite_classes;
  j["truncated"] = m.truncated;
  return j;
}

// ---------------------------------------------------------------------------
// Function-graph fibers and interpretations carry their formulas as text.

inline Json fiber_spec_to_json(const FiberSpec& f) {
  Json j;
  j["m"] = f.m;
  j["n"] = f.n;
  j["graph"] = format_omega(f.graph ? f.graph : o_true());
  return j;
}

inline FiberSpec fiber_spec_from_json(const Json& j) {
  FiberSpec f;
  f.m = detail::jint(detail::jfield(j, "m"));
  f.n = detail::jint(detail::jfield(j, "n"));
  f.graph = parse_omega(detail::jstring(detail::jfield(j, "graph")));
  return f;
}

inline Json interpretation_to_json(const Interpretation& tau) {
  Json j;
  j["dimension"] = tau.dimension;
  j["deltaVars"] = tau.delta_vars;
  j["delta"] = format_formula(tau.delta);
  Json rels = Json::object();
  for (const auto& [name, rd] : tau.relations) {
    Json e;
    e["arity"] = rd.arity;
    e["vars"] = rd.vars;
    e["phi"] = format_formula(rd.phi);
    rels[name] = std::move(e);
  }
  j["relations"] = std::move(rels);
  return j;
}

inline Interpretation interpretation_from_json(const Json& j) {
  Interpretation tau;
  tau.dimension = detail::jint(detail::jfield(j, "dimension"));
  tau.delta_vars = detail::jstrings(detail::jfield(j, "deltaVars"));
  tau.delta = parse_formula(detail::jstring(detail::jfield(j, "delta")));
  const Json& rels = detail::jfield(j, "relations");
  if (!rels.is_object()) throw error("json: relations must be an object");
  for (const auto& [name, e] : rels.items()) {
    Interpretation::RelDef rd;
    rd.arity = detail::jint(detail::jfield(e, "arity"));
    rd.vars = detail::jstrings(detail::jfield(e, "vars"));
    rd.phi = parse_formula(detail::jstring(detail::jfield(e, "phi")));
    tau.relations.emplace(name, std::move(rd));
  }
  return tau;
}

// ---------------------------------------------------------------------------
// Result-only payloads.

inline Json reach_to_json(const ReachSet& r) {
  Json j;
  j["steps"] = r.steps;
  Json sizes = Json::array();
  for (const auto& s : r.sizes) {
    if (s)
      sizes.push_back(json_of_mpz(*s));
    else
      sizes.push_back("inf");
  }
  j["sizes"] = std::move(sizes);
  j["acceptor"] = automaton_to_json(r.acceptor);
  return j;
}

inline Json check_report_to_json(const CheckReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["detail"] = r.detail;
  return j;
}

}  // namespace astra
