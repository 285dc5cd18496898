#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "astra/formula.hpp"
#include "astra/relation.hpp"

namespace astra {

// Product domain^n as a relation: every track independently ranges over the
// domain language, within convolution validity.
inline RegularRelation domain_product(const Alphabet& base, const Automaton& domain, int n) {
  PaddedAlphabet pa(base, n);
  if (n == 1) return RegularRelation(pa, domain, false);
  PaddedAlphabet one(base, 1);
  Automaton acc = lift_tracks(domain, one, pa, {0});
  for (int i = 1; i < n; ++i) acc = intersect(acc, lift_tracks(domain, one, pa, {i}));
  return RegularRelation(pa, std::move(acc), false);
}

namespace detail {

// Length-lexicographic order x <= y as a relation automaton (not yet
// restricted to any domain). Shorter words come first; equal-length words
// compare lexicographically by alphabet index.
inline Automaton llex_automaton(const PaddedAlphabet& pa) {
  // states: 0 equal so far, 1 lex-less, 2 lex-greater, 3 left shorter, 4 right shorter
  int B = pa.base().size();
  std::vector<Transition> tr;
  for (int a = 0; a < B; ++a)
    for (int b = 0; b < B; ++b) {
      int cmp = a == b ? 0 : a < b ? 1 : 2;
      tr.push_back({0, pa.symbol({a, b}), cmp});
      tr.push_back({1, pa.symbol({a, b}), 1});
      tr.push_back({2, pa.symbol({a, b}), 2});
    }
  for (int b = 0; b < B; ++b) {
    int s = pa.symbol({pa.pad(), b});
    for (int q : {0, 1, 2, 3}) tr.push_back({q, s, 3});
  }
  for (int a = 0; a < B; ++a) {
    int s = pa.symbol({a, pa.pad()});
    for (int q : {0, 1, 2, 4}) tr.push_back({q, s, 4});
  }
  return Automaton(pa.alphabet(), 5, {0}, {0, 1, 3}, std::move(tr));
}

}  // namespace detail

// An automatic presentation: base alphabet, regular domain, named regular
// relations over the domain. Relations eq, llex and lenEq are built in; a
// user relation of the same name takes precedence.
class Presentation {
 public:
  Presentation(Alphabet base, Automaton domain, std::map<std::string, RegularRelation> relations)
      : base_(std::move(base)), domain_(std::move(domain)), relations_(std::move(relations)) {
    if (domain_.alphabet() != base_) throw error("presentation: domain alphabet mismatch");
    if (is_empty(domain_)) throw error("presentation: empty domain");
    for (const auto& [name, r] : relations_) {
      if (r.base() != base_) throw error("presentation: relation '" + name + "' base mismatch");
      if (!includes(domain_product(base_, domain_, r.arity()).acceptor(), r.acceptor()))
        throw error("presentation: relation '" + name + "' leaves the domain");
    }
  }

  const Alphabet& base() const { return base_; }
  const Automaton& domain() const { return domain_; }
  const std::map<std::string, RegularRelation>& relations() const { return relations_; }

  bool has_relation(const std::string& name) const {
    return relations_.count(name) || name == "eq" || name == "=" || name == "llex" || name == "lenEq";
  }

  RegularRelation relation(const std::string& name) const {
    auto it = relations_.find(name);
    if (it != relations_.end()) return it->second;
    if (name == "eq" || name == "=") return builtin_eq();
    if (name == "llex") return builtin_llex();
    if (name == "lenEq") return builtin_len_eq();
    throw error("unknown relation '" + name + "'");
  }

  RegularRelation domain_power(int n) const { return domain_product(base_, domain_, n); }

 private:
  RegularRelation builtin_eq() const {
    PaddedAlphabet pa(base_, 2);
    std::vector<Transition> tr;
    tr.reserve(domain_.transitions().size());
    for (const auto& t : domain_.transitions()) tr.push_back({t.from, pa.symbol({t.sym, t.sym}), t.to});
    Automaton a(pa.alphabet(), domain_.states(), domain_.initial(), domain_.accepting(), std::move(tr));
    return RegularRelation(pa, std::move(a), false);
  }

  RegularRelation builtin_llex() const {
    PaddedAlphabet pa(base_, 2);
    return intersect(RegularRelation(pa, detail::llex_automaton(pa), false), domain_power(2));
  }

  RegularRelation builtin_len_eq() const {
    PaddedAlphabet pa(base_, 2);
    std::vector<Transition> tr;
    for (int s = 0; s < pa.alphabet().size(); ++s)
      if (pa.pad_mask(s) == 0) tr.push_back({0, s, 0});
    Automaton a(pa.alphabet(), 1, {0}, {0}, std::move(tr));
    return intersect(RegularRelation(pa, std::move(a), false), domain_power(2));
  }

  Alphabet base_;
  Automaton domain_;
  std::map<std::string, RegularRelation> relations_;
};

// Result of evaluating a formula: a relation over the sorted free variables,
// or a truth value for sentences.
struct Evaluated {
  std::vector<std::string> vars;
  std::optional<RegularRelation> rel;
  bool truth = false;
};

struct EvalOptions {
  // State cap for the exact counting-quantifier automaton before falling
  // back to per-tuple enumeration.
  int counting_budget = 20000;
  std::ostream* trace = nullptr;
};

namespace detail {

class Evaluator {
 public:
  Evaluator(const Presentation& p, const EvalOptions& opts) : p_(p), opts_(opts) {}

  Evaluated run(const Formula& f) { return compress(step(f)); }

  Evaluated step(const Formula& f) {
    switch (f.kind) {
      case Formula::Kind::Atom:
        return atom(f);
      case Formula::Kind::Not:
        return negate(run(*f.left));
      case Formula::Kind::And:
      case Formula::Kind::Or:
        return combine(f.kind, run(*f.left), run(*f.right));
      case Formula::Kind::Implies:
        return combine(Formula::Kind::Or, negate(run(*f.left)), run(*f.right));
      case Formula::Kind::Exists:
        return exists(f.var, run(*f.left));
      case Formula::Kind::Forall:
        return negate(exists(f.var, negate(run(*f.left))));
      case Formula::Kind::ExistsInf:
        return exists_inf(f.var, run(*f.left));
      case Formula::Kind::ExistsMod:
        return exists_mod(f.k, f.m, f.var, run(*f.left));
    }
    throw error("eval: unreachable");
  }

  // Intermediate automata pile up dead states and nondeterminism from
  // projections; keeping every node minimal bounds the products built by
  // conjunctions.
  static Evaluated compress(Evaluated e) {
    if (e.rel)
      e.rel = RegularRelation(e.rel->pa(), minimize(determinize(trim(e.rel->acceptor()))), false);
    return e;
  }

 private:
  const Presentation& p_;
  const EvalOptions& opts_;
  std::map<int, RegularRelation> dompow_;
  std::optional<bool> domain_infinite_;

  void trace(const std::string& msg) {
    if (opts_.trace) *opts_.trace << msg << "\n";
  }

  const RegularRelation& dompow(int n) {
    auto it = dompow_.find(n);
    if (it == dompow_.end()) it = dompow_.emplace(n, p_.domain_power(n)).first;
    return it->second;
  }

  bool domain_infinite() {
    if (!domain_infinite_) domain_infinite_ = !is_finite(p_.domain());
    return *domain_infinite_;
  }

  static Evaluated make_bool(bool t) { return Evaluated{{}, std::nullopt, t}; }

  Evaluated empty_like(const std::vector<std::string>& vars) {
    PaddedAlphabet pa(p_.base(), static_cast<int>(vars.size()));
    return Evaluated{vars, RegularRelation(pa, aut_none(pa.alphabet()), false), false};
  }

  static int var_index(const std::vector<std::string>& vars, const std::string& x) {
    auto it = std::lower_bound(vars.begin(), vars.end(), x);
    return it != vars.end() && *it == x ? static_cast<int>(it - vars.begin()) : -1;
  }

  Evaluated atom(const Formula& f) {
    RegularRelation r = p_.relation(f.rel);
    if (static_cast<int>(f.args.size()) != r.arity())
      throw error("arity mismatch for relation '" + f.rel + "'");
    std::vector<std::string> vars(f.args);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    int n = static_cast<int>(vars.size());
    if (n == r.arity()) {
      std::vector<int> perm(n);
      bool identity = true;
      for (int i = 0; i < n; ++i) {
        perm[i] = var_index(vars, f.args[i]);
        identity = identity && perm[i] == i;
      }
      if (identity) return Evaluated{vars, std::move(r), false};
      return Evaluated{vars, permute_tracks(r, perm), false};
    }
    // Repeated arguments: pull the acceptor back along the per-symbol map
    // that copies each variable's column into every argument slot using it.
    PaddedAlphabet tpa(p_.base(), n);
    const Automaton& a = r.acceptor();
    int tsz = tpa.alphabet().size();
    std::vector<std::vector<std::pair<int, int>>> bysym(r.pa().alphabet().size());
    for (const auto& t : a.transitions()) bysym[t.sym].push_back({t.from, t.to});
    std::vector<int> comps(r.arity());
    std::vector<Transition> tr;
    for (int s = 0; s < tsz; ++s) {
      for (int i = 0; i < r.arity(); ++i) comps[i] = tpa.component(s, var_index(vars, f.args[i]));
      for (const auto& [from, to] : bysym[r.pa().symbol(comps)]) tr.push_back({from, s, to});
    }
    Automaton res(tpa.alphabet(), a.states(), a.initial(), a.accepting(), std::move(tr));
    return Evaluated{vars, RegularRelation(tpa, trim(res), false), false};
  }

  Evaluated negate(Evaluated e) {
    if (e.vars.empty()) return make_bool(!e.truth);
    int n = static_cast<int>(e.vars.size());
    return Evaluated{e.vars, difference(dompow(n), *e.rel), false};
  }

  // Lifts e's relation onto the track layout of `vars` (a sorted superset).
  RegularRelation widen(const Evaluated& e, const std::vector<std::string>& vars) {
    if (e.vars == vars) return *e.rel;
    std::vector<int> pos(e.vars.size());
    for (size_t i = 0; i < e.vars.size(); ++i) pos[i] = var_index(vars, e.vars[i]);
    return cylindrify(*e.rel, static_cast<int>(vars.size()), pos);
  }

  Evaluated combine(Formula::Kind kind, Evaluated a, Evaluated b) {
    bool is_and = kind == Formula::Kind::And;
    if (a.vars.empty() && b.vars.empty())
      return make_bool(is_and ? a.truth && b.truth : a.truth || b.truth);
    if (a.vars.empty() || b.vars.empty()) {
      const Evaluated& rel = a.vars.empty() ? b : a;
      bool t = a.vars.empty() ? a.truth : b.truth;
      if (is_and) return t ? rel : empty_like(rel.vars);
      return t ? Evaluated{rel.vars, dompow(static_cast<int>(rel.vars.size())), false} : rel;
    }
    std::vector<std::string> vars;
    std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(), std::back_inserter(vars));
    RegularRelation ra = widen(a, vars), rb = widen(b, vars);
    // Every track is constrained to the domain by at least one operand, so
    // conjunction needs no further relativization; disjunction does.
    if (is_and) return Evaluated{vars, intersect(ra, rb), false};
    return Evaluated{vars, intersect(unite(ra, rb), dompow(static_cast<int>(vars.size()))), false};
  }

  Evaluated exists(const std::string& x, Evaluated e) {
    int idx = var_index(e.vars, x);
    if (idx < 0) return e;  // the domain is nonempty by construction
    if (e.vars.size() == 1) return make_bool(!is_empty(e.rel->acceptor()));
    std::vector<std::string> vars = e.vars;
    vars.erase(vars.begin() + idx);
    return Evaluated{std::move(vars), project(*e.rel, idx), false};
  }

  // Moves track `idx` to the last position.
  static RegularRelation to_last(const RegularRelation& r, int idx) {
    int n = r.arity();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i == idx ? n - 1 : i < idx ? i : i - 1;
    return permute_tracks(r, perm);
  }

  // Core of the infinity quantifier, witness on the last track: a section is
  // infinite iff it has a member overshooting the other tracks by more than
  // the state count of the trimmed acceptor (then the overshoot pumps).
  RegularRelation exists_inf_core(const RegularRelation& W) {
    const PaddedAlphabet& pa = W.pa();
    int n = pa.arity();
    int N = trim(W.acceptor()).states();
    unsigned others = ((1u << n) - 1) & ~(1u << (n - 1));
    int asz = pa.alphabet().size();
    std::vector<Transition> tr;
    for (int c = 0; c <= N + 1; ++c)
      for (int s = 0; s < asz; ++s) {
        int nxt = pa.pad_mask(s) == others ? std::min(c + 1, N + 1) : 0;
        tr.push_back({c, s, nxt});
      }
    Automaton overshoot(pa.alphabet(), N + 2, {0}, {N + 1}, std::move(tr));
    RegularRelation joint(pa, intersect(W.acceptor(), overshoot), false);
    return project(joint, n - 1);
  }

  Evaluated exists_inf(const std::string& x, Evaluated e) {
    int idx = var_index(e.vars, x);
    if (idx < 0) {
      if (domain_infinite()) return e;
      return e.vars.empty() ? make_bool(false) : empty_like(e.vars);
    }
    if (e.vars.size() == 1) return make_bool(!is_finite(e.rel->acceptor()));
    std::vector<std::string> vars = e.vars;
    vars.erase(vars.begin() + idx);
    return Evaluated{std::move(vars), exists_inf_core(to_last(*e.rel, idx)), false};
  }

  // Exact counting automaton for the modulo quantifier: reads the remaining
  // tracks and carries, per determinized witness state, the number modulo m
  // of witness prefixes of the current length (live) and of already finished
  // witnesses (done). Acceptance adds, for every live state, the number of
  // finite witness extensions through the padding region. Returns nothing if
  // the reachable counter-state space exceeds the budget.
  std::optional<Automaton> counting_automaton(const RegularRelation& W, int k, int m, int budget) {
    const PaddedAlphabet& pa = W.pa();
    int n = pa.arity();
    int B = pa.base().size();
    PaddedAlphabet ipa(pa.base(), n - 1);
    Automaton D = determinize(W.acceptor());
    int Q = D.states();
    int asz = pa.alphabet().size();
    std::vector<int> dtr(static_cast<size_t>(Q) * asz, -1);
    for (const auto& t : D.transitions()) dtr[static_cast<size_t>(t.from) * asz + t.sym] = t.to;
    std::vector<bool> isF(Q, false);
    for (int f : D.accepting()) isF[f] = true;

    // Witness-only columns (all other tracks padded) form a graph on D's
    // states; N[q] counts nonempty paths from q into acceptance, modulo m.
    // States from which that count is infinite get 0 — tuples with infinite
    // sections are removed by the caller, so the garbage is never observed.
    std::vector<std::vector<int>> wadj(Q);
    {
      std::vector<int> comps(n, pa.pad());
      for (int a = 0; a < B; ++a) {
        comps[n - 1] = a;
        int s = pa.symbol(comps);
        for (int q = 0; q < Q; ++q) wadj[q].push_back(dtr[static_cast<size_t>(q) * asz + s]);
      }
    }
    std::vector<bool> coreach(Q, false);
    {
      std::vector<std::vector<int>> radj(Q);
      for (int q = 0; q < Q; ++q)
        for (int v : wadj[q]) radj[v].push_back(q);
      std::vector<int> work = D.accepting();
      for (int f : D.accepting()) coreach[f] = true;
      while (!work.empty()) {
        int q = work.back();
        work.pop_back();
        for (int v : radj[q])
          if (!coreach[v]) {
            coreach[v] = true;
            work.push_back(v);
          }
      }
    }
    // A state on a witness-only cycle that still reaches acceptance yields
    // infinitely many extensions; so does anything reaching such a state.
    std::vector<bool> inf_state(Q, false);
    {
      std::vector<int> color(Q, 0), stack;
      std::vector<size_t> iter(Q, 0);
      for (int s0 = 0; s0 < Q; ++s0) {
        if (color[s0] || !coreach[s0]) continue;
        stack.push_back(s0);
        color[s0] = 1;
        while (!stack.empty()) {
          int q = stack.back();
          if (iter[q] == wadj[q].size()) {
            color[q] = 2;
            stack.pop_back();
            continue;
          }
          int v = wadj[q][iter[q]++];
          if (!coreach[v]) continue;
          if (color[v] == 1) inf_state[v] = true;
          if (color[v] == 0) {
            color[v] = 1;
            stack.push_back(v);
          }
        }
      }
      std::vector<std::vector<int>> radj(Q);
      for (int q = 0; q < Q; ++q)
        for (int v : wadj[q]) radj[v].push_back(q);
      std::vector<int> work;
      for (int q = 0; q < Q; ++q)
        if (inf_state[q]) work.push_back(q);
      while (!work.empty()) {
        int q = work.back();
        work.pop_back();
        for (int v : radj[q])
          if (!inf_state[v]) {
            inf_state[v] = true;
            work.push_back(v);
          }
      }
    }
    std::vector<int> N(Q, -1);
    {
      // The fully finite part of the witness graph is acyclic; memoized DFS.
      std::vector<std::pair<int, size_t>> stack;
      for (int s0 = 0; s0 < Q; ++s0) {
        if (N[s0] >= 0) continue;
        if (!coreach[s0] || inf_state[s0]) {
          N[s0] = 0;
          continue;
        }
        stack.push_back({s0, 0});
        while (!stack.empty()) {
          auto& [q, i] = stack.back();
          if (i == wadj[q].size()) {
            long long total = 0;
            for (int v : wadj[q]) total += (isF[v] ? 1 : 0) + N[v];
            N[q] = static_cast<int>(total % m);
            stack.pop_back();
            continue;
          }
          int v = wadj[q][i++];
          if (N[v] >= 0) continue;
          if (!coreach[v] || inf_state[v]) {
            N[v] = 0;
            continue;
          }
          stack.push_back({v, 0});
        }
      }
    }

    int q0 = D.initial()[0];
    int iasz = ipa.alphabet().size();
    auto accepts = [&](const std::vector<int>& st) {
      long long total = 0;
      for (int q = 0; q < Q; ++q) {
        if (isF[q]) total += st[q] + st[Q + q];
        total += static_cast<long long>(st[q]) * N[q];
      }
      return total % m == k;
    };
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> statevecs;
    std::vector<int> init(2 * Q, 0);
    init[q0] = 1 % m;
    ids.emplace(init, 0);
    statevecs.push_back(std::move(init));
    std::vector<Transition> tr;
    for (int cur = 0; cur < static_cast<int>(statevecs.size()); ++cur) {
      for (int s = 0; s < iasz; ++s) {
        std::vector<int> nxt(2 * Q, 0);
        const std::vector<int>& st = statevecs[cur];
        int fid = s * (B + 1);
        for (int q = 0; q < Q; ++q) {
          int live = st[q], done = st[Q + q];
          if (live)
            for (int a = 0; a < B; ++a) {
              int t = dtr[static_cast<size_t>(q) * asz + fid + a];
              nxt[t] = (nxt[t] + live) % m;
            }
          if (live + done) {
            int t = dtr[static_cast<size_t>(q) * asz + fid + B];
            nxt[Q + t] = (nxt[Q + t] + live + done) % m;
          }
        }
        auto [it, fresh] = ids.emplace(std::move(nxt), static_cast<int>(statevecs.size()));
        if (fresh) {
          if (static_cast<int>(statevecs.size()) >= budget) return std::nullopt;
          statevecs.push_back(it->first);
        }
        tr.push_back({cur, s, it->second});
      }
    }
    std::vector<int> acc;
    for (int i = 0; i < static_cast<int>(statevecs.size()); ++i)
      if (accepts(statevecs[i])) acc.push_back(i);
    return Automaton(ipa.alphabet(), static_cast<int>(statevecs.size()), {0}, std::move(acc), std::move(tr));
  }

  Evaluated exists_mod(int k, int m, const std::string& x, Evaluated e) {
    int idx = var_index(e.vars, x);
    if (idx < 0) {
      // Witnesses are all of the domain (where the body holds) or none.
      auto cnt = total_count(p_.domain());
      bool body_count_matches;
      if (cnt) {
        body_count_matches = *cnt % m == k;
      } else {
        trace("infinite section: counting quantifier over the whole (infinite) domain");
        body_count_matches = false;
      }
      if (e.vars.empty()) return make_bool(e.truth ? body_count_matches : k == 0);
      int n = static_cast<int>(e.vars.size());
      RegularRelation out = body_count_matches ? *e.rel : *empty_like(e.vars).rel;
      if (k == 0) out = unite(out, difference(dompow(n), *e.rel));
      return Evaluated{e.vars, std::move(out), false};
    }
    if (e.vars.size() == 1) {
      auto cnt = total_count(e.rel->acceptor());
      if (!cnt) {
        trace("infinite section: the witness set is infinite");
        return make_bool(false);
      }
      return make_bool(*cnt % m == k);
    }
    int n = static_cast<int>(e.vars.size());
    RegularRelation W = to_last(*e.rel, idx);
    std::vector<std::string> ovars = e.vars;
    ovars.erase(ovars.begin() + idx);
    // Tuples with infinitely many witnesses have no finite count; they are
    // excluded from the result.
    std::optional<RegularRelation> inf_rel;
    if (!is_finite_outdegree(W, n - 1)) {
      trace("infinite section: some tuples have infinitely many witnesses; they are excluded");
      inf_rel = exists_inf_core(W);
    }
    PaddedAlphabet ipa(p_.base(), n - 1);
    RegularRelation out = dompow(n - 1);  // placeholder, reassigned below
    if (auto ca = counting_automaton(W, k, m, opts_.counting_budget)) {
      out = RegularRelation(ipa, trim(intersect(*ca, dompow(n - 1).acceptor())), false);
    } else {
      // Fallback: the candidate tuples (those with at least one witness)
      // must form a finite set; count each section exactly.
      trace("counting quantifier: state budget exceeded, enumerating candidate tuples");
      Automaton cand = trim(project(W, n - 1).acceptor());
      if (!is_finite(cand)) throw error("counting quantifier budget exceeded");
      std::vector<Word> keep;
      for (const Word& w : enumerate_upto(cand, cand.states())) {
        auto cnt = total_count(image(W, n - 1, aut_literal(ipa.alphabet(), w)));
        if (cnt && *cnt % m == k) keep.push_back(w);
      }
      Automaton acc = aut_words(ipa.alphabet(), keep);
      if (k == 0) acc = unite(acc, difference(dompow(n - 1).acceptor(), cand));
      out = RegularRelation(ipa, trim(acc), false);
    }
    if (inf_rel) out = difference(out, *inf_rel);
    return Evaluated{std::move(ovars), std::move(out), false};
  }
};

}  // namespace detail

inline Evaluated eval(const Presentation& p, const FormulaPtr& f, const EvalOptions& opts = {}) {
  free_vars(f);  // well-namedness check
  return detail::Evaluator(p, opts).run(*f);
}

inline bool decide(const Presentation& p, const FormulaPtr& f, const EvalOptions& opts = {}) {
  Evaluated e = eval(p, f, opts);
  if (!e.vars.empty()) throw error("decide: formula has free variables");
  return e.truth;
}

// Rearranges an evaluation result onto the declared variable list `order`
// (free variables must be among it; unused tracks range over the domain).
inline RegularRelation arrange(const Presentation& p, const Evaluated& e,
                               const std::vector<std::string>& order) {
  int n = static_cast<int>(order.size());
  {
    std::vector<std::string> sorted(order);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw error("arrange: duplicate variable in declaration");
  }
  RegularRelation dv = p.domain_power(n);
  if (e.vars.empty()) {
    if (e.truth) return dv;
    PaddedAlphabet pa(p.base(), n);
    return RegularRelation(pa, aut_none(pa.alphabet()), false);
  }
  std::vector<int> pos(e.vars.size());
  for (size_t i = 0; i < e.vars.size(); ++i) {
    auto it = std::find(order.begin(), order.end(), e.vars[i]);
    if (it == order.end()) throw error("arrange: free variable '" + e.vars[i] + "' is not declared");
    pos[i] = static_cast<int>(it - order.begin());
  }
  if (static_cast<int>(e.vars.size()) == n) {
    bool identity = true;
    for (int i = 0; i < n; ++i) identity = identity && pos[i] == i;
    if (identity) return *e.rel;
    return permute_tracks(*e.rel, pos);
  }
  return intersect(cylindrify(*e.rel, n, pos), dv);
}

// First-order interpretation: a new structure whose elements are the
// k-tuples satisfying delta and whose relations are defined by formulas with
// k tracks per argument, grouped argument by argument.
struct Interpretation {
  struct RelDef {
    int arity;
    std::vector<std::string> vars;  // dimension * arity names
    FormulaPtr phi;
  };
  int dimension;
  std::vector<std::string> delta_vars;
  FormulaPtr delta;
  std::map<std::string, RelDef> relations;
};

namespace detail {

// Reinterprets an automaton over base^(k*n) tracks as one over gamma^n
// tracks, gamma being the k-track padded alphabet. Grouped digit blocks and
// gamma digits coincide numerically, so symbol ids carry over unchanged.
inline Automaton regroup_tracks(const Automaton& a, const PaddedAlphabet& from, const PaddedAlphabet& to) {
  if (from.alphabet().size() != to.alphabet().size()) throw error("regroup: alphabet size mismatch");
  return Automaton(to.alphabet(), a.states(), a.initial(), a.accepting(), a.transitions());
}

}  // namespace detail

inline Presentation apply_interpretation(const Presentation& p, const Interpretation& tau,
                                         const EvalOptions& opts = {}) {
  int k = tau.dimension;
  if (k < 1) throw error("interpretation: dimension must be >= 1");
  if (static_cast<int>(tau.delta_vars.size()) != k)
    throw error("interpretation: delta variable count does not match dimension");
  RegularRelation drel = arrange(p, eval(p, tau.delta, opts), tau.delta_vars);
  if (is_empty(drel.acceptor())) throw error("empty domain");
  Alphabet gamma = drel.pa().alphabet();
  Automaton ndom = minimize(determinize(trim(drel.acceptor())));
  std::map<std::string, RegularRelation> nrels;
  for (const auto& [name, rd] : tau.relations) {
    if (static_cast<int>(rd.vars.size()) != k * rd.arity)
      throw error("interpretation: relation '" + name + "' variable count does not match dimension * arity");
    RegularRelation flat = arrange(p, eval(p, rd.phi, opts), rd.vars);
    PaddedAlphabet npa(gamma, rd.arity);
    RegularRelation lifted(npa, detail::regroup_tracks(flat.acceptor(), flat.pa(), npa), false);
    nrels.emplace(name, intersect(lifted, domain_product(gamma, ndom, rd.arity)));
  }
  return Presentation(gamma, std::move(ndom), std::move(nrels));
}

// ---------------------------------------------------------------------------
// Builders for the standard structures.

inline Presentation omega_le() {
  Alphabet sigma({"0"});
  Automaton dom(sigma, 1, {0}, {0}, {{0, 0, 0}});
  PaddedAlphabet pa(sigma, 2);
  int s00 = pa.symbol({0, 0}), sp0 = pa.symbol({pa.pad(), 0});
  Automaton le(pa.alphabet(), 2, {0}, {0, 1}, {{0, s00, 0}, {0, sp0, 1}, {1, sp0, 1}});
  return Presentation(sigma, dom, {{"le", RegularRelation(pa, le)}});
}

// Base-p numerals, least significant digit first; the empty word denotes 0
// and no numeral ends with digit 0.
inline Presentation presburger(int p) {
  if (p < 2) throw error("presburger: invalid base");
  std::vector<std::string> tokens;
  for (int d = 0; d < p; ++d) tokens.push_back(std::to_string(d));
  Alphabet sigma(tokens);
  std::vector<Transition> dtr;
  for (int q = 0; q < 3; ++q)
    for (int d = 0; d < p; ++d) dtr.push_back({q, d, d == 0 ? 2 : 1});
  Automaton dom(sigma, 3, {0}, {0, 1}, std::move(dtr));
  PaddedAlphabet pa(sigma, 3);
  std::vector<Transition> tr;
  for (int r = 0; r <= 1; ++r)
    for (int s = 0; s < pa.alphabet().size(); ++s) {
      auto val = [&](int track) {
        int c = pa.component(s, track);
        return c == pa.pad() ? 0 : c;
      };
      int diff = val(0) + val(1) + r - val(2);
      if (diff == 0) tr.push_back({r, s, 0});
      else if (diff == p) tr.push_back({r, s, 1});
    }
  Automaton carry(pa.alphabet(), 2, {0}, {0}, std::move(tr));
  RegularRelation plus(pa, intersect(carry, domain_product(sigma, dom, 3).acceptor()), false);
  return Presentation(sigma, dom, {{"plus", plus}});
}

// presburger(p) extended with divp(x,y): x is a power of p and x divides y.
inline Presentation presburger_div(int p) {
  Presentation base = presburger(p);
  const Alphabet& sigma = base.base();
  PaddedAlphabet pa(sigma, 2);
  // x = 0^t 1 matches t leading zero digits of y (or all of y = 0).
  std::vector<Transition> tr;
  tr.push_back({0, pa.symbol({0, 0}), 0});
  tr.push_back({0, pa.symbol({0, pa.pad()}), 1});
  tr.push_back({1, pa.symbol({0, pa.pad()}), 1});
  tr.push_back({1, pa.symbol({1, pa.pad()}), 3});
  tr.push_back({0, pa.symbol({1, pa.pad()}), 3});
  for (int d = 0; d < p; ++d) {
    tr.push_back({0, pa.symbol({1, d}), 2});
    tr.push_back({2, pa.symbol({pa.pad(), d}), 2});
  }
  Automaton divp(pa.alphabet(), 4, {0}, {2, 3}, std::move(tr));
  std::map<std::string, RegularRelation> rels = base.relations();
  rels.emplace("divp", intersect(RegularRelation(pa, divp, false), base.domain_power(2)));
  return Presentation(sigma, base.domain(), std::move(rels));
}

// The complete p-ary tree on digit strings: prefix order, the p successor
// relations, and the builtin equal-length relation.
inline Presentation pary_tree(int p) {
  if (p < 2) throw error("pary_tree: invalid base");
  std::vector<std::string> tokens;
  for (int d = 0; d < p; ++d) tokens.push_back(std::to_string(d));
  Alphabet sigma(tokens);
  Automaton dom = aut_all(sigma);
  PaddedAlphabet pa(sigma, 2);
  std::map<std::string, RegularRelation> rels;
  {
    std::vector<Transition> tr;
    for (int a = 0; a < p; ++a) {
      tr.push_back({0, pa.symbol({a, a}), 0});
      tr.push_back({0, pa.symbol({pa.pad(), a}), 1});
      tr.push_back({1, pa.symbol({pa.pad(), a}), 1});
    }
    rels.emplace("pf", RegularRelation(pa, Automaton(pa.alphabet(), 2, {0}, {0, 1}, std::move(tr))));
  }
  for (int c = 0; c < p; ++c) {
    std::vector<Transition> tr;
    for (int a = 0; a < p; ++a) tr.push_back({0, pa.symbol({a, a}), 0});
    tr.push_back({0, pa.symbol({pa.pad(), c}), 1});
    rels.emplace("suc" + std::to_string(c),
                 RegularRelation(pa, Automaton(pa.alphabet(), 2, {0}, {1}, std::move(tr))));
  }
  return Presentation(sigma, dom, std::move(rels));
}

// The integer grid: (i,k) is coded as the sign-letter run for i followed by
// the sign-letter run for k; E0 steps i to i+1, E1 steps k to k+1.
inline Presentation grid_example() {
  Alphabet sigma({"a", "A", "b", "B"});
  const int a = 0, A = 1, b = 2, B = 3;
  // one sign-run for the first coordinate, then one for the second
  Automaton dom(sigma, 5, {0}, {0, 1, 2, 3, 4},
                {{0, a, 1}, {0, A, 2}, {0, b, 3}, {0, B, 4}, {1, a, 1}, {1, b, 3}, {1, B, 4},
                 {2, A, 2}, {2, b, 3}, {2, B, 4}, {3, b, 3}, {4, B, 4}});
  PaddedAlphabet pa(sigma, 2);
  const Alphabet& d = pa.alphabet();
  int P = pa.pad();
  auto sym = [&](int u, int v) { return aut_literal(d, {pa.symbol({u, v})}); };
  auto sstar = [&](int u, int v) { return star(aut_literal(d, {pa.symbol({u, v})})); };
  Automaton e0_pos = concat(
      sstar(a, a), unite(sym(P, a), unite(concat(sym(b, a), concat(sstar(b, b), sym(P, b))),
                                          concat(sym(B, a), concat(sstar(B, B), sym(P, B))))));
  Automaton e0_neg = concat(
      sstar(A, A), unite(sym(A, P), unite(concat(sym(A, b), concat(sstar(b, b), sym(b, P))),
                                          concat(sym(A, B), concat(sstar(B, B), sym(B, P))))));
  Automaton e1 = concat(unite(sstar(a, a), sstar(A, A)),
                        unite(concat(sstar(b, b), sym(P, b)), concat(sstar(B, B), sym(B, P))));
  RegularRelation dom2 = domain_product(sigma, dom, 2);
  std::map<std::string, RegularRelation> rels;
  rels.emplace("E0", intersect(RegularRelation(pa, intersect(unite(e0_pos, e0_neg), pa.validity()), false), dom2));
  rels.emplace("E1", intersect(RegularRelation(pa, intersect(e1, pa.validity()), false), dom2));
  return Presentation(sigma, dom, std::move(rels));
}

// The order of type omega on a*b* under length-lexicographic comparison,
// with the unary predicate picking out a* (the triangular-number positions).
inline Presentation triangular_example() {
  Alphabet sigma({"a", "b"});
  Automaton dom(sigma, 2, {0}, {0, 1}, {{0, 0, 0}, {0, 1, 1}, {1, 1, 1}});
  PaddedAlphabet pa(sigma, 2);
  RegularRelation le = intersect(RegularRelation(pa, detail::llex_automaton(pa), false),
                                 domain_product(sigma, dom, 2));
  PaddedAlphabet pa1(sigma, 1);
  Automaton astar(pa1.alphabet(), 1, {0}, {0}, {{0, 0, 0}});
  std::map<std::string, RegularRelation> rels;
  rels.emplace("le", std::move(le));
  rels.emplace("P", RegularRelation(pa1, std::move(astar)));
  return Presentation(sigma, dom, std::move(rels));
}

// A single infinite equivalence class: all of 0* related to everything.
inline Presentation one_infinite_class() {
  Alphabet sigma({"0"});
  Automaton dom(sigma, 1, {0}, {0}, {{0, 0, 0}});
  return Presentation(sigma, dom, {{"~", domain_product(sigma, dom, 2)}});
}

// Countably many infinite classes: 0^n 1^k ~ 0^m 1^l iff n = m.
inline Presentation omega_infinite_classes() {
  Alphabet sigma({"0", "1"});
  Automaton dom(sigma, 2, {0}, {0, 1}, {{0, 0, 0}, {0, 1, 1}, {1, 1, 1}});
  PaddedAlphabet pa(sigma, 2);
  int P = pa.pad();
  std::vector<Transition> tr{{0, pa.symbol({0, 0}), 0}, {0, pa.symbol({1, 1}), 1},
                             {0, pa.symbol({1, P}), 2}, {0, pa.symbol({P, 1}), 3},
                             {1, pa.symbol({1, 1}), 1}, {1, pa.symbol({1, P}), 2},
                             {1, pa.symbol({P, 1}), 3}, {2, pa.symbol({1, P}), 2},
                             {3, pa.symbol({P, 1}), 3}};
  Automaton sim(pa.alphabet(), 4, {0}, {0, 1, 2, 3}, std::move(tr));
  return Presentation(sigma, dom, {{"~", RegularRelation(pa, sim)}});
}

// ---------------------------------------------------------------------------
// Reachable sets: N(U, i+1) = N(U, i) + the image of N(U, i)-tuples under
// the step formula. Sizes are cumulative, one entry per step 0..n.
struct ReachSet {
  int steps;
  Automaton acceptor;
  std::vector<std::optional<mpz_class>> sizes;  // nullopt = infinite
};

inline ReachSet reach(const Presentation& p, const FormulaPtr& phi,
                      const std::vector<std::string>& inputs, const std::string& output,
                      const std::vector<Word>& seeds, int n, const EvalOptions& opts = {}) {
  if (n < 0) throw error("reach: negative step count");
  std::vector<std::string> order(inputs);
  order.push_back(output);
  RegularRelation step = arrange(p, eval(p, phi, opts), order);
  int k = static_cast<int>(inputs.size());
  for (const Word& w : seeds)
    if (!p.domain().accepts(w)) throw error("reach: seed outside the domain");
  PaddedAlphabet one(p.base(), 1);
  Automaton cur = trim(aut_words(p.base(), seeds));
  ReachSet out{n, cur, {total_count(cur)}};
  for (int i = 0; i < n; ++i) {
    Automaton joint = step.acceptor();
    for (int t = 0; t < k; ++t) joint = intersect(joint, lift_tracks(cur, one, step.pa(), {t}));
    RegularRelation img(step.pa(), std::move(joint), false);
    for (int t = 0; t < k; ++t) img = project(img, 0);
    cur = minimize(determinize(trim(unite(cur, img.acceptor()))));
    out.sizes.push_back(total_count(cur));
  }
  out.acceptor = cur;
  return out;
}

}  // namespace astra
