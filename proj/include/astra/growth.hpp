#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "astra/semilinear.hpp"

namespace astra {

// u0 v0* u1 v1* ... u_k: a bounded language component with k nonempty loops.
struct BoundedPattern {
  std::vector<Word> prefixes;
  std::vector<Word> loops;
};

struct GrowthReport {
  bool polynomial = false;
  int degree = 0;                        // meaningful iff polynomial
  std::vector<BoundedPattern> patterns;  // meaningful iff polynomial
};

// Length-preserving bijection between a language and its recoding over
// pattern-indexed fresh letters.
struct Recode {
  RegularRelation relation;
};

namespace detail {

struct SccInfo {
  std::vector<int> comp;       // state -> component id, reverse topological
  std::vector<bool> cyclic;    // component has an internal edge
  std::vector<bool> branching;  // some state has two internal out-edges
  int count = 0;
};

// Iterative Tarjan; components are numbered in reverse topological order.
inline SccInfo strongly_connected(const Automaton& a) {
  int n = a.states();
  SccInfo info;
  info.comp.assign(n, -1);
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (const Transition& t : a.transitions()) adj[t.from].push_back({t.sym, t.to});
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on(n, false);
  int next = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<std::pair<int, int>> work{{root, 0}};
    while (!work.empty()) {
      auto& [v, child] = work.back();
      if (child == 0) {
        index[v] = low[v] = next++;
        stack.push_back(v);
        on[v] = true;
      }
      if (child < static_cast<int>(adj[v].size())) {
        int w = adj[v][child].second;
        ++child;
        if (index[w] < 0)
          work.push_back({w, 0});
        else if (on[w])
          low[v] = std::min(low[v], index[w]);
      } else {
        if (low[v] == index[v]) {
          int id = info.count++;
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on[w] = false;
            info.comp[w] = id;
          } while (w != v);
        }
        int parent = work.size() >= 2 ? work[work.size() - 2].first : -1;
        if (parent >= 0) low[parent] = std::min(low[parent], low[v]);
        work.pop_back();
      }
    }
  }
  info.cyclic.assign(info.count, false);
  info.branching.assign(info.count, false);
  std::vector<int> internal(n, 0);
  for (const Transition& t : a.transitions())
    if (info.comp[t.from] == info.comp[t.to]) {
      info.cyclic[info.comp[t.from]] = true;
      if (++internal[t.from] > 1) info.branching[info.comp[t.from]] = true;
    }
  return info;
}

// Word read around the unique internal cycle starting at q. Only valid in a
// component where every state has a single internal out-edge.
inline Word cycle_word(const Automaton& a, const SccInfo& scc, int q) {
  std::vector<std::pair<int, int>> step(a.states(), {-1, -1});
  for (const Transition& t : a.transitions())
    if (scc.comp[t.from] == scc.comp[t.to]) step[t.from] = {t.sym, t.to};
  Word w;
  int at = q;
  do {
    w.push_back(step[at].first);
    at = step[at].second;
  } while (at != q);
  return w;
}

inline Automaton pattern_automaton(const Alphabet& sigma, const BoundedPattern& pat) {
  Automaton a = aut_literal(sigma, pat.prefixes[0]);
  for (size_t j = 0; j < pat.loops.size(); ++j) {
    a = concat(a, star(aut_literal(sigma, pat.loops[j])));
    a = concat(a, aut_literal(sigma, pat.prefixes[j + 1]));
  }
  return a;
}

}  // namespace detail

// A trim deterministic automaton has polynomial growth iff no state lies on
// two distinct cycles, i.e. every strongly connected component is a single
// simple cycle. The degree is the largest number of cyclic components on a
// path of the component dag, which for such automata is the exact exponent
// of the cumulative count n^degree up to constants.
inline GrowthReport classify_growth(const Automaton& a) {
  Automaton d = trim(minimize(determinize(a)));
  GrowthReport rep;
  if (d.states() == 0) {
    rep.polynomial = true;
    return rep;
  }
  detail::SccInfo scc = detail::strongly_connected(d);
  for (int c = 0; c < scc.count; ++c)
    if (scc.branching[c]) return rep;  // some state on two cycles
  rep.polynomial = true;

  // longest cyclic-weighted path in the component dag; components are
  // numbered in reverse topological order, so successors come first
  std::vector<int> best(scc.count, 0);
  std::vector<std::vector<int>> succ(scc.count);
  for (const Transition& t : d.transitions())
    if (scc.comp[t.from] != scc.comp[t.to]) succ[scc.comp[t.from]].push_back(scc.comp[t.to]);
  for (int c = 0; c < scc.count; ++c) {
    for (int s : succ[c]) best[c] = std::max(best[c], best[s]);
    best[c] += scc.cyclic[c] ? 1 : 0;
  }
  rep.degree = best[scc.comp[d.initial()[0]]];

  // cross-check against actual counts: cumulative counts of a polynomial
  // language of this degree can never exceed (n+1)^(degree+1)
  std::vector<mpz_class> counts = count_words_upto(d, 16);
  for (int n = 0; n <= 16; ++n) {
    mpz_class bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), static_cast<unsigned long>(n + 1),
                  static_cast<unsigned long>(rep.degree + 1));
    if (counts[n] > bound)
      throw std::logic_error("growth: count exceeds the structural degree bound");
  }

  // patterns: depth-first over reduced paths; entering a cyclic component at
  // state e contributes the loop read around the cycle from e
  std::vector<std::vector<std::pair<int, int>>> adj(d.states());
  for (const Transition& t : d.transitions()) adj[t.from].push_back({t.sym, t.to});
  std::vector<bool> accepting(d.states(), false);
  for (int f : d.accepting()) accepting[f] = true;
  std::vector<bool> visited(d.states(), false);
  BoundedPattern cur;
  cur.prefixes.push_back({});

  struct Dfs {
    const Automaton& d;
    const detail::SccInfo& scc;
    std::vector<std::vector<std::pair<int, int>>>& adj;
    std::vector<bool>& accepting;
    std::vector<bool>& visited;
    BoundedPattern& cur;
    std::vector<BoundedPattern>& out;

    void walk(int q, bool entering) {
      bool looped = entering && scc.cyclic[scc.comp[q]];
      if (looped) {
        cur.loops.push_back(detail::cycle_word(d, scc, q));
        cur.prefixes.push_back({});
      }
      visited[q] = true;
      if (accepting[q]) out.push_back(cur);
      for (auto [sym, r] : adj[q]) {
        if (visited[r]) continue;
        cur.prefixes.back().push_back(sym);
        walk(r, scc.comp[r] != scc.comp[q]);
        cur.prefixes.back().pop_back();
      }
      visited[q] = false;
      if (looped) {
        cur.prefixes.pop_back();
        cur.loops.pop_back();
      }
    }
  } dfs{d, scc, adj, accepting, visited, cur, rep.patterns};
  dfs.walk(d.initial()[0], true);

  // the union of the patterns must give back the language exactly
  Automaton cover = aut_none(d.alphabet());
  for (const BoundedPattern& pat : rep.patterns)
    cover = unite(cover, detail::pattern_automaton(d.alphabet(), pat));
  if (!equivalent(cover, d)) throw std::logic_error("growth: pattern cover mismatch");
  return rep;
}

inline bool is_poly_growth(const Presentation& p) { return classify_growth(p.domain()).polynomial; }

inline std::vector<BoundedPattern> bounded_decomposition(const Automaton& a) {
  GrowthReport rep = classify_growth(a);
  if (!rep.polynomial) throw error("bounded decomposition: language does not have polynomial growth");
  return rep.patterns;
}

struct Normalized {
  std::vector<BoundedPattern> patterns;  // over the combined alphabet
  Alphabet alphabet;                     // source letters then fresh letters
  Recode recode;
};

// Replaces the j-th prefix of pattern i by a block of the fresh letter
// p{i}_a{j} of the same length, and each loop by a block of p{i}_b{j}. The
// recode relation pairs every source word with its normalized image, symbol
// by symbol, so it is a length-preserving bijection.
inline Normalized normalize_letters(const Alphabet& sigma, const std::vector<BoundedPattern>& pats) {
  std::vector<std::string> tokens;
  for (int i = 0; i < sigma.size(); ++i) tokens.push_back(sigma.token(i));
  std::vector<std::vector<int>> pref_letter(pats.size()), loop_letter(pats.size());
  for (size_t i = 0; i < pats.size(); ++i) {
    const BoundedPattern& pat = pats[i];
    if (pat.prefixes.size() != pat.loops.size() + 1)
      throw error("normalize: malformed pattern");
    pref_letter[i].assign(pat.prefixes.size(), -1);
    loop_letter[i].assign(pat.loops.size(), -1);
    for (size_t j = 0; j < pat.prefixes.size(); ++j)
      if (!pat.prefixes[j].empty()) {
        pref_letter[i][j] = static_cast<int>(tokens.size());
        tokens.push_back("p" + std::to_string(i) + "_a" + std::to_string(j));
      }
    for (size_t j = 0; j < pat.loops.size(); ++j) {
      if (pat.loops[j].empty()) throw error("normalize: empty loop");
      loop_letter[i][j] = static_cast<int>(tokens.size());
      tokens.push_back("p" + std::to_string(i) + "_b" + std::to_string(j));
    }
  }
  Alphabet gamma(tokens);
  PaddedAlphabet pa(gamma, 2);
  Automaton rel = aut_none(pa.alphabet());
  std::vector<BoundedPattern> npats;
  for (size_t i = 0; i < pats.size(); ++i) {
    const BoundedPattern& pat = pats[i];
    BoundedPattern npat;
    Automaton e = aut_epsilon(pa.alphabet());
    for (size_t j = 0; j < pat.prefixes.size(); ++j) {
      Word image(pat.prefixes[j].size(), pref_letter[i][j]);
      npat.prefixes.push_back(image);
      if (!image.empty()) e = concat(e, aut_literal(pa.alphabet(), pa.convolve({pat.prefixes[j], image})));
      if (j < pat.loops.size()) {
        Word limage(pat.loops[j].size(), loop_letter[i][j]);
        npat.loops.push_back(limage);
        e = concat(e, star(aut_literal(pa.alphabet(), pa.convolve({pat.loops[j], limage}))));
      }
    }
    npats.push_back(std::move(npat));
    rel = unite(rel, e);
  }
  rel = trim(minimize(determinize(rel)));
  return Normalized{std::move(npats), gamma, Recode{RegularRelation(pa, std::move(rel))}};
}

namespace detail {

// Pieces of the exponent set, built over loop dimensions j..k-1.
struct ExpPiece {
  std::vector<long> offset;
  std::vector<std::pair<int, long>> periods;  // (dimension, stride)
};

class ExponentScan {
 public:
  ExponentScan(const Automaton& d, const BoundedPattern& pat) : d_(d), pat_(pat) {
    dtr_.assign(static_cast<size_t>(d.states()) * d.alphabet().size(), -1);
    for (const Transition& t : d.transitions())
      dtr_[static_cast<size_t>(t.from) * d.alphabet().size() + t.sym] = t.to;
    accepting_.assign(d.states(), false);
    for (int f : d.accepting()) accepting_[f] = true;
  }

  std::vector<ExpPiece> pieces() { return scan(0, read(d_.initial()[0], pat_.prefixes[0])); }

 private:
  int read(int q, const Word& w) const {
    for (int s : w) q = dtr_[static_cast<size_t>(q) * d_.alphabet().size() + s];
    return q;
  }

  // exponent tuples for loops j.. with q the state after prefix j
  std::vector<ExpPiece> scan(int j, int q) {
    if (j == static_cast<int>(pat_.loops.size()))
      return accepting_[q] ? std::vector<ExpPiece>{{{}, {}}} : std::vector<ExpPiece>{};
    auto key = std::make_pair(j, q);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    // orbit of q under the loop word: a tail of singleton exponents, then a
    // cycle of arithmetic progressions, partitioning the naturals
    std::vector<int> orbit{q};
    std::map<int, int> seen{{q, 0}};
    int tail, lambda;
    for (;;) {
      int next = read(orbit.back(), pat_.loops[j]);
      auto found = seen.find(next);
      if (found != seen.end()) {
        tail = found->second;
        lambda = static_cast<int>(orbit.size()) - tail;
        break;
      }
      seen[next] = static_cast<int>(orbit.size());
      orbit.push_back(next);
    }
    std::vector<ExpPiece> out;
    for (int t = 0; t < static_cast<int>(orbit.size()); ++t) {
      int landing = read(orbit[t], pat_.prefixes[j + 1]);
      for (ExpPiece sub : scan(j + 1, landing)) {
        ExpPiece piece;
        piece.offset.push_back(t);
        piece.offset.insert(piece.offset.end(), sub.offset.begin(), sub.offset.end());
        if (t >= tail) piece.periods.push_back({j, lambda});
        for (auto [dim, stride] : sub.periods) piece.periods.push_back({dim, stride});
        out.push_back(std::move(piece));
      }
    }
    memo_[key] = out;
    return out;
  }

  const Automaton& d_;
  const BoundedPattern& pat_;
  std::vector<int> dtr_;
  std::vector<bool> accepting_;
  std::map<std::pair<int, int>, std::vector<ExpPiece>> memo_;
};

}  // namespace detail

// The set of exponent tuples (i_0..i_{k-1}) with u0 v0^{i0} u1 ... u_k in
// L(a). Deterministic orbits make the pieces simple (unit-direction periods)
// and pairwise disjoint, so the attribute is set.
inline SemilinearSet pattern_exponents(const Automaton& a, const BoundedPattern& pat) {
  if (pat.prefixes.size() != pat.loops.size() + 1) throw error("pattern exponents: malformed pattern");
  if (pat.loops.empty()) throw error("pattern exponents: pattern has no loops");
  for (const Word& v : pat.loops)
    if (v.empty()) throw error("pattern exponents: empty loop");
  int k = static_cast<int>(pat.loops.size());
  Automaton d = determinize(a);
  std::vector<LinearSet> pieces;
  for (const detail::ExpPiece& piece : detail::ExponentScan(d, pat).pieces()) {
    std::vector<mpz_class> offset(piece.offset.begin(), piece.offset.end());
    std::vector<std::vector<mpz_class>> columns;
    for (auto [dim, stride] : piece.periods) {
      std::vector<mpz_class> col(k, 0);
      col[dim] = stride;
      columns.push_back(std::move(col));
    }
    pieces.push_back(LinearSet(AffineMap(std::move(offset), std::move(columns))));
  }
  return SemilinearSet(k, std::move(pieces), true);
}

}  // namespace astra
