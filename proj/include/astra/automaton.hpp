#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "astra/alphabet.hpp"
#include "astra/core.hpp"

namespace astra {

struct Transition {
  int from;
  int sym;
  int to;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

// Nondeterministic finite automaton over an Alphabet. Immutable after
// construction: every operation returns a new value. Transitions are kept
// sorted and deduplicated; initial/accepting are sorted state sets. The
// deterministic flag is derived, never trusted: it holds exactly when there
// is one initial state and at most one transition per (state, symbol).
class Automaton {
 public:
  Automaton(Alphabet alphabet, int states, std::vector<int> initial,
            std::vector<int> accepting, std::vector<Transition> transitions)
      : alphabet_(std::move(alphabet)),
        states_(states),
        initial_(std::move(initial)),
        accepting_(std::move(accepting)),
        transitions_(std::move(transitions)) {
    if (states_ < 0) throw error("automaton: negative state count");
    auto canon = [this](std::vector<int>& v, const char* what) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      for (int q : v)
        if (q < 0 || q >= states_) throw error(std::string("automaton: ") + what + " state out of range");
    };
    canon(initial_, "initial");
    canon(accepting_, "accepting");
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
    for (const auto& t : transitions_) {
      if (t.from < 0 || t.from >= states_ || t.to < 0 || t.to >= states_)
        throw error("automaton: transition state out of range");
      if (t.sym < 0 || t.sym >= alphabet_.size())
        throw error("automaton: transition symbol out of range");
    }
    deterministic_ = initial_.size() == 1;
    for (size_t i = 0; i + 1 < transitions_.size() && deterministic_; ++i)
      if (transitions_[i].from == transitions_[i + 1].from && transitions_[i].sym == transitions_[i + 1].sym)
        deterministic_ = false;
  }

  const Alphabet& alphabet() const { return alphabet_; }
  int states() const { return states_; }
  const std::vector<int>& initial() const { return initial_; }
  const std::vector<int>& accepting() const { return accepting_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  bool deterministic() const { return deterministic_; }

  bool is_accepting(int q) const {
    return std::binary_search(accepting_.begin(), accepting_.end(), q);
  }

  // Outgoing edges per state as (symbol, target), sorted.
  std::vector<std::vector<std::pair<int, int>>> adjacency() const {
    std::vector<std::vector<std::pair<int, int>>> adj(states_);
    for (const auto& t : transitions_) adj[t.from].emplace_back(t.sym, t.to);
    return adj;
  }

  std::vector<int> step(const std::vector<int>& from, int sym) const {
    std::vector<int> out;
    for (int q : from) {
      Transition lo{q, sym, 0};
      auto it = std::lower_bound(transitions_.begin(), transitions_.end(), lo);
      for (; it != transitions_.end() && it->from == q && it->sym == sym; ++it) out.push_back(it->to);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool accepts(const Word& w) const {
    std::vector<int> cur = initial_;
    for (int sym : w) {
      if (cur.empty()) return false;
      cur = step(cur, sym);
    }
    for (int q : cur)
      if (is_accepting(q)) return true;
    return false;
  }

  bool operator==(const Automaton& other) const {
    return alphabet_ == other.alphabet_ && states_ == other.states_ &&
           initial_ == other.initial_ && accepting_ == other.accepting_ &&
           transitions_ == other.transitions_;
  }

 private:
  Alphabet alphabet_;
  int states_;
  std::vector<int> initial_;
  std::vector<int> accepting_;
  std::vector<Transition> transitions_;
  bool deterministic_;
};

namespace detail {

inline std::vector<bool> forward_reachable(const Automaton& a) {
  std::vector<bool> seen(a.states(), false);
  std::deque<int> work(a.initial().begin(), a.initial().end());
  for (int q : a.initial()) seen[q] = true;
  auto adj = a.adjacency();
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (auto [sym, to] : adj[q]) {
      (void)sym;
      if (!seen[to]) {
        seen[to] = true;
        work.push_back(to);
      }
    }
  }
  return seen;
}

inline std::vector<bool> backward_reachable(const Automaton& a) {
  std::vector<bool> seen(a.states(), false);
  std::vector<std::vector<int>> radj(a.states());
  for (const auto& t : a.transitions()) radj[t.to].push_back(t.from);
  std::deque<int> work(a.accepting().begin(), a.accepting().end());
  for (int q : a.accepting()) seen[q] = true;
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int p : radj[q])
      if (!seen[p]) {
        seen[p] = true;
        work.push_back(p);
      }
  }
  return seen;
}

}  // namespace detail

// Restriction to states that are both reachable and co-reachable.
inline Automaton trim(const Automaton& a) {
  auto fwd = detail::forward_reachable(a);
  auto bwd = detail::backward_reachable(a);
  std::vector<int> remap(a.states(), -1);
  int next = 0;
  for (int q = 0; q < a.states(); ++q)
    if (fwd[q] && bwd[q]) remap[q] = next++;
  std::vector<int> init, acc;
  std::vector<Transition> trans;
  for (int q : a.initial())
    if (remap[q] >= 0) init.push_back(remap[q]);
  for (int q : a.accepting())
    if (remap[q] >= 0) acc.push_back(remap[q]);
  for (const auto& t : a.transitions())
    if (remap[t.from] >= 0 && remap[t.to] >= 0) trans.push_back({remap[t.from], t.sym, remap[t.to]});
  return Automaton(a.alphabet(), next, std::move(init), std::move(acc), std::move(trans));
}

inline bool is_empty(const Automaton& a) {
  auto fwd = detail::forward_reachable(a);
  for (int q : a.accepting())
    if (fwd[q]) return false;
  return true;
}

// True iff the language is finite: the trimmed automaton has no cycle.
inline bool is_finite(const Automaton& a) {
  Automaton t = trim(a);
  auto adj = t.adjacency();
  std::vector<int> color(t.states(), 0);  // 0 new, 1 on stack, 2 done
  for (int start = 0; start < t.states(); ++start) {
    if (color[start]) continue;
    std::vector<std::pair<int, size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto& [q, idx] = stack.back();
      if (idx < adj[q].size()) {
        int to = adj[q][idx].second;
        ++idx;
        if (color[to] == 1) return false;
        if (color[to] == 0) {
          color[to] = 1;
          stack.emplace_back(to, 0);
        }
      } else {
        color[q] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

// Subset construction. The result is a complete DFA with exactly one initial
// state; the empty subset acts as the sink. States are numbered in discovery
// order (symbol order within each state) so the output is canonical.
inline Automaton determinize(const Automaton& a) {
  std::map<std::vector<int>, int> id;
  std::vector<std::vector<int>> subsets;
  auto intern = [&](std::vector<int> s) {
    auto it = id.find(s);
    if (it != id.end()) return it->second;
    int n = static_cast<int>(subsets.size());
    id.emplace(s, n);
    subsets.push_back(std::move(s));
    return n;
  };
  intern(a.initial());
  std::vector<Transition> trans;
  for (int q = 0; q < static_cast<int>(subsets.size()); ++q)
    for (int sym = 0; sym < a.alphabet().size(); ++sym)
      trans.push_back({q, sym, intern(a.step(subsets[q], sym))});
  std::vector<int> acc;
  for (int q = 0; q < static_cast<int>(subsets.size()); ++q)
    for (int s : subsets[q])
      if (a.is_accepting(s)) {
        acc.push_back(q);
        break;
      }
  return Automaton(a.alphabet(), static_cast<int>(subsets.size()), {0}, std::move(acc), std::move(trans));
}

inline Automaton complement(const Automaton& a) {
  Automaton d = determinize(a);
  std::vector<int> acc;
  for (int q = 0; q < d.states(); ++q)
    if (!d.is_accepting(q)) acc.push_back(q);
  return Automaton(d.alphabet(), d.states(), d.initial(), std::move(acc), d.transitions());
}

inline Automaton intersect(const Automaton& a, const Automaton& b) {
  if (a.alphabet() != b.alphabet()) throw error("intersect: alphabet mismatch");
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> pairs;
  auto intern = [&](std::pair<int, int> p) {
    auto it = id.find(p);
    if (it != id.end()) return it->second;
    int n = static_cast<int>(pairs.size());
    id.emplace(p, n);
    pairs.push_back(p);
    return n;
  };
  std::vector<int> init;
  for (int p : a.initial())
    for (int q : b.initial()) init.push_back(intern({p, q}));
  auto adja = a.adjacency();
  auto adjb = b.adjacency();
  std::vector<Transition> trans;
  for (int i = 0; i < static_cast<int>(pairs.size()); ++i) {
    auto [p, q] = pairs[i];
    for (auto [s1, t1] : adja[p])
      for (auto [s2, t2] : adjb[q])
        if (s1 == s2) trans.push_back({i, s1, intern({t1, t2})});
  }
  std::vector<int> acc;
  for (int i = 0; i < static_cast<int>(pairs.size()); ++i)
    if (a.is_accepting(pairs[i].first) && b.is_accepting(pairs[i].second)) acc.push_back(i);
  return Automaton(a.alphabet(), static_cast<int>(pairs.size()), std::move(init), std::move(acc), std::move(trans));
}

inline Automaton unite(const Automaton& a, const Automaton& b) {
  if (a.alphabet() != b.alphabet()) throw error("union: alphabet mismatch");
  int off = a.states();
  std::vector<int> init = a.initial(), acc = a.accepting();
  for (int q : b.initial()) init.push_back(q + off);
  for (int q : b.accepting()) acc.push_back(q + off);
  std::vector<Transition> trans = a.transitions();
  for (const auto& t : b.transitions()) trans.push_back({t.from + off, t.sym, t.to + off});
  return Automaton(a.alphabet(), a.states() + b.states(), std::move(init), std::move(acc), std::move(trans));
}

inline Automaton difference(const Automaton& a, const Automaton& b) {
  return intersect(a, complement(b));
}

// L(b) subseteq L(a), decided via emptiness of b minus a.
inline bool includes(const Automaton& a, const Automaton& b) {
  return is_empty(difference(b, a));
}

inline bool equivalent(const Automaton& a, const Automaton& b) {
  return includes(a, b) && includes(b, a);
}

// Moore partition refinement on the completed reachable part. Requires a
// deterministic input; the result is the unique minimal complete DFA (all
// states reachable, at most one dead state).
inline Automaton minimize(const Automaton& a) {
  if (!a.deterministic()) throw error("minimize: automaton must be deterministic");
  Automaton d = determinize(a);  // completes and renumbers canonically
  int n = d.states(), ns = d.alphabet().size();
  std::vector<int> delta(static_cast<size_t>(n) * ns);
  for (const auto& t : d.transitions()) delta[static_cast<size_t>(t.from) * ns + t.sym] = t.to;
  std::vector<int> cls(n);
  for (int q = 0; q < n; ++q) cls[q] = d.is_accepting(q) ? 1 : 0;
  for (;;) {
    std::map<std::vector<int>, int> sig;
    std::vector<int> next(n);
    for (int q = 0; q < n; ++q) {
      std::vector<int> key{cls[q]};
      for (int s = 0; s < ns; ++s) key.push_back(cls[delta[static_cast<size_t>(q) * ns + s]]);
      auto it = sig.emplace(std::move(key), static_cast<int>(sig.size())).first;
      next[q] = it->second;
    }
    bool same = std::equal(cls.begin(), cls.end(), next.begin());
    cls = std::move(next);
    if (same) break;
  }
  int classes = 1 + *std::max_element(cls.begin(), cls.end());
  std::vector<int> rep(classes, -1);
  for (int q = 0; q < n; ++q)
    if (rep[cls[q]] < 0) rep[cls[q]] = q;
  // Renumber classes in BFS order from the initial class for canonical output.
  std::vector<int> order(classes, -1);
  int start = cls[d.initial()[0]];
  order[start] = 0;
  std::deque<int> work{start};
  int next_id = 1;
  while (!work.empty()) {
    int c = work.front();
    work.pop_front();
    for (int s = 0; s < ns; ++s) {
      int tc = cls[delta[static_cast<size_t>(rep[c]) * ns + s]];
      if (order[tc] < 0) {
        order[tc] = next_id++;
        work.push_back(tc);
      }
    }
  }
  std::vector<Transition> trans;
  std::vector<int> acc;
  for (int c = 0; c < classes; ++c) {
    for (int s = 0; s < ns; ++s)
      trans.push_back({order[c], s, order[cls[delta[static_cast<size_t>(rep[c]) * ns + s]]]});
    if (d.is_accepting(rep[c])) acc.push_back(order[c]);
  }
  return Automaton(d.alphabet(), classes, {0}, std::move(acc), std::move(trans));
}

// Cumulative counts: entry l is the number of accepted words of length <= l.
using GrowthCount = std::vector<mpz_class>;

inline GrowthCount count_words_upto(const Automaton& a, int n) {
  if (n < 0) throw error("count_words_upto: negative bound");
  Automaton d = determinize(a);
  std::vector<mpz_class> cur(d.states(), 0);
  cur[d.initial()[0]] = 1;
  auto adj = d.adjacency();
  GrowthCount out;
  mpz_class total = 0;
  for (int l = 0; l <= n; ++l) {
    if (l > 0) {
      std::vector<mpz_class> nxt(d.states(), 0);
      for (int q = 0; q < d.states(); ++q) {
        if (cur[q] == 0) continue;
        for (auto [sym, to] : adj[q]) {
          (void)sym;
          nxt[to] += cur[q];
        }
      }
      cur = std::move(nxt);
    }
    for (int q : d.accepting()) total += cur[q];
    out.push_back(total);
  }
  return out;
}

// Total number of accepted words, or nullopt when the language is infinite.
inline std::optional<mpz_class> total_count(const Automaton& a) {
  if (!is_finite(a)) return std::nullopt;
  Automaton t = trim(a);
  if (t.states() == 0) return mpz_class(0);
  // A trimmed acyclic automaton accepts no word longer than states-1.
  return count_words_upto(t, t.states() - 1).back();
}

// All accepted words of length <= n in length-lexicographic order.
inline std::vector<Word> enumerate_upto(const Automaton& a, int n) {
  if (n < 0) throw error("enumerate_upto: negative bound");
  Automaton d = determinize(a);
  // Distance from each state to the nearest accepting state, for pruning.
  std::vector<int> dist(d.states(), -1);
  std::vector<std::vector<int>> radj(d.states());
  for (const auto& t : d.transitions()) radj[t.to].push_back(t.from);
  std::deque<int> work;
  for (int q : d.accepting()) {
    dist[q] = 0;
    work.push_back(q);
  }
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int p : radj[q])
      if (dist[p] < 0) {
        dist[p] = dist[q] + 1;
        work.push_back(p);
      }
  }
  auto adj = d.adjacency();
  std::vector<Word> out;
  Word prefix;
  auto dfs = [&](auto&& self, int q, int depth) -> void {
    if (d.is_accepting(q)) out.push_back(prefix);
    if (depth == n) return;
    for (auto [sym, to] : adj[q]) {
      if (dist[to] < 0 || dist[to] > n - depth - 1) continue;
      prefix.push_back(sym);
      self(self, to, depth + 1);
      prefix.pop_back();
    }
  };
  if (!d.accepting().empty()) dfs(dfs, d.initial()[0], 0);
  std::sort(out.begin(), out.end(), llex_less);
  return out;
}

}  // namespace astra
