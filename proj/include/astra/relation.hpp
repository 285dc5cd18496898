#pragma once

#include <utility>
#include <vector>

#include "astra/padded.hpp"

namespace astra {

// A relation on words given by an acceptor over the n-track padded alphabet.
// The acceptor is required to accept only canonical convolutions, so language
// operations on acceptors coincide with set operations on relations.
class RegularRelation {
 public:
  RegularRelation(PaddedAlphabet pa, Automaton acceptor, bool validate = true)
      : pa_(std::move(pa)), acceptor_(std::move(acceptor)) {
    if (acceptor_.alphabet() != pa_.alphabet()) throw error("relation: acceptor alphabet mismatch");
    if (validate && !includes(pa_.validity(), acceptor_))
      throw error("relation: acceptor accepts words that are not convolutions");
  }

  int arity() const { return pa_.arity(); }
  const PaddedAlphabet& pa() const { return pa_; }
  const Alphabet& base() const { return pa_.base(); }
  const Automaton& acceptor() const { return acceptor_; }

  bool contains(const std::vector<Word>& tuple) const {
    return acceptor_.accepts(pa_.convolve(tuple));
  }

 private:
  PaddedAlphabet pa_;
  Automaton acceptor_;
};

inline RegularRelation intersect(const RegularRelation& a, const RegularRelation& b) {
  if (!(a.pa() == b.pa())) throw error("relation intersect: track mismatch");
  return RegularRelation(a.pa(), intersect(a.acceptor(), b.acceptor()), false);
}

inline RegularRelation unite(const RegularRelation& a, const RegularRelation& b) {
  if (!(a.pa() == b.pa())) throw error("relation unite: track mismatch");
  return RegularRelation(a.pa(), unite(a.acceptor(), b.acceptor()), false);
}

// a minus b; the result stays inside a's language, hence valid.
inline RegularRelation difference(const RegularRelation& a, const RegularRelation& b) {
  if (!(a.pa() == b.pa())) throw error("relation difference: track mismatch");
  return RegularRelation(a.pa(), difference(a.acceptor(), b.acceptor()), false);
}

// Spreads an n-ary relation over a wider track set; positions[i] is the
// destination track of source track i. New tracks range over all words.
inline RegularRelation cylindrify(const RegularRelation& r, int arity, const std::vector<int>& positions) {
  PaddedAlphabet target(r.base(), arity);
  return RegularRelation(target, lift_tracks(r.acceptor(), r.pa(), target, positions), false);
}

// Reorders tracks: destination track perm[i] carries source track i.
inline RegularRelation permute_tracks(const RegularRelation& r, const std::vector<int>& perm) {
  return cylindrify(r, r.arity(), perm);
}

// Existential projection of one track.
inline RegularRelation project(const RegularRelation& r, int track) {
  PaddedAlphabet target(r.base(), r.arity() - 1);
  return RegularRelation(target, project_track(r.acceptor(), r.pa(), track), false);
}

// Join of r (split k|m) and s (split m|l) over the shared middle tracks.
inline RegularRelation compose(const RegularRelation& r, const RegularRelation& s, int k, int m, int l) {
  if (r.arity() != k + m || s.arity() != m + l) throw error("compose: split does not match arities");
  if (!(r.base() == s.base())) throw error("compose: base mismatch");
  std::vector<int> left(k + m), right(m + l);
  for (int i = 0; i < k + m; ++i) left[i] = i;
  for (int i = 0; i < m + l; ++i) right[i] = k + i;
  RegularRelation joint = intersect(cylindrify(r, k + m + l, left), cylindrify(s, k + m + l, right));
  for (int i = 0; i < m; ++i) joint = project(joint, k);
  return joint;
}

// Image of a k-track set under a relation split k|m: the m-track set of all
// tuples related to some input tuple. The input acceptor lives over the
// k-track alphabet (for k = 1 that alphabet equals the base alphabet).
inline Automaton image(const RegularRelation& r, int k, const Automaton& input) {
  int m = r.arity() - k;
  if (k < 1 || m < 1) throw error("image: split out of range");
  PaddedAlphabet source(r.base(), k);
  if (input.alphabet() != source.alphabet()) throw error("image: input alphabet mismatch");
  std::vector<int> pos(k);
  for (int i = 0; i < k; ++i) pos[i] = i;
  Automaton joint = intersect(lift_tracks(input, source, r.pa(), pos), r.acceptor());
  RegularRelation cur(r.pa(), std::move(joint), false);
  for (int i = 0; i < k; ++i) cur = project(cur, 0);
  return cur.acceptor();
}

// True iff the trimmed acceptor has a cycle whose symbols pad every track in
// the mask. Such a cycle pumps the other tracks while the masked ones stand
// still.
inline bool has_padded_cycle(const Automaton& a, const PaddedAlphabet& pa, unsigned mask) {
  Automaton t = trim(a);
  std::vector<std::vector<int>> adj(t.states());
  for (const auto& tr : t.transitions())
    if ((pa.pad_mask(tr.sym) & mask) == mask) adj[tr.from].push_back(tr.to);
  std::vector<int> color(t.states(), 0);
  for (int s = 0; s < t.states(); ++s) {
    if (color[s]) continue;
    std::vector<std::pair<int, size_t>> stack{{s, 0}};
    color[s] = 1;
    while (!stack.empty()) {
      auto& [q, i] = stack.back();
      if (i == adj[q].size()) {
        color[q] = 2;
        stack.pop_back();
        continue;
      }
      int nxt = adj[q][i++];
      if (color[nxt] == 1) return true;
      if (color[nxt] == 0) {
        color[nxt] = 1;
        stack.push_back({nxt, 0});
      }
    }
  }
  return false;
}

// Split k|m: do only finitely many right tuples relate to each left tuple?
// Infinitely many would require pumping a cycle that leaves the left tracks
// padded.
inline bool is_finite_outdegree(const RegularRelation& r, int k) {
  if (k < 1 || k >= r.arity()) throw error("finite outdegree: split out of range");
  unsigned mask = (1u << k) - 1;
  return !has_padded_cycle(r.acceptor(), r.pa(), mask);
}

// Split k|m with finite out-degree in the reverse direction: returns the
// exact bound kappa such that every related pair satisfies
// |left| <= |right| + kappa. The excess symbols form a run of right-padded
// transitions at the end of an accepted path; without padded cycles those
// runs form a DAG, and kappa is its longest path into an accepting state.
inline int length_increase_constant(const RegularRelation& r, int k) {
  if (k < 1 || k >= r.arity()) throw error("length bound: split out of range");
  unsigned mask = ((1u << r.arity()) - 1) & ~((1u << k) - 1);
  if (has_padded_cycle(r.acceptor(), r.pa(), mask)) throw error("infinite out-degree");
  Automaton t = trim(r.acceptor());
  std::vector<std::vector<int>> fwd(t.states()), rev(t.states());
  std::vector<int> pending(t.states(), 0);
  for (const auto& tr : t.transitions())
    if ((r.pa().pad_mask(tr.sym) & mask) == mask) {
      fwd[tr.from].push_back(tr.to);
      rev[tr.to].push_back(tr.from);
      ++pending[tr.from];
    }
  std::vector<int> order;
  for (int s = 0; s < t.states(); ++s)
    if (pending[s] == 0) order.push_back(s);
  for (size_t i = 0; i < order.size(); ++i)
    for (int prev : rev[order[i]])
      if (--pending[prev] == 0) order.push_back(prev);
  std::vector<bool> accepting(t.states(), false);
  for (int s : t.accepting()) accepting[s] = true;
  std::vector<int> best(t.states(), -1);  // longest padded run from here to acceptance
  int kappa = 0;
  for (int q : order) {
    if (accepting[q]) best[q] = 0;
    for (int next : fwd[q])
      if (best[next] >= 0) best[q] = std::max(best[q], best[next] + 1);
    kappa = std::max(kappa, best[q]);
  }
  return kappa;
}

}  // namespace astra
