#pragma once

#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "astra/automaton.hpp"
#include "astra/regex.hpp"

namespace astra {

// Alphabet of n-track convolution symbols over a base alphabet: all tuples
// over (base + pad)^n except the all-pad tuple. Symbol indexing is the mixed
// radix order over tracks with track 0 most significant; within a track the
// digit is the base index, with the pad digit last. Excluding the all-pad
// tuple (the largest value) keeps indices contiguous.
class PaddedAlphabet {
 public:
  PaddedAlphabet(Alphabet base, int arity) : base_(std::move(base)), arity_(arity) {
    if (arity_ < 1) throw error("padded alphabet: arity must be >= 1");
    if (base_.index_of("_") >= 0) throw error("padded alphabet: base may not contain the pad token '_'");
    radix_ = base_.size() + 1;
    long long count = 1;
    for (int i = 0; i < arity_; ++i) {
      count *= radix_;
      if (count > (1 << 22)) throw error("padded alphabet: symbol space too large");
    }
    pow_.assign(arity_, 1);
    for (int i = arity_ - 2; i >= 0; --i) pow_[i] = pow_[i + 1] * radix_;
    // When joining several components, commas and backslashes inside their
    // tokens are escaped so that the joined name determines the component
    // tuple even for bases whose tokens are themselves convolution symbols.
    // A single track needs no separator, and keeps the base tokens verbatim.
    auto escape = [this](const std::string& t) {
      if (arity_ == 1) return t;
      std::string out;
      for (char c : t) {
        if (c == '\\' || c == ',') out += '\\';
        out += c;
      }
      return out;
    };
    std::vector<std::string> tokens;
    tokens.reserve(count - 1);
    for (long long v = 0; v < count - 1; ++v) {
      std::string tok;
      for (int i = 0; i < arity_; ++i) {
        if (i) tok += ',';
        int digit = static_cast<int>(v / pow_[i]) % radix_;
        tok += digit == base_.size() ? "_" : escape(base_.token(digit));
      }
      tokens.push_back(std::move(tok));
    }
    derived_ = Alphabet(std::move(tokens));
  }

  int arity() const { return arity_; }
  const Alphabet& base() const { return base_; }
  const Alphabet& alphabet() const { return derived_; }
  int pad() const { return base_.size(); }

  // Component of a symbol on one track: a base index, or pad().
  int component(int sym, int track) const {
    return static_cast<int>(sym / pow_[track]) % radix_;
  }

  bool pad_at(int sym, int track) const { return component(sym, track) == pad(); }

  int symbol(const std::vector<int>& comps) const {
    if (static_cast<int>(comps.size()) != arity_) throw error("padded alphabet: component count mismatch");
    long long v = 0;
    bool all_pad = true;
    for (int i = 0; i < arity_; ++i) {
      if (comps[i] < 0 || comps[i] > pad()) throw error("padded alphabet: component out of range");
      all_pad = all_pad && comps[i] == pad();
      v += static_cast<long long>(comps[i]) * pow_[i];
    }
    if (all_pad) throw error("padded alphabet: all-pad symbol does not exist");
    return static_cast<int>(v);
  }

  // Padding mask of a symbol: bit i set iff track i is padded.
  unsigned pad_mask(int sym) const {
    unsigned m = 0;
    for (int i = 0; i < arity_; ++i)
      if (pad_at(sym, i)) m |= 1u << i;
    return m;
  }

  // Convolution of one word per track: column j carries the j-th letter of
  // each track, or pad once a track is exhausted.
  Word convolve(const std::vector<Word>& tracks) const {
    if (static_cast<int>(tracks.size()) != arity_) throw error("convolve: track count mismatch");
    size_t len = 0;
    for (const auto& t : tracks) len = std::max(len, t.size());
    Word out;
    out.reserve(len);
    std::vector<int> comps(arity_);
    for (size_t j = 0; j < len; ++j) {
      for (int i = 0; i < arity_; ++i) comps[i] = j < tracks[i].size() ? tracks[i][j] : pad();
      out.push_back(symbol(comps));
    }
    return out;
  }

  // Inverse of convolve; rejects words that are not canonical convolutions.
  std::vector<Word> deconvolve(const Word& w) const {
    std::vector<Word> tracks(arity_);
    std::vector<bool> done(arity_, false);
    for (int sym : w) {
      for (int i = 0; i < arity_; ++i) {
        int c = component(sym, i);
        if (c == pad()) {
          done[i] = true;
        } else {
          if (done[i]) throw error("deconvolve: pad followed by a letter");
          tracks[i].push_back(c);
        }
      }
    }
    return tracks;
  }

  // Deterministic automaton of all canonical convolutions: once a track pads
  // it stays padded. States are pad masks; the full mask is unreachable.
  Automaton validity() const {
    int states = (1 << arity_) - 1;
    std::vector<Transition> trans;
    for (int m = 0; m < states; ++m)
      for (int s = 0; s < derived_.size(); ++s) {
        unsigned pm = pad_mask(s);
        if ((static_cast<unsigned>(m) & ~pm) == 0) trans.push_back({m, s, static_cast<int>(pm)});
      }
    std::vector<int> acc(states);
    for (int m = 0; m < states; ++m) acc[m] = m;
    return Automaton(derived_, states, {0}, std::move(acc), std::move(trans));
  }

  bool operator==(const PaddedAlphabet& o) const { return base_ == o.base_ && arity_ == o.arity_; }

 private:
  Alphabet base_;
  int arity_;
  int radix_;
  std::vector<long long> pow_;
  Alphabet derived_;
};

// Embeds an automaton over source tracks into a wider padded alphabet.
// positions[i] gives the destination track of source track i (injective).
// The result accepts a wide convolution iff the restriction to the chosen
// tracks, with trailing all-pad columns removed, is accepted by a. The
// remaining tracks are unconstrained beyond convolution validity.
inline Automaton lift_tracks(const Automaton& a, const PaddedAlphabet& source,
                             const PaddedAlphabet& target, const std::vector<int>& positions) {
  if (a.alphabet() != source.alphabet()) throw error("lift_tracks: acceptor alphabet mismatch");
  if (static_cast<int>(positions.size()) != source.arity()) throw error("lift_tracks: position count mismatch");
  if (source.base() != target.base()) throw error("lift_tracks: base mismatch");
  std::vector<bool> used(target.arity(), false);
  for (int p : positions) {
    if (p < 0 || p >= target.arity() || used[p]) throw error("lift_tracks: positions must be injective");
    used[p] = true;
  }
  // Map every target symbol to the induced source symbol (or -1 when the
  // chosen tracks are all padded).
  int nt = target.alphabet().size();
  std::vector<int> induced(nt);
  std::vector<int> comps(source.arity());
  for (int s = 0; s < nt; ++s) {
    bool all_pad = true;
    for (int i = 0; i < source.arity(); ++i) {
      comps[i] = target.component(s, positions[i]);
      all_pad = all_pad && comps[i] == source.pad();
    }
    induced[s] = all_pad ? -1 : source.symbol(comps);
  }
  int done = a.states();  // reached once the chosen tracks are exhausted
  std::vector<Transition> trans;
  for (int s = 0; s < nt; ++s) {
    if (induced[s] < 0) {
      for (int f : a.accepting()) trans.push_back({f, s, done});
      trans.push_back({done, s, done});
    }
  }
  for (const auto& t : a.transitions())
    for (int s = 0; s < nt; ++s)
      if (induced[s] == t.sym) trans.push_back({t.from, s, t.to});
  std::vector<int> acc = a.accepting();
  acc.push_back(done);
  Automaton wide(target.alphabet(), a.states() + 1, a.initial(), std::move(acc), std::move(trans));
  return intersect(wide, target.validity());
}

// Removes one track. Trailing columns that carried only the dropped track
// are absorbed by closing acceptance under dropped-track-only moves.
inline Automaton project_track(const Automaton& a, const PaddedAlphabet& source, int track) {
  if (a.alphabet() != source.alphabet()) throw error("project_track: acceptor alphabet mismatch");
  if (source.arity() < 2) throw error("project_track: arity must be >= 2");
  if (track < 0 || track >= source.arity()) throw error("project_track: track out of range");
  PaddedAlphabet target(source.base(), source.arity() - 1);
  int ns = source.alphabet().size();
  std::vector<int> dropped(ns);  // target symbol, or -1 when only `track` is live
  std::vector<int> comps(target.arity());
  for (int s = 0; s < ns; ++s) {
    bool all_pad = true;
    int k = 0;
    for (int i = 0; i < source.arity(); ++i) {
      if (i == track) continue;
      comps[k] = source.component(s, i);
      all_pad = all_pad && comps[k] == source.pad();
      ++k;
    }
    dropped[s] = all_pad ? -1 : target.symbol(comps);
  }
  // Accepting closure: states reaching acceptance through columns where only
  // the dropped track is live.
  std::vector<bool> closed(a.states(), false);
  for (int q : a.accepting()) closed[q] = true;
  std::vector<std::vector<int>> radj(a.states());
  for (const auto& t : a.transitions())
    if (dropped[t.sym] < 0) radj[t.to].push_back(t.from);
  std::deque<int> work(a.accepting().begin(), a.accepting().end());
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int p : radj[q])
      if (!closed[p]) {
        closed[p] = true;
        work.push_back(p);
      }
  }
  std::vector<Transition> trans;
  for (const auto& t : a.transitions())
    if (dropped[t.sym] >= 0) trans.push_back({t.from, dropped[t.sym], t.to});
  std::vector<int> acc;
  for (int q = 0; q < a.states(); ++q)
    if (closed[q]) acc.push_back(q);
  return Automaton(target.alphabet(), a.states(), a.initial(), std::move(acc), std::move(trans));
}

}  // namespace astra
