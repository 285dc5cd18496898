#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "astra/automaton.hpp"

namespace astra {

// Minimal literal/union/concat/star constructors. All constructions are
// epsilon-free so the rest of the library never deals with epsilon moves.

inline Automaton aut_none(const Alphabet& sigma) {
  return Automaton(sigma, 1, {0}, {}, {});
}

inline Automaton aut_epsilon(const Alphabet& sigma) {
  return Automaton(sigma, 1, {0}, {0}, {});
}

inline Automaton aut_literal(const Alphabet& sigma, const Word& w) {
  std::vector<Transition> trans;
  for (size_t i = 0; i < w.size(); ++i) trans.push_back({static_cast<int>(i), w[i], static_cast<int>(i) + 1});
  return Automaton(sigma, static_cast<int>(w.size()) + 1, {0}, {static_cast<int>(w.size())}, std::move(trans));
}

// Accepts exactly the length-one words over the given symbol set.
inline Automaton aut_symbols(const Alphabet& sigma, const std::vector<int>& syms) {
  std::vector<Transition> trans;
  for (int s : syms) trans.push_back({0, s, 1});
  return Automaton(sigma, 2, {0}, {1}, std::move(trans));
}

inline Automaton aut_all(const Alphabet& sigma) {
  std::vector<Transition> trans;
  for (int s = 0; s < sigma.size(); ++s) trans.push_back({0, s, 0});
  return Automaton(sigma, 1, {0}, {0}, std::move(trans));
}

inline bool accepts_epsilon(const Automaton& a) {
  for (int q : a.initial())
    if (a.is_accepting(q)) return true;
  return false;
}

inline Automaton concat(const Automaton& a, const Automaton& b) {
  if (a.alphabet() != b.alphabet()) throw error("concat: alphabet mismatch");
  int off = a.states();
  std::vector<int> init = a.initial();
  if (accepts_epsilon(a))
    for (int q : b.initial()) init.push_back(q + off);
  std::vector<int> acc;
  for (int q : b.accepting()) acc.push_back(q + off);
  if (accepts_epsilon(b))
    for (int q : a.accepting()) acc.push_back(q);
  std::vector<Transition> trans = a.transitions();
  for (const auto& t : b.transitions()) trans.push_back({t.from + off, t.sym, t.to + off});
  // Bridge: from accepting states of a, mimic the initial moves of b.
  for (const auto& t : b.transitions())
    if (std::binary_search(b.initial().begin(), b.initial().end(), t.from))
      for (int f : a.accepting()) trans.push_back({f, t.sym, t.to + off});
  return Automaton(a.alphabet(), a.states() + b.states(), std::move(init), std::move(acc), std::move(trans));
}

inline Automaton star(const Automaton& a) {
  int q0 = a.states();
  std::vector<Transition> trans = a.transitions();
  std::vector<Transition> entry;
  for (const auto& t : a.transitions())
    if (std::binary_search(a.initial().begin(), a.initial().end(), t.from)) entry.push_back(t);
  for (const auto& t : entry) {
    trans.push_back({q0, t.sym, t.to});
    for (int f : a.accepting()) trans.push_back({f, t.sym, t.to});
  }
  std::vector<int> acc = a.accepting();
  acc.push_back(q0);
  return Automaton(a.alphabet(), a.states() + 1, {q0}, std::move(acc), std::move(trans));
}

// Trie acceptor for an explicit finite set of words.
inline Automaton aut_words(const Alphabet& sigma, const std::vector<Word>& words) {
  std::vector<std::map<int, int>> node(1);
  std::vector<int> acc;
  for (const auto& w : words) {
    int q = 0;
    for (int sym : w) {
      auto it = node[q].find(sym);
      if (it == node[q].end()) {
        node.emplace_back();
        it = node[q].emplace(sym, static_cast<int>(node.size()) - 1).first;
      }
      q = it->second;
    }
    acc.push_back(q);
  }
  std::vector<Transition> trans;
  for (int q = 0; q < static_cast<int>(node.size()); ++q)
    for (auto [sym, to] : node[q]) trans.push_back({q, sym, to});
  return Automaton(sigma, static_cast<int>(node.size()), {0}, std::move(acc), std::move(trans));
}

inline Automaton aut_word(const Alphabet& sigma, const std::vector<std::string>& tokens) {
  Word w;
  for (const auto& t : tokens) {
    int s = sigma.index_of(t);
    if (s < 0) throw error("aut_word: unknown token '" + t + "'");
    w.push_back(s);
  }
  return aut_literal(sigma, w);
}

}  // namespace astra
