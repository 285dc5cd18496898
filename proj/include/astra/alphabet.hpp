#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "astra/core.hpp"

namespace astra {

// Finite ordered list of printable tokens. The position of a token is its
// symbol index; words store indices, not tokens.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw error("alphabet: symbol list must be nonempty");
    for (size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].empty()) throw error("alphabet: empty token");
      auto [it, fresh] = index_.emplace(symbols_[i], static_cast<int>(i));
      if (!fresh) throw error("alphabet: duplicate token '" + symbols_[i] + "'");
    }
  }

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& token(int sym) const { return symbols_.at(static_cast<size_t>(sym)); }
  const std::vector<std::string>& tokens() const { return symbols_; }

  // Index of a token, or -1 when absent.
  int index_of(const std::string& tok) const {
    auto it = index_.find(tok);
    return it == index_.end() ? -1 : it->second;
  }

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

  // Word from a string of single-character tokens; only valid when every
  // token of this alphabet has length one.
  Word word(const std::string& text) const {
    Word w;
    w.reserve(text.size());
    for (char c : text) {
      int sym = index_of(std::string(1, c));
      if (sym < 0) throw error("alphabet: unknown token '" + std::string(1, c) + "'");
      w.push_back(sym);
    }
    return w;
  }

  std::string format(const Word& w) const {
    bool single = true;
    for (const auto& t : symbols_) single = single && t.size() == 1;
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
      if (!single && i) out += ' ';
      out += token(w[i]);
    }
    return out;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace astra
