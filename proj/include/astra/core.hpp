#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace astra {

// Domain error: invalid input or unsatisfied precondition. Internal logic
// failures use std::logic_error instead and indicate a bug.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A word is a sequence of symbol indices into some Alphabet.
using Word = std::vector<int>;

// Length-lexicographic comparison: by length first, then by symbol index.
inline int llex_compare(const Word& u, const Word& v) {
  if (u.size() != v.size()) return u.size() < v.size() ? -1 : 1;
  if (u < v) return -1;
  return u == v ? 0 : 1;
}

inline bool llex_less(const Word& u, const Word& v) { return llex_compare(u, v) < 0; }

}  // namespace astra
