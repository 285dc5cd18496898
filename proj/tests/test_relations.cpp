#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "astra/regex.hpp"
#include "astra/relation.hpp"

using namespace astra;

namespace {

std::vector<Word> words_upto(int nsyms, int maxlen) {
  std::vector<Word> out{{}};
  std::vector<Word> layer{{}};
  for (int l = 0; l < maxlen; ++l) {
    std::vector<Word> next;
    for (const Word& w : layer)
      for (int s = 0; s < nsyms; ++s) {
        Word v = w;
        v.push_back(s);
        next.push_back(v);
        out.push_back(std::move(v));
      }
    layer = std::move(next);
  }
  return out;
}

Word unary(int n) { return Word(n, 0); }

// x <= y over the unary alphabet {0}: (0,0)* (pad,0)*
RegularRelation unary_le() {
  Alphabet sigma({"0"});
  PaddedAlphabet pa(sigma, 2);
  int s00 = pa.symbol({0, 0}), sp0 = pa.symbol({pa.pad(), 0});
  Automaton a(pa.alphabet(), 2, {0}, {0, 1}, {{0, s00, 0}, {0, sp0, 1}, {1, sp0, 1}});
  return RegularRelation(pa, a);
}

}  // namespace

TEST_CASE("convolution round trip") {
  Alphabet sigma({"a", "b"});
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> len(0, 5), sym(0, 1);
  for (int arity = 1; arity <= 3; ++arity) {
    PaddedAlphabet pa(sigma, arity);
    for (int round = 0; round < 60; ++round) {
      std::vector<Word> tuple(arity);
      for (Word& w : tuple) {
        w.resize(len(rng));
        for (int& c : w) c = sym(rng);
      }
      Word conv = pa.convolve(tuple);
      size_t longest = 0;
      for (const Word& w : tuple) longest = std::max(longest, w.size());
      REQUIRE(conv.size() == longest);
      REQUIRE(pa.deconvolve(conv) == tuple);
      REQUIRE(pa.validity().accepts(conv));
    }
  }
}

TEST_CASE("padded symbols and masks") {
  Alphabet sigma({"a", "b"});
  PaddedAlphabet pa(sigma, 2);
  REQUIRE(pa.pad() == 2);
  REQUIRE(pa.alphabet().size() == 8);  // 3^2 - 1
  for (int s = 0; s < pa.alphabet().size(); ++s) {
    std::vector<int> comps(2);
    unsigned mask = 0;
    for (int t = 0; t < 2; ++t) {
      comps[t] = pa.component(s, t);
      if (comps[t] == pa.pad()) mask |= 1u << t;
    }
    REQUIRE(pa.symbol(comps) == s);
    REQUIRE(pa.pad_mask(s) == mask);
    REQUIRE(pa.pad_at(s, 0) == (comps[0] == pa.pad()));
  }
  REQUIRE_THROWS_AS(pa.symbol({pa.pad(), pa.pad()}), error);
  REQUIRE_THROWS_AS(PaddedAlphabet(Alphabet({"a", "_"}), 2), error);
}

TEST_CASE("validity automaton rejects pad followed by letter") {
  Alphabet sigma({"a", "b"});
  PaddedAlphabet pa(sigma, 2);
  Automaton v = pa.validity();
  Word bad{pa.symbol({pa.pad(), 0}), pa.symbol({0, 1})};
  REQUIRE(!v.accepts(bad));
  Word good{pa.symbol({0, 1}), pa.symbol({pa.pad(), 0})};
  REQUIRE(v.accepts(good));
  REQUIRE_THROWS_AS(pa.deconvolve(bad), error);
}

TEST_CASE("lift places a language on chosen tracks") {
  Alphabet sigma({"a", "b"});
  PaddedAlphabet one(sigma, 1), two(sigma, 2);
  Automaton lang = concat(aut_literal(sigma, {0}), star(aut_literal(sigma, {1})));  // ab*
  for (int track = 0; track < 2; ++track) {
    Automaton lifted = lift_tracks(lang, one, two, {track});
    for (const Word& u : words_upto(2, 3))
      for (const Word& v : words_upto(2, 3)) {
        bool expect = lang.accepts(track == 0 ? u : v);
        REQUIRE(lifted.accepts(two.convolve({u, v})) == expect);
      }
  }
}

TEST_CASE("projection quantifies a track away") {
  RegularRelation le = unary_le();
  // exists x . x <= y: all y; exists y . x <= y: all x
  RegularRelation ys = project(le, 0), xs = project(le, 1);
  for (int n = 0; n <= 6; ++n) {
    REQUIRE(ys.acceptor().accepts(unary(n)));
    REQUIRE(xs.acceptor().accepts(unary(n)));
  }
  // intersect with y <= 2 first, then project away y: x <= 2
  Alphabet sigma({"0"});
  PaddedAlphabet one(sigma, 1);
  Automaton small = aut_words(sigma, {unary(0), unary(1), unary(2)});
  Automaton both = intersect(le.acceptor(), lift_tracks(small, one, le.pa(), {1}));
  RegularRelation bounded = project(RegularRelation(le.pa(), both, false), 1);
  for (int n = 0; n <= 6; ++n) REQUIRE(bounded.acceptor().accepts(unary(n)) == (n <= 2));
}

TEST_CASE("relation membership via contains") {
  RegularRelation le = unary_le();
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; j <= 5; ++j) REQUIRE(le.contains({unary(i), unary(j)}) == (i <= j));
}

TEST_CASE("cylindrify and permute") {
  RegularRelation le = unary_le();
  // spread x <= y onto tracks 0,2 of a ternary relation
  RegularRelation wide = cylindrify(le, 3, {0, 2});
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j)
      for (int k = 0; k <= 3; ++k)
        REQUIRE(wide.contains({unary(i), unary(j), unary(k)}) == (i <= k));
  RegularRelation ge = permute_tracks(le, {1, 0});
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) REQUIRE(ge.contains({unary(i), unary(j)}) == (i >= j));
}

TEST_CASE("composition of relations") {
  RegularRelation le = unary_le();
  // le о le = le
  RegularRelation lele = compose(le, le, 1, 1, 1);
  REQUIRE(equivalent(lele.acceptor(), le.acceptor()));
  // ge о le = everything
  RegularRelation gele = compose(permute_tracks(le, {1, 0}), le, 1, 1, 1);
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) REQUIRE(gele.contains({unary(i), unary(j)}));
}

TEST_CASE("image of a set under a relation") {
  RegularRelation le = unary_le();
  Alphabet sigma({"0"});
  Automaton seed = aut_words(sigma, {unary(3)});
  Automaton img = image(le, 1, seed);
  for (int n = 0; n <= 8; ++n) REQUIRE(img.accepts(unary(n)) == (n >= 3));
}

TEST_CASE("finite out-degree and length increase constants") {
  RegularRelation le = unary_le();
  REQUIRE(!is_finite_outdegree(le, 1));
  RegularRelation ge = permute_tracks(le, {1, 0});
  REQUIRE(is_finite_outdegree(ge, 1));
  // le never pads its right track, so the left part is length-bounded
  int kappa = length_increase_constant(le, 1);
  REQUIRE(kappa >= 0);
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 6; ++j)
      if (le.contains({unary(i), unary(j)})) REQUIRE(i <= j + kappa);
  // ge pumps its left track while the right is padded
  REQUIRE_THROWS_AS(length_increase_constant(ge, 1), error);
}

TEST_CASE("relation validation rejects invalid acceptors") {
  Alphabet sigma({"a"});
  PaddedAlphabet pa(sigma, 2);
  // accepts (pad,a)(a,a): pad followed by a letter on track 0
  Automaton bad(pa.alphabet(), 3, {0}, {2},
                {{0, pa.symbol({pa.pad(), 0}), 1}, {1, pa.symbol({0, 0}), 2}});
  REQUIRE_THROWS_AS(RegularRelation(pa, bad), error);
  REQUIRE_NOTHROW(RegularRelation(pa, bad, false));
}

TEST_CASE("boolean operations on relations") {
  RegularRelation le = unary_le();
  RegularRelation ge = permute_tracks(le, {1, 0});
  RegularRelation eq = intersect(le, ge);
  RegularRelation lt = difference(le, ge);
  RegularRelation all = unite(le, ge);
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; j <= 5; ++j) {
      REQUIRE(eq.contains({unary(i), unary(j)}) == (i == j));
      REQUIRE(lt.contains({unary(i), unary(j)}) == (i < j));
      REQUIRE(all.contains({unary(i), unary(j)}));
    }
}
