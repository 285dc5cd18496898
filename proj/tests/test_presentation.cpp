#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "astra/presentation.hpp"
#include "astra/regex.hpp"

using namespace astra;

namespace {

Word unary(int n) { return Word(n, 0); }

// base-2 numeral, least significant digit first, canonical (no trailing 0)
Word bin(long v) {
  Word w;
  while (v) {
    w.push_back(v & 1);
    v >>= 1;
  }
  return w;
}

// Reference evaluator over the segment {0..B} of the ordered naturals.
// Quantifiers range over the segment only, so formulas must keep each
// quantified variable guarded by le(var, m) with m interpreted as B.
bool brute(const Formula& f, std::map<std::string, int>& env, int B) {
  switch (f.kind) {
    case Formula::Kind::Atom: {
      if (f.rel == "le") return env.at(f.args[0]) <= env.at(f.args[1]);
      if (f.rel == "=") return env.at(f.args[0]) == env.at(f.args[1]);
      throw error("brute: unexpected relation");
    }
    case Formula::Kind::Not:
      return !brute(*f.left, env, B);
    case Formula::Kind::And:
      return brute(*f.left, env, B) && brute(*f.right, env, B);
    case Formula::Kind::Or:
      return brute(*f.left, env, B) || brute(*f.right, env, B);
    case Formula::Kind::Implies:
      return !brute(*f.left, env, B) || brute(*f.right, env, B);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool exists = f.kind == Formula::Kind::Exists;
      for (int v = 0; v <= B; ++v) {
        env[f.var] = v;
        bool r = brute(*f.left, env, B);
        if (r == exists) {
          env.erase(f.var);
          return exists;
        }
      }
      env.erase(f.var);
      return !exists;
    }
    case Formula::Kind::ExistsInf:
      return false;  // a guarded body has finitely many witnesses
    case Formula::Kind::ExistsMod: {
      int count = 0;
      for (int v = 0; v <= B; ++v) {
        env[f.var] = v;
        if (brute(*f.left, env, B)) ++count;
      }
      env.erase(f.var);
      return count % f.m == f.k;
    }
  }
  throw error("brute: unreachable");
}

}  // namespace

TEST_CASE("ordered naturals: axioms and simple sentences") {
  Presentation p = omega_le();
  REQUIRE(decide(p, parse_formula("A x . le(x,x)")));
  REQUIRE(decide(p, parse_formula("A x . A y . le(x,y) & le(y,x) -> x = y")));
  REQUIRE(decide(p, parse_formula("A x . A y . A z . le(x,y) & le(y,z) -> le(x,z)")));
  REQUIRE(decide(p, parse_formula("A x . A y . le(x,y) | le(y,x)")));
  REQUIRE(decide(p, parse_formula("E z . A x . le(z,x)")));          // least element
  REQUIRE(!decide(p, parse_formula("E z . A x . le(x,z)")));         // no greatest
  REQUIRE(decide(p, parse_formula("A x . E y . le(x,y) & !(x = y)")));
  REQUIRE(decide(p, parse_formula("A x . Einf y . le(x,y)")));
  REQUIRE(!decide(p, parse_formula("E x . Einf y . le(y,x)")));
}

TEST_CASE("evaluation yields relations over sorted free variables") {
  Presentation p = omega_le();
  Evaluated e = eval(p, parse_formula("le(y,x) & !(x = y)"));
  REQUIRE(e.vars == std::vector<std::string>{"x", "y"});
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; j <= 5; ++j) REQUIRE(e.rel->contains({unary(i), unary(j)}) == (j < i));
  REQUIRE_THROWS_AS(decide(p, parse_formula("le(x,x)")), error);
  REQUIRE_THROWS_AS(eval(p, parse_formula("zz(x)")), error);
  REQUIRE_THROWS_AS(eval(p, parse_formula("le(x,y,z)")), error);
}

TEST_CASE("evaluator agrees with brute force on the segment 0..12") {
  Presentation p = omega_le();
  const int B = 12;
  std::vector<std::string> pool{
      "le(x,m)",
      "E y . le(y,m) & le(x,y) & !(x = y)",
      "A y . le(y,m) -> le(y,x)",
      "Emod 1,2 y . le(y,m) & le(y,x)",
      "Emod 0,3 y . le(y,m) & le(y,x) & !(y = x)",
      "Einf y . le(y,m) & le(x,y)",
      "E y . le(y,m) & (Emod 2,3 z . le(z,m) & le(z,y))",
      "A y . le(y,m) & le(x,y) -> (x = y | (E z . le(z,m) & le(x,z) & le(z,y) & !(x = z)))",
      "le(x,x) & le(m,m)",
      "!(E y . le(y,m) & !le(x,y) & !le(y,x))",
      "Emod 0,2 y . le(y,m) & le(y,x) & (Emod 1,2 z . le(z,m) & le(z,y))",
      "A y . le(y,m) -> (E z . le(z,m) & le(y,z))",
  };
  for (const std::string& text : pool) {
    INFO("formula: " << text);
    FormulaPtr f = parse_formula(text);
    Evaluated e = eval(p, f);
    for (int x = 0; x <= B; ++x) {
      std::map<std::string, int> env{{"m", B}, {"x", x}};
      bool expect = brute(*f, env, B);
      bool actual;
      if (e.vars.empty()) {
        actual = e.truth;
      } else {
        std::vector<Word> tuple;
        for (const std::string& v : e.vars) tuple.push_back(unary(env.at(v)));
        actual = e.rel->contains(tuple);
      }
      INFO("x = " << x);
      REQUIRE(actual == expect);
    }
  }
}

TEST_CASE("binary arithmetic") {
  Presentation p = presburger(2);
  Evaluated e = eval(p, parse_formula("plus(x,y,z)"));
  REQUIRE(e.vars == std::vector<std::string>{"x", "y", "z"});
  for (long a : {0L, 1L, 3L, 5L, 8L, 13L, 29L})
    for (long b : {0L, 1L, 2L, 7L, 9L, 31L}) {
      REQUIRE(e.rel->contains({bin(a), bin(b), bin(a + b)}));
      REQUIRE(!e.rel->contains({bin(a), bin(b), bin(a + b + 1)}));
    }
  REQUIRE(decide(p, parse_formula("A x . A y . A z . plus(x,y,z) -> plus(y,x,z)")));
  REQUIRE(decide(p, parse_formula("E z . A x . plus(x,z,x)")));  // zero
  REQUIRE(decide(p, parse_formula("A x . A y . E z . plus(x,y,z)")));
  REQUIRE(decide(p, parse_formula("A x . A y . A z . A w . plus(x,y,z) & plus(x,y,w) -> z = w")));
  // associativity: (a+b)+c = a+(b+c)
  REQUIRE(decide(p, parse_formula(
      "A a . A b . A c . A t . A s . A u . "
      "plus(a,b,t) & plus(t,c,s) & plus(b,c,u) -> plus(a,u,s)")));
}

TEST_CASE("powers of two and divisibility") {
  Presentation p = presburger_div(2);
  Evaluated e = eval(p, parse_formula("divp(x,y)"));
  auto holds = [&](long x, long y) { return e.rel->contains({bin(x), bin(y)}); };
  REQUIRE(holds(1, 5));
  REQUIRE(holds(1, 0));
  REQUIRE(holds(2, 6));
  REQUIRE(holds(2, 0));
  REQUIRE(holds(4, 12));
  REQUIRE(holds(8, 8));
  REQUIRE(!holds(2, 5));
  REQUIRE(!holds(4, 6));
  REQUIRE(!holds(3, 6));   // not a power of two
  REQUIRE(!holds(0, 4));
  REQUIRE(!holds(6, 12));  // divides, but not a power
  // every x has a power of two above it
  REQUIRE(decide(p, parse_formula("A x . E y . E q . divp(y,q) & plus(x,y,q)")));
}

TEST_CASE("builtin relations") {
  Presentation p = pary_tree(2);
  Evaluated ll = eval(p, parse_formula("llex(x,y)"));
  std::vector<Word> ws{{}, {0}, {1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 0, 0}};
  for (size_t i = 0; i < ws.size(); ++i)
    for (size_t j = 0; j < ws.size(); ++j) {
      REQUIRE(ll.rel->contains({ws[i], ws[j]}) == (i <= j));
      REQUIRE(eval(p, parse_formula("lenEq(x,y)")).rel->contains({ws[i], ws[j]}) ==
              (ws[i].size() == ws[j].size()));
    }
  REQUIRE(decide(p, parse_formula("A x . A y . x = y -> llex(x,y)")));
  // eq is definable and matches =
  REQUIRE(decide(p, parse_formula("A x . A y . eq(x,y) -> x = y")));
}

TEST_CASE("prefix order on the binary tree") {
  Presentation p = pary_tree(2);
  REQUIRE(decide(p, parse_formula("A x . pf(x,x)")));
  REQUIRE(decide(p, parse_formula("E r . A x . pf(r,x)")));  // the root
  REQUIRE(decide(p, parse_formula("A x . E y . suc0(x,y)")));
  REQUIRE(decide(p, parse_formula("A x . A y . suc0(x,y) -> pf(x,y) & !(x = y)")));
  REQUIRE(decide(p, parse_formula("A x . A y . A z . suc0(x,y) & suc1(x,z) -> !(y = z)")));
  // prefixes of a word are linearly ordered
  REQUIRE(decide(p, parse_formula(
      "A x . A y . A z . pf(x,z) & pf(y,z) -> pf(x,y) | pf(y,x)")));
  REQUIRE(decide(p, parse_formula("A x . Einf y . pf(x,y)")));
  REQUIRE(!decide(p, parse_formula("E x . Einf y . pf(y,x)")));
}

TEST_CASE("counting quantifier over prefixes") {
  Presentation p = pary_tree(2);
  // a word of length l has l+1 prefixes
  Evaluated odd = eval(p, parse_formula("Emod 1,2 y . pf(y,x)"));
  Evaluated two = eval(p, parse_formula("Emod 0,3 y . pf(y,x)"));
  std::vector<Word> ws{{}, {0}, {1}, {0, 1}, {1, 1}, {0, 0, 0}, {1, 0, 1}, {0, 1, 0, 1}, {1, 1, 1, 1, 1}};
  for (const Word& w : ws) {
    REQUIRE(odd.rel->contains({w}) == (w.size() % 2 == 0));
    REQUIRE(two.rel->contains({w}) == (w.size() % 3 == 2));
  }
}

TEST_CASE("counting fallback enumerates candidates when over budget") {
  // bounded domain 0..6 keeps every candidate set finite
  Alphabet sigma({"0"});
  std::vector<Word> words;
  for (int i = 0; i <= 6; ++i) words.push_back(unary(i));
  Automaton dom = aut_words(sigma, words);
  PaddedAlphabet pa(sigma, 2);
  int s00 = pa.symbol({0, 0}), sp0 = pa.symbol({pa.pad(), 0});
  Automaton lea(pa.alphabet(), 2, {0}, {0, 1}, {{0, s00, 0}, {0, sp0, 1}, {1, sp0, 1}});
  RegularRelation le = intersect(RegularRelation(pa, lea), domain_product(sigma, dom, 2));
  Presentation p(sigma, dom, {{"le", le}});
  FormulaPtr f = parse_formula("Emod 1,2 y . le(y,x) & le(y,z)");
  Evaluated fast = eval(p, f);
  EvalOptions tiny;
  tiny.counting_budget = 1;
  Evaluated slow = eval(p, f, tiny);
  REQUIRE(fast.vars == slow.vars);
  REQUIRE(equivalent(fast.rel->acceptor(), slow.rel->acceptor()));
  for (int x = 0; x <= 6; ++x)
    for (int z = 0; z <= 6; ++z)
      REQUIRE(fast.rel->contains({unary(x), unary(z)}) == (std::min(x, z) % 2 == 0));
}

TEST_CASE("interpretation: dropping the least element leaves an isomorphic order") {
  Presentation p = omega_le();
  Interpretation tau;
  tau.dimension = 1;
  tau.delta_vars = {"x"};
  tau.delta = parse_formula("E y . le(y,x) & !(x = y)");
  tau.relations["le"] = {2, {"a", "b"}, parse_formula("le(a,b)")};
  Presentation q = apply_interpretation(p, tau);
  REQUIRE(decide(q, parse_formula("E z . A x . le(z,x)")));
  REQUIRE(decide(q, parse_formula("A x . E y . le(x,y) & !(x = y)")));
  REQUIRE(!q.domain().accepts(unary(0)));
  REQUIRE(q.domain().accepts(unary(1)));
  // iterate: drop the least element again
  Presentation r = apply_interpretation(q, tau);
  REQUIRE(!r.domain().accepts(unary(1)));
  REQUIRE(r.domain().accepts(unary(2)));
  REQUIRE(decide(r, parse_formula("A x . A y . le(x,y) | le(y,x)")));
}

TEST_CASE("interpretation in dimension two") {
  // pairs (x,y) with x <= y, ordered by the second component
  Presentation p = omega_le();
  Interpretation tau;
  tau.dimension = 2;
  tau.delta_vars = {"x", "y"};
  tau.delta = parse_formula("le(x,y)");
  tau.relations["le"] = {2, {"x1", "y1", "x2", "y2"}, parse_formula("le(y1,y2)")};
  Presentation q = apply_interpretation(p, tau);
  REQUIRE(q.base().size() == 3);  // pairs of unary tracks: 2^2 - 1 symbols
  REQUIRE(decide(q, parse_formula("A a . A b . le(a,b) | le(b,a)")));
  REQUIRE(decide(q, parse_formula("E a . A b . le(a,b)")));
  REQUIRE(decide(q, parse_formula("A a . Einf b . le(a,b)")));
  // not antisymmetric: (0,1) and (1,1) are equivalent under le
  REQUIRE(!decide(q, parse_formula("A a . A b . le(a,b) & le(b,a) -> a = b")));
  PaddedAlphabet pp(p.base(), 2);
  REQUIRE(q.domain().accepts(pp.convolve({unary(2), unary(5)})));
  REQUIRE(!q.domain().accepts(pp.convolve({unary(5), unary(2)})));
}

TEST_CASE("empty interpretation domain is an error") {
  Presentation p = omega_le();
  Interpretation tau;
  tau.dimension = 1;
  tau.delta_vars = {"x"};
  tau.delta = parse_formula("!le(x,x)");
  REQUIRE_THROWS_WITH(apply_interpretation(p, tau), "empty domain");
}

TEST_CASE("equivalence structure builders") {
  Presentation one = one_infinite_class();
  FormulaPtr refl = f_forall("x", f_atom("~", {"x", "x"}));
  FormulaPtr sym = f_forall("x", f_forall("y", f_implies(f_atom("~", {"x", "y"}), f_atom("~", {"y", "x"}))));
  FormulaPtr trans = f_forall("x", f_forall("y", f_forall("z",
      f_implies(f_and(f_atom("~", {"x", "y"}), f_atom("~", {"y", "z"})), f_atom("~", {"x", "z"})))));
  FormulaPtr all_inf = f_forall("x", f_exists_inf("y", f_atom("~", {"x", "y"})));
  // infinitely many classes = infinitely many llex-least representatives
  FormulaPtr inf_classes = f_exists_inf("x", f_forall("y",
      f_implies(f_atom("~", {"x", "y"}), f_atom("llex", {"x", "y"}))));
  for (Presentation* p : {&one}) {
    REQUIRE(decide(*p, refl));
    REQUIRE(decide(*p, sym));
    REQUIRE(decide(*p, trans));
    REQUIRE(decide(*p, all_inf));
  }
  REQUIRE(!decide(one, inf_classes));
  Presentation many = omega_infinite_classes();
  REQUIRE(decide(many, refl));
  REQUIRE(decide(many, sym));
  REQUIRE(decide(many, trans));
  REQUIRE(decide(many, all_inf));
  REQUIRE(decide(many, inf_classes));
  REQUIRE(many.relation("~").contains({{0, 0, 1, 1}, {0, 0, 1}}));
  REQUIRE(!many.relation("~").contains({{0, 0, 1, 1}, {0, 0, 0, 1}}));
}

TEST_CASE("triangular positions in the length-lexicographic order") {
  Presentation p = triangular_example();
  REQUIRE(decide(p, parse_formula("A x . A y . le(x,y) | le(y,x)")));
  REQUIRE(decide(p, parse_formula("E z . A x . le(z,x)")));
  REQUIRE(decide(p, parse_formula("A x . P(x) -> (E y . P(y) & le(x,y) & !(x = y))")));
  // rank of a^k is the k-th triangular number
  Evaluated lt = eval(p, parse_formula("le(y,x) & !(x = y)"));
  std::vector<Word> domain_words = enumerate_upto(p.domain(), 8);
  for (int k = 0; k <= 5; ++k) {
    Word ak(k, 0);
    int below = 0;
    for (const Word& w : domain_words)
      if (lt.rel->contains({ak, w})) ++below;
    REQUIRE(below == k * (k + 1) / 2);
  }
}

TEST_CASE("reach on the ordered naturals") {
  Presentation p = omega_le();
  // y = x + 1
  FormulaPtr step = parse_formula("le(x,y) & !(x = y) & (A z . le(z,y) -> le(z,x) | z = y)");
  ReachSet r = reach(p, step, {"x"}, "y", {unary(0)}, 5);
  REQUIRE(r.steps == 5);
  REQUIRE(r.sizes.size() == 6);
  for (int i = 0; i <= 5; ++i) {
    REQUIRE(r.sizes[i].has_value());
    REQUIRE(*r.sizes[i] == i + 1);
  }
  for (int v = 0; v <= 8; ++v) REQUIRE(r.acceptor.accepts(unary(v)) == (v <= 5));
  // empty seed set stays empty
  ReachSet e = reach(p, step, {"x"}, "y", {}, 3);
  for (const auto& s : e.sizes) REQUIRE(*s == 0);
}

TEST_CASE("reach on the grid") {
  Presentation p = grid_example();
  FormulaPtr step = parse_formula("E0(x,y) | E0(y,x) | E1(x,y) | E1(y,x)");
  ReachSet r = reach(p, step, {"x"}, "y", {Word{}}, 2);
  REQUIRE(*r.sizes[0] == 1);
  REQUIRE(*r.sizes[1] == 5);
  REQUIRE(*r.sizes[2] == 13);
  // "ba" is not a grid code
  REQUIRE_THROWS_AS(reach(p, step, {"x"}, "y", {Word{2, 0}}, 1), error);
}

TEST_CASE("grid edges behave like the integer lattice") {
  Presentation p = grid_example();
  auto code = [&](int i, int k) {
    Word w;
    for (int t = 0; t < (i >= 0 ? i : -i); ++t) w.push_back(i >= 0 ? 0 : 1);
    for (int t = 0; t < (k >= 0 ? k : -k); ++t) w.push_back(k >= 0 ? 2 : 3);
    return w;
  };
  Evaluated e0 = eval(p, parse_formula("E0(x,y)"));
  Evaluated e1 = eval(p, parse_formula("E1(x,y)"));
  for (int i = -3; i <= 3; ++i)
    for (int k = -3; k <= 3; ++k)
      for (int i2 = -3; i2 <= 3; ++i2)
        for (int k2 = -3; k2 <= 3; ++k2) {
          bool h = e0.rel->contains({code(i, k), code(i2, k2)});
          bool v = e1.rel->contains({code(i, k), code(i2, k2)});
          REQUIRE(h == (i2 == i + 1 && k2 == k));
          REQUIRE(v == (k2 == k + 1 && i2 == i));
        }
  // degree: every vertex has exactly four neighbours
  REQUIRE(decide(p, parse_formula(
      "A x . Emod 4,5 y . E0(x,y) | E0(y,x) | E1(x,y) | E1(y,x)")));
}

TEST_CASE("presentation validation") {
  Alphabet sigma({"0"});
  Automaton dom(sigma, 1, {0}, {0}, {{0, 0, 0}});
  Automaton none = aut_none(sigma);
  REQUIRE_THROWS_AS(Presentation(sigma, none, {}), error);
  // relation sticking out of the domain
  Alphabet two({"0", "1"});
  Automaton dom0(two, 1, {0}, {0}, {{0, 0, 0}});  // only 0*
  PaddedAlphabet pa(two, 1);
  Automaton ones(pa.alphabet(), 1, {0}, {0}, {{0, 1, 0}});
  REQUIRE_THROWS_AS(Presentation(two, dom0, {{"P", RegularRelation(pa, ones)}}), error);
}
