#include <catch2/catch_amalgamated.hpp>

#include "astra/semilinear.hpp"

using namespace astra;

namespace {

std::vector<mpz_class> vec(std::vector<long> v) {
  return std::vector<mpz_class>(v.begin(), v.end());
}

std::vector<std::vector<mpz_class>> cols(std::vector<std::vector<long>> cs) {
  std::vector<std::vector<mpz_class>> out;
  for (auto& c : cs) out.push_back(vec(c));
  return out;
}

// LSD-first base-2 numeral
Word bin(long n) {
  Word w;
  for (; n > 0; n >>= 1) w.push_back(static_cast<int>(n & 1));
  return w;
}

// even c in the closed interval [a, b], as two disjoint simple pieces split
// by the parity of a; coordinates are (a, b, c)
SemilinearSet even_interval() {
  auto periods = cols({{2, 2, 2}, {0, 2, 2}, {0, 1, 0}});
  LinearSet evenA(AffineMap(vec({0, 0, 0}), periods));
  LinearSet oddA(AffineMap(vec({1, 2, 2}), periods));
  return SemilinearSet(3, {evenA, oddA}, true);
}

}  // namespace

TEST_CASE("affine map evaluation and validation") {
  AffineMap m(vec({1, 0}), cols({{1, 0}, {1, 1}}));
  REQUIRE(m.dim_in() == 2);
  REQUIRE(m.dim_out() == 2);
  REQUIRE(m.apply(vec({2, 3})) == vec({6, 3}));
  REQUIRE_THROWS_AS(AffineMap(vec({-1}), {}), error);
  REQUIRE_THROWS_AS(AffineMap(vec({0}), cols({{-2}})), error);
  REQUIRE_THROWS_AS(AffineMap(vec({0}), cols({{1, 1}})), error);
  REQUIRE_THROWS_AS(m.apply(vec({1})), error);
}

TEST_CASE("linear set membership") {
  LinearSet l(AffineMap(vec({0, 0}), cols({{1, 0}, {1, 1}})));
  SemilinearSet s(2, {l}, true);
  REQUIRE(member(s, vec({3, 2})));
  REQUIRE_FALSE(member(s, vec({1, 2})));
  // brute-force agreement on a box: (x, y) is reachable iff y <= x
  for (long x = 0; x <= 8; ++x)
    for (long y = 0; y <= 8; ++y) REQUIRE(member(s, vec({x, y})) == (y <= x));
  REQUIRE_THROWS_AS(member(s, vec({1})), error);
}

TEST_CASE("membership with dependent periods and zero columns") {
  // {(0,0)} + y0*(1,2) + y1*(2,4): the even multiples of (1,2) plus any
  // (1,2)-multiple, i.e. all k*(1,2)
  SemilinearSet s(2, {LinearSet(AffineMap(vec({0, 0}), cols({{1, 2}, {2, 4}})))}, false);
  for (long k = 0; k <= 10; ++k) REQUIRE(member(s, vec({k, 2 * k})));
  REQUIRE_FALSE(member(s, vec({3, 5})));
  // an all-zero period is allowed for plain membership
  SemilinearSet z(1, {LinearSet(AffineMap(vec({4}), cols({{0}})))}, false);
  REQUIRE(member(z, vec({4})));
  REQUIRE_FALSE(member(z, vec({5})));
}

TEST_CASE("simplicity is exact rational rank") {
  REQUIRE(is_simple(LinearSet(AffineMap(vec({0, 0}), cols({{1, 0}, {1, 1}})))));
  REQUIRE_FALSE(is_simple(LinearSet(AffineMap(vec({0, 0}), cols({{1, 2}, {2, 4}})))));
  REQUIRE_FALSE(is_simple(LinearSet(AffineMap(vec({0}), cols({{1}, {2}})))));
  // a point is simple
  REQUIRE(is_simple(LinearSet(AffineMap(vec({5, 7}), {}))));
  // three independent columns in dimension 3
  REQUIRE(is_simple(LinearSet(AffineMap(vec({0, 0, 0}), cols({{2, 2, 2}, {0, 2, 2}, {0, 1, 0}})))));
}

TEST_CASE("vector partition function values") {
  VectorPartitionFn psi({vec({1, 2})});
  REQUIRE(vpf_eval(psi, vec({4})) == 3);  // (4,0) (2,1) (0,2)
  REQUIRE(vpf_eval(psi, vec({5})) == 3);
  REQUIRE(vpf_eval(psi, vec({-1})) == 0);

  VectorPartitionFn id({vec({1, 0}), vec({0, 1})});
  for (long x = 0; x <= 30; ++x)
    for (long y = 0; y <= 30; y += 5) REQUIRE(vpf_eval(id, vec({x, y})) == 1);

  REQUIRE_THROWS_AS(VectorPartitionFn({vec({1, 0}), vec({0, 0})}), error);
  REQUIRE_THROWS_AS(VectorPartitionFn({vec({1}), vec({1, 1})}), error);
  REQUIRE_THROWS_AS(vpf_eval(psi, vec({1, 2})), error);

  // empty column list: indicator of the zero vector
  VectorPartitionFn point(std::vector<std::vector<mpz_class>>{{}, {}});
  REQUIRE(vpf_eval(point, vec({0, 0})) == 1);
  REQUIRE(vpf_eval(point, vec({0, 1})) == 0);
}

TEST_CASE("generalized vpf applies signed shifts") {
  GeneralizedVpf g(1, {{VectorPartitionFn({vec({1})}), vec({-5})}});
  REQUIRE(gvpf_eval(g, vec({3})) == 0);
  REQUIRE(gvpf_eval(g, vec({5})) == 1);
  REQUIRE(gvpf_eval(g, vec({7})) == 1);
  GeneralizedVpf empty(2, {});
  REQUIRE(gvpf_eval(empty, vec({4, 4})) == 0);
  REQUIRE_THROWS_AS(gvpf_eval(g, vec({1, 2})), error);
}

TEST_CASE("series coefficients of the even numbers") {
  SemilinearSet s(1, {LinearSet(AffineMap(vec({0}), cols({{2}})))}, true);
  auto coeffs = series_coeffs(s, 9);
  REQUIRE(coeffs.size() == 10);
  for (long x = 0; x <= 9; ++x) REQUIRE(coeffs.at({x}) == (x % 2 == 0 ? 1 : 0));
}

TEST_CASE("series coefficients match membership on a 2d box") {
  auto periods = cols({{1, 0}, {1, 1}});
  SemilinearSet s(2, {LinearSet(AffineMap(vec({0, 0}), periods))}, true);
  auto coeffs = series_coeffs(s, 8);
  for (long x = 0; x <= 8; ++x)
    for (long y = 0; y <= 8; ++y)
      REQUIRE((coeffs.at({x, y}) == 1) == member(s, vec({x, y})));
}

TEST_CASE("series validation rejects bad attributes") {
  SemilinearSet unmarked(1, {LinearSet(AffineMap(vec({0}), cols({{2}})))}, false);
  REQUIRE_THROWS_WITH(series_coeffs(unmarked, 4),
                      "semilinear: validation failure: set not marked disjointSimple");
  SemilinearSet notsimple(1, {LinearSet(AffineMap(vec({0}), cols({{1}, {2}})))}, true);
  REQUIRE_THROWS_WITH(series_coeffs(notsimple, 4),
                      "semilinear: validation failure: piece is not simple");
  SemilinearSet overlap(1,
                        {LinearSet(AffineMap(vec({0}), cols({{2}}))),
                         LinearSet(AffineMap(vec({0}), cols({{3}})))},
                        true);
  REQUIRE_THROWS_WITH(series_coeffs(overlap, 4),
                      "semilinear: validation failure: pieces intersect");
}

TEST_CASE("validation finds overlaps beyond the multiplier probe") {
  // 14y = 1 + 15z first holds at 196 = 14*14 = 1 + 15*13, both multipliers
  // above the bounded probe, so only the automata comparison can see it
  SemilinearSet s(1,
                  {LinearSet(AffineMap(vec({0}), cols({{14}}))),
                   LinearSet(AffineMap(vec({1}), cols({{15}})))},
                  true);
  REQUIRE_THROWS_WITH(validate_disjoint_simple(s),
                      "semilinear: validation failure: pieces intersect");
}

TEST_CASE("out-degree of the below-diagonal relation") {
  // pairs (a, b) with b <= a: g(a) = a + 1
  SemilinearSet s(2, {LinearSet(AffineMap(vec({0, 0}), cols({{1, 1}, {1, 0}})))}, true);
  GeneralizedVpf g = outdegree_gvpf(s, 1);
  for (long a = 0; a <= 20; ++a) REQUIRE(gvpf_eval(g, vec({a})) == a + 1);
}

TEST_CASE("out-degree of the even-interval relation") {
  SemilinearSet s = even_interval();
  // sanity of the decomposition itself
  for (long a = 0; a <= 12; ++a)
    for (long b = 0; b <= 12; ++b)
      for (long c = 0; c <= 12; ++c)
        REQUIRE(member(s, vec({a, b, c})) == (a <= c && c <= b && c % 2 == 0));
  GeneralizedVpf g = outdegree_gvpf(s, 2);
  REQUIRE(gvpf_eval(g, vec({2, 6})) == 3);
  REQUIRE(gvpf_eval(g, vec({3, 7})) == 2);
  REQUIRE(gvpf_eval(g, vec({5, 2})) == 0);
  for (long a = 0; a <= 20; ++a)
    for (long b = 0; b <= 20; ++b) {
      long expect = 0;
      for (long c = a; c <= b; ++c)
        if (c % 2 == 0) ++expect;
      REQUIRE(gvpf_eval(g, vec({a, b})) == expect);
    }
}

TEST_CASE("out-degree rejects padded-growth periods") {
  SemilinearSet s(2, {LinearSet(AffineMap(vec({0, 0}), cols({{0, 1}})))}, true);
  REQUIRE_THROWS_WITH(outdegree_gvpf(s, 1), "infinite out-degree");
  SemilinearSet ok(2, {LinearSet(AffineMap(vec({0, 0}), cols({{1, 0}})))}, true);
  REQUIRE_NOTHROW(outdegree_gvpf(ok, 1));
  REQUIRE_THROWS_AS(outdegree_gvpf(ok, 2), error);
  REQUIRE_THROWS_AS(outdegree_gvpf(ok, 0), error);
}

TEST_CASE("out-degree of a point piece") {
  SemilinearSet s(2, {LinearSet(AffineMap(vec({3, 4}), {}))}, true);
  GeneralizedVpf g = outdegree_gvpf(s, 1);
  for (long a = 0; a <= 8; ++a) REQUIRE(gvpf_eval(g, vec({a})) == (a == 3 ? 1 : 0));
}

TEST_CASE("formula translation agrees with membership") {
  Presentation p = presburger(2);
  SemilinearSet evens(1, {LinearSet(AffineMap(vec({0}), cols({{2}})))}, true);
  RegularRelation r = arrange(p, eval(p, to_formula(evens)), {"x0"});
  for (long x = 0; x <= 30; ++x) REQUIRE(r.contains({bin(x)}) == member(evens, vec({x})));

  SemilinearSet below(2, {LinearSet(AffineMap(vec({1, 0}), cols({{1, 0}, {1, 1}})))}, true);
  RegularRelation r2 = arrange(p, eval(p, to_formula(below)), {"x0", "x1"});
  for (long x = 0; x <= 12; ++x)
    for (long y = 0; y <= 12; ++y)
      REQUIRE(r2.contains({bin(x), bin(y)}) == member(below, vec({x, y})));
}

TEST_CASE("formula translation of the empty set") {
  Presentation p = presburger(2);
  SemilinearSet s(2, {}, true);
  Evaluated e = eval(p, to_formula(s));
  REQUIRE(e.vars == std::vector<std::string>{"x0", "x1"});
  REQUIRE(is_empty(e.rel->acceptor()));
}

TEST_CASE("equal sets give equivalent formula automata") {
  // evens as one piece of period 2 versus two interleaved pieces of period 4
  Presentation p = presburger(2);
  SemilinearSet a(1, {LinearSet(AffineMap(vec({0}), cols({{2}})))}, true);
  SemilinearSet b(1,
                  {LinearSet(AffineMap(vec({0}), cols({{4}}))),
                   LinearSet(AffineMap(vec({2}), cols({{4}})))},
                  true);
  RegularRelation ra = arrange(p, eval(p, to_formula(a)), {"x0"});
  RegularRelation rb = arrange(p, eval(p, to_formula(b)), {"x0"});
  REQUIRE(equivalent(ra.acceptor(), rb.acceptor()));
}

TEST_CASE("even-interval formula round trip") {
  Presentation p = presburger(2);
  SemilinearSet s = even_interval();
  RegularRelation r = arrange(p, eval(p, to_formula(s)), {"x0", "x1", "x2"});
  for (long a = 0; a <= 9; ++a)
    for (long b = 0; b <= 9; ++b)
      for (long c = 0; c <= 9; ++c)
        REQUIRE(r.contains({bin(a), bin(b), bin(c)}) == member(s, vec({a, b, c})));
}
