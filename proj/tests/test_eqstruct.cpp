#include <catch2/catch_amalgamated.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "astra/eqstruct.hpp"

using namespace astra;

namespace {

Polynomial from_coeffs(int arity, const std::vector<std::pair<std::vector<int>, mpq_class>>& cs) {
  Polynomial p(arity);
  for (const auto& [e, c] : cs) p.coeffs[e] = c;
  return p;
}

long count_opt(const EqDescriptor& d, long k) {
  std::optional<mpz_class> c = class_count(d, k);
  REQUIRE(c.has_value());
  return c->get_si();
}

bool is_omega(const EqDescriptor& d, long k) { return !class_count(d, k).has_value(); }

}  // namespace

TEST_CASE("descriptor validation") {
  Polynomial neg = from_coeffs(1, {{{1}, -1}});
  CHECK_THROWS_AS(EqDescriptor({neg}, 0), error);
  Polynomial half = from_coeffs(1, {{{1}, mpq_class(1, 2)}});
  CHECK_THROWS_AS(EqDescriptor({half}, 0), error);
  CHECK_THROWS_AS(EqDescriptor({}, -1), error);
  EqDescriptor ok({from_coeffs(1, {{{1}, 1}, {{0}, 1}})}, std::nullopt);
  CHECK(!ok.infinite_classes);
}

TEST_CASE("class counts of descriptors") {
  Polynomial xp1 = from_coeffs(1, {{{1}, 1}, {{0}, 1}});  // x+1
  EqDescriptor d1({xp1}, 0);
  for (long k = 1; k <= 10; ++k) CHECK(count_opt(d1, k) == 1);
  CHECK_THROWS_AS(class_count(d1, 0), error);

  // a constant polynomial of positive arity repeats its class forever
  EqDescriptor d2({from_coeffs(1, {{{0}, 3}})}, 0);
  CHECK(is_omega(d2, 3));
  CHECK(count_opt(d2, 2) == 0);

  // an arity-0 constant contributes exactly one class
  EqDescriptor d3({from_coeffs(0, {{{}, 3}})}, 0);
  CHECK(count_opt(d3, 3) == 1);
  CHECK(count_opt(d3, 1) == 0);

  // xy: classes of size 6 are (1,6),(2,3),(3,2),(6,1)
  EqDescriptor d4({from_coeffs(2, {{{1, 1}, 1}})}, 0);
  CHECK(count_opt(d4, 6) == 4);
  CHECK(count_opt(d4, 4) == 3);
  CHECK(count_opt(d4, 7) == 2);
  CHECK(count_opt(d4, 1) == 1);

  // zero-value points contribute no class
  EqDescriptor d5({from_coeffs(1, {{{1}, 2}})}, 0);  // 2x
  CHECK(count_opt(d5, 2) == 1);
  CHECK(count_opt(d5, 1) == 0);

  EqDescriptor empty({}, 0);
  for (long k = 1; k <= 4; ++k) CHECK(count_opt(empty, k) == 0);

  // multivariate constant: the hit repeats along both free directions
  EqDescriptor d6({from_coeffs(2, {{{0, 0}, 1}})}, 0);
  CHECK(is_omega(d6, 1));
}

TEST_CASE("classify a one-dimensional family of growing fibers") {
  // f(x0, x1) = x0 restricted to x1 <= x0: the fiber over b has b+1 points
  FiberSpec spec{2, 1, parse_omega("y0 = x0 & x1 <= x0")};
  EqDescriptor d = classify(spec);
  CHECK(d.infinite_classes == 0);
  for (const Polynomial& p : d.polys) CHECK(is_natural(p));
  for (long k = 1; k <= 14; ++k) CHECK(count_opt(d, k) == 1);

  // oracle: enumerate the kernel directly on a box
  std::map<long, long> sizes;
  for (long b = 0; b <= 12; ++b) {
    long n = 0;
    std::map<std::string, long> env{{"y0", b}};
    for (long x0 = 0; x0 <= 13; ++x0)
      for (long x1 = 0; x1 <= 13; ++x1) {
        env["x0"] = x0;
        env["x1"] = x1;
        if (eval_omega(spec.graph, env, 0)) ++n;
      }
    sizes[n]++;
  }
  for (const auto& [size, cnt] : sizes) CHECK(count_opt(d, size) == cnt);
}

TEST_CASE("classify the identity: omega many singletons") {
  FiberSpec spec{1, 1, parse_omega("y0 = x0")};
  EqDescriptor d = classify(spec);
  CHECK(is_omega(d, 1));
  CHECK(count_opt(d, 2) == 0);
  CHECK(count_opt(d, 5) == 0);
}

TEST_CASE("classify a partial function") {
  // defined only for x0 >= 3; still omega many singleton fibers
  FiberSpec spec{1, 1, parse_omega("y0 = x0 & x0 >= 3")};
  EqDescriptor d = classify(spec);
  CHECK(is_omega(d, 1));
  CHECK(count_opt(d, 2) == 0);
}

TEST_CASE("classify triangular fibers with a rational count") {
  // fiber over b: {(x0,x1,x2): x0 <= x1 <= x2 = b}, size (b+1)(b+2)/2
  FiberSpec spec{3, 1, parse_omega("x0 <= x1 & x1 <= x2 & y0 = x2")};
  EqDescriptor d = classify(spec);
  std::map<long, long> expect;
  for (long b = 0; b <= 14; ++b) expect[(b + 1) * (b + 2) / 2]++;
  for (long k = 1; k <= 120; ++k) CHECK(count_opt(d, k) == (expect.count(k) ? expect[k] : 0));
  for (const Polynomial& p : d.polys) CHECK(is_natural(p));
}

TEST_CASE("classify rejects bad graphs") {
  CHECK_THROWS_WITH(classify(FiberSpec{1, 1, parse_omega("y0 >= x0")}), "non-functional graph");
  CHECK_THROWS_WITH(classify(FiberSpec{1, 1, parse_omega("y0 = x0 | y0 = x0 + 1")}),
                    "non-functional graph");
  CHECK_THROWS_WITH(classify(FiberSpec{2, 1, parse_omega("y0 = x1")}), "infinite fiber");
  CHECK_THROWS_WITH(classify(FiberSpec{1, 1, parse_omega("y0 = z0")}),
                    "classify: unexpected variable 'z0'");
  CHECK_THROWS_AS(classify(FiberSpec{0, 1, o_true()}), error);
}

TEST_CASE("naturalize splits rationals into natural pieces") {
  // (x^2+x)/2: residues give 2v^2+v and 2v^2+3v+1
  Polynomial tri = from_coeffs(1, {{{2}, mpq_class(1, 2)}, {{1}, mpq_class(1, 2)}});
  std::vector<Polynomial> parts = detail::naturalize(tri);
  REQUIRE(parts.size() == 2);
  CHECK(p_equal(parts[0], from_coeffs(1, {{{2}, 2}, {{1}, 1}})));
  CHECK(p_equal(parts[1], from_coeffs(1, {{{2}, 2}, {{1}, 3}, {{0}, 1}})));

  // multiset of values is preserved on an initial segment
  std::map<long, long> direct, split;
  for (long x = 0; x <= 20; ++x) direct[(x * x + x) / 2]++;
  for (const Polynomial& q : parts)
    for (long v = 0; v <= 9; ++v) {
      mpq_class val = eval_poly(q, {v});
      if (val <= 210) split[val.get_num().get_si()]++;
    }
  for (const auto& [value, cnt] : direct)
    if (value <= 105) CHECK(split[value] == cnt);

  CHECK(detail::naturalize(Polynomial(2)).empty());

  // already-natural polynomials pass through
  Polynomial nat = from_coeffs(1, {{{1}, 2}, {{0}, 5}});
  std::vector<Polynomial> same = detail::naturalize(nat);
  REQUIRE(same.size() == 1);
  CHECK(p_equal(same[0], nat));
}

TEST_CASE("naturalize refuses polynomials with negative values") {
  // x - 2 takes negative values, so no region decomposition is natural
  Polynomial shifted = from_coeffs(1, {{{1}, 1}, {{0}, -2}});
  CHECK_THROWS_WITH(detail::naturalize(shifted), "positivity step failed");
}

TEST_CASE("gvpf chamber data turns into a descriptor") {
  // g(z) = #{(y0,y1): y0 + 2 y1 = z} = floor(z/2) + 1
  VectorPartitionFn psi({{mpz_class(1), mpz_class(2)}});
  GeneralizedVpf g(1, {GvpfTerm{psi, {mpz_class(0)}}});
  AffineMap evens({mpz_class(0)}, {{mpz_class(2)}});
  AffineMap odds({mpz_class(1)}, {{mpz_class(2)}});
  SemilinearSet chambers(1, {LinearSet(evens), LinearSet(odds)}, true);
  Polynomial on_even = from_coeffs(1, {{{1}, mpq_class(1, 2)}, {{0}, 1}});
  Polynomial on_odd = from_coeffs(1, {{{1}, mpq_class(1, 2)}, {{0}, mpq_class(1, 2)}});
  EqDescriptor d = gvpf_to_descriptor(g, chambers, {on_even, on_odd});
  REQUIRE(d.polys.size() == 2);
  Polynomial tp1 = from_coeffs(1, {{{1}, 1}, {{0}, 1}});
  CHECK(p_equal(d.polys[0], tp1));
  CHECK(p_equal(d.polys[1], tp1));
  for (long k = 1; k <= 8; ++k) CHECK(count_opt(d, k) == 2);

  // wrong polynomial on a chamber
  CHECK_THROWS_WITH(gvpf_to_descriptor(g, chambers, {on_odd, on_even}),
                    "gvpf descriptor: validation failure");
  // overlapping chambers
  AffineMap all({mpz_class(0)}, {{mpz_class(1)}});
  SemilinearSet overlap(1, {LinearSet(all), LinearSet(all)}, false);
  Polynomial val = from_coeffs(1, {{{1}, mpq_class(1, 2)}, {{0}, 1}});
  CHECK_THROWS_WITH(gvpf_to_descriptor(g, overlap, {val, val}),
                    "gvpf descriptor: validation failure");
  // a gap in the cover
  SemilinearSet gap(1, {LinearSet(evens)}, true);
  CHECK_THROWS_WITH(gvpf_to_descriptor(g, gap, {on_even}), "gvpf descriptor: validation failure");
  // non-simple chamber
  AffineMap redundant({mpz_class(0)}, {{mpz_class(1)}, {mpz_class(1)}});
  SemilinearSet ns(1, {LinearSet(redundant)}, false);
  Polynomial val2 = from_coeffs(2, {{{1, 0}, mpq_class(1, 2)}, {{0, 0}, 1}});
  CHECK_THROWS_AS(gvpf_to_descriptor(g, ns, {val2}), error);
  // arity mismatch
  CHECK_THROWS_AS(gvpf_to_descriptor(g, chambers, {on_even}), error);
}

TEST_CASE("constant gvpf gives omega many equal classes") {
  VectorPartitionFn id1({{mpz_class(1)}});
  GeneralizedVpf g3(1, {GvpfTerm{id1, {mpz_class(0)}}, GvpfTerm{id1, {mpz_class(0)}},
                        GvpfTerm{id1, {mpz_class(0)}}});
  AffineMap all({mpz_class(0)}, {{mpz_class(1)}});
  SemilinearSet chambers(1, {LinearSet(all)}, true);
  EqDescriptor d = gvpf_to_descriptor(g3, chambers, {from_coeffs(1, {{{0}, 3}})});
  CHECK(is_omega(d, 3));
  CHECK(count_opt(d, 2) == 0);
}

TEST_CASE("synthesized structures match their descriptors") {
  Polynomial xp1 = from_coeffs(1, {{{1}, 1}, {{0}, 1}});
  Presentation e = build_Ep(xp1);
  ClassMultiset m = empirical_multiset(e, 12);
  CHECK(m.infinite_classes == 0);
  CHECK(!m.truncated);
  std::map<long, long> want;
  for (long x = 0; x <= 12; ++x) want[x + 1] = 1;
  CHECK(m.counts == want);
  CHECK(check(e, EqDescriptor({xp1}, 0), 12).pass);
  CheckReport bad = check(e, EqDescriptor({from_coeffs(1, {{{1}, 1}, {{0}, 2}})}, 0), 12);
  CHECK(!bad.pass);
  CHECK(bad.detail == "classes of size 1: observed 1, descriptor allows 0");
}

TEST_CASE("synthesis: odd sizes via 2x+1") {
  Polynomial p = from_coeffs(1, {{{1}, 2}, {{0}, 1}});
  Presentation e = build_Ep(p);
  ClassMultiset m = empirical_multiset(e, 10);
  CHECK(!m.truncated);
  std::map<long, long> want;
  for (long x = 0; x <= 10; ++x) want[2 * x + 1] = 1;
  CHECK(m.counts == want);
  CHECK(check(e, EqDescriptor({p}, 0), 10).pass);
}

TEST_CASE("synthesis: squares, with no class at zero") {
  Polynomial p = from_coeffs(1, {{{2}, 1}});
  Presentation e = build_Ep(p);
  ClassMultiset m = empirical_multiset(e, 9);
  CHECK(!m.truncated);
  std::map<long, long> want;
  for (long x = 1; x <= 9; ++x) want[x * x] = 1;
  CHECK(m.counts == want);
  CHECK(check(e, EqDescriptor({p}, 0), 9).pass);
}

TEST_CASE("synthesis: products over two parameters") {
  Polynomial p = from_coeffs(2, {{{1, 1}, 1}});
  Presentation e = build_Ep(p);
  ClassMultiset m = empirical_multiset(e, 8);
  CHECK(!m.truncated);
  CHECK(m.infinite_classes == 0);
  std::map<long, long> want;
  for (long x = 1; x <= 8; ++x)
    for (long y = 1; y <= 8; ++y)
      if (std::max(x, y) <= 8) want[x * y]++;
  CHECK(m.counts == want);
  CHECK(check(e, EqDescriptor({p}, 0), 8).pass);
}

TEST_CASE("synthesis: a single finite class") {
  Polynomial p = from_coeffs(0, {{{}, 2}});
  Presentation e = build_Ep(p);
  ClassMultiset m = empirical_multiset(e, 8);
  CHECK(!m.truncated);
  CHECK(m.counts == std::map<long, long>{{2, 1}});
  CHECK(check(e, EqDescriptor({p}, 0), 8).pass);

  Presentation e1 = build_Ep(from_coeffs(0, {{{}, 1}}));
  ClassMultiset m1 = empirical_multiset(e1, 6);
  CHECK(m1.counts == std::map<long, long>{{1, 1}});
}

TEST_CASE("synthesis: constant polynomial of positive arity") {
  Polynomial p = from_coeffs(1, {{{0}, 1}});
  Presentation e = build_Ep(p);
  ClassMultiset m = empirical_multiset(e, 7);
  CHECK(!m.truncated);
  CHECK(m.infinite_classes == 0);
  REQUIRE(m.counts.count(1));
  CHECK(m.counts.at(1) == 8);  // one singleton class per x in 0..7
  CHECK(check(e, EqDescriptor({p}, std::nullopt), 7).pass);
}

TEST_CASE("synthesis: rational count via thinning") {
  // (x^2+x)/2 scales to x^2+x and is thinned 2-fold
  Polynomial p = from_coeffs(1, {{{2}, mpq_class(1, 2)}, {{1}, mpq_class(1, 2)}});
  Presentation e = build_Ep(p);
  ClassMultiset m = empirical_multiset(e, 10);
  CHECK(!m.truncated);
  std::map<long, long> want;
  for (long x = 1; x <= 10; ++x) want[(x * x + x) / 2] = 1;
  CHECK(m.counts == want);
  CHECK(check(e, EqDescriptor(detail::naturalize(p), 0), 10).pass);
}

TEST_CASE("synthesis rejects unusable polynomials") {
  CHECK_THROWS_WITH(build_Ep(Polynomial(1)), "structure synthesis: zero polynomial");
  CHECK_THROWS_WITH(build_Ep(from_coeffs(1, {{{1}, 1}, {{0}, -1}})),
                    "structure synthesis: polynomial has negative coefficients");
  CHECK_THROWS_WITH(build_Ep(from_coeffs(1, {{{1}, mpq_class(1, 2)}})),
                    "structure synthesis: polynomial is not integer-valued");
  CHECK_THROWS_WITH(build_Ep(from_coeffs(1, {{{1}, 65}})),
                    "structure synthesis: coefficient too large");
}

TEST_CASE("additive synthesis realizes a vector partition function") {
  VectorPartitionFn psi({{mpz_class(1), mpz_class(2)}});
  GeneralizedVpf g(1, {GvpfTerm{psi, {mpz_class(0)}}});
  Presentation e = apply_interpretation(presburger(2), build_Eg_presburger(g));
  ClassMultiset m = empirical_multiset(e, 6);
  CHECK(!m.truncated);
  CHECK(m.infinite_classes == 0);
  std::map<long, long> want;
  for (long z = 0; z < 64; ++z) want[z / 2 + 1]++;
  CHECK(m.counts == want);

  // the same function through its chamber descriptor
  AffineMap evens({mpz_class(0)}, {{mpz_class(2)}});
  AffineMap odds({mpz_class(1)}, {{mpz_class(2)}});
  SemilinearSet chambers(1, {LinearSet(evens), LinearSet(odds)}, true);
  Polynomial on_even = from_coeffs(1, {{{1}, mpq_class(1, 2)}, {{0}, 1}});
  Polynomial on_odd = from_coeffs(1, {{{1}, mpq_class(1, 2)}, {{0}, mpq_class(1, 2)}});
  CHECK(check(e, gvpf_to_descriptor(g, chambers, {on_even, on_odd}), 6).pass);
}

TEST_CASE("additive synthesis handles shifts in both directions") {
  VectorPartitionFn id1({{mpz_class(1)}});
  // g(x) = [x >= 2]: one singleton class per x >= 2
  GeneralizedVpf gneg(1, {GvpfTerm{id1, {mpz_class(-2)}}});
  for (long x = 0; x <= 4; ++x) CHECK(gvpf_eval(gneg, {x}) == (x >= 2 ? 1 : 0));
  Presentation eneg = apply_interpretation(presburger(2), build_Eg_presburger(gneg));
  ClassMultiset mneg = empirical_multiset(eneg, 5);
  CHECK(!mneg.truncated);
  REQUIRE(mneg.counts.count(1));
  CHECK(mneg.counts.at(1) == 30);  // x in 2..31

  // g(x) = 1 for all x, via a positive shift
  GeneralizedVpf gpos(1, {GvpfTerm{id1, {mpz_class(3)}}});
  for (long x = 0; x <= 4; ++x) CHECK(gvpf_eval(gpos, {x}) == 1);
  Presentation epos = apply_interpretation(presburger(2), build_Eg_presburger(gpos));
  ClassMultiset mpos = empirical_multiset(epos, 5);
  CHECK(!mpos.truncated);
  REQUIRE(mpos.counts.count(1));
  CHECK(mpos.counts.at(1) == 29);  // x in 0..28: for larger x the witness x+3 needs 6 digits
}

TEST_CASE("additive synthesis mixes terms of different input arity") {
  // g(z) = [z even] + [z == 0]: a one-variable term next to a zero-variable one
  VectorPartitionFn twice({{mpz_class(2)}});
  VectorPartitionFn point({std::vector<mpz_class>{}});
  GeneralizedVpf g(1, {GvpfTerm{twice, {mpz_class(0)}}, GvpfTerm{point, {mpz_class(0)}}});
  CHECK(gvpf_eval(g, {0}) == 2);
  CHECK(gvpf_eval(g, {4}) == 1);
  CHECK(gvpf_eval(g, {5}) == 0);
  Presentation e = apply_interpretation(presburger(2), build_Eg_presburger(g));
  // the term index adds one digit to the shortest members, so certification
  // lags the bound by one digit
  ClassMultiset m = empirical_multiset(e, 6);
  CHECK(m.truncated);
  std::map<long, long> want;
  for (long z = 0; z < 32; ++z)
    if (gvpf_eval(g, {z}) > 0) want[gvpf_eval(g, {z}).get_si()]++;
  CHECK(m.counts == want);
}

TEST_CASE("additive synthesis of the empty function has empty domain") {
  GeneralizedVpf g0(1, {});
  CHECK_THROWS_WITH(apply_interpretation(presburger(2), build_Eg_presburger(g0)), "empty domain");
}

TEST_CASE("empirical multiset on the stock structures") {
  ClassMultiset one = empirical_multiset(one_infinite_class(), 6);
  CHECK(one.infinite_classes == 1);
  CHECK(one.counts.empty());

  ClassMultiset many = empirical_multiset(omega_infinite_classes(), 6);
  CHECK(many.infinite_classes == 7);  // one class per count of leading zeros
  CHECK(many.counts.empty());

  CHECK(check(one_infinite_class(), EqDescriptor({}, 1), 6).pass);
  CHECK(check(one_infinite_class(), EqDescriptor({}, std::nullopt), 6).pass);
  CHECK(!check(one_infinite_class(), EqDescriptor({}, 0), 6).pass);
  CHECK(!check(omega_infinite_classes(), EqDescriptor({}, 3), 6).pass);
}

TEST_CASE("empirical multiset rejects non-equivalences") {
  Alphabet sigma({"0"});
  Automaton dom(sigma, 1, {0}, {0}, {{0, 0, 0}});
  PaddedAlphabet pa(sigma, 2);

  // strict inequality: not reflexive
  Presentation lt(sigma, dom,
                  {{"~", arrange(omega_le(), eval(omega_le(), parse_formula("le(x, y) & !(x = y)")),
                                 {"x", "y"})}});
  CHECK_THROWS_WITH(empirical_multiset(lt, 4), "\"~\" fails equivalence axioms at bound 4");

  // plain order: reflexive but not symmetric
  Presentation le(sigma, dom, {{"~", omega_le().relation("le")}});
  CHECK_THROWS_AS(empirical_multiset(le, 4), error);

  // |x - y| <= 1: reflexive and symmetric but not transitive
  FormulaPtr near = parse_formula(
      "(E xs . (le(x, xs) & !(x = xs) & (A t . (le(t, x) | le(xs, t))) & le(y, xs))) & "
      "(E ys . (le(y, ys) & !(y = ys) & (A t . (le(t, y) | le(ys, t))) & le(x, ys)))");
  Presentation close(sigma, dom, {{"~", arrange(omega_le(), eval(omega_le(), near), {"x", "y"})}});
  CHECK_THROWS_AS(empirical_multiset(close, 4), error);

  // missing or malformed relation
  Presentation none(sigma, dom, {});
  CHECK_THROWS_AS(empirical_multiset(none, 3), error);
}

TEST_CASE("round trip: classify a synthesized structure's defining data") {
  // classify and synthesis meet in the middle: descriptor of y0 = x0 & x1 <= x0
  // predicts E(x+1)'s multiset
  FiberSpec spec{2, 1, parse_omega("y0 = x0 & x1 <= x0")};
  EqDescriptor d = classify(spec);
  Polynomial xp1 = from_coeffs(1, {{{1}, 1}, {{0}, 1}});
  Presentation e = build_Ep(xp1);
  CHECK(check(e, d, 12).pass);
}
