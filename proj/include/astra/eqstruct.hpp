#pragma once

#include <bit>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "astra/cells.hpp"
#include "astra/presentation.hpp"
#include "astra/semilinear.hpp"

namespace astra {

// Class-size data of an equivalence structure with finitely many class
// sizes occurring infinitely often is captured by polynomials: each
// polynomial p contributes one class of size p(x̄) per index point x̄ (zero
// meaning no class), plus a number of infinite classes (absent = ω many).
struct EqDescriptor {
  std::vector<Polynomial> polys;
  std::optional<long> infinite_classes = 0;

  EqDescriptor(std::vector<Polynomial> polys, std::optional<long> infinite_classes)
      : polys(std::move(polys)), infinite_classes(infinite_classes) {
    for (const Polynomial& p : this->polys)
      if (!is_natural(p)) throw error("descriptor: polynomial coefficients must be natural");
    if (infinite_classes && *infinite_classes < 0)
      throw error("descriptor: negative infinite-class count");
  }
};

// The graph of a partial function ω^m → ω^n in the language of ⟨ω,≤,suc,0⟩,
// with domain variables x0..x{m-1} and value variables y0..y{n-1}. The
// kernel x̄ ~ x̄' ⇔ f(x̄) = f(x̄') is an equivalence relation whose classes
// are the fibers of f.
struct FiberSpec {
  int m = 1;
  int n = 1;
  OmegaPtr graph;
};

namespace detail {

// Split a nonnegative-coefficient rational polynomial counting classes into
// natural-coefficient integer polynomials without losing or duplicating
// index points: pin each variable to a value below c or shift it by c
// (an exact partition of ω^r), then split every remaining variable by
// residue mod the coefficient denominator lcm. All steps reparametrize
// bijectively, so the multiset of values is preserved.
inline std::vector<Polynomial> naturalize(const Polynomial& q) {
  if (q.coeffs.empty()) return {};
  int r = q.arity;
  for (long c = 0; c <= 40; ++c) {
    std::vector<Polynomial> regions;
    bool ok = true;
    for (unsigned mask = 0; mask < (1u << r) && ok; ++mask) {
      int pinned = std::popcount(mask);
      if (c == 0 && pinned > 0) continue;  // no values below 0
      int free_vars = r - pinned;
      std::vector<int> idx(r, -1);
      {
        int next = 0;
        for (int i = 0; i < r; ++i)
          if (!(mask >> i & 1)) idx[i] = next++;
      }
      std::vector<long> assign(pinned, 0);
      while (true) {
        std::vector<Polynomial> exprs;
        int a = 0;
        for (int i = 0; i < r; ++i) {
          if (mask >> i & 1)
            exprs.push_back(p_const(free_vars, assign[a++]));
          else
            exprs.push_back(p_add(p_var(free_vars, idx[i]), p_const(free_vars, c)));
        }
        Polynomial sub = p_compose(q, exprs);
        for (const auto& [e, coef] : sub.coeffs)
          if (coef < 0) {
            ok = false;
            break;
          }
        if (!ok) break;
        regions.push_back(std::move(sub));
        int i = pinned - 1;
        for (; i >= 0; --i) {
          if (++assign[i] < c) break;
          assign[i] = 0;
        }
        if (i < 0) break;
      }
    }
    if (!ok) continue;

    mpz_class mu = 1;
    for (const Polynomial& reg : regions)
      for (const auto& [e, coef] : reg.coeffs)
        mpz_lcm(mu.get_mpz_t(), mu.get_mpz_t(), coef.get_den().get_mpz_t());
    long mul = mu.get_si();

    std::vector<Polynomial> out;
    for (const Polynomial& reg : regions) {
      int rr = reg.arity;
      std::vector<long> residue(rr, 0);
      while (true) {
        std::vector<Polynomial> exprs;
        for (int j = 0; j < rr; ++j)
          exprs.push_back(p_add(p_scale(p_var(rr, j), mul), p_const(rr, residue[j])));
        Polynomial piece = p_compose(reg, exprs);
        if (!is_natural(piece))
          throw std::logic_error("naturalize: non-integer coefficient after residue split");
        if (!piece.coeffs.empty()) out.push_back(std::move(piece));
        int j = rr - 1;
        for (; j >= 0; --j) {
          if (++residue[j] < mul) break;
          residue[j] = 0;
        }
        if (j < 0) break;
      }
    }
    return out;
  }
  throw error("positivity step failed");
}

}  // namespace detail

// Classify the kernel of a definable function: quantifier elimination on
// the graph, cell decomposition, fiber counting per cell, refinement of the
// base space into cells where all guards are constant, and conversion of
// the per-cell counts into natural-coefficient polynomials.
inline EqDescriptor classify(const FiberSpec& spec) {
  const int m = spec.m, n = spec.n;
  if (m < 1 || n < 1) throw error("classify: dimensions must be positive");
  std::set<std::string> allowed;
  for (int i = 0; i < m; ++i) allowed.insert("x" + std::to_string(i));
  for (int j = 0; j < n; ++j) allowed.insert("y" + std::to_string(j));
  for (const std::string& v : omega_free_vars(spec.graph))
    if (!allowed.count(v)) throw error("classify: unexpected variable '" + v + "'");

  OmegaPtr gqf = qe(spec.graph);

  // functionality: two different values over one argument tuple
  {
    std::map<std::string, std::string> prime;
    for (int j = 0; j < n; ++j) prime["y" + std::to_string(j)] = "yp" + std::to_string(j);
    OmegaPtr gp = omega_rename_free(gqf, prime);
    OmegaPtr neq;
    for (int j = 0; j < n; ++j) {
      OmegaPtr a = o_not(o_atom(ot("y" + std::to_string(j)), OmegaCmp::Eq, ot("yp" + std::to_string(j))));
      neq = neq ? o_or(std::move(neq), std::move(a)) : std::move(a);
    }
    OmegaPtr body = o_and(o_and(gqf, gp), neq);
    for (int j = n - 1; j >= 0; --j) {
      body = o_exists("yp" + std::to_string(j), body);
      body = o_exists("y" + std::to_string(j), body);
    }
    if (!qf_to_cells(qe(body), m).cells.empty()) throw error("non-functional graph");
  }

  // decompose the graph over (x̄, ȳ) flattened to x0..x{m+n-1}
  std::map<std::string, std::string> flat;
  for (int j = 0; j < n; ++j) flat["y" + std::to_string(j)] = "x" + std::to_string(m + j);
  CellUnion cu = qf_to_cells(omega_rename_free(gqf, flat), m + n);

  std::vector<FiberData> fds;
  for (const SCell& cell : cu.cells) {
    FiberData fd = fiber_data(cell, m);
    if (!fd.value) throw error("infinite fiber");
    fds.push_back(std::move(fd));
  }

  long t = 1;
  for (const FiberData& fd : fds) t = std::max(t, omega_max_const(fd.guard) + 1);

  // on each t-cell of the base every guard is constant: fibers over the
  // cell are counted by one polynomial in the cell parameters
  std::vector<Polynomial> polys;
  for (const SCell& base : detail::all_cells(n, static_cast<int>(t))) {
    std::vector<long> w = detail::cell_witness(base);
    std::map<std::string, long> env;
    for (int j = 0; j < n; ++j) env["x" + std::to_string(j)] = w[j];
    AffineMap phi = cell_param(base);
    Polynomial q(phi.dim_in());
    for (const FiberData& fd : fds) {
      if (!eval_omega(fd.guard, env, 0)) continue;
      q = p_add(q, expand_basic(compose_fiber_affine(fd, phi)));
    }
    for (Polynomial& p : detail::naturalize(q)) polys.push_back(std::move(p));
  }
  return EqDescriptor(std::move(polys), 0);
}

// Number of classes of size exactly k (k >= 1) described by a descriptor;
// absent result means infinitely many. Splitting by which variables are
// zero and substituting x = 1 + z gives every occurring variable a pure
// linear monomial with positive coefficient, so solutions lie in {0..k}^r;
// a variable of p not occurring in a region makes any hit repeat forever.
inline std::optional<mpz_class> class_count(const EqDescriptor& d, long k) {
  if (k < 1) throw error("class count: size must be positive");
  mpz_class total = 0;
  for (const Polynomial& p : d.polys) {
    int r = p.arity;
    for (unsigned mask = 0; mask < (1u << r); ++mask) {
      int live = std::popcount(mask);
      std::vector<int> idx;
      std::vector<Polynomial> exprs;
      for (int i = 0; i < r; ++i) {
        if (mask >> i & 1) {
          exprs.push_back(p_add(p_var(live, static_cast<int>(idx.size())), p_const(live, 1)));
          idx.push_back(i);
        } else {
          exprs.push_back(p_const(live, 0));
        }
      }
      Polynomial sub = p_compose(p, exprs);
      std::set<int> occurring;
      for (const auto& [e, coef] : sub.coeffs)
        for (int i = 0; i < live; ++i)
          if (e[i] > 0) occurring.insert(i);
      bool dead_direction = static_cast<int>(occurring.size()) < live;
      // enumerate the occurring coordinates up to k; the rest stay 0
      std::vector<int> occ(occurring.begin(), occurring.end());
      std::vector<mpz_class> z(live, 0);
      long hits = 0;
      std::vector<long> point(occ.size(), 0);
      while (true) {
        for (size_t i = 0; i < occ.size(); ++i) z[occ[i]] = point[i];
        if (eval_poly(sub, z) == k) ++hits;
        int i = static_cast<int>(occ.size()) - 1;
        for (; i >= 0; --i) {
          if (++point[i] <= k) break;
          point[i] = 0;
        }
        if (i < 0) break;
      }
      if (hits > 0 && dead_direction) return std::nullopt;  // a free coordinate repeats the hit
      total += hits;
    }
  }
  return total;
}

// Turn a generalized vector partition function with known chamber
// polynomials into a descriptor: validate the chamber data pointwise on a
// box, then substitute each (simple) chamber's parametrization into its
// polynomial and naturalize.
inline EqDescriptor gvpf_to_descriptor(const GeneralizedVpf& g, const SemilinearSet& chambers,
                                       const std::vector<Polynomial>& polys) {
  int n = g.dim();
  if (chambers.dim() != n) throw error("gvpf descriptor: dimension mismatch");
  if (polys.size() != chambers.pieces().size())
    throw error("gvpf descriptor: one polynomial per chamber required");
  for (const Polynomial& p : polys)
    if (p.arity != n) throw error("gvpf descriptor: polynomial arity mismatch");
  for (const LinearSet& piece : chambers.pieces())
    if (!piece.simple()) throw error("gvpf descriptor: chambers must be simple");

  // every point of the box lies in exactly one chamber and its polynomial
  // value matches the function
  {
    std::vector<long> point(n, 0);
    while (true) {
      std::vector<mpz_class> x(point.begin(), point.end());
      int hit = -1;
      for (size_t i = 0; i < chambers.pieces().size(); ++i) {
        if (!detail::linear_member(chambers.pieces()[i], x)) continue;
        if (hit >= 0) throw error("gvpf descriptor: validation failure");
        hit = static_cast<int>(i);
      }
      if (hit < 0) throw error("gvpf descriptor: validation failure");
      if (eval_poly(polys[hit], x) != gvpf_eval(g, x))
        throw error("gvpf descriptor: validation failure");
      int i = n - 1;
      for (; i >= 0; --i) {
        if (++point[i] <= 25) break;
        point[i] = 0;
      }
      if (i < 0) break;
    }
  }

  std::vector<Polynomial> out;
  for (size_t i = 0; i < chambers.pieces().size(); ++i) {
    const AffineMap& map = chambers.pieces()[i].map();
    std::vector<Polynomial> exprs;
    for (int row = 0; row < n; ++row) {
      Polynomial e = p_const(map.dim_in(), mpq_class(map.offset()[row]));
      for (int col = 0; col < map.dim_in(); ++col)
        if (map.columns()[col][row] != 0)
          e = p_add(e, p_scale(p_var(map.dim_in(), col), mpq_class(map.columns()[col][row])));
      exprs.push_back(std::move(e));
    }
    Polynomial q = p_compose(polys[i], exprs);
    for (Polynomial& p : detail::naturalize(q)) out.push_back(std::move(p));
  }
  return EqDescriptor(std::move(out), 0);
}

// ---------------------------------------------------------------------------
// Synthesis: automatic equivalence structures realizing a descriptor.

namespace detail {

// Formula toolkit over the order presentation: numerals as successor
// chains, each auxiliary variable quantified where it is introduced.
class LeFormulas {
 public:
  std::string fresh() { return "n" + std::to_string(counter_++); }

  static FormulaPtr zero(const std::string& v) {
    return f_forall(v + "_t", f_atom("le", {v, v + "_t"}));
  }

  static FormulaPtr lt(const std::string& a, const std::string& b) {
    return f_and(f_atom("le", {a, b}), f_not(f_eq(a, b)));
  }

  // b = a + 1: strictly above with nothing in between
  static FormulaPtr successor(const std::string& a, const std::string& b) {
    return f_and(lt(a, b), f_forall(b + "_m", f_or(f_atom("le", {b + "_m", a}),
                                                   f_atom("le", {b, b + "_m"}))));
  }

  FormulaPtr eq_const(const std::string& v, long k) {
    if (k == 0) return zero(v);
    std::vector<std::pair<FormulaPtr, std::string>> steps;
    std::string prev = fresh();
    steps.push_back({zero(prev), prev});
    for (long i = 1; i < k; ++i) {
      std::string cur = fresh();
      steps.push_back({successor(prev, cur), cur});
      prev = cur;
    }
    steps.push_back({successor(prev, v), ""});
    FormulaPtr body;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      body = body ? f_and(it->first, std::move(body)) : it->first;
      if (!it->second.empty()) body = f_exists(it->second, std::move(body));
    }
    return body;
  }

  FormulaPtr le_const(const std::string& v, long k) {
    std::string c = fresh();
    return f_exists(c, f_and(eq_const(c, k), f_atom("le", {v, c})));
  }

 private:
  int counter_ = 0;
};

}  // namespace detail

// An automatic equivalence structure over the order presentation with one
// class of size p(x̄) for every index tuple x̄ (zero values are absent;
// arity 0 gives a single class). Rational coefficients are cleared by a
// factor μ and the resulting structure thinned μ-fold, keeping every μ-th
// class member in length-lexicographic order.
inline Presentation build_Ep(const Polynomial& p) {
  int n = p.arity;
  mpz_class mu = 1;
  for (const auto& [e, c] : p.coeffs)
    mpz_lcm(mu.get_mpz_t(), mu.get_mpz_t(), c.get_den().get_mpz_t());
  Polynomial scaled = p_scale(p, mpq_class(mu));
  if (!is_natural(scaled)) throw error("structure synthesis: polynomial has negative coefficients");
  if (scaled.coeffs.empty()) throw error("structure synthesis: zero polynomial");
  if (mu > 1) {
    // a rational polynomial must still take whole values
    std::vector<long> point(n, 0);
    while (true) {
      std::vector<mpz_class> x(point.begin(), point.end());
      if (!is_integer(eval_poly(p, x)))
        throw error("structure synthesis: polynomial is not integer-valued");
      int i = n - 1;
      for (; i >= 0; --i) {
        if (++point[i] <= 8) break;
        point[i] = 0;
      }
      if (i < 0) break;
    }
  }

  std::vector<std::pair<std::vector<int>, mpz_class>> mons;
  for (const auto& [e, c] : scaled.coeffs) mons.push_back({e, mpz_class(c.get_num())});

  int K = 0;
  for (const auto& [e, lam] : mons)
    for (int exp : e) K += exp;

  // degenerate coordinates cost a track each; drop them when forced to 0
  bool need_z = mons.size() > 1;
  bool need_w = false;
  for (const auto& [e, lam] : mons) need_w = need_w || lam > 1;
  if (n == 0 && K == 0 && !need_z) need_w = true;  // constant 1: keep one pinned track

  std::vector<std::string> vars;
  for (int i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i));
  for (int t = 0; t < K; ++t) vars.push_back("u" + std::to_string(t));
  if (need_z) vars.push_back("z");
  if (need_w) vars.push_back("w");

  detail::LeFormulas lf;
  FormulaPtr delta;
  for (size_t j = 0; j < mons.size(); ++j) {
    if (mons[j].second > 64) throw error("structure synthesis: coefficient too large");
    FormulaPtr branch;
    auto add = [&branch](FormulaPtr f) {
      branch = branch ? f_and(std::move(branch), std::move(f)) : std::move(f);
    };
    if (need_z) add(lf.eq_const("z", static_cast<long>(j)));
    if (need_w) add(lf.le_const("w", mons[j].second.get_si() - 1));
    int t = 0;
    for (size_t jj = 0; jj < mons.size(); ++jj)
      for (int i = 0; i < n; ++i)
        for (int rep = 0; rep < mons[jj].first[i]; ++rep) {
          std::string u = "u" + std::to_string(t++);
          add(jj == j ? detail::LeFormulas::lt(u, "x" + std::to_string(i))
                      : detail::LeFormulas::zero(u));
        }
    if (!branch) {  // constant-1 monomial over x̄: every tuple qualifies
      std::string t = lf.fresh();
      branch = f_exists(t, f_atom("le", {t, "x0"}));
    }
    delta = delta ? f_or(std::move(delta), std::move(branch)) : std::move(branch);
  }

  std::vector<std::string> pair_vars = vars;
  for (const std::string& v : vars) pair_vars.push_back(v + "b");
  FormulaPtr same;
  for (int i = 0; i < n; ++i) {
    FormulaPtr eq = f_eq("x" + std::to_string(i), "x" + std::to_string(i) + "b");
    same = same ? f_and(std::move(same), std::move(eq)) : std::move(eq);
  }
  if (!same) same = f_forall("t", f_atom("le", {"t", "t"}));  // arity 0: a single class

  Interpretation tau;
  tau.dimension = static_cast<int>(vars.size());
  tau.delta_vars = vars;
  tau.delta = delta;
  tau.relations["~"] = {2, pair_vars, same};
  Presentation pe = apply_interpretation(omega_le(), tau);
  long mul = mu.get_si();
  if (mul == 1) return pe;

  // thin every class to a μ-th of its size: keep the elements whose
  // 1-based rank in length-lexicographic order is divisible by μ
  Alphabet gamma = pe.base();
  PaddedAlphabet pa2(gamma, 2);
  RegularRelation lleq = intersect(RegularRelation(pa2, detail::llex_automaton(pa2), false),
                                   domain_product(gamma, pe.domain(), 2));
  Presentation staged(gamma, pe.domain(), {{"~", pe.relation("~")}, {"lleq", std::move(lleq)}});
  FormulaPtr keep = f_exists_mod(0, static_cast<int>(mul), "y",
                                 f_and(f_atom("~", {"y", "x"}), f_atom("lleq", {"y", "x"})));
  RegularRelation kept = arrange(staged, eval(staged, keep), {"x"});
  Automaton ndom = minimize(determinize(trim(kept.acceptor())));
  if (is_empty(ndom)) throw error("structure synthesis: thinning emptied the domain");
  RegularRelation sim = intersect(pe.relation("~"), domain_product(gamma, ndom, 2));
  return Presentation(gamma, std::move(ndom), {{"~", std::move(sim)}});
}

// Interpretation over the base-2 additive presentation realizing one class
// of size g(x̄) per index point: elements ⟨x̄, ȳ, k⟩ with k a term index
// and ȳ a solution counted by that term; equivalence is equality of x̄.
// With no terms the domain formula is unsatisfiable; applying the
// interpretation then reports an empty domain.
inline Interpretation build_Eg_presburger(const GeneralizedVpf& g) {
  int n = g.dim();
  int s = static_cast<int>(g.terms().size());
  int M = 0;
  for (const GvpfTerm& t : g.terms()) M = std::max(M, t.psi.dim_in());

  bool need_k = s > 1;
  std::vector<std::string> vars;
  for (int i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i));
  for (int l = 0; l < M; ++l) vars.push_back("y" + std::to_string(l));
  if (need_k) vars.push_back("k");

  detail::PlusFormulaBuilder pb;
  FormulaPtr delta;
  for (int j = 0; j < s; ++j) {
    const GvpfTerm& term = g.terms()[j];
    int mj = term.psi.dim_in();
    FormulaPtr branch = need_k ? pb.equation("k", j, {}) : nullptr;
    auto add = [&branch](FormulaPtr f) {
      branch = branch ? f_and(std::move(branch), std::move(f)) : std::move(f);
    };
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<mpz_class, std::string>> sum;
      for (int l = 0; l < mj; ++l)
        if (term.psi.rows()[i][l] > 0) sum.push_back({term.psi.rows()[i][l], "y" + std::to_string(l)});
      const mpz_class& c = term.shift[i];
      if (c <= 0) {
        add(pb.equation("x" + std::to_string(i), -c, sum));
      } else {
        // Σ a·y = x + c: tie both sides to a shared variable
        std::string t = "t" + std::to_string(i) + "_" + std::to_string(j);
        add(f_exists(t, f_and(pb.equation(t, 0, sum),
                              pb.equation(t, c, {{1, "x" + std::to_string(i)}}))));
      }
    }
    for (int l = mj; l < M; ++l) add(detail::PlusFormulaBuilder::zero("y" + std::to_string(l)));
    delta = delta ? f_or(std::move(delta), std::move(branch)) : std::move(branch);
  }
  if (!delta) delta = f_not(f_eq("x0", "x0"));

  std::vector<std::string> pair_vars = vars;
  for (const std::string& v : vars) pair_vars.push_back(v + "b");
  FormulaPtr same;
  for (int i = 0; i < n; ++i) {
    FormulaPtr eq = f_eq("x" + std::to_string(i), "x" + std::to_string(i) + "b");
    same = same ? f_and(std::move(same), std::move(eq)) : std::move(eq);
  }

  Interpretation tau;
  tau.dimension = static_cast<int>(vars.size());
  tau.delta_vars = vars;
  tau.delta = delta;
  tau.relations["~"] = {2, pair_vars, same};
  return tau;
}

// ---------------------------------------------------------------------------
// Empirical auditing of a presented equivalence structure.

struct ClassMultiset {
  std::map<long, long> counts;  // exactly-determined class sizes only
  long infinite_classes = 0;
  bool truncated = false;  // some finite class could extend past the bound
};

// Survey the classes among all domain words of length <= bound: verify the
// equivalence axioms there, decide infinity per class exactly, and record a
// finite class size only when a length bound certifies completeness.
inline ClassMultiset empirical_multiset(const Presentation& p, int bound) {
  if (!p.has_relation("~")) throw error("empirical multiset: relation \"~\" missing");
  RegularRelation raw = p.relation("~");
  if (raw.arity() != 2) throw error("empirical multiset: relation \"~\" must be binary");
  // the canonical acceptor keeps membership queries and the length bound tight
  RegularRelation sim(raw.pa(), trim(minimize(determinize(trim(raw.acceptor())))), false);

  std::vector<Word> words = enumerate_upto(p.domain(), bound);
  int nw = static_cast<int>(words.size());
  std::map<Word, int> index;
  for (int i = 0; i < nw; ++i) index.emplace(words[i], i);

  auto axioms_fail = [&]() {
    return error("\"~\" fails equivalence axioms at bound " + std::to_string(bound));
  };
  // all related pairs within the bound, straight off the acceptor
  std::vector<std::pair<int, int>> pairs;
  std::unordered_set<long long> present;
  for (const Word& conv : enumerate_upto(sim.acceptor(), bound)) {
    std::vector<Word> uv = sim.pa().deconvolve(conv);
    auto iu = index.find(uv[0]), iv = index.find(uv[1]);
    if (iu == index.end() || iv == index.end()) throw axioms_fail();  // relates non-domain words
    pairs.push_back({iu->second, iv->second});
    present.insert(static_cast<long long>(iu->second) * nw + iv->second);
  }
  auto related = [&](int i, int j) {
    return present.count(static_cast<long long>(i) * nw + j) > 0;
  };
  for (int i = 0; i < nw; ++i)
    if (!related(i, i)) throw axioms_fail();
  std::vector<int> parent(nw);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& [i, j] : pairs) {
    if (!related(j, i)) throw axioms_fail();
    parent[find(i)] = find(j);
  }
  // transitivity: the relation must be the full square on every generated class
  {
    std::map<int, long long> size;
    for (int i = 0; i < nw; ++i) ++size[find(i)];
    long long expect = 0;
    for (const auto& [root, s] : size) expect += s * s;
    if (static_cast<long long>(pairs.size()) != expect) throw axioms_fail();
  }

  // exact infinity test per class representative
  Evaluated inf = eval(p, f_exists_inf("y", f_atom("~", {"x", "y"})));
  int kappa = -1;
  try {
    kappa = length_increase_constant(sim, 1);
  } catch (const error&) {
    kappa = -1;  // some class is infinite; finite ones cannot be certified complete
  }

  ClassMultiset out;
  std::map<int, std::vector<int>> classes;
  for (int i = 0; i < nw; ++i) classes[find(i)].push_back(i);
  for (const auto& [root, members] : classes) {
    const Word& rep = words[members[0]];  // enumeration is length-lexicographic
    bool infinite = inf.rel ? inf.rel->contains({rep}) : inf.truth;
    if (infinite) {
      ++out.infinite_classes;
      continue;
    }
    if (kappa >= 0 && static_cast<int>(rep.size()) + kappa <= bound)
      ++out.counts[static_cast<long>(members.size())];
    else
      out.truncated = true;
  }
  return out;
}

struct CheckReport {
  bool pass = true;
  std::string detail;
};

// Compare a presented structure against a descriptor: fail only on a
// certified mismatch (a fully-determined class count exceeding the
// prediction, or more infinite classes than promised).
inline CheckReport check(const Presentation& p, const EqDescriptor& d, int bound) {
  ClassMultiset m = empirical_multiset(p, bound);
  for (const auto& [size, count] : m.counts) {
    std::optional<mpz_class> predicted = class_count(d, size);
    if (predicted && *predicted < count)
      return {false, "classes of size " + std::to_string(size) + ": observed " +
                         std::to_string(count) + ", descriptor allows " + predicted->get_str()};
  }
  if (d.infinite_classes && m.infinite_classes > *d.infinite_classes)
    return {false, "infinite classes: observed " + std::to_string(m.infinite_classes) +
                       ", descriptor allows " + std::to_string(*d.infinite_classes)};
  return {true, ""};
}

}  // namespace astra
