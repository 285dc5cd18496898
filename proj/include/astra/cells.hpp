#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "astra/omega_formula.hpp"
#include "astra/polynomial.hpp"
#include "astra/semilinear.hpp"

namespace astra {

// Gap value standing for "at least s".
constexpr int kGapInf = -1;

// An s-cell of ω^n: a permutation σ of the coordinates together with gap
// prescriptions between consecutive coordinates in σ-order. A point ā lies
// in the cell iff
//   d(0) < ∞  ⇒  a_{σ(0)} = d(0)            d(0) = ∞  ⇒  a_{σ(0)} >= s
//   d(i) < ∞  ⇒  a_{σ(i)} = a_{σ(i-1)} + d(i)
//   d(i) = ∞  ⇒  a_{σ(i)} >= a_{σ(i-1)} + s
// Finite gaps are below s, so distinct cells of the same shape parameters
// are either equal (as sets) or disjoint.
struct SCell {
  int n = 0;
  int s = 1;
  std::vector<int> sigma;
  std::vector<int> d;  // entries in [0, s) or kGapInf

  SCell(int n, int s, std::vector<int> sigma, std::vector<int> d)
      : n(n), s(s), sigma(std::move(sigma)), d(std::move(d)) {
    if (n < 1) throw error("cell: dimension must be positive");
    if (s < 1) throw error("cell: s must be positive");
    if (static_cast<int>(this->sigma.size()) != n || static_cast<int>(this->d.size()) != n)
      throw error("cell: sigma and d must have length n");
    std::vector<bool> seen(n, false);
    for (int v : this->sigma) {
      if (v < 0 || v >= n || seen[v]) throw error("cell: sigma is not a permutation");
      seen[v] = true;
    }
    for (int g : this->d)
      if (g != kGapInf && (g < 0 || g >= s)) throw error("cell: finite gaps must lie in [0, s)");
  }
};

inline bool cell_member(const SCell& c, const std::vector<long>& a) {
  if (static_cast<int>(a.size()) != c.n) throw error("cell: point dimension mismatch");
  for (long v : a)
    if (v < 0) return false;
  long prev = 0;
  for (int i = 0; i < c.n; ++i) {
    long cur = a[c.sigma[i]];
    if (c.d[i] == kGapInf) {
      if (cur < prev + c.s) return false;
    } else {
      if (cur != prev + c.d[i]) return false;
    }
    prev = cur;
  }
  return true;
}

namespace detail {

// Coordinates joined by zero gaps are equal, so their σ-order is arbitrary;
// sorting each zero-gap run yields a canonical representative.
inline std::pair<std::vector<int>, std::vector<int>> cell_canonical(const SCell& c) {
  std::vector<int> sigma = c.sigma;
  int i = 0;
  while (i < c.n) {
    int j = i + 1;
    while (j < c.n && c.d[j] == 0) ++j;
    std::sort(sigma.begin() + i, sigma.begin() + j);
    i = j;
  }
  return {sigma, c.d};
}

}  // namespace detail

// Two cells with the same n and s are equal as sets or disjoint; decides
// which by comparing canonical forms.
inline bool cells_equal(const SCell& a, const SCell& b) {
  if (a.n != b.n) throw error("cell comparison: dimension mismatch");
  if (a.s != b.s) throw error("cell comparison: parameter s mismatch");
  return detail::cell_canonical(a) == detail::cell_canonical(b);
}

// A finite union of pairwise disjoint cells with a common parameter s.
struct CellUnion {
  int n = 0;
  int s = 1;
  std::vector<SCell> cells;
};

inline bool cell_union_member(const CellUnion& u, const std::vector<long>& a) {
  for (const SCell& c : u.cells)
    if (cell_member(c, a)) return true;
  return false;
}

namespace detail {

// The member of a cell with every "at least s" gap taken as exactly s.
inline std::vector<long> cell_witness(const SCell& c) {
  std::vector<long> a(c.n, 0);
  long prev = 0;
  for (int i = 0; i < c.n; ++i) {
    prev += c.d[i] == kGapInf ? c.s : c.d[i];
    a[c.sigma[i]] = prev;
  }
  return a;
}

// Every s-cell of ω^n exactly once, in canonical form; together they
// partition ω^n.
inline std::vector<SCell> all_cells(int n, int s) {
  std::vector<SCell> out;
  std::set<std::pair<std::vector<int>, std::vector<int>>> taken;
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    std::vector<int> d(n, 0);
    while (true) {
      SCell cell(n, s, sigma, d);
      auto canon = cell_canonical(cell);
      if (taken.insert(canon).second) out.push_back(SCell(n, s, canon.first, canon.second));
      int i = n - 1;
      for (; i >= 0; --i) {
        if (d[i] == kGapInf) {
          d[i] = 0;
          continue;
        }
        d[i] = d[i] + 1 < s ? d[i] + 1 : kGapInf;
        break;
      }
      if (i < 0) break;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

}  // namespace detail

// Decompose the set defined by a quantifier-free formula over variables
// x0..x{n-1} into disjoint s-cells with s = (max constant) + 1. Every atom
// compares values at distance at most (max constant), so atom truth is
// constant on each such cell and one witness decides containment. For
// n <= 3 the result is certified pointwise on {0..3sn}^n.
inline CellUnion qf_to_cells(const OmegaPtr& psi, int n) {
  if (n < 1) throw error("cell decomposition: dimension must be positive");
  if (omega_quantifier_count(psi) > 0)
    throw error("cell decomposition: formula must be quantifier-free");
  std::set<std::string> allowed;
  for (int i = 0; i < n; ++i) allowed.insert("x" + std::to_string(i));
  for (const std::string& v : omega_free_vars(psi))
    if (!allowed.count(v)) throw error("cell decomposition: unexpected variable '" + v + "'");

  int s = static_cast<int>(omega_max_const(psi)) + 1;
  CellUnion out{n, s, {}};
  for (const SCell& cell : detail::all_cells(n, s)) {
    std::vector<long> w = detail::cell_witness(cell);
    std::map<std::string, long> env;
    for (int i = 0; i < n; ++i) env["x" + std::to_string(i)] = w[i];
    if (eval_omega(psi, env, 0)) out.cells.push_back(cell);
  }

  if (n <= 3) {
    long hi = 3L * s * n;
    std::vector<long> point(n, 0);
    while (true) {
      int hits = 0;
      for (const SCell& c : out.cells) hits += cell_member(c, point);
      if (hits > 1) throw std::logic_error("cell decomposition: cells overlap");
      std::map<std::string, long> env;
      for (int i = 0; i < n; ++i) env["x" + std::to_string(i)] = point[i];
      if ((hits == 1) != eval_omega(psi, env, 0))
        throw std::logic_error("cell decomposition: certification failed");
      int i = n - 1;
      for (; i >= 0; --i) {
        if (++point[i] <= hi) break;
        point[i] = 0;
      }
      if (i < 0) break;
    }
  }
  return out;
}

// Parametrize a cell: one parameter per "at least s" gap, contributing 1 to
// the gap's coordinate and every later one in σ-order. The map is injective
// with image exactly the cell.
inline AffineMap cell_param(const SCell& c) {
  std::vector<mpz_class> offset(c.n);
  std::vector<std::vector<mpz_class>> columns;
  long acc = 0;
  for (int i = 0; i < c.n; ++i) {
    acc += c.d[i] == kGapInf ? c.s : c.d[i];
    offset[c.sigma[i]] = acc;
    if (c.d[i] == kGapInf) {
      std::vector<mpz_class> col(c.n, 0);
      for (int j = i; j < c.n; ++j) col[c.sigma[j]] = 1;
      columns.push_back(std::move(col));
    }
  }
  return AffineMap(std::move(offset), std::move(columns));
}

// Counting data for the fibers of a cell C ⊆ ω^{m+n} over its last n
// coordinates: a guard describing the projection to the base and, when
// finite, a binomial-product polynomial in the base variables x0..x{n-1}
// giving the number of fiber points over each base point.
struct FiberData {
  OmegaPtr guard;
  std::optional<BasicPolynomial> value;  // absent: infinitely many fiber points
};

// Walk the σ-order between consecutive base coordinates. A run with f
// unbounded gaps and finite gaps summing to t forces the bounding base
// values u (left) and v (right) to satisfy v >= u + t + f·s, and the fiber
// coordinates inside it contribute binom((v - u - t - f·s) + f - 1, f - 1)
// choices; a run with f = 0 pins v = u + t exactly. Unbounded gaps above
// the last base coordinate make the fiber infinite.
inline FiberData fiber_data(const SCell& c, int m) {
  int n = c.n - m;
  if (m < 0 || n < 0) throw error("fiber data: invalid split");
  FiberData out;
  std::optional<BasicPolynomial> value(BasicPolynomial{n, {BasicTerm{1, {}}}});
  OmegaPtr guard;

  auto add_guard = [&](OmegaPtr atom) { guard = guard ? o_and(std::move(guard), std::move(atom)) : std::move(atom); };

  int left = -1;  // base coordinate bounding the current run from below
  long finite_sum = 0;
  int unbounded = 0;
  for (int i = 0; i < c.n; ++i) {
    if (c.d[i] == kGapInf)
      ++unbounded;
    else
      finite_sum += c.d[i];
    if (c.sigma[i] < m) continue;
    int j = c.sigma[i] - m;
    OmegaTerm right = ot("x" + std::to_string(j));
    OmegaTerm base = left < 0 ? oconst(0) : ot("x" + std::to_string(left));
    if (unbounded == 0) {
      base.offset += finite_sum;
      add_guard(o_atom(right, OmegaCmp::Eq, base));
    } else {
      long slack = finite_sum + static_cast<long>(unbounded) * c.s;
      base.offset += slack;
      add_guard(o_atom(right, OmegaCmp::Ge, base));
      if (unbounded >= 2) {
        BinomAtom atom;
        atom.a.assign(n, 0);
        atom.a[j] = 1;
        if (left >= 0) atom.a[left] = -1;
        atom.b = -slack + unbounded - 1;
        atom.c = static_cast<unsigned long>(unbounded - 1);
        value->terms[0].atoms.push_back(std::move(atom));
      }
    }
    left = j;
    finite_sum = 0;
    unbounded = 0;
  }
  if (unbounded > 0) value.reset();

  out.guard = guard ? guard : o_true();
  out.value = std::move(value);
  return out;
}

// Number of fiber points of the cell over one base point; absent result
// means infinitely many.
inline std::optional<mpz_class> fiber_count(const SCell& c, int m, const std::vector<long>& b) {
  int n = c.n - m;
  if (static_cast<int>(b.size()) != n) throw error("fiber count: base dimension mismatch");
  FiberData fd = fiber_data(c, m);
  std::map<std::string, long> env;
  for (int j = 0; j < n; ++j) env["x" + std::to_string(j)] = b[j];
  if (!eval_omega(fd.guard, env, 0)) return mpz_class(0);
  if (!fd.value) return std::nullopt;
  std::vector<mpz_class> point(b.begin(), b.end());
  return eval_basic(*fd.value, point);
}

namespace detail {

// Affine form of an omega term under a substitution of base variables.
inline std::pair<std::vector<mpz_class>, mpz_class> term_affine(const OmegaTerm& t, const AffineMap& phi) {
  std::vector<mpz_class> coeffs(phi.dim_in(), 0);
  mpz_class off = t.offset;
  if (!t.var.empty()) {
    if (t.var.size() < 2 || t.var[0] != 'x') throw error("fiber compose: unexpected guard variable");
    int j = std::stoi(t.var.substr(1));
    if (j < 0 || j >= phi.dim_out()) throw error("fiber compose: guard variable out of range");
    off += phi.offset()[j];
    for (int k = 0; k < phi.dim_in(); ++k) coeffs[k] += phi.columns()[k][j];
  }
  return {coeffs, off};
}

inline void check_guard_on_range(const OmegaPtr& g, const AffineMap& phi) {
  if (g->kind == OmegaFormula::Kind::And) {
    check_guard_on_range(g->left, phi);
    check_guard_on_range(g->right, phi);
    return;
  }
  if (g->kind != OmegaFormula::Kind::Atom) throw error("fiber compose: guard not a conjunction of atoms");
  auto [c1, o1] = term_affine(g->t1, phi);
  auto [c2, o2] = term_affine(g->t2, phi);
  // difference t1 - t2 as an affine form over the parameters
  std::vector<mpz_class> gamma(c1.size());
  for (size_t k = 0; k < c1.size(); ++k) gamma[k] = c1[k] - c2[k];
  mpz_class beta = o1 - o2;
  switch (g->cmp) {
    case OmegaCmp::Eq: {
      for (const mpz_class& v : gamma)
        if (v != 0) throw error("range not in guard");
      if (beta != 0) throw error("range not in guard");
      return;
    }
    case OmegaCmp::Ge:
    case OmegaCmp::Gt: {
      mpz_class need = g->cmp == OmegaCmp::Gt ? 1 : 0;
      for (const mpz_class& v : gamma)
        if (v < 0) throw error("range not in guard");
      if (beta < need) throw error("range not in guard");
      return;
    }
    case OmegaCmp::Le:
    case OmegaCmp::Lt: {
      mpz_class need = g->cmp == OmegaCmp::Lt ? 1 : 0;
      for (const mpz_class& v : gamma)
        if (v > 0) throw error("range not in guard");
      if (-beta < need) throw error("range not in guard");
      return;
    }
  }
}

}  // namespace detail

// Substitute an affine parametrization into fiber-counting data. The range
// of φ must satisfy the guard — checked exactly over the parameter cone —
// after which φ substitutes coordinate-wise into every binomial atom.
inline BasicPolynomial compose_fiber_affine(const FiberData& f, const AffineMap& phi) {
  if (!f.value) throw error("fiber compose: infinite fiber value");
  if (phi.dim_out() != f.value->arity) throw error("fiber compose: dimension mismatch");
  detail::check_guard_on_range(f.guard, phi);
  BasicPolynomial out;
  out.arity = phi.dim_in();
  for (const BasicTerm& term : f.value->terms) {
    BasicTerm nt;
    nt.coeff = term.coeff;
    for (const BinomAtom& atom : term.atoms) {
      BinomAtom na;
      na.c = atom.c;
      na.b = atom.b;
      na.a.assign(out.arity, 0);
      for (int j = 0; j < phi.dim_out(); ++j) {
        if (atom.a[j] == 0) continue;
        na.b += atom.a[j] * phi.offset()[j];
        for (int k = 0; k < out.arity; ++k) na.a[k] += atom.a[j] * phi.columns()[k][j];
      }
      nt.atoms.push_back(std::move(na));
    }
    out.terms.push_back(std::move(nt));
  }
  return out;
}

}  // namespace astra
