#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "astra/core.hpp"

namespace astra {

// binom(t, c) with the counting convention: 0 whenever t < c (including
// negative t, where the algebraic product formula would be nonzero).
inline mpz_class binom_count(const mpz_class& t, unsigned long c) {
  if (t < static_cast<long>(c)) return 0;
  mpz_class r;
  mpz_bin_ui(r.get_mpz_t(), t.get_mpz_t(), c);
  return r;
}

// binom(a·x + b, c): one factor of a fiber-counting product. Coefficients
// are integers; on points satisfying the guard the argument is >= c - 1, so
// the value is a natural number.
struct BinomAtom {
  std::vector<mpz_class> a;
  mpz_class b;
  unsigned long c = 0;
};

struct BasicTerm {
  mpz_class coeff;
  std::vector<BinomAtom> atoms;
};

// Sum of products of binomial atoms; evaluates to a natural number on its
// intended domain.
struct BasicPolynomial {
  int arity = 0;
  std::vector<BasicTerm> terms;
};

inline mpz_class eval_binom_atom(const BinomAtom& atom, const std::vector<mpz_class>& x) {
  if (atom.a.size() != x.size()) throw error("binomial atom: arity mismatch");
  mpz_class t = atom.b;
  for (size_t i = 0; i < x.size(); ++i) t += atom.a[i] * x[i];
  return binom_count(t, atom.c);
}

inline mpz_class eval_basic(const BasicPolynomial& p, const std::vector<mpz_class>& x) {
  if (static_cast<int>(x.size()) != p.arity) throw error("basic polynomial: arity mismatch");
  mpz_class total = 0;
  for (const BasicTerm& term : p.terms) {
    mpz_class prod = term.coeff;
    for (const BinomAtom& atom : term.atoms) {
      if (prod == 0) break;
      prod *= eval_binom_atom(atom, x);
    }
    total += prod;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Ordinary multivariate polynomials with rational coefficients, stored as
// exponent-vector -> coefficient with zero coefficients dropped.

struct Polynomial {
  int arity = 0;
  std::map<std::vector<int>, mpq_class> coeffs;

  Polynomial() = default;
  explicit Polynomial(int arity) : arity(arity) {
    if (arity < 0) throw error("polynomial: negative arity");
  }
};

inline Polynomial p_const(int arity, const mpq_class& v) {
  Polynomial p(arity);
  if (v != 0) p.coeffs[std::vector<int>(arity, 0)] = v;
  return p;
}

inline Polynomial p_var(int arity, int i) {
  if (i < 0 || i >= arity) throw error("polynomial: variable out of range");
  Polynomial p(arity);
  std::vector<int> e(arity, 0);
  e[i] = 1;
  p.coeffs[e] = 1;
  return p;
}

inline Polynomial p_add(const Polynomial& a, const Polynomial& b) {
  if (a.arity != b.arity) throw error("polynomial: arity mismatch");
  Polynomial r = a;
  for (const auto& [e, c] : b.coeffs) {
    mpq_class& slot = r.coeffs[e];
    slot += c;
    if (slot == 0) r.coeffs.erase(e);
  }
  return r;
}

inline Polynomial p_scale(const Polynomial& a, const mpq_class& s) {
  Polynomial r(a.arity);
  if (s == 0) return r;
  for (const auto& [e, c] : a.coeffs) r.coeffs[e] = c * s;
  return r;
}

inline Polynomial p_mul(const Polynomial& a, const Polynomial& b) {
  if (a.arity != b.arity) throw error("polynomial: arity mismatch");
  Polynomial r(a.arity);
  for (const auto& [ea, ca] : a.coeffs)
    for (const auto& [eb, cb] : b.coeffs) {
      std::vector<int> e(a.arity);
      for (int i = 0; i < a.arity; ++i) e[i] = ea[i] + eb[i];
      mpq_class& slot = r.coeffs[e];
      slot += ca * cb;
      if (slot == 0) r.coeffs.erase(e);
    }
  return r;
}

inline mpq_class eval_poly(const Polynomial& p, const std::vector<mpz_class>& x) {
  if (static_cast<int>(x.size()) != p.arity) throw error("polynomial: arity mismatch");
  mpq_class total = 0;
  for (const auto& [e, c] : p.coeffs) {
    mpq_class term = c;
    for (int i = 0; i < p.arity; ++i)
      for (int k = 0; k < e[i]; ++k) term *= x[i];
    total += term;
  }
  return total;
}

inline bool is_integer(const mpq_class& q) { return q.get_den() == 1; }

// every coefficient a nonnegative integer
inline bool is_natural(const Polynomial& p) {
  for (const auto& [e, c] : p.coeffs)
    if (!is_integer(c) || c < 0) return false;
  return true;
}

inline bool p_equal(const Polynomial& a, const Polynomial& b) {
  return a.arity == b.arity && a.coeffs == b.coeffs;
}

// Substitute exprs[i] (all of one common arity) for variable i.
inline Polynomial p_compose(const Polynomial& p, const std::vector<Polynomial>& exprs) {
  if (static_cast<int>(exprs.size()) != p.arity) throw error("polynomial: substitution arity mismatch");
  int arity = exprs.empty() ? 0 : exprs[0].arity;
  for (const Polynomial& e : exprs)
    if (e.arity != arity) throw error("polynomial: substitution arity mismatch");
  Polynomial r(arity);
  for (const auto& [e, c] : p.coeffs) {
    Polynomial term = p_const(arity, c);
    for (int i = 0; i < p.arity; ++i)
      for (int k = 0; k < e[i]; ++k) term = p_mul(term, exprs[i]);
    r = p_add(r, term);
  }
  return r;
}

// Expand a product of binomials into an ordinary polynomial. The product
// formula binom(t, c) = t(t-1)...(t-c+1)/c! agrees with the counting
// convention whenever t >= 0, which holds wherever the basic polynomial is
// used after range validation.
inline Polynomial expand_basic(const BasicPolynomial& p) {
  Polynomial total(p.arity);
  for (const BasicTerm& term : p.terms) {
    Polynomial prod = p_const(p.arity, mpq_class(term.coeff));
    for (const BinomAtom& atom : term.atoms) {
      Polynomial arg = p_const(p.arity, mpq_class(atom.b));
      for (int i = 0; i < p.arity; ++i)
        if (atom.a[i] != 0) arg = p_add(arg, p_scale(p_var(p.arity, i), mpq_class(atom.a[i])));
      Polynomial factor = p_const(p.arity, 1);
      mpz_class cfact = 1;
      for (unsigned long k = 0; k < atom.c; ++k) {
        factor = p_mul(factor, p_add(arg, p_const(p.arity, mpq_class(-static_cast<long>(k)))));
        cfact *= static_cast<long>(k) + 1;
      }
      prod = p_mul(prod, p_scale(factor, mpq_class(1, cfact)));
    }
    total = p_add(total, prod);
  }
  return total;
}

inline std::string format_poly(const Polynomial& p, const std::string& var_prefix = "x") {
  if (p.coeffs.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // highest total degree first, then lexicographic on exponents
  std::vector<std::pair<std::vector<int>, mpq_class>> items(p.coeffs.begin(), p.coeffs.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int e : a.first) da += e;
    for (int e : b.first) db += e;
    if (da != db) return da > db;
    return a.first > b.first;
  });
  for (const auto& [e, c] : items) {
    mpq_class coeff = c;
    if (!first) {
      out << (coeff < 0 ? " - " : " + ");
      if (coeff < 0) coeff = -coeff;
    }
    first = false;
    bool has_vars = false;
    for (int x : e)
      if (x > 0) has_vars = true;
    if (!has_vars || coeff != 1) out << coeff.get_str();
    bool star = !has_vars || coeff != 1;
    for (int i = 0; i < p.arity; ++i) {
      if (e[i] == 0) continue;
      if (star) out << "*";
      out << var_prefix << i;
      if (e[i] > 1) out << "^" << e[i];
      star = true;
    }
  }
  return out.str();
}

}  // namespace astra
