#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "astra/core.hpp"

namespace astra {

// First-order language of ⟨ω, ≤, suc, 0⟩. A term is a variable or the
// constant 0, plus a natural offset counting successor applications.
struct OmegaTerm {
  std::string var;  // empty for constant terms
  long offset = 0;
};

inline OmegaTerm ot(std::string var, long offset = 0) { return {std::move(var), offset}; }
inline OmegaTerm oconst(long value) { return {"", value}; }

enum class OmegaCmp { Eq, Le, Lt, Ge, Gt };

struct OmegaFormula;
using OmegaPtr = std::shared_ptr<const OmegaFormula>;

struct OmegaFormula {
  enum class Kind { Atom, Not, And, Or, Implies, Exists, Forall };
  Kind kind;
  OmegaTerm t1, t2;  // Atom
  OmegaCmp cmp = OmegaCmp::Eq;
  OmegaPtr left, right;
  std::string var;  // quantifiers
};

inline OmegaPtr o_atom(OmegaTerm a, OmegaCmp cmp, OmegaTerm b) {
  auto f = std::make_shared<OmegaFormula>();
  f->kind = OmegaFormula::Kind::Atom;
  f->t1 = std::move(a);
  f->t2 = std::move(b);
  f->cmp = cmp;
  return f;
}

inline OmegaPtr o_not(OmegaPtr a) {
  auto f = std::make_shared<OmegaFormula>();
  f->kind = OmegaFormula::Kind::Not;
  f->left = std::move(a);
  return f;
}

inline OmegaPtr o_binary(OmegaFormula::Kind kind, OmegaPtr a, OmegaPtr b) {
  auto f = std::make_shared<OmegaFormula>();
  f->kind = kind;
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}

inline OmegaPtr o_and(OmegaPtr a, OmegaPtr b) { return o_binary(OmegaFormula::Kind::And, std::move(a), std::move(b)); }
inline OmegaPtr o_or(OmegaPtr a, OmegaPtr b) { return o_binary(OmegaFormula::Kind::Or, std::move(a), std::move(b)); }
inline OmegaPtr o_implies(OmegaPtr a, OmegaPtr b) { return o_binary(OmegaFormula::Kind::Implies, std::move(a), std::move(b)); }

inline OmegaPtr o_quant(OmegaFormula::Kind kind, std::string var, OmegaPtr body) {
  auto f = std::make_shared<OmegaFormula>();
  f->kind = kind;
  f->var = std::move(var);
  f->left = std::move(body);
  return f;
}

inline OmegaPtr o_exists(std::string var, OmegaPtr body) { return o_quant(OmegaFormula::Kind::Exists, std::move(var), std::move(body)); }
inline OmegaPtr o_forall(std::string var, OmegaPtr body) { return o_quant(OmegaFormula::Kind::Forall, std::move(var), std::move(body)); }

inline OmegaPtr o_true() { return o_atom(oconst(0), OmegaCmp::Eq, oconst(0)); }
inline OmegaPtr o_false() { return o_not(o_true()); }

// ---------------------------------------------------------------------------
// Text form. Grammar mirrors the relational formula language:
//   formula := 'E' var '.' formula | 'A' var '.' formula | implication
//   implication := disjunction ('->' implication)?
//   disjunction := conjunction ('|' conjunction)*
//   conjunction := unary ('&' unary)*
//   unary := '~' unary | '(' formula ')' | term cmp term
//   term := 'suc' '(' term ')' | ident ('+' number)? | number
// Quantifier scope extends to the end of the enclosing formula.

namespace detail {

class OmegaParser {
 public:
  explicit OmegaParser(const std::string& text) : text_(text) {}

  OmegaPtr parse() {
    OmegaPtr f = formula();
    skip();
    if (pos_ != text_.size()) throw error("omega formula: trailing input at position " + std::to_string(pos_));
    return f;
  }

 private:
  const std::string& text_;
  size_t pos_ = 0;

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(const std::string& tok) {
    skip();
    if (text_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  bool peek_word(const std::string& word) {
    skip();
    if (text_.compare(pos_, word.size(), word) != 0) return false;
    size_t end = pos_ + word.size();
    return end >= text_.size() || (!std::isalnum(static_cast<unsigned char>(text_[end])) && text_[end] != '_');
  }

  std::string ident() {
    skip();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) throw error("omega formula: identifier expected at position " + std::to_string(start));
    return text_.substr(start, pos_ - start);
  }

  long number() {
    skip();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw error("omega formula: number expected at position " + std::to_string(start));
    return std::stol(text_.substr(start, pos_ - start));
  }

  OmegaPtr formula() {
    if (peek_word("E") || peek_word("A")) {
      bool forall = peek_word("A");
      pos_ += 1;
      std::string v = ident();
      if (!eat(".")) throw error("omega formula: '.' expected after quantifier");
      OmegaPtr body = formula();
      return forall ? o_forall(v, body) : o_exists(v, body);
    }
    OmegaPtr l = disjunction();
    if (eat("->")) return o_implies(std::move(l), formula());
    return l;
  }

  OmegaPtr disjunction() {
    OmegaPtr l = conjunction();
    while (true) {
      skip();
      if (pos_ < text_.size() && text_[pos_] == '|') {
        ++pos_;
        l = o_or(std::move(l), conjunction());
      } else {
        return l;
      }
    }
  }

  OmegaPtr conjunction() {
    OmegaPtr l = unary();
    while (eat("&")) l = o_and(std::move(l), unary());
    return l;
  }

  OmegaPtr unary() {
    if (eat("~")) return o_not(unary());
    skip();
    if (pos_ < text_.size() && text_[pos_] == '(' && !starts_atom()) {
      ++pos_;
      OmegaPtr f = formula();
      if (!eat(")")) throw error("omega formula: ')' expected");
      return f;
    }
    OmegaTerm a = term();
    OmegaCmp cmp;
    if (eat("<="))
      cmp = OmegaCmp::Le;
    else if (eat(">="))
      cmp = OmegaCmp::Ge;
    else if (eat("<"))
      cmp = OmegaCmp::Lt;
    else if (eat(">"))
      cmp = OmegaCmp::Gt;
    else if (eat("="))
      cmp = OmegaCmp::Eq;
    else
      throw error("omega formula: comparison expected at position " + std::to_string(pos_));
    return o_atom(std::move(a), cmp, term());
  }

  // '(' can open a grouped formula or never an atom: terms never start with
  // '(' in this grammar
  bool starts_atom() { return false; }

  OmegaTerm term() {
    skip();
    if (peek_word("suc")) {
      pos_ += 3;
      if (!eat("(")) throw error("omega formula: '(' expected after suc");
      OmegaTerm t = term();
      if (!eat(")")) throw error("omega formula: ')' expected after suc argument");
      ++t.offset;
      return t;
    }
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) return oconst(number());
    OmegaTerm t = ot(ident());
    size_t save = pos_;
    if (eat("+")) {
      skip();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        t.offset += number();
      } else {
        pos_ = save;
      }
    }
    return t;
  }
};

}  // namespace detail

inline OmegaPtr parse_omega(const std::string& text) { return detail::OmegaParser(text).parse(); }

inline std::string format_term(const OmegaTerm& t) {
  if (t.var.empty()) return std::to_string(t.offset);
  if (t.offset == 0) return t.var;
  return t.var + " + " + std::to_string(t.offset);
}

inline std::string format_omega(const OmegaPtr& f) {
  switch (f->kind) {
    case OmegaFormula::Kind::Atom: {
      const char* op = "=";
      switch (f->cmp) {
        case OmegaCmp::Eq: op = "="; break;
        case OmegaCmp::Le: op = "<="; break;
        case OmegaCmp::Lt: op = "<"; break;
        case OmegaCmp::Ge: op = ">="; break;
        case OmegaCmp::Gt: op = ">"; break;
      }
      return format_term(f->t1) + " " + op + " " + format_term(f->t2);
    }
    case OmegaFormula::Kind::Not:
      return "~(" + format_omega(f->left) + ")";
    case OmegaFormula::Kind::And:
    case OmegaFormula::Kind::Or:
    case OmegaFormula::Kind::Implies: {
      // A quantifier body extends maximally to the right, so a quantifier
      // on the left of a connective needs its own parentheses.
      auto wrap = [](const OmegaPtr& g) {
        bool quant = g->kind == OmegaFormula::Kind::Exists || g->kind == OmegaFormula::Kind::Forall;
        return quant ? "(" + format_omega(g) + ")" : format_omega(g);
      };
      const char* op = f->kind == OmegaFormula::Kind::And   ? " & "
                       : f->kind == OmegaFormula::Kind::Or ? " | "
                                                           : " -> ";
      return "(" + wrap(f->left) + op + format_omega(f->right) + ")";
    }
    case OmegaFormula::Kind::Exists:
      return "E " + f->var + " . " + format_omega(f->left);
    case OmegaFormula::Kind::Forall:
      return "A " + f->var + " . " + format_omega(f->left);
  }
  throw error("omega formula: unreachable");
}

inline void collect_omega_vars(const OmegaPtr& f, std::set<std::string>& bound,
                               std::set<std::string>& free) {
  switch (f->kind) {
    case OmegaFormula::Kind::Atom:
      if (!f->t1.var.empty() && !bound.count(f->t1.var)) free.insert(f->t1.var);
      if (!f->t2.var.empty() && !bound.count(f->t2.var)) free.insert(f->t2.var);
      return;
    case OmegaFormula::Kind::Not:
      collect_omega_vars(f->left, bound, free);
      return;
    case OmegaFormula::Kind::And:
    case OmegaFormula::Kind::Or:
    case OmegaFormula::Kind::Implies:
      collect_omega_vars(f->left, bound, free);
      collect_omega_vars(f->right, bound, free);
      return;
    case OmegaFormula::Kind::Exists:
    case OmegaFormula::Kind::Forall: {
      bool added = bound.insert(f->var).second;
      collect_omega_vars(f->left, bound, free);
      if (added) bound.erase(f->var);
      return;
    }
  }
}

inline std::vector<std::string> omega_free_vars(const OmegaPtr& f) {
  std::set<std::string> bound, free;
  collect_omega_vars(f, bound, free);
  return {free.begin(), free.end()};
}

namespace detail {

inline OmegaPtr rename_with(const OmegaPtr& f, std::map<std::string, std::string> map) {
  switch (f->kind) {
    case OmegaFormula::Kind::Atom: {
      OmegaTerm a = f->t1, b = f->t2;
      if (auto it = map.find(a.var); !a.var.empty() && it != map.end()) a.var = it->second;
      if (auto it = map.find(b.var); !b.var.empty() && it != map.end()) b.var = it->second;
      return o_atom(a, f->cmp, b);
    }
    case OmegaFormula::Kind::Not:
      return o_not(rename_with(f->left, map));
    case OmegaFormula::Kind::And:
    case OmegaFormula::Kind::Or:
    case OmegaFormula::Kind::Implies:
      return o_binary(f->kind, rename_with(f->left, map), rename_with(f->right, map));
    case OmegaFormula::Kind::Exists:
    case OmegaFormula::Kind::Forall: {
      map.erase(f->var);  // shadowed
      return o_quant(f->kind, f->var, rename_with(f->left, map));
    }
  }
  throw error("omega rename: unreachable");
}

inline OmegaPtr uniquify_bound(const OmegaPtr& f, int& counter) {
  switch (f->kind) {
    case OmegaFormula::Kind::Atom:
      return f;
    case OmegaFormula::Kind::Not:
      return o_not(uniquify_bound(f->left, counter));
    case OmegaFormula::Kind::And:
    case OmegaFormula::Kind::Or:
    case OmegaFormula::Kind::Implies:
      return o_binary(f->kind, uniquify_bound(f->left, counter), uniquify_bound(f->right, counter));
    case OmegaFormula::Kind::Exists:
    case OmegaFormula::Kind::Forall: {
      std::string fresh = "_q" + std::to_string(counter++);
      OmegaPtr body = uniquify_bound(f->left, counter);
      return o_quant(f->kind, fresh, rename_with(body, {{f->var, fresh}}));
    }
  }
  throw error("omega rename: unreachable");
}

}  // namespace detail

// Rename free variables. Bound variables are first made fresh (prefix "_q"),
// so substitution can never capture as long as targets avoid that prefix.
inline OmegaPtr omega_rename_free(const OmegaPtr& f, const std::map<std::string, std::string>& map) {
  for (const auto& [from, to] : map)
    if (to.rfind("_q", 0) == 0) throw error("omega rename: reserved target name");
  int counter = 0;
  return detail::rename_with(detail::uniquify_bound(f, counter), map);
}

// Semantics over ω with each quantifier restricted to {0..max(env)+slack}.
// Order and successor only distinguish values up to bounded distances, so a
// slack exceeding (max constant + 1) per remaining quantifier makes the
// bounded semantics agree with the full structure; the certification
// wrappers arrange that.
inline bool eval_omega(const OmegaPtr& f, std::map<std::string, long>& env, long slack) {
  switch (f->kind) {
    case OmegaFormula::Kind::Atom: {
      auto value = [&](const OmegaTerm& t) {
        if (t.var.empty()) return t.offset;
        auto it = env.find(t.var);
        if (it == env.end()) throw error("omega eval: unbound variable '" + t.var + "'");
        return it->second + t.offset;
      };
      long a = value(f->t1), b = value(f->t2);
      switch (f->cmp) {
        case OmegaCmp::Eq: return a == b;
        case OmegaCmp::Le: return a <= b;
        case OmegaCmp::Lt: return a < b;
        case OmegaCmp::Ge: return a >= b;
        case OmegaCmp::Gt: return a > b;
      }
      return false;
    }
    case OmegaFormula::Kind::Not:
      return !eval_omega(f->left, env, slack);
    case OmegaFormula::Kind::And:
      return eval_omega(f->left, env, slack) && eval_omega(f->right, env, slack);
    case OmegaFormula::Kind::Or:
      return eval_omega(f->left, env, slack) || eval_omega(f->right, env, slack);
    case OmegaFormula::Kind::Implies:
      return !eval_omega(f->left, env, slack) || eval_omega(f->right, env, slack);
    case OmegaFormula::Kind::Exists:
    case OmegaFormula::Kind::Forall: {
      bool forall = f->kind == OmegaFormula::Kind::Forall;
      long hi = 0;
      for (const auto& [name, value] : env) hi = std::max(hi, value);
      hi += slack;
      auto saved = env.find(f->var) != env.end() ? std::optional<long>(env[f->var]) : std::nullopt;
      bool result = forall;
      for (long v = 0; v <= hi; ++v) {
        env[f->var] = v;
        bool b = eval_omega(f->left, env, slack);
        if (forall ? !b : b) {
          result = !forall;
          break;
        }
      }
      if (saved)
        env[f->var] = *saved;
      else
        env.erase(f->var);
      return result;
    }
  }
  throw error("omega eval: unreachable");
}

inline long omega_max_const(const OmegaPtr& f) {
  switch (f->kind) {
    case OmegaFormula::Kind::Atom:
      return std::max(std::abs(f->t1.offset), std::abs(f->t2.offset));
    case OmegaFormula::Kind::Not:
    case OmegaFormula::Kind::Exists:
    case OmegaFormula::Kind::Forall:
      return omega_max_const(f->left);
    default:
      return std::max(omega_max_const(f->left), omega_max_const(f->right));
  }
}

inline int omega_quantifier_count(const OmegaPtr& f) {
  switch (f->kind) {
    case OmegaFormula::Kind::Atom:
      return 0;
    case OmegaFormula::Kind::Not:
      return omega_quantifier_count(f->left);
    case OmegaFormula::Kind::Exists:
    case OmegaFormula::Kind::Forall:
      return 1 + omega_quantifier_count(f->left);
    default:
      return omega_quantifier_count(f->left) + omega_quantifier_count(f->right);
  }
}

// ---------------------------------------------------------------------------
// Quantifier elimination. Internal literals are kept positive in one of five
// shapes (offsets may be any integer during rewriting):
//   x >= y + c, x = y + c, x >= c, x = c, x <= c.

namespace detail {

struct OLit {
  enum class Kind { GeVar, EqVar, GeConst, EqConst, LeConst, True, False } kind;
  std::string x, y;
  long c = 0;
};

using OConj = std::vector<OLit>;
using ODnf = std::vector<OConj>;

inline OLit olit_true() { return {OLit::Kind::True, "", "", 0}; }
inline OLit olit_false() { return {OLit::Kind::False, "", "", 0}; }

// x >= y + c with truth folding
inline OLit mk_ge_var(const std::string& x, const std::string& y, long c) {
  if (x == y) return c <= 0 ? olit_true() : olit_false();
  return {OLit::Kind::GeVar, x, y, c};
}

// x = y + c, canonicalized to a nonnegative offset
inline OLit mk_eq_var(const std::string& x, const std::string& y, long c) {
  if (x == y) return c == 0 ? olit_true() : olit_false();
  if (c < 0) return {OLit::Kind::EqVar, y, x, -c};
  return {OLit::Kind::EqVar, x, y, c};
}

inline OLit mk_ge_const(const std::string& x, long c) {
  if (c <= 0) return olit_true();
  return {OLit::Kind::GeConst, x, "", c};
}

inline OLit mk_eq_const(const std::string& x, long c) {
  if (c < 0) return olit_false();
  return {OLit::Kind::EqConst, x, "", c};
}

inline OLit mk_le_const(const std::string& x, long c) {
  if (c < 0) return olit_false();
  return {OLit::Kind::LeConst, x, "", c};
}

// t1 >= t2 over terms
inline OLit atom_ge(const OmegaTerm& t1, const OmegaTerm& t2) {
  if (!t1.var.empty() && !t2.var.empty()) return mk_ge_var(t1.var, t2.var, t2.offset - t1.offset);
  if (!t1.var.empty()) return mk_ge_const(t1.var, t2.offset - t1.offset);
  if (!t2.var.empty()) return mk_le_const(t2.var, t1.offset - t2.offset);
  return t1.offset >= t2.offset ? olit_true() : olit_false();
}

inline OLit atom_eq(const OmegaTerm& t1, const OmegaTerm& t2) {
  if (!t1.var.empty() && !t2.var.empty()) return mk_eq_var(t1.var, t2.var, t2.offset - t1.offset);
  if (!t1.var.empty()) return mk_eq_const(t1.var, t2.offset - t1.offset);
  if (!t2.var.empty()) return mk_eq_const(t2.var, t1.offset - t2.offset);
  return t1.offset == t2.offset ? olit_true() : olit_false();
}

inline ODnf negate_lit(const OLit& l) {
  switch (l.kind) {
    case OLit::Kind::GeVar:  // not(x >= y+c)  <=>  y >= x + 1 - c
      return {{mk_ge_var(l.y, l.x, 1 - l.c)}};
    case OLit::Kind::EqVar:
      return {{mk_ge_var(l.x, l.y, l.c + 1)}, {mk_ge_var(l.y, l.x, 1 - l.c)}};
    case OLit::Kind::GeConst:
      return {{mk_le_const(l.x, l.c - 1)}};
    case OLit::Kind::LeConst:
      return {{mk_ge_const(l.x, l.c + 1)}};
    case OLit::Kind::EqConst:
      return {{mk_ge_const(l.x, l.c + 1)}, {mk_le_const(l.x, l.c - 1)}};
    case OLit::Kind::True:
      return {};  // empty disjunction = false
    case OLit::Kind::False:
      return {{}};  // empty conjunction = true
  }
  throw error("qe: unreachable");
}

inline ODnf dnf_and(const ODnf& a, const ODnf& b) {
  ODnf out;
  for (const OConj& ca : a)
    for (const OConj& cb : b) {
      OConj c = ca;
      c.insert(c.end(), cb.begin(), cb.end());
      out.push_back(std::move(c));
    }
  return out;
}

inline ODnf dnf_or(ODnf a, const ODnf& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Quantifier-free formula to DNF of positive literals.
inline ODnf to_dnf(const OmegaPtr& f, bool positive) {
  switch (f->kind) {
    case OmegaFormula::Kind::Atom: {
      std::vector<OLit> lits;
      switch (f->cmp) {
        case OmegaCmp::Eq: lits.push_back(atom_eq(f->t1, f->t2)); break;
        case OmegaCmp::Ge: lits.push_back(atom_ge(f->t1, f->t2)); break;
        case OmegaCmp::Le: lits.push_back(atom_ge(f->t2, f->t1)); break;
        case OmegaCmp::Gt: lits.push_back(atom_ge(OmegaTerm{f->t1.var, f->t1.offset}, OmegaTerm{f->t2.var, f->t2.offset + 1})); break;
        case OmegaCmp::Lt: lits.push_back(atom_ge(OmegaTerm{f->t2.var, f->t2.offset}, OmegaTerm{f->t1.var, f->t1.offset + 1})); break;
      }
      if (positive) return {{lits[0]}};
      return negate_lit(lits[0]);
    }
    case OmegaFormula::Kind::Not:
      return to_dnf(f->left, !positive);
    case OmegaFormula::Kind::And:
      return positive ? dnf_and(to_dnf(f->left, true), to_dnf(f->right, true))
                      : dnf_or(to_dnf(f->left, false), to_dnf(f->right, false));
    case OmegaFormula::Kind::Or:
      return positive ? dnf_or(to_dnf(f->left, true), to_dnf(f->right, true))
                      : dnf_and(to_dnf(f->left, false), to_dnf(f->right, false));
    case OmegaFormula::Kind::Implies:
      return positive ? dnf_or(to_dnf(f->left, false), to_dnf(f->right, true))
                      : dnf_and(to_dnf(f->left, true), to_dnf(f->right, false));
    default:
      throw error("qe: quantifier inside quantifier-free conversion");
  }
}

// Substitute x := y + d (y may be empty for a constant d >= 0).
inline OLit subst_lit(const OLit& l, const std::string& x, const std::string& y, long d) {
  switch (l.kind) {
    case OLit::Kind::GeVar:
      if (l.x == x && l.y == x) return l;  // cannot happen: folded earlier
      if (l.x == x) {
        if (y.empty()) return mk_le_const(l.y, d - l.c);
        return mk_ge_var(y, l.y, l.c - d);
      }
      if (l.y == x) {
        if (y.empty()) return mk_ge_const(l.x, d + l.c);
        return mk_ge_var(l.x, y, l.c + d);
      }
      return l;
    case OLit::Kind::EqVar:
      if (l.x == x) {
        if (y.empty()) return mk_eq_const(l.y, d - l.c);
        return mk_eq_var(y, l.y, l.c - d);
      }
      if (l.y == x) {
        if (y.empty()) return mk_eq_const(l.x, d + l.c);
        return mk_eq_var(l.x, y, l.c + d);
      }
      return l;
    case OLit::Kind::GeConst:
      if (l.x == x) {
        if (y.empty()) return d >= l.c ? olit_true() : olit_false();
        return mk_ge_const(y, l.c - d);
      }
      return l;
    case OLit::Kind::LeConst:
      if (l.x == x) {
        if (y.empty()) return d <= l.c ? olit_true() : olit_false();
        return mk_le_const(y, l.c - d);
      }
      return l;
    case OLit::Kind::EqConst:
      if (l.x == x) {
        if (y.empty()) return d == l.c ? olit_true() : olit_false();
        return mk_eq_const(y, l.c - d);
      }
      return l;
    default:
      return l;
  }
}

// Eliminate x from one conjunction of positive literals.
inline std::vector<OConj> eliminate_from_conj(OConj conj, const std::string& x) {
  // drop trivia, bail on contradiction
  OConj lits;
  for (const OLit& l : conj) {
    if (l.kind == OLit::Kind::False) return {};
    if (l.kind != OLit::Kind::True) lits.push_back(l);
  }

  // an equation pins x: substitute it away
  for (size_t i = 0; i < lits.size(); ++i) {
    const OLit& l = lits[i];
    std::string y;
    long d = 0;
    bool found = false, needs_floor = false;
    if (l.kind == OLit::Kind::EqVar && l.x == x && l.y != x) {
      y = l.y;
      d = l.c;
      found = true;
    } else if (l.kind == OLit::Kind::EqVar && l.y == x && l.x != x) {
      // x' = x + c pins x = x' - c, valid only where x' >= c
      y = l.x;
      d = -l.c;
      found = true;
      needs_floor = true;
    } else if (l.kind == OLit::Kind::EqConst && l.x == x) {
      y = "";
      d = l.c;
      found = true;
    }
    if (!found) continue;
    OConj out;
    if (needs_floor) out.push_back(mk_ge_const(y, -d));
    for (size_t j = 0; j < lits.size(); ++j) {
      if (j == i) continue;
      OLit s = subst_lit(lits[j], x, y, d);
      if (s.kind == OLit::Kind::False) return {};
      if (s.kind != OLit::Kind::True) out.push_back(s);
    }
    return {out};
  }

  // otherwise pair every lower bound with every upper bound
  std::vector<std::pair<std::string, long>> lowers{{"", 0}};  // x >= y + c (y empty: constant)
  std::vector<std::pair<std::string, long>> uppers;           // x <= z + c
  OConj rest;
  for (const OLit& l : lits) {
    if (l.kind == OLit::Kind::GeVar && l.x == x)
      lowers.push_back({l.y, l.c});
    else if (l.kind == OLit::Kind::GeVar && l.y == x)
      uppers.push_back({l.x, -l.c});
    else if (l.kind == OLit::Kind::GeConst && l.x == x)
      lowers.push_back({"", l.c});
    else if (l.kind == OLit::Kind::LeConst && l.x == x)
      uppers.push_back({"", l.c});
    else
      rest.push_back(l);
  }
  for (const auto& [ly, lc] : lowers)
    for (const auto& [uy, uc] : uppers) {
      OLit l = !ly.empty() && !uy.empty() ? mk_ge_var(uy, ly, lc - uc)
               : !ly.empty()              ? mk_le_const(ly, uc - lc)
               : !uy.empty()              ? mk_ge_const(uy, lc - uc)
                                          : (uc >= lc ? olit_true() : olit_false());
      if (l.kind == OLit::Kind::False) return {};
      if (l.kind != OLit::Kind::True) rest.push_back(l);
    }
  return {rest};
}

inline OmegaPtr lit_to_formula(const OLit& l) {
  switch (l.kind) {
    case OLit::Kind::GeVar:
      if (l.c >= 0) return o_atom(ot(l.x), OmegaCmp::Ge, ot(l.y, l.c));
      return o_not(o_atom(ot(l.y), OmegaCmp::Ge, ot(l.x, 1 - l.c)));
    case OLit::Kind::EqVar:
      return o_atom(ot(l.x), OmegaCmp::Eq, ot(l.y, l.c));
    case OLit::Kind::GeConst:
      return o_atom(ot(l.x), OmegaCmp::Ge, oconst(l.c));
    case OLit::Kind::EqConst:
      return o_atom(ot(l.x), OmegaCmp::Eq, oconst(l.c));
    case OLit::Kind::LeConst:
      return o_not(o_atom(ot(l.x), OmegaCmp::Ge, oconst(l.c + 1)));
    case OLit::Kind::True:
      return o_true();
    case OLit::Kind::False:
      return o_false();
  }
  throw error("qe: unreachable");
}

inline OmegaPtr dnf_to_formula(const ODnf& dnf) {
  OmegaPtr result;
  for (const OConj& conj : dnf) {
    OmegaPtr c;
    for (const OLit& l : conj) {
      OmegaPtr a = lit_to_formula(l);
      c = c ? o_and(std::move(c), std::move(a)) : std::move(a);
    }
    if (!c) c = o_true();
    result = result ? o_or(std::move(result), std::move(c)) : std::move(c);
  }
  return result ? result : o_false();
}

inline OmegaPtr qe_rec(const OmegaPtr& f) {
  switch (f->kind) {
    case OmegaFormula::Kind::Atom:
      return f;
    case OmegaFormula::Kind::Not:
      return o_not(qe_rec(f->left));
    case OmegaFormula::Kind::And:
      return o_and(qe_rec(f->left), qe_rec(f->right));
    case OmegaFormula::Kind::Or:
      return o_or(qe_rec(f->left), qe_rec(f->right));
    case OmegaFormula::Kind::Implies:
      return o_implies(qe_rec(f->left), qe_rec(f->right));
    case OmegaFormula::Kind::Forall:
      return o_not(qe_rec(o_exists(f->var, o_not(f->left))));
    case OmegaFormula::Kind::Exists: {
      OmegaPtr body = qe_rec(f->left);
      ODnf out;
      for (const OConj& conj : to_dnf(body, true))
        for (OConj& reduced : eliminate_from_conj(conj, f->var)) out.push_back(std::move(reduced));
      return dnf_to_formula(out);
    }
  }
  throw error("qe: unreachable");
}

}  // namespace detail

// Quantifier elimination over ⟨ω, ≤, suc, 0⟩ with built-in certification:
// the result is compared against the input by exhaustive evaluation on a box
// whose size dominates every constant, with quantifier ranges extended far
// enough to be exact on that box.
inline OmegaPtr qe(const OmegaPtr& f) {
  OmegaPtr result = detail::qe_rec(f);
  std::vector<std::string> vars = omega_free_vars(f);
  long maxc = std::max(omega_max_const(f), omega_max_const(result));
  long outer = 2 * maxc + 4;
  long inner = (maxc + 1) * (omega_quantifier_count(f) + 1);
  std::map<std::string, long> env;
  long total = 1;
  for (size_t i = 0; i < vars.size(); ++i) {
    total *= outer + 1;
    if (total > 2'000'000) throw error("qe: certification box too large");
  }
  std::vector<long> point(vars.size(), 0);
  for (long idx = 0; idx < total; ++idx) {
    for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = point[i];
    if (eval_omega(f, env, inner) != eval_omega(result, env, inner))
      throw std::logic_error("qe: certification failed");
    for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i) {
      if (++point[i] <= outer) break;
      point[i] = 0;
    }
  }
  return result;
}

}  // namespace astra
