#pragma once

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "astra/core.hpp"

namespace astra {

// Counting first-order formulas: relation atoms, equality, boolean
// connectives, and the quantifiers E (exists), A (forall), Einf (infinitely
// many witnesses), Emod k,m (number of witnesses is finite and congruent to
// k modulo m).
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Atom, Not, And, Or, Implies, Exists, Forall, ExistsInf, ExistsMod };

  Kind kind;
  std::string rel;                // Atom: relation name ("=" for equality)
  std::vector<std::string> args;  // Atom: argument variables
  FormulaPtr left, right;         // children (unary nodes use left only)
  std::string var;                // quantifiers: bound variable
  int k = 0, m = 0;               // ExistsMod parameters, k < m
};

inline FormulaPtr f_atom(std::string rel, std::vector<std::string> args) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Atom;
  f->rel = std::move(rel);
  f->args = std::move(args);
  return f;
}

inline FormulaPtr f_eq(std::string a, std::string b) {
  return f_atom("=", {std::move(a), std::move(b)});
}

inline FormulaPtr f_not(FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Not;
  f->left = std::move(a);
  return f;
}

inline FormulaPtr f_binary(Formula::Kind kind, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}

inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return f_binary(Formula::Kind::And, std::move(a), std::move(b)); }
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return f_binary(Formula::Kind::Or, std::move(a), std::move(b)); }
inline FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) { return f_binary(Formula::Kind::Implies, std::move(a), std::move(b)); }

inline FormulaPtr f_quant(Formula::Kind kind, std::string var, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->var = std::move(var);
  f->left = std::move(body);
  return f;
}

inline FormulaPtr f_exists(std::string var, FormulaPtr body) { return f_quant(Formula::Kind::Exists, std::move(var), std::move(body)); }
inline FormulaPtr f_forall(std::string var, FormulaPtr body) { return f_quant(Formula::Kind::Forall, std::move(var), std::move(body)); }
inline FormulaPtr f_exists_inf(std::string var, FormulaPtr body) { return f_quant(Formula::Kind::ExistsInf, std::move(var), std::move(body)); }

inline FormulaPtr f_exists_mod(int k, int m, std::string var, FormulaPtr body) {
  if (m < 1 || k < 0 || k >= m) throw error("formula: Emod requires 0 <= k < m");
  auto f = f_quant(Formula::Kind::ExistsMod, std::move(var), std::move(body));
  const_cast<Formula&>(*f).k = k;
  const_cast<Formula&>(*f).m = m;
  return f;
}

namespace detail {

inline void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind) {
    case Formula::Kind::Atom:
      for (const auto& a : f.args)
        if (!bound.count(a)) out.insert(a);
      break;
    case Formula::Kind::Not:
      collect_free(*f.left, bound, out);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect_free(*f.left, bound, out);
      collect_free(*f.right, bound, out);
      break;
    default:
      if (bound.count(f.var)) throw error("formula: variable '" + f.var + "' bound twice on one path");
      bound.insert(f.var);
      collect_free(*f.left, bound, out);
      bound.erase(f.var);
      break;
  }
}

}  // namespace detail

// Free variables, sorted by name. Also enforces well-namedness: no variable
// may be rebound inside the scope of its own binder.
inline std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  detail::collect_free(*f, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Text format. Grammar (whitespace-insensitive):
//   formula := quant | bool
//   quant   := ("E"|"A"|"Einf") ident "." formula
//            | "Emod" nat "," nat ident "." formula
//   bool    := bool ("&"|"|"|"->") bool | "!" bool | "(" formula ")" | atom
//   atom    := ident "(" ident {"," ident} ")" | ident "=" ident
// Precedence: ! > & > | > ->; quantifiers bind weakest (their body extends as
// far right as possible); embedded quantifiers must be parenthesized.

namespace detail {

struct FormulaParser {
  std::vector<std::string> toks;
  size_t pos = 0;

  explicit FormulaParser(const std::string& text) {
    size_t i = 0;
    auto isident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    while (i < text.size()) {
      char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (isident(c)) {
        size_t j = i;
        while (j < text.size() && isident(text[j])) ++j;
        toks.push_back(text.substr(i, j - i));
        i = j;
      } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
        toks.push_back("->");
        i += 2;
      } else if (std::string("().,=!&|").find(c) != std::string::npos) {
        toks.push_back(std::string(1, c));
        ++i;
      } else {
        throw error(std::string("formula parse: unexpected character '") + c + "'");
      }
    }
  }

  const std::string& peek(size_t ahead = 0) const {
    static const std::string kEnd;
    return pos + ahead < toks.size() ? toks[pos + ahead] : kEnd;
  }

  std::string take() {
    if (pos >= toks.size()) throw error("formula parse: unexpected end of input");
    return toks[pos++];
  }

  void expect(const std::string& t) {
    if (take() != t) throw error("formula parse: expected '" + t + "'");
  }

  static bool is_ident(const std::string& t) {
    if (t.empty() || !(std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_')) return false;
    return true;
  }

  static bool is_nat(const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  }

  int take_nat() {
    std::string t = take();
    if (!is_nat(t)) throw error("formula parse: expected a number, got '" + t + "'");
    return std::stoi(t);
  }

  std::string take_ident() {
    std::string t = take();
    if (!is_ident(t)) throw error("formula parse: expected an identifier, got '" + t + "'");
    return t;
  }

  FormulaPtr formula() {
    const std::string& t = peek();
    if ((t == "E" || t == "A" || t == "Einf") && is_ident(peek(1)) && peek(2) == ".") {
      take();
      std::string var = take_ident();
      expect(".");
      FormulaPtr body = formula();
      if (t == "E") return f_exists(var, body);
      if (t == "A") return f_forall(var, body);
      return f_exists_inf(var, body);
    }
    if (t == "Emod" && is_nat(peek(1))) {
      take();
      int k = take_nat();
      expect(",");
      int m = take_nat();
      std::string var = take_ident();
      expect(".");
      return f_exists_mod(k, m, var, formula());
    }
    return implies();
  }

  FormulaPtr implies() {
    FormulaPtr l = disj();
    if (peek() == "->") {
      take();
      return f_implies(l, implies());
    }
    return l;
  }

  FormulaPtr disj() {
    FormulaPtr l = conj();
    while (peek() == "|") {
      take();
      l = f_or(l, conj());
    }
    return l;
  }

  FormulaPtr conj() {
    FormulaPtr l = unary();
    while (peek() == "&") {
      take();
      l = f_and(l, unary());
    }
    return l;
  }

  FormulaPtr unary() {
    if (peek() == "!") {
      take();
      return f_not(unary());
    }
    if (peek() == "(") {
      take();
      FormulaPtr f = formula();
      expect(")");
      return f;
    }
    std::string name = take_ident();
    if (peek() == "=") {
      take();
      return f_eq(name, take_ident());
    }
    expect("(");
    std::vector<std::string> args{take_ident()};
    while (peek() == ",") {
      take();
      args.push_back(take_ident());
    }
    expect(")");
    return f_atom(name, args);
  }
};

inline int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Atom:
    case Formula::Kind::Not: return 4;
    case Formula::Kind::And: return 3;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::Implies: return 1;
    default: return 0;  // quantifiers
  }
}

inline void print_formula(const Formula& f, int parent_prec, std::string& out) {
  int prec = precedence(f.kind);
  bool parens = prec < parent_prec;
  if (parens) out += "(";
  switch (f.kind) {
    case Formula::Kind::Atom:
      if (f.rel == "=") {
        out += f.args[0] + " = " + f.args[1];
      } else {
        out += f.rel + "(";
        for (size_t i = 0; i < f.args.size(); ++i) {
          if (i) out += ",";
          out += f.args[i];
        }
        out += ")";
      }
      break;
    case Formula::Kind::Not:
      out += "!";
      print_formula(*f.left, 4, out);
      break;
    case Formula::Kind::And:
      print_formula(*f.left, 3, out);
      out += " & ";
      print_formula(*f.right, 3, out);
      break;
    case Formula::Kind::Or:
      print_formula(*f.left, 2, out);
      out += " | ";
      print_formula(*f.right, 2, out);
      break;
    case Formula::Kind::Implies:
      print_formula(*f.left, 2, out);  // right-associative
      out += " -> ";
      print_formula(*f.right, 1, out);
      break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
    case Formula::Kind::ExistsInf:
      out += f.kind == Formula::Kind::Exists ? "E " : f.kind == Formula::Kind::Forall ? "A " : "Einf ";
      out += f.var + " . ";
      print_formula(*f.left, 0, out);
      break;
    case Formula::Kind::ExistsMod:
      out += "Emod " + std::to_string(f.k) + "," + std::to_string(f.m) + " " + f.var + " . ";
      print_formula(*f.left, 0, out);
      break;
  }
  if (parens) out += ")";
}

}  // namespace detail

// Atoms in an equality position parse as equality regardless of relation
// names; equality inside atoms ("=" rel) prints back as "x = y".
inline FormulaPtr parse_formula(const std::string& text) {
  detail::FormulaParser p(text);
  FormulaPtr f = p.formula();
  if (p.pos != p.toks.size()) throw error("formula parse: trailing input after formula");
  free_vars(f);  // triggers well-namedness validation
  return f;
}

inline std::string format_formula(const FormulaPtr& f) {
  std::string out;
  detail::print_formula(*f, 0, out);
  return out;
}

}  // namespace astra
