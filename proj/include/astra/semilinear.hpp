#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "astra/presentation.hpp"

namespace astra {

namespace detail {

// Exact rational rank via Gaussian elimination.
inline int rational_rank(const std::vector<std::vector<mpz_class>>& columns) {
  if (columns.empty()) return 0;
  int rows = static_cast<int>(columns[0].size());
  int cols = static_cast<int>(columns.size());
  std::vector<std::vector<mpq_class>> m(rows, std::vector<mpq_class>(cols));
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m[i][j] = columns[j][i];
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int i = rank; i < rows; ++i)
      if (m[i][col] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int i = 0; i < rows; ++i) {
      if (i == rank || m[i][col] == 0) continue;
      mpq_class f = m[i][col] / m[rank][col];
      for (int j = col; j < cols; ++j) m[i][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

// x̄ ↦ offset + Σ x_i · column_i over the naturals.
class AffineMap {
 public:
  AffineMap(std::vector<mpz_class> offset, std::vector<std::vector<mpz_class>> columns)
      : offset_(std::move(offset)), columns_(std::move(columns)) {
    for (const mpz_class& v : offset_)
      if (v < 0) throw error("affine map: negative offset entry");
    for (const auto& c : columns_) {
      if (c.size() != offset_.size()) throw error("affine map: column dimension mismatch");
      for (const mpz_class& v : c)
        if (v < 0) throw error("affine map: negative column entry");
    }
  }

  int dim_in() const { return static_cast<int>(columns_.size()); }
  int dim_out() const { return static_cast<int>(offset_.size()); }
  const std::vector<mpz_class>& offset() const { return offset_; }
  const std::vector<std::vector<mpz_class>>& columns() const { return columns_; }

  std::vector<mpz_class> apply(const std::vector<mpz_class>& x) const {
    if (static_cast<int>(x.size()) != dim_in()) throw error("affine map: dimension mismatch");
    std::vector<mpz_class> out = offset_;
    for (int j = 0; j < dim_in(); ++j)
      for (int i = 0; i < dim_out(); ++i) out[i] += x[j] * columns_[j][i];
    return out;
  }

 private:
  std::vector<mpz_class> offset_;
  std::vector<std::vector<mpz_class>> columns_;
};

// The range of an affine map; simple iff the periods are linearly
// independent over the rationals (cached at construction, computed exactly).
class LinearSet {
 public:
  explicit LinearSet(AffineMap map)
      : map_(std::move(map)),
        simple_(detail::rational_rank(map_.columns()) == map_.dim_in()) {}

  const AffineMap& map() const { return map_; }
  bool simple() const { return simple_; }

 private:
  AffineMap map_;
  bool simple_;
};

inline bool is_simple(const LinearSet& l) { return l.simple(); }

// A finite union of linear sets. The disjointSimple attribute is supplied by
// the caller and validated on demand by the operations that rely on it.
class SemilinearSet {
 public:
  SemilinearSet(int n, std::vector<LinearSet> pieces, bool disjoint_simple)
      : n_(n), pieces_(std::move(pieces)), disjoint_simple_(disjoint_simple) {
    if (n_ < 1) throw error("semilinear set: dimension must be >= 1");
    for (const LinearSet& l : pieces_)
      if (l.map().dim_out() != n_) throw error("semilinear set: piece dimension mismatch");
  }

  int dim() const { return n_; }
  const std::vector<LinearSet>& pieces() const { return pieces_; }
  bool disjoint_simple() const { return disjoint_simple_; }

 private:
  int n_;
  std::vector<LinearSet> pieces_;
  bool disjoint_simple_;
};

namespace detail {

// Does offset + Σ y_j col_j = x have a nonnegative integer solution? Every
// y_j with a positive entry in row i is bounded by x_i; all-zero columns are
// irrelevant to membership.
inline bool affine_solvable(const AffineMap& m, std::vector<mpz_class> rest, int j) {
  int n = m.dim_out();
  if (j == m.dim_in()) {
    for (const mpz_class& v : rest)
      if (v != 0) return false;
    return true;
  }
  const std::vector<mpz_class>& col = m.columns()[j];
  mpz_class ub = -1;
  for (int i = 0; i < n; ++i)
    if (col[i] > 0) {
      mpz_class b = rest[i] / col[i];
      if (ub < 0 || b < ub) ub = b;
    }
  if (ub < 0) return affine_solvable(m, std::move(rest), j + 1);  // zero column
  for (mpz_class y = 0; y <= ub; ++y) {
    std::vector<mpz_class> next = rest;
    for (int i = 0; i < n; ++i) next[i] -= y * col[i];
    if (affine_solvable(m, std::move(next), j + 1)) return true;
  }
  return false;
}

inline bool linear_member(const LinearSet& l, const std::vector<mpz_class>& x) {
  std::vector<mpz_class> rest(x);
  for (int i = 0; i < l.map().dim_out(); ++i) {
    rest[i] -= l.map().offset()[i];
    if (rest[i] < 0) return false;
  }
  return affine_solvable(l.map(), std::move(rest), 0);
}

}  // namespace detail

inline bool member(const SemilinearSet& s, const std::vector<mpz_class>& x) {
  if (static_cast<int>(x.size()) != s.dim()) throw error("semilinear member: dimension mismatch");
  for (const LinearSet& l : s.pieces())
    if (detail::linear_member(l, x)) return true;
  return false;
}

// ψ_A(x̄) = number of ȳ ∈ ℕ^m with Aȳ = x̄; finite everywhere because no
// column is zero.
class VectorPartitionFn {
 public:
  explicit VectorPartitionFn(std::vector<std::vector<mpz_class>> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw error("vpf: empty matrix");
    int m = static_cast<int>(rows_[0].size());
    for (const auto& r : rows_) {
      if (static_cast<int>(r.size()) != m) throw error("vpf: ragged matrix");
      for (const mpz_class& v : r)
        if (v < 0) throw error("vpf: negative entry");
    }
    for (int j = 0; j < m; ++j) {
      bool zero = true;
      for (const auto& r : rows_) zero = zero && r[j] == 0;
      if (zero) throw error("vpf: zero column");
    }
  }

  int dim_in() const { return static_cast<int>(rows_[0].size()); }
  int dim_out() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::vector<mpz_class>>& rows() const { return rows_; }

 private:
  std::vector<std::vector<mpz_class>> rows_;
};

namespace detail {

inline mpz_class count_solutions(const VectorPartitionFn& psi, std::vector<mpz_class> rest, int j) {
  int n = psi.dim_out();
  if (j == psi.dim_in()) {
    for (const mpz_class& v : rest)
      if (v != 0) return 0;
    return 1;
  }
  mpz_class ub = -1;
  for (int i = 0; i < n; ++i)
    if (psi.rows()[i][j] > 0) {
      mpz_class b = rest[i] / psi.rows()[i][j];
      if (ub < 0 || b < ub) ub = b;
    }
  mpz_class total = 0;
  for (mpz_class y = 0; y <= ub; ++y) {
    std::vector<mpz_class> next = rest;
    for (int i = 0; i < n; ++i) next[i] -= y * psi.rows()[i][j];
    total += count_solutions(psi, std::move(next), j + 1);
  }
  return total;
}

}  // namespace detail

inline mpz_class vpf_eval(const VectorPartitionFn& psi, const std::vector<mpz_class>& x) {
  if (static_cast<int>(x.size()) != psi.dim_out()) throw error("vpf: dimension mismatch");
  for (const mpz_class& v : x)
    if (v < 0) return 0;
  return detail::count_solutions(psi, x, 0);
}

// g(x̄) = Σ ψ_{A_i}(x̄ + c̄_i). The shifts may be negative: out-degree
// extraction compensates piece offsets through them, and ψ is 0 whenever a
// shifted coordinate drops below zero.
struct GvpfTerm {
  VectorPartitionFn psi;
  std::vector<mpz_class> shift;
};

class GeneralizedVpf {
 public:
  GeneralizedVpf(int n, std::vector<GvpfTerm> terms) : n_(n), terms_(std::move(terms)) {
    if (n_ < 1) throw error("gvpf: dimension must be >= 1");
    for (const GvpfTerm& t : terms_)
      if (t.psi.dim_out() != n_ || static_cast<int>(t.shift.size()) != n_)
        throw error("gvpf: term dimension mismatch");
  }

  int dim() const { return n_; }
  const std::vector<GvpfTerm>& terms() const { return terms_; }

 private:
  int n_;
  std::vector<GvpfTerm> terms_;
};

inline mpz_class gvpf_eval(const GeneralizedVpf& g, const std::vector<mpz_class>& x) {
  if (static_cast<int>(x.size()) != g.dim()) throw error("gvpf: dimension mismatch");
  mpz_class total = 0;
  for (const GvpfTerm& t : g.terms()) {
    std::vector<mpz_class> z(x);
    for (int i = 0; i < g.dim(); ++i) z[i] += t.shift[i];
    total += vpf_eval(t.psi, z);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Translation to the additive theory of the naturals. Free variables are
// x0..x{n-1}; multipliers and carries are existentially quantified, with
// scalar multiplication unrolled by binary doubling. Auxiliary variables are
// kept local to each coordinate equation so evaluation never builds automata
// over more tracks than one equation needs.

namespace detail {

class PlusFormulaBuilder {
 public:
  std::string fresh() { return "w" + std::to_string(counter_++); }

  static FormulaPtr zero(const std::string& v) { return f_atom("plus", {v, v, v}); }

  // o = 1: nonzero and not the sum of two nonzeros
  static FormulaPtr one(const std::string& o) {
    std::string a = o + "a", b = o + "b";
    return f_and(f_not(zero(o)),
                 f_not(f_exists(a, f_exists(b, f_and(f_and(f_not(zero(a)), f_not(zero(b))),
                                                     f_atom("plus", {a, b, o}))))));
  }

  // Emits steps forcing result = c * base (c >= 1); each step defines one
  // fresh variable.
  std::string scaled(const mpz_class& c, const std::string& base) {
    std::string cur = base;
    for (int bit = static_cast<int>(mpz_sizeinbase(c.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
      std::string dbl = fresh();
      steps_.push_back({f_atom("plus", {cur, cur, dbl}), dbl});
      cur = dbl;
      if (mpz_tstbit(c.get_mpz_t(), bit)) {
        std::string inc = fresh();
        steps_.push_back({f_atom("plus", {cur, base, inc}), inc});
        cur = inc;
      }
    }
    return cur;
  }

  // target = constant + sum of c_j * mu_j. Each auxiliary variable is
  // defined by one step and used only later, so quantifying it right where
  // it is introduced keeps the track width of evaluation small.
  FormulaPtr equation(const std::string& target, const mpz_class& constant,
                      const std::vector<std::pair<mpz_class, std::string>>& terms) {
    steps_.clear();
    std::vector<std::string> summands;
    if (constant > 0) {
      std::string o = fresh();
      steps_.push_back({one(o), o});
      summands.push_back(constant == 1 ? o : scaled(constant, o));
    }
    for (const auto& [c, mu] : terms) summands.push_back(c == 1 ? mu : scaled(c, mu));
    if (summands.empty()) return zero(target);
    std::string cur = summands[0];
    for (size_t i = 1; i < summands.size(); ++i) {
      std::string nxt = i + 1 == summands.size() ? target : fresh();
      steps_.push_back({f_atom("plus", {cur, summands[i], nxt}), nxt == target ? "" : nxt});
      cur = nxt;
    }
    if (summands.size() == 1) steps_.push_back({f_eq(cur, target), ""});
    FormulaPtr body;
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
      body = body ? f_and(it->first, std::move(body)) : it->first;
      if (!it->second.empty()) body = f_exists(it->second, std::move(body));
    }
    steps_.clear();
    return body;
  }

 private:
  std::vector<std::pair<FormulaPtr, std::string>> steps_;
  int counter_ = 0;
};

}  // namespace detail

inline FormulaPtr to_formula(const SemilinearSet& s) {
  int n = s.dim();
  std::vector<std::string> xs;
  for (int i = 0; i < n; ++i) xs.push_back("x" + std::to_string(i));
  if (s.pieces().empty()) {
    FormulaPtr f = f_not(f_eq(xs[0], xs[0]));
    for (int i = 1; i < n; ++i) f = f_and(f, f_not(f_eq(xs[i], xs[i])));
    return f;
  }
  detail::PlusFormulaBuilder builder;
  FormulaPtr result;
  for (const LinearSet& l : s.pieces()) {
    const AffineMap& m = l.map();
    std::vector<std::string> mus;
    for (int j = 0; j < m.dim_in(); ++j) mus.push_back(builder.fresh());
    FormulaPtr piece;
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<mpz_class, std::string>> terms;
      for (int j = 0; j < m.dim_in(); ++j)
        if (m.columns()[j][i] > 0) terms.push_back({m.columns()[j][i], mus[j]});
      FormulaPtr eq = builder.equation(xs[i], m.offset()[i], terms);
      piece = piece ? f_and(piece, eq) : eq;
    }
    for (auto it = mus.rbegin(); it != mus.rend(); ++it) piece = f_exists(*it, piece);
    result = result ? f_or(result, piece) : piece;
  }
  return result;
}

namespace detail {

// Relation automaton of one piece over base-2 numerals, tracks x0..x{n-1}.
inline RegularRelation piece_relation(const Presentation& p, const SemilinearSet& s, int piece) {
  SemilinearSet single(s.dim(), {s.pieces()[piece]}, false);
  std::vector<std::string> xs;
  for (int i = 0; i < s.dim(); ++i) xs.push_back("x" + std::to_string(i));
  return arrange(p, eval(p, to_formula(single)), xs);
}

// All points of a piece with every multiplier at most `bound`.
inline void bounded_points(const LinearSet& l, int bound, int j, std::vector<mpz_class>& point,
                           std::vector<std::vector<mpz_class>>& out) {
  if (j == l.map().dim_in()) {
    out.push_back(point);
    return;
  }
  std::vector<mpz_class> saved = point;
  for (int y = 0; y <= bound; ++y) {
    bounded_points(l, bound, j + 1, point, out);
    for (int i = 0; i < l.map().dim_out(); ++i) point[i] += l.map().columns()[j][i];
  }
  point = saved;
}

}  // namespace detail

// Confirms the disjointSimple attribute: every piece simple, and pieces
// pairwise disjoint. Disjointness is probed by a bounded multiplier search
// and then established exactly on automata built through to_formula.
inline void validate_disjoint_simple(const SemilinearSet& s) {
  if (!s.disjoint_simple())
    throw error("semilinear: validation failure: set not marked disjointSimple");
  for (const LinearSet& l : s.pieces())
    if (!l.simple()) throw error("semilinear: validation failure: piece is not simple");
  int k = static_cast<int>(s.pieces().size());
  if (k <= 1) return;
  const int bound = 12;
  std::vector<std::vector<std::vector<mpz_class>>> pts(k);
  for (int i = 0; i < k; ++i) {
    std::vector<mpz_class> point = s.pieces()[i].map().offset();
    detail::bounded_points(s.pieces()[i], bound, 0, point, pts[i]);
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (const auto& x : pts[i])
        if (detail::linear_member(s.pieces()[j], x))
          throw error("semilinear: validation failure: pieces intersect");
  Presentation p = presburger(2);
  std::vector<RegularRelation> rels;
  for (int i = 0; i < k; ++i) rels.push_back(detail::piece_relation(p, s, i));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (!is_empty(intersect(rels[i], rels[j]).acceptor()))
        throw error("semilinear: validation failure: pieces intersect");
}

// Exact coefficients of the generating series Σ_{x̄ ∈ S} z̄^x̄ on the box
// {0..N}^n. After validation the set is a disjoint union of simple pieces,
// so every coefficient is the membership indicator; a coefficient above 1
// would contradict the validated attribute.
inline std::map<std::vector<long>, mpz_class> series_coeffs(const SemilinearSet& s, int N) {
  if (N < 0) throw error("series: negative bound");
  validate_disjoint_simple(s);
  int n = s.dim();
  long side = N + 1, total = 1;
  for (int i = 0; i < n; ++i) {
    total *= side;
    if (total > (1 << 24)) throw error("series: box too large");
  }
  std::vector<mpz_class> acc(total, 0);
  std::vector<long> coord(n);
  for (const LinearSet& l : s.pieces()) {
    const AffineMap& m = l.map();
    bool inside = true;
    for (int i = 0; i < n; ++i) inside = inside && m.offset()[i] <= N;
    if (!inside) continue;
    std::vector<mpz_class> dp(total, 0);
    long at = 0;
    for (int i = 0; i < n; ++i) at = at * side + m.offset()[i].get_si();
    dp[at] = 1;
    for (const auto& v : m.columns()) {
      bool fits = true;
      for (int i = 0; i < n; ++i) fits = fits && v[i] <= N;
      if (!fits) continue;
      long delta = 0;
      for (int i = 0; i < n; ++i) delta = delta * side + v[i].get_si();
      if (delta == 0) continue;
      std::fill(coord.begin(), coord.end(), 0);
      for (long idx = 0; idx < total; ++idx) {
        bool ok = true;
        for (int i = 0; i < n; ++i) ok = ok && coord[i] >= v[i];
        if (ok) dp[idx] += dp[idx - delta];
        for (int i = n - 1; i >= 0; --i) {
          if (++coord[i] <= N) break;
          coord[i] = 0;
        }
      }
    }
    for (long idx = 0; idx < total; ++idx) acc[idx] += dp[idx];
  }
  std::map<std::vector<long>, mpz_class> out;
  std::fill(coord.begin(), coord.end(), 0);
  for (long idx = 0; idx < total; ++idx) {
    if (acc[idx] > 1) throw std::logic_error("series: coefficient above 1 on a validated disjoint simple set");
    out.emplace(coord, acc[idx]);
    for (int i = n - 1; i >= 0; --i) {
      if (++coord[i] <= N) break;
      coord[i] = 0;
    }
  }
  return out;
}

// Out-degree of the relation S ⊆ ℕ^k × ℕ^l as a generalized vector partition
// function of the first k coordinates: per piece, solutions ȳ of
// c̄ = ū + A ȳ (A = periods restricted to the first k coordinates) are in
// bijection with the piece's points over c̄, pieces being simple and
// pairwise disjoint.
inline GeneralizedVpf outdegree_gvpf(const SemilinearSet& s, int k) {
  if (k < 1 || k >= s.dim()) throw error("outdegree: split out of range");
  validate_disjoint_simple(s);
  int l = s.dim() - k;
  std::vector<GvpfTerm> terms;
  for (const LinearSet& piece : s.pieces()) {
    const AffineMap& m = piece.map();
    std::vector<std::vector<mpz_class>> rows(k, std::vector<mpz_class>(m.dim_in(), 0));
    for (int j = 0; j < m.dim_in(); ++j) {
      bool first_zero = true, last_nonzero = false;
      for (int i = 0; i < k; ++i) first_zero = first_zero && m.columns()[j][i] == 0;
      for (int i = 0; i < l; ++i) last_nonzero = last_nonzero || m.columns()[j][k + i] != 0;
      if (first_zero && last_nonzero) throw error("infinite out-degree");
      for (int i = 0; i < k; ++i) rows[i][j] = m.columns()[j][i];
    }
    std::vector<mpz_class> shift(k);
    for (int i = 0; i < k; ++i) shift[i] = -m.offset()[i];
    terms.push_back({VectorPartitionFn(rows), std::move(shift)});
  }
  return GeneralizedVpf(k, std::move(terms));
}

}  // namespace astra
