#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatlift/error.hpp"

namespace flatlift {

using i64 = std::int64_t;

// The coefficient ring Z/p^k. q = p^k is kept small enough that matrix
// products of desk-scale dimensions cannot overflow 64-bit accumulators.
struct RingParams {
  i64 p = 0;
  int k = 0;
  i64 q = 0;

  static RingParams make(i64 p, int k) {
    require(p >= 2, Errc::bad_parameter, "p must be >= 2");
    require(k >= 1, Errc::bad_parameter, "k must be >= 1");
    for (i64 d = 2; d * d <= p; ++d)
      require(p % d != 0, Errc::bad_parameter, "p must be prime");
    i64 q = 1;
    for (int i = 0; i < k; ++i) {
      q *= p;
      require(q <= (1 << 20), Errc::bad_parameter, "p^k too large");
    }
    return RingParams{p, k, q};
  }

  i64 pow(int e) const {
    i64 r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
  }

  bool operator==(const RingParams&) const = default;
};

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<i64> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  i64& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  i64 at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  bool operator==(const Matrix&) const = default;
};

namespace detail {

inline i64 mod_reduce(i64 x, i64 m) {
  x %= m;
  return x < 0 ? x + m : x;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b, i64 q) {
  require(a.cols == b.rows, Errc::shape_mismatch, "matrix product shape");
  Matrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int t = 0; t < a.cols; ++t) {
      i64 v = a.at(i, t);
      if (v == 0) continue;
      for (int j = 0; j < b.cols; ++j) c.at(i, j) += v * b.at(t, j) % q;
    }
  for (auto& v : c.a) v = mod_reduce(v, q);
  return c;
}

inline int valuation(i64 a, const RingParams& r) {
  a = mod_reduce(a, r.q);
  if (a == 0) return r.k;
  int v = 0;
  while (a % r.p == 0) {
    a /= r.p;
    ++v;
  }
  return v;
}

inline i64 inverse_unit(i64 u, i64 q) {
  i64 t = 0, nt = 1, r = q, nr = mod_reduce(u, q);
  while (nr != 0) {
    i64 quo = r / nr;
    t -= quo * nt;
    std::swap(t, nt);
    r -= quo * nr;
    std::swap(r, nr);
  }
  require(r == 1, Errc::internal_check_failed, "not a unit");
  return mod_reduce(t, q);
}

}  // namespace detail

// A finitely generated module over Z/p^k, presented as a direct sum of cyclic
// factors Z/p^{e_i}. The empty list is the zero object; all e_i = k means free
// (= bijective in the pure exact structure).
struct ModObject {
  RingParams ring;
  std::vector<int> exponents;

  int rank() const { return static_cast<int>(exponents.size()); }
  bool is_zero() const { return exponents.empty(); }
  bool is_free() const {
    for (int e : exponents)
      if (e != ring.k) return false;
    return true;
  }
  i64 col_modulus(int j) const { return ring.pow(exponents[static_cast<std::size_t>(j)]); }

  bool operator==(const ModObject&) const = default;
};

inline ModObject make_object(const RingParams& ring, std::vector<int> exponents) {
  for (int e : exponents)
    require(e >= 1 && e <= ring.k, Errc::bad_parameter, "cyclic exponent out of range");
  return ModObject{ring, std::move(exponents)};
}

inline ModObject zero_object(const RingParams& ring) { return ModObject{ring, {}}; }

inline ModObject free_object(const RingParams& ring, int rank) {
  return ModObject{ring, std::vector<int>(static_cast<std::size_t>(rank), ring.k)};
}

inline ModObject direct_sum(const ModObject& x, const ModObject& y) {
  require(x.ring == y.ring, Errc::ring_mismatch, "direct sum over different rings");
  ModObject s = x;
  s.exponents.insert(s.exponents.end(), y.exponents.begin(), y.exponents.end());
  return s;
}

// Isomorphism of modules = equality of invariant factors.
inline bool isomorphic(const ModObject& x, const ModObject& y) {
  if (!(x.ring == y.ring)) return false;
  auto a = x.exponents, b = y.exponents;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

inline std::string describe(const ModObject& x) {
  if (x.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < x.exponents.size(); ++i) {
    if (i) s += " + ";
    s += "Z/" + std::to_string(x.ring.pow(x.exponents[i]));
  }
  return s;
}

// A module homomorphism, one row per source generator and one column per
// target generator; generators are row vectors acted on from the right, so
// compose(f, g) has matrix M_f * M_g. Entries are kept reduced modulo the
// target factor's modulus, which makes equality of morphisms plain equality.
class ModMorphism {
 public:
  ModMorphism() = default;

  ModMorphism(ModObject src, ModObject tgt, Matrix m)
      : src_(std::move(src)), tgt_(std::move(tgt)), m_(std::move(m)) {
    require(src_.ring == tgt_.ring, Errc::ring_mismatch, "morphism over different rings");
    require(m_.rows == src_.rank() && m_.cols == tgt_.rank(), Errc::shape_mismatch,
            "matrix shape does not match objects");
    for (int j = 0; j < m_.cols; ++j) {
      const i64 mod = tgt_.col_modulus(j);
      for (int i = 0; i < m_.rows; ++i) {
        i64& v = m_.at(i, j);
        v = detail::mod_reduce(v, mod);
        int need = tgt_.exponents[(std::size_t)j] - src_.exponents[(std::size_t)i];
        if (need > 0)
          require(v % src_.ring.pow(need) == 0, Errc::ill_typed,
                  "entry violates the divisibility constraint");
      }
    }
  }

  const ModObject& source() const { return src_; }
  const ModObject& target() const { return tgt_; }
  const Matrix& matrix() const { return m_; }
  const RingParams& ring() const { return src_.ring; }

  bool is_zero() const {
    for (i64 v : m_.a)
      if (v != 0) return false;
    return true;
  }

  bool operator==(const ModMorphism&) const = default;

 private:
  ModObject src_, tgt_;
  Matrix m_;
};

inline ModMorphism identity_morphism(const ModObject& x) {
  return ModMorphism(x, x, Matrix::identity(x.rank()));
}

inline ModMorphism zero_morphism(const ModObject& x, const ModObject& y) {
  return ModMorphism(x, y, Matrix(x.rank(), y.rank()));
}

inline ModMorphism compose(const ModMorphism& f, const ModMorphism& g) {
  require(f.target() == g.source(), Errc::shape_mismatch, "composition objects do not match");
  return ModMorphism(f.source(), g.target(), detail::mat_mul(f.matrix(), g.matrix(), f.ring().q));
}

inline ModMorphism add(const ModMorphism& f, const ModMorphism& g) {
  require(f.source() == g.source() && f.target() == g.target(), Errc::shape_mismatch,
          "sum of morphisms with different types");
  Matrix m = f.matrix();
  for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] += g.matrix().a[i];
  return ModMorphism(f.source(), f.target(), std::move(m));
}

inline ModMorphism negate(const ModMorphism& f) {
  Matrix m = f.matrix();
  for (auto& v : m.a) v = -v;
  return ModMorphism(f.source(), f.target(), std::move(m));
}

inline ModMorphism sub(const ModMorphism& f, const ModMorphism& g) { return add(f, negate(g)); }

inline ModMorphism scale(i64 c, const ModMorphism& f) {
  Matrix m = f.matrix();
  for (auto& v : m.a) v *= detail::mod_reduce(c, f.ring().q) % f.ring().q;
  return ModMorphism(f.source(), f.target(), std::move(m));
}

// Blockwise operations.
inline ModMorphism direct_sum(const ModMorphism& f, const ModMorphism& g) {
  require(f.ring() == g.ring(), Errc::ring_mismatch, "direct sum over different rings");
  ModObject src = direct_sum(f.source(), g.source());
  ModObject tgt = direct_sum(f.target(), g.target());
  Matrix m(src.rank(), tgt.rank());
  for (int i = 0; i < f.matrix().rows; ++i)
    for (int j = 0; j < f.matrix().cols; ++j) m.at(i, j) = f.matrix().at(i, j);
  for (int i = 0; i < g.matrix().rows; ++i)
    for (int j = 0; j < g.matrix().cols; ++j)
      m.at(f.matrix().rows + i, f.matrix().cols + j) = g.matrix().at(i, j);
  return ModMorphism(std::move(src), std::move(tgt), std::move(m));
}

// [f | g] : A -> B (+) C
inline ModMorphism hstack(const ModMorphism& f, const ModMorphism& g) {
  require(f.source() == g.source(), Errc::shape_mismatch, "hstack sources differ");
  ModObject tgt = direct_sum(f.target(), g.target());
  Matrix m(f.source().rank(), tgt.rank());
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < f.matrix().cols; ++j) m.at(i, j) = f.matrix().at(i, j);
    for (int j = 0; j < g.matrix().cols; ++j) m.at(i, f.matrix().cols + j) = g.matrix().at(i, j);
  }
  return ModMorphism(f.source(), std::move(tgt), std::move(m));
}

// [f over g] : A (+) B -> C
inline ModMorphism vstack(const ModMorphism& f, const ModMorphism& g) {
  require(f.target() == g.target(), Errc::shape_mismatch, "vstack targets differ");
  ModObject src = direct_sum(f.source(), g.source());
  Matrix m(src.rank(), f.target().rank());
  for (int j = 0; j < m.cols; ++j) {
    for (int i = 0; i < f.matrix().rows; ++i) m.at(i, j) = f.matrix().at(i, j);
    for (int i = 0; i < g.matrix().rows; ++i) m.at(f.matrix().rows + i, j) = g.matrix().at(i, j);
  }
  return ModMorphism(std::move(src), f.target(), std::move(m));
}

inline ModMorphism sum_injection(const std::vector<ModObject>& parts, std::size_t which) {
  require(which < parts.size(), Errc::bad_parameter, "injection index out of range");
  ModObject total = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) total = direct_sum(total, parts[i]);
  int offset = 0;
  for (std::size_t i = 0; i < which; ++i) offset += parts[i].rank();
  Matrix m(parts[which].rank(), total.rank());
  for (int i = 0; i < m.rows; ++i) m.at(i, offset + i) = 1;
  return ModMorphism(parts[which], std::move(total), std::move(m));
}

inline ModMorphism sum_projection(const std::vector<ModObject>& parts, std::size_t which) {
  require(which < parts.size(), Errc::bad_parameter, "projection index out of range");
  ModObject total = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) total = direct_sum(total, parts[i]);
  int offset = 0;
  for (std::size_t i = 0; i < which; ++i) offset += parts[i].rank();
  Matrix m(total.rank(), parts[which].rank());
  for (int j = 0; j < m.cols; ++j) m.at(offset + j, j) = 1;
  return ModMorphism(std::move(total), parts[which], std::move(m));
}

// ---------------------------------------------------------------------------
// Normal form and congruence solving over Z/p^k.

namespace detail {

struct SmithForm {
  std::vector<int> diag;  // ascending valuations; value k stands for a zero entry
  Matrix left, right;     // left * A * right = diag(p^diag), both invertible
};

inline SmithForm smith_form(Matrix w, const RingParams& ring) {
  const i64 q = ring.q;
  const int m = w.rows, n = w.cols;
  for (auto& v : w.a) v = mod_reduce(v, q);
  SmithForm out;
  out.left = Matrix::identity(m);
  out.right = Matrix::identity(n);
  const int steps = std::min(m, n);
  out.diag.assign(static_cast<std::size_t>(steps), ring.k);

  auto swap_rows = [&](Matrix& mat, int a, int b) {
    for (int j = 0; j < mat.cols; ++j) std::swap(mat.at(a, j), mat.at(b, j));
  };
  auto swap_cols = [&](Matrix& mat, int a, int b) {
    for (int i = 0; i < mat.rows; ++i) std::swap(mat.at(i, a), mat.at(i, b));
  };

  for (int t = 0; t < steps; ++t) {
    int bi = -1, bj = -1, bv = ring.k;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j) {
        int v = valuation(w.at(i, j), ring);
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
        }
      }
    if (bv >= ring.k) break;  // remaining block is zero
    if (bi != t) {
      swap_rows(w, t, bi);
      swap_rows(out.left, t, bi);
    }
    if (bj != t) {
      swap_cols(w, t, bj);
      swap_cols(out.right, t, bj);
    }
    const i64 pv = ring.pow(bv);
    const i64 unit = w.at(t, t) / pv;
    const i64 ui = inverse_unit(unit, q);
    for (int j = 0; j < n; ++j) w.at(t, j) = mod_reduce(w.at(t, j) * ui, q);
    for (int j = 0; j < m; ++j) out.left.at(t, j) = mod_reduce(out.left.at(t, j) * ui, q);
    for (int i = 0; i < m; ++i) {
      if (i == t || w.at(i, t) == 0) continue;
      const i64 f = w.at(i, t) / pv;
      for (int j = 0; j < n; ++j) w.at(i, j) = mod_reduce(w.at(i, j) - f * w.at(t, j), q);
      for (int j = 0; j < m; ++j)
        out.left.at(i, j) = mod_reduce(out.left.at(i, j) - f * out.left.at(t, j), q);
    }
    for (int j = 0; j < n; ++j) {
      if (j == t || w.at(t, j) == 0) continue;
      const i64 f = w.at(t, j) / pv;
      for (int i = 0; i < m; ++i) w.at(i, j) = mod_reduce(w.at(i, j) - f * w.at(i, t), q);
      for (int i = 0; i < n; ++i)
        out.right.at(i, j) = mod_reduce(out.right.at(i, j) - f * out.right.at(i, t), q);
    }
    out.diag[static_cast<std::size_t>(t)] = bv;
  }
  return out;
}

// Howell-style reduction of a generating set of a subgroup of (Z/q)^n: pivots
// in increasing coordinate order, each pivot a p-power, closure rows added so
// the rows with zeros before coordinate j generate the full stabilizer there.
inline std::vector<std::vector<i64>> howell_reduce(std::vector<std::vector<i64>> pool, int n,
                                                   const RingParams& ring) {
  const i64 q = ring.q;
  std::vector<std::vector<i64>> out;
  for (int j = 0; j < n; ++j) {
    int best = -1, bv = ring.k;
    for (std::size_t r = 0; r < pool.size(); ++r) {
      if (pool[r][static_cast<std::size_t>(j)] == 0) continue;
      int v = valuation(pool[r][static_cast<std::size_t>(j)], ring);
      if (v < bv) {
        bv = v;
        best = static_cast<int>(r);
      }
    }
    if (best < 0) continue;
    std::vector<i64> piv = pool[static_cast<std::size_t>(best)];
    pool.erase(pool.begin() + best);
    const i64 pv = ring.pow(bv);
    const i64 ui = inverse_unit(piv[static_cast<std::size_t>(j)] / pv, q);
    for (auto& v : piv) v = mod_reduce(v * ui, q);
    for (auto& row : pool) {
      if (row[static_cast<std::size_t>(j)] == 0) continue;
      const i64 f = row[static_cast<std::size_t>(j)] / pv;
      for (std::size_t c = 0; c < row.size(); ++c)
        row[c] = mod_reduce(row[c] - f * piv[c], q);
    }
    if (bv > 0) {
      std::vector<i64> closure(piv.size());
      const i64 mul = ring.pow(ring.k - bv);
      for (std::size_t c = 0; c < piv.size(); ++c) closure[c] = mod_reduce(piv[c] * mul, q);
      bool nonzero = false;
      for (i64 v : closure) nonzero = nonzero || v != 0;
      if (nonzero) pool.push_back(std::move(closure));
    }
    out.push_back(std::move(piv));
  }
  return out;
}

// Lexicographically smallest representative of x + <gens> with gens in Howell form.
inline std::vector<i64> coset_lex_min(std::vector<i64> x,
                                      const std::vector<std::vector<i64>>& howell,
                                      const RingParams& ring) {
  const i64 q = ring.q;
  for (auto& v : x) v = mod_reduce(v, q);
  for (const auto& piv : howell) {
    std::size_t j = 0;
    while (j < piv.size() && piv[j] == 0) ++j;
    if (j == piv.size()) continue;
    const i64 pv = piv[j];  // p^v by construction
    const i64 f = x[j] / pv;
    if (f == 0) continue;
    for (std::size_t c = 0; c < x.size(); ++c) x[c] = mod_reduce(x[c] - f * piv[c], q);
  }
  return x;
}

struct RowSolution {
  std::vector<i64> x;                       // lexicographically smallest solution
  std::vector<std::vector<i64>> kernel;     // Howell basis of the homogeneous solutions
};

// All solutions of x * A = b over Z/q, x a row vector of length A.rows.
inline std::optional<RowSolution> solve_row_system(const Matrix& A, const std::vector<i64>& b,
                                                   const RingParams& ring) {
  const int n = A.rows, m = A.cols;
  require(static_cast<int>(b.size()) == m, Errc::shape_mismatch, "rhs length mismatch");
  const i64 q = ring.q;

  Matrix At(m, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) At.at(j, i) = mod_reduce(A.at(i, j), q);
  SmithForm sf = smith_form(At, ring);

  std::vector<i64> c(static_cast<std::size_t>(m), 0);
  for (int t = 0; t < m; ++t) {
    i64 acc = 0;
    for (int j = 0; j < m; ++j) acc += sf.left.at(t, j) * mod_reduce(b[(std::size_t)j], q) % q;
    c[static_cast<std::size_t>(t)] = mod_reduce(acc, q);
  }

  const int steps = std::min(m, n);
  std::vector<i64> w(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<i64>> wgens;
  for (int t = 0; t < steps; ++t) {
    const int d = sf.diag[static_cast<std::size_t>(t)];
    const i64 ct = c[static_cast<std::size_t>(t)];
    if (d >= ring.k) {
      if (ct != 0) return std::nullopt;
      std::vector<i64> g(static_cast<std::size_t>(n), 0);
      g[static_cast<std::size_t>(t)] = 1;
      wgens.push_back(std::move(g));
      continue;
    }
    const i64 pd = ring.pow(d);
    if (ct % pd != 0) return std::nullopt;
    w[static_cast<std::size_t>(t)] = ct / pd;
    if (d > 0) {
      std::vector<i64> g(static_cast<std::size_t>(n), 0);
      g[static_cast<std::size_t>(t)] = ring.pow(ring.k - d);
      wgens.push_back(std::move(g));
    }
  }
  for (int t = steps; t < m; ++t)
    if (c[static_cast<std::size_t>(t)] != 0) return std::nullopt;
  for (int t = steps; t < n; ++t) {
    std::vector<i64> g(static_cast<std::size_t>(n), 0);
    g[static_cast<std::size_t>(t)] = 1;
    wgens.push_back(std::move(g));
  }

  // back to x coordinates: x^T = right * w
  auto apply_right = [&](const std::vector<i64>& v) {
    std::vector<i64> r(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      i64 acc = 0;
      for (int t = 0; t < n; ++t) acc += sf.right.at(i, t) * v[(std::size_t)t] % q;
      r[static_cast<std::size_t>(i)] = mod_reduce(acc, q);
    }
    return r;
  };

  RowSolution sol;
  std::vector<std::vector<i64>> gens;
  gens.reserve(wgens.size());
  for (const auto& g : wgens) gens.push_back(apply_right(g));
  sol.kernel = howell_reduce(std::move(gens), n, ring);
  sol.x = coset_lex_min(apply_right(w), sol.kernel, ring);
  return sol;
}

}  // namespace detail

// Diagonalization over Z/p^k: left * m * right = diag(p^{d_t}), valuations
// ascending, transforms invertible.
struct NormalForm {
  std::vector<int> diag_exponents;
  Matrix left_transform, right_transform;
};

inline NormalForm normal_form(const Matrix& m, const RingParams& ring) {
  auto sf = detail::smith_form(m, ring);
  return NormalForm{std::move(sf.diag), std::move(sf.left), std::move(sf.right)};
}

enum class SolveSide { through_source, through_target };

namespace detail {

struct TypedSystem {
  Matrix A;             // unknowns x system matrix, n x (#equations)
  std::vector<i64> b;
};

// One column of the unknown matrix at a time: unknown x (length nm) subject to
// per-target-modulus congruences plus divisibility typing, all lifted mod q.
inline void append_typing(TypedSystem& sys, int unknowns, const std::vector<int>& need,
                          const RingParams& ring) {
  for (int i = 0; i < unknowns; ++i) {
    if (need[static_cast<std::size_t>(i)] <= 0) continue;
    const int col = sys.A.cols;
    Matrix grown(sys.A.rows, col + 1);
    for (int r = 0; r < sys.A.rows; ++r)
      for (int c = 0; c < col; ++c) grown.at(r, c) = sys.A.at(r, c);
    grown.at(i, col) = ring.pow(ring.k - need[static_cast<std::size_t>(i)]);
    sys.A = std::move(grown);
    sys.b.push_back(0);
  }
}

}  // namespace detail

struct SolveOutcome {
  ModMorphism solution;
  bool unique = false;  // unique as a morphism
};

// through_source: find x with compose(f, x) = target (f: A->B, x: B->C).
// through_target: find x with compose(x, f) = target (f: B->C, x: A->B).
// Returns the solution with lexicographically smallest entries (row-major).
inline std::optional<SolveOutcome> solve_full(const ModMorphism& f, const ModMorphism& target,
                                              SolveSide side) {
  require(f.ring() == target.ring(), Errc::ring_mismatch, "solve over different rings");
  const RingParams& ring = f.ring();
  const i64 q = ring.q;

  if (side == SolveSide::through_source) {
    require(f.source() == target.source(), Errc::shape_mismatch, "solve sources differ");
    const ModObject& B = f.target();
    const ModObject& C = target.target();
    const int nB = B.rank(), nC = C.rank(), nA = f.source().rank();
    Matrix x(nB, nC);
    bool unique = true;
    for (int j = 0; j < nC; ++j) {
      const int gamma = C.exponents[static_cast<std::size_t>(j)];
      const i64 lift = ring.pow(ring.k - gamma);
      detail::TypedSystem sys;
      sys.A = Matrix(nB, nA);
      sys.b.assign(static_cast<std::size_t>(nA), 0);
      for (int a = 0; a < nA; ++a) {
        for (int i = 0; i < nB; ++i)
          sys.A.at(i, a) = detail::mod_reduce(f.matrix().at(a, i) * lift, q);
        sys.b[static_cast<std::size_t>(a)] =
            detail::mod_reduce(target.matrix().at(a, j) * lift, q);
      }
      std::vector<int> need(static_cast<std::size_t>(nB), 0);
      for (int i = 0; i < nB; ++i)
        need[static_cast<std::size_t>(i)] =
            std::max(0, gamma - B.exponents[static_cast<std::size_t>(i)]);
      detail::append_typing(sys, nB, need, ring);
      auto sol = detail::solve_row_system(sys.A, sys.b, ring);
      if (!sol) return std::nullopt;
      for (int i = 0; i < nB; ++i) x.at(i, j) = sol->x[static_cast<std::size_t>(i)];
      const i64 colmod = ring.pow(gamma);
      for (const auto& g : sol->kernel)
        for (i64 v : g)
          if (v % colmod != 0) unique = false;
    }
    return SolveOutcome{ModMorphism(B, C, std::move(x)), unique};
  }

  require(f.target() == target.target(), Errc::shape_mismatch, "solve targets differ");
  const ModObject& A = target.source();
  const ModObject& B = f.source();
  const ModObject& C = f.target();
  const int nA = A.rank(), nB = B.rank(), nC = C.rank();
  Matrix x(nA, nB);
  bool unique = true;
  for (int a = 0; a < nA; ++a) {
    detail::TypedSystem sys;
    sys.A = Matrix(nB, nC);
    sys.b.assign(static_cast<std::size_t>(nC), 0);
    for (int j = 0; j < nC; ++j) {
      const i64 lift = ring.pow(ring.k - C.exponents[static_cast<std::size_t>(j)]);
      for (int i = 0; i < nB; ++i)
        sys.A.at(i, j) = detail::mod_reduce(f.matrix().at(i, j) * lift, q);
      sys.b[static_cast<std::size_t>(j)] = detail::mod_reduce(target.matrix().at(a, j) * lift, q);
    }
    std::vector<int> need(static_cast<std::size_t>(nB), 0);
    for (int i = 0; i < nB; ++i)
      need[static_cast<std::size_t>(i)] = std::max(
          0, B.exponents[static_cast<std::size_t>(i)] - A.exponents[static_cast<std::size_t>(a)]);
    detail::append_typing(sys, nB, need, ring);
    auto sol = detail::solve_row_system(sys.A, sys.b, ring);
    if (!sol) return std::nullopt;
    for (int i = 0; i < nB; ++i) x.at(a, i) = sol->x[static_cast<std::size_t>(i)];
    for (const auto& g : sol->kernel)
      for (int i = 0; i < nB; ++i)
        if (g[static_cast<std::size_t>(i)] % ring.pow(B.exponents[static_cast<std::size_t>(i)]) !=
            0)
          unique = false;
  }
  return SolveOutcome{ModMorphism(A, B, std::move(x)), unique};
}

inline std::optional<ModMorphism> solve(const ModMorphism& f, const ModMorphism& target,
                                        SolveSide side) {
  auto r = solve_full(f, target, side);
  if (!r) return std::nullopt;
  return std::move(r->solution);
}

// Injectivity: the only element of the source killed by the matrix is zero.
inline bool is_mono(const ModMorphism& f) {
  const RingParams& ring = f.ring();
  const ModObject& X = f.source();
  const ModObject& Y = f.target();
  Matrix A(X.rank(), Y.rank());
  for (int j = 0; j < Y.rank(); ++j) {
    const i64 lift = ring.pow(ring.k - Y.exponents[static_cast<std::size_t>(j)]);
    for (int i = 0; i < X.rank(); ++i)
      A.at(i, j) = detail::mod_reduce(f.matrix().at(i, j) * lift, ring.q);
  }
  auto sol = detail::solve_row_system(A, std::vector<i64>(static_cast<std::size_t>(Y.rank()), 0),
                                      ring);
  sentinel(sol.has_value(), Errc::internal_check_failed, "homogeneous system unsolvable");
  for (const auto& g : sol->kernel)
    for (int i = 0; i < X.rank(); ++i)
      if (g[static_cast<std::size_t>(i)] % ring.pow(X.exponents[static_cast<std::size_t>(i)]) != 0)
        return false;
  return true;
}

struct CokernelResult {
  ModObject object;
  ModMorphism projection;
};

// Presentation of target/im(f): stack the matrix over the target's relation
// moduli, diagonalize, and read off the surviving cyclic factors.
inline CokernelResult cokernel(const ModMorphism& f) {
  const RingParams& ring = f.ring();
  const ModObject& Y = f.target();
  const int nX = f.source().rank(), nY = Y.rank();
  Matrix S(nX + nY, nY);
  for (int i = 0; i < nX; ++i)
    for (int j = 0; j < nY; ++j) S.at(i, j) = f.matrix().at(i, j);
  for (int j = 0; j < nY; ++j) S.at(nX + j, j) = Y.col_modulus(j) % ring.q;
  auto sf = detail::smith_form(S, ring);

  std::vector<int> exps;
  std::vector<int> keep;
  for (int t = 0; t < nY; ++t) {
    const int d = sf.diag[static_cast<std::size_t>(t)];
    if (d >= 1) {
      exps.push_back(std::min(d, ring.k));
      keep.push_back(t);
    }
  }
  ModObject C = make_object(ring, std::move(exps));
  Matrix proj(nY, C.rank());
  for (int j = 0; j < nY; ++j)
    for (std::size_t t = 0; t < keep.size(); ++t)
      proj.at(j, static_cast<int>(t)) = sf.right.at(j, keep[t]);
  ModMorphism projection(Y, C, std::move(proj));
  sentinel(compose(f, projection).is_zero(), Errc::internal_check_failed,
           "cokernel projection does not kill the image");
  return CokernelResult{std::move(C), std::move(projection)};
}

inline bool is_epi(const ModMorphism& f) { return cokernel(f).object.is_zero(); }

struct PushoutResult {
  ModObject object;
  ModMorphism from_left;   // L -> PO
  ModMorphism from_right;  // Y -> PO
};

// Pushout of f: W -> L and g: W -> Y, as the cokernel of (f | -g): W -> L (+) Y.
inline PushoutResult pushout(const ModMorphism& f, const ModMorphism& g) {
  require(f.source() == g.source(), Errc::shape_mismatch, "pushout legs have different sources");
  ModMorphism h = hstack(f, negate(g));
  auto ck = cokernel(h);
  std::vector<ModObject> parts = {f.target(), g.target()};
  PushoutResult out{ck.object, compose(sum_injection(parts, 0), ck.projection),
                    compose(sum_injection(parts, 1), ck.projection)};
  sentinel(compose(f, out.from_left) == compose(g, out.from_right), Errc::internal_check_failed,
           "pushout square does not commute");
  return out;
}

struct BijectiveEmbedding {
  ModObject bijective;   // one free summand per generator
  ModMorphism embedding;  // the diagonal p^{k - e_i} pure monomorphism
};

inline BijectiveEmbedding bijective_embedding(const ModObject& x) {
  ModObject N = free_object(x.ring, x.rank());
  Matrix m(x.rank(), x.rank());
  for (int i = 0; i < x.rank(); ++i)
    m.at(i, i) = x.ring.pow(x.ring.k - x.exponents[static_cast<std::size_t>(i)]);
  ModMorphism emb(x, N, std::move(m));
  return BijectiveEmbedding{std::move(N), std::move(emb)};
}

// A morphism is stably zero iff it factors through the canonical bijective
// embedding of its source; the factorization is returned as witness.
inline std::optional<ModMorphism> is_stably_zero(const ModMorphism& f) {
  auto be = bijective_embedding(f.source());
  return solve(be.embedding, f, SolveSide::through_source);
}

// ---------------------------------------------------------------------------
// Simultaneous linear systems in several unknown morphisms.

class MorphismSystem {
 public:
  explicit MorphismSystem(RingParams ring) : ring_(ring) {}

  int add_unknown(ModObject src, ModObject tgt) {
    Block b;
    b.src = std::move(src);
    b.tgt = std::move(tgt);
    b.offset = total_;
    total_ += b.src.rank() * b.tgt.rank();
    blocks_.push_back(std::move(b));
    return static_cast<int>(blocks_.size()) - 1;
  }

  struct Term {
    int block;
    ModMorphism left;   // into the block's source
    ModMorphism right;  // out of the block's target
    i64 sign = 1;
  };

  // sum of terms == rhs, as morphisms rhs.source() -> rhs.target()
  void add_equation(const std::vector<Term>& terms, const ModMorphism& rhs) {
    for (const auto& t : terms) {
      require(t.left.source() == rhs.source() && t.left.target() == blocks_[(std::size_t)t.block].src &&
                  t.right.source() == blocks_[(std::size_t)t.block].tgt &&
                  t.right.target() == rhs.target(),
              Errc::shape_mismatch, "equation term shape mismatch");
    }
    const int nx = rhs.source().rank(), ny = rhs.target().rank();
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y) {
        const int gamma = rhs.target().exponents[static_cast<std::size_t>(y)];
        const i64 lift = ring_.pow(ring_.k - gamma);
        std::vector<i64> col(static_cast<std::size_t>(total_), 0);
        for (const auto& t : terms) {
          const Block& b = blocks_[static_cast<std::size_t>(t.block)];
          for (int i = 0; i < b.src.rank(); ++i) {
            const i64 lv = t.left.matrix().at(x, i);
            if (lv == 0) continue;
            for (int j = 0; j < b.tgt.rank(); ++j) {
              const i64 rv = t.right.matrix().at(j, y);
              if (rv == 0) continue;
              std::size_t idx = static_cast<std::size_t>(b.offset + i * b.tgt.rank() + j);
              col[idx] = detail::mod_reduce(col[idx] + t.sign * (lv * rv % ring_.q) % ring_.q *
                                                           lift % ring_.q,
                                            ring_.q);
            }
          }
        }
        cols_.push_back(std::move(col));
        rhs_.push_back(detail::mod_reduce(rhs.matrix().at(x, y) * lift, ring_.q));
      }
  }

  std::optional<std::vector<ModMorphism>> solve() const {
    // typing constraints of every unknown entry, appended as extra columns
    Matrix A(total_, static_cast<int>(cols_.size()));
    for (std::size_t c = 0; c < cols_.size(); ++c)
      for (int r = 0; r < total_; ++r) A.at(r, static_cast<int>(c)) = cols_[c][(std::size_t)r];
    std::vector<i64> b = rhs_;
    std::vector<std::pair<int, i64>> typing;
    for (const auto& blk : blocks_)
      for (int i = 0; i < blk.src.rank(); ++i)
        for (int j = 0; j < blk.tgt.rank(); ++j) {
          int need = blk.tgt.exponents[static_cast<std::size_t>(j)] -
                     blk.src.exponents[static_cast<std::size_t>(i)];
          if (need > 0)
            typing.emplace_back(blk.offset + i * blk.tgt.rank() + j, ring_.pow(ring_.k - need));
        }
    if (!typing.empty()) {
      Matrix grown(total_, A.cols + static_cast<int>(typing.size()));
      for (int r = 0; r < total_; ++r)
        for (int c = 0; c < A.cols; ++c) grown.at(r, c) = A.at(r, c);
      for (std::size_t t = 0; t < typing.size(); ++t) {
        grown.at(typing[t].first, A.cols + static_cast<int>(t)) = typing[t].second;
        b.push_back(0);
      }
      A = std::move(grown);
    }
    auto sol = detail::solve_row_system(A, b, ring_);
    if (!sol) return std::nullopt;
    std::vector<ModMorphism> out;
    out.reserve(blocks_.size());
    for (const auto& blk : blocks_) {
      Matrix m(blk.src.rank(), blk.tgt.rank());
      for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
          m.at(i, j) = sol->x[static_cast<std::size_t>(blk.offset + i * m.cols + j)];
      out.emplace_back(blk.src, blk.tgt, std::move(m));
    }
    return out;
  }

 private:
  struct Block {
    ModObject src, tgt;
    int offset = 0;
  };
  RingParams ring_;
  std::vector<Block> blocks_;
  int total_ = 0;
  std::vector<std::vector<i64>> cols_;
  std::vector<i64> rhs_;
};

struct StableIsoWitness {
  ModMorphism inverse;   // g: Y -> X
  ModMorphism h_source;  // N_X -> X with compose(f, g) - id_X = compose(iota_X, h_source)
  ModMorphism h_target;  // N_Y -> Y with compose(g, f) - id_Y = compose(iota_Y, h_target)
};

namespace detail {

inline std::vector<int> nonfree_coords(const ModObject& x) {
  std::vector<int> out;
  for (int i = 0; i < x.rank(); ++i)
    if (x.exponents[static_cast<std::size_t>(i)] < x.ring.k) out.push_back(i);
  return out;
}

}  // namespace detail

// Decides invertibility in the stable category. Free summands carry no stable
// information, so the two-sided-inverse system is solved on the reduced parts
// and the witnesses are transported back.
inline std::optional<StableIsoWitness> stable_iso_witness(const ModMorphism& f) {
  const RingParams& ring = f.ring();
  const ModObject& X = f.source();
  const ModObject& Y = f.target();
  auto ix = detail::nonfree_coords(X);
  auto iy = detail::nonfree_coords(Y);
  std::vector<int> ex, ey;
  for (int i : ix) ex.push_back(X.exponents[static_cast<std::size_t>(i)]);
  for (int j : iy) ey.push_back(Y.exponents[static_cast<std::size_t>(j)]);
  ModObject Xr = make_object(ring, ex);
  ModObject Yr = make_object(ring, ey);
  Matrix fr(Xr.rank(), Yr.rank());
  for (std::size_t i = 0; i < ix.size(); ++i)
    for (std::size_t j = 0; j < iy.size(); ++j)
      fr.at(static_cast<int>(i), static_cast<int>(j)) = f.matrix().at(ix[i], iy[j]);
  ModMorphism f_red(Xr, Yr, std::move(fr));

  auto bx = bijective_embedding(Xr);
  auto by = bijective_embedding(Yr);
  MorphismSystem sys(ring);
  int G = sys.add_unknown(Yr, Xr);
  int H1 = sys.add_unknown(bx.bijective, Xr);
  int H2 = sys.add_unknown(by.bijective, Yr);
  sys.add_equation({{G, f_red, identity_morphism(Xr), +1},
                    {H1, bx.embedding, identity_morphism(Xr), -1}},
                   identity_morphism(Xr));
  sys.add_equation({{G, identity_morphism(Yr), f_red, +1},
                    {H2, by.embedding, identity_morphism(Yr), -1}},
                   identity_morphism(Yr));
  auto sol = sys.solve();
  if (!sol) return std::nullopt;

  Matrix gm(Y.rank(), X.rank());
  const Matrix& gr = (*sol)[static_cast<std::size_t>(G)].matrix();
  for (std::size_t j = 0; j < iy.size(); ++j)
    for (std::size_t i = 0; i < ix.size(); ++i)
      gm.at(iy[j], ix[i]) = gr.at(static_cast<int>(j), static_cast<int>(i));
  ModMorphism g(Y, X, std::move(gm));

  auto h1 = solve(bijective_embedding(X).embedding, sub(compose(f, g), identity_morphism(X)),
                  SolveSide::through_source);
  auto h2 = solve(bijective_embedding(Y).embedding, sub(compose(g, f), identity_morphism(Y)),
                  SolveSide::through_source);
  sentinel(h1.has_value() && h2.has_value(), Errc::internal_check_failed,
           "stable inverse defect did not factor");
  return StableIsoWitness{std::move(g), std::move(*h1), std::move(*h2)};
}

// ---------------------------------------------------------------------------
// Duality (used for the pure-epi statements by passing to the opposite).

inline ModObject dual_object(const ModObject& x) { return x; }

inline ModMorphism dual_morphism(const ModMorphism& f) {
  const ModObject& X = f.source();
  const ModObject& Y = f.target();
  Matrix m(Y.rank(), X.rank());
  for (int j = 0; j < Y.rank(); ++j)
    for (int i = 0; i < X.rank(); ++i) {
      const int e = X.exponents[static_cast<std::size_t>(i)];
      const int ft = Y.exponents[static_cast<std::size_t>(j)];
      const i64 v = f.matrix().at(i, j);
      m.at(j, i) = e >= ft ? v * X.ring.pow(e - ft) : v / X.ring.pow(ft - e);
    }
  return ModMorphism(Y, X, std::move(m));
}

}  // namespace flatlift
