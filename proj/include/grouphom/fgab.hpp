#pragma once

// Exact arithmetic for finitely generated abelian groups: canonical invariant
// data (free rank + per-prime exponent partitions), dense integer matrices,
// and Smith normal form over Z.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace grouphom {

// All matrix arithmetic is exact 64-bit with explicit overflow detection.
// Silent wraparound is forbidden; an overflow surfaces as this error.
class OverflowError : public std::runtime_error {
 public:
  explicit OverflowError(const char* op)
      : std::runtime_error(std::string("exact integer overflow in ") + op) {}
};

namespace checked {

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("add");
  return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("sub");
  return r;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("mul");
  return r;
}

inline std::int64_t neg(std::int64_t a) { return sub(0, a); }

inline std::int64_t pow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r = mul(r, base);
  return r;
}

}  // namespace checked

// ---------------------------------------------------------------------------
// IntMatrix

struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> entries;  // row-major, rows*cols

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c) {
    if (r < 0 || c < 0) throw std::invalid_argument("negative matrix dimension");
    entries.assign(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0);
  }
  IntMatrix(int r, int c, std::vector<std::int64_t> e)
      : rows(r), cols(c), entries(std::move(e)) {
    if (r < 0 || c < 0) throw std::invalid_argument("negative matrix dimension");
    if (entries.size() != static_cast<std::size_t>(r) * static_cast<std::size_t>(c))
      throw std::invalid_argument("entry count does not match rows*cols");
  }

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::int64_t& at(int i, int j) {
    return entries[static_cast<std::size_t>(i) * cols + j];
  }
  std::int64_t at(int i, int j) const {
    return entries[static_cast<std::size_t>(i) * cols + j];
  }

  bool operator==(const IntMatrix&) const = default;
};

inline IntMatrix mul(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matrix shape mismatch in mul");
  IntMatrix out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const std::int64_t aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols; ++j)
        out.at(i, j) = checked::add(out.at(i, j), checked::mul(aik, b.at(k, j)));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Smith normal form: d = u*a*v with u, v unimodular, d diagonal with
// d1 | d2 | ... , entries >= 0, trailing zeros last.

struct SmithResult {
  IntMatrix u, d, v;

  std::vector<std::int64_t> diagonal() const {
    std::vector<std::int64_t> out;
    const int n = std::min(d.rows, d.cols);
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(d.at(i, i));
    return out;
  }
};

namespace detail {

inline void row_axpy(IntMatrix& m, int dst, int src, std::int64_t f) {
  for (int j = 0; j < m.cols; ++j)
    m.at(dst, j) = checked::add(m.at(dst, j), checked::mul(f, m.at(src, j)));
}

inline void col_axpy(IntMatrix& m, int dst, int src, std::int64_t f) {
  for (int i = 0; i < m.rows; ++i)
    m.at(i, dst) = checked::add(m.at(i, dst), checked::mul(f, m.at(i, src)));
}

inline void row_swap(IntMatrix& m, int a, int b) {
  if (a == b) return;
  for (int j = 0; j < m.cols; ++j) std::swap(m.at(a, j), m.at(b, j));
}

inline void col_swap(IntMatrix& m, int a, int b) {
  if (a == b) return;
  for (int i = 0; i < m.rows; ++i) std::swap(m.at(i, a), m.at(i, b));
}

inline void row_negate(IntMatrix& m, int r) {
  for (int j = 0; j < m.cols; ++j) m.at(r, j) = checked::neg(m.at(r, j));
}

}  // namespace detail

inline SmithResult smith_normal_form(const IntMatrix& a) {
  SmithResult s{IntMatrix::identity(a.rows), a, IntMatrix::identity(a.cols)};
  IntMatrix& d = s.d;
  const int nmin = std::min(a.rows, a.cols);

  for (int t = 0; t < nmin; ++t) {
    for (;;) {
      // Smallest nonzero absolute value in the trailing submatrix becomes the
      // pivot; this bounds coefficient growth at the scale we work at.
      int pi = -1, pj = -1;
      std::int64_t best = 0;
      for (int i = t; i < d.rows; ++i)
        for (int j = t; j < d.cols; ++j) {
          const std::int64_t x = d.at(i, j);
          if (x == 0) continue;
          const std::int64_t ax = x < 0 ? checked::neg(x) : x;
          if (pi < 0 || ax < best) {
            best = ax;
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) {
        t = nmin;  // trailing submatrix is zero; done
        break;
      }
      detail::row_swap(d, t, pi);
      detail::row_swap(s.u, t, pi);
      detail::col_swap(d, t, pj);
      detail::col_swap(s.v, t, pj);

      bool residue = false;
      for (int i = t + 1; i < d.rows; ++i) {
        if (d.at(i, t) == 0) continue;
        const std::int64_t q = d.at(i, t) / d.at(t, t);
        if (q != 0) {
          detail::row_axpy(d, i, t, checked::neg(q));
          detail::row_axpy(s.u, i, t, checked::neg(q));
        }
        if (d.at(i, t) != 0) residue = true;
      }
      for (int j = t + 1; j < d.cols; ++j) {
        if (d.at(t, j) == 0) continue;
        const std::int64_t q = d.at(t, j) / d.at(t, t);
        if (q != 0) {
          detail::col_axpy(d, j, t, checked::neg(q));
          detail::col_axpy(s.v, j, t, checked::neg(q));
        }
        if (d.at(t, j) != 0) residue = true;
      }
      if (residue) continue;

      // Pivot must divide every trailing entry so the diagonal chain holds.
      int bi = -1, bj = -1;
      for (int i = t + 1; i < d.rows && bi < 0; ++i)
        for (int j = t + 1; j < d.cols; ++j)
          if (d.at(i, j) % d.at(t, t) != 0) {
            bi = i;
            bj = j;
            break;
          }
      if (bi >= 0) {
        detail::row_axpy(d, t, bi, 1);
        detail::row_axpy(s.u, t, bi, 1);
        continue;
      }
      break;
    }
    if (t >= nmin) break;
    if (d.at(t, t) < 0) {
      detail::row_negate(d, t);
      detail::row_negate(s.u, t);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// FgAbelian: canonical form C_{p1^e11} x ... x Z^free_rank with primes
// ascending and exponents non-increasing within each prime.

struct FgAbelian {
  struct PrimePart {
    std::int64_t prime = 0;
    std::vector<int> exponents;  // non-empty, positive, non-increasing

    bool operator==(const PrimePart&) const = default;
  };

  int free_rank = 0;
  std::vector<PrimePart> parts;  // ascending by prime

  bool operator==(const FgAbelian&) const = default;

  bool is_trivial() const { return free_rank == 0 && parts.empty(); }
  bool is_finite() const { return free_rank == 0; }

  // Number of cyclic torsion factors, the paper's d(G).
  int torsion_rank() const {
    int n = 0;
    for (const auto& p : parts) n += static_cast<int>(p.exponents.size());
    return n;
  }

  // nullptr when the prime does not occur in the torsion part.
  const PrimePart* part(std::int64_t prime) const {
    for (const auto& p : parts)
      if (p.prime == prime) return &p;
    return nullptr;
  }

  // Finite cyclic; the trivial group counts as cyclic.
  bool is_finite_cyclic() const {
    if (free_rank != 0) return false;
    for (const auto& p : parts)
      if (p.exponents.size() > 1) return false;
    return true;
  }

  bool is_infinite_cyclic() const { return free_rank == 1 && parts.empty(); }

  // Order of the torsion part.
  std::int64_t torsion_order() const {
    std::int64_t n = 1;
    for (const auto& p : parts)
      for (int e : p.exponents) n = checked::mul(n, checked::pow(p.prime, e));
    return n;
  }

  std::vector<std::int64_t> primes() const {
    std::vector<std::int64_t> out;
    out.reserve(parts.size());
    for (const auto& p : parts) out.push_back(p.prime);
    return out;
  }
};

// Structural validity of the canonical form; the factories below always
// produce canonical values, this is for property tests and loaded data.
inline bool is_canonical(const FgAbelian& g) {
  if (g.free_rank < 0) return false;
  std::int64_t prev_prime = 1;
  for (const auto& p : g.parts) {
    if (p.prime <= prev_prime) return false;
    prev_prime = p.prime;
    if (p.exponents.empty()) return false;
    int prev = INT32_MAX;
    for (int e : p.exponents) {
      if (e < 1 || e > prev) return false;
      prev = e;
    }
  }
  return true;
}

struct CyclicFactor {
  bool infinite = false;
  std::int64_t order = 1;  // meaningful only when finite

  static CyclicFactor inf() { return {true, 0}; }
  static CyclicFactor finite(std::int64_t n) { return {false, n}; }
};

// Canonicalize an arbitrary list of cyclic factors. C1 factors vanish and
// every finite order splits into its prime-power pieces.
inline FgAbelian normalize(std::span<const CyclicFactor> factors) {
  FgAbelian g;
  std::vector<std::pair<std::int64_t, int>> prime_powers;
  for (const CyclicFactor& f : factors) {
    if (f.infinite) {
      ++g.free_rank;
      continue;
    }
    if (f.order < 1) throw std::invalid_argument("cyclic factor order must be >= 1");
    std::int64_t n = f.order;
    for (std::int64_t p = 2; p * p <= n; ++p) {
      if (n % p != 0) continue;
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      prime_powers.emplace_back(p, e);
    }
    if (n > 1) prime_powers.emplace_back(n, 1);
  }
  std::sort(prime_powers.begin(), prime_powers.end());
  for (const auto& [p, e] : prime_powers) {
    if (g.parts.empty() || g.parts.back().prime != p)
      g.parts.push_back({p, {}});
    g.parts.back().exponents.push_back(e);
  }
  for (auto& part : g.parts)
    std::sort(part.exponents.begin(), part.exponents.end(), std::greater<int>());
  return g;
}

inline FgAbelian normalize(std::initializer_list<CyclicFactor> factors) {
  return normalize(std::span<const CyclicFactor>(factors.begin(), factors.size()));
}

// Z^n_gens modulo the row space of rels.
inline FgAbelian from_relations(int n_gens, const IntMatrix& rels) {
  if (n_gens < 1) throw std::invalid_argument("from_relations: n_gens must be positive");
  if (rels.cols != n_gens)
    throw std::invalid_argument("from_relations: relation width != generator count");
  const SmithResult s = smith_normal_form(rels);
  std::vector<CyclicFactor> factors;
  int rank = 0;
  for (std::int64_t di : s.diagonal())
    if (di != 0) {
      ++rank;
      factors.push_back(CyclicFactor::finite(di));
    }
  for (int i = rank; i < n_gens; ++i) factors.push_back(CyclicFactor::inf());
  return normalize(factors);
}

inline FgAbelian direct_product(const FgAbelian& a, const FgAbelian& b) {
  FgAbelian g;
  g.free_rank = a.free_rank + b.free_rank;
  std::size_t i = 0, j = 0;
  while (i < a.parts.size() || j < b.parts.size()) {
    if (j == b.parts.size() ||
        (i < a.parts.size() && a.parts[i].prime < b.parts[j].prime)) {
      g.parts.push_back(a.parts[i++]);
    } else if (i == a.parts.size() || b.parts[j].prime < a.parts[i].prime) {
      g.parts.push_back(b.parts[j++]);
    } else {
      FgAbelian::PrimePart merged{a.parts[i].prime, a.parts[i].exponents};
      merged.exponents.insert(merged.exponents.end(), b.parts[j].exponents.begin(),
                              b.parts[j].exponents.end());
      std::sort(merged.exponents.begin(), merged.exponents.end(), std::greater<int>());
      g.parts.push_back(std::move(merged));
      ++i;
      ++j;
    }
  }
  return g;
}

// Canonical forms are equal exactly when the groups are isomorphic.
inline bool is_isomorphic(const FgAbelian& a, const FgAbelian& b) { return a == b; }

struct GroupSummary {
  std::vector<std::pair<std::int64_t, std::int64_t>> prime_exponents;  // (p, p^e1)
  std::int64_t exponent = 1;  // exponent of the torsion part
  int torsion_rank = 0;
  int free_rank = 0;
};

inline GroupSummary summary(const FgAbelian& g) {
  GroupSummary s;
  s.free_rank = g.free_rank;
  s.torsion_rank = g.torsion_rank();
  for (const auto& p : g.parts) {
    const std::int64_t pe = checked::pow(p.prime, p.exponents.front());
    s.prime_exponents.emplace_back(p.prime, pe);
    s.exponent = checked::mul(s.exponent, pe);  // distinct primes, lcm = product
  }
  return s;
}

}  // namespace grouphom
