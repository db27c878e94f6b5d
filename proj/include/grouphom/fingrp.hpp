#pragma once

// Brute-force finite group engine on Cayley tables: validation, built-in
// families, subgroup and series computations, automorphism enumeration and
// the automorphism subgroups (C*, Aut_Y^X, L(G), L_n(G), G*, Var, k-pwi).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grouphom/fgab.hpp"

namespace grouphom {

inline constexpr int kDefaultMaxOrder = 64;  // automorphism search cost guard
inline constexpr int kHardOrderCap = 128;    // groups beyond this are out of scope

class GroupError : public std::runtime_error {
 public:
  enum class Code {
    kNoIdentity,
    kNotLatin,
    kNotAssociative,
    kBadParams,
    kUnknownFamily,
    kNotNormal,
    kNotAbelian,
    kNotSubgroup,
    kOrderBoundExceeded,
    kNotPGroup,
    kWrongClass,
  };

  GroupError(Code code, const std::string& what)
      : std::runtime_error(code_name(code) + (": " + what)), code_(code) {}

  Code code() const { return code_; }

  static std::string code_name(Code c) {
    switch (c) {
      case Code::kNoIdentity: return "NO_IDENTITY";
      case Code::kNotLatin: return "NOT_LATIN";
      case Code::kNotAssociative: return "NOT_ASSOCIATIVE";
      case Code::kBadParams: return "BAD_PARAMS";
      case Code::kUnknownFamily: return "UNKNOWN_FAMILY";
      case Code::kNotNormal: return "NOT_NORMAL";
      case Code::kNotAbelian: return "NOT_ABELIAN";
      case Code::kNotSubgroup: return "NOT_SUBGROUP";
      case Code::kOrderBoundExceeded: return "ORDER_BOUND_EXCEEDED";
      case Code::kNotPGroup: return "NOT_P_GROUP";
      case Code::kWrongClass: return "WRONG_CLASS";
    }
    return "GROUP_ERROR";
  }

 private:
  Code code_;
};

// ---------------------------------------------------------------------------
// FiniteGroup

struct FiniteGroup {
  int order = 0;
  std::vector<int> table;          // row-major order*order, identity at index 0
  std::string name;                // display label
  std::vector<std::string> names;  // optional element labels, size order or empty
  std::vector<int> inverse;        // precomputed by validate()
  std::vector<int> elem_order;     // precomputed by validate()

  int mul(int a, int b) const { return table[static_cast<std::size_t>(a) * order + b]; }
  int inv(int a) const { return inverse[a]; }
  int conj(int b, int x) const { return mul(mul(inv(b), x), b); }  // I_b(x)
  int comm(int a, int b) const {                                   // [a,b]
    return mul(mul(mul(inv(a), inv(b)), a), b);
  }
  int power(int a, std::int64_t e) const {
    int r = 0;
    std::int64_t k = e % elem_order[a];
    if (k < 0) k += elem_order[a];
    for (std::int64_t i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }
};

inline FiniteGroup validate(const std::vector<std::vector<int>>& table,
                            std::string name = {},
                            std::vector<std::string> labels = {}) {
  FiniteGroup g;
  g.order = static_cast<int>(table.size());
  const int n = g.order;
  if (n == 0) throw GroupError(GroupError::Code::kBadParams, "empty table");
  if (n > kHardOrderCap)
    throw GroupError(GroupError::Code::kBadParams,
                     "order " + std::to_string(n) + " exceeds cap " +
                         std::to_string(kHardOrderCap));
  g.table.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n)
      throw GroupError(GroupError::Code::kNotLatin, "table is not square");
    for (int v : row) {
      if (v < 0 || v >= n)
        throw GroupError(GroupError::Code::kNotLatin,
                         "entry " + std::to_string(v) + " out of range");
      g.table.push_back(v);
    }
  }
  for (int j = 0; j < n; ++j) {
    if (g.mul(0, j) != j || g.mul(j, 0) != j)
      throw GroupError(GroupError::Code::kNoIdentity,
                       "index 0 is not an identity at element " + std::to_string(j));
  }
  std::vector<char> seen(n);
  for (int i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int j = 0; j < n; ++j) {
      if (seen[g.mul(i, j)]++)
        throw GroupError(GroupError::Code::kNotLatin,
                         "row " + std::to_string(i) + " repeats value at column " +
                             std::to_string(j));
    }
    std::fill(seen.begin(), seen.end(), 0);
    for (int j = 0; j < n; ++j) {
      if (seen[g.mul(j, i)]++)
        throw GroupError(GroupError::Code::kNotLatin,
                         "column " + std::to_string(i) + " repeats value at row " +
                             std::to_string(j));
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
          throw GroupError(GroupError::Code::kNotAssociative,
                           "triple (" + std::to_string(a) + "," + std::to_string(b) +
                               "," + std::to_string(c) + ")");
  g.inverse.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.mul(a, b) == 0) {
        g.inverse[a] = b;
        break;
      }
  g.elem_order.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    int x = a, k = 1;
    while (x != 0) {
      x = g.mul(x, a);
      ++k;
    }
    g.elem_order[a] = k;
  }
  g.name = std::move(name);
  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw GroupError(GroupError::Code::kBadParams, "label count does not match order");
  g.names = std::move(labels);
  return g;
}

// ---------------------------------------------------------------------------
// Built-in families

namespace detail {

inline FiniteGroup from_index_op(int n, const std::string& name,
                                 int (*op)(int, int, int), int param) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = op(i, j, param);
  return validate(t, name);
}

inline int mod(int a, int m) {
  const int r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace detail

inline FiniteGroup make_cyclic(int n) {
  if (n < 1 || n > kHardOrderCap)
    throw GroupError(GroupError::Code::kBadParams, "cyclic order out of range");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return validate(t, "C" + std::to_string(n));
}

inline FiniteGroup make_direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const int n = a.order * b.order;
  if (n > kHardOrderCap)
    throw GroupError(GroupError::Code::kBadParams, "product order exceeds cap");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i1 = 0; i1 < a.order; ++i1)
    for (int j1 = 0; j1 < b.order; ++j1)
      for (int i2 = 0; i2 < a.order; ++i2)
        for (int j2 = 0; j2 < b.order; ++j2)
          t[i1 * b.order + j1][i2 * b.order + j2] =
              a.mul(i1, i2) * b.order + b.mul(j1, j2);
  return validate(t, a.name + "x" + b.name);
}

inline FiniteGroup make_abelian(const std::vector<int>& orders) {
  if (orders.empty())
    throw GroupError(GroupError::Code::kBadParams, "abelian needs at least one order");
  FiniteGroup g = make_cyclic(orders.front());
  for (std::size_t i = 1; i < orders.size(); ++i)
    g = make_direct_product(g, make_cyclic(orders[i]));
  return g;
}

// Order m = 2n: rotations r^i at 0..n-1, reflections s r^i at n..2n-1.
inline FiniteGroup make_dihedral(int m) {
  if (m < 2 || m % 2 != 0 || m > kHardOrderCap)
    throw GroupError(GroupError::Code::kBadParams, "dihedral order must be even >= 2");
  const int n = m / 2;
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const bool ri = i >= n, rj = j >= n;
      const int a = i % n, b = j % n;
      if (!ri && !rj) t[i][j] = (a + b) % n;
      else if (!ri && rj) t[i][j] = n + detail::mod(b - a, n);
      else if (ri && !rj) t[i][j] = n + (a + b) % n;
      else t[i][j] = detail::mod(b - a, n);
    }
  return validate(t, "D" + std::to_string(m));
}

// Generalized quaternion of order 2^k >= 8: a^i at 0..h-1, a^i b at h..2h-1,
// with b^2 = a^(h/2), b^-1 a b = a^-1.
inline FiniteGroup make_quaternion(int m) {
  if (m < 8 || (m & (m - 1)) != 0 || m > kHardOrderCap)
    throw GroupError(GroupError::Code::kBadParams,
                     "quaternion order must be a power of two >= 8");
  const int h = m / 2;
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const bool bi = i >= h, bj = j >= h;
      const int a = i % h, b = j % h;
      if (!bi && !bj) t[i][j] = (a + b) % h;
      else if (!bi && bj) t[i][j] = h + (a + b) % h;
      else if (bi && !bj) t[i][j] = h + detail::mod(a - b, h);
      else t[i][j] = detail::mod(a - b + h / 2, h);
    }
  return validate(t, "Q" + std::to_string(m));
}

// Order 2^k >= 16 with s r s = r^(2^(k-2) - 1).
inline FiniteGroup make_semidihedral(int m) {
  if (m < 16 || (m & (m - 1)) != 0 || m > kHardOrderCap)
    throw GroupError(GroupError::Code::kBadParams,
                     "semidihedral order must be a power of two >= 16");
  const int n = m / 2;
  const int w = n / 2 - 1;  // conjugation exponent
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const bool si = i >= n, sj = j >= n;
      const int a = i % n, b = j % n;
      if (!si && !sj) t[i][j] = (a + b) % n;
      else if (!si && sj) t[i][j] = n + detail::mod(w * a + b, n);
      else if (si && !sj) t[i][j] = n + (a + b) % n;
      else t[i][j] = detail::mod(w * a + b, n);
    }
  return validate(t, "SD" + std::to_string(m));
}

// Modular group of order p^k, k >= 3: a^(p^(k-1)) = b^p = 1 and
// b^-1 a b = a^(1 + p^(k-2)). Element (i,j) = a^i b^j at index j*p^(k-1) + i.
inline FiniteGroup make_modular(int p, int k) {
  if (p < 2 || k < 3)
    throw GroupError(GroupError::Code::kBadParams, "modular requires prime p, k >= 3");
  std::int64_t ord = 1;
  for (int i = 0; i < k; ++i) ord *= p;
  if (ord > kHardOrderCap)
    throw GroupError(GroupError::Code::kBadParams, "modular order exceeds cap");
  const int pk1 = static_cast<int>(ord) / p;  // p^(k-1)
  const int w = 1 + pk1 / p;                  // 1 + p^(k-2)
  const int n = static_cast<int>(ord);
  auto idx = [&](int i, int j) { return j * pk1 + i; };
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  // b^j a = a^(w^j) b^j, so (a^i b^j)(a^m b^l) = a^(i + m w^j) b^(j+l).
  std::vector<int> wpow(p);
  wpow[0] = 1;
  for (int j = 1; j < p; ++j)
    wpow[j] = static_cast<int>((static_cast<std::int64_t>(wpow[j - 1]) * w) % pk1);
  for (int i = 0; i < pk1; ++i)
    for (int j = 0; j < p; ++j)
      for (int m = 0; m < pk1; ++m)
        for (int l = 0; l < p; ++l)
          t[idx(i, j)][idx(m, l)] =
              idx(static_cast<int>((i + static_cast<std::int64_t>(m) * wpow[j]) % pk1),
                  (j + l) % p);
  return validate(t, "M" + std::to_string(n));
}

// Unitriangular 3x3 matrices over F_p, odd p: order p^3, exponent p, class 2.
inline FiniteGroup make_heisenberg(int p) {
  if (p < 3 || p % 2 == 0)
    throw GroupError(GroupError::Code::kBadParams, "heisenberg requires an odd prime");
  const std::int64_t ord = static_cast<std::int64_t>(p) * p * p;
  if (ord > kHardOrderCap)
    throw GroupError(GroupError::Code::kBadParams, "heisenberg order exceeds cap");
  const int n = static_cast<int>(ord);
  auto idx = [&](int x, int y, int z) { return (x * p + y) * p + z; };
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int x1 = 0; x1 < p; ++x1)
    for (int y1 = 0; y1 < p; ++y1)
      for (int z1 = 0; z1 < p; ++z1)
        for (int x2 = 0; x2 < p; ++x2)
          for (int y2 = 0; y2 < p; ++y2)
            for (int z2 = 0; z2 < p; ++z2)
              t[idx(x1, y1, z1)][idx(x2, y2, z2)] =
                  idx((x1 + x2) % p, (y1 + y2) % p, (z1 + z2 + x1 * y2) % p);
  return validate(t, "H" + std::to_string(n));
}

// ---------------------------------------------------------------------------
// Subgroups

struct Subgroup {
  const FiniteGroup* parent = nullptr;
  std::vector<int> members;  // sorted
  std::vector<char> mask;    // size parent->order

  int order() const { return static_cast<int>(members.size()); }
  bool contains(int x) const { return mask[x] != 0; }
  bool operator==(const Subgroup& o) const { return members == o.members; }
};

inline Subgroup make_subgroup_unchecked(const FiniteGroup& g, std::vector<int> members) {
  Subgroup s;
  s.parent = &g;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  s.members = std::move(members);
  s.mask.assign(g.order, 0);
  for (int x : s.members) s.mask[x] = 1;
  return s;
}

// Subgroup generated by gens; products alone close a finite subset.
inline Subgroup closure(const FiniteGroup& g, const std::vector<int>& gens) {
  std::vector<char> in(g.order, 0);
  std::vector<int> todo{0};
  in[0] = 1;
  for (int x : gens)
    if (!in[x]) {
      in[x] = 1;
      todo.push_back(x);
    }
  for (std::size_t i = 0; i < todo.size(); ++i)
    for (std::size_t j = 0; j < todo.size(); ++j) {
      const int p = g.mul(todo[i], todo[j]);
      if (!in[p]) {
        in[p] = 1;
        todo.push_back(p);
      }
    }
  std::vector<int> members;
  for (int x = 0; x < g.order; ++x)
    if (in[x]) members.push_back(x);
  return make_subgroup_unchecked(g, std::move(members));
}

inline Subgroup trivial_subgroup(const FiniteGroup& g) {
  return make_subgroup_unchecked(g, {0});
}

inline Subgroup full_subgroup(const FiniteGroup& g) {
  std::vector<int> all(g.order);
  std::iota(all.begin(), all.end(), 0);
  return make_subgroup_unchecked(g, std::move(all));
}

inline bool is_subgroup_set(const FiniteGroup& g, const Subgroup& s) {
  if (s.members.empty() || !s.contains(0)) return false;
  for (int a : s.members)
    for (int b : s.members)
      if (!s.contains(g.mul(a, b))) return false;
  return true;
}

inline Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  std::vector<int> out;
  for (int x : a.members)
    if (b.contains(x)) out.push_back(x);
  return make_subgroup_unchecked(*a.parent, std::move(out));
}

inline Subgroup center(const FiniteGroup& g) {
  std::vector<int> out;
  for (int z = 0; z < g.order; ++z) {
    bool central = true;
    for (int x = 0; x < g.order && central; ++x)
      if (g.mul(z, x) != g.mul(x, z)) central = false;
    if (central) out.push_back(z);
  }
  return make_subgroup_unchecked(g, std::move(out));
}

inline Subgroup commutator(const FiniteGroup& g, const Subgroup& s, const Subgroup& t) {
  std::vector<int> gens;
  for (int a : s.members)
    for (int b : t.members) gens.push_back(g.comm(a, b));
  return closure(g, gens);
}

inline Subgroup derived_subgroup(const FiniteGroup& g) {
  const Subgroup whole = full_subgroup(g);
  return commutator(g, whole, whole);
}

inline Subgroup product_subgroup(const FiniteGroup& g, const Subgroup& a,
                                 const Subgroup& b) {
  std::vector<int> gens(a.members);
  gens.insert(gens.end(), b.members.begin(), b.members.end());
  return closure(g, gens);
}

inline bool is_normal(const FiniteGroup& g, const Subgroup& n) {
  for (int x = 0; x < g.order; ++x)
    for (int m : n.members)
      if (!n.contains(g.conj(x, m))) return false;
  return true;
}

inline bool is_abelian(const FiniteGroup& g) {
  for (int a = 0; a < g.order; ++a)
    for (int b = a + 1; b < g.order; ++b)
      if (g.mul(a, b) != g.mul(b, a)) return false;
  return true;
}

inline std::optional<std::int64_t> p_group_prime(const FiniteGroup& g) {
  if (g.order == 1) return std::nullopt;
  std::int64_t p = 0;
  int n = g.order;
  for (std::int64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      p = q;
      break;
    }
  if (p == 0) p = n;
  while (n % p == 0) n = static_cast<int>(n / p);
  if (n != 1) return std::nullopt;
  return p;
}

inline std::int64_t exponent(const FiniteGroup& g) {
  std::int64_t e = 1;
  for (int x = 0; x < g.order; ++x) e = std::lcm<std::int64_t>(e, g.elem_order[x]);
  return e;
}

// ---------------------------------------------------------------------------
// Quotients and abelian structure

struct QuotientResult {
  FiniteGroup group;
  std::vector<int> coset_of;  // parent element -> coset index
};

inline QuotientResult quotient(const FiniteGroup& g, const Subgroup& n) {
  if (!is_normal(g, n))
    throw GroupError(GroupError::Code::kNotNormal, "quotient by a non-normal subgroup");
  std::vector<int> coset_of(g.order, -1);
  std::vector<int> reps;
  for (int x = 0; x < g.order; ++x) {
    if (coset_of[x] >= 0) continue;
    const int c = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int m : n.members) coset_of[g.mul(x, m)] = c;
  }
  const int q = static_cast<int>(reps.size());
  std::vector<std::vector<int>> t(q, std::vector<int>(q));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) t[i][j] = coset_of[g.mul(reps[i], reps[j])];
  QuotientResult out{validate(t, g.name.empty() ? "" : g.name + "/N"), std::move(coset_of)};
  return out;
}

// The subgroup as a group in its own right, members reindexed in sorted order.
inline FiniteGroup subgroup_as_group(const Subgroup& s) {
  const FiniteGroup& g = *s.parent;
  std::vector<int> pos(g.order, -1);
  for (std::size_t i = 0; i < s.members.size(); ++i) pos[s.members[i]] = static_cast<int>(i);
  const int n = s.order();
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int p = pos[g.mul(s.members[i], s.members[j])];
      if (p < 0)
        throw GroupError(GroupError::Code::kNotSubgroup, "member set is not closed");
      t[i][j] = p;
    }
  return validate(t, "");
}

// Canonical invariants of an abelian group by maximal-order cyclic factor
// peeling: an element of maximal order spans a direct factor, so its order is
// the next invariant factor and the quotient carries the rest.
inline FgAbelian abelian_invariants(const FiniteGroup& g) {
  if (!is_abelian(g))
    throw GroupError(GroupError::Code::kNotAbelian, "abelian_invariants");
  std::vector<CyclicFactor> factors;
  FiniteGroup q = g;
  while (q.order > 1) {
    int best = 1;
    for (int x = 1; x < q.order; ++x)
      if (q.elem_order[x] > q.elem_order[best]) best = x;
    factors.push_back(CyclicFactor::finite(q.elem_order[best]));
    q = quotient(q, closure(q, {best})).group;
  }
  return normalize(factors);
}

inline FgAbelian abelian_invariants(const Subgroup& s) {
  return abelian_invariants(subgroup_as_group(s));
}

// Quotient by the derived subgroup; invariants of the abelianization.
inline FgAbelian abelianized_invariants(const FiniteGroup& g) {
  if (is_abelian(g)) return abelian_invariants(g);
  return abelian_invariants(quotient(g, derived_subgroup(g)).group);
}

// ---------------------------------------------------------------------------
// Central series

inline std::vector<Subgroup> upper_central_series(const FiniteGroup& g) {
  std::vector<Subgroup> series{trivial_subgroup(g)};
  for (;;) {
    const Subgroup& zk = series.back();
    if (zk.order() == g.order) break;
    const QuotientResult q = quotient(g, zk);
    const Subgroup zq = center(q.group);
    std::vector<int> pre;
    for (int x = 0; x < g.order; ++x)
      if (zq.contains(q.coset_of[x])) pre.push_back(x);
    Subgroup next = make_subgroup_unchecked(g, std::move(pre));
    if (next.order() == zk.order()) break;  // stabilized below G: not nilpotent
    series.push_back(std::move(next));
  }
  return series;
}

inline std::vector<Subgroup> lower_central_series(const FiniteGroup& g) {
  std::vector<Subgroup> series{full_subgroup(g)};
  for (;;) {
    Subgroup next = commutator(g, series.back(), series.front());
    if (next.order() == series.back().order()) break;
    series.push_back(std::move(next));
  }
  return series;
}

inline std::optional<int> nilpotency_class(const FiniteGroup& g) {
  const auto series = upper_central_series(g);
  if (series.back().order() != g.order) return std::nullopt;
  return static_cast<int>(series.size()) - 1;
}

// gamma_k(G) with gamma_1 = G; beyond the series length it stays at the tail.
inline Subgroup lower_central_term(const FiniteGroup& g, int k) {
  if (k < 1) throw GroupError(GroupError::Code::kBadParams, "gamma_k needs k >= 1");
  const auto series = lower_central_series(g);
  const std::size_t i = std::min<std::size_t>(k - 1, series.size() - 1);
  return series[i];
}

inline Subgroup upper_central_term(const FiniteGroup& g, int k) {
  if (k < 0) throw GroupError(GroupError::Code::kBadParams, "zeta_k needs k >= 0");
  const auto series = upper_central_series(g);
  const std::size_t i = std::min<std::size_t>(k, series.size() - 1);
  return series[i];
}

// ---------------------------------------------------------------------------
// Automorphisms

struct Automorphism {
  std::vector<int> image;

  int operator()(int x) const { return image[x]; }
  bool operator==(const Automorphism&) const = default;
  bool operator<(const Automorphism& o) const { return image < o.image; }
};

inline Automorphism identity_automorphism(int n) {
  Automorphism a;
  a.image.resize(n);
  std::iota(a.image.begin(), a.image.end(), 0);
  return a;
}

// (a*b)(x) = a(b(x))
inline Automorphism compose(const Automorphism& a, const Automorphism& b) {
  Automorphism c;
  c.image.resize(a.image.size());
  for (std::size_t x = 0; x < c.image.size(); ++x) c.image[x] = a.image[b.image[x]];
  return c;
}

// Greedy generating set, largest element order first, smallest index on ties.
inline std::vector<int> greedy_generators(const FiniteGroup& g) {
  std::vector<int> gens;
  Subgroup h = trivial_subgroup(g);
  while (h.order() < g.order) {
    int best = -1;
    for (int x = 0; x < g.order; ++x)
      if (!h.contains(x) && (best < 0 || g.elem_order[x] > g.elem_order[best])) best = x;
    gens.push_back(best);
    std::vector<int> with(h.members);
    with.push_back(best);
    h = closure(g, with);
  }
  return gens;
}

namespace detail {

// Elements of <gens[0..upto]> in discovery order, each recorded as
// parent * gens[slot] so candidate images extend to the whole chart.
struct GenChart {
  std::vector<int> gens;
  std::vector<int> elems;                     // discovery order, elems[0] = 0
  std::vector<std::pair<int, int>> parent;    // element -> (parent, slot), identity (-1,-1)
  std::vector<int> level_end;                 // elems prefix size per level
};

inline GenChart build_chart(const FiniteGroup& g, const std::vector<int>& gens) {
  GenChart c;
  c.gens = gens;
  c.parent.assign(g.order, {-1, -1});
  std::vector<char> in(g.order, 0);
  c.elems.push_back(0);
  in[0] = 1;
  for (std::size_t level = 0; level < gens.size(); ++level) {
    for (std::size_t i = 0; i < c.elems.size(); ++i) {
      for (std::size_t s = 0; s <= level; ++s) {
        const int y = g.mul(c.elems[i], gens[s]);
        if (!in[y]) {
          in[y] = 1;
          c.parent[y] = {c.elems[i], static_cast<int>(s)};
          c.elems.push_back(y);
        }
      }
    }
    c.level_end.push_back(static_cast<int>(c.elems.size()));
  }
  return c;
}

// Backtracking over generator images; hom_check verifies partial maps level
// by level, inject toggles the bijectivity requirement (automorphisms) off
// for plain homomorphism enumeration.
template <typename Target, typename Leaf>
void search_maps(const FiniteGroup& a, const GenChart& chart, const Target& b,
                 const std::vector<std::vector<int>>& candidates, bool inject,
                 Leaf&& on_leaf) {
  const int levels = static_cast<int>(chart.gens.size());
  std::vector<int> phi(a.order, -1);
  std::vector<int> images(levels, -1);

  auto extend_and_check = [&](int level) -> bool {
    const int begin = level == 0 ? 1 : chart.level_end[level - 1];
    const int end = chart.level_end[level];
    for (int i = begin; i < end; ++i) {
      const int x = chart.elems[i];
      const auto [px, slot] = chart.parent[x];
      phi[x] = b.mul(phi[px], images[slot]);
    }
    if (inject) {
      // New values must be fresh.
      for (int i = begin; i < end; ++i) {
        const int v = phi[chart.elems[i]];
        for (int j = 0; j < i; ++j)
          if (phi[chart.elems[j]] == v) return false;
      }
    }
    // Homomorphism property on all pairs touching a new element.
    for (int i = 0; i < end; ++i) {
      const int x = chart.elems[i];
      for (int j = begin; j < end; ++j) {
        const int y = chart.elems[j];
        if (phi[a.mul(x, y)] != b.mul(phi[x], phi[y])) return false;
        if (phi[a.mul(y, x)] != b.mul(phi[y], phi[x])) return false;
      }
    }
    return true;
  };

  auto rec = [&](auto&& self, int level) -> void {
    if (level == levels) {
      on_leaf(images, phi);
      return;
    }
    for (int u : candidates[level]) {
      images[level] = u;
      if (extend_and_check(level)) self(self, level + 1);
    }
    images[level] = -1;
  };
  phi[0] = 0;
  if (levels == 0) {
    on_leaf(images, phi);
    return;
  }
  rec(rec, 0);
}

}  // namespace detail

// Complete duplicate-free automorphism list in lexicographic image order.
inline std::vector<Automorphism> automorphism_group(const FiniteGroup& g,
                                                    int max_order = kDefaultMaxOrder) {
  if (g.order > max_order)
    throw GroupError(GroupError::Code::kOrderBoundExceeded,
                     "order " + std::to_string(g.order) + " exceeds bound " +
                         std::to_string(max_order));
  const std::vector<int> gens = greedy_generators(g);
  const detail::GenChart chart = detail::build_chart(g, gens);
  std::vector<std::vector<int>> candidates(gens.size());
  for (std::size_t s = 0; s < gens.size(); ++s)
    for (int u = 0; u < g.order; ++u)
      if (g.elem_order[u] == g.elem_order[gens[s]]) candidates[s].push_back(u);

  std::vector<Automorphism> out;
  detail::search_maps(g, chart, g, candidates, /*inject=*/true,
                      [&](const std::vector<int>&, const std::vector<int>& phi) {
                        out.push_back(Automorphism{phi});
                      });
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Automorphism> inner_automorphisms(const FiniteGroup& g) {
  std::vector<Automorphism> out;
  out.reserve(g.order);
  for (int b = 0; b < g.order; ++b) {
    Automorphism a;
    a.image.resize(g.order);
    for (int x = 0; x < g.order; ++x) a.image[x] = g.conj(b, x);
    out.push_back(std::move(a));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Aut_Y^X(G): automorphisms centralizing G/X and fixing Y pointwise.
inline std::vector<Automorphism> aut_xy(const FiniteGroup& g,
                                        const std::vector<Automorphism>& auts,
                                        const Subgroup& x, const Subgroup& y) {
  std::vector<Automorphism> out;
  for (const Automorphism& a : auts) {
    bool ok = true;
    for (int e = 0; e < g.order && ok; ++e)
      if (!x.contains(g.mul(g.inv(e), a(e)))) ok = false;
    for (int e : y.members) {
      if (!ok) break;
      if (a(e) != e) ok = false;
    }
    if (ok) out.push_back(a);
  }
  return out;
}

inline std::vector<Automorphism> aut_xy(const FiniteGroup& g, const Subgroup& x,
                                        const Subgroup& y,
                                        int max_order = kDefaultMaxOrder) {
  return aut_xy(g, automorphism_group(g, max_order), x, y);
}

inline Subgroup absolute_center(const FiniteGroup& g,
                                const std::vector<Automorphism>& auts) {
  std::vector<int> out;
  for (int e = 0; e < g.order; ++e) {
    bool fixed = true;
    for (const Automorphism& a : auts)
      if (a(e) != e) {
        fixed = false;
        break;
      }
    if (fixed) out.push_back(e);
  }
  return make_subgroup_unchecked(g, std::move(out));
}

// L_n(G): autocommutator analogue of the upper central series,
// L_n = {g : [g, alpha] in L_{n-1} for all alpha}.
inline Subgroup autocenter_series(const FiniteGroup& g,
                                  const std::vector<Automorphism>& auts, int n) {
  if (n < 1) throw GroupError(GroupError::Code::kBadParams, "L_n needs n >= 1");
  Subgroup ln = trivial_subgroup(g);
  for (int step = 0; step < n; ++step) {
    std::vector<int> next;
    for (int e = 0; e < g.order; ++e) {
      bool ok = true;
      for (const Automorphism& a : auts)
        if (!ln.contains(g.mul(g.inv(e), a(e)))) {
          ok = false;
          break;
        }
      if (ok) next.push_back(e);
    }
    ln = make_subgroup_unchecked(g, std::move(next));
    if (!is_subgroup_set(g, ln))
      throw GroupError(GroupError::Code::kNotSubgroup, "L_n set failed closure");
  }
  return ln;
}

inline Subgroup autocommutator_subgroup(const FiniteGroup& g,
                                        const std::vector<Automorphism>& auts) {
  std::vector<int> gens;
  for (int e = 0; e < g.order; ++e)
    for (const Automorphism& a : auts) gens.push_back(g.mul(g.inv(e), a(e)));
  return closure(g, gens);
}

// Autocentral automorphisms: [g, alpha] lands in the absolute center.
inline std::vector<Automorphism> var_group(const FiniteGroup& g,
                                           const std::vector<Automorphism>& auts) {
  const Subgroup l = absolute_center(g, auts);
  std::vector<Automorphism> out;
  for (const Automorphism& a : auts) {
    bool ok = true;
    for (int e = 0; e < g.order && ok; ++e)
      if (!l.contains(g.mul(g.inv(e), a(e)))) ok = false;
    if (ok) out.push_back(a);
  }
  return out;
}

// gamma_k-pointwise inner: every alpha(x) is an x-conjugate by gamma_k(G).
inline std::vector<Automorphism> kpwi_group(const FiniteGroup& g,
                                            const std::vector<Automorphism>& auts,
                                            int k) {
  const Subgroup h = lower_central_term(g, k);
  std::vector<std::vector<char>> conj_set(g.order, std::vector<char>(g.order, 0));
  for (int x = 0; x < g.order; ++x)
    for (int hh : h.members) conj_set[x][g.conj(hh, x)] = 1;
  std::vector<Automorphism> out;
  for (const Automorphism& a : auts) {
    bool ok = true;
    for (int x = 0; x < g.order && ok; ++x)
      if (!conj_set[x][a(x)]) ok = false;
    if (ok) out.push_back(a);
  }
  return out;
}

// The automorphism set as a group under composition; identity is index 0
// because the identity map is lexicographically least.
inline FiniteGroup aut_set_to_group(const std::vector<Automorphism>& auts,
                                    const std::string& name = {}) {
  std::vector<Automorphism> sorted(auts);
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(sorted.size());
  auto index_of = [&](const Automorphism& a) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), a);
    if (it == sorted.end() || !(*it == a))
      throw GroupError(GroupError::Code::kNotSubgroup,
                       "automorphism set not closed under composition");
    return static_cast<int>(it - sorted.begin());
  };
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = index_of(compose(sorted[i], sorted[j]));
  return validate(t, name);
}

// ---------------------------------------------------------------------------
// Brute-force Hom between abelian Cayley groups (independent of homfun).

struct HomBruteforce {
  std::int64_t count = 0;
  FgAbelian invariants;
};

inline HomBruteforce hom_bruteforce(const FiniteGroup& a, const FiniteGroup& b,
                                    int max_order = kDefaultMaxOrder) {
  if (!is_abelian(a) || !is_abelian(b))
    throw GroupError(GroupError::Code::kNotAbelian, "hom_bruteforce");
  if (a.order > max_order)
    throw GroupError(GroupError::Code::kOrderBoundExceeded,
                     "hom_bruteforce source exceeds bound");
  const std::vector<int> gens = greedy_generators(a);
  const detail::GenChart chart = detail::build_chart(a, gens);
  std::vector<std::vector<int>> candidates(gens.size());
  for (std::size_t s = 0; s < gens.size(); ++s)
    for (int u = 0; u < b.order; ++u)
      if (a.elem_order[gens[s]] % b.elem_order[u] == 0) candidates[s].push_back(u);

  // Homs are recorded as generator-image tuples; pointwise products act
  // componentwise on tuples, so torsion counting happens right here.
  std::vector<std::vector<int>> tuples;
  detail::search_maps(a, chart, b, candidates, /*inject=*/false,
                      [&](const std::vector<int>& images, const std::vector<int>&) {
                        tuples.push_back(images);
                      });

  HomBruteforce out;
  out.count = static_cast<std::int64_t>(tuples.size());
  std::int64_t remaining = out.count;
  for (std::int64_t p = 2; remaining > 1; ++p) {
    if (remaining % p != 0) continue;
    // Sizes of the p^j-torsion layers give the conjugate partition.
    std::vector<int> layer_log;  // log_p #{phi : phi^(p^j) = 1}
    std::int64_t pj = 1;
    for (;;) {
      pj = checked::mul(pj, p);
      std::int64_t cnt = 0;
      for (const auto& t : tuples) {
        bool all = true;
        for (int u : t)
          if (pj % b.elem_order[u] != 0) {
            all = false;
            break;
          }
        if (all) ++cnt;
      }
      int lg = 0;
      std::int64_t c = cnt;
      while (c > 1 && c % p == 0) {
        c /= p;
        ++lg;
      }
      if (c != 1)
        throw GroupError(GroupError::Code::kNotSubgroup,
                         "hom torsion layer is not a p-power");
      if (!layer_log.empty() && lg == layer_log.back()) break;
      layer_log.push_back(lg);
      if (pj > out.count) break;
    }
    std::vector<int> conj;  // m_j = #{factors with exponent >= j}
    int prev = 0;
    for (int lg : layer_log) {
      conj.push_back(lg - prev);
      prev = lg;
    }
    std::vector<CyclicFactor> fac;
    for (int i = 1; i <= (conj.empty() ? 0 : conj.front()); ++i) {
      int e = 0;
      for (int mj : conj)
        if (mj >= i) ++e;
      fac.push_back(CyclicFactor::finite(checked::pow(p, e)));
    }
    FgAbelian part = normalize(fac);
    out.invariants = direct_product(out.invariants, part);
    for (int i = 0; i < prev; ++i) remaining /= p;
  }
  if (out.invariants.torsion_order() != out.count)
    throw GroupError(GroupError::Code::kNotSubgroup,
                     "hom group order mismatch in torsion counting");
  return out;
}

// ---------------------------------------------------------------------------
// Subgroup enumeration (small parents only; used for corollary sweeps).

inline std::vector<Subgroup> all_subgroups(const FiniteGroup& g) {
  std::vector<Subgroup> found{trivial_subgroup(g)};
  std::vector<std::vector<int>> seen{found.front().members};
  for (std::size_t i = 0; i < found.size(); ++i) {
    const Subgroup h = found[i];
    for (int x = 1; x < g.order; ++x) {
      if (h.contains(x)) continue;
      std::vector<int> gens(h.members);
      gens.push_back(x);
      Subgroup k = closure(g, gens);
      if (std::find(seen.begin(), seen.end(), k.members) == seen.end()) {
        seen.push_back(k.members);
        found.push_back(std::move(k));
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.members < b.members;
  });
  return found;
}

}  // namespace grouphom
