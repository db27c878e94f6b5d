#pragma once

// Hom(A, B) for finitely generated abelian A, B, computed at the level of
// canonical invariants:
//   Hom(Z^a, B) = B^a,  Hom(C_{p^x}, C_{p^y}) = C_{p^min(x,y)},
//   Hom(torsion, Z^c) = 1, and distinct primes contribute nothing.

#include <algorithm>
#include <vector>

#include "grouphom/fgab.hpp"

namespace grouphom {

inline FgAbelian hom_group(const FgAbelian& a, const FgAbelian& b) {
  FgAbelian h;
  h.free_rank = a.free_rank * b.free_rank;

  // Walk both prime lists in ascending order so the result stays canonical.
  std::size_t i = 0, j = 0;
  while (i < a.parts.size() || j < b.parts.size()) {
    std::int64_t p;
    const FgAbelian::PrimePart* pa = nullptr;
    const FgAbelian::PrimePart* pb = nullptr;
    if (j == b.parts.size() ||
        (i < a.parts.size() && a.parts[i].prime < b.parts[j].prime)) {
      p = a.parts[i].prime;
      pa = &a.parts[i++];
    } else if (i == a.parts.size() || b.parts[j].prime < a.parts[i].prime) {
      p = b.parts[j].prime;
      pb = &b.parts[j++];
    } else {
      p = a.parts[i].prime;
      pa = &a.parts[i++];
      pb = &b.parts[j++];
    }

    std::vector<int> exps;
    if (pb != nullptr) {
      // a.free_rank copies of B's p-part.
      for (int r = 0; r < a.free_rank; ++r)
        exps.insert(exps.end(), pb->exponents.begin(), pb->exponents.end());
      if (pa != nullptr)
        for (int x : pa->exponents)
          for (int y : pb->exponents) exps.push_back(std::min(x, y));
    }
    if (!exps.empty()) {
      std::sort(exps.begin(), exps.end(), std::greater<int>());
      h.parts.push_back({p, std::move(exps)});
    }
  }
  return h;
}

// The oracle form of the central lemma's hypothesis: Hom(G/N, M) = G/L.
inline bool hom_iso_check(const FgAbelian& gn, const FgAbelian& m,
                          const FgAbelian& gl) {
  return is_isomorphic(hom_group(gn, m), gl);
}

}  // namespace grouphom
