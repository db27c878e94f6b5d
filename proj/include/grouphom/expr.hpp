#pragma once

// Surface syntax for abelian groups: factors separated by `x`, each factor
// `Z`, `Z^k` or `C<n>`. Whitespace-insensitive, case-sensitive.

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grouphom/fgab.hpp"

namespace grouphom {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        pos(position) {}
  std::size_t pos;
};

namespace detail {

struct ExprCursor {
  std::string_view text;
  std::size_t i = 0;

  void skip_ws() {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= text.size();
  }
  char peek() { return text[i]; }

  std::int64_t integer() {
    skip_ws();
    const std::size_t start = i;
    std::int64_t v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = checked::add(checked::mul(v, 10), text[i] - '0');
      ++i;
    }
    if (i == start) throw ParseError("expected integer", start);
    return v;
  }
};

}  // namespace detail

inline FgAbelian parse_abelian(std::string_view text) {
  detail::ExprCursor c{text};
  std::vector<CyclicFactor> factors;
  for (;;) {
    if (c.done()) throw ParseError("expected factor", c.i);
    const char f = c.peek();
    if (f == 'Z') {
      ++c.i;
      std::int64_t k = 1;
      c.skip_ws();
      if (c.i < text.size() && text[c.i] == '^') {
        ++c.i;
        k = c.integer();
        if (k < 1) throw ParseError("free rank must be >= 1", c.i);
      }
      for (std::int64_t r = 0; r < k; ++r) factors.push_back(CyclicFactor::inf());
    } else if (f == 'C') {
      ++c.i;
      const std::int64_t n = c.integer();
      if (n < 1) throw ParseError("cyclic order must be >= 1", c.i);
      factors.push_back(CyclicFactor::finite(n));
    } else {
      throw ParseError("expected 'Z' or 'C'", c.i);
    }
    if (c.done()) break;
    if (c.peek() != 'x') throw ParseError("expected 'x' between factors", c.i);
    ++c.i;
  }
  return normalize(factors);
}

// Inverse of parse_abelian on canonical forms; the trivial group renders as C1.
inline std::string render_abelian(const FgAbelian& g) {
  std::string out;
  auto append = [&out](const std::string& piece) {
    if (!out.empty()) out += " x ";
    out += piece;
  };
  for (const auto& part : g.parts)
    for (int e : part.exponents)
      append("C" + std::to_string(checked::pow(part.prime, e)));
  if (g.free_rank == 1)
    append("Z");
  else if (g.free_rank > 1)
    append("Z^" + std::to_string(g.free_rank));
  if (out.empty()) out = "C1";
  return out;
}

}  // namespace grouphom
