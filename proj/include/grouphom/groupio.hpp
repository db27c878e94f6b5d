#pragma once

// Group sources: JSON Cayley-table files, builtin family expressions like
// direct_product(dihedral(8),cyclic(2)), and corpus manifests listing both.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "grouphom/fingrp.hpp"

namespace grouphom {

class LoadError : public std::runtime_error {
 public:
  explicit LoadError(const std::string& what) : std::runtime_error(what) {}
};

// {"name": str, "table": [[0-based indices]], "elements": [labels]?}
inline FiniteGroup group_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("table"))
    throw LoadError("group document must be an object with a \"table\" field");
  std::vector<std::vector<int>> table;
  try {
    table = j.at("table").get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("bad table: ") + e.what());
  }
  std::string name = j.value("name", std::string{});
  std::vector<std::string> labels;
  if (j.contains("elements")) {
    try {
      labels = j.at("elements").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(std::string("bad elements: ") + e.what());
    }
  }
  return validate(table, std::move(name), std::move(labels));
}

inline FiniteGroup load_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open group file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path + ": " + e.what());
  }
  FiniteGroup g = group_from_json(j);
  if (g.name.empty()) g.name = path;
  return g;
}

namespace detail {

struct BuiltinCursor {
  std::string_view text;
  std::size_t i = 0;

  void skip_ws() {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  }
  bool eat(char c) {
    skip_ws();
    if (i < text.size() && text[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::string out;
    while (i < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      out.push_back(text[i++]);
    return out;
  }
  int integer() {
    skip_ws();
    const std::size_t start = i;
    long v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = v * 10 + (text[i] - '0');
      if (v > kHardOrderCap * kHardOrderCap)
        throw GroupError(GroupError::Code::kBadParams, "parameter too large");
      ++i;
    }
    if (i == start)
      throw GroupError(GroupError::Code::kBadParams, "expected integer parameter");
    return static_cast<int>(v);
  }
};

inline FiniteGroup parse_builtin_expr(BuiltinCursor& c) {
  const std::string fam = c.ident();
  if (fam.empty())
    throw GroupError(GroupError::Code::kUnknownFamily, "expected family name");
  if (!c.eat('('))
    throw GroupError(GroupError::Code::kBadParams, fam + ": expected '('");
  FiniteGroup g;
  if (fam == "cyclic") {
    g = make_cyclic(c.integer());
  } else if (fam == "abelian") {
    std::vector<int> orders{c.integer()};
    while (c.eat(',')) orders.push_back(c.integer());
    g = make_abelian(orders);
  } else if (fam == "dihedral") {
    g = make_dihedral(c.integer());
  } else if (fam == "quaternion") {
    g = make_quaternion(c.integer());
  } else if (fam == "semidihedral") {
    g = make_semidihedral(c.integer());
  } else if (fam == "modular") {
    const int p = c.integer();
    if (!c.eat(','))
      throw GroupError(GroupError::Code::kBadParams, "modular needs (p,k)");
    g = make_modular(p, c.integer());
  } else if (fam == "heisenberg") {
    g = make_heisenberg(c.integer());
  } else if (fam == "direct_product") {
    FiniteGroup a = parse_builtin_expr(c);
    if (!c.eat(','))
      throw GroupError(GroupError::Code::kBadParams,
                       "direct_product needs two factors");
    FiniteGroup b = parse_builtin_expr(c);
    g = make_direct_product(a, b);
  } else {
    throw GroupError(GroupError::Code::kUnknownFamily, fam);
  }
  if (!c.eat(')'))
    throw GroupError(GroupError::Code::kBadParams, fam + ": expected ')'");
  return g;
}

}  // namespace detail

inline FiniteGroup make_builtin(std::string_view expr) {
  detail::BuiltinCursor c{expr};
  FiniteGroup g = detail::parse_builtin_expr(c);
  c.skip_ws();
  if (c.i != expr.size())
    throw GroupError(GroupError::Code::kBadParams,
                     "trailing input in builtin expression");
  return g;
}

// `builtin:<expr>` or `file:<path>`; bare paths load as files.
inline FiniteGroup load_group_source(const std::string& source) {
  if (source.rfind("builtin:", 0) == 0) return make_builtin(source.substr(8));
  if (source.rfind("file:", 0) == 0) return load_group_file(source.substr(5));
  return load_group_file(source);
}

// One source per line; blank lines and '#' comments skipped.
inline std::vector<std::string> parse_manifest(std::istream& in) {
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.empty() || line.front() == '#') continue;
    entries.push_back(line);
  }
  return entries;
}

inline std::vector<std::string> load_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open manifest: " + path);
  return parse_manifest(in);
}

// The built-in verification corpus: all five groups of order 8, nine of
// order 16, the two extraspecial-flavored groups of order 27, and the small
// cyclic groups the autocentral corollaries need.
inline std::vector<std::string> default_manifest() {
  return {
      "builtin:cyclic(2)",
      "builtin:cyclic(3)",
      "builtin:cyclic(4)",
      "builtin:cyclic(8)",
      "builtin:abelian(4,2)",
      "builtin:abelian(2,2,2)",
      "builtin:dihedral(8)",
      "builtin:quaternion(8)",
      "builtin:cyclic(16)",
      "builtin:abelian(4,4)",
      "builtin:abelian(2,2,2,2)",
      "builtin:dihedral(16)",
      "builtin:quaternion(16)",
      "builtin:semidihedral(16)",
      "builtin:modular(2,4)",
      "builtin:direct_product(dihedral(8),cyclic(2))",
      "builtin:direct_product(quaternion(8),cyclic(2))",
      "builtin:heisenberg(3)",
      "builtin:modular(3,3)",
  };
}

}  // namespace grouphom
