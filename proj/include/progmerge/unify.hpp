#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "progmerge/program.hpp"
#include "progmerge/sexpr.hpp"

namespace progmerge {

// Variable bindings in order of first occurrence in the pattern.
class Substitution {
 public:
  const SExpr* find(std::string_view var) const;
  // False if `var` is already bound to a different expression.
  bool bind(const std::string& var, const SExpr& value);
  const std::vector<std::pair<std::string, SExpr>>& bindings() const { return bindings_; }
  std::size_t size() const { return bindings_.size(); }

 private:
  std::vector<std::pair<std::string, SExpr>> bindings_;
};

// Matches `e` against `pattern`, treating the symbols in `vars` as
// variables. A variable never binds the bare λ symbol; a repeated variable
// must bind identical expressions. Returns nullopt on failure.
std::optional<Substitution> unify(const SExpr& e, const SExpr& pattern,
                                  const std::vector<std::string>& vars);

// Replaces `vars` in `pattern` by their bindings.
SExpr instantiate(const SExpr& pattern, const Substitution& s);

// Top-down: a subexpression matching a.body becomes (a.name args...), with
// the arguments themselves rewritten.
SExpr replace_matches(const SExpr& e, const Abstraction& a);

// Prepends `a` and rewrites every existing body (but not a.body) with it.
Program compress_program(const Program& p, const Abstraction& a);

}  // namespace progmerge
