#pragma once

#include <string>
#include <vector>

#include "progmerge/program.hpp"
#include "progmerge/sexpr.hpp"

namespace progmerge {

struct AntiUnifyResult {
  SExpr pattern;
  // Fresh variables in order of introduction; each occurs once in `pattern`.
  std::vector<std::string> variables;
};

// Least general pattern of two expressions: equal atoms are kept, equal-length
// lists recurse elementwise, anything else becomes a fresh variable.
AntiUnifyResult anti_unify(const SExpr& a, const SExpr& b, SymbolGenerator& gen);

// Renumbers the variables of `pattern` (those listed in `vars`) to V1, V2, ...
// in left-to-right order. Used as a deduplication key.
SExpr canonical_pattern(const SExpr& pattern, const std::vector<std::string>& vars);

// Abstraction bodies in order, then the program body.
std::vector<SExpr> condense_program(const Program& p);

// Candidate abstractions from anti-unifying every pair of list
// subexpressions (distinct positions) across `exprs`. Candidates whose body
// is a lone variable, has at most one atom or consists of variables only
// are dropped, as are duplicates
// up to variable renaming and patterns that put a variable in a λ binder.
// Every candidate is named gen's next function symbol and numbers its
// variables from gen's next variable index; `gen` itself is not advanced.
std::vector<Abstraction> possible_abstractions(const std::vector<SExpr>& exprs,
                                               const SymbolGenerator& gen);

// Compressed programs, one per candidate abstraction. Programs failing
// validation are dropped; unless `no_filter`, so are programs whose size
// exceeds the original size plus one.
std::vector<Program> compressions(const Program& p, const SymbolGenerator& gen,
                                  bool no_filter = false);
std::vector<Program> compressions(const Program& p, bool no_filter = false);

}  // namespace progmerge
