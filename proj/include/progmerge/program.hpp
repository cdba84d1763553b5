#pragma once

#include <limits>
#include <string>
#include <vector>

#include "progmerge/sexpr.hpp"

namespace progmerge {

struct Abstraction {
  std::string name;
  std::vector<std::string> vars;
  SExpr body;

  friend bool operator==(const Abstraction&, const Abstraction&) = default;
};

// A list of named abstractions plus the entry expression, normally a
// zero-argument λ.
struct Program {
  std::vector<Abstraction> abstractions;
  SExpr body;

  const Abstraction* find(std::string_view name) const;

  friend bool operator==(const Program&, const Program&) = default;
};

// A program with cached scores. After scoring, posterior equals
// log_prior + log_likelihood.
struct ScoredProgram {
  Program program;
  double posterior = -std::numeric_limits<double>::infinity();
  double log_likelihood = -std::numeric_limits<double>::infinity();
  double log_prior = -std::numeric_limits<double>::infinity();
  bool semantics_preserved = false;
};

// Sum of sexpr_size over abstraction bodies and the program body.
std::size_t program_size(const Program& p);

// Unnormalized log prior, -alpha * size.
double log_prior(const Program& p, double alpha);

// Rewrites (uniform-choice e1 ... en) into ((uniform-draw (list (λ () e1) ...)))
// everywhere, repeating until no uniform-choice remains.
Program desugar(const Program& p);

// Rewrites (gaussian m s) into (gaussian-parameters m s) everywhere.
Program replace_gaussian(const Program& p);

Program replace_abstraction(const Program& p, const Abstraction& a);

// Applies `f` to every abstraction body and to the program body.
template <class F>
Program map_bodies(const Program& p, F&& f) {
  Program out;
  out.abstractions.reserve(p.abstractions.size());
  for (const auto& a : p.abstractions) out.abstractions.push_back({a.name, a.vars, f(a.body)});
  out.body = f(p.body);
  return out;
}

// Throws ProgramError unless: abstraction names are unique F<n> symbols,
// parameters are pairwise distinct, every applied abstraction exists with a
// matching argument count, λ binders are plain variable symbols, and no
// V<n> symbol occurs free.
void validate_program(const Program& p);
bool is_valid_program(const Program& p);

// Bodies in program order, then the program body.
std::vector<SExpr> program_expressions(const Program& p);
SymbolGenerator symbols_after(const Program& p);

// Accepts `(program ((abstraction F1 (V1 ...) body) ...) body)`,
// `(begin (define (F1 V1 ...) body) ... main)`, `(begin (define F1 (λ (V1 ...) body)) ... main)`
// or a bare expression with no abstractions.
Program program_from_sexpr(const SExpr& e);
Program parse_program(std::string_view text);

SExpr program_to_constructor_sexpr(const Program& p);
SExpr program_to_sugared_sexpr(const Program& p);

// Human-facing `begin/define` listing, one definition per line.
std::string print_program(const Program& p, const PrintOptions& options = {});
// Single-line `(program ...)` form.
std::string print_program_constructor(const Program& p, const PrintOptions& options = {});

}  // namespace progmerge
