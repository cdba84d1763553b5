#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "progmerge/program.hpp"
#include "progmerge/sexpr.hpp"
#include "progmerge/tree.hpp"

namespace progmerge {

enum class ReplacementKind {
  NoisyMean,      // the mean of numeric instances
  NoisyGaussian,  // (gaussian mean sample-sd) of numeric instances
  SameVariable,   // a sibling parameter with similar instances
  Recursion,      // (if (flip r/k) recursive-call (uniform-choice base...))
};

std::string_view kind_name(ReplacementKind kind);
std::optional<ReplacementKind> parse_kind(std::string_view name);

// Kinds enabled when nothing is specified for the given incorporation mode.
std::vector<ReplacementKind> default_kinds(IncorporationMode mode);

// nullopt means the transform does not apply.
using ReplacementOutcome = std::optional<SExpr>;

// Every application of a.name in the program body and then the abstraction
// bodies, in pre-order, nested applications included.
std::vector<SExpr> find_abstraction_applications(const Program& p, std::string_view name);

// The argument at v's position of every application of `a`. Throws
// ProgramError on an application with the wrong number of arguments.
std::vector<SExpr> find_variable_instances(const Program& p, const Abstraction& a,
                                           const std::string& v);

// Two instances are similar when both are numbers, or both are lists of the
// same length with similar elements, or they are equal atoms.
bool similar_instances(const SExpr& a, const SExpr& b);

// Parameters of `a` other than v whose instance lists match v's elementwise,
// in declaration order.
std::vector<std::string> matching_variables(const Program& p, const Abstraction& a,
                                            const std::string& v,
                                            std::span<const SExpr> instances);

// For SameVariable the first matching sibling is returned.
ReplacementOutcome replacement(ReplacementKind kind, const Program& p, const Abstraction& a,
                               const std::string& v, std::span<const SExpr> instances);

// Whether some expression in `non_recursive` is a base case, with `root`
// treated as currently being checked.
bool terminates(const Program& p, std::string_view root, std::span<const SExpr> non_recursive);

// `a` without v, its body wrapped as ((λ (v) body) definition).
Abstraction remove_abstraction_variable(const Abstraction& a, const std::string& v,
                                        const SExpr& definition);

// Drops the argument at v's position (in `a`, the abstraction before
// removal) from every application of a.name, including applications nested
// inside arguments.
Program remove_application_argument(const Program& p, const Abstraction& a,
                                     const std::string& v);

// Composes instance discovery, replacement, variable removal and call-site
// rewriting. nullopt when the replacement does not apply.
std::optional<Program> deargument(ReplacementKind kind, const Program& p, const Abstraction& a,
                                  const std::string& v);

// As deargument with an explicit definition.
Program deargument_with(const Program& p, const Abstraction& a, const std::string& v,
                        const SExpr& definition);

struct DeargumentCandidate {
  ReplacementKind kind;
  std::string abstraction;
  std::string variable;
  Program program;
};

// Every applicable (abstraction, parameter, kind) in that nesting order.
// SameVariable yields one candidate per matching sibling.
std::vector<DeargumentCandidate> all_deargument_candidates(const Program& p,
                                                           std::span<const ReplacementKind> kinds);

}  // namespace progmerge
