#pragma once

#include "progmerge/program.hpp"
#include "progmerge/rng.hpp"
#include "progmerge/tree.hpp"

namespace progmerge {

struct SampleLimits {
  std::size_t max_nodes = 10000;
  std::size_t max_steps = 2'000'000;
};

// Forward-samples the program and returns the output as syntax. Throws
// NonTerminationError past the limits and EvalError for runtime faults.
SExpr sample_value(const Program& p, Rng& rng, const SampleLimits& limits = {});

// As sample_value, converted to a Tree; throws ProgramError when the output
// is not a literal tree.
Tree sample(const Program& p, Rng& rng, const SampleLimits& limits = {});

}  // namespace progmerge
