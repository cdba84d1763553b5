#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "progmerge/program.hpp"
#include "progmerge/sexpr.hpp"
#include "progmerge/tree.hpp"

namespace progmerge {

struct EnumerationLimits {
  // Node bound per trace; 0 means the target's node count (50 when there
  // is no target).
  std::size_t max_nodes = 0;
  std::size_t max_choices = 10000;
  // Complete traces kept; exceeding it throws ResourceError.
  std::size_t max_traces = 100000;
  // Evaluations started, pruned ones included; exceeding it throws ResourceError.
  std::size_t max_runs = 2'000'000;
  std::size_t max_steps = 200000;
  // Enumerate each abstraction call with literal arguments once per target
  // position and reuse its output distribution. The sum over parses is
  // unchanged; such a call then shows up as a single choice in a trace.
  bool share_calls = true;
};

struct Choice {
  std::size_t arity = 0;
  std::size_t outcome = 0;
  double probability = 1.0;
};

// One way of producing an output: the discrete choices in evaluation order
// and the log of their probability (the topology score).
struct ParseTrace {
  std::vector<Choice> choices;
  double log_prob = 0.0;
};

// An attribute value as produced by a parse: either a number or the
// parameters of an unsampled normal.
struct Slot {
  bool gaussian = false;
  double value = 0.0;  // the literal, or the mean
  double sd = 0.0;
};

struct ParameterizedTree {
  Slot color;
  Slot size;
  std::vector<ParameterizedTree> children;
};

struct Parse {
  ParseTrace trace;
  SExpr output;  // gaussians appear as (gaussian-parameters m s)
};

// Every trace whose output can match `target` structurally, in
// lexicographic order of choice indices. The program is desugared and its
// gaussians replaced by parameter markers first.
std::vector<Parse> enumerate_parses(const Program& p, const SExpr& target,
                                    const EnumerationLimits& limits = {});
std::vector<std::pair<ParseTrace, ParameterizedTree>> enumerate_parses(
    const Program& p, const Tree& target, const EnumerationLimits& limits = {});

// Untargeted enumeration: every complete trace within the limits.
struct OutputDistribution {
  // Printed output and its total probability.
  std::map<std::string, double> outcomes;
  // Probability of the traces cut off by the node, step or choice bound.
  double truncated_mass = 0.0;
};
OutputDistribution output_distribution(const Program& p, const EnumerationLimits& limits = {});

ParameterizedTree to_parameterized_tree(const SExpr& output);

double normal_log_pdf(double x, double mean, double sd);

// Log density of the observed attributes given a parse. A literal slot
// scores 0 on an exact match and -inf otherwise; a degenerate normal
// (sd 0) behaves like a literal.
double data_score(const Tree& target, const ParameterizedTree& pt);
// The same comparison on syntax: lists elementwise, symbols by equality.
double output_score(const SExpr& output, const SExpr& target);

double log_sum_exp(std::span<const double> xs);

double single_log_likelihood(const Program& p, const Tree& target,
                             const EnumerationLimits& limits = {});
double single_log_likelihood(const Program& p, const SExpr& target,
                             const EnumerationLimits& limits = {});
double log_likelihood(const Program& p, std::span<const Tree> targets,
                      const EnumerationLimits& limits = {});

struct PosteriorScore {
  double log_prior = 0.0;
  double log_likelihood = 0.0;
  double posterior = 0.0;
};
PosteriorScore posterior(const Program& p, std::span<const Tree> targets, double alpha,
                         const EnumerationLimits& limits = {});

}  // namespace progmerge
