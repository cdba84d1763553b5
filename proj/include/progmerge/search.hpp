#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "progmerge/dearg.hpp"
#include "progmerge/likelihood.hpp"
#include "progmerge/program.hpp"
#include "progmerge/tree.hpp"

namespace progmerge {

struct SearchConfig {
  double alpha = 1.0;
  std::size_t beam_width = 1;
  std::size_t depth = 10;
  // Recorded for replay; the search itself makes no random choices.
  std::uint64_t seed = 0;
  EnumerationLimits limits;
  // Empty means default_kinds(incorporation_mode).
  std::vector<ReplacementKind> enabled_kinds;
  IncorporationMode incorporation_mode = IncorporationMode::GaussianColors;
  double incorporation_sd = kIncorporationNoise;
};

// Compressions (semantics preserved, parent likelihood inherited) followed
// by deargumentation candidates. Scores are the parent's until rescored.
std::vector<ScoredProgram> neighbors(const ScoredProgram& sp, std::span<const ReplacementKind> kinds);

// Scores `sp` from scratch. Programs that fail to evaluate get likelihood -inf.
ScoredProgram score_program(const Program& p, std::span<const Tree> targets, double alpha,
                            const EnumerationLimits& limits);

// Rescores (likelihood only where semantics changed) and sorts by posterior
// descending, then size ascending, then input order.
std::vector<ScoredProgram> sort_by_posterior(std::span<const Tree> targets,
                                             std::vector<ScoredProgram> candidates,
                                             const SearchConfig& cfg);

struct BeamEntry {
  std::size_t size = 0;
  double posterior = 0.0;
  bool semantics_preserved = false;
};

struct DepthRecord {
  std::size_t depth = 0;
  std::size_t candidates = 0;
  std::vector<BeamEntry> beam;
};

struct SearchResult {
  ScoredProgram initial;
  ScoredProgram best;
  std::vector<DepthRecord> trace;
};

// Raised when a resource bound aborts the search; carries the best program
// found so far.
class SearchAborted : public std::runtime_error {
 public:
  SearchAborted(const std::string& what, SearchResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const SearchResult& partial() const { return partial_; }

 private:
  SearchResult partial_;
};

SearchResult beam_search(std::span<const Tree> targets, const SearchConfig& cfg);
// Starts from an arbitrary program instead of the incorporated one.
SearchResult beam_search_from(const Program& initial, std::span<const Tree> targets,
                              const SearchConfig& cfg);

// One s-expression per depth:
// (depth d (candidates n) (beam (entry (size s) (posterior p) (preserved #t)) ...))
std::string format_trace(const std::vector<DepthRecord>& trace);

// %.12g, with -inf and +inf spelled out.
std::string format_score(double x);

}  // namespace progmerge
