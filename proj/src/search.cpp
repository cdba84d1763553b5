#include "progmerge/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "progmerge/antiunify.hpp"
#include "progmerge/errors.hpp"

namespace progmerge {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Strict "a ranks before b"; equal keys keep input order under stable sort.
bool ranks_before(const ScoredProgram& a, const ScoredProgram& b) {
  if (a.posterior != b.posterior) return a.posterior > b.posterior;
  return program_size(a.program) < program_size(b.program);
}

}  // namespace

std::vector<ScoredProgram> neighbors(const ScoredProgram& sp,
                                     std::span<const ReplacementKind> kinds) {
  std::vector<ScoredProgram> out;
  for (auto& p : compressions(sp.program)) {
    ScoredProgram child = sp;
    child.program = std::move(p);
    child.semantics_preserved = true;
    out.push_back(std::move(child));
  }
  for (auto& c : all_deargument_candidates(sp.program, kinds)) {
    if (!is_valid_program(c.program)) continue;
    ScoredProgram child = sp;
    child.program = std::move(c.program);
    child.semantics_preserved = false;
    out.push_back(std::move(child));
  }
  return out;
}

ScoredProgram score_program(const Program& p, std::span<const Tree> targets, double alpha,
                            const EnumerationLimits& limits) {
  ScoredProgram sp;
  sp.program = p;
  sp.log_prior = log_prior(p, alpha);
  try {
    sp.log_likelihood = log_likelihood(p, targets, limits);
  } catch (const EvalError&) {
    sp.log_likelihood = kNegInf;
  } catch (const ProgramError&) {
    sp.log_likelihood = kNegInf;
  }
  sp.posterior = sp.log_prior + sp.log_likelihood;
  return sp;
}

std::vector<ScoredProgram> sort_by_posterior(std::span<const Tree> targets,
                                             std::vector<ScoredProgram> candidates,
                                             const SearchConfig& cfg) {
  for (auto& c : candidates) {
    if (c.semantics_preserved) {
      c.log_prior = log_prior(c.program, cfg.alpha);
      c.posterior = c.log_prior + c.log_likelihood;
    } else {
      c = score_program(c.program, targets, cfg.alpha, cfg.limits);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), ranks_before);
  return candidates;
}

SearchResult beam_search(std::span<const Tree> targets, const SearchConfig& cfg) {
  if (targets.empty()) throw std::invalid_argument("search needs at least one observation");
  return beam_search_from(incorporate_data(targets, cfg.incorporation_mode, cfg.incorporation_sd),
                          targets, cfg);
}

SearchResult beam_search_from(const Program& initial, std::span<const Tree> targets,
                              const SearchConfig& cfg) {
  if (cfg.beam_width == 0) throw std::invalid_argument("beam width must be positive");
  const std::vector<ReplacementKind> kinds =
      cfg.enabled_kinds.empty() ? default_kinds(cfg.incorporation_mode) : cfg.enabled_kinds;

  SearchResult result;
  result.initial = score_program(initial, targets, cfg.alpha, cfg.limits);
  result.best = result.initial;
  std::vector<ScoredProgram> beam{result.initial};

  for (std::size_t d = 1; d <= cfg.depth; ++d) {
    std::vector<ScoredProgram> candidates;
    try {
      for (const auto& member : beam)
        for (auto& c : neighbors(member, kinds)) candidates.push_back(std::move(c));
      if (candidates.empty()) break;
      candidates = sort_by_posterior(targets, std::move(candidates), cfg);
    } catch (const ResourceError& e) {
      throw SearchAborted(e.what(), result);
    }

    DepthRecord record{d, candidates.size(), {}};
    beam.assign(candidates.begin(),
                candidates.begin() + static_cast<std::ptrdiff_t>(
                                         std::min(cfg.beam_width, candidates.size())));
    for (const auto& b : beam)
      record.beam.push_back({program_size(b.program), b.posterior, b.semantics_preserved});
    result.trace.push_back(std::move(record));

    // The level's best is its first entry; earlier programs win ties.
    if (ranks_before(candidates.front(), result.best)) result.best = candidates.front();
  }
  return result;
}

std::string format_score(double x) {
  if (std::isinf(x)) return x < 0 ? "-inf" : "+inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string format_trace(const std::vector<DepthRecord>& trace) {
  std::string out;
  for (const auto& r : trace) {
    out += "(depth " + std::to_string(r.depth) + " (candidates " + std::to_string(r.candidates) +
           ") (beam";
    for (const auto& b : r.beam)
      out += " (entry (size " + std::to_string(b.size) + ") (posterior " +
             format_score(b.posterior) + ") (preserved " + (b.semantics_preserved ? "#t" : "#f") +
             "))";
    out += "))\n";
  }
  return out;
}

}  // namespace progmerge
