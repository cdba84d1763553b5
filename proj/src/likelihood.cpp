#include "progmerge/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "progmerge/errors.hpp"
#include "progmerge/eval.hpp"

namespace progmerge {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Depth-first walk over choice sequences. Each evaluation replays the
// recorded prefix and takes the first possible outcome at every new choice;
// advance() then moves to the next unexplored sibling of the deepest choice.
class ReplaySource : public eval::ChoiceSource {
 public:
  explicit ReplaySource(std::size_t max_choices) : max_choices_(max_choices) {}

  std::size_t choose(std::span<const double> probs) override {
    if (pos_ < trail_.size()) return trail_[pos_++].chosen;
    if (trail_.size() >= max_choices_) throw eval::Pruned{eval::Pruned::Reason::Bound};
    std::size_t first = 0;
    while (first < probs.size() && !(probs[first] > 0.0)) ++first;
    if (first == probs.size()) throw EvalError("random choice with no possible outcome");
    trail_.push_back({std::vector<double>(probs.begin(), probs.end()), first});
    ++pos_;
    return first;
  }

  std::optional<double> draw_normal(double, double) override { return std::nullopt; }

  void rewind() { pos_ = 0; }

  bool advance() {
    trail_.resize(pos_);
    while (!trail_.empty()) {
      Entry& last = trail_.back();
      for (std::size_t j = last.chosen + 1; j < last.probs.size(); ++j) {
        if (last.probs[j] > 0.0) {
          last.chosen = j;
          return true;
        }
      }
      trail_.pop_back();
    }
    return false;
  }

  double log_prob() const {
    double lp = 0.0;
    for (std::size_t i = 0; i < pos_; ++i) lp += std::log(trail_[i].probs[trail_[i].chosen]);
    return lp;
  }

  ParseTrace trace() const {
    ParseTrace t;
    for (std::size_t i = 0; i < pos_; ++i) {
      const Entry& e = trail_[i];
      t.choices.push_back({e.probs.size(), e.chosen, e.probs[e.chosen]});
    }
    t.log_prob = log_prob();
    return t;
  }

 private:
  struct Entry {
    std::vector<double> probs;
    std::size_t chosen;
  };
  std::vector<Entry> trail_;
  std::size_t pos_ = 0;
  std::size_t max_choices_;
};

std::size_t count_nodes(const SExpr& e) {
  if (!e.is_list()) return 0;
  std::size_t n = e.size() > 0 && e[0].is_symbol("node") ? 1 : 0;
  for (const auto& item : e.items()) n += count_nodes(item);
  return n;
}

template <class OnComplete>
void enumerate_prepared(const Program& prepared, const SExpr* target,
                        const EnumerationLimits& limits, std::size_t max_nodes,
                        eval::CallOracle* oracle, OnComplete&& on_complete, double* truncated) {
  eval::EvalLimits eval_limits;
  eval_limits.max_nodes = max_nodes;
  eval_limits.max_steps = limits.max_steps;
  ReplaySource source(limits.max_choices);
  std::size_t runs = 0;
  do {
    if (++runs > limits.max_runs)
      throw ResourceError("enumeration exceeded " + std::to_string(limits.max_runs) + " runs");
    source.rewind();
    eval::Evaluator evaluator(prepared, source, eval_limits, target, target != nullptr, true);
    evaluator.set_call_oracle(oracle);
    try {
      eval::ValuePtr v = evaluator.run();
      on_complete(source.trace(), v);
    } catch (const eval::Pruned& pruned) {
      if (truncated && pruned.reason == eval::Pruned::Reason::Bound)
        *truncated += std::exp(source.log_prob());
    }
  } while (source.advance());
}

// Output distributions of (F literals...) per target position, each
// enumerated once. A call already being enumerated is evaluated inline.
class SharedCalls : public eval::CallOracle {
 public:
  SharedCalls(const Program& prepared, const EnumerationLimits& limits, std::size_t max_nodes)
      : prepared_(prepared), limits_(limits), max_nodes_(max_nodes) {}

  const std::vector<eval::Outcome>* outcomes(const std::string& name,
                                             std::span<const SExpr> args,
                                             const SExpr* hint) override {
    SExpr::List call{sym(name)};
    call.insert(call.end(), args.begin(), args.end());
    SExpr call_expr = lst(std::move(call));
    auto [it, inserted] = memo_.try_emplace({print(call_expr), hint});
    Entry& entry = it->second;
    if (!inserted) return entry.in_progress ? nullptr : &entry.outcomes;

    entry.in_progress = true;
    Program sub{prepared_.abstractions,
                lst({sym(std::string(kLambda)), lst({}), std::move(call_expr)})};
    std::map<std::string, std::size_t> index;
    std::vector<eval::Outcome> outs;
    enumerate_prepared(
        sub, hint, limits_, max_nodes_, this,
        [&](const ParseTrace& trace, const eval::ValuePtr& v) {
          auto [slot, fresh] = index.try_emplace(print(eval::to_sexpr(*v)), outs.size());
          if (fresh) outs.push_back({0.0, v});
          outs[slot->second].probability += std::exp(trace.log_prob);
        },
        nullptr);
    entry.outcomes = std::move(outs);
    entry.in_progress = false;
    return &entry.outcomes;
  }

 private:
  struct Entry {
    bool in_progress = false;
    std::vector<eval::Outcome> outcomes;
  };
  const Program& prepared_;
  const EnumerationLimits& limits_;
  std::size_t max_nodes_;
  std::map<std::pair<std::string, const SExpr*>, Entry> memo_;
};

bool is_gaussian_marker(const SExpr& e) {
  return e.is_call_to("gaussian-parameters") && e.size() == 3 && e[1].is_number() &&
         e[2].is_number();
}

bool shape_compatible(const SExpr& output, const SExpr& target) {
  if (target.is_number()) return output.is_number() || is_gaussian_marker(output);
  if (target.is_symbol()) return output == target;
  if (!output.is_list() || output.size() != target.size()) return false;
  for (std::size_t i = 0; i < output.size(); ++i)
    if (!shape_compatible(output[i], target[i])) return false;
  return true;
}

double slot_score(const Slot& s, double observed) {
  if (s.gaussian && s.sd > 0.0) return normal_log_pdf(observed, s.value, s.sd);
  return s.value == observed ? 0.0 : kNegInf;
}

Slot to_slot(const SExpr& e) {
  if (e.is_number()) return {false, e.number_value().to_double(), 0.0};
  if (is_gaussian_marker(e))
    return {true, e[1].number_value().to_double(), e[2].number_value().to_double()};
  throw ProgramError("not an attribute value: " + print(e));
}

Slot attribute_slot(const SExpr& e, std::string_view tag) {
  if (!e.is_call_to(tag) || e.size() != 2) throw ProgramError("expected (" + std::string(tag) +
                                                              " x): " + print(e));
  return to_slot(e[1]);
}

}  // namespace

std::vector<Parse> enumerate_parses(const Program& p, const SExpr& target,
                                    const EnumerationLimits& limits) {
  const Program prepared = desugar(replace_gaussian(p));
  std::size_t max_nodes = limits.max_nodes ? limits.max_nodes : count_nodes(target);
  SharedCalls shared(prepared, limits, max_nodes);
  std::vector<Parse> out;
  enumerate_prepared(
      prepared, &target, limits, max_nodes, limits.share_calls ? &shared : nullptr,
      [&](ParseTrace trace, const eval::ValuePtr& v) {
        SExpr output = eval::to_sexpr(*v);
        if (!shape_compatible(output, target)) return;
        if (out.size() >= limits.max_traces)
          throw ResourceError("enumeration exceeded " + std::to_string(limits.max_traces) +
                              " traces");
        out.push_back({std::move(trace), std::move(output)});
      },
      nullptr);
  return out;
}

std::vector<std::pair<ParseTrace, ParameterizedTree>> enumerate_parses(
    const Program& p, const Tree& target, const EnumerationLimits& limits) {
  std::vector<std::pair<ParseTrace, ParameterizedTree>> out;
  for (auto& parse :
       enumerate_parses(p, tree_to_expression(target, IncorporationMode::Deterministic), limits))
    out.emplace_back(std::move(parse.trace), to_parameterized_tree(parse.output));
  return out;
}

OutputDistribution output_distribution(const Program& p, const EnumerationLimits& limits) {
  const Program prepared = desugar(replace_gaussian(p));
  OutputDistribution d;
  std::size_t traces = 0;
  enumerate_prepared(
      prepared, nullptr, limits, limits.max_nodes ? limits.max_nodes : 50, nullptr,
      [&](const ParseTrace& trace, const eval::ValuePtr& v) {
        if (++traces > limits.max_traces)
          throw ResourceError("enumeration exceeded " + std::to_string(limits.max_traces) +
                              " traces");
        d.outcomes[print(eval::to_sexpr(*v))] += std::exp(trace.log_prob);
      },
      &d.truncated_mass);
  return d;
}

ParameterizedTree to_parameterized_tree(const SExpr& output) {
  if (!output.is_call_to("node") || output.size() < 2)
    throw ProgramError("not a tree: " + print(output));
  const SExpr& data = output[1];
  if (!data.is_call_to("data") || data.size() != 3)
    throw ProgramError("not a data form: " + print(data));
  ParameterizedTree t;
  t.color = attribute_slot(data[1], "color");
  t.size = attribute_slot(data[2], "size");
  for (std::size_t i = 2; i < output.size(); ++i)
    t.children.push_back(to_parameterized_tree(output[i]));
  return t;
}

double normal_log_pdf(double x, double mean, double sd) {
  double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

double data_score(const Tree& target, const ParameterizedTree& pt) {
  if (target.children.size() != pt.children.size())
    throw ProgramError("parse shape differs from the observation");
  double score = slot_score(pt.color, target.color) + slot_score(pt.size, target.size);
  for (std::size_t i = 0; i < pt.children.size() && score != kNegInf; ++i)
    score += data_score(target.children[i], pt.children[i]);
  return score;
}

double output_score(const SExpr& output, const SExpr& target) {
  if (target.is_number() && (output.is_number() || is_gaussian_marker(output)))
    return slot_score(to_slot(output), target.number_value().to_double());
  if (target.is_atom() || output.is_atom()) return output == target ? 0.0 : kNegInf;
  if (output.size() != target.size()) return kNegInf;
  double score = 0.0;
  for (std::size_t i = 0; i < output.size() && score != kNegInf; ++i)
    score += output_score(output[i], target[i]);
  return score;
}

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("log_sum_exp of an empty sequence");
  double m = *std::max_element(xs.begin(), xs.end());
  if (m == kNegInf) return kNegInf;
  if (std::isinf(m)) return m;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - m);
  return m + std::log(sum);
}

double single_log_likelihood(const Program& p, const Tree& target,
                             const EnumerationLimits& limits) {
  std::vector<double> scores;
  for (const auto& [trace, pt] : enumerate_parses(p, target, limits))
    scores.push_back(trace.log_prob + data_score(target, pt));
  return scores.empty() ? kNegInf : log_sum_exp(scores);
}

double single_log_likelihood(const Program& p, const SExpr& target,
                             const EnumerationLimits& limits) {
  std::vector<double> scores;
  for (const auto& parse : enumerate_parses(p, target, limits))
    scores.push_back(parse.trace.log_prob + output_score(parse.output, target));
  return scores.empty() ? kNegInf : log_sum_exp(scores);
}

double log_likelihood(const Program& p, std::span<const Tree> targets,
                      const EnumerationLimits& limits) {
  double total = 0.0;
  for (const auto& t : targets) {
    total += single_log_likelihood(p, t, limits);
    if (total == kNegInf) break;
  }
  return total;
}

PosteriorScore posterior(const Program& p, std::span<const Tree> targets, double alpha,
                         const EnumerationLimits& limits) {
  PosteriorScore s;
  s.log_prior = log_prior(p, alpha);
  s.log_likelihood = log_likelihood(p, targets, limits);
  s.posterior = s.log_prior + s.log_likelihood;
  return s;
}

}  // namespace progmerge
