#include "progmerge/model.hpp"

#include "progmerge/eval.hpp"

namespace progmerge {

namespace {

class RngSource : public eval::ChoiceSource {
 public:
  explicit RngSource(Rng& rng) : rng_(rng) {}

  std::size_t choose(std::span<const double> probs) override {
    double u = rng_.uniform();
    double cumulative = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      last = i;
      cumulative += probs[i];
      if (u < cumulative) return i;
    }
    return last;
  }

  std::optional<double> draw_normal(double mean, double sd) override {
    if (sd == 0.0) return mean;
    return rng_.normal(mean, sd);
  }

 private:
  Rng& rng_;
};

}  // namespace

SExpr sample_value(const Program& p, Rng& rng, const SampleLimits& limits) {
  RngSource source(rng);
  eval::EvalLimits eval_limits;
  eval_limits.max_nodes = limits.max_nodes;
  eval_limits.max_steps = limits.max_steps;
  eval::Evaluator evaluator(p, source, eval_limits);
  return eval::to_sexpr(*evaluator.run());
}

Tree sample(const Program& p, Rng& rng, const SampleLimits& limits) {
  return expression_to_tree(sample_value(p, rng, limits));
}

}  // namespace progmerge
