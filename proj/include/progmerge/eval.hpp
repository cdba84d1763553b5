#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "progmerge/program.hpp"
#include "progmerge/sexpr.hpp"

// Evaluator shared by the forward sampler and the parse enumerator.
//
// Arguments to λ forms and abstractions are passed as memoized thunks
// (call-by-need). For this language, which has no side effects besides random
// choice, that yields the same output distribution as call-by-value whenever
// discarded arguments terminate, and it lets tree-valued arguments be
// evaluated at the output position they end up in.
namespace progmerge::eval {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct Thunk;
struct Env;
using EnvPtr = std::shared_ptr<const Env>;

struct Closure {
  std::vector<std::string> params;
  SExpr body;
  EnvPtr env;
};

struct Primitive {
  std::string name;
};

// node / data / color / size applied to evaluated arguments.
struct Constructed {
  std::string tag;
  std::vector<ValuePtr> args;
};

// An unsampled normal, produced when the evaluator is not drawing samples.
struct Gaussian {
  double mean = 0.0;
  double sd = 0.0;
};

struct ListValue {
  std::vector<ValuePtr> items;
};

struct SymbolValue {
  std::string name;
};

struct Nil {};

struct Value {
  std::variant<Number, bool, SymbolValue, Gaussian, Constructed, ListValue, Closure, Primitive, Nil>
      v;
};

// Converts an output value back to syntax. Gaussians print as
// (gaussian-parameters m s).
SExpr to_sexpr(const Value& v);

// Where random choices come from.
class ChoiceSource {
 public:
  virtual ~ChoiceSource() = default;
  // Picks an index with probs[i] > 0.
  virtual std::size_t choose(std::span<const double> probs) = 0;
  // A normal draw, or nullopt to keep the value symbolic.
  virtual std::optional<double> draw_normal(double mean, double sd) = 0;
};

struct Outcome {
  double probability = 0.0;
  ValuePtr value;
};

// Supplies the output distribution of an abstraction applied to numeric
// literals at a given target position. Such a call does not depend on its
// calling context, so its distribution can be computed once and reused.
class CallOracle {
 public:
  virtual ~CallOracle() = default;
  // nullptr means: evaluate the call normally.
  virtual const std::vector<Outcome>* outcomes(const std::string& name,
                                               std::span<const SExpr> args,
                                               const SExpr* hint) = 0;
};

struct EvalLimits {
  std::size_t max_nodes = 10000;
  std::size_t max_steps = 2'000'000;
  std::size_t max_depth = 20000;
};

// Thrown when a branch of the evaluation is abandoned: it cannot produce the
// target, or it exceeded a bound.
struct Pruned {
  enum class Reason { Mismatch, Bound } reason;
};

class Evaluator {
 public:
  // `target`, when given, is the expected output as syntax; constructor
  // applications that cannot produce the expression at their position are
  // pruned. With `prune_literals`, numeric literal mismatches prune too.
  // `bounds_prune` turns exceeded limits into Pruned instead of
  // NonTerminationError.
  Evaluator(const Program& program, ChoiceSource& source, EvalLimits limits,
            const SExpr* target = nullptr, bool prune_literals = false, bool bounds_prune = false);

  // Evaluates the program body; a resulting zero-argument procedure is applied.
  ValuePtr run();

  std::size_t nodes_built() const { return nodes_; }

  // Consulted for targeted calls to abstractions with literal arguments.
  void set_call_oracle(CallOracle* oracle) { oracle_ = oracle; }

 private:
  ValuePtr eval(const SExpr& e, const EnvPtr& env, const SExpr* hint);
  ValuePtr eval_symbol(const std::string& name, const EnvPtr& env, const SExpr* hint);
  ValuePtr apply(const ValuePtr& op, std::span<const SExpr> args, const EnvPtr& env,
                 const SExpr* hint, const SExpr& form);
  ValuePtr apply_primitive(const std::string& name, std::span<const SExpr> args,
                           const EnvPtr& env, const SExpr* hint, const SExpr& form);
  ValuePtr force(Thunk& thunk, const SExpr* hint);
  ValuePtr literal(Number n, const SExpr* hint);
  double number_arg(const SExpr& e, const EnvPtr& env, const SExpr& form);
  [[noreturn]] void exceeded(const std::string& what) const;
  void mismatch() const;

  const Program& program_;
  ChoiceSource& source_;
  EvalLimits limits_;
  const SExpr* target_;
  bool prune_literals_;
  bool bounds_prune_;
  CallOracle* oracle_ = nullptr;
  std::unordered_map<std::string, ValuePtr> globals_;
  std::size_t steps_ = 0;
  std::size_t depth_ = 0;
  std::size_t nodes_ = 0;
};

bool is_primitive_name(std::string_view name);

}  // namespace progmerge::eval
