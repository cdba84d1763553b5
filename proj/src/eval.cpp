#include "progmerge/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "progmerge/errors.hpp"

namespace progmerge::eval {

struct Thunk {
  SExpr expr;
  EnvPtr env;
  ValuePtr memo;
  bool forcing = false;
};

struct Env {
  std::string name;
  std::shared_ptr<Thunk> thunk;
  EnvPtr parent;
};

namespace {

constexpr std::array<std::string_view, 9> kPrimitives = {
    "node", "data", "color", "size", "flip", "gaussian", "gaussian-parameters", "list",
    "uniform-draw"};

bool is_constructor(std::string_view name) {
  return name == "node" || name == "data" || name == "color" || name == "size";
}

Thunk* lookup(const EnvPtr& env, const std::string& name) {
  for (const Env* e = env.get(); e; e = e->parent.get())
    if (e->name == name) return e->thunk.get();
  return nullptr;
}

ValuePtr make(auto&& v) {
  return std::make_shared<const Value>(Value{std::forward<decltype(v)>(v)});
}

struct DepthGuard {
  std::size_t& depth;
  explicit DepthGuard(std::size_t& d) : depth(d) { ++depth; }
  ~DepthGuard() { --depth; }
};

std::string describe(const Value& v) { return print(to_sexpr(v)); }

}  // namespace

bool is_primitive_name(std::string_view name) {
  for (auto p : kPrimitives)
    if (p == name) return true;
  return false;
}

SExpr to_sexpr(const Value& v) {
  return std::visit(
      [](const auto& x) -> SExpr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) {
          return SExpr::number(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return sym(x ? "#t" : "#f");
        } else if constexpr (std::is_same_v<T, SymbolValue>) {
          return sym(x.name);
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return lst({sym("gaussian-parameters"), num(x.mean), num(x.sd)});
        } else if constexpr (std::is_same_v<T, Constructed>) {
          SExpr::List items{sym(x.tag)};
          for (const auto& a : x.args) items.push_back(to_sexpr(*a));
          return lst(std::move(items));
        } else if constexpr (std::is_same_v<T, ListValue>) {
          SExpr::List items{sym("list")};
          for (const auto& a : x.items) items.push_back(to_sexpr(*a));
          return lst(std::move(items));
        } else if constexpr (std::is_same_v<T, Closure>) {
          return sym("#<procedure>");
        } else if constexpr (std::is_same_v<T, Primitive>) {
          return sym(x.name);
        } else {
          return lst({});
        }
      },
      v.v);
}

Evaluator::Evaluator(const Program& program, ChoiceSource& source, EvalLimits limits,
                     const SExpr* target, bool prune_literals, bool bounds_prune)
    : program_(program),
      source_(source),
      limits_(limits),
      target_(target),
      prune_literals_(prune_literals),
      bounds_prune_(bounds_prune) {
  for (const auto& a : program_.abstractions)
    globals_.emplace(a.name, make(Closure{a.vars, a.body, nullptr}));
}

ValuePtr Evaluator::run() {
  const SExpr& body = program_.body;
  if (body.is_list() && body.size() == 3 && body[0].is_symbol() &&
      is_lambda_symbol(body[0].name()) && body[1].empty_list()) {
    return eval(body[2], nullptr, target_);
  }
  ValuePtr v = eval(body, nullptr, target_);
  if (const auto* c = std::get_if<Closure>(&v->v); c && c->params.empty())
    return eval(c->body, c->env, target_);
  return v;
}

void Evaluator::exceeded(const std::string& what) const {
  if (bounds_prune_) throw Pruned{Pruned::Reason::Bound};
  throw NonTerminationError("evaluation exceeded the " + what + " limit");
}

void Evaluator::mismatch() const { throw Pruned{Pruned::Reason::Mismatch}; }

ValuePtr Evaluator::literal(Number n, const SExpr* hint) {
  if (hint) {
    if (!hint->is_number()) mismatch();
    if (prune_literals_ && hint->number_value().to_double() != n.to_double()) mismatch();
  }
  return make(n);
}

ValuePtr Evaluator::force(Thunk& thunk, const SExpr* hint) {
  if (thunk.memo) return thunk.memo;
  if (thunk.forcing) throw EvalError("cyclic argument evaluation");
  thunk.forcing = true;
  ValuePtr v = eval(thunk.expr, thunk.env, hint);
  thunk.forcing = false;
  thunk.memo = v;
  return v;
}

ValuePtr Evaluator::eval(const SExpr& e, const EnvPtr& env, const SExpr* hint) {
  if (++steps_ > limits_.max_steps) exceeded("step");
  DepthGuard guard(depth_);
  if (depth_ > limits_.max_depth) exceeded("depth");

  if (e.is_number()) return literal(e.number_value(), hint);
  if (e.is_symbol()) return eval_symbol(e.name(), env, hint);
  if (e.size() == 0) {
    if (hint && !hint->empty_list()) mismatch();
    return make(Nil{});
  }

  const SExpr& head = e[0];
  if (head.is_symbol() && !lookup(env, head.name())) {
    const std::string& name = head.name();
    if (is_lambda_symbol(name)) {
      if (e.size() != 3 || !e[1].is_list()) throw EvalError("malformed λ form: " + print(e));
      std::vector<std::string> params;
      for (const auto& p : e[1].items()) {
        if (!p.is_symbol()) throw EvalError("malformed λ binder: " + print(e));
        params.push_back(p.name());
      }
      return make(Closure{std::move(params), e[2], env});
    }
    if (name == "if") {
      if (e.size() != 4) throw EvalError("malformed if: " + print(e));
      ValuePtr c = eval(e[1], env, nullptr);
      const bool* b = std::get_if<bool>(&c->v);
      if (!b) throw EvalError("if condition is not a boolean: " + describe(*c));
      return eval(*b ? e[2] : e[3], env, hint);
    }
    if (name == "begin") {
      if (e.size() < 2) throw EvalError("empty begin");
      for (std::size_t i = 1; i + 1 < e.size(); ++i) eval(e[i], env, nullptr);
      return eval(e[e.size() - 1], env, hint);
    }
    if (name == "uniform-choice") {
      std::size_t n = e.size() - 1;
      if (n == 0) throw EvalError("uniform-choice with no alternatives");
      std::vector<double> probs(n, 1.0 / static_cast<double>(n));
      std::size_t i = source_.choose(probs);
      return eval(e[i + 1], env, hint);
    }
  }

  if (oracle_ && hint && head.is_symbol() && globals_.count(head.name()) &&
      !lookup(env, head.name())) {
    std::span<const SExpr> args(e.items().data() + 1, e.size() - 1);
    bool literal_args = std::all_of(args.begin(), args.end(),
                                    [](const SExpr& a) { return a.is_number(); });
    if (literal_args) {
      if (const auto* outs = oracle_->outcomes(head.name(), args, hint)) {
        if (outs->empty()) mismatch();
        std::vector<double> probs;
        probs.reserve(outs->size());
        for (const auto& o : *outs) probs.push_back(o.probability);
        return (*outs)[source_.choose(probs)].value;
      }
    }
  }

  ValuePtr op = eval(head, env, nullptr);
  std::span<const SExpr> args(e.items().data() + 1, e.size() - 1);
  return apply(op, args, env, hint, e);
}

ValuePtr Evaluator::eval_symbol(const std::string& name, const EnvPtr& env, const SExpr* hint) {
  if (Thunk* t = lookup(env, name)) return force(*t, hint);
  if (auto it = globals_.find(name); it != globals_.end()) return it->second;
  if (is_primitive_name(name)) return make(Primitive{name});
  if (name == "#t" || name == "#f") {
    if (hint && !hint->is_symbol(name)) mismatch();
    return make(name == "#t");
  }
  if (is_variable_symbol(name) || is_function_symbol(name))
    throw EvalError("unbound symbol " + name);
  if (hint && !hint->is_symbol(name)) mismatch();
  return make(SymbolValue{name});
}

ValuePtr Evaluator::apply(const ValuePtr& op, std::span<const SExpr> args, const EnvPtr& env,
                          const SExpr* hint, const SExpr& form) {
  if (const auto* c = std::get_if<Closure>(&op->v)) {
    if (c->params.size() != args.size())
      throw EvalError("wrong number of arguments in " + print(form));
    EnvPtr inner = c->env;
    for (std::size_t i = 0; i < args.size(); ++i) {
      auto thunk = std::make_shared<Thunk>(Thunk{args[i], env, nullptr, false});
      inner = std::make_shared<const Env>(Env{c->params[i], std::move(thunk), inner});
    }
    return eval(c->body, inner, hint);
  }
  if (const auto* p = std::get_if<Primitive>(&op->v))
    return apply_primitive(p->name, args, env, hint, form);
  throw EvalError("not a procedure: " + describe(*op) + " in " + print(form));
}

double Evaluator::number_arg(const SExpr& e, const EnvPtr& env, const SExpr& form) {
  ValuePtr v = eval(e, env, nullptr);
  const Number* n = std::get_if<Number>(&v->v);
  if (!n) throw EvalError("expected a number in " + print(form) + ", got " + describe(*v));
  return n->to_double();
}

ValuePtr Evaluator::apply_primitive(const std::string& name, std::span<const SExpr> args,
                                    const EnvPtr& env, const SExpr* hint, const SExpr& form) {
  if (is_constructor(name)) {
    if (hint && (!hint->is_list() || hint->size() != args.size() + 1 || !(*hint)[0].is_symbol(name)))
      mismatch();
    if (name == "node" && ++nodes_ > limits_.max_nodes) exceeded("node");
    Constructed c{name, {}};
    c.args.reserve(args.size());
    for (std::size_t i = 0; i < args.size(); ++i)
      c.args.push_back(eval(args[i], env, hint ? &(*hint)[i + 1] : nullptr));
    return make(std::move(c));
  }
  if (name == "flip") {
    if (args.size() > 1) throw EvalError("flip takes at most one argument: " + print(form));
    double p = args.empty() ? 0.5 : number_arg(args[0], env, form);
    if (!(p >= 0.0 && p <= 1.0)) throw EvalError("flip probability out of range: " + print(form));
    std::array<double, 2> probs{p, 1.0 - p};
    bool outcome = source_.choose(probs) == 0;
    if (hint && !hint->is_symbol(outcome ? "#t" : "#f")) mismatch();
    return make(outcome);
  }
  if (name == "gaussian" || name == "gaussian-parameters") {
    if (args.size() != 2) throw EvalError(name + " expects 2 arguments: " + print(form));
    if (hint && !hint->is_number()) mismatch();
    ValuePtr mean_value = eval(args[0], env, nullptr);
    double sd = number_arg(args[1], env, form);
    if (!(sd >= 0.0)) throw EvalError("negative standard deviation in " + print(form));
    double mean = 0.0;
    if (const auto* n = std::get_if<Number>(&mean_value->v)) {
      mean = n->to_double();
    } else if (const auto* g = std::get_if<Gaussian>(&mean_value->v)) {
      // A normal whose mean is itself normal is normal.
      mean = g->mean;
      sd = std::sqrt(g->sd * g->sd + sd * sd);
    } else {
      throw EvalError("expected a number in " + print(form) + ", got " + describe(*mean_value));
    }
    if (auto x = source_.draw_normal(mean, sd)) return make(Number::inexact(*x));
    return make(Gaussian{mean, sd});
  }
  if (name == "list") {
    ListValue l;
    for (const auto& a : args) l.items.push_back(eval(a, env, nullptr));
    return make(std::move(l));
  }
  if (name == "uniform-draw") {
    if (args.size() != 1) throw EvalError("uniform-draw expects 1 argument: " + print(form));
    ValuePtr v = eval(args[0], env, nullptr);
    const auto* l = std::get_if<ListValue>(&v->v);
    if (!l || l->items.empty()) throw EvalError("uniform-draw needs a non-empty list");
    std::vector<double> probs(l->items.size(), 1.0 / static_cast<double>(l->items.size()));
    return l->items[source_.choose(probs)];
  }
  throw EvalError("unknown primitive " + name);
}

}  // namespace progmerge::eval
