#include "progmerge/program.hpp"

#include <algorithm>
#include <set>

#include "progmerge/errors.hpp"

namespace progmerge {

const Abstraction* Program::find(std::string_view name) const {
  for (const auto& a : abstractions)
    if (a.name == name) return &a;
  return nullptr;
}

std::size_t program_size(const Program& p) {
  std::size_t n = sexpr_size(p.body);
  for (const auto& a : p.abstractions) n += sexpr_size(a.body);
  return n;
}

double log_prior(const Program& p, double alpha) {
  return -alpha * static_cast<double>(program_size(p));
}

namespace {

bool contains_call_to(const SExpr& e, std::string_view head) {
  if (!e.is_list()) return false;
  if (e.is_call_to(head)) return true;
  return std::any_of(e.items().begin(), e.items().end(),
                     [&](const SExpr& item) { return contains_call_to(item, head); });
}

SExpr thunkify(const SExpr& e) { return lst({sym(std::string(kLambda)), lst({}), e}); }

SExpr desugar_expr(SExpr e) {
  auto is_choice = [](const SExpr& s) { return s.is_call_to("uniform-choice"); };
  auto to_draw = [](const SExpr& s) {
    if (s.size() < 2) throw ProgramError("uniform-choice with no alternatives");
    SExpr::List thunks{sym("list")};
    for (std::size_t i = 1; i < s.size(); ++i) thunks.push_back(thunkify(s[i]));
    return lst({lst({sym("uniform-draw"), lst(std::move(thunks))})});
  };
  while (contains_call_to(e, "uniform-choice")) e = transform_sexpr(is_choice, to_draw, e);
  return e;
}

SExpr replace_gaussian_expr(const SExpr& e) {
  return transform_sexpr(
      [](const SExpr& s) { return s.is_call_to("gaussian"); },
      [](const SExpr& s) {
        if (s.size() != 3) throw ProgramError("gaussian expects 2 arguments: " + print(s));
        // Arguments may themselves contain gaussian calls.
        return lst({sym("gaussian-parameters"), replace_gaussian_expr(s[1]),
                    replace_gaussian_expr(s[2])});
      },
      e);
}

class Validator {
 public:
  explicit Validator(const Program& p) : p_(p) {}

  void run() {
    std::set<std::string> names;
    for (const auto& a : p_.abstractions) {
      if (!names.insert(a.name).second) throw ProgramError("duplicate abstraction " + a.name);
      check_binders(a.vars, "abstraction " + a.name);
      walk(a.body, std::set<std::string>(a.vars.begin(), a.vars.end()));
    }
    walk(p_.body, {});
  }

 private:
  void check_binders(const std::vector<std::string>& vars, const std::string& where) {
    std::set<std::string> seen;
    for (const auto& v : vars) {
      if (is_function_symbol(v) || is_lambda_symbol(v) || p_.find(v))
        throw ProgramError("invalid parameter " + v + " in " + where);
      if (!seen.insert(v).second) throw ProgramError("repeated parameter " + v + " in " + where);
    }
  }

  void walk(const SExpr& e, const std::set<std::string>& scope) {
    if (e.is_number()) return;
    if (e.is_symbol()) {
      const auto& n = e.name();
      if (scope.count(n)) return;
      if (is_variable_symbol(n)) throw ProgramError("free variable " + n);
      if (is_function_symbol(n) && !p_.find(n)) throw ProgramError("unknown abstraction " + n);
      return;
    }
    if (e.size() == 0) return;
    const SExpr& head = e[0];
    if (head.is_symbol() && is_lambda_symbol(head.name())) {
      if (e.size() != 3 || !e[1].is_list())
        throw ProgramError("malformed λ form: " + print(e));
      std::vector<std::string> params;
      for (const auto& v : e[1].items()) {
        if (!v.is_symbol()) throw ProgramError("malformed λ binder: " + print(e[1]));
        params.push_back(v.name());
      }
      check_binders(params, "λ form");
      auto inner = scope;
      inner.insert(params.begin(), params.end());
      walk(e[2], inner);
      return;
    }
    if (head.is_symbol() && !scope.count(head.name())) {
      if (const Abstraction* a = p_.find(head.name())) {
        if (e.size() - 1 != a->vars.size())
          throw ProgramError("arity mismatch calling " + a->name + ": " + print(e));
      }
    }
    for (const auto& item : e.items()) walk(item, scope);
  }

  const Program& p_;
};

std::vector<std::string> var_names(const SExpr& list, const std::string& where) {
  if (!list.is_list()) throw ProgramError("expected parameter list in " + where);
  std::vector<std::string> out;
  for (const auto& v : list.items()) {
    if (!v.is_symbol()) throw ProgramError("non-symbol parameter in " + where);
    out.push_back(v.name());
  }
  return out;
}

SExpr var_list(const std::vector<std::string>& vars) {
  SExpr::List items;
  for (const auto& v : vars) items.push_back(sym(v));
  return lst(std::move(items));
}

Abstraction parse_define(const SExpr& d) {
  if (d.size() != 3) throw ProgramError("malformed define: " + print(d));
  if (d[1].is_list()) {
    if (d[1].size() == 0 || !d[1][0].is_symbol()) throw ProgramError("malformed define: " + print(d));
    SExpr::List params(d[1].items().begin() + 1, d[1].items().end());
    return {d[1][0].name(), var_names(lst(std::move(params)), "define"), d[2]};
  }
  if (!d[1].is_symbol()) throw ProgramError("malformed define: " + print(d));
  const SExpr& fn = d[2];
  if (!(fn.size() == 3 && fn[0].is_symbol() && is_lambda_symbol(fn[0].name())))
    throw ProgramError("define of " + d[1].name() + " is not a λ form");
  return {d[1].name(), var_names(fn[1], "define " + d[1].name()), fn[2]};
}

}  // namespace

Program desugar(const Program& p) { return map_bodies(p, desugar_expr); }

Program replace_gaussian(const Program& p) { return map_bodies(p, replace_gaussian_expr); }

Program replace_abstraction(const Program& p, const Abstraction& a) {
  Program out = p;
  for (auto& existing : out.abstractions) {
    if (existing.name == a.name) {
      existing = a;
      return out;
    }
  }
  throw ProgramError("no abstraction named " + a.name);
}

void validate_program(const Program& p) { Validator(p).run(); }

bool is_valid_program(const Program& p) {
  try {
    validate_program(p);
    return true;
  } catch (const ProgramError&) {
    return false;
  }
}

std::vector<SExpr> program_expressions(const Program& p) {
  std::vector<SExpr> out;
  for (const auto& a : p.abstractions) out.push_back(a.body);
  out.push_back(p.body);
  return out;
}

SymbolGenerator symbols_after(const Program& p) {
  auto exprs = program_expressions(p);
  for (const auto& a : p.abstractions) {
    exprs.push_back(sym(a.name));
    exprs.push_back(var_list(a.vars));
  }
  return SymbolGenerator::after(exprs);
}

Program program_from_sexpr(const SExpr& e) {
  Program p;
  if (e.is_call_to("program")) {
    if (e.size() != 3 || !e[1].is_list()) throw ProgramError("malformed program form");
    for (const auto& a : e[1].items()) {
      if (!a.is_call_to("abstraction") || a.size() != 4 || !a[1].is_symbol())
        throw ProgramError("malformed abstraction: " + print(a));
      p.abstractions.push_back({a[1].name(), var_names(a[2], a[1].name()), a[3]});
    }
    p.body = e[2];
    return p;
  }
  if (e.is_call_to("begin")) {
    if (e.size() < 2) throw ProgramError("empty begin");
    for (std::size_t i = 1; i + 1 < e.size(); ++i) {
      if (!e[i].is_call_to("define")) throw ProgramError("expected define: " + print(e[i]));
      p.abstractions.push_back(parse_define(e[i]));
    }
    const SExpr& main = e[e.size() - 1];
    if (main.is_call_to("define")) throw ProgramError("begin has no main expression");
    p.body = main;
    return p;
  }
  p.body = e;
  return p;
}

Program parse_program(std::string_view text) { return program_from_sexpr(parse(text)); }

SExpr program_to_constructor_sexpr(const Program& p) {
  SExpr::List abstractions;
  for (const auto& a : p.abstractions)
    abstractions.push_back(lst({sym("abstraction"), sym(a.name), var_list(a.vars), a.body}));
  return lst({sym("program"), lst(std::move(abstractions)), p.body});
}

SExpr program_to_sugared_sexpr(const Program& p) {
  SExpr::List items{sym("begin")};
  for (const auto& a : p.abstractions) {
    SExpr::List head{sym(a.name)};
    for (const auto& v : a.vars) head.push_back(sym(v));
    items.push_back(lst({sym("define"), lst(std::move(head)), a.body}));
  }
  items.push_back(p.body);
  return lst(std::move(items));
}

std::string print_program(const Program& p, const PrintOptions& options) {
  SExpr s = program_to_sugared_sexpr(p);
  std::string out = "(begin";
  for (std::size_t i = 1; i < s.size(); ++i) {
    out += "\n  ";
    out += print(s[i], options);
  }
  out += ")";
  return out;
}

std::string print_program_constructor(const Program& p, const PrintOptions& options) {
  return print(program_to_constructor_sexpr(p), options);
}

}  // namespace progmerge
