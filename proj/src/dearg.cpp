#include "progmerge/dearg.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "progmerge/errors.hpp"

namespace progmerge {

namespace {

bool is_application_of(const SExpr& e, std::string_view name) {
  return e.is_list() && e.size() > 0 && e[0].is_symbol(name);
}

std::size_t variable_position(const Abstraction& a, const std::string& v) {
  auto it = std::find(a.vars.begin(), a.vars.end(), v);
  if (it == a.vars.end()) throw ProgramError(v + " is not a parameter of " + a.name);
  return static_cast<std::size_t>(it - a.vars.begin());
}

bool has_variable(const SExpr& e) {
  if (e.is_symbol()) return is_variable_symbol(e.name());
  if (!e.is_list()) return false;
  return std::any_of(e.items().begin(), e.items().end(), has_variable);
}

bool all_numbers(std::span<const SExpr> xs) {
  return std::all_of(xs.begin(), xs.end(), [](const SExpr& x) { return x.is_number(); });
}

double mean_of(std::span<const SExpr> xs) {
  double sum = 0.0;
  for (const auto& x : xs) sum += x.number_value().to_double();
  return sum / static_cast<double>(xs.size());
}

ReplacementOutcome noisy_mean(std::span<const SExpr> instances) {
  if (instances.empty() || !all_numbers(instances)) return std::nullopt;
  return num(mean_of(instances));
}

ReplacementOutcome noisy_gaussian(std::span<const SExpr> instances) {
  if (instances.empty() || !all_numbers(instances)) return std::nullopt;
  double m = mean_of(instances);
  double sd = 0.0;
  if (instances.size() > 1) {
    double ss = 0.0;
    for (const auto& x : instances) {
      double d = x.number_value().to_double() - m;
      ss += d * d;
    }
    sd = std::sqrt(ss / static_cast<double>(instances.size() - 1));
  }
  return lst({sym("gaussian"), num(m), num(sd)});
}

ReplacementOutcome recursion(const Program& p, const Abstraction& a,
                             std::span<const SExpr> instances) {
  std::vector<SExpr> recursive, base;
  for (const auto& x : instances) {
    if (has_variable(x)) continue;
    (is_application_of(x, a.name) ? recursive : base).push_back(x);
  }
  if (recursive.empty() || !terminates(p, a.name, base)) return std::nullopt;
  const auto valid = static_cast<std::int64_t>(recursive.size() + base.size());
  SExpr::List choice{sym("uniform-choice")};
  choice.insert(choice.end(), base.begin(), base.end());
  return lst({sym("if"),
              lst({sym("flip"),
                   SExpr::number(Number::exact(static_cast<std::int64_t>(recursive.size()), valid))}),
              recursive.front(), lst(std::move(choice))});
}

class TerminationCheck {
 public:
  TerminationCheck(const Program& p, std::string_view root) : p_(p) {
    for (const auto& a : p.abstractions) status_[a.name] = Status::Unchecked;
    status_[std::string(root)] = Status::Checking;
  }

  bool base_case(const SExpr& e) {
    if (!e.is_list() || e.size() == 0) return true;
    if (e[0].is_symbol("if") || e[0].is_symbol("uniform-choice")) {
      std::size_t first = e[0].is_symbol("if") ? 2 : 1;
      for (std::size_t i = first; i < e.size(); ++i)
        if (base_case(e[i])) return true;
      return false;
    }
    if (e[0].is_symbol() && p_.find(e[0].name()) && !terminating(e[0].name())) return false;
    for (std::size_t i = 1; i < e.size(); ++i)
      if (!base_case(e[i])) return false;
    return true;
  }

 private:
  enum class Status { Unchecked, Checking, Terminates };

  bool terminating(const std::string& name) {
    Status& s = status_[name];
    if (s == Status::Terminates) return true;
    if (s == Status::Checking) return false;
    s = Status::Checking;
    if (!base_case(p_.find(name)->body)) return false;
    status_[name] = Status::Terminates;
    return true;
  }

  const Program& p_;
  std::map<std::string, Status> status_;
};

}  // namespace

std::string_view kind_name(ReplacementKind kind) {
  switch (kind) {
    case ReplacementKind::NoisyMean: return "noisy-mean";
    case ReplacementKind::NoisyGaussian: return "noisy-gaussian";
    case ReplacementKind::SameVariable: return "same-variable";
    case ReplacementKind::Recursion: return "recursion";
  }
  return "unknown";
}

std::optional<ReplacementKind> parse_kind(std::string_view name) {
  for (auto k : {ReplacementKind::NoisyMean, ReplacementKind::NoisyGaussian,
                 ReplacementKind::SameVariable, ReplacementKind::Recursion})
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

std::vector<ReplacementKind> default_kinds(IncorporationMode mode) {
  ReplacementKind noisy = mode == IncorporationMode::GaussianColors ? ReplacementKind::NoisyMean
                                                                    : ReplacementKind::NoisyGaussian;
  return {noisy, ReplacementKind::SameVariable, ReplacementKind::Recursion};
}

std::vector<SExpr> find_abstraction_applications(const Program& p, std::string_view name) {
  std::vector<SExpr> out;
  auto collect = [&](const SExpr& body) {
    for (const auto& s : all_subexprs(body))
      if (is_application_of(s, name)) out.push_back(s);
  };
  collect(p.body);
  for (const auto& a : p.abstractions) collect(a.body);
  return out;
}

std::vector<SExpr> find_variable_instances(const Program& p, const Abstraction& a,
                                           const std::string& v) {
  std::size_t pos = variable_position(a, v);
  std::vector<SExpr> out;
  for (const auto& app : find_abstraction_applications(p, a.name)) {
    if (app.size() != a.vars.size() + 1)
      throw ProgramError("wrong number of arguments in " + print(app));
    out.push_back(app[pos + 1]);
  }
  return out;
}

bool similar_instances(const SExpr& a, const SExpr& b) {
  if (a.is_list() && b.is_list()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!similar_instances(a[i], b[i])) return false;
    return true;
  }
  if (a.is_number() && b.is_number()) return true;
  return a == b;
}

std::vector<std::string> matching_variables(const Program& p, const Abstraction& a,
                                            const std::string& v,
                                            std::span<const SExpr> instances) {
  std::vector<std::string> out;
  for (const auto& w : a.vars) {
    if (w == v) continue;
    auto other = find_variable_instances(p, a, w);
    if (other.size() != instances.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < other.size() && match; ++i)
      match = similar_instances(other[i], instances[i]);
    if (match) out.push_back(w);
  }
  return out;
}

ReplacementOutcome replacement(ReplacementKind kind, const Program& p, const Abstraction& a,
                               const std::string& v, std::span<const SExpr> instances) {
  switch (kind) {
    case ReplacementKind::NoisyMean: return noisy_mean(instances);
    case ReplacementKind::NoisyGaussian: return noisy_gaussian(instances);
    case ReplacementKind::SameVariable: {
      auto matches = matching_variables(p, a, v, instances);
      if (matches.empty()) return std::nullopt;
      return sym(matches.front());
    }
    case ReplacementKind::Recursion: return recursion(p, a, instances);
  }
  return std::nullopt;
}

bool terminates(const Program& p, std::string_view root, std::span<const SExpr> non_recursive) {
  TerminationCheck check(p, root);
  for (const auto& e : non_recursive)
    if (check.base_case(e)) return true;
  return false;
}

Abstraction remove_abstraction_variable(const Abstraction& a, const std::string& v,
                                        const SExpr& definition) {
  variable_position(a, v);
  Abstraction out{a.name, {}, {}};
  for (const auto& w : a.vars)
    if (w != v) out.vars.push_back(w);
  out.body = lst({lst({sym(std::string(kLambda)), lst({sym(v)}), a.body}), definition});
  return out;
}

Program remove_application_argument(const Program& p, const Abstraction& a,
                                     const std::string& v) {
  const std::size_t pos = variable_position(a, v);
  const std::size_t arity = a.vars.size();
  std::function<SExpr(const SExpr&)> rewrite;
  auto is_app = [&](const SExpr& e) { return is_application_of(e, a.name); };
  auto change = [&](const SExpr& app) {
    if (app.size() != arity + 1) throw ProgramError("wrong number of arguments in " + print(app));
    SExpr::List out{app[0]};
    for (std::size_t i = 1; i < app.size(); ++i)
      if (i != pos + 1) out.push_back(rewrite(app[i]));
    return lst(std::move(out));
  };
  rewrite = [&](const SExpr& e) { return transform_sexpr(is_app, change, e); };
  return map_bodies(p, rewrite);
}

Program deargument_with(const Program& p, const Abstraction& a, const std::string& v,
                        const SExpr& definition) {
  Program updated = replace_abstraction(p, remove_abstraction_variable(a, v, definition));
  return remove_application_argument(updated, a, v);
}

std::optional<Program> deargument(ReplacementKind kind, const Program& p, const Abstraction& a,
                                  const std::string& v) {
  auto instances = find_variable_instances(p, a, v);
  auto definition = replacement(kind, p, a, v, instances);
  if (!definition) return std::nullopt;
  return deargument_with(p, a, v, *definition);
}

std::vector<DeargumentCandidate> all_deargument_candidates(const Program& p,
                                                           std::span<const ReplacementKind> kinds) {
  std::vector<DeargumentCandidate> out;
  for (const auto& a : p.abstractions) {
    for (const auto& v : a.vars) {
      auto instances = find_variable_instances(p, a, v);
      for (auto kind : kinds) {
        if (kind == ReplacementKind::SameVariable) {
          for (const auto& w : matching_variables(p, a, v, instances))
            out.push_back({kind, a.name, v, deargument_with(p, a, v, sym(w))});
          continue;
        }
        if (auto d = replacement(kind, p, a, v, instances))
          out.push_back({kind, a.name, v, deargument_with(p, a, v, *d)});
      }
    }
  }
  return out;
}

}  // namespace progmerge
