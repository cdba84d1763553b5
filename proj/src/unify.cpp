#include "progmerge/unify.hpp"

#include <algorithm>

#include "progmerge/errors.hpp"

namespace progmerge {

const SExpr* Substitution::find(std::string_view var) const {
  for (const auto& [name, value] : bindings_)
    if (name == var) return &value;
  return nullptr;
}

bool Substitution::bind(const std::string& var, const SExpr& value) {
  if (const SExpr* existing = find(var)) return *existing == value;
  bindings_.emplace_back(var, value);
  return true;
}

namespace {

bool is_var(const SExpr& e, const std::vector<std::string>& vars) {
  return e.is_symbol() && std::find(vars.begin(), vars.end(), e.name()) != vars.end();
}

bool unify_into(const SExpr& e, const SExpr& pattern, const std::vector<std::string>& vars,
                Substitution& s) {
  if (is_var(pattern, vars)) {
    if (e.is_symbol() && is_lambda_symbol(e.name())) return false;
    return s.bind(pattern.name(), e);
  }
  if (e.is_atom() && pattern.is_atom()) return e == pattern;
  if (e.is_atom() || pattern.is_atom()) return false;
  if (e.size() != pattern.size()) return false;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (!unify_into(e[i], pattern[i], vars, s)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> unify(const SExpr& e, const SExpr& pattern,
                                  const std::vector<std::string>& vars) {
  Substitution s;
  if (!unify_into(e, pattern, vars, s)) return std::nullopt;
  return s;
}

SExpr instantiate(const SExpr& pattern, const Substitution& s) {
  if (pattern.is_symbol()) {
    if (const SExpr* v = s.find(pattern.name())) return *v;
    return pattern;
  }
  if (!pattern.is_list()) return pattern;
  SExpr::List out;
  out.reserve(pattern.size());
  for (const auto& item : pattern.items()) out.push_back(instantiate(item, s));
  return lst(std::move(out));
}

SExpr replace_matches(const SExpr& e, const Abstraction& a) {
  if (auto s = unify(e, a.body, a.vars)) {
    SExpr::List call{sym(a.name)};
    for (const auto& v : a.vars) {
      const SExpr* bound = s->find(v);
      // A parameter absent from the body leaves nothing to pass.
      if (!bound) throw ProgramError("abstraction " + a.name + " does not use " + v);
      call.push_back(replace_matches(*bound, a));
    }
    return lst(std::move(call));
  }
  if (!e.is_list()) return e;
  SExpr::List out;
  out.reserve(e.size());
  for (const auto& item : e.items()) out.push_back(replace_matches(item, a));
  return lst(std::move(out));
}

Program compress_program(const Program& p, const Abstraction& a) {
  if (p.find(a.name)) throw ProgramError("abstraction name " + a.name + " already in use");
  Program out = map_bodies(p, [&](const SExpr& body) { return replace_matches(body, a); });
  out.abstractions.insert(out.abstractions.begin(), a);
  return out;
}

}  // namespace progmerge
