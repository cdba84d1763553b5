#include "progmerge/antiunify.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "progmerge/errors.hpp"
#include "progmerge/unify.hpp"

namespace progmerge {

namespace {

SExpr build_pattern(const SExpr& a, const SExpr& b, SymbolGenerator& gen,
                    std::vector<std::string>& vars) {
  auto fresh = [&] {
    vars.push_back(gen.fresh_var());
    return sym(vars.back());
  };
  if (a.is_atom() && b.is_atom()) return a == b ? a : fresh();
  if (a.is_atom() || b.is_atom()) return fresh();
  if (a.size() != b.size()) return fresh();
  SExpr::List items;
  items.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) items.push_back(build_pattern(a[i], b[i], gen, vars));
  return lst(std::move(items));
}

bool contains(const std::vector<std::string>& vars, const SExpr& e) {
  return e.is_symbol() && std::find(vars.begin(), vars.end(), e.name()) != vars.end();
}

bool variable_in_binder(const SExpr& e, const std::vector<std::string>& vars) {
  if (!e.is_list()) return false;
  if (e.size() >= 2 && e[0].is_symbol() && is_lambda_symbol(e[0].name())) {
    if (contains(vars, e[1])) return true;
    if (e[1].is_list())
      for (const auto& b : e[1].items())
        if (contains(vars, b)) return true;
  }
  for (const auto& item : e.items())
    if (variable_in_binder(item, vars)) return true;
  return false;
}

bool has_constant_atom(const SExpr& e, const std::vector<std::string>& vars) {
  if (!e.is_list()) return !contains(vars, e);
  for (const auto& item : e.items())
    if (has_constant_atom(item, vars)) return true;
  return false;
}

SExpr rename(const SExpr& e, const std::map<std::string, std::string>& names) {
  if (e.is_symbol()) {
    auto it = names.find(e.name());
    return it == names.end() ? e : sym(it->second);
  }
  if (!e.is_list()) return e;
  SExpr::List out;
  for (const auto& item : e.items()) out.push_back(rename(item, names));
  return lst(std::move(out));
}

void order_of_occurrence(const SExpr& e, const std::vector<std::string>& vars,
                         std::vector<std::string>& seen) {
  if (contains(vars, e)) {
    if (std::find(seen.begin(), seen.end(), e.name()) == seen.end()) seen.push_back(e.name());
  } else if (e.is_list()) {
    for (const auto& item : e.items()) order_of_occurrence(item, vars, seen);
  }
}

}  // namespace

AntiUnifyResult anti_unify(const SExpr& a, const SExpr& b, SymbolGenerator& gen) {
  AntiUnifyResult r;
  r.pattern = build_pattern(a, b, gen, r.variables);
  return r;
}

SExpr canonical_pattern(const SExpr& pattern, const std::vector<std::string>& vars) {
  std::vector<std::string> seen;
  order_of_occurrence(pattern, vars, seen);
  // Route through placeholder names so V2->V1 and V1->V2 cannot collide.
  std::map<std::string, std::string> to_tmp, to_final;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    to_tmp[seen[i]] = "\x01" + std::to_string(i + 1);
    to_final["\x01" + std::to_string(i + 1)] = "V" + std::to_string(i + 1);
  }
  return rename(rename(pattern, to_tmp), to_final);
}

std::vector<SExpr> condense_program(const Program& p) { return program_expressions(p); }

std::vector<Abstraction> possible_abstractions(const std::vector<SExpr>& exprs,
                                               const SymbolGenerator& gen) {
  // Structurally equal subexpressions give identical candidates, so pair
  // distinct structures, plus each structure with itself when it repeats.
  std::vector<SExpr> unique;
  std::vector<std::size_t> counts;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& e : exprs) {
    for (const auto& s : all_subexprs(e)) {
      auto [it, inserted] = index.emplace(print(s), unique.size());
      if (inserted) {
        unique.push_back(s);
        counts.push_back(1);
      } else {
        ++counts[it->second];
      }
    }
  }

  const std::string name = "F" + std::to_string(gen.next_func_index());
  std::vector<Abstraction> out;
  std::unordered_set<std::string> keys;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    for (std::size_t j = i; j < unique.size(); ++j) {
      if (i == j && counts[i] < 2) continue;
      SymbolGenerator local = gen;
      AntiUnifyResult r = anti_unify(unique[i], unique[j], local);
      if (contains(r.variables, r.pattern)) continue;
      if (sexpr_size(r.pattern) <= 1) continue;
      if (!has_constant_atom(r.pattern, r.variables)) continue;
      if (variable_in_binder(r.pattern, r.variables)) continue;
      if (!keys.insert(print(canonical_pattern(r.pattern, r.variables))).second) continue;
      out.push_back({name, std::move(r.variables), std::move(r.pattern)});
    }
  }
  return out;
}

std::vector<Program> compressions(const Program& p, const SymbolGenerator& gen, bool no_filter) {
  const std::size_t limit = program_size(p) + 1;
  std::vector<Program> out;
  for (const auto& a : possible_abstractions(condense_program(p), gen)) {
    Program cp = compress_program(p, a);
    if (!no_filter && program_size(cp) > limit) continue;
    if (!is_valid_program(cp)) continue;
    out.push_back(std::move(cp));
  }
  return out;
}

std::vector<Program> compressions(const Program& p, bool no_filter) {
  return compressions(p, symbols_after(p), no_filter);
}

}  // namespace progmerge
