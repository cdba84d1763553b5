#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "progmerge/antiunify.hpp"
#include "progmerge/unify.hpp"

using namespace progmerge;

namespace {

Program fig2_program() {
  return parse_program(oracle::read_file(PROGMERGE_DATA_DIR "/fig2.prog"));
}

bool has_abstraction(const std::vector<Program>& ps, const std::string& body, std::size_t arity) {
  return std::any_of(ps.begin(), ps.end(), [&](const Program& p) {
    return std::any_of(p.abstractions.begin(), p.abstractions.end(), [&](const Abstraction& a) {
      return a.vars.size() == arity && (body.empty() || print(a.body) == body);
    });
  });
}

}  // namespace

TEST_SUITE("antiunify") {

TEST_CASE("anti_unify") {
  SymbolGenerator gen;
  auto r = anti_unify(parse("(+ (+ 2 2) (- 2 5))"), parse("(+ (- 2 3) 4)"), gen);
  CHECK(print(r.pattern) == "(+ (V1 2 V2) V3)");
  CHECK(r.variables == std::vector<std::string>{"V1", "V2", "V3"});

  SymbolGenerator g2;
  SExpr e = parse("(node (a b) 3)");
  auto same = anti_unify(e, e, g2);
  CHECK(same.pattern == e);
  CHECK(same.variables.empty());

  SymbolGenerator g3;
  auto whole = anti_unify(parse("(node a)"), parse("(node b c)"), g3);
  CHECK(print(whole.pattern) == "V1");
}

TEST_CASE("anti_unify instantiates back to both sources") {
  SExpr a = parse("(node (data (color 70) (size 0.7)) (node x))");
  SExpr b = parse("(node (data (color 43) (size 0.7)) (leaf))");
  SymbolGenerator gen(5, 1);
  auto r = anti_unify(a, b, gen);
  CHECK(r.variables.front() == "V5");
  auto sa = unify(a, r.pattern, r.variables);
  auto sb = unify(b, r.pattern, r.variables);
  REQUIRE(sa);
  REQUIRE(sb);
  CHECK(instantiate(r.pattern, *sa) == a);
  CHECK(instantiate(r.pattern, *sb) == b);
}

TEST_CASE("canonical_pattern") {
  CHECK(print(canonical_pattern(parse("(+ V7 (f V3))"), {"V7", "V3"})) == "(+ V1 (f V2))");
}

TEST_CASE("condense_program") {
  Program none = parse_program("(λ () (node a))");
  CHECK(condense_program(none) == std::vector<SExpr>{none.body});
  Program two = parse_program(
      "(begin (define (F1) (node a)) (define (F2) (node b)) (λ () (node (F1) (F2))))");
  auto c = condense_program(two);
  REQUIRE(c.size() == 3);
  CHECK(print(c[0]) == "(node a)");
  CHECK(print(c[1]) == "(node b)");
  CHECK(c[2] == two.body);
  CHECK(condense_program(fig2_program()).size() == 1);
}

TEST_CASE("possible_abstractions") {
  auto cands = possible_abstractions({parse("(+ (+ 2 2) (- 2 5))")}, SymbolGenerator{});
  std::vector<std::string> bodies;
  for (const auto& a : cands) bodies.push_back(print(a.body));
  CHECK(std::find(bodies.begin(), bodies.end(), "(V1 2 V2)") != bodies.end());
  CHECK(std::find(bodies.begin(), bodies.end(), "(+ V1 V2)") != bodies.end());
  for (const auto& a : cands) {
    CHECK(a.name == "F1");
    CHECK(sexpr_size(a.body) > 1);
  }

  // no repeated structure and no equal-length pairs: nothing survives
  CHECK(possible_abstractions({parse("(a (b c d) (e))")}, SymbolGenerator{}).empty());
}

TEST_CASE("possible_abstractions drops duplicates and binder variables") {
  auto cands = possible_abstractions({parse("(u (λ (x) (f x)) (λ (y) (f y)) (g 1) (g 2) (g 3))")},
                                     SymbolGenerator{});
  std::vector<std::string> keys;
  for (const auto& a : cands) {
    keys.push_back(print(canonical_pattern(a.body, a.vars)));
    CHECK(print(a.body).find("(λ (V") == std::string::npos);
  }
  auto sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  CHECK(std::count(keys.begin(), keys.end(), "(g V1)") == 1);
}

TEST_CASE("compressions of the two-tree program") {
  Program p = fig2_program();
  auto cs = compressions(p);
  CHECK(has_abstraction(cs, "(data (color (gaussian V1 25)) (size V2))", 2));
  CHECK(has_abstraction(cs, "", 4));
  for (const auto& c : cs) {
    CHECK(program_size(c) <= program_size(p) + 1);
    CHECK(is_valid_program(c));
  }
  CHECK(compressions(p, true).size() >= cs.size());
}

TEST_CASE("compressions of a program without shared structure") {
  CHECK(compressions(parse_program("(λ () (node (data (color 1) (size 2))))")).empty());
}

}  // TEST_SUITE
