#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "progmerge/sexpr.hpp"

using namespace progmerge;

namespace {

// Random expressions over a small alphabet, for round-trip checks.
SExpr random_sexpr(std::mt19937& gen, int depth) {
  std::uniform_int_distribution<int> pick(0, 5);
  int k = depth <= 0 ? pick(gen) % 3 : pick(gen);
  if (k == 0) return sym(std::vector<std::string>{"node", "V1", "F2", "a", "λ"}[gen() % 5]);
  if (k == 1) return num(static_cast<std::int64_t>(gen() % 200) - 100);
  if (k == 2) return SExpr::number(Number::exact(static_cast<std::int64_t>(gen() % 50) + 1, 7));
  SExpr::List items;
  int n = static_cast<int>(gen() % 4);
  for (int i = 0; i < n; ++i) items.push_back(random_sexpr(gen, depth - 1));
  return lst(std::move(items));
}

std::size_t list_nodes(const SExpr& e) {
  if (!e.is_list()) return 0;
  std::size_t n = 1;
  for (const auto& c : e.items()) n += list_nodes(c);
  return n;
}

}  // namespace

TEST_SUITE("sexpr") {

TEST_CASE("parse builds nested lists") {
  SExpr e = parse("(+ 2 2)");
  REQUIRE(e.is_list());
  CHECK(e.size() == 3);
  CHECK(e[0].is_symbol("+"));
  CHECK(e[1] == num(std::int64_t{2}));

  SExpr t = parse("(node (data (color 1) (size 2)))");
  CHECK(t[1][1][0].is_symbol("color"));
  CHECK(t[1][2][1] == num(std::int64_t{2}));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse("((1) (2"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("(a) b"), ParseError);
  CHECK_THROWS_AS(parse(")"), ParseError);
}

TEST_CASE("number tokens") {
  CHECK(parse("29/33").number_value().is_exact());
  CHECK(parse("-4").number_value().is_integer());
  CHECK_FALSE(parse("216.5").number_value().is_exact());
  CHECK(parse(".5").number_value().to_double() == 0.5);
  // eqv: exact and inexact never compare equal
  CHECK_FALSE(parse("1/2") == parse("0.5"));
  CHECK(parse("2/4") == parse("1/2"));
}

TEST_CASE("print") {
  CHECK(print(parse("(+ 2 2)")) == "(+ 2 2)");
  CHECK(print(num(216.5)) == "216.5");
  CHECK(print(parse("29/33")) == "29/33");
  CHECK(print(parse("29/33"), PrintOptions{false}) == print(num(29.0 / 33.0)));
  CHECK(print(parse("(  a   (b  c ) )")) == "(a (b c))");
  CHECK(print(parse("()")) == "()");
  CHECK(print(num(0.1)) == "0.1");
}

TEST_CASE("sexpr_size") {
  CHECK(sexpr_size(parse("(+ V1 V2)")) == 3);
  const std::string data = "(data (color (gaussian V1 25)) (size V2))";
  CHECK(sexpr_size(parse(data)) == 7);
  CHECK(sexpr_size(parse(data)) == oracle::count_atoms(data));
  CHECK(sexpr_size(parse("()")) == 0);
}

TEST_CASE("all_subexprs") {
  auto subs = all_subexprs(parse("(+ (+ 2 2) (- 2 5))"));
  REQUIRE(subs.size() == 3);
  CHECK(print(subs[0]) == "(+ (+ 2 2) (- 2 5))");
  CHECK(print(subs[1]) == "(+ 2 2)");
  CHECK(print(subs[2]) == "(- 2 5)");
  CHECK(all_subexprs(parse("x")).empty());
  auto dup = all_subexprs(parse("((a) (a))"));
  REQUIRE(dup.size() == 3);
  CHECK(dup[1] == dup[2]);
}

TEST_CASE("transform_sexpr") {
  auto is_gaussian = [](const SExpr& e) { return e.is_call_to("gaussian"); };
  auto mark = [](const SExpr& e) {
    SExpr::List items = e.items();
    items[0] = sym("gaussian-parameters");
    return lst(items);
  };
  CHECK(print(transform_sexpr(is_gaussian, mark, parse("(color (gaussian 70 25))"))) ==
        "(color (gaussian-parameters 70 25))");

  SExpr e = parse("(a (b (c)))");
  CHECK(transform_sexpr([](const SExpr&) { return false; }, mark, e) == e);

  int calls = 0;
  SExpr out = transform_sexpr([](const SExpr& x) { return x.is_list(); },
                              [&](const SExpr& x) {
                                ++calls;
                                return x;
                              },
                              e);
  CHECK(calls == 1);
  CHECK(out == e);
}

TEST_CASE("symbol classes") {
  CHECK(is_variable_symbol("V12"));
  CHECK_FALSE(is_variable_symbol("V"));
  CHECK_FALSE(is_variable_symbol("Vx"));
  CHECK(is_function_symbol("F3"));
  CHECK(is_lambda_symbol("λ"));
  SymbolGenerator gen = SymbolGenerator::after({parse("(F2 V7 (F1 V3))")});
  CHECK(gen.fresh_var() == "V8");
  CHECK(gen.fresh_func() == "F3");
}

TEST_CASE("properties over random expressions") {
  std::mt19937 gen(7);
  for (int i = 0; i < 500; ++i) {
    SExpr e = random_sexpr(gen, 4);
    CAPTURE(print(e));
    CHECK(parse(print(e)) == e);
    CHECK(all_subexprs(e).size() == list_nodes(e));
    CHECK(transform_sexpr([](const SExpr&) { return true; }, [](const SExpr& x) { return x; },
                          e) == e);
    SExpr f = random_sexpr(gen, 3);
    CHECK(sexpr_size(lst({e, f})) == sexpr_size(e) + sexpr_size(f));
  }
}

}  // TEST_SUITE
