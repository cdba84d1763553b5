#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace progmerge {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// A numeric atom. Integer and p/q tokens are exact rationals, everything else
// is a double. Equality is Scheme `eqv?`: an exact and an inexact number are
// never equal, even when they denote the same value.
class Number {
 public:
  static Number exact(std::int64_t numerator, std::int64_t denominator = 1);
  static Number inexact(double value);

  bool is_exact() const noexcept { return exact_; }
  bool is_integer() const noexcept { return exact_ && den_ == 1; }
  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }
  double to_double() const noexcept;

  friend bool operator==(const Number& a, const Number& b) noexcept;

 private:
  Number() = default;
  bool exact_ = true;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  double value_ = 0.0;
};

class SExpr {
 public:
  using List = std::vector<SExpr>;

  // The empty list.
  SExpr();

  static SExpr symbol(std::string name);
  static SExpr number(Number n);
  static SExpr list(List items);

  bool is_symbol() const noexcept { return v_.index() == 0; }
  bool is_number() const noexcept { return v_.index() == 1; }
  bool is_list() const noexcept { return v_.index() == 2; }
  bool is_atom() const noexcept { return !is_list(); }
  bool is_symbol(std::string_view name) const noexcept;

  const std::string& name() const;
  const Number& number_value() const;
  const List& items() const;

  // List length; 0 for atoms.
  std::size_t size() const noexcept;
  bool empty_list() const noexcept { return is_list() && size() == 0; }
  const SExpr& operator[](std::size_t i) const { return items()[i]; }

  // Non-empty list whose first element is the symbol `head`.
  bool is_call_to(std::string_view head) const noexcept;

  friend bool operator==(const SExpr& a, const SExpr& b) noexcept;

 private:
  std::variant<std::string, Number, std::shared_ptr<const List>> v_;
};

SExpr sym(std::string name);
SExpr num(std::int64_t value);
SExpr num(double value);
SExpr lst(SExpr::List items);

struct PrintOptions {
  // Print exact non-integers as p/q; otherwise as their decimal value.
  bool rationals = true;
};

// Parses exactly one expression. `;` starts a line comment.
SExpr parse(std::string_view text);
// Parses every top-level expression in `text`.
std::vector<SExpr> parse_all(std::string_view text);

std::string print(const SExpr& e, const PrintOptions& options = {});
std::string print_number(const Number& n, const PrintOptions& options = {});

// Number of atoms in `e`.
std::size_t sexpr_size(const SExpr& e);

// Every list-valued subexpression of `e`, `e` included, in pre-order.
std::vector<SExpr> all_subexprs(const SExpr& e);

// Top-down rewrite: where `pred` holds the node is replaced by `func` of it
// and the result is not revisited.
SExpr transform_sexpr(const std::function<bool(const SExpr&)>& pred,
                      const std::function<SExpr(const SExpr&)>& func,
                      const SExpr& e);

// Symbols of the form V<digits> and F<digits>.
bool is_variable_symbol(std::string_view name) noexcept;
bool is_function_symbol(std::string_view name) noexcept;
bool is_lambda_symbol(std::string_view name) noexcept;

inline constexpr std::string_view kLambda = "λ";

class SymbolGenerator {
 public:
  SymbolGenerator() = default;
  SymbolGenerator(std::size_t next_var_index, std::size_t next_func_index)
      : next_var_(next_var_index), next_func_(next_func_index) {}

  // A generator whose names are past every V<n>/F<n> occurring in `exprs`.
  static SymbolGenerator after(const std::vector<SExpr>& exprs);

  std::string fresh_var() { return "V" + std::to_string(next_var_++); }
  std::string fresh_func() { return "F" + std::to_string(next_func_++); }

  std::size_t next_var_index() const noexcept { return next_var_; }
  std::size_t next_func_index() const noexcept { return next_func_; }

 private:
  std::size_t next_var_ = 1;
  std::size_t next_func_ = 1;
};

}  // namespace progmerge
