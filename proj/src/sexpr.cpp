#include "progmerge/sexpr.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>

namespace progmerge {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at offset " + std::to_string(offset)),
      offset_(offset) {}

Number Number::exact(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::invalid_argument("zero denominator");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  std::int64_t g = std::gcd(numerator, denominator);
  if (g == 0) g = 1;
  Number n;
  n.exact_ = true;
  n.num_ = numerator / g;
  n.den_ = denominator / g;
  n.value_ = static_cast<double>(n.num_) / static_cast<double>(n.den_);
  return n;
}

Number Number::inexact(double value) {
  Number n;
  n.exact_ = false;
  n.value_ = value;
  return n;
}

double Number::to_double() const noexcept { return value_; }

bool operator==(const Number& a, const Number& b) noexcept {
  if (a.exact_ != b.exact_) return false;
  if (a.exact_) return a.num_ == b.num_ && a.den_ == b.den_;
  return a.value_ == b.value_;
}

SExpr::SExpr() : v_(std::make_shared<const List>()) {}

SExpr SExpr::symbol(std::string name) {
  SExpr e;
  e.v_ = std::move(name);
  return e;
}

SExpr SExpr::number(Number n) {
  SExpr e;
  e.v_ = n;
  return e;
}

SExpr SExpr::list(List items) {
  SExpr e;
  e.v_ = std::make_shared<const List>(std::move(items));
  return e;
}

bool SExpr::is_symbol(std::string_view name) const noexcept {
  return is_symbol() && std::get<0>(v_) == name;
}

const std::string& SExpr::name() const {
  if (!is_symbol()) throw std::logic_error("not a symbol: " + print(*this));
  return std::get<0>(v_);
}

const Number& SExpr::number_value() const {
  if (!is_number()) throw std::logic_error("not a number: " + print(*this));
  return std::get<1>(v_);
}

const SExpr::List& SExpr::items() const {
  if (!is_list()) throw std::logic_error("not a list: " + print(*this));
  return *std::get<2>(v_);
}

std::size_t SExpr::size() const noexcept {
  return is_list() ? std::get<2>(v_)->size() : 0;
}

bool SExpr::is_call_to(std::string_view head) const noexcept {
  return is_list() && size() > 0 && (*std::get<2>(v_))[0].is_symbol(head);
}

bool operator==(const SExpr& a, const SExpr& b) noexcept {
  if (a.v_.index() != b.v_.index()) return false;
  switch (a.v_.index()) {
    case 0:
      return std::get<0>(a.v_) == std::get<0>(b.v_);
    case 1:
      return std::get<1>(a.v_) == std::get<1>(b.v_);
    default: {
      const auto& la = std::get<2>(a.v_);
      const auto& lb = std::get<2>(b.v_);
      return la == lb || *la == *lb;
    }
  }
}

SExpr sym(std::string name) { return SExpr::symbol(std::move(name)); }
SExpr num(std::int64_t value) { return SExpr::number(Number::exact(value)); }
SExpr num(double value) { return SExpr::number(Number::inexact(value)); }
SExpr lst(SExpr::List items) { return SExpr::list(std::move(items)); }

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_digit(c)) return false;
  return true;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<Number> parse_number(std::string_view tok) {
  if (tok == "+inf.0") return Number::inexact(HUGE_VAL);
  if (tok == "-inf.0") return Number::inexact(-HUGE_VAL);
  if (tok == "+nan.0") return Number::inexact(std::nan(""));

  std::string_view body = tok;
  if (!body.empty() && (body.front() == '-' || body.front() == '+'))
    body.remove_prefix(1);
  if (body.empty()) return std::nullopt;

  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view n = body.substr(0, slash);
    std::string_view d = body.substr(slash + 1);
    if (!all_digits(n) || !all_digits(d)) return std::nullopt;
    auto num = parse_int(tok.substr(0, tok.size() - d.size() - 1));
    auto den = parse_int(d);
    if (!num || !den || *den == 0) return std::nullopt;
    return Number::exact(*num, *den);
  }

  if (all_digits(body)) {
    if (auto v = parse_int(tok)) return Number::exact(*v);
  }

  // [digits][.digits][e[+-]digits], at least one mantissa digit
  std::size_t i = 0;
  std::size_t mantissa_digits = 0;
  while (i < body.size() && is_digit(body[i])) ++i, ++mantissa_digits;
  if (i < body.size() && body[i] == '.') {
    ++i;
    while (i < body.size() && is_digit(body[i])) ++i, ++mantissa_digits;
  }
  if (mantissa_digits == 0) return std::nullopt;
  if (i < body.size() && (body[i] == 'e' || body[i] == 'E')) {
    ++i;
    if (i < body.size() && (body[i] == '+' || body[i] == '-')) ++i;
    if (i >= body.size() || !is_digit(body[i])) return std::nullopt;
    while (i < body.size() && is_digit(body[i])) ++i;
  }
  if (i != body.size()) return std::nullopt;

  std::string_view s = tok;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc::result_out_of_range) {
    v = std::strtod(std::string(s).c_str(), nullptr);
  } else if (ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return Number::inexact(v);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == ')') throw ParseError("unbalanced ')'", pos_);
    if (c == '(') {
      std::size_t open = pos_++;
      SExpr::List items;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size())
          throw ParseError("unbalanced '(' opened at offset " + std::to_string(open), pos_);
        if (text_[pos_] == ')') {
          ++pos_;
          return SExpr::list(std::move(items));
        }
        items.push_back(read());
      }
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) ++pos_;
    std::string_view tok = text_.substr(start, pos_ - start);
    if (auto n = parse_number(tok)) return SExpr::number(*n);
    return SExpr::symbol(std::string(tok));
  }

  std::size_t position() const { return pos_; }

 private:
  static bool is_delimiter(char c) {
    return c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' || c == '\n' ||
           c == '\r' || c == '\f' || c == '\v';
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print_to(std::string& out, const SExpr& e, const PrintOptions& options) {
  if (e.is_symbol()) {
    out += e.name();
  } else if (e.is_number()) {
    out += print_number(e.number_value(), options);
  } else {
    out += '(';
    bool first = true;
    for (const auto& item : e.items()) {
      if (!first) out += ' ';
      first = false;
      print_to(out, item, options);
    }
    out += ')';
  }
}

std::string print_double(double v) {
  if (std::isnan(v)) return "+nan.0";
  if (std::isinf(v)) return v > 0 ? "+inf.0" : "-inf.0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void collect_subexprs(const SExpr& e, std::vector<SExpr>& out) {
  if (!e.is_list()) return;
  out.push_back(e);
  for (const auto& item : e.items()) collect_subexprs(item, out);
}

bool digits_after_prefix(std::string_view name, char prefix) {
  return name.size() >= 2 && name.front() == prefix && all_digits(name.substr(1));
}

void scan_indices(const SExpr& e, std::size_t& max_var, std::size_t& max_func) {
  if (e.is_symbol()) {
    const auto& n = e.name();
    auto index = [&] { return std::stoull(n.substr(1)); };
    if (is_variable_symbol(n)) max_var = std::max<std::size_t>(max_var, index());
    if (is_function_symbol(n)) max_func = std::max<std::size_t>(max_func, index());
  } else if (e.is_list()) {
    for (const auto& item : e.items()) scan_indices(item, max_var, max_func);
  }
}

}  // namespace

SExpr parse(std::string_view text) {
  Reader reader(text);
  if (reader.at_end()) throw ParseError("empty input", reader.position());
  SExpr e = reader.read();
  if (!reader.at_end()) throw ParseError("trailing input", reader.position());
  return e;
}

std::vector<SExpr> parse_all(std::string_view text) {
  Reader reader(text);
  std::vector<SExpr> out;
  while (!reader.at_end()) out.push_back(reader.read());
  return out;
}

std::string print_number(const Number& n, const PrintOptions& options) {
  if (n.is_exact()) {
    if (n.denominator() == 1) return std::to_string(n.numerator());
    if (options.rationals)
      return std::to_string(n.numerator()) + "/" + std::to_string(n.denominator());
  }
  return print_double(n.to_double());
}

std::string print(const SExpr& e, const PrintOptions& options) {
  std::string out;
  print_to(out, e, options);
  return out;
}

std::size_t sexpr_size(const SExpr& e) {
  if (!e.is_list()) return 1;
  std::size_t n = 0;
  for (const auto& item : e.items()) n += sexpr_size(item);
  return n;
}

std::vector<SExpr> all_subexprs(const SExpr& e) {
  std::vector<SExpr> out;
  collect_subexprs(e, out);
  return out;
}

SExpr transform_sexpr(const std::function<bool(const SExpr&)>& pred,
                      const std::function<SExpr(const SExpr&)>& func,
                      const SExpr& e) {
  if (pred(e)) return func(e);
  if (!e.is_list()) return e;
  SExpr::List out;
  out.reserve(e.size());
  for (const auto& item : e.items()) out.push_back(transform_sexpr(pred, func, item));
  return SExpr::list(std::move(out));
}

bool is_variable_symbol(std::string_view name) noexcept {
  return digits_after_prefix(name, 'V');
}

bool is_function_symbol(std::string_view name) noexcept {
  return digits_after_prefix(name, 'F');
}

bool is_lambda_symbol(std::string_view name) noexcept {
  return name == kLambda || name == "lambda";
}

SymbolGenerator SymbolGenerator::after(const std::vector<SExpr>& exprs) {
  std::size_t max_var = 0;
  std::size_t max_func = 0;
  for (const auto& e : exprs) scan_indices(e, max_var, max_func);
  return SymbolGenerator(max_var + 1, max_func + 1);
}

}  // namespace progmerge
