#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "progmerge/program.hpp"
#include "progmerge/sexpr.hpp"

namespace progmerge {

// An observed tree: every node carries a color and a size.
struct Tree {
  double color = 0.0;
  double size = 1.0;
  std::vector<Tree> children;

  std::size_t node_count() const;

  friend bool operator==(const Tree&, const Tree&) = default;
};

enum class IncorporationMode {
  GaussianColors,  // (color (gaussian c sd))
  Deterministic,   // (color c)
};

inline constexpr double kIncorporationNoise = 25.0;

// Integral doubles become exact integers, everything else stays a double.
Number attribute_number(double value);

SExpr tree_to_expression(const Tree& t, IncorporationMode mode,
                         double noise_sd = kIncorporationNoise);

// (λ () (uniform-choice e1 ... en)) with no abstractions.
Program incorporate_data(std::span<const Tree> trees, IncorporationMode mode,
                         double noise_sd = kIncorporationNoise);

// Inverse of tree_to_expression for literal-only expressions.
Tree expression_to_tree(const SExpr& e);

// Reads an observation file: one literal tree expression per top-level form.
std::vector<Tree> parse_trees(std::string_view text);
std::string print_tree(const Tree& t);

std::string render_svg(const Tree& t);

}  // namespace progmerge
