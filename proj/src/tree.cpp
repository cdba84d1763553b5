#include "progmerge/tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "progmerge/errors.hpp"

namespace progmerge {

std::size_t Tree::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

Number attribute_number(double value) {
  if (std::isfinite(value) && value == std::floor(value) && std::fabs(value) < 0x1.0p53)
    return Number::exact(static_cast<std::int64_t>(value));
  return Number::inexact(value);
}

SExpr tree_to_expression(const Tree& t, IncorporationMode mode, double noise_sd) {
  SExpr color_value = SExpr::number(attribute_number(t.color));
  if (mode == IncorporationMode::GaussianColors)
    color_value = lst({sym("gaussian"), color_value, SExpr::number(attribute_number(noise_sd))});
  SExpr data = lst({sym("data"), lst({sym("color"), color_value}),
                    lst({sym("size"), SExpr::number(attribute_number(t.size))})});
  SExpr::List items{sym("node"), data};
  for (const auto& c : t.children) items.push_back(tree_to_expression(c, mode, noise_sd));
  return lst(std::move(items));
}

Program incorporate_data(std::span<const Tree> trees, IncorporationMode mode, double noise_sd) {
  if (trees.empty()) throw std::invalid_argument("incorporate_data: no trees");
  SExpr::List choice{sym("uniform-choice")};
  for (const auto& t : trees) choice.push_back(tree_to_expression(t, mode, noise_sd));
  Program p;
  p.body = lst({sym(std::string(kLambda)), lst({}), lst(std::move(choice))});
  return p;
}

namespace {

double literal_attribute(const SExpr& attr, std::string_view tag) {
  if (!attr.is_call_to(tag) || attr.size() != 2)
    throw ProgramError("expected (" + std::string(tag) + " <number>), got " + print(attr));
  if (!attr[1].is_number())
    throw ProgramError("non-literal " + std::string(tag) + " attribute: " + print(attr));
  return attr[1].number_value().to_double();
}

struct Layout {
  double x = 0.0;
  double y = 0.0;
};

// Leaves get consecutive slots; parents sit above the middle of their children.
double place(const Tree& t, std::size_t depth, double& next_leaf, std::vector<Layout>& out,
             std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::size_t self = out.size();
  out.push_back({});
  double x;
  if (t.children.empty()) {
    x = next_leaf;
    next_leaf += 1.0;
  } else {
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      std::size_t child = out.size();
      double cx = place(t.children[i], depth + 1, next_leaf, out, edges);
      edges.emplace_back(self, child);
      if (i == 0) first = cx;
      last = cx;
    }
    x = (first + last) / 2.0;
  }
  out[self] = {x, static_cast<double>(depth)};
  return x;
}

void collect(const Tree& t, std::vector<const Tree*>& out) {
  out.push_back(&t);
  for (const auto& c : t.children) collect(c, out);
}

}  // namespace

Tree expression_to_tree(const SExpr& e) {
  if (!e.is_call_to("node") || e.size() < 2)
    throw ProgramError("expected (node (data ...) ...), got " + print(e));
  const SExpr& data = e[1];
  if (!data.is_call_to("data") || data.size() != 3)
    throw ProgramError("expected (data (color c) (size s)), got " + print(data));
  Tree t;
  t.color = literal_attribute(data[1], "color");
  t.size = literal_attribute(data[2], "size");
  if (!(t.size > 0.0)) throw ProgramError("node size must be positive: " + print(data));
  for (std::size_t i = 2; i < e.size(); ++i) t.children.push_back(expression_to_tree(e[i]));
  return t;
}

std::vector<Tree> parse_trees(std::string_view text) {
  std::vector<Tree> out;
  for (const auto& e : parse_all(text)) out.push_back(expression_to_tree(e));
  return out;
}

std::string print_tree(const Tree& t) {
  return print(tree_to_expression(t, IncorporationMode::Deterministic));
}

std::string render_svg(const Tree& t) {
  constexpr double kSpacing = 60.0;
  constexpr double kRadiusScale = 25.0;
  constexpr double kMargin = 40.0;

  std::vector<Layout> layout;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  double next_leaf = 0.0;
  place(t, 0, next_leaf, layout, edges);
  std::vector<const Tree*> nodes;
  collect(t, nodes);

  double max_depth = 0.0;
  for (const auto& l : layout) max_depth = std::max(max_depth, l.y);
  double width = 2 * kMargin + std::max(0.0, next_leaf - 1.0) * kSpacing;
  double height = 2 * kMargin + max_depth * kSpacing;
  auto px = [&](const Layout& l) { return kMargin + l.x * kSpacing; };
  auto py = [&](const Layout& l) { return kMargin + l.y * kSpacing; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  for (const auto& [parent, child] : edges) {
    out << "  <line x1=\"" << px(layout[parent]) << "\" y1=\"" << py(layout[parent])
        << "\" x2=\"" << px(layout[child]) << "\" y2=\"" << py(layout[child])
        << "\" stroke=\"#555555\" stroke-width=\"2\"/>\n";
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double shade = std::clamp(nodes[i]->color, 0.0, 255.0);
    double hue = shade / 255.0 * 360.0;
    out << "  <circle cx=\"" << px(layout[i]) << "\" cy=\"" << py(layout[i]) << "\" r=\""
        << nodes[i]->size * kRadiusScale << "\" fill=\"hsl(" << hue
        << ",70%,50%)\" stroke=\"#222222\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace progmerge
