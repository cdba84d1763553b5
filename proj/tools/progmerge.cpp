#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "progmerge/antiunify.hpp"
#include "progmerge/dearg.hpp"
#include "progmerge/errors.hpp"
#include "progmerge/likelihood.hpp"
#include "progmerge/model.hpp"
#include "progmerge/search.hpp"
#include "progmerge/tree.hpp"

using namespace progmerge;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kResource = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Tree> read_trees(const std::string& path) {
  auto trees = parse_trees(read_file(path));
  if (trees.empty()) throw InputError(path + " contains no trees");
  return trees;
}

Program read_program(const std::string& path) {
  Program p = parse_program(read_file(path));
  validate_program(p);
  return p;
}

IncorporationMode parse_mode(const std::string& s) {
  return s == "deterministic" ? IncorporationMode::Deterministic
                              : IncorporationMode::GaussianColors;
}

std::vector<ReplacementKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<ReplacementKind> out;
  for (const auto& n : names) out.push_back(*parse_kind(n));
  return out;
}

const std::vector<std::string> kKindNames = {"noisy-mean", "noisy-gaussian", "same-variable",
                                             "recursion"};

void print_score_line(const ScoredProgram& sp) {
  std::cout << ";; posterior=" << format_score(sp.posterior)
            << " prior=" << format_score(sp.log_prior)
            << " likelihood=" << format_score(sp.log_likelihood)
            << " size=" << program_size(sp.program) << "\n";
}

double round_to(double x, int decimals) {
  double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

void round_colors(Tree& t, int decimals) {
  t.color = round_to(t.color, decimals);
  for (auto& c : t.children) round_colors(c, decimals);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Induce probabilistic tree programs by Bayesian program merging"};
  app.require_subcommand(1);

  std::string mode_name = "gaussian";
  double noise_sd = kIncorporationNoise;
  auto add_mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode_name, "Incorporation mode")
        ->check(CLI::IsMember({"gaussian", "deterministic"}));
  };

  auto* incorporate = app.add_subcommand("incorporate", "Print the data-incorporating program");
  std::string data_path;
  incorporate->add_option("data", data_path, "Observation file")->required();
  add_mode(incorporate);
  incorporate->add_option("--sd", noise_sd, "Standard deviation of incorporated colors");

  auto* transforms = app.add_subcommand("transforms", "List the candidate transforms of a program");
  std::string program_path;
  std::vector<std::string> kind_names;
  bool no_filter = false;
  transforms->add_option("program", program_path, "Program file")->required();
  transforms->add_option("--kinds", kind_names, "Deargumentation kinds")
      ->delimiter(',')
      ->check(CLI::IsMember(kKindNames));
  transforms->add_flag("--no-filter", no_filter, "Keep compressions that grow the program");
  add_mode(transforms);

  auto* search = app.add_subcommand("search", "Induce a program from observations");
  SearchConfig cfg;
  std::string trace_path;
  search->add_option("data", data_path, "Observation file")->required();
  search->add_option("--alpha", cfg.alpha, "Size prior weight")->check(CLI::PositiveNumber);
  search->add_option("--beam", cfg.beam_width, "Beam width")->check(CLI::PositiveNumber);
  search->add_option("--depth", cfg.depth, "Search depth");
  search->add_option("--seed", cfg.seed, "Seed");
  search->add_option("--kinds", kind_names, "Deargumentation kinds")
      ->delimiter(',')
      ->check(CLI::IsMember(kKindNames));
  search->add_option("--trace", trace_path, "Write the search transcript here");
  search->add_option("--sd", noise_sd, "Standard deviation of incorporated colors");
  search->add_option("--max-traces", cfg.limits.max_traces, "Parse traces per observation");
  add_mode(search);

  auto* score = app.add_subcommand("score", "Score a program against observations");
  double alpha = 1.0;
  score->add_option("program", program_path, "Program file")->required();
  score->add_option("data", data_path, "Observation file")->required();
  score->add_option("--alpha", alpha, "Size prior weight")->check(CLI::PositiveNumber);

  auto* sample_cmd = app.add_subcommand("sample", "Draw trees from a program");
  std::size_t count = 1;
  std::uint64_t seed = 0;
  int decimals = -1;
  sample_cmd->add_option("program", program_path, "Program file")->required();
  sample_cmd->add_option("-n", count, "Number of samples");
  sample_cmd->add_option("--seed", seed, "Seed");
  sample_cmd->add_option("--round", decimals, "Round colors to this many decimals");

  auto* render = app.add_subcommand("render", "Render the first tree of a file as SVG");
  std::string out_path;
  render->add_option("trees", data_path, "Observation file")->required();
  render->add_option("-o", out_path, "Output SVG file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const IncorporationMode mode = parse_mode(mode_name);
  try {
    if (*incorporate) {
      auto trees = read_trees(data_path);
      std::cout << print_program(incorporate_data(trees, mode, noise_sd)) << "\n";
    } else if (*transforms) {
      Program p = read_program(program_path);
      auto kinds = kind_names.empty() ? default_kinds(mode) : parse_kinds(kind_names);
      for (const auto& c : compressions(p, no_filter))
        std::cout << ";; compression size=" << program_size(c) << "\n"
                  << print_program(c) << "\n";
      for (const auto& c : all_deargument_candidates(p, kinds))
        std::cout << ";; " << kind_name(c.kind) << " " << c.abstraction << " " << c.variable
                  << " size=" << program_size(c.program) << "\n"
                  << print_program(c.program) << "\n";
    } else if (*search) {
      auto trees = read_trees(data_path);
      cfg.incorporation_mode = mode;
      cfg.incorporation_sd = noise_sd;
      cfg.enabled_kinds = parse_kinds(kind_names);
      SearchResult r;
      int code = kOk;
      try {
        r = beam_search(trees, cfg);
      } catch (const SearchAborted& e) {
        std::cerr << "search aborted: " << e.what() << "\n";
        r = e.partial();
        code = kResource;
      }
      std::cout << print_program(r.best.program) << "\n";
      print_score_line(r.best);
      if (!trace_path.empty()) {
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) throw InputError("cannot write " + trace_path);
        out << format_trace(r.trace);
      }
      return code;
    } else if (*score) {
      Program p = read_program(program_path);
      auto trees = read_trees(data_path);
      PosteriorScore s = posterior(p, trees, alpha);
      std::cout << "log_prior=" << format_score(s.log_prior)
                << " log_likelihood=" << format_score(s.log_likelihood)
                << " posterior=" << format_score(s.posterior) << "\n";
    } else if (*sample_cmd) {
      Program p = read_program(program_path);
      Rng rng(seed);
      for (std::size_t i = 0; i < count; ++i) {
        SExpr v = sample_value(p, rng);
        try {
          Tree t = expression_to_tree(v);
          if (decimals >= 0) round_colors(t, decimals);
          std::cout << print_tree(t) << "\n";
        } catch (const ProgramError&) {
          std::cout << print(v) << "\n";
        }
      }
    } else if (*render) {
      auto trees = read_trees(data_path);
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw InputError("cannot write " + out_path);
      out << render_svg(trees.front());
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const NonTerminationError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInput;
  } catch (const ProgramError& e) {
    std::cerr << "invalid program: " << e.what() << "\n";
    return kInput;
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kOk;
}
