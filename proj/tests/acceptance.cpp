// Acceptance run: one PASS/FAIL line per criterion. The exit status is 1 if
// a criterion fails that was not named with --known-failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "progmerge/antiunify.hpp"
#include "progmerge/dearg.hpp"
#include "progmerge/likelihood.hpp"
#include "progmerge/model.hpp"
#include "progmerge/search.hpp"
#include "progmerge/unify.hpp"

using namespace progmerge;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed expectations; the first few are reported.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    out_.pass = false;
    if (!out_.detail.empty()) out_.detail += "; ";
    out_.detail += what;
  }
  void note(const std::string& what) {
    if (!out_.detail.empty()) out_.detail += "; ";
    out_.detail += what;
  }
  Outcome result() const { return out_; }

 private:
  Outcome out_;
};

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(10);
  ss << x;
  return ss.str();
}

std::vector<Tree> load(const char* name) {
  return parse_trees(oracle::read_file(std::string(PROGMERGE_DATA_DIR) + "/" + name));
}

// 1
Outcome anti_unification() {
  Check c;
  SymbolGenerator gen;
  auto r = anti_unify(parse("(+ (+ 2 2) (- 2 5))"), parse("(+ (- 2 3) 4)"), gen);
  std::string got = print(canonical_pattern(r.pattern, r.variables));
  c.expect(got == "(+ (V1 2 V2) V3)", "pattern " + got);
  return c.result();
}

// 2
Outcome unification() {
  Check c;
  auto s = unify(parse("(+ (+ 2 2) (- 2 5))"), parse("(+ V1 V2)"), {"V1", "V2"});
  c.expect(s && s->size() == 2, "binding count");
  if (s && s->size() == 2) {
    c.expect(print(*s->find("V1")) == "(+ 2 2)", "V1");
    c.expect(print(*s->find("V2")) == "(- 2 5)", "V2");
  }
  c.expect(!unify(parse("(- (+ 2 2) (- 2 5))"), parse("(+ V1 V2)"), {"V1", "V2"}), "minus head");
  return c.result();
}

// 3
Outcome compression() {
  Check c;
  Program p = parse_program(
      "(λ () (uniform-choice (node a (node a (node b) (node b))) (node a (node a (node c) (node c)))))");
  auto cs = compressions(p);
  const Program* hit = nullptr;
  for (const auto& q : cs)
    if (print(q.body) == "(λ () (uniform-choice (F1 b b) (F1 c c)))" &&
        q.abstractions.size() == 1 && q.abstractions[0].vars.size() == 2)
      hit = &q;
  c.expect(hit != nullptr, "compressed body not among " + std::to_string(cs.size()) + " candidates");
  if (!hit) return c.result();
  auto before = output_distribution(p);
  auto after = output_distribution(*hit);
  c.expect(before.outcomes.size() == after.outcomes.size(), "support differs");
  double worst = 0;
  for (const auto& [k, v] : before.outcomes) {
    auto it = after.outcomes.find(k);
    worst = std::max(worst, it == after.outcomes.end() ? 1.0 : std::abs(it->second - v));
  }
  c.expect(worst <= 1e-9, "max difference " + fmt(worst));
  return c.result();
}

// 4
Outcome two_tree_pipeline() {
  Check c;
  Program p = incorporate_data(load("fig2.trees"), IncorporationMode::GaussianColors);
  auto cs = compressions(p);
  bool data = false, flower = false;
  std::size_t data_size = 0, flower_size = 0;
  for (const auto& q : cs) {
    const Abstraction& a = q.abstractions.front();
    if (print(a.body) == "(data (color (gaussian V1 25)) (size V2))") {
      data = true;
      data_size = program_size(q);
    }
    if (a.vars.size() == 4 && a.body.is_call_to("node") && a.body.size() == 5) {
      flower = true;
      flower_size = program_size(q);
    }
  }
  c.expect(data, "data abstraction missing");
  c.expect(flower, "4-variable flower abstraction missing");
  c.note("diagnostic: " + std::to_string(cs.size()) + " candidates (reference 17)");
  c.note("sizes " + std::to_string(data_size) + "/" + std::to_string(flower_size) +
         " (reference 55/66)");
  return c.result();
}

// 5
Outcome deargumentation() {
  Check c;
  Program flower = parse_program(
      "(begin (define (F1 V1 V2 V3 V4)"
      " (node (data (color (gaussian V1 25)) (size 0.3))"
      " (node (data (color (gaussian V2 25)) (size 0.3)))"
      " (node (data (color (gaussian V3 25)) (size 0.3)))"
      " (node (data (color (gaussian V4 25)) (size 0.3)))))"
      " (λ () (uniform-choice (F1 200 213 207 211) (F1 33 220 224 207))))");
  const Abstraction& f = flower.abstractions[0];
  auto inst = find_variable_instances(flower, f, "V2");
  auto mean = replacement(ReplacementKind::NoisyMean, flower, f, "V2", inst);
  c.expect(mean && mean->is_number() && mean->number_value().to_double() == 216.5,
           "mean " + (mean ? print(*mean) : std::string("none")));

  Program nested = parse_program("(begin (define (F1 x) (node x)) (λ () (F1 (F1 a))))");
  const Abstraction& g = nested.abstractions[0];
  auto rinst = find_variable_instances(nested, g, "x");
  auto rec = replacement(ReplacementKind::Recursion, nested, g, "x", rinst);
  bool half = rec && rec->is_call_to("if") && (*rec)[1].is_call_to("flip") &&
              (*rec)[1][1].is_number() && (*rec)[1][1].number_value() == Number::exact(1, 2);
  c.expect(half, "flip " + (rec ? print(*rec) : std::string("none")));

  auto program = deargument(ReplacementKind::Recursion, nested, g, "x");
  const std::string listing =
      "(begin (define (F1) ((λ (x) (node x)) (if (flip .5) (F1) (uniform-choice a)))) (λ () (F1)))";
  c.expect(program && oracle::alpha_equivalent(print_program(*program), listing),
           "recursive program " + (program ? print_program_constructor(*program) : "none"));
  return c.result();
}

// 6
Outcome termination() {
  Check c;
  Program p = parse_program("(begin (define (F1 x) (node x)) (λ () (F1 (F1 a))))");
  std::vector<SExpr> atom{parse("a")}, self{parse("(F1 a)")},
      branch{parse("(if (flip .5) (F1 a) b)")}, mutual{parse("(F2)")};
  c.expect(terminates(p, "F1", atom), "atom");
  c.expect(!terminates(p, "F1", self), "self call");
  c.expect(terminates(p, "F1", branch), "branch");
  Program cycle =
      parse_program("(begin (define (F1) (node (F2))) (define (F2) (node (F1))) (λ () (F1)))");
  c.expect(!terminates(cycle, "F1", mutual), "mutual cycle");
  return c.result();
}

// 7
Outcome likelihood_exactness() {
  Check c;
  auto trees = load("fig2.trees");
  Program det = incorporate_data(trees, IncorporationMode::Deterministic);
  double ll = log_likelihood(det, trees);
  c.expect(std::abs(ll - 2 * std::log(0.5)) <= 1e-12, "two-tree " + fmt(ll));

  Program rec = parse_program(
      "(begin (define (F1) ((λ (x) (node x)) (if (flip .5) (F1) (uniform-choice a))))"
      " (λ () (F1)))");
  SExpr chain = parse("(node (node (node a)))");
  EnumerationLimits plain;
  plain.share_calls = false;
  auto parses = enumerate_parses(rec, chain, plain);
  c.expect(parses.size() == 1, std::to_string(parses.size()) + " parses");
  if (parses.size() == 1)
    c.expect(std::abs(parses[0].trace.log_prob - 3 * std::log(0.5)) <= 1e-12,
             "topology " + fmt(parses[0].trace.log_prob));
  return c.result();
}

// Random loop-free programs for criteria 8 and 9. Each program holds at
// most `sites` choice points and no gaussians.
class ProgramMaker {
 public:
  explicit ProgramMaker(std::uint32_t seed) : gen_(seed) {}

  // Draws until the program has at least `min_outputs` distinct outputs.
  Program make(int sites, std::size_t min_outputs) {
    for (;;) {
      Program p = draw(sites);
      if (output_distribution(p).outcomes.size() >= min_outputs) return p;
    }
  }

 private:
  Program draw(int sites) {
    sites_ = sites;
    Program p;
    if (coin(0.5)) {
      // a helper abstraction taking one argument, applied from the body
      SExpr body = expr(2, true);
      p.abstractions.push_back({"F1", {"V1"}, body});
      helper_ = true;
    } else {
      helper_ = false;
    }
    p.body = lst({sym("λ"), lst({}), expr(4, false)});
    return p;
  }

  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(gen_) < p; }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen_); }

  SExpr leaf(bool in_helper) {
    static const char* atoms[] = {"a", "b", "c"};
    if (in_helper && coin(0.4)) return sym("V1");
    return coin(0.5) ? lst({sym("node")}) : sym(atoms[pick(3)]);
  }

  SExpr expr(int depth, bool in_helper) {
    if (depth == 0) return leaf(in_helper);
    int k = pick(5);
    if (k == 0 && sites_ > 0) {
      --sites_;
      static const char* probs[] = {"0.5", "0.25", "1/3", "0.9", "1", "0"};
      return lst({sym("if"), lst({sym("flip"), parse(probs[pick(6)])}), expr(depth - 1, in_helper),
                  expr(depth - 1, in_helper)});
    }
    if (k == 1 && sites_ > 0) {
      --sites_;
      SExpr::List items{sym("uniform-choice")};
      for (int i = 1 + pick(3); i > 0; --i) items.push_back(expr(depth - 1, in_helper));
      return lst(items);
    }
    if (k == 2 && helper_ && !in_helper) return lst({sym("F1"), expr(depth - 1, false)});
    SExpr::List items{sym("node")};
    for (int i = pick(3); i > 0; --i) items.push_back(expr(depth - 1, in_helper));
    return lst(items);
  }

  std::mt19937 gen_;
  int sites_ = 0;
  bool helper_ = false;
};

// 8
Outcome normalization() {
  Check c;
  ProgramMaker maker(2024);
  double worst = 0;
  std::size_t outputs = 0;
  for (int i = 0; i < 20; ++i) {
    Program p = maker.make(6, 2);
    auto d = output_distribution(p);
    double total = d.truncated_mass;
    for (const auto& [k, v] : d.outcomes) total += v;
    c.expect(d.truncated_mass == 0, "truncated " + print_program_constructor(p));
    outputs += d.outcomes.size();
    worst = std::max(worst, std::abs(total - 1));
  }
  c.expect(worst <= 1e-9, "max deviation " + fmt(worst));
  c.note(std::to_string(outputs) + " outputs, max deviation " + fmt(worst));
  return c.result();
}

// 9
Outcome sampler_agreement() {
  Check c;
  ProgramMaker maker(77);
  const int n = 100000;
  std::size_t shapes = 0;
  for (int i = 0; i < 5; ++i) {
    Program p = maker.make(6, 4);
    auto d = output_distribution(p);
    std::map<std::string, int> freq;
    Rng rng(static_cast<std::uint64_t>(1000 + i));
    for (int s = 0; s < n; ++s) ++freq[print(sample_value(p, rng))];
    for (const auto& [k, prob] : d.outcomes) {
      ++shapes;
      double f = static_cast<double>(freq[k]) / n;
      double se = std::sqrt(prob * (1 - prob) / n);
      c.expect(std::abs(f - prob) <= 3 * se, k + " " + fmt(f) + " vs " + fmt(prob));
    }
    for (const auto& [k, count] : freq)
      c.expect(d.outcomes.count(k) > 0, "sampled outside the support: " + k);
  }
  c.note(std::to_string(shapes) + " outputs compared");
  return c.result();
}

struct Run {
  SearchResult result;
  std::string program;
  std::string trace;
};

Run run_search(const std::vector<Tree>& trees, const SearchConfig& cfg) {
  Run r;
  try {
    r.result = beam_search(trees, cfg);
  } catch (const SearchAborted& e) {
    r.result = e.partial();
    r.trace = "aborted: " + std::string(e.what()) + "\n";
  }
  r.program = print_program(r.result.best.program);
  r.trace += format_trace(r.result.trace);
  return r;
}

SearchConfig flowers_config() { return SearchConfig{}; }

SearchConfig stems_config() { return SearchConfig{}; }

SearchConfig three_node_config() {
  SearchConfig cfg;
  cfg.alpha = 3;
  cfg.incorporation_mode = IncorporationMode::Deterministic;
  return cfg;
}

// Output of (F args...) for an application found in `p`, sampled once.
std::optional<Tree> expand(const Program& p, const SExpr& application, std::uint64_t seed) {
  Program q = p;
  q.body = lst({sym("λ"), lst({}), application});
  Rng rng(seed);
  try {
    return sample(q, rng);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// 10
Outcome flowers(Run& run) {
  Check c;
  auto trees = load("flowers.trees");
  run = run_search(trees, flowers_config());
  const auto& r = run.result;
  c.expect(r.best.posterior > r.initial.posterior,
           "posterior " + fmt(r.best.posterior) + " vs " + fmt(r.initial.posterior));
  c.expect(program_size(r.best.program) < program_size(r.initial.program), "size not smaller");
  bool found = false;
  for (const auto& a : r.best.program.abstractions) {
    auto apps = find_abstraction_applications(r.best.program, a.name);
    if (apps.size() < 10) continue;
    auto t = expand(r.best.program, apps.front(), 1);
    if (t && oracle::shape(*t) == "(()()())") found = true;
  }
  c.expect(found, "no abstraction applied 10 times yields a 4-node flower");
  c.note("size " + std::to_string(program_size(r.best.program)) + ", posterior " +
         fmt(r.best.posterior));
  return c.result();
}

bool mentions(const SExpr& e, const std::string& name) {
  if (e.is_symbol()) return e.name() == name;
  if (!e.is_list()) return false;
  return std::any_of(e.items().begin(), e.items().end(),
                     [&](const SExpr& x) { return mentions(x, name); });
}

// A flip-guarded branch in a's body whose recursive side calls a and whose
// other side terminates.
bool guarded_recursion(const Program& p, const Abstraction& a) {
  std::function<bool(const SExpr&)> visit = [&](const SExpr& e) {
    if (!e.is_list()) return false;
    if (e.is_call_to("if") && e.size() == 4 && e[1].is_call_to("flip") &&
        (mentions(e[2], a.name) || mentions(e[3], a.name))) {
      std::vector<SExpr> base;
      if (!mentions(e[2], a.name)) base.push_back(e[2]);
      if (!mentions(e[3], a.name)) base.push_back(e[3]);
      if (terminates(p, a.name, base)) return true;
    }
    return std::any_of(e.items().begin(), e.items().end(), visit);
  };
  return visit(a.body);
}

// 11
Outcome stems(Run& run) {
  Check c;
  auto trees = load("stems.trees");
  run = run_search(trees, stems_config());
  const Program& best = run.result.best.program;
  bool recursive = std::any_of(best.abstractions.begin(), best.abstractions.end(),
                               [&](const Abstraction& a) { return guarded_recursion(best, a); });
  c.expect(recursive, "no flip-guarded terminating self-application");
  std::size_t observed = 0;
  for (const auto& t : trees) observed = std::max(observed, oracle::chain_length(t));
  std::size_t longest = 0;
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    try {
      longest = std::max(longest, oracle::chain_length(sample(best, rng)));
    } catch (const std::exception&) {
    }
  }
  c.expect(longest > observed, "longest sample " + std::to_string(longest) + " vs observed " +
                                   std::to_string(observed));
  c.note("size " + std::to_string(program_size(best)) + ", posterior " +
         fmt(run.result.best.posterior));
  return c.result();
}

void gaussians(const SExpr& e, std::vector<std::pair<double, double>>& out) {
  if (!e.is_list()) return;
  if (e.is_call_to("gaussian") && e.size() == 3 && e[1].is_number() && e[2].is_number())
    out.emplace_back(e[1].number_value().to_double(), e[2].number_value().to_double());
  for (const auto& x : e.items()) gaussians(x, out);
}

// 12
Outcome three_node(Run& run) {
  Check c;
  auto trees = load("three_node.trees");
  std::vector<double> colors;
  for (const auto& t : trees) colors.push_back(t.children.at(0).children.at(0).color);
  double m = oracle::mean(colors), sd = oracle::sample_sd(colors);
  run = run_search(trees, three_node_config());
  std::vector<std::pair<double, double>> gs;
  for (const auto& e : program_expressions(run.result.best.program)) gaussians(e, gs);
  bool ok = std::any_of(gs.begin(), gs.end(), [&](const auto& g) {
    return std::abs(g.first - m) <= 5 && std::abs(g.second - sd) <= 0.2 * sd;
  });
  std::string seen;
  for (const auto& g : gs) seen += " (" + fmt(g.first) + " " + fmt(g.second) + ")";
  c.expect(ok, "no matching gaussian; found" + (seen.empty() ? std::string(" none") : seen));
  c.note("fixture mean " + fmt(m) + " sd " + fmt(sd) + "; induced" + seen);
  return c.result();
}

// 13
Outcome determinism(const Run& flowers_run, const Run& stems_run, const Run& three_run) {
  Check c;
  auto same = [&](const Run& a, const Run& b, const char* name) {
    c.expect(a.program == b.program, std::string(name) + " program differs");
    c.expect(a.trace == b.trace, std::string(name) + " trace differs");
  };
  same(flowers_run, run_search(load("flowers.trees"), flowers_config()), "flowers");
  same(stems_run, run_search(load("stems.trees"), stems_config()), "stems");
  same(three_run, run_search(load("three_node.trees"), three_node_config()), "three-node");
  return c.result();
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--known-failure") known.insert(std::atoi(argv[++i]));

  int failures = 0, unexpected = 0;
  auto report = [&](int id, const char* name, double budget_seconds, const std::function<Outcome()>& f) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > budget_seconds) {
      o.pass = false;
      o.detail += (o.detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    if (!o.pass) {
      ++failures;
      if (known.count(id))
        o.detail += " (known failure)";
      else
        ++unexpected;
    }
    std::printf("%s %2d %-28s %8.3fs  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  };

  Run flowers_run, stems_run, three_run;
  report(1, "anti-unification", 0.001, anti_unification);
  report(2, "unification", 0.001, unification);
  report(3, "compression", 1, compression);
  report(4, "two-tree pipeline", 5, two_tree_pipeline);
  report(5, "deargumentation", 1, deargumentation);
  report(6, "termination check", 0.001, termination);
  report(7, "likelihood exactness", 1, likelihood_exactness);
  report(8, "normalization", 10, normalization);
  report(9, "sampler agreement", 60, sampler_agreement);
  report(10, "single-color flowers", 300, [&] { return flowers(flowers_run); });
  report(11, "stem chains", 300, [&] { return stems(stems_run); });
  report(12, "three-node chains", 300, [&] { return three_node(three_run); });
  report(13, "determinism", 900, [&] { return determinism(flowers_run, stems_run, three_run); });
  std::printf("%d of 13 criteria failed, %d unexpectedly\n", failures, unexpected);
  return unexpected == 0 ? 0 : 1;
}
