#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "progmerge/antiunify.hpp"
#include "progmerge/dearg.hpp"
#include "progmerge/errors.hpp"
#include "progmerge/likelihood.hpp"
#include "progmerge/model.hpp"
#include "progmerge/search.hpp"

namespace py = pybind11;
using namespace progmerge;

namespace {

IncorporationMode mode_from(const std::string& name) {
  if (name == "gaussian") return IncorporationMode::GaussianColors;
  if (name == "deterministic") return IncorporationMode::Deterministic;
  throw py::value_error("mode must be 'gaussian' or 'deterministic'");
}

std::vector<ReplacementKind> kinds_from(const std::vector<std::string>& names) {
  std::vector<ReplacementKind> out;
  for (const auto& n : names) {
    auto k = parse_kind(n);
    if (!k) throw py::value_error("unknown kind " + n);
    out.push_back(*k);
  }
  return out;
}

Program load_program(const std::string& text) {
  Program p = parse_program(text);
  validate_program(p);
  return p;
}

py::dict scored(const ScoredProgram& sp) {
  py::dict d;
  d["program"] = print_program(sp.program);
  d["size"] = program_size(sp.program);
  d["log_prior"] = sp.log_prior;
  d["log_likelihood"] = sp.log_likelihood;
  d["posterior"] = sp.posterior;
  return d;
}

}  // namespace

PYBIND11_MODULE(_progmerge, m) {
  m.doc() = "Bayesian program merging over tree-generating programs";

  static py::exception<ResourceError> resource_error(m, "ResourceLimitError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const ProgramError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const NonTerminationError& e) {
      py::set_error(resource_error, e.what());
    } catch (const ResourceError& e) {
      py::set_error(resource_error, e.what());
    } catch (const SearchAborted& e) {
      py::set_error(resource_error, e.what());
    }
  });

  m.def("normalize", [](const std::string& text) { return print(parse(text)); },
        "Parse one expression and print it canonically.");

  m.def("program_size", [](const std::string& program) { return program_size(load_program(program)); });

  m.def("incorporate",
        [](const std::string& trees, const std::string& mode, double sd) {
          auto ts = parse_trees(trees);
          if (ts.empty()) throw py::value_error("no trees given");
          return print_program(incorporate_data(ts, mode_from(mode), sd));
        },
        py::arg("trees"), py::arg("mode") = "gaussian", py::arg("sd") = kIncorporationNoise);

  m.def("compressions",
        [](const std::string& program, bool no_filter) {
          std::vector<std::string> out;
          for (const auto& p : compressions(load_program(program), no_filter))
            out.push_back(print_program(p));
          return out;
        },
        py::arg("program"), py::arg("no_filter") = false);

  m.def("deargument_candidates",
        [](const std::string& program, const std::vector<std::string>& kinds) {
          std::vector<std::tuple<std::string, std::string, std::string, std::string>> out;
          for (const auto& c : all_deargument_candidates(load_program(program), kinds_from(kinds)))
            out.emplace_back(std::string(kind_name(c.kind)), c.abstraction, c.variable,
                             print_program(c.program));
          return out;
        },
        py::arg("program"), py::arg("kinds"));

  m.def("score",
        [](const std::string& program, const std::string& trees, double alpha) {
          Program p = load_program(program);
          auto ts = parse_trees(trees);
          PosteriorScore s = posterior(p, ts, alpha);
          py::dict d;
          d["log_prior"] = s.log_prior;
          d["log_likelihood"] = s.log_likelihood;
          d["posterior"] = s.posterior;
          return d;
        },
        py::arg("program"), py::arg("trees"), py::arg("alpha") = 1.0);

  m.def("search",
        [](const std::string& trees, double alpha, std::size_t beam, std::size_t depth,
           const std::string& mode, const std::vector<std::string>& kinds) {
          auto ts = parse_trees(trees);
          if (ts.empty()) throw py::value_error("no trees given");
          SearchConfig cfg;
          cfg.alpha = alpha;
          cfg.beam_width = beam;
          cfg.depth = depth;
          cfg.incorporation_mode = mode_from(mode);
          cfg.enabled_kinds = kinds_from(kinds);
          SearchResult r;
          {
            py::gil_scoped_release release;
            r = beam_search(ts, cfg);
          }
          py::dict d;
          d["initial"] = scored(r.initial);
          d["best"] = scored(r.best);
          d["trace"] = format_trace(r.trace);
          return d;
        },
        py::arg("trees"), py::arg("alpha") = 1.0, py::arg("beam") = 1, py::arg("depth") = 10,
        py::arg("mode") = "gaussian", py::arg("kinds") = std::vector<std::string>{});

  m.def("sample",
        [](const std::string& program, std::size_t n, std::uint64_t seed) {
          Program p = load_program(program);
          Rng rng(seed);
          std::vector<std::string> out;
          for (std::size_t i = 0; i < n; ++i) out.push_back(print(sample_value(p, rng)));
          return out;
        },
        py::arg("program"), py::arg("n") = 1, py::arg("seed") = 0);
}
