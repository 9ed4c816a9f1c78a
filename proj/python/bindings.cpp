#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tpo/cli.hpp"
#include "tpo/gen.hpp"
#include "tpo/io.hpp"
#include "tpo/mining.hpp"
#include "tpo/monitor.hpp"

namespace py = pybind11;
using namespace tpo;

namespace {

using LabeledTrace = std::vector<std::pair<std::string, double>>;
// (from or None, to, relation, constant)
using BoundTuple = std::tuple<std::optional<std::string>, std::string, std::string, double>;

Heuristic heuristic_of(const std::string& name) {
  try {
    return parse_heuristic(name);
  } catch (const InputError&) {
    throw py::value_error("unknown heuristic '" + name + "'");
  }
}

// Alphabet from the explicit list, or labels in order of first appearance.
Alphabet alphabet_for(const std::vector<LabeledTrace>& traces, const std::optional<std::vector<std::string>>& labels) {
  if (labels) return Alphabet(*labels);
  Alphabet a;
  for (const auto& t : traces) {
    for (const auto& [label, time] : t) a.intern(label);
  }
  return a;
}

TimedTrace to_trace(const Alphabet& alphabet, const LabeledTrace& t) {
  TimedTrace out;
  for (const auto& [label, time] : t) out.entries.push_back({alphabet.id(label), time});
  return out;
}

LabeledTrace from_trace(const Alphabet& alphabet, const TimedTrace& t) {
  LabeledTrace out;
  for (const auto& e : t.entries) out.emplace_back(alphabet.label(e.event), e.time);
  return out;
}

BoundTuple bound_tuple(const Alphabet& alphabet, const Bound& b) {
  std::optional<std::string> from;
  if (!b.absolute()) from = alphabet.label(b.from);
  return {from, alphabet.label(b.to), to_string(b.relation), b.constant};
}

Bound tuple_bound(const Alphabet& alphabet, const BoundTuple& t) {
  const auto& [from, to, rel, constant] = t;
  if (rel != "<=" && rel != ">=") throw py::value_error("relation must be '<=' or '>='");
  return {from ? alphabet.id(*from) : kOrigin, alphabet.id(to), rel == "<=" ? Relation::kLe : Relation::kGe,
          constant};
}

py::object violation_dict(const Alphabet& alphabet, const std::optional<Violation>& v) {
  if (!v) return py::none();
  py::dict d;
  d["kind"] = to_string(v->kind);
  d["event"] = alphabet.label(v->at_event);
  d["position"] = v->position;
  d["time"] = v->time;
  d["message"] = v->describe(alphabet.labels());
  if (v->conjunct) {
    d["clock"] = v->conjunct->clock;
    d["relation"] = to_string(v->conjunct->relation);
    d["constant"] = v->conjunct->constant;
    d["clock_value"] = v->clock_value;
  }
  if (v->edge) d["edge"] = py::make_tuple(alphabet.label(v->edge->first), alphabet.label(v->edge->second));
  return d;
}

py::dict guards_dict(const io::TpoDocument& doc) {
  py::dict out;
  for (EventId e = 0; e < doc.tpo.size(); ++e) {
    if (doc.tpo.guard(e).trivial()) continue;
    py::list list;
    for (const auto& c : doc.tpo.guard(e).conjuncts) list.append(py::make_tuple(c.clock, to_string(c.relation), c.constant));
    out[py::str(doc.alphabet.label(e))] = list;
  }
  return out;
}

py::dict resets_dict(const io::TpoDocument& doc) {
  py::dict out;
  for (EventId e = 0; e < doc.tpo.size(); ++e) {
    if (!doc.tpo.resets(e).empty()) out[py::str(doc.alphabet.label(e))] = doc.tpo.resets(e);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Timed partial order mining and monitoring";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);

  py::class_<io::TpoDocument>(m, "Tpo")
      .def_property_readonly("events", [](const io::TpoDocument& d) { return d.alphabet.labels(); })
      .def_property_readonly("clocks", [](const io::TpoDocument& d) { return d.tpo.clocks(); })
      .def_property_readonly("edges",
                             [](const io::TpoDocument& d) {
                               std::vector<std::pair<std::string, std::string>> out;
                               for (auto [a, b] : d.tpo.order().reduced_edges()) {
                                 out.emplace_back(d.alphabet.label(a), d.alphabet.label(b));
                               }
                               return out;
                             })
      .def_property_readonly("guards", &guards_dict)
      .def_property_readonly("resets", &resets_dict)
      .def("to_json", &io::tpo_to_json)
      .def("to_dot", &io::tpo_to_dot)
      .def_static("from_json", &io::tpo_from_json, py::arg("text"))
      .def(
          "constraints",
          [](const io::TpoDocument& d) {
            std::vector<BoundTuple> out;
            for (const auto& b : tpo_to_constraints(d.tpo).bounds()) out.push_back(bound_tuple(d.alphabet, b));
            return out;
          },
          "Difference constraints equivalent to the TPO, order constraints included.")
      .def(
          "check",
          [](const io::TpoDocument& d, const LabeledTrace& trace) {
            return violation_dict(d.alphabet, check_trace(d.tpo, to_trace(d.alphabet, trace)).violation);
          },
          py::arg("trace"), "None if the trace is compatible, else a dict describing the first violation.")
      .def("__eq__", [](const io::TpoDocument& a, const io::TpoDocument& b) { return a == b; })
      .def("__repr__", [](const io::TpoDocument& d) {
        return "<Tpo events=" + std::to_string(d.tpo.size()) + " clocks=" + std::to_string(d.tpo.clocks()) + ">";
      });

  m.def(
      "mine",
      [](const std::vector<LabeledTrace>& traces, std::optional<std::vector<std::string>> alphabet,
         const std::string& heuristic, std::uint64_t seed, double inflation, bool drop_infinite) {
        const Alphabet a = alphabet_for(traces, alphabet);
        std::vector<TimedTrace> ts;
        for (const auto& t : traces) ts.push_back(to_trace(a, t));
        MiningConfig cfg;
        cfg.heuristic = heuristic_of(heuristic);
        cfg.seed = seed;
        cfg.inflation = inflation;
        if (drop_infinite) cfg.infinity_policy = InfinityPolicy::kDropUpperIfAtDataMax;
        py::gil_scoped_release release;
        return io::TpoDocument{a, mine(ts, a.size(), cfg).tpo()};
      },
      py::arg("traces"), py::arg("alphabet") = py::none(), py::arg("heuristic") = "nearest", py::arg("seed") = 1337,
      py::arg("inflation") = 0.0, py::arg("drop_infinite") = false,
      "Mine a TPO from traces given as lists of (label, time) pairs.");

  m.def(
      "reduce",
      [](const std::vector<std::string>& events, const std::vector<BoundTuple>& bounds, const std::string& heuristic,
         std::uint64_t seed) {
        const Alphabet a(events);
        DifferenceConstraintSystem sys(a.size());
        std::vector<PartialOrder::Edge> edges;
        for (const auto& t : bounds) {
          const Bound b = tuple_bound(a, t);
          sys.add(b);
          if (!b.absolute()) edges.emplace_back(b.from, b.to);
        }
        const auto r = eliminate_redundancy(sys, PartialOrder::from_edges(a.size(), edges), {heuristic_of(heuristic), seed});
        auto convert = [&](const std::vector<Bound>& bs) {
          std::vector<BoundTuple> out;
          for (const auto& b : bs) out.push_back(bound_tuple(a, b));
          return out;
        };
        return py::make_tuple(convert(r.kept.bounds()), convert(r.removed_redundant), convert(r.removed_trivial));
      },
      py::arg("events"), py::arg("bounds"), py::arg("heuristic") = "nearest", py::arg("seed") = 1337,
      "Returns (kept, removed, trivial) bound lists. Bounds are (from or None, to, relation, constant).");

  m.def(
      "generate",
      [](std::size_t events, double density, std::size_t clocks, std::size_t traces, std::uint64_t seed,
         int max_constant) {
        BenchmarkOptions opt;
        opt.events = events;
        opt.density = density;
        opt.bounds.clock_budget = clocks;
        opt.bounds.max_constant = max_constant;
        opt.traces = traces;
        opt.seed = seed;
        const auto b = generate_benchmark(opt);
        const auto a = Alphabet::numbered(events);
        std::vector<LabeledTrace> out;
        for (const auto& t : b.traces) out.push_back(from_trace(a, t));
        return py::make_tuple(io::TpoDocument{a, b.truth}, out);
      },
      py::arg("events") = 10, py::arg("density") = 0.2, py::arg("clocks") = 3, py::arg("traces") = 1000,
      py::arg("seed") = 1337, py::arg("max_constant") = 20,
      "Random ground-truth TPO and traces compatible with it.");

  m.def(
      "split",
      [](const std::vector<std::string>& alphabet, const LabeledTrace& log, std::size_t k) {
        std::vector<LabeledEntry> entries;
        for (const auto& [label, time] : log) entries.push_back({label, time});
        const auto r = split_log(Alphabet(alphabet), entries, k);
        std::vector<LabeledTrace> traces;
        for (const auto& t : r.traces) traces.push_back(from_trace(r.alphabet, t));
        LabeledTrace leftover;
        for (const auto& e : r.leftover) leftover.emplace_back(e.label, e.time);
        return py::make_tuple(r.alphabet.labels(), traces, leftover);
      },
      py::arg("alphabet"), py::arg("log"), py::arg("k"), "Returns (labels, traces, leftover).");

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "tpominer");
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a command line; returns (exit code, stdout, stderr).");
}
