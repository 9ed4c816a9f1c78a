#include "doctest.h"

#include <functional>
#include <sstream>

#include "support/fixtures.hpp"
#include "tpo/gen.hpp"
#include "tpo/io.hpp"
#include "tpo/mining.hpp"

using namespace tpo;
using namespace fixtures;

namespace {

io::TraceLog read_jsonl(const std::string& text, io::Validation v = io::Validation::kStrict) {
  std::istringstream in(text);
  return io::read_trace_log(in, v);
}

io::TraceLog read_csv(const std::string& text, io::Validation v = io::Validation::kStrict) {
  std::istringstream in(text);
  return io::read_trace_log_csv(in, v);
}

std::string parse_error_location(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const io::ParseError& e) {
    return e.where();
  }
  return "<no error>";
}

// CSV carries no alphabet header, so compare traces by label.
std::vector<std::vector<std::pair<std::string, double>>> labeled(const io::TraceLog& log) {
  std::vector<std::vector<std::pair<std::string, double>>> out;
  for (const auto& t : log.traces) {
    out.emplace_back();
    for (const auto& e : t.entries) out.back().emplace_back(log.alphabet.label(e.event), e.time);
  }
  return out;
}

}  // namespace

TEST_CASE("jsonl trace log") {
  const auto log = read_jsonl(R"({"alphabet": ["a", "b"]}

{"events": [["a", 0.0], ["b", 1.5]]}
{"events": [["b", 0], ["a", 2]]}
)");
  CHECK(log.alphabet.labels() == std::vector<std::string>{"a", "b"});
  REQUIRE(log.traces.size() == 2);
  CHECK(log.traces[0] == trace_of({{1, 0.0}, {2, 1.5}}));
  CHECK(log.traces[1] == trace_of({{2, 0}, {1, 2}}));

  std::ostringstream out;
  io::write_trace_log(out, log);
  CHECK(read_jsonl(out.str()) == log);

  CHECK(read_jsonl(R"({"alphabet": ["a"]})").traces.empty());
}

TEST_CASE("jsonl errors name the line") {
  CHECK(parse_error_location([] { read_jsonl(""); }) == "line 1");
  CHECK(parse_error_location([] { read_jsonl("{\"alphabet\": [\"a\"]}\n{\"events\": [[\"a\", 0]]}\n{oops\n"); }) ==
        "line 3");
  CHECK(parse_error_location([] { read_jsonl("{\"alphabet\": [\"a\"]}\n{\"events\": [[\"z\", 0]]}\n"); }) ==
        "line 2");
  CHECK(parse_error_location([] { read_jsonl("{\"alphabet\": [\"a\", \"a\"]}\n"); }) == "line 1");
  CHECK(parse_error_location([] { read_jsonl("{\"alphabet\": [\"a\"]}\n{\"events\": [[\"a\", \"x\"]]}\n"); }) ==
        "line 2");

  // Strict loading validates each trace; lenient loading leaves it to the monitor.
  const std::string dup = "{\"alphabet\": [\"a\", \"b\"]}\n{\"events\": [[\"a\", 0], [\"a\", 1]]}\n";
  CHECK(parse_error_location([&] { read_jsonl(dup); }) == "line 2 (trace 0)");
  CHECK(read_jsonl(dup, io::Validation::kLenient).traces[0].size() == 2);
  const std::string negative = "{\"alphabet\": [\"a\"]}\n{\"events\": [[\"a\", -1]]}\n";
  CHECK_THROWS_AS(read_jsonl(negative, io::Validation::kLenient), io::ParseError);
}

TEST_CASE("csv trace log") {
  const auto log = read_csv(
      "timestamp, trace_id, event\n"
      "0.5, run-1, start\n"
      "1, run-2, start\n"
      "2.25, run-1, \"stop, then wait\"\n"
      "3, run-2, \"stop, then wait\"\n");
  CHECK(log.alphabet.labels() == std::vector<std::string>{"start", "stop, then wait"});
  REQUIRE(log.traces.size() == 2);
  CHECK(log.traces[0] == trace_of({{1, 0.5}, {2, 2.25}}));
  CHECK(log.traces[1] == trace_of({{1, 1}, {2, 3}}));

  std::ostringstream out;
  io::write_trace_log_csv(out, log);
  CHECK(read_csv(out.str()) == log);

  CHECK(parse_error_location([] { read_csv("trace_id,event\n"); }) == "line 1");
  CHECK(parse_error_location([] { read_csv("trace_id,event,timestamp\n1,a,0\n1,b,x\n"); }) == "line 3");
  CHECK(parse_error_location([] { read_csv("trace_id,event,timestamp\n1,a,0\n1,b\n"); }) == "line 3");
  // Run 2 lacks event b.
  CHECK(parse_error_location([] { read_csv("trace_id,event,timestamp\n1,a,0\n1,b,1\n2,a,0\n"); }) ==
        "trace 1 (from line 4)");
}

TEST_CASE("generated logs survive both formats") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    BenchmarkOptions opt;
    opt.events = 3 + seed;
    opt.traces = 20;
    opt.seed = seed;
    opt.sampler.quantum = seed % 2 ? 0.0 : 1.0 / 1024;  // unquantized times need full precision
    const auto b = generate_benchmark(opt);
    const io::TraceLog log{Alphabet::numbered(opt.events), b.traces};
    std::ostringstream json, csv;
    io::write_trace_log(json, log);
    io::write_trace_log_csv(csv, log);
    CHECK(read_jsonl(json.str()) == log);
    CHECK(labeled(read_csv(csv.str())) == labeled(log));
  }
}

TEST_CASE("tpo json round trip") {
  const io::TpoDocument windshield{Alphabet::numbered(6), windshield_tpo()};
  const auto text = io::tpo_to_json(windshield);
  CHECK(io::tpo_from_json(text) == windshield);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BenchmarkOptions opt;
    opt.events = 2 + seed;
    opt.traces = 50;
    opt.seed = seed;
    const auto b = generate_benchmark(opt);
    const io::TpoDocument truth{Alphabet::numbered(opt.events), b.truth};
    CHECK(io::tpo_from_json(io::tpo_to_json(truth)) == truth);
    // Mined constants are arbitrary doubles.
    const io::TpoDocument mined{truth.alphabet, mine_tpo(b.traces, opt.events)};
    CHECK(io::tpo_from_json(io::tpo_to_json(mined)) == mined);
  }
}

TEST_CASE("tpo json errors") {
  const std::string head = R"({"events": ["a", "b"], "edges": [["a", "b"]], "clocks": 1, )";
  CHECK_NOTHROW(io::tpo_from_json(head + R"("guards": {"b": [{"clock": 0, "relation": "<=", "constant": 3}]}})"));
  CHECK_THROWS_AS(io::tpo_from_json(head + R"("guards": {"b": [{"clock": 0, "relation": "<", "constant": 3}]}})"),
                  io::ParseError);
  CHECK_THROWS_AS(io::tpo_from_json(head + R"("guards": {"c": []}})"), io::ParseError);
  // Clock out of range fails the core invariants.
  CHECK_THROWS_AS(io::tpo_from_json(head + R"("resets": {"a": [4]}})"), io::ParseError);
  CHECK_THROWS_AS(io::tpo_from_json(R"({"events": ["a", "b"], "edges": [["a", "b"], ["b", "a"]]})"), io::ParseError);
  CHECK_THROWS_AS(io::tpo_from_json("[1, 2"), io::ParseError);
}

TEST_CASE("dot output") {
  const io::TpoDocument doc{Alphabet::numbered(6), windshield_tpo()};
  const auto dot = io::tpo_to_dot(doc);
  std::size_t nodes = 0, edges = 0;
  std::istringstream in(dot);
  for (std::string line; std::getline(in, line);) {
    if (line.find("[label=") != std::string::npos) ++nodes;
    if (line.find("->") != std::string::npos) ++edges;
  }
  CHECK(nodes == 6);
  CHECK(edges == windshield_order().reduced_edges().size());
  CHECK(dot.find("n3 [label=\"e4\\nc0 <= 5\"]") != std::string::npos);
  CHECK(dot.find("c1 := 0") != std::string::npos);
  CHECK(dot.find("n0 -> n1;") != std::string::npos);
}

TEST_CASE("constraint json") {
  const auto doc = io::constraints_from_json(R"({
    "events": ["e1", "e2", "e3"],
    "constraints": [
      {"to": "e1", "relation": "<=", "constant": 4},
      {"from": null, "to": "e2", "lower": 1, "upper": "inf"},
      {"from": "e1", "to": "e3", "relation": ">=", "constant": 2.5}
    ],
    "order": [["e1", "e3"]]
  })");
  DifferenceConstraintSystem expected(3);
  expected.add({kOrigin, e(1), Relation::kLe, 4});
  expected.add_interval(kOrigin, e(2), 1, kInfinity);
  expected.add({e(1), e(3), Relation::kGe, 2.5});
  CHECK(doc.system.bounds() == expected.bounds());
  REQUIRE(doc.order);
  CHECK(doc.order->precedes(e(1), e(3)));
  CHECK(doc.order->relation_size() == 1);

  const auto again = io::constraints_from_json(io::constraints_to_json(doc));
  CHECK(again.system.bounds() == doc.system.bounds());
  CHECK(again.alphabet == doc.alphabet);
  CHECK(*again.order == *doc.order);

  auto where = [](const std::string& c) {
    return parse_error_location(
        [&] { io::constraints_from_json(R"({"events": ["a", "b"], "constraints": [)" + c + "]}"); });
  };
  CHECK(where(R"({"to": "a", "relation": "<=", "constant": 1}, {"to": "b", "relation": "=", "constant": 1})") ==
        "constraint 1");
  CHECK(where(R"({"to": "a", "relation": ">=", "constant": "inf"})") == "constraint 0");
  CHECK(where(R"({"to": "a", "relation": ">=", "constant": -1})") == "constraint 0");
  CHECK(where(R"({"to": "a", "lower": "soon"})") == "constraint 0");
  CHECK(where(R"({"to": "a", "from": "a", "relation": "<=", "constant": 1})") == "constraint 0");
  CHECK(where(R"({"to": "q", "relation": "<=", "constant": 1})") == "constraint 0");
}
