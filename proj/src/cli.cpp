#include "tpo/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "tpo/constraints.hpp"
#include "tpo/gen.hpp"
#include "tpo/io.hpp"
#include "tpo/mining.hpp"
#include "tpo/monitor.hpp"

namespace tpo::cli {

namespace {

enum class Level : int { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Diagnostics threshold from TPO_LOG_LEVEL (error, warn, info, debug).
Level log_level() {
  const char* env = std::getenv("TPO_LOG_LEVEL");
  if (!env) return Level::kWarn;
  const std::string v = env;
  if (v == "error") return Level::kError;
  if (v == "info") return Level::kInfo;
  if (v == "debug") return Level::kDebug;
  return Level::kWarn;
}

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err), level_(log_level()) {}
  void operator()(Level level, const std::string& msg) const {
    static constexpr const char* kNames[] = {"error", "warn", "info", "debug"};
    if (level <= level_) err_ << "[" << kNames[static_cast<int>(level)] << "] " << msg << '\n';
  }

 private:
  std::ostream& err_;
  Level level_;
};

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

const std::map<std::string, Heuristic> kHeuristics{
    {"nearest", Heuristic::kNearest}, {"distant", Heuristic::kDistant},
    {"random", Heuristic::kRandom},   {"sound", Heuristic::kSound}};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Smallest order under which every bound t_j - t_i relates i before j.
PartialOrder order_from_bounds(const DifferenceConstraintSystem& sys) {
  std::vector<PartialOrder::Edge> edges;
  for (const auto& b : sys.bounds()) {
    if (!b.absolute()) edges.emplace_back(b.from, b.to);
  }
  return PartialOrder::from_edges(sys.size(), edges);
}

struct MineArgs {
  std::string log;
  std::string heuristic = "nearest";
  std::uint64_t seed = 1337;
  double inflate = 0.0;
  bool drop_infinite = false;
  std::string out, dot;
};

int cmd_mine(const MineArgs& a, std::ostream& out, std::ostream& err, const Log& log) {
  const auto start = std::chrono::steady_clock::now();
  const auto traces = io::load_trace_log(a.log);
  MiningConfig cfg;
  cfg.heuristic = kHeuristics.at(a.heuristic);
  cfg.seed = a.seed;
  cfg.inflation = a.inflate;
  if (a.drop_infinite) cfg.infinity_policy = InfinityPolicy::kDropUpperIfAtDataMax;
  const auto report = mine(traces.traces, traces.alphabet.size(), cfg);
  for (const auto& w : report.synthesis.graph.warnings) log(Level::kInfo, w);
  log(Level::kDebug, "order " + std::to_string(report.seconds_order) + " s, bounds " +
                         std::to_string(report.seconds_bounds) + " s, elimination " +
                         std::to_string(report.seconds_elimination) + " s, synthesis " +
                         std::to_string(report.seconds_synthesis) + " s");

  const io::TpoDocument doc{traces.alphabet, report.tpo()};
  const std::string json = io::tpo_to_json(doc);
  if (!a.dot.empty()) io::write_file(a.dot, io::tpo_to_dot(doc));
  if (!a.out.empty()) io::write_file(a.out, json);
  const double wall = ms_since(start);

  // Summary goes to stdout unless stdout carries the TPO itself.
  std::ostream& summary = a.out.empty() ? err : out;
  if (a.out.empty()) out << json;
  const auto& el = report.elimination;
  summary << "events: " << traces.alphabet.size() << '\n'
          << "traces: " << traces.traces.size() << '\n'
          << "heuristic: " << a.heuristic << '\n'
          << "constraints: " << report.raw.bounds().size() << " mined, " << el.kept.bounds().size() << " kept\n"
          << "eliminated: " << el.removed_trivial.size() + el.removed_redundant.size() << " ("
          << el.removed_redundant.size() << " redundant, " << el.removed_trivial.size() << " trivial)\n"
          << "clocks: " << report.tpo().clocks() << '\n'
          << "wall_ms: " << fixed(wall, 1) << '\n';
  return kExitOk;
}

int cmd_check(const std::string& tpo_path, const std::string& log_path, bool all, std::ostream& out) {
  const auto doc = io::load_tpo(tpo_path);
  const auto traces = io::load_trace_log(log_path, io::Validation::kLenient);
  if (!(traces.alphabet == doc.alphabet)) {
    // Same label set in a different order is fine; remap onto the TPO's ids.
    for (const auto& l : traces.alphabet.labels()) {
      if (!doc.alphabet.find(l)) throw InputError("log event '" + l + "' is not an event of the TPO");
    }
  }
  std::size_t bad = 0;
  for (std::size_t k = 0; k < traces.traces.size(); ++k) {
    TimedTrace t;
    for (const auto& e : traces.traces[k].entries) {
      t.entries.push_back({doc.alphabet.id(traces.alphabet.label(e.event)), e.time});
    }
    const auto& labels = doc.alphabet.labels();
    if (all) {
      const auto vs = check_trace_all(doc.tpo, t);
      if (vs.empty()) {
        out << "trace " << k << ": compatible\n";
        continue;
      }
      ++bad;
      for (const auto& v : vs) out << "trace " << k << ": " << v.describe(labels) << '\n';
    } else {
      const auto r = check_trace(doc.tpo, t);
      if (r.compatible()) {
        out << "trace " << k << ": compatible\n";
      } else {
        ++bad;
        out << "trace " << k << ": " << r.violation->describe(labels) << '\n';
      }
    }
  }
  out << traces.traces.size() - bad << " of " << traces.traces.size() << " traces compatible\n";
  return bad == 0 ? kExitOk : kExitViolations;
}

int cmd_reduce(const std::string& path, const std::string& heuristic, std::uint64_t seed, std::ostream& out,
               std::ostream& err) {
  const auto doc = io::load_constraints(path);
  const PartialOrder order = doc.order ? *doc.order : order_from_bounds(doc.system);
  if (!doc.system.respects(order)) throw InputError("constraints relate events that are not ordered");
  const auto& labels = doc.alphabet.labels();
  if (auto cycle = find_negative_cycle(doc.system.with_order(order))) {
    err << "infeasible: negative cycle\n";
    for (const auto& b : *cycle) err << "  " << format_bound(b, labels) << '\n';
    return kExitInputError;
  }
  const auto r = eliminate_redundancy(doc.system, order, {kHeuristics.at(heuristic), seed});
  for (const auto& b : r.kept.bounds()) out << format_bound(b, labels) << '\n';
  for (const auto& b : r.removed_redundant) out << "removed: " << format_bound(b, labels) << '\n';
  for (const auto& b : r.removed_trivial) out << "trivial: " << format_bound(b, labels) << '\n';
  return kExitOk;
}

struct GenerateArgs {
  std::size_t events = 10;
  double density = 0.2;
  std::size_t clocks = 3;
  int max_constant = 20;
  std::size_t traces = 1000;
  std::uint64_t seed = 1337;
  std::string out, truth;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, const Log& log) {
  BenchmarkOptions opt;
  opt.events = a.events;
  opt.density = a.density;
  opt.bounds.clock_budget = a.clocks;
  opt.bounds.max_constant = a.max_constant;
  opt.traces = a.traces;
  opt.seed = a.seed;
  const auto b = generate_benchmark(opt);
  const auto alphabet = Alphabet::numbered(a.events);
  const io::TraceLog traces{alphabet, b.traces};
  std::string truth_path = a.truth;
  if (truth_path.empty() && !a.out.empty()) truth_path = a.out + ".truth.json";
  if (!truth_path.empty()) io::write_file(truth_path, io::tpo_to_json({alphabet, b.truth}));
  if (a.out.empty()) {
    io::write_trace_log(out, traces);
  } else {
    io::save_trace_log(a.out, traces);
    out << "wrote " << traces.traces.size() << " traces to " << a.out << '\n';
  }
  if (!truth_path.empty()) log(Level::kInfo, "ground truth written to " + truth_path);
  return kExitOk;
}

int cmd_split(const std::string& path, std::size_t k, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  const auto in = io::load_trace_log(path, io::Validation::kLenient);
  if (in.traces.size() != 1) {
    throw InputError("split expects a log holding one interleaved trace, found " + std::to_string(in.traces.size()));
  }
  std::vector<LabeledEntry> entries;
  for (const auto& e : in.traces[0].entries) entries.push_back({in.alphabet.label(e.event), e.time});
  const auto r = split_log(in.alphabet, entries, k);
  const io::TraceLog result{r.alphabet, r.traces};

  std::ostream& summary = out_path.empty() ? err : out;
  if (out_path.empty()) {
    io::write_trace_log(out, result);
  } else {
    io::save_trace_log(out_path, result);
  }
  summary << "traces: " << r.traces.size() << '\n' << "leftover:";
  for (EventId e = 0; e < in.alphabet.size(); ++e) summary << ' ' << in.alphabet.label(e) << '=' << r.counts.y[e];
  summary << '\n';
  return kExitOk;
}

struct BenchArgs {
  std::string events_list = "10,25,50";
  std::size_t traces = 1000;
  std::string heuristics = "nearest,sound";
  std::size_t repeats = 10;
  std::uint64_t seed = 1337;
  double density = 0.2;
  std::size_t clocks = 3;
  std::size_t jobs = 1;
};

struct BenchRow {
  std::size_t n = 0;
  std::string heuristic;
  std::size_t repeat = 0;
  std::size_t clocks = 0;
  double wall_ms = 0.0;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  std::vector<std::size_t> sizes;
  for (const auto& s : split_commas(a.events_list)) {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size() || v == 0) throw InputError("bad event count '" + s + "'");
    sizes.push_back(v);
  }
  const auto names = split_commas(a.heuristics);
  for (const auto& h : names) {
    if (!kHeuristics.count(h)) throw InputError("unknown heuristic '" + h + "'");
  }
  if (sizes.empty() || names.empty()) throw InputError("nothing to benchmark");

  // One job per (size, repeat); the generated log is shared by all heuristics.
  struct Job {
    std::size_t size_index, repeat;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    for (std::size_t r = 0; r < a.repeats; ++r) jobs.push_back({s, r});
  }
  std::vector<std::vector<BenchRow>> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t j; (j = next++) < jobs.size();) {
      try {
        BenchmarkOptions opt;
        opt.events = sizes[jobs[j].size_index];
        opt.density = a.density;
        opt.bounds.clock_budget = a.clocks;
        opt.traces = a.traces;
        opt.seed = a.seed + 1000 * jobs[j].repeat;
        const auto b = generate_benchmark(opt);
        for (const auto& h : names) {
          MiningConfig cfg;
          cfg.heuristic = kHeuristics.at(h);
          cfg.seed = opt.seed;
          const auto start = std::chrono::steady_clock::now();
          const auto report = mine(b.traces, opt.events, cfg);
          rows[j].push_back({opt.events, h, jobs[j].repeat, report.tpo().clocks(), ms_since(start)});
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(a.jobs, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  out << "n,heuristic,repeat,clocks,wall_ms\n";
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    for (const auto& h : names) {
      double clocks = 0, wall = 0;
      std::size_t count = 0;
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (jobs[j].size_index != s) continue;
        for (const auto& row : rows[j]) {
          if (row.heuristic != h) continue;
          out << row.n << ',' << h << ',' << row.repeat << ',' << row.clocks << ',' << fixed(row.wall_ms, 3) << '\n';
          clocks += static_cast<double>(row.clocks);
          wall += row.wall_ms;
          ++count;
        }
      }
      if (count) {
        out << sizes[s] << ',' << h << ",mean," << fixed(clocks / static_cast<double>(count), 2) << ','
            << fixed(wall / static_cast<double>(count), 3) << '\n';
      }
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Log log(err);
  CLI::App app{"Mine, check and reduce timed partial orders", args.empty() ? "tpo" : args.front()};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  const auto heuristic_check = CLI::IsMember(kHeuristics);

  MineArgs mine_args;
  auto* mine_cmd = app.add_subcommand("mine", "Mine a TPO from a trace log");
  mine_cmd->add_option("log", mine_args.log, "Trace log (.jsonl or .csv)")->required();
  mine_cmd->add_option("--heuristic", mine_args.heuristic, "Redundancy elimination order")
      ->check(heuristic_check)
      ->capture_default_str();
  mine_cmd->add_option("--seed", mine_args.seed, "Seed for the random heuristic")->capture_default_str();
  mine_cmd->add_option("--inflate", mine_args.inflate, "Widen each mined interval by this fraction of its width")
      ->check(CLI::NonNegativeNumber);
  mine_cmd->add_flag("--drop-infinite", mine_args.drop_infinite,
                     "Drop absolute upper bounds that sit at the largest timestamp of the log");
  mine_cmd->add_option("--out", mine_args.out, "Write the TPO JSON here (default: stdout)");
  mine_cmd->add_option("--dot", mine_args.dot, "Also write a Graphviz rendering");

  std::string check_tpo, check_log;
  bool check_all = false;
  auto* check_cmd = app.add_subcommand("check", "Check traces against a TPO");
  check_cmd->add_option("tpo", check_tpo, "TPO JSON")->required();
  check_cmd->add_option("log", check_log, "Trace log (.jsonl or .csv)")->required();
  check_cmd->add_flag("--all", check_all, "Report every guard violation, not just the first");

  std::string reduce_path, reduce_heuristic = "nearest";
  std::uint64_t reduce_seed = 1337;
  auto* reduce_cmd = app.add_subcommand("reduce", "Remove redundant and trivial difference constraints");
  reduce_cmd->add_option("constraints", reduce_path, "Constraint JSON")->required();
  reduce_cmd->add_option("--heuristic", reduce_heuristic)->check(heuristic_check)->capture_default_str();
  reduce_cmd->add_option("--seed", reduce_seed)->capture_default_str();

  GenerateArgs gen_args;
  auto* gen_cmd = app.add_subcommand("generate", "Generate a random TPO and traces compatible with it");
  gen_cmd->add_option("--events", gen_args.events)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--density", gen_args.density)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen_cmd->add_option("--clocks", gen_args.clocks)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--max-constant", gen_args.max_constant)->check(CLI::NonNegativeNumber)->capture_default_str();
  gen_cmd->add_option("--traces", gen_args.traces)->capture_default_str();
  gen_cmd->add_option("--seed", gen_args.seed)->capture_default_str();
  gen_cmd->add_option("--out", gen_args.out, "Trace log path (default: stdout)");
  gen_cmd->add_option("--truth", gen_args.truth, "Ground-truth TPO path (default: <out>.truth.json)");

  std::string split_path, split_out;
  std::size_t split_k = 1;
  auto* split_cmd = app.add_subcommand("split", "Split one interleaved log into k traces");
  split_cmd->add_option("log", split_path)->required();
  split_cmd->add_option("--k", split_k, "Number of traces")->required()->check(CLI::PositiveNumber);
  split_cmd->add_option("--out", split_out, "Output log path (default: stdout)");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Clock counts and mining time over generated benchmarks");
  bench_cmd->add_option("--events-list", bench_args.events_list)->capture_default_str();
  bench_cmd->add_option("--traces", bench_args.traces)->capture_default_str();
  bench_cmd->add_option("--heuristics", bench_args.heuristics)->capture_default_str();
  bench_cmd->add_option("--repeats", bench_args.repeats)->capture_default_str();
  bench_cmd->add_option("--seed", bench_args.seed)->capture_default_str();
  bench_cmd->add_option("--density", bench_args.density)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  bench_cmd->add_option("--clocks", bench_args.clocks)->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--jobs", bench_args.jobs, "Worker threads")->capture_default_str();

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*mine_cmd) return cmd_mine(mine_args, out, err, log);
    if (*check_cmd) return cmd_check(check_tpo, check_log, check_all, out);
    if (*reduce_cmd) return cmd_reduce(reduce_path, reduce_heuristic, reduce_seed, out, err);
    if (*gen_cmd) return cmd_generate(gen_args, out, log);
    if (*split_cmd) return cmd_split(split_path, split_k, split_out, out, err);
    if (*bench_cmd) return cmd_bench(bench_args, out);
  } catch (const InfeasibleError& e) {
    log(Level::kError, e.what());
    return kExitInputError;
  } catch (const InputError& e) {
    log(Level::kError, e.what());
    return kExitInputError;
  } catch (const PreconditionError& e) {
    log(Level::kError, e.what());
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace tpo::cli
