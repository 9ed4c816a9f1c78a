#include "tpo/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace tpo::io {

using nlohmann::json;

namespace {

std::string line_ref(std::size_t line) { return "line " + std::to_string(line); }

void check_trace(const TimedTrace& trace, std::size_t n, Validation validation, const std::string& where) {
  try {
    if (validation == Validation::kStrict) {
      trace.validate(n);
      return;
    }
    for (const auto& e : trace.entries) {
      if (!std::isfinite(e.time) || e.time < 0.0) throw InputError("timestamps must be finite and non-negative");
    }
  } catch (const InputError& err) {
    throw ParseError(where, err.what());
  }
}

EventId resolve(const Alphabet& alphabet, const std::string& label, const std::string& where) {
  auto id = alphabet.find(label);
  if (!id) throw ParseError(where, "unknown event label '" + label + "'");
  return *id;
}

// Accepts a number or the string "inf".
double constant_of(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && v.get<std::string>() == "inf") return kInfinity;
  throw ParseError(where, "expected a number or \"inf\", got " + v.dump());
}

json constant_to_json(double c) {
  if (c == kInfinity) return "inf";
  return c;
}

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(where, err.what());
  }
}

std::string label_at(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where, "expected an event label, got " + v.dump());
  return v.get<std::string>();
}

Alphabet alphabet_of(const json& doc, const char* key, const std::string& where) {
  if (!doc.contains(key) || !doc[key].is_array()) throw ParseError(where, std::string("missing \"") + key + "\" array");
  std::vector<std::string> labels;
  for (const auto& v : doc[key]) labels.push_back(label_at(v, where));
  try {
    return Alphabet(std::move(labels));
  } catch (const InputError& err) {
    throw ParseError(where, err.what());
  }
}

std::vector<PartialOrder::Edge> edges_of(const json& arr, const Alphabet& alphabet, const std::string& where) {
  if (!arr.is_array()) throw ParseError(where, "edges must be an array");
  std::vector<PartialOrder::Edge> edges;
  for (const auto& pair : arr) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError(where, "edge must be a [from, to] pair: " + pair.dump());
    edges.emplace_back(resolve(alphabet, label_at(pair[0], where), where),
                       resolve(alphabet, label_at(pair[1], where), where));
  }
  return edges;
}

json edges_to_json(const PartialOrder& order, const Alphabet& alphabet) {
  json out = json::array();
  for (auto [a, b] : order.reduced_edges()) out.push_back({alphabet.label(a), alphabet.label(b)});
  return out;
}

PartialOrder order_of(std::size_t n, const std::vector<PartialOrder::Edge>& edges, const std::string& where) {
  try {
    return PartialOrder::from_edges(n, edges);
  } catch (const InputError& err) {
    throw ParseError(where, err.what());
  }
}

// Splits one CSV record; double quotes protect commas, "" is a literal quote.
std::vector<std::string> split_csv(const std::string& line, const std::string& where) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        fields.back() += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError(where, "unterminated quote");
  for (auto& f : fields) {
    const auto first = f.find_first_not_of(" \t");
    const auto last = f.find_last_not_of(" \t");
    f = first == std::string::npos ? "" : f.substr(first, last - first + 1);
  }
  return fields;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

double parse_time(const std::string& s, const std::string& where) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(where, "bad timestamp '" + s + "'");
  return v;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

TraceLog read_trace_log(std::istream& in, Validation validation) {
  TraceLog log;
  bool have_header = false;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = line_ref(number);
    const json doc = parse_json(line, where);
    if (!doc.is_object()) throw ParseError(where, "expected a JSON object");
    if (!have_header) {
      log.alphabet = alphabet_of(doc, "alphabet", where);
      have_header = true;
      continue;
    }
    if (!doc.contains("events") || !doc["events"].is_array()) throw ParseError(where, "missing \"events\" array");
    TimedTrace trace;
    for (const auto& item : doc["events"]) {
      if (!item.is_array() || item.size() != 2 || !item[1].is_number()) {
        throw ParseError(where, "event must be a [label, time] pair: " + item.dump());
      }
      trace.entries.push_back({resolve(log.alphabet, label_at(item[0], where), where), item[1].get<double>()});
    }
    check_trace(trace, log.alphabet.size(), validation,
                where + " (trace " + std::to_string(log.traces.size()) + ")");
    log.traces.push_back(std::move(trace));
  }
  if (!have_header) throw ParseError("line 1", "missing alphabet header");
  return log;
}

void write_trace_log(std::ostream& out, const TraceLog& log) {
  out << json{{"alphabet", log.alphabet.labels()}}.dump() << '\n';
  for (const auto& trace : log.traces) {
    json events = json::array();
    for (const auto& e : trace.entries) events.push_back({log.alphabet.label(e.event), e.time});
    out << json{{"events", events}}.dump() << '\n';
  }
}

TraceLog read_trace_log_csv(std::istream& in, Validation validation) {
  std::string line;
  std::size_t number = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") != std::string::npos) header = split_csv(line, line_ref(number));
  }
  if (header.empty()) throw ParseError("line 1", "missing CSV header");
  auto column = [&](const char* name) {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return k;
    }
    throw ParseError(line_ref(number), std::string("missing column '") + name + "'");
  };
  const std::size_t c_trace = column("trace_id"), c_event = column("event"), c_time = column("timestamp");

  TraceLog log;
  std::map<std::string, std::size_t> trace_index;
  std::vector<std::size_t> first_line;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = line_ref(number);
    const auto fields = split_csv(line, where);
    if (fields.size() != header.size()) throw ParseError(where, "expected " + std::to_string(header.size()) + " fields");
    if (fields[c_event].empty()) throw ParseError(where, "empty event label");
    auto [it, fresh] = trace_index.try_emplace(fields[c_trace], log.traces.size());
    if (fresh) {
      log.traces.emplace_back();
      first_line.push_back(number);
    }
    log.traces[it->second].entries.push_back({log.alphabet.intern(fields[c_event]), parse_time(fields[c_time], where)});
  }
  for (std::size_t k = 0; k < log.traces.size(); ++k) {
    check_trace(log.traces[k], log.alphabet.size(), validation,
                "trace " + std::to_string(k) + " (from " + line_ref(first_line[k]) + ")");
  }
  return log;
}

void write_trace_log_csv(std::ostream& out, const TraceLog& log) {
  out << "trace_id,event,timestamp\n";
  std::ostringstream time;
  time.precision(17);
  for (std::size_t k = 0; k < log.traces.size(); ++k) {
    for (const auto& e : log.traces[k].entries) {
      time.str("");
      time << e.time;
      out << k << ',' << csv_field(log.alphabet.label(e.event)) << ',' << time.str() << '\n';
    }
  }
}

TraceLog load_trace_log(const std::string& path, Validation validation) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  try {
    return csv ? read_trace_log_csv(in, validation) : read_trace_log(in, validation);
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.where(), err.message());
  }
}

void save_trace_log(const std::string& path, const TraceLog& log) {
  std::ostringstream out;
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  if (csv) {
    write_trace_log_csv(out, log);
  } else {
    write_trace_log(out, log);
  }
  write_file(path, out.str());
}

std::string tpo_to_json(const TpoDocument& doc) {
  const auto& alpha = doc.alphabet;
  const auto& tpo = doc.tpo;
  if (alpha.size() != tpo.size()) throw InputError("alphabet size does not match TPO");
  json guards = json::object(), resets = json::object();
  for (EventId e = 0; e < tpo.size(); ++e) {
    if (!tpo.guard(e).trivial()) {
      json list = json::array();
      for (const auto& c : tpo.guard(e).conjuncts) {
        list.push_back({{"clock", c.clock}, {"relation", to_string(c.relation)}, {"constant", constant_to_json(c.constant)}});
      }
      guards[alpha.label(e)] = list;
    }
    if (!tpo.resets(e).empty()) resets[alpha.label(e)] = tpo.resets(e);
  }
  json out{{"events", alpha.labels()},
           {"edges", edges_to_json(tpo.order(), alpha)},
           {"clocks", tpo.clocks()},
           {"guards", guards},
           {"resets", resets}};
  return out.dump(2) + "\n";
}

TpoDocument tpo_from_json(const std::string& text) {
  const json doc = parse_json(text, "tpo");
  if (!doc.is_object()) throw ParseError("tpo", "expected a JSON object");
  TpoDocument out;
  out.alphabet = alphabet_of(doc, "events", "tpo");
  const std::size_t n = out.alphabet.size();
  const auto order = order_of(n, edges_of(doc.value("edges", json::array()), out.alphabet, "tpo.edges"), "tpo.edges");
  const auto clocks_field = doc.value("clocks", json(0));
  if (!clocks_field.is_number_unsigned()) throw ParseError("tpo.clocks", "expected a non-negative integer");
  const auto clocks = clocks_field.get<std::size_t>();

  std::vector<Guard> guards(n);
  const json gs = doc.value("guards", json::object());
  if (!gs.is_object()) throw ParseError("tpo.guards", "expected an object keyed by event");
  for (const auto& [label, list] : gs.items()) {
    const std::string where = "tpo.guards." + label;
    const EventId e = resolve(out.alphabet, label, where);
    if (!list.is_array()) throw ParseError(where, "expected a list of conjuncts");
    for (const auto& c : list) {
      if (!c.is_object() || !c.contains("clock") || !c.contains("relation") || !c.contains("constant") ||
          !c["clock"].is_number_unsigned() || !c["relation"].is_string()) {
        throw ParseError(where, "conjunct needs clock, relation and constant: " + c.dump());
      }
      const auto rel = c["relation"].get<std::string>();
      if (rel != "<=" && rel != ">=") throw ParseError(where, "relation must be <= or >=");
      guards[e].conjuncts.push_back(
          {c["clock"].get<ClockId>(), rel == "<=" ? Relation::kLe : Relation::kGe, constant_of(c["constant"], where)});
    }
  }
  std::vector<std::vector<ClockId>> resets(n);
  const json rs = doc.value("resets", json::object());
  if (!rs.is_object()) throw ParseError("tpo.resets", "expected an object keyed by event");
  for (const auto& [label, list] : rs.items()) {
    const std::string where = "tpo.resets." + label;
    const EventId e = resolve(out.alphabet, label, where);
    if (!list.is_array()) throw ParseError(where, "expected a list of clocks");
    for (const auto& c : list) {
      if (!c.is_number_unsigned()) throw ParseError(where, "clock must be a non-negative integer");
      resets[e].push_back(c.get<ClockId>());
    }
  }
  try {
    out.tpo = Tpo(order, clocks, std::move(guards), std::move(resets));
  } catch (const InputError& err) {
    throw ParseError("tpo", err.what());
  }
  return out;
}

TpoDocument load_tpo(const std::string& path) {
  try {
    return tpo_from_json(read_file(path));
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.where(), err.message());
  }
}

std::string tpo_to_dot(const TpoDocument& doc) {
  const auto& tpo = doc.tpo;
  std::ostringstream os;
  os << "digraph tpo {\n  rankdir=LR;\n  node [shape=box, style=rounded];\n";
  for (EventId e = 0; e < tpo.size(); ++e) {
    std::string label = dot_escape(doc.alphabet.label(e));
    for (const auto& c : tpo.guard(e).conjuncts) {
      std::ostringstream g;
      g << 'c' << c.clock << ' ' << to_string(c.relation) << ' ' << c.constant;
      label += "\\n" + g.str();
    }
    for (ClockId c : tpo.resets(e)) label += "\\nc" + std::to_string(c) + " := 0";
    os << "  n" << e << " [label=\"" << label << "\"];\n";
  }
  for (auto [a, b] : tpo.order().reduced_edges()) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

std::string constraints_to_json(const ConstraintDocument& doc) {
  json list = json::array();
  for (const auto& b : doc.system.bounds()) {
    json item{{"to", doc.alphabet.label(b.to)},
              {"relation", to_string(b.relation)},
              {"constant", constant_to_json(b.constant)}};
    item["from"] = b.absolute() ? json(nullptr) : json(doc.alphabet.label(b.from));
    list.push_back(item);
  }
  json out{{"events", doc.alphabet.labels()}, {"constraints", list}};
  if (doc.order) out["order"] = edges_to_json(*doc.order, doc.alphabet);
  return out.dump(2) + "\n";
}

ConstraintDocument constraints_from_json(const std::string& text) {
  const json doc = parse_json(text, "constraints");
  if (!doc.is_object()) throw ParseError("constraints", "expected a JSON object");
  ConstraintDocument out;
  out.alphabet = alphabet_of(doc, "events", "constraints");
  const std::size_t n = out.alphabet.size();
  out.system = DifferenceConstraintSystem(n, {});
  if (!doc.contains("constraints") || !doc["constraints"].is_array()) {
    throw ParseError("constraints", "missing \"constraints\" array");
  }
  std::size_t index = 0;
  for (const auto& c : doc["constraints"]) {
    const std::string where = "constraint " + std::to_string(index++);
    if (!c.is_object() || !c.contains("to")) throw ParseError(where, "expected an object with \"to\"");
    const EventId to = resolve(out.alphabet, label_at(c["to"], where), where);
    EventId from = kOrigin;
    if (c.contains("from") && !c["from"].is_null()) from = resolve(out.alphabet, label_at(c["from"], where), where);
    try {
      if (c.contains("relation")) {
        const auto rel = c["relation"].is_string() ? c["relation"].get<std::string>() : "";
        if (rel != "<=" && rel != ">=") throw ParseError(where, "relation must be <= or >=");
        if (!c.contains("constant")) throw ParseError(where, "missing \"constant\"");
        out.system.add({from, to, rel == "<=" ? Relation::kLe : Relation::kGe, constant_of(c["constant"], where)});
      } else if (c.contains("lower") || c.contains("upper")) {
        const double lo = c.contains("lower") ? constant_of(c["lower"], where) : 0.0;
        const double hi = c.contains("upper") ? constant_of(c["upper"], where) : kInfinity;
        out.system.add_interval(from, to, lo, hi);
      } else {
        throw ParseError(where, "needs relation/constant or lower/upper");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& err) {
      throw ParseError(where, err.what());
    }
  }
  if (doc.contains("order") && !doc["order"].is_null()) {
    out.order = order_of(n, edges_of(doc["order"], out.alphabet, "order"), "order");
  }
  return out;
}

ConstraintDocument load_constraints(const std::string& path) {
  try {
    return constraints_from_json(read_file(path));
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.where(), err.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace tpo::io
