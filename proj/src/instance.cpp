#include "netd/instance.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "netd/errors.hpp"

namespace netd {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;

ordered_json rat(const Rational& x) { return to_fraction(x); }

Rational unrat(const ordered_json& j) {
  if (!j.is_string()) throw input_error("rational values must be \"p/q\" strings");
  return parse_fraction(j.get<std::string>());
}

ordered_json rational_list(const std::vector<Rational>& xs) {
  ordered_json out = ordered_json::array();
  for (const Rational& x : xs) out.push_back(rat(x));
  return out;
}

std::vector<Rational> unrational_list(const ordered_json& j) {
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(unrat(x));
  return out;
}

ordered_json graph_to_json(const Graph& g) {
  ordered_json out;
  out["nodes"] = g.node_count();
  out["directed"] = g.directed();
  ordered_json edges = ordered_json::array();
  for (const GraphEdge& e : g.edges()) {
    ordered_json je;
    je["id"] = e.id;
    je["tail"] = e.tail;
    je["head"] = e.head;
    je["cost"] = rat(e.cost);
    edges.push_back(std::move(je));
  }
  out["edges"] = std::move(edges);
  if (g.node_costs()) out["node_costs"] = rational_list(*g.node_costs());
  if (g.edge_weights()) out["edge_weights"] = rational_list(*g.edge_weights());
  return out;
}

Graph graph_from_json(const ordered_json& j) {
  std::vector<GraphEdge> edges;
  for (const auto& je : j.at("edges"))
    edges.push_back({je.at("id").get<int>(), je.at("tail").get<int>(), je.at("head").get<int>(),
                     unrat(je.at("cost"))});
  std::optional<std::vector<Rational>> node_costs;
  if (j.contains("node_costs")) node_costs = unrational_list(j.at("node_costs"));
  std::optional<std::vector<Rational>> edge_weights;
  if (j.contains("edge_weights")) edge_weights = unrational_list(j.at("edge_weights"));
  return Graph(j.at("nodes").get<int>(), j.at("directed").get<bool>(), std::move(edges),
               std::move(node_costs), std::move(edge_weights));
}

ordered_json delay_to_json(const DelayFunction& d) {
  ordered_json out;
  ordered_json bps = ordered_json::array();
  for (const auto& [t, v] : d.breakpoints()) bps.push_back(ordered_json::array({rat(t), rat(v)}));
  out["breakpoints"] = std::move(bps);
  out["final_slope"] = rat(d.final_slope());
  return out;
}

DelayFunction delay_from_json(const ordered_json& j) {
  std::vector<std::pair<Rational, Rational>> bps;
  for (const auto& bp : j.at("breakpoints")) {
    if (!bp.is_array() || bp.size() != 2)
      throw input_error("delay breakpoints must be [time, value] pairs");
    bps.emplace_back(unrat(bp[0]), unrat(bp[1]));
  }
  return DelayFunction(std::move(bps), unrat(j.at("final_slope")));
}

}  // namespace

const char* mode_name(RunMode m) {
  return m == RunMode::deadline ? "deadline" : "delay";
}

RunMode mode_from_name(const std::string& name) {
  if (name == "deadline") return RunMode::deadline;
  if (name == "delay") return RunMode::delay;
  throw input_error("unknown mode '" + name + "'");
}

void validate_spec(const InstanceSpec& spec) {
  const Rational* prev_release = nullptr;
  std::set<int> ids;
  for (const RequestSpec& r : spec.requests) {
    if (!ids.insert(r.id).second) throw input_error("request ids must be unique");
    validate_payload(spec.instance, r.payload);
    if (prev_release && r.release < *prev_release)
      throw input_error("request releases must be nondecreasing in file order");
    prev_release = &r.release;
    if (spec.mode == RunMode::deadline) {
      if (!r.deadline || r.delay) throw input_error("deadline mode requests carry a deadline");
      if (*r.deadline < r.release) throw input_error("deadline precedes release");
    } else {
      if (!r.delay || r.deadline) throw input_error("delay mode requests carry a delay curve");
      if (r.delay->release() != r.release)
        throw input_error("delay curve must start at the request release");
    }
  }
}

std::string spec_to_text(const InstanceSpec& spec) {
  validate_spec(spec);
  ordered_json out;
  out["format_version"] = kFormatVersion;
  out["name"] = spec.name;
  out["seed"] = spec.seed;
  out["mode"] = mode_name(spec.mode);
  out["kind"] = kind_name(spec.instance.kind);
  out["graph"] = graph_to_json(spec.instance.graph);
  if (spec.instance.root) out["root"] = *spec.instance.root;
  ordered_json reqs = ordered_json::array();
  for (const RequestSpec& r : spec.requests) {
    ordered_json jr;
    jr["id"] = r.id;
    jr["terminals"] = r.payload.terminals;
    jr["demand"] = r.payload.demand;
    jr["release"] = rat(r.release);
    if (r.deadline) jr["deadline"] = rat(*r.deadline);
    if (r.delay) jr["delay"] = delay_to_json(*r.delay);
    reqs.push_back(std::move(jr));
  }
  out["requests"] = std::move(reqs);
  return out.dump(2) + "\n";
}

InstanceSpec spec_from_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("instance file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != kFormatVersion)
      throw input_error("unsupported instance format_version");
    std::optional<int> root;
    if (j.contains("root")) root = j.at("root").get<int>();
    InstanceSpec spec{
        j.at("name").get<std::string>(),
        j.at("seed").get<std::uint64_t>(),
        mode_from_name(j.at("mode").get<std::string>()),
        ProblemInstance{kind_from_name(j.at("kind").get<std::string>()),
                        graph_from_json(j.at("graph")), root},
        {}};
    for (const auto& jr : j.at("requests")) {
      RequestSpec r;
      r.id = jr.at("id").get<int>();
      r.payload.terminals = jr.at("terminals").get<std::vector<int>>();
      r.payload.demand = jr.at("demand").get<int>();
      r.release = unrat(jr.at("release"));
      if (jr.contains("deadline")) r.deadline = unrat(jr.at("deadline"));
      if (jr.contains("delay")) r.delay = delay_from_json(jr.at("delay"));
      spec.requests.push_back(std::move(r));
    }
    validate_spec(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("malformed instance file: ") + e.what());
  }
}

void save_spec(const InstanceSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot open '" + path + "' for writing");
  out << spec_to_text(spec);
  if (!out) throw input_error("failed writing '" + path + "'");
}

InstanceSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return spec_from_text(buf.str());
}

}  // namespace netd
