#include "flowtime/scenario.hpp"

#include <fstream>
#include <stdexcept>

namespace flowtime {

namespace {

Rational rational_field(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw std::invalid_argument("missing field \"" + key + "\"");
  if (!j.at(key).is_string()) throw std::invalid_argument("field \"" + key + "\" must be a rational string");
  return parse_rational(j.at(key).get<std::string>());
}

std::vector<Rational> rational_list(const Json& j) {
  std::vector<Rational> out;
  for (const auto& item : j) out.push_back(parse_rational(item.get<std::string>()));
  return out;
}

Json rational_list_json(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

std::map<std::string, Rational> rational_map(const Json& j) {
  std::map<std::string, Rational> out;
  for (const auto& [key, value] : j.items()) out[key] = parse_rational(value.get<std::string>());
  return out;
}

Json rational_map_json(const std::map<std::string, Rational>& values) {
  Json out = Json::object();
  for (const auto& [key, value] : values) out[key] = to_string(value);
  return out;
}

void require_format(const Json& j) {
  if (j.contains("format") && j.at("format").get<int>() != kFormatVersion) {
    throw std::invalid_argument("unsupported format version");
  }
}

}  // namespace

Network network_from_json(const Json& j) {
  std::vector<std::string> nodes;
  for (const auto& n : j.at("nodes")) nodes.push_back(n.get<std::string>());
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    edges.push_back({e.at("id").get<std::string>(), e.at("tail").get<std::string>(),
                     e.at("head").get<std::string>(), rational_field(e, "capacity"),
                     rational_field(e, "latency")});
  }
  return Network(std::move(nodes), std::move(edges), j.at("source").get<std::string>(),
                 j.at("sink").get<std::string>());
}

Json to_json(const Network& net) {
  Json j;
  j["nodes"] = net.nodes();
  Json edges = Json::array();
  for (const auto& e : net.edges()) {
    Json je;
    je["id"] = e.id;
    je["tail"] = e.tail;
    je["head"] = e.head;
    je["capacity"] = to_string(e.capacity);
    je["latency"] = to_string(e.latency);
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  j["source"] = net.source();
  j["sink"] = net.sink();
  return j;
}

StepFunction pieces_from_json(const Json& j) {
  std::vector<Rational> breakpoints, values;
  for (const auto& piece : j) {
    breakpoints.push_back(rational_field(piece, "from"));
    values.push_back(rational_field(piece, "rate"));
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i - 1] < breakpoints[i])) {
      throw std::invalid_argument("inflow pieces must have strictly increasing \"from\"");
    }
  }
  if (!breakpoints.empty() && breakpoints.front() < 0) {
    throw std::invalid_argument("inflow pieces must start at time >= 0");
  }
  return StepFunction(Rational(0), std::move(breakpoints), std::move(values));
}

Json pieces_to_json(const StepFunction& f) {
  Json out = Json::array();
  for (std::size_t i = 0; i < f.breakpoints().size(); ++i) {
    Json piece;
    piece["from"] = to_string(f.breakpoints()[i]);
    piece["rate"] = to_string(f.values()[i]);
    out.push_back(std::move(piece));
  }
  return out;
}

StepFunction step_from_json(const Json& j) {
  return StepFunction(rational_field(j, "value_before"), rational_list(j.at("breakpoints")),
                      rational_list(j.at("values")));
}

Json to_json(const StepFunction& f) {
  Json j;
  j["value_before"] = to_string(f.value_before());
  j["breakpoints"] = rational_list_json(f.breakpoints());
  j["values"] = rational_list_json(f.values());
  return j;
}

PiecewiseLinear piecewise_linear_from_json(const Json& j) {
  return PiecewiseLinear(rational_list(j.at("breakpoints")), rational_list(j.at("values")),
                         rational_field(j, "slope_before"), rational_field(j, "slope_after"));
}

Json to_json(const PiecewiseLinear& f) {
  Json j;
  j["breakpoints"] = rational_list_json(f.xs());
  j["values"] = rational_list_json(f.ys());
  j["slope_before"] = to_string(f.slope_before());
  j["slope_after"] = to_string(f.slope_after());
  return j;
}

PathFlowSet path_flows_from_json(const Json& j, const Rational& horizon) {
  PathFlowSet set;
  set.horizon = horizon;
  std::size_t counter = 0;
  for (const auto& entry : j) {
    PathFlowSet::PathFlow flow;
    flow.id = entry.contains("id") ? entry.at("id").get<std::string>()
                                   : "P" + std::to_string(counter);
    ++counter;
    for (const auto& eid : entry.at("path")) flow.edges.push_back(eid.get<std::string>());
    flow.rate = pieces_from_json(entry.at("pieces"));
    set.paths.push_back(std::move(flow));
  }
  return set;
}

Json path_flows_to_json(const PathFlowSet& path_flows) {
  Json out = Json::array();
  for (const auto& p : path_flows.paths) {
    Json entry;
    entry["id"] = p.id;
    entry["path"] = p.edges;
    entry["pieces"] = pieces_to_json(p.rate);
    out.push_back(std::move(entry));
  }
  return out;
}

Scenario scenario_from_json(const Json& j) {
  require_format(j);
  Scenario scenario{network_from_json(j.at("network")), pieces_from_json(j.at("inflow")),
                    rational_field(j, "horizon"), std::nullopt};
  if (!scenario.inflow.nonnegative()) throw std::invalid_argument("inflow rates must be nonnegative");
  if (!(scenario.horizon > 0)) throw std::invalid_argument("horizon must be positive");
  if (j.contains("path_flows")) {
    scenario.path_flows = path_flows_from_json(j.at("path_flows"), scenario.horizon);
  }
  return scenario;
}

Json to_json(const Scenario& scenario) {
  Json j;
  j["format"] = kFormatVersion;
  j["network"] = to_json(scenario.network);
  j["inflow"] = pieces_to_json(scenario.inflow);
  j["horizon"] = to_string(scenario.horizon);
  if (scenario.path_flows) j["path_flows"] = path_flows_to_json(*scenario.path_flows);
  return j;
}

NtfInstance ntf_instance_from_json(const Json& j) {
  require_format(j);
  NtfInstance instance{network_from_json(j.at("network")), {}, rational_field(j, "inflow_value")};
  for (const auto& eid : j.at("active")) instance.sets.active.insert(eid.get<std::string>());
  for (const auto& eid : j.at("resetting")) instance.sets.resetting.insert(eid.get<std::string>());
  return instance;
}

Json to_json(const NtfInstance& instance) {
  Json j;
  j["format"] = kFormatVersion;
  j["network"] = to_json(instance.network);
  j["active"] = instance.sets.active;
  j["resetting"] = instance.sets.resetting;
  j["inflow_value"] = to_string(instance.inflow_value);
  return j;
}

NtfSolution ntf_solution_from_json(const Json& j) {
  require_format(j);
  return NtfSolution{rational_map(j.at("flow")), rational_map(j.at("labels"))};
}

Json to_json(const NtfSolution& solution) {
  Json j;
  j["format"] = kFormatVersion;
  j["flow"] = rational_map_json(solution.flow);
  j["labels"] = rational_map_json(solution.labels);
  return j;
}

namespace {

Json to_json(const Phase& phase) {
  Json j;
  j["start"] = to_string(phase.start);
  j["end"] = phase.end ? Json(to_string(*phase.end)) : Json(nullptr);
  j["inflow_value"] = to_string(phase.inflow_value);
  j["active"] = phase.sets.active;
  j["resetting"] = phase.sets.resetting;
  j["flow"] = rational_map_json(phase.flow);
  j["label_rates"] = rational_map_json(phase.label_rates);
  Json binding;
  binding["kind"] = to_string(phase.binding.kind);
  binding["edge"] = phase.binding.edge;
  j["binding"] = std::move(binding);
  return j;
}

Phase phase_from_json(const Json& j) {
  Phase phase;
  phase.start = parse_rational(j.at("start").get<std::string>());
  if (!j.at("end").is_null()) phase.end = parse_rational(j.at("end").get<std::string>());
  phase.inflow_value = parse_rational(j.at("inflow_value").get<std::string>());
  for (const auto& eid : j.at("active")) phase.sets.active.insert(eid.get<std::string>());
  for (const auto& eid : j.at("resetting")) phase.sets.resetting.insert(eid.get<std::string>());
  phase.flow = rational_map(j.at("flow"));
  phase.label_rates = rational_map(j.at("label_rates"));
  const std::string kind = j.at("binding").at("kind").get<std::string>();
  using Kind = BindingConstraint::Kind;
  if (kind == "activation") phase.binding.kind = Kind::Activation;
  else if (kind == "depletion") phase.binding.kind = Kind::Depletion;
  else if (kind == "inflow-breakpoint") phase.binding.kind = Kind::InflowBreakpoint;
  else if (kind == "steady-state") phase.binding.kind = Kind::SteadyState;
  else throw std::invalid_argument("unknown binding kind: " + kind);
  phase.binding.edge = j.at("binding").at("edge").get<std::string>();
  return phase;
}

template <typename T, typename FromJson>
std::map<std::string, T> function_map(const Json& j, FromJson from) {
  std::map<std::string, T> out;
  for (const auto& [key, value] : j.items()) out.emplace(key, from(value));
  return out;
}

template <typename T>
Json function_map_json(const std::map<std::string, T>& fns) {
  Json out = Json::object();
  for (const auto& [key, fn] : fns) out[key] = to_json(fn);
  return out;
}

}  // namespace

EquilibriumTrajectory trajectory_from_json(const Json& j) {
  require_format(j);
  EquilibriumTrajectory t;
  t.labels = function_map<PiecewiseLinear>(j.at("labels"), piecewise_linear_from_json);
  t.cumulative_flows =
      function_map<PiecewiseLinear>(j.at("cumulative_flows"), piecewise_linear_from_json);
  t.queues = function_map<PiecewiseLinear>(j.at("queues"), piecewise_linear_from_json);
  t.edge_inflows = function_map<StepFunction>(j.at("edge_inflows"), step_from_json);
  t.edge_outflows = function_map<StepFunction>(j.at("edge_outflows"), step_from_json);
  for (const auto& p : j.at("phases")) t.phases.push_back(phase_from_json(p));
  t.frontier = parse_rational(j.at("frontier").get<std::string>());
  t.steady = j.at("steady").get<bool>();
  return t;
}

Json to_json(const EquilibriumTrajectory& trajectory) {
  Json j;
  j["format"] = kFormatVersion;
  j["steady"] = trajectory.steady;
  j["frontier"] = to_string(trajectory.frontier);
  Json phases = Json::array();
  for (const auto& p : trajectory.phases) phases.push_back(to_json(p));
  j["phases"] = std::move(phases);
  j["labels"] = function_map_json(trajectory.labels);
  j["cumulative_flows"] = function_map_json(trajectory.cumulative_flows);
  j["queues"] = function_map_json(trajectory.queues);
  j["edge_inflows"] = function_map_json(trajectory.edge_inflows);
  j["edge_outflows"] = function_map_json(trajectory.edge_outflows);
  return j;
}

LoadingResult loading_from_json(const Json& j) {
  require_format(j);
  LoadingResult result;
  result.support_bound = parse_rational(j.at("support_bound").get<std::string>());
  for (const auto& [eid, je] : j.at("edges").items()) {
    EdgeLoading loading;
    loading.inflow = step_from_json(je.at("inflow"));
    loading.outflow = step_from_json(je.at("outflow"));
    loading.queue = piecewise_linear_from_json(je.at("queue"));
    loading.exit_time = piecewise_linear_from_json(je.at("exit_time"));
    result.edges.emplace(eid, std::move(loading));
  }
  for (const auto& [pid, list] : j.at("path_edge_inflows").items()) {
    for (const auto& fn : list) result.path_edge_inflows[pid].push_back(step_from_json(fn));
  }
  for (const auto& [pid, list] : j.at("path_edge_outflows").items()) {
    for (const auto& fn : list) result.path_edge_outflows[pid].push_back(step_from_json(fn));
  }
  result.path_arrivals =
      function_map<PiecewiseLinear>(j.at("path_arrivals"), piecewise_linear_from_json);
  return result;
}

Json to_json(const LoadingResult& result) {
  Json j;
  j["format"] = kFormatVersion;
  j["support_bound"] = to_string(result.support_bound);
  Json edges = Json::object();
  for (const auto& [eid, loading] : result.edges) {
    Json je;
    je["inflow"] = to_json(loading.inflow);
    je["outflow"] = to_json(loading.outflow);
    je["queue"] = to_json(loading.queue);
    je["exit_time"] = to_json(loading.exit_time);
    edges[eid] = std::move(je);
  }
  j["edges"] = std::move(edges);
  Json in = Json::object(), out = Json::object();
  for (const auto& [pid, list] : result.path_edge_inflows) {
    Json arr = Json::array();
    for (const auto& fn : list) arr.push_back(to_json(fn));
    in[pid] = std::move(arr);
  }
  for (const auto& [pid, list] : result.path_edge_outflows) {
    Json arr = Json::array();
    for (const auto& fn : list) arr.push_back(to_json(fn));
    out[pid] = std::move(arr);
  }
  j["path_edge_inflows"] = std::move(in);
  j["path_edge_outflows"] = std::move(out);
  j["path_arrivals"] = function_map_json(result.path_arrivals);
  return j;
}

Json to_json(const std::vector<Violation>& violations) {
  Json j;
  j["format"] = kFormatVersion;
  Json list = Json::array();
  for (const auto& v : violations) {
    Json jv;
    jv["kind"] = v.kind;
    jv["element"] = v.element;
    jv["where"] = to_string(v.where);
    jv["lhs"] = to_string(v.lhs);
    jv["rhs"] = to_string(v.rhs);
    jv["detail"] = v.detail;
    list.push_back(std::move(jv));
  }
  j["violations"] = std::move(list);
  return j;
}

Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("cannot parse " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace flowtime
