#include "flowtime/generator.hpp"
#include "flowtime/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace flowtime;

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
  out << text;
}

std::string csv_cell(const Rational& value, bool with_float) {
  std::string cell = to_string(value);
  if (with_float) cell += "," + std::to_string(to_double(value));
  return cell;
}

std::string function_csv(const std::map<std::string, PiecewiseLinear>& fns, bool with_float) {
  std::string csv = with_float ? "id,theta,value,value_float\n" : "id,theta,value\n";
  for (const auto& [id, fn] : fns) {
    for (std::size_t i = 0; i < fn.xs().size(); ++i) {
      csv += id + "," + to_string(fn.xs()[i]) + "," + csv_cell(fn.ys()[i], with_float) + "\n";
    }
  }
  return csv;
}

std::string step_csv(const std::map<std::string, StepFunction>& fns, bool with_float) {
  std::string csv = with_float ? "id,theta,value,value_float\n" : "id,theta,value\n";
  for (const auto& [id, fn] : fns) {
    for (std::size_t i = 0; i < fn.breakpoints().size(); ++i) {
      csv += id + "," + to_string(fn.breakpoints()[i]) + "," +
             csv_cell(fn.values()[i], with_float) + "\n";
    }
  }
  return csv;
}

Json phases_json(const EquilibriumTrajectory& trajectory) {
  // The phase log also lands in trajectory.json; this file is the quick look.
  Json j;
  j["format"] = kFormatVersion;
  Json phases = Json::array();
  for (const auto& p : trajectory.phases) {
    Json jp;
    jp["start"] = to_string(p.start);
    jp["end"] = p.end ? Json(to_string(*p.end)) : Json(nullptr);
    jp["inflow_value"] = to_string(p.inflow_value);
    jp["binding"] = to_string(p.binding.kind);
    if (!p.binding.edge.empty()) jp["binding_edge"] = p.binding.edge;
    phases.push_back(std::move(jp));
  }
  j["phases"] = std::move(phases);
  return j;
}

int cmd_solve(const std::string& scenario_path, const std::string& out_dir,
              const std::string& horizon_override, std::size_t phase_cap, bool with_float) {
  Json j = parse_json_file(scenario_path);
  Scenario scenario = scenario_from_json(j);
  if (!horizon_override.empty()) scenario.horizon = parse_rational(horizon_override);
  {
    const auto problems = validate(scenario.network);
    if (!problems.empty()) {
      for (const auto& p : problems) std::cerr << "invalid network: " << p << "\n";
      return 1;
    }
  }
  SolveOptions options;
  options.phase_cap = phase_cap;
  const EquilibriumTrajectory trajectory =
      solve_equilibrium(scenario.network, scenario.inflow, scenario.horizon, options);

  std::filesystem::create_directories(out_dir);
  write_json_file(out_dir + "/trajectory.json", to_json(trajectory));
  write_json_file(out_dir + "/phases.json", phases_json(trajectory));
  write_text_file(out_dir + "/labels.csv", function_csv(trajectory.labels, with_float));
  write_text_file(out_dir + "/queues.csv", function_csv(trajectory.queues, with_float));
  std::map<std::string, StepFunction> flows;
  for (const auto& [eid, fn] : trajectory.edge_inflows) flows[eid + ":in"] = fn;
  for (const auto& [eid, fn] : trajectory.edge_outflows) flows[eid + ":out"] = fn;
  write_text_file(out_dir + "/flows.csv", step_csv(flows, with_float));
  std::cout << "wrote trajectory with " << trajectory.phases.size() << " phases to " << out_dir
            << "\n";
  return 0;
}

int cmd_ntf(const std::string& instance_path, const std::string& out_path, bool enumerate,
            std::size_t edge_cap) {
  const NtfInstance instance = ntf_instance_from_json(parse_json_file(instance_path));
  Json result;
  if (enumerate) {
    result["format"] = kFormatVersion;
    Json list = Json::array();
    for (const auto& labels : enumerate_ntf_labels(instance, edge_cap)) {
      Json entry = Json::object();
      for (const auto& [node, value] : labels) entry[node] = to_string(value);
      list.push_back(std::move(entry));
    }
    result["label_vectors"] = std::move(list);
  } else {
    result = to_json(solve_ntf(instance));
  }
  std::cout << result.dump(2) << "\n";
  if (!out_path.empty()) write_json_file(out_path, result);
  return 0;
}

int cmd_load(const std::string& scenario_path, const std::string& out_dir, bool with_float) {
  const Scenario scenario = scenario_from_json(parse_json_file(scenario_path));
  if (!scenario.path_flows) {
    std::cerr << "scenario has no path_flows; nothing to load\n";
    return 1;
  }
  const LoadingResult result = load(scenario.network, *scenario.path_flows);
  const PathTimes times = path_times(scenario.network, result, *scenario.path_flows);

  std::filesystem::create_directories(out_dir);
  Json j = to_json(result);
  j["paths"] = path_flows_to_json(*scenario.path_flows);
  write_json_file(out_dir + "/loading.json", j);
  std::map<std::string, PiecewiseLinear> queues, exit_times;
  std::map<std::string, StepFunction> flows;
  for (const auto& [eid, loading] : result.edges) {
    queues[eid] = loading.queue;
    exit_times[eid] = loading.exit_time;
    flows[eid + ":in"] = loading.inflow;
    flows[eid + ":out"] = loading.outflow;
  }
  write_text_file(out_dir + "/queues.csv", function_csv(queues, with_float));
  write_text_file(out_dir + "/exit_times.csv", function_csv(exit_times, with_float));
  write_text_file(out_dir + "/flows.csv", step_csv(flows, with_float));
  write_text_file(out_dir + "/arrivals.csv", function_csv(times.per_path, with_float));
  std::cout << "wrote loading results to " << out_dir << "\n";
  return 0;
}

int cmd_verify(const std::string& scenario_path, const std::string& trajectory_path,
               const std::string& loading_path, bool with_cross_check,
               const std::string& report_path) {
  const Scenario scenario = scenario_from_json(parse_json_file(scenario_path));
  std::vector<Violation> violations;
  bool cross_ok = true;
  std::string cross_detail;
  if (!trajectory_path.empty()) {
    const EquilibriumTrajectory trajectory = trajectory_from_json(parse_json_file(trajectory_path));
    auto feasible = check_feasible(scenario.network, trajectory, scenario.inflow);
    violations.insert(violations.end(), feasible.begin(), feasible.end());
    auto equilibrium = check_equilibrium(scenario.network, trajectory);
    violations.insert(violations.end(), equilibrium.begin(), equilibrium.end());
    if (with_cross_check) {
      const CrossCheckReport report = cross_check(scenario.network, scenario.inflow, trajectory);
      cross_ok = report.ok;
      cross_detail = report.detail;
    }
  }
  if (!loading_path.empty()) {
    if (!scenario.path_flows) {
      std::cerr << "verifying a loading result needs path_flows in the scenario\n";
      return 2;
    }
    const LoadingResult result = loading_from_json(parse_json_file(loading_path));
    auto feasible = check_feasible(scenario.network, result, *scenario.path_flows);
    violations.insert(violations.end(), feasible.begin(), feasible.end());
  }
  Json report = to_json(violations);
  if (!cross_detail.empty()) report["cross_check"] = cross_detail;
  if (!report_path.empty()) write_json_file(report_path, report);
  std::cout << report.dump(2) << "\n";
  return violations.empty() && cross_ok ? 0 : 1;
}

int cmd_decompose(const std::string& scenario_path, const std::string& trajectory_path,
                  const std::string& out_path) {
  const Scenario scenario = scenario_from_json(parse_json_file(scenario_path));
  const EquilibriumTrajectory trajectory = trajectory_from_json(parse_json_file(trajectory_path));
  const Rational window = trajectory.steady ? trajectory.frontier + 1 : trajectory.frontier;
  const PathFlowSet path_flows = phase_path_flows(scenario.network, trajectory, window);
  Scenario out = scenario;
  out.horizon = window;
  out.path_flows = path_flows;
  write_json_file(out_path, to_json(out));
  std::cout << "wrote " << path_flows.paths.size() << " path flows to " << out_path << "\n";
  return 0;
}

int cmd_gen(const std::string& kind, std::uint64_t seed, const std::string& out_path,
            std::size_t max_nodes, std::size_t max_edges) {
  Rng rng(seed);
  GeneratorOptions options;
  options.max_nodes = max_nodes;
  options.max_edges = max_edges;
  Json j;
  if (kind == "scenario") {
    j = to_json(random_scenario(rng, options));
  } else if (kind == "instance") {
    j = to_json(random_instance(rng, options));
  } else if (kind == "path-flows") {
    Scenario scenario = random_scenario(rng, options);
    scenario.path_flows = random_path_flows(rng, scenario.network, scenario.horizon);
    j = to_json(scenario);
  } else {
    std::cerr << "unknown kind: " << kind << " (expected scenario | instance | path-flows)\n";
    return 2;
  }
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json_file(out_path, j);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computation, loading and verification of dynamic equilibria in "
               "fluid queueing networks"};
  app.require_subcommand(1);

  std::string scenario_path, trajectory_path, loading_path, instance_path;
  std::string out_dir = "out", out_path, report_path, horizon_override, kind = "scenario";
  std::size_t phase_cap = 10000, edge_cap = 12, max_nodes = 6, max_edges = 10;
  std::uint64_t seed = 1;
  bool with_float = false, enumerate = false, with_cross_check = false;

  auto* solve = app.add_subcommand("solve", "Compute the dynamic equilibrium of a scenario");
  solve->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  solve->add_option("--out", out_dir, "Output directory");
  solve->add_option("--horizon", horizon_override, "Override the scenario horizon");
  solve->add_option("--phase-cap", phase_cap, "Maximum number of phases");
  solve->add_flag("--float", with_float, "Add a lossy decimal column to CSV output");

  auto* ntf = app.add_subcommand("ntf", "Solve a normalized thin flow instance");
  ntf->add_option("--instance", instance_path, "Instance JSON")->required();
  ntf->add_option("--out", out_path, "Also write the solution JSON here");
  ntf->add_flag("--enumerate", enumerate, "Enumerate the label vectors of all certified guesses");
  ntf->add_option("--ntf-edge-cap", edge_cap, "Active-edge cap for --enumerate");

  auto* load = app.add_subcommand("load", "Propagate path inflows through the queueing dynamics");
  load->add_option("--scenario", scenario_path, "Scenario JSON with path_flows")->required();
  load->add_option("--out", out_dir, "Output directory");
  load->add_flag("--float", with_float, "Add a lossy decimal column to CSV output");

  auto* verify = app.add_subcommand("verify", "Check feasibility and equilibrium conditions");
  verify->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  verify->add_option("--trajectory", trajectory_path, "Trajectory JSON from solve");
  verify->add_option("--loading", loading_path, "Loading JSON from load");
  verify->add_flag("--cross-check", with_cross_check,
                   "Also reconstruct the labels through network loading");
  verify->add_option("--report", report_path, "Write the violation report here");

  auto* decompose = app.add_subcommand("decompose", "Decompose a trajectory into path flows");
  decompose->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  decompose->add_option("--trajectory", trajectory_path, "Trajectory JSON")->required();
  decompose->add_option("--out", out_path, "Output scenario JSON with path_flows")->required();

  auto* gen = app.add_subcommand("gen", "Generate random scenarios and instances");
  gen->add_option("--kind", kind, "scenario | instance | path-flows");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out_path, "Output file (stdout when omitted)");
  gen->add_option("--nodes", max_nodes, "Maximum node count");
  gen->add_option("--edges", max_edges, "Maximum edge count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(scenario_path, out_dir, horizon_override, phase_cap, with_float);
    if (ntf->parsed()) return cmd_ntf(instance_path, out_path, enumerate, edge_cap);
    if (load->parsed()) return cmd_load(scenario_path, out_dir, with_float);
    if (verify->parsed())
      return cmd_verify(scenario_path, trajectory_path, loading_path, with_cross_check, report_path);
    if (decompose->parsed()) return cmd_decompose(scenario_path, trajectory_path, out_path);
    if (gen->parsed()) return cmd_gen(kind, seed, out_path, max_nodes, max_edges);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
