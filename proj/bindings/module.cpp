#include "flowtime/generator.hpp"
#include "flowtime/scenario.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace flowtime;

namespace {

// Rationals cross the boundary as "p/q" strings so Python callers keep exact
// values; structured results cross as JSON strings.

std::string solve_scenario_json(const std::string& scenario_json, std::size_t phase_cap) {
  const Scenario scenario = scenario_from_json(Json::parse(scenario_json));
  SolveOptions options;
  options.phase_cap = phase_cap;
  return to_json(solve_equilibrium(scenario.network, scenario.inflow, scenario.horizon, options))
      .dump();
}

std::string verify_trajectory_json(const std::string& scenario_json,
                                   const std::string& trajectory_json, bool with_cross_check) {
  const Scenario scenario = scenario_from_json(Json::parse(scenario_json));
  const EquilibriumTrajectory trajectory = trajectory_from_json(Json::parse(trajectory_json));
  std::vector<Violation> violations = check_feasible(scenario.network, trajectory, scenario.inflow);
  const auto equilibrium = check_equilibrium(scenario.network, trajectory);
  violations.insert(violations.end(), equilibrium.begin(), equilibrium.end());
  Json report = to_json(violations);
  if (with_cross_check) {
    const CrossCheckReport cross = cross_check(scenario.network, scenario.inflow, trajectory);
    report["cross_check_ok"] = cross.ok;
    if (!cross.ok) report["cross_check"] = cross.detail;
  }
  return report.dump();
}

std::string solve_ntf_json(const std::string& instance_json) {
  return to_json(solve_ntf(ntf_instance_from_json(Json::parse(instance_json)))).dump();
}

std::string load_scenario_json(const std::string& scenario_json) {
  const Scenario scenario = scenario_from_json(Json::parse(scenario_json));
  if (!scenario.path_flows) throw std::invalid_argument("scenario has no path_flows");
  return to_json(load(scenario.network, *scenario.path_flows)).dump();
}

std::string decompose_json(const std::string& scenario_json, const std::string& trajectory_json) {
  Scenario scenario = scenario_from_json(Json::parse(scenario_json));
  const EquilibriumTrajectory trajectory = trajectory_from_json(Json::parse(trajectory_json));
  const Rational window = trajectory.steady ? trajectory.frontier + 1 : trajectory.frontier;
  scenario.path_flows = phase_path_flows(scenario.network, trajectory, window);
  scenario.horizon = window;
  return to_json(scenario).dump();
}

std::string generate_json(const std::string& kind, std::uint64_t seed) {
  Rng rng(seed);
  if (kind == "scenario") return to_json(random_scenario(rng)).dump();
  if (kind == "instance") return to_json(random_instance(rng)).dump();
  if (kind == "path-flows") {
    Scenario scenario = random_scenario(rng);
    scenario.path_flows = random_path_flows(rng, scenario.network, scenario.horizon);
    return to_json(scenario).dump();
  }
  throw std::invalid_argument("unknown kind: " + kind);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact dynamic equilibria of flows over time in fluid queueing networks";

  py::class_<StepFunction>(m, "StepFunction")
      .def(py::init([](const std::string& value_before, const std::vector<std::string>& breakpoints,
                       const std::vector<std::string>& values) {
             std::vector<Rational> bps, vals;
             for (const auto& b : breakpoints) bps.push_back(parse_rational(b));
             for (const auto& v : values) vals.push_back(parse_rational(v));
             return StepFunction(parse_rational(value_before), std::move(bps), std::move(vals));
           }),
           py::arg("value_before") = "0", py::arg("breakpoints") = std::vector<std::string>{},
           py::arg("values") = std::vector<std::string>{})
      .def("__call__",
           [](const StepFunction& f, const std::string& x) { return to_string(f(parse_rational(x))); })
      .def_property_readonly("breakpoints",
                             [](const StepFunction& f) {
                               std::vector<std::string> out;
                               for (const auto& b : f.breakpoints()) out.push_back(to_string(b));
                               return out;
                             })
      .def_property_readonly("values", [](const StepFunction& f) {
        std::vector<std::string> out;
        for (const auto& v : f.values()) out.push_back(to_string(v));
        return out;
      });

  py::class_<PiecewiseLinear>(m, "PiecewiseLinear")
      .def("__call__", [](const PiecewiseLinear& f,
                          const std::string& x) { return to_string(f(parse_rational(x))); })
      .def_property_readonly("breakpoints",
                             [](const PiecewiseLinear& f) {
                               std::vector<std::string> out;
                               for (const auto& x : f.xs()) out.push_back(to_string(x));
                               return out;
                             })
      .def_property_readonly("values", [](const PiecewiseLinear& f) {
        std::vector<std::string> out;
        for (const auto& y : f.ys()) out.push_back(to_string(y));
        return out;
      });

  m.def("solve_scenario", &solve_scenario_json, py::arg("scenario_json"),
        py::arg("phase_cap") = 10000,
        "Compute the dynamic equilibrium of a scenario; returns the trajectory as JSON.");
  m.def("verify_trajectory", &verify_trajectory_json, py::arg("scenario_json"),
        py::arg("trajectory_json"), py::arg("cross_check") = false,
        "Run the feasibility and equilibrium checks; returns the violation report as JSON.");
  m.def("solve_ntf", &solve_ntf_json, py::arg("instance_json"),
        "Solve a normalized thin flow instance; returns the solution as JSON.");
  m.def("load_paths", &load_scenario_json, py::arg("scenario_json"),
        "Propagate the scenario's path flows through the queueing dynamics.");
  m.def("decompose", &decompose_json, py::arg("scenario_json"), py::arg("trajectory_json"),
        "Rewrite a trajectory as per-phase path flows; returns a scenario with path_flows.");
  m.def("generate", &generate_json, py::arg("kind"), py::arg("seed"),
        "Generate a random scenario, thin-flow instance, or path-flow scenario.");
  m.def("labels_of", [](const std::string& trajectory_json, const std::string& node) {
    const EquilibriumTrajectory t = trajectory_from_json(Json::parse(trajectory_json));
    return t.labels.at(node);
  }, py::arg("trajectory_json"), py::arg("node"), "Label function of one node.");
}
