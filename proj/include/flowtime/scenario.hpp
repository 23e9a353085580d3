#pragma once

#include "flowtime/equilibrium.hpp"
#include "flowtime/loading.hpp"
#include "flowtime/network.hpp"
#include "flowtime/thinflow.hpp"
#include "flowtime/verify.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace flowtime {

/// JSON with stable key order, so emitted files are byte-reproducible.
using Json = nlohmann::ordered_json;

/// Top-level input: a network with a piecewise-constant source inflow and a
/// time horizon; optional explicit path flows drive the loading command.
struct Scenario {
  Network network;
  StepFunction inflow;
  Rational horizon;
  std::optional<PathFlowSet> path_flows;
};

inline constexpr int kFormatVersion = 1;

// Parsing throws std::invalid_argument with a description of the offending
// field; rationals are "p" or "p/q" strings everywhere.
Scenario scenario_from_json(const Json& j);
Network network_from_json(const Json& j);
StepFunction pieces_from_json(const Json& j);
NtfInstance ntf_instance_from_json(const Json& j);
NtfSolution ntf_solution_from_json(const Json& j);
EquilibriumTrajectory trajectory_from_json(const Json& j);
PathFlowSet path_flows_from_json(const Json& j, const Rational& horizon);
LoadingResult loading_from_json(const Json& j);
StepFunction step_from_json(const Json& j);
PiecewiseLinear piecewise_linear_from_json(const Json& j);

Json to_json(const Network& net);
Json to_json(const Scenario& scenario);
Json to_json(const StepFunction& f);
Json to_json(const PiecewiseLinear& f);
Json to_json(const NtfInstance& instance);
Json to_json(const NtfSolution& solution);
Json to_json(const EquilibriumTrajectory& trajectory);
Json to_json(const LoadingResult& result);
Json pieces_to_json(const StepFunction& f);
Json to_json(const std::vector<Violation>& violations);
Json path_flows_to_json(const PathFlowSet& path_flows);

Json parse_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace flowtime
