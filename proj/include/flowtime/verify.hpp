#pragma once

#include "flowtime/equilibrium.hpp"
#include "flowtime/loading.hpp"
#include "flowtime/network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flowtime {

/// One failed check, re-checkable from the recorded data.
struct Violation {
  std::string kind;     // capacity | non-deficit | conservation | capacity-operation |
                        // inactive-inflow | cumulative-mismatch | label-recursion
  std::string element;  // offending edge or node id
  Rational where;       // a witness time
  Rational lhs;
  Rational rhs;
  std::string detail;
};

/// Flow feasibility of a trajectory: outflows within capacity, queues
/// nonnegative, and node conservation against the network inflow.
std::vector<Violation> check_feasible(const Network& net, const EquilibriumTrajectory& trajectory,
                                      const StepFunction& inflow);

/// Feasibility and internal consistency of a loading result: capacity and
/// non-deficit constraints, the path/link decomposition identities, and the
/// throughput identity between cumulative in- and outflows.
std::vector<Violation> check_feasible(const Network& net, const LoadingResult& result,
                                      const PathFlowSet& path_flows);

/// Equilibrium conditions of a trajectory: the cumulative identity
/// F+(l_tail) = F-(l_head) on every edge, no inflow while inactive, the label
/// recursion via exit times, the queue profile identity, and the consistency
/// of the recorded phase edge sets with the labels.
std::vector<Violation> check_equilibrium(const Network& net,
                                         const EquilibriumTrajectory& trajectory);

/// Queues operating at capacity: outflow bounded by capacity, nonnegative
/// queues, and waiting time equal to queue length over capacity.
std::vector<Violation> check_capacity_operation(const Network& net, const LoadingResult& result);

struct CrossCheckReport {
  bool ok = false;
  std::string detail;  // first disagreement when not ok
  std::optional<std::pair<std::string, Rational>> mismatch;  // (node, time)
};

/// Independent reconstruction of the trajectory labels: decomposes each
/// phase's flow into paths, loads the resulting path inflows through the
/// queueing dynamics, and compares the induced node labels with the
/// trajectory labels at every phase breakpoint. Requires positive latencies.
CrossCheckReport cross_check(const Network& net, const StepFunction& inflow,
                             const EquilibriumTrajectory& trajectory);

/// The path-flow set used by cross_check: per-phase path decompositions
/// assembled into step functions on the departure-time axis, truncated at the
/// trajectory frontier (or the given horizon when the trajectory is steady).
PathFlowSet phase_path_flows(const Network& net, const EquilibriumTrajectory& trajectory,
                             const Rational& horizon);

}  // namespace flowtime
