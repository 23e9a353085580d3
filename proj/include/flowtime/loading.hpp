#pragma once

#include "flowtime/network.hpp"
#include "flowtime/piecewise.hpp"

#include <map>
#include <string>
#include <vector>

namespace flowtime {

/// Piecewise-constant inflow rates along explicit paths; paths may belong to
/// different origin-destination pairs. Rates vanish outside [0, horizon].
struct PathFlowSet {
  struct PathFlow {
    std::string id;
    std::vector<std::string> edges;  // consecutive edges share head/tail
    StepFunction rate;
  };

  std::vector<PathFlow> paths;
  Rational horizon;

  /// Throws std::invalid_argument on unknown/non-adjacent edges, duplicate
  /// path ids, negative rates, or rates outside [0, horizon].
  void validate(const Network& net) const;
};

struct EdgeLoading {
  StepFunction inflow;       // f+ aggregated over paths
  StepFunction outflow;      // f-
  PiecewiseLinear queue;     // z on the entrance clock
  PiecewiseLinear exit_time; // T(theta) = theta + z(theta)/capacity + latency
};

struct LoadingResult {
  std::map<std::string, EdgeLoading> edges;
  // Per path id, one function per edge position along the path.
  std::map<std::string, std::vector<StepFunction>> path_edge_inflows;
  std::map<std::string, std::vector<StepFunction>> path_edge_outflows;
  std::map<std::string, PiecewiseLinear> path_arrivals;  // composed exit times
  Rational support_bound;  // all flows vanish outside [0, support_bound]
};

/// Queue length driven by a nonnegative inflow that vanishes before time 0:
/// the queue grows at inflow - capacity while positive, stays at zero when
/// depleted, and the exit time adds waiting plus latency.
std::pair<PiecewiseLinear, PiecewiseLinear> queue_evolve(const StepFunction& inflow,
                                                         const Rational& capacity,
                                                         const Rational& latency);

/// Outflow share of one path through an edge: the entering rate divided by
/// the exit-time slope, mapped forward through the exit time; zero across
/// plateaus of the exit time (no mass enters there).
StepFunction transfer_outflow(const StepFunction& path_inflow, const PiecewiseLinear& exit_time);

/// Propagates the path inflows through the queueing dynamics to the unique
/// network loading. Requires positive latency on every edge.
LoadingResult load(const Network& net, const PathFlowSet& path_flows);

struct PathTimes {
  std::map<std::string, PiecewiseLinear> per_path;                       // full-path arrival
  std::map<std::string, PiecewiseLinear> per_node;                       // min over path prefixes
  std::map<std::pair<std::string, std::string>, PiecewiseLinear> per_od; // min over full paths
};

PathTimes path_times(const Network& net, const LoadingResult& result, const PathFlowSet& path_flows);

}  // namespace flowtime
