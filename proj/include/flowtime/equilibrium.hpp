#pragma once

#include "flowtime/network.hpp"
#include "flowtime/piecewise.hpp"
#include "flowtime/thinflow.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace flowtime {

/// What limited the length of a phase.
struct BindingConstraint {
  enum class Kind { Activation, Depletion, InflowBreakpoint, SteadyState };
  Kind kind = Kind::SteadyState;
  std::string edge;  // set for Activation (an inactive edge becomes active)
                     // and Depletion (a queue empties)
};

std::string to_string(BindingConstraint::Kind kind);

/// One maximal interval on which the active/resetting sets stay constant, so
/// labels extend linearly and flow rates stay constant.
struct Phase {
  Rational start;
  std::optional<Rational> end;  // nullopt: the phase extends to +infinity
  EdgeSets sets;
  Rational inflow_value;
  std::map<std::string, Rational> flow;         // x' per edge
  std::map<std::string, Rational> label_rates;  // l' per node
  BindingConstraint binding;
};

struct EquilibriumTrajectory {
  std::map<std::string, PiecewiseLinear> labels;            // l_v over departure time
  std::map<std::string, PiecewiseLinear> cumulative_flows;  // x_e over departure time
  std::map<std::string, PiecewiseLinear> queues;            // z_e composed with the tail label
  std::map<std::string, StepFunction> edge_inflows;         // f+ on the edge entrance clock
  std::map<std::string, StepFunction> edge_outflows;        // f- on the edge exit clock
  std::vector<Phase> phases;
  Rational frontier;    // last computed departure time
  bool steady = false;  // true when the final phase extends to +infinity
};

/// Free-flow start: l_v(0) is the shortest source-to-v latency, all flows and
/// queues zero before time 0.
std::map<std::string, Rational> initial_labels(const Network& net);

struct StepBound {
  std::optional<Rational> alpha;  // nullopt: no binding candidate, steady state
  BindingConstraint binding;
};

/// Largest phase length that keeps every inactive edge inactive, every
/// positive queue positive, and the inflow rate constant.
StepBound max_step(const Network& net, const std::map<std::string, Rational>& labels,
                   const std::map<std::string, Rational>& label_rates, const EdgeSets& sets,
                   const std::optional<Rational>& next_inflow_breakpoint);

/// Builds a trajectory one phase at a time: labels extend linearly with the
/// phase label rates, cumulative flows with the phase flow, queue profiles
/// with capacity * (head rate - tail rate) on active edges, and the edge
/// in/outflow step functions gain the piece x'/l' on the corresponding label
/// image (skipped when the label is frozen, in which case the flow is zero
/// and the function's domain does not advance).
class TrajectoryBuilder {
 public:
  explicit TrajectoryBuilder(const Network& net);

  const std::map<std::string, Rational>& labels() const { return labels_now_; }
  const Rational& frontier() const { return frontier_; }
  bool steady() const { return steady_; }
  std::size_t phase_count() const { return phases_.size(); }

  /// Requires phase.start == frontier(); a phase without end is final.
  void apply(const Phase& phase);

  EquilibriumTrajectory finish() const;

 private:
  const Network* net_;
  std::map<std::string, Rational> labels_now_;
  std::map<std::string, Rational> queues_now_;
  Rational frontier_;
  bool steady_ = false;

  std::map<std::string, std::vector<Rational>> label_xs_, label_ys_;
  std::map<std::string, Rational> label_tail_slope_;
  std::map<std::string, std::vector<Rational>> flow_ys_, queue_ys_;
  std::map<std::string, Rational> flow_tail_slope_, queue_tail_slope_;
  std::map<std::string, Rational> cumulative_now_;
  std::map<std::string, StepBuilder> inflow_builders_, outflow_builders_;
  std::vector<Rational> phase_starts_;
  std::vector<Phase> phases_;
};

class PhaseAccumulationError : public std::runtime_error {
 public:
  PhaseAccumulationError(std::size_t cap, Rational frontier)
      : std::runtime_error("phase cap (" + std::to_string(cap) +
                           ") exceeded: possible phase accumulation near time " +
                           flowtime::to_string(frontier)),
        frontier_estimate(std::move(frontier)) {}

  Rational frontier_estimate;
};

struct SolveOptions {
  std::size_t phase_cap = 10000;
};

/// Computes the dynamic equilibrium for a piecewise-constant inflow up to the
/// given horizon (or all the way when a steady state is reached earlier). The
/// inflow must be nonnegative and vanish before time 0; the horizon must be
/// positive.
EquilibriumTrajectory solve_equilibrium(const Network& net, const StepFunction& inflow,
                                        const Rational& horizon, const SolveOptions& options = {});

/// Greedy path decomposition of a static flow supported on an acyclic edge
/// set: source-sink paths are visited in lexicographic edge-id order, each
/// receives the minimum residual along it. Only paths with positive share are
/// returned; shares sum to the flow exactly.
std::map<std::vector<std::string>, Rational> decompose_paths(
    const Network& net, const std::set<std::string>& support,
    const std::map<std::string, Rational>& flow);

}  // namespace flowtime
