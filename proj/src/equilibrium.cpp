#include "flowtime/equilibrium.hpp"

#include <algorithm>
#include <stdexcept>

namespace flowtime {

std::string to_string(BindingConstraint::Kind kind) {
  switch (kind) {
    case BindingConstraint::Kind::Activation: return "activation";
    case BindingConstraint::Kind::Depletion: return "depletion";
    case BindingConstraint::Kind::InflowBreakpoint: return "inflow-breakpoint";
    case BindingConstraint::Kind::SteadyState: return "steady-state";
  }
  return "";
}

std::map<std::string, Rational> initial_labels(const Network& net) { return free_flow_labels(net); }

StepBound max_step(const Network& net, const std::map<std::string, Rational>& labels,
                   const std::map<std::string, Rational>& label_rates, const EdgeSets& sets,
                   const std::optional<Rational>& next_inflow_breakpoint) {
  StepBound bound;
  auto offer = [&](const Rational& alpha, BindingConstraint::Kind kind, const std::string& edge) {
    if (!bound.alpha || alpha < *bound.alpha) {
      bound.alpha = alpha;
      bound.binding = {kind, edge};
    }
  };
  for (const auto& e : net.edges()) {
    const Rational gap = labels.at(e.head) - labels.at(e.tail);
    const Rational rate_gap = label_rates.at(e.head) - label_rates.at(e.tail);
    if (!sets.active.count(e.id)) {
      // Inactive edge: stays inactive while gap + alpha * rate_gap <= latency.
      if (rate_gap > 0) offer((e.latency - gap) / rate_gap, BindingConstraint::Kind::Activation, e.id);
    } else if (sets.resetting.count(e.id)) {
      // Positive queue: stays positive while gap + alpha * rate_gap >= latency.
      if (rate_gap < 0) offer((gap - e.latency) / -rate_gap, BindingConstraint::Kind::Depletion, e.id);
    }
  }
  if (next_inflow_breakpoint) {
    offer(*next_inflow_breakpoint, BindingConstraint::Kind::InflowBreakpoint, "");
  }
  if (bound.alpha && !(*bound.alpha > 0)) {
    throw std::logic_error("max_step computed a nonpositive phase length");
  }
  return bound;
}

TrajectoryBuilder::TrajectoryBuilder(const Network& net) : net_(&net), frontier_(0) {
  labels_now_ = initial_labels(net);
  for (const auto& [node, value] : labels_now_) {
    label_xs_[node] = {Rational(0)};
    label_ys_[node] = {value};
    label_tail_slope_[node] = 1;  // before any phase labels advance at unit rate
  }
  for (const auto& e : net.edges()) {
    queues_now_[e.id] = 0;
    cumulative_now_[e.id] = 0;
    flow_ys_[e.id] = {Rational(0)};
    queue_ys_[e.id] = {Rational(0)};
    flow_tail_slope_[e.id] = 0;
    queue_tail_slope_[e.id] = 0;
    inflow_builders_[e.id];
    outflow_builders_[e.id];
  }
  phase_starts_ = {Rational(0)};
}

void TrajectoryBuilder::apply(const Phase& phase) {
  if (steady_) throw std::logic_error("trajectory already reached a steady state");
  if (phase.start != frontier_) throw std::logic_error("phase does not start at the frontier");
  const bool final_phase = !phase.end.has_value();
  if (!final_phase && !(*phase.end > phase.start)) {
    throw std::logic_error("phase with nonpositive length");
  }
  const Rational alpha = final_phase ? Rational(0) : *phase.end - phase.start;

  for (const auto& e : net_->edges()) {
    const Rational lv = labels_now_.at(e.tail);
    const Rational lw = labels_now_.at(e.head);
    const Rational rv = phase.label_rates.at(e.tail);
    const Rational rw = phase.label_rates.at(e.head);
    auto fit = phase.flow.find(e.id);
    const Rational x = fit == phase.flow.end() ? Rational(0) : fit->second;
    const bool active = phase.sets.active.count(e.id) != 0;
    // A frozen tail label forces zero flow through the edge; the inflow
    // function's domain simply does not advance.
    if (rv == 0 && x != 0) throw std::logic_error("positive flow into an edge with frozen tail label");
    if (rw == 0 && x != 0) throw std::logic_error("positive flow out of an edge with frozen head label");
    if (!active && queues_now_.at(e.id) != 0) {
      throw std::logic_error("inactive edge with a positive queue");
    }

    if (rv > 0) {
      auto& builder = inflow_builders_.at(e.id);
      if (final_phase) {
        builder.append_tail(lv, x / rv);
      } else {
        builder.append(lv, lv + alpha * rv, x / rv);
      }
    }
    if (rw > 0) {
      auto& builder = outflow_builders_.at(e.id);
      if (final_phase) {
        builder.append_tail(lw, x / rw);
      } else {
        builder.append(lw, lw + alpha * rw, x / rw);
      }
    }
    flow_tail_slope_[e.id] = x;
    // Queue profile: capacity * (head rate - tail rate) while a queue exists
    // or builds; an empty queue on an edge about to turn inactive stays empty.
    Rational queue_slope(0);
    if (phase.sets.resetting.count(e.id)) {
      queue_slope = e.capacity * (rw - rv);
    } else if (active) {
      queue_slope = std::max(e.capacity * (rw - rv), Rational(0));
    }
    queue_tail_slope_[e.id] = queue_slope;
  }
  for (auto& [node, slope] : label_tail_slope_) slope = phase.label_rates.at(node);

  phases_.push_back(phase);
  if (final_phase) {
    steady_ = true;
    return;
  }
  frontier_ = *phase.end;
  phase_starts_.push_back(frontier_);
  for (const auto& [node, rate] : phase.label_rates) {
    labels_now_[node] += alpha * rate;
    label_xs_[node].push_back(frontier_);
    label_ys_[node].push_back(labels_now_[node]);
  }
  for (const auto& e : net_->edges()) {
    cumulative_now_[e.id] += alpha * flow_tail_slope_[e.id];
    queues_now_[e.id] += alpha * queue_tail_slope_[e.id];
    if (queues_now_[e.id] < 0) throw std::logic_error("queue drained below zero");
    flow_ys_[e.id].push_back(cumulative_now_[e.id]);
    queue_ys_[e.id].push_back(queues_now_[e.id]);
  }
}

EquilibriumTrajectory TrajectoryBuilder::finish() const {
  EquilibriumTrajectory out;
  for (const auto& [node, xs] : label_xs_) {
    out.labels.emplace(node, PiecewiseLinear(xs, label_ys_.at(node), Rational(1),
                                             label_tail_slope_.at(node)));
  }
  for (const auto& e : net_->edges()) {
    out.cumulative_flows.emplace(
        e.id, PiecewiseLinear(phase_starts_, flow_ys_.at(e.id), Rational(0),
                              flow_tail_slope_.at(e.id)));
    out.queues.emplace(e.id, PiecewiseLinear(phase_starts_, queue_ys_.at(e.id), Rational(0),
                                             queue_tail_slope_.at(e.id)));
    // Close entrance/exit flows whose clock is frozen: nothing arrives there
    // past the frontier.
    auto close = [&](const StepBuilder& builder, const std::string& node) {
      StepBuilder copy = builder;
      const Rational rate = label_tail_slope_.at(node);
      if (rate == 0 && !copy.empty()) copy.append_tail(labels_now_.at(node), Rational(0));
      return copy.build();
    };
    out.edge_inflows.emplace(e.id, close(inflow_builders_.at(e.id), e.tail));
    out.edge_outflows.emplace(e.id, close(outflow_builders_.at(e.id), e.head));
  }
  out.phases = phases_;
  out.frontier = frontier_;
  out.steady = steady_;
  return out;
}

EquilibriumTrajectory solve_equilibrium(const Network& net, const StepFunction& inflow,
                                        const Rational& horizon, const SolveOptions& options) {
  {
    const auto problems = validate(net);
    if (!problems.empty()) throw std::invalid_argument("invalid network: " + problems.front());
  }
  if (!inflow.nonnegative()) throw std::invalid_argument("inflow rate must be nonnegative");
  if (!inflow.vanishes_before(Rational(0))) {
    throw std::invalid_argument("inflow rate must vanish before time 0");
  }
  if (!(horizon > 0)) throw std::invalid_argument("horizon must be positive");
  if (net.source() == net.sink() && !inflow.is_zero()) {
    throw std::invalid_argument("coinciding source and sink require zero inflow");
  }

  TrajectoryBuilder builder(net);
  while (!builder.steady() && builder.frontier() < horizon) {
    if (builder.phase_count() >= options.phase_cap) {
      throw PhaseAccumulationError(options.phase_cap, builder.frontier());
    }
    const auto& labels = builder.labels();
    const EdgeSets sets = derive_edge_sets(net, labels);
    {
      const std::string problem = edge_sets_violation(net, sets);
      if (!problem.empty()) throw std::logic_error("phase edge sets violate the hypothesis: " + problem);
    }
    const Rational theta = builder.frontier();
    NtfInstance instance{net, sets, inflow(theta)};
    const NtfSolution ntf = solve_ntf(instance);

    std::optional<Rational> next_breakpoint;
    for (const auto& b : inflow.breakpoints()) {
      if (b > theta) {
        next_breakpoint = b - theta;
        break;
      }
    }
    const StepBound bound = max_step(net, labels, ntf.labels, sets, next_breakpoint);

    Phase phase;
    phase.start = theta;
    phase.sets = sets;
    phase.inflow_value = instance.inflow_value;
    phase.flow = ntf.flow;
    phase.label_rates = ntf.labels;
    if (bound.alpha) {
      phase.end = theta + *bound.alpha;
      phase.binding = bound.binding;
    } else {
      phase.end = std::nullopt;
      phase.binding = {BindingConstraint::Kind::SteadyState, ""};
    }
    builder.apply(phase);
  }
  return builder.finish();
}

std::map<std::vector<std::string>, Rational> decompose_paths(
    const Network& net, const std::set<std::string>& support,
    const std::map<std::string, Rational>& flow) {
  std::map<std::string, Rational> residual;
  for (const auto& [eid, value] : flow) {
    if (value < 0) throw std::invalid_argument("decompose_paths: negative flow on edge " + eid);
    if (value != 0 && !support.count(eid)) {
      throw std::invalid_argument("decompose_paths: flow off the support on edge " + eid);
    }
    residual[eid] = value;
  }
  topological_order(net, support);  // throws when the support has a cycle

  std::map<std::vector<std::string>, Rational> shares;
  std::vector<std::string> current;
  auto visit = [&](auto&& self, const std::string& node) -> void {
    if (node == net.sink() && !current.empty()) {
      Rational h;
      bool first = true;
      for (const auto& eid : current) {
        const Rational r = residual.count(eid) ? residual.at(eid) : Rational(0);
        if (first || r < h) h = r;
        first = false;
      }
      if (h > 0) {
        for (const auto& eid : current) residual[eid] -= h;
        shares[current] = h;
      }
      return;  // simple paths only: the sink is never left again
    }
    for (const auto& eid : net.out_edges(node)) {
      if (!support.count(eid)) continue;
      current.push_back(eid);
      self(self, net.edge(eid).head);
      current.pop_back();
    }
  };
  visit(visit, net.source());

  for (const auto& [eid, value] : residual) {
    if (value != 0) throw std::logic_error("decompose_paths: nonzero residual on edge " + eid);
  }
  return shares;
}

}  // namespace flowtime
