#include "flowtime/verify.hpp"

#include <algorithm>
#include <optional>

namespace flowtime {

namespace {

// Checks compare exact piecewise data on (-inf, hi]; hi is empty for a
// steady trajectory, whose tails are exact, and finite otherwise, where the
// tails merely extrapolate the last computed phase.
using Window = std::optional<Rational>;

bool in_window(const Rational& x, const Window& hi) { return !hi || x < *hi; }

// Witness (time, value) of a step function exceeding a bound within the window.
std::optional<std::pair<Rational, Rational>> step_above(const StepFunction& f,
                                                        const Rational& bound, const Window& hi) {
  if (f.value_before() > bound) {
    const Rational x = f.breakpoints().empty() ? Rational(0) : f.breakpoints().front() - 1;
    return std::make_pair(x, f.value_before());
  }
  for (std::size_t i = 0; i < f.breakpoints().size(); ++i) {
    if (!in_window(f.breakpoints()[i], hi)) break;
    if (f.values()[i] > bound) return std::make_pair(f.breakpoints()[i], f.values()[i]);
  }
  return std::nullopt;
}

// Witness time of two step functions differing within the window.
std::optional<Rational> step_mismatch(const StepFunction& f, const StepFunction& g,
                                      const Window& hi) {
  if (f.value_before() != g.value_before()) {
    Rational x(0);
    if (!f.breakpoints().empty()) x = f.breakpoints().front() - 1;
    if (!g.breakpoints().empty()) x = std::min(x, g.breakpoints().front() - 1);
    return x;
  }
  for (const auto* fn : {&f, &g}) {
    for (const auto& b : fn->breakpoints()) {
      if (!in_window(b, hi)) break;
      if (f(b) != g(b)) return b;
    }
  }
  return std::nullopt;
}

// Witness time of two piecewise-linear functions differing on (-inf, hi].
// Affine pieces agreeing at their endpoints and midpoint agree throughout,
// so the merged grid plus midpoints decides equality exactly.
std::optional<Rational> plw_mismatch(const PiecewiseLinear& f, const PiecewiseLinear& g,
                                     const Window& hi) {
  std::vector<Rational> grid;
  for (const auto* fn : {&f, &g}) {
    for (const auto& x : fn->xs()) {
      if (!hi || x <= *hi) grid.push_back(x);
    }
  }
  if (hi) grid.push_back(*hi);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<Rational> points;
  if (grid.empty()) {
    points = {*hi - 1, *hi};
  } else {
    points.push_back(grid.front() - 2);
    points.push_back(grid.front() - 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      points.push_back(grid[i]);
      if (i + 1 < grid.size()) points.push_back((grid[i] + grid[i + 1]) / 2);
    }
    if (!hi) {
      points.push_back(grid.back() + 1);
      points.push_back(grid.back() + 2);
    }
  }
  for (const auto& x : points) {
    if (f(x) != g(x)) return x;
  }
  return std::nullopt;
}

// Witness (time, value) of a piecewise-linear function dropping below zero
// within the window.
std::optional<std::pair<Rational, Rational>> plw_negative(const PiecewiseLinear& f,
                                                          const Window& hi) {
  for (std::size_t i = 0; i < f.xs().size(); ++i) {
    if (hi && f.xs()[i] > *hi) break;
    if (f.ys()[i] < 0) return std::make_pair(f.xs()[i], f.ys()[i]);
  }
  if (hi) {
    const Rational y = f(*hi);
    if (y < 0) return std::make_pair(*hi, y);
  }
  if (f.slope_before() > 0) {
    // Far enough to the left the function is negative.
    const Rational reach =
        f.xs().front() - (std::max(f.ys().front(), Rational(1)) / f.slope_before() + 1);
    const Rational y = f(reach);
    if (y < 0) return std::make_pair(reach, y);
  }
  if (!hi && f.slope_after() < 0) {
    const Rational reach =
        f.xs().back() + (std::max(f.ys().back(), Rational(1)) / -f.slope_after() + 1);
    return std::make_pair(reach, f(reach));
  }
  return std::nullopt;
}

// Maximal intervals where f > 0; unbounded ends are empty optionals.
std::vector<std::pair<std::optional<Rational>, std::optional<Rational>>> positive_intervals(
    const PiecewiseLinear& f) {
  std::vector<Rational> points = f.xs();
  if (f.slope_before() != 0) {
    const Rational root = f.xs().front() - f.ys().front() / f.slope_before();
    if (root < f.xs().front()) points.push_back(root);
  }
  for (std::size_t i = 0; i + 1 < f.xs().size(); ++i) {
    const Rational &ya = f.ys()[i], &yb = f.ys()[i + 1];
    if ((ya < 0 && yb > 0) || (ya > 0 && yb < 0)) {
      points.push_back(f.xs()[i] + (f.xs()[i + 1] - f.xs()[i]) * (-ya) / (yb - ya));
    }
  }
  if (f.slope_after() != 0) {
    const Rational root = f.xs().back() - f.ys().back() / f.slope_after();
    if (root > f.xs().back()) points.push_back(root);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  // Between consecutive points the sign is constant, so one interior test per
  // segment decides it. Runs are not merged across touching zeros; a split
  // interval only splits the checks.
  std::vector<std::pair<std::optional<Rational>, std::optional<Rational>>> out;
  if (f(points.front() - 1) > 0) out.push_back({std::nullopt, points.front()});
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (f((points[i] + points[i + 1]) / 2) > 0) out.push_back({points[i], points[i + 1]});
  }
  if (f(points.back() + 1) > 0) out.push_back({points.back(), std::nullopt});
  return out;
}

// Largest x <= cap with f(x) <= y, for nondecreasing f with f(cap) > y.
Rational last_time_below(const PiecewiseLinear& f, const Rational& y, const Rational& cap) {
  Rational x = cap;
  const auto& xs = f.xs();
  // Walk left over the kinks until the function value drops to y.
  std::optional<Rational> seg_end;
  for (std::size_t i = xs.size(); i-- > 0;) {
    if (xs[i] > cap) continue;
    if (f(xs[i]) <= y) {
      const Rational hi_x = seg_end ? *seg_end : cap;
      const Rational slope = (f(hi_x) - f(xs[i])) / (hi_x - xs[i]);
      return slope == 0 ? hi_x : xs[i] + (y - f(xs[i])) / slope;
    }
    seg_end = xs[i];
  }
  const Rational anchor = seg_end ? *seg_end : cap;
  if (f.slope_before() == 0) return anchor;  // constant tail; y below it never occurs
  return anchor - (f(anchor) - y) / f.slope_before();
}

}  // namespace

std::vector<Violation> check_feasible(const Network& net, const EquilibriumTrajectory& trajectory,
                                      const StepFunction& inflow) {
  std::vector<Violation> out;
  const bool steady = trajectory.steady;
  auto label_at_frontier = [&](const std::string& node) {
    return trajectory.labels.at(node)(trajectory.frontier);
  };
  for (const auto& e : net.edges()) {
    const Window out_hi = steady ? Window{} : Window{label_at_frontier(e.head)};
    const StepFunction& f_out = trajectory.edge_outflows.at(e.id);
    if (auto w = step_above(f_out, e.capacity, out_hi)) {
      out.push_back({"capacity", e.id, w->first, w->second, e.capacity, "outflow exceeds capacity"});
    }
    const PiecewiseLinear deficit = integrate(trajectory.edge_inflows.at(e.id)) -
                                    integrate(f_out).shifted_arg(e.latency);
    const Window deficit_hi =
        steady ? Window{}
               : Window{std::min(label_at_frontier(e.tail), label_at_frontier(e.head) - e.latency)};
    if (auto w = plw_negative(deficit, deficit_hi)) {
      out.push_back({"non-deficit", e.id, w->first, w->second, Rational(0), "negative queue"});
    }
  }
  for (const auto& node : net.nodes()) {
    if (node == net.sink()) continue;
    StepFunction lhs;
    for (const auto& eid : net.out_edges(node)) lhs = lhs + trajectory.edge_inflows.at(eid);
    for (const auto& eid : net.in_edges(node)) lhs = lhs + trajectory.edge_outflows.at(eid) * Rational(-1);
    const StepFunction rhs = node == net.source() ? inflow : StepFunction();
    const Window hi = steady ? Window{} : Window{label_at_frontier(node)};
    if (auto w = step_mismatch(lhs, rhs, hi)) {
      out.push_back({"conservation", node, *w, lhs(*w), rhs(*w), "flow conservation fails"});
    }
  }
  return out;
}

std::vector<Violation> check_equilibrium(const Network& net,
                                         const EquilibriumTrajectory& trajectory) {
  std::vector<Violation> out;
  // Labels must be nondecreasing before any of them can serve as an inner
  // composition argument.
  for (const auto& [node, fn] : trajectory.labels) {
    if (!fn.nondecreasing()) {
      out.push_back({"label-recursion", node, fn.xs().front(), Rational(0), Rational(0),
                     "label function is not nondecreasing"});
    }
  }
  if (!out.empty()) return out;
  const bool steady = trajectory.steady;
  const Rational frontier = trajectory.frontier;
  const Window theta_hi = steady ? Window{} : Window{frontier};

  std::map<std::string, PiecewiseLinear> exit_times;  // on the entrance clock
  for (const auto& e : net.edges()) {
    const PiecewiseLinear cum_in = integrate(trajectory.edge_inflows.at(e.id));
    const PiecewiseLinear cum_out = integrate(trajectory.edge_outflows.at(e.id));
    const PiecewiseLinear& l_tail = trajectory.labels.at(e.tail);
    const PiecewiseLinear& l_head = trajectory.labels.at(e.head);

    const PiecewiseLinear lhs = compose_monotone(cum_in, l_tail);
    const PiecewiseLinear rhs = compose_monotone(cum_out, l_head);
    if (auto w = plw_mismatch(lhs, rhs, theta_hi)) {
      out.push_back({"cumulative-mismatch", e.id, *w, lhs(*w), rhs(*w),
                     "flow entering by the tail label has not exited by the head label"});
    }
    if (auto w = plw_mismatch(trajectory.cumulative_flows.at(e.id), lhs, theta_hi)) {
      out.push_back({"cumulative-mismatch", e.id, *w, trajectory.cumulative_flows.at(e.id)(*w),
                     lhs(*w), "recorded cumulative flow disagrees with the edge inflow"});
    }

    // No inflow may enter an edge while it is inactive: the entering mass over
    // the label image of every inactivity interval must vanish.
    const PiecewiseLinear inactivity = l_tail + e.latency - l_head;
    for (auto [from, to] : positive_intervals(inactivity)) {
      if (!steady) {
        if (from && *from >= frontier) continue;
        if (!to || *to > frontier) to = frontier;
      }
      if (!to) {
        // The edge never becomes active again: no inflow from the image on.
        const Rational start = from ? l_tail(*from) : l_tail(Rational(0));
        const StepFunction& f_in = trajectory.edge_inflows.at(e.id);
        if (f_in != f_in.truncated_after(start)) {
          out.push_back({"inactive-inflow", e.id, from ? *from : Rational(0), Rational(1),
                         Rational(0), "inflow into an edge that never becomes active again"});
        }
        continue;
      }
      const Rational lo = from ? cum_in(l_tail(*from)) : Rational(0);
      const Rational hi_mass = cum_in(l_tail(*to));
      if (hi_mass != lo) {
        out.push_back({"inactive-inflow", e.id, from ? *from : *to, hi_mass - lo, Rational(0),
                       "inflow into an inactive edge"});
      }
    }

    const PiecewiseLinear queue_on_entry = cum_in - cum_out.shifted_arg(e.latency);
    exit_times.emplace(e.id, PiecewiseLinear::identity() + queue_on_entry * (1 / e.capacity) +
                                 e.latency);

    // Queue profile identity: z(l_tail) = capacity * max(l_head - l_tail - latency, 0).
    const PiecewiseLinear expected_queue = max_pointwise(
        (l_head - l_tail + (-e.latency)) * e.capacity, PiecewiseLinear::constant(Rational(0)));
    if (auto w = plw_mismatch(trajectory.queues.at(e.id), expected_queue, theta_hi)) {
      out.push_back({"capacity-operation", e.id, *w, trajectory.queues.at(e.id)(*w),
                     expected_queue(*w), "recorded queue profile disagrees with the labels"});
    }
  }

  {
    const PiecewiseLinear& l_source = trajectory.labels.at(net.source());
    if (auto w = plw_mismatch(l_source, PiecewiseLinear::identity(), theta_hi)) {
      out.push_back({"label-recursion", net.source(), *w, l_source(*w), *w,
                     "source label is not the identity"});
    }
  }

  // Label recursion through the reconstructed exit times. For an unfinished
  // trajectory the comparison stops where some exit-time value would depend on
  // outflow data beyond the computed window.
  Window recursion_hi = theta_hi;
  if (!steady) {
    for (const auto& e : net.edges()) {
      const Rational head_limit = trajectory.labels.at(e.head)(frontier) - e.latency;
      const PiecewiseLinear& l_tail = trajectory.labels.at(e.tail);
      const Rational bound = l_tail(*recursion_hi) <= head_limit
                                 ? *recursion_hi
                                 : last_time_below(l_tail, head_limit, *recursion_hi);
      recursion_hi = std::min(*recursion_hi, bound);
    }
  }
  for (const auto& node : net.nodes()) {
    if (node == net.source() || net.in_edges(node).empty()) continue;
    std::vector<PiecewiseLinear> candidates;
    for (const auto& eid : net.in_edges(node)) {
      candidates.push_back(
          compose_monotone(exit_times.at(eid), trajectory.labels.at(net.edge(eid).tail)));
    }
    const PiecewiseLinear expected = min_pointwise(candidates);
    if (auto w = plw_mismatch(trajectory.labels.at(node), expected, recursion_hi)) {
      out.push_back({"label-recursion", node, *w, trajectory.labels.at(node)(*w), expected(*w),
                     "label differs from the minimum exit time over incoming edges"});
    }
  }

  for (const auto& phase : trajectory.phases) {
    std::map<std::string, Rational> labels_at;
    for (const auto& [node, fn] : trajectory.labels) labels_at[node] = fn(phase.start);
    if (derive_edge_sets(net, labels_at) != phase.sets) {
      out.push_back({"label-recursion", "", phase.start, Rational(0), Rational(0),
                     "recorded phase edge sets disagree with the labels"});
    }
  }
  return out;
}

std::vector<Violation> check_capacity_operation(const Network& net, const LoadingResult& result) {
  std::vector<Violation> out;
  for (const auto& e : net.edges()) {
    const EdgeLoading& loading = result.edges.at(e.id);
    if (auto w = step_above(loading.outflow, e.capacity, Window{})) {
      out.push_back({"capacity", e.id, w->first, w->second, e.capacity, "outflow exceeds capacity"});
    }
    if (auto w = plw_negative(loading.queue, Window{})) {
      out.push_back({"non-deficit", e.id, w->first, w->second, Rational(0), "negative queue"});
    }
    const PiecewiseLinear expected =
        PiecewiseLinear::identity() + loading.queue * (1 / e.capacity) + e.latency;
    if (auto w = plw_mismatch(loading.exit_time, expected, Window{})) {
      out.push_back({"capacity-operation", e.id, *w, loading.exit_time(*w), expected(*w),
                     "waiting time differs from queue over capacity"});
    }
  }
  return out;
}

std::vector<Violation> check_feasible(const Network& net, const LoadingResult& result,
                                      const PathFlowSet& path_flows) {
  std::vector<Violation> out = check_capacity_operation(net, result);
  for (const auto& e : net.edges()) {
    const EdgeLoading& loading = result.edges.at(e.id);
    std::vector<StepFunction> in_shares, out_shares;
    for (const auto& p : path_flows.paths) {
      for (std::size_t i = 0; i < p.edges.size(); ++i) {
        if (p.edges[i] != e.id) continue;
        in_shares.push_back(result.path_edge_inflows.at(p.id)[i]);
        out_shares.push_back(result.path_edge_outflows.at(p.id)[i]);
      }
    }
    if (auto w = step_mismatch(loading.inflow, sum(in_shares), Window{})) {
      out.push_back({"conservation", e.id, *w, loading.inflow(*w), sum(in_shares)(*w),
                     "edge inflow differs from the sum of path shares"});
    }
    if (auto w = step_mismatch(loading.outflow, sum(out_shares), Window{})) {
      out.push_back({"conservation", e.id, *w, loading.outflow(*w), sum(out_shares)(*w),
                     "edge outflow differs from the sum of path shares"});
    }
    const PiecewiseLinear cum_in = integrate(loading.inflow);
    const PiecewiseLinear cum_out = integrate(loading.outflow);
    if (auto w = plw_mismatch(loading.queue, cum_in - cum_out.shifted_arg(e.latency), Window{})) {
      out.push_back({"cumulative-mismatch", e.id, *w, loading.queue(*w),
                     (cum_in - cum_out.shifted_arg(e.latency))(*w),
                     "queue differs from cumulative inflow minus outflow"});
    }
    if (auto w = plw_mismatch(compose_monotone(cum_out, loading.exit_time), cum_in, Window{})) {
      out.push_back({"cumulative-mismatch", e.id, *w,
                     compose_monotone(cum_out, loading.exit_time)(*w), cum_in(*w),
                     "flow entering by time theta has not exited by the exit time"});
    }
  }
  for (const auto& p : path_flows.paths) {
    const auto& inflows = result.path_edge_inflows.at(p.id);
    const auto& outflows = result.path_edge_outflows.at(p.id);
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
      const StepFunction& expected = i == 0 ? p.rate : outflows[i - 1];
      if (auto w = step_mismatch(inflows[i], expected, Window{})) {
        out.push_back({"conservation", p.id, *w, inflows[i](*w), expected(*w),
                       "path inflow does not chain from the previous edge"});
      }
      const PiecewiseLinear cum_in = integrate(inflows[i]);
      const PiecewiseLinear cum_out = integrate(outflows[i]);
      const PiecewiseLinear& exit_time = result.edges.at(p.edges[i]).exit_time;
      if (auto w = plw_mismatch(compose_monotone(cum_out, exit_time), cum_in, Window{})) {
        out.push_back({"cumulative-mismatch", p.id, *w, compose_monotone(cum_out, exit_time)(*w),
                       cum_in(*w), "path share transfer identity fails on edge " + p.edges[i]});
      }
    }
  }
  return out;
}

PathFlowSet phase_path_flows(const Network& net, const EquilibriumTrajectory& trajectory,
                             const Rational& horizon) {
  std::map<std::vector<std::string>, std::vector<std::pair<Rational, Rational>>> pieces;
  std::vector<Rational> starts;
  for (const auto& phase : trajectory.phases) {
    if (phase.start >= horizon) break;
    starts.push_back(phase.start);
    for (const auto& [path, share] : decompose_paths(net, phase.sets.active, phase.flow)) {
      pieces[path].push_back({phase.start, share});
    }
  }
  PathFlowSet set;
  set.horizon = horizon;
  std::size_t counter = 0;
  for (const auto& [path, shares] : pieces) {
    std::vector<Rational> bps = starts;
    bps.push_back(horizon);
    std::vector<Rational> values(bps.size(), Rational(0));
    for (const auto& [start, share] : shares) {
      const auto it = std::lower_bound(bps.begin(), bps.end(), start);
      values[static_cast<std::size_t>(it - bps.begin())] = share;
    }
    PathFlowSet::PathFlow flow;
    flow.id = "P" + std::to_string(counter++);
    flow.edges = path;
    flow.rate = StepFunction(Rational(0), std::move(bps), std::move(values));
    set.paths.push_back(std::move(flow));
  }
  return set;
}

CrossCheckReport cross_check(const Network& net, const StepFunction& inflow,
                             const EquilibriumTrajectory& trajectory) {
  CrossCheckReport report;
  const Rational window = trajectory.steady ? trajectory.frontier + 1 : trajectory.frontier;
  const PathFlowSet path_flows = phase_path_flows(net, trajectory, window);

  // The per-phase decompositions must add up to the scenario inflow.
  std::vector<StepFunction> rates;
  for (const auto& p : path_flows.paths) rates.push_back(p.rate);
  if (sum(rates) != inflow.truncated_after(window)) {
    report.ok = false;
    report.detail = "decomposed path rates do not add up to the scenario inflow";
    return report;
  }

  const LoadingResult result = load(net, path_flows);

  std::vector<Rational> grid;
  for (const auto& phase : trajectory.phases) {
    if (phase.start <= window) grid.push_back(phase.start);
  }
  grid.push_back(window);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // Earliest arrivals through the loaded exit times, by label relaxation over
  // all edges; dynamic shortest paths are simple, so node-count many rounds
  // settle the values.
  for (const auto& theta : grid) {
    std::map<std::string, std::optional<Rational>> arrival;
    for (const auto& node : net.nodes()) arrival[node] = std::nullopt;
    arrival[net.source()] = theta;
    for (std::size_t round = 0; round < net.nodes().size(); ++round) {
      for (const auto& e : net.edges()) {
        const auto& tail = arrival[e.tail];
        if (!tail) continue;
        const Rational candidate = result.edges.at(e.id).exit_time(*tail);
        auto& head = arrival[e.head];
        if (!head || candidate < *head) head = candidate;
      }
    }
    for (const auto& node : net.nodes()) {
      const Rational expected = trajectory.labels.at(node)(theta);
      if (!arrival[node] || *arrival[node] != expected) {
        report.ok = false;
        report.mismatch = {node, theta};
        report.detail = "node " + node + " at time " + to_string(theta) + ": loading gives " +
                        (arrival[node] ? to_string(*arrival[node]) : std::string("unreachable")) +
                        ", trajectory has " + to_string(expected);
        return report;
      }
    }
  }
  report.ok = true;
  return report;
}

}  // namespace flowtime
