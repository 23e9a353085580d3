#include "flowtime/loading.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

namespace flowtime {

void PathFlowSet::validate(const Network& net) const {
  std::set<std::string> ids;
  for (const auto& p : paths) {
    if (!ids.insert(p.id).second) throw std::invalid_argument("duplicate path id: " + p.id);
    if (p.edges.empty()) throw std::invalid_argument("path " + p.id + " has no edges");
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
      if (!net.has_edge(p.edges[i])) {
        throw std::invalid_argument("path " + p.id + " references unknown edge " + p.edges[i]);
      }
      if (i > 0 && net.edge(p.edges[i - 1]).head != net.edge(p.edges[i]).tail) {
        throw std::invalid_argument("path " + p.id + " is not edge-adjacent at position " +
                                    std::to_string(i));
      }
    }
    if (!p.rate.nonnegative()) throw std::invalid_argument("path " + p.id + " has a negative rate");
    if (!p.rate.vanishes_before(Rational(0)) || p.rate != p.rate.truncated_after(horizon)) {
      throw std::invalid_argument("path " + p.id + " has rate outside [0, horizon]");
    }
  }
}

std::pair<PiecewiseLinear, PiecewiseLinear> queue_evolve(const StepFunction& inflow,
                                                         const Rational& capacity,
                                                         const Rational& latency) {
  if (!inflow.nonnegative()) throw std::invalid_argument("queue_evolve: negative inflow");
  if (!inflow.vanishes_before(Rational(0))) {
    throw std::invalid_argument("queue_evolve: inflow before time 0");
  }
  if (!(capacity > 0)) throw std::invalid_argument("queue_evolve: nonpositive capacity");

  std::vector<Rational> events;
  for (const auto& b : inflow.breakpoints()) {
    if (b > 0) events.push_back(b);
  }
  std::vector<Rational> xs{Rational(0)}, ys{Rational(0)};
  Rational z(0);
  Rational cur(0);
  Rational tail_slope(0);
  for (std::size_t i = 0; i <= events.size(); ++i) {
    const Rational rate = inflow(cur);
    Rational slope = z > 0 ? rate - capacity : std::max(rate - capacity, Rational(0));
    const bool last = i == events.size();
    if (slope < 0) {
      const Rational depletion = cur + z / (capacity - rate);
      if (last || depletion < events[i]) {
        xs.push_back(depletion);
        ys.push_back(Rational(0));
        z = 0;
        cur = depletion;
        slope = 0;
      }
    }
    if (last) {
      tail_slope = slope;
      break;
    }
    z += slope * (events[i] - cur);
    cur = events[i];
    xs.push_back(cur);
    ys.push_back(z);
  }
  PiecewiseLinear queue(xs, ys, Rational(0), tail_slope);

  std::vector<Rational> tys;
  tys.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) tys.push_back(xs[i] + ys[i] / capacity + latency);
  PiecewiseLinear exit_time(xs, std::move(tys), Rational(1), 1 + tail_slope / capacity);
  return {std::move(queue), std::move(exit_time)};
}

StepFunction transfer_outflow(const StepFunction& path_inflow, const PiecewiseLinear& exit_time) {
  if (!exit_time.nondecreasing()) {
    throw std::invalid_argument("transfer_outflow: exit time must be nondecreasing");
  }
  std::vector<Rational> points = exit_time.xs();
  points.insert(points.end(), path_inflow.breakpoints().begin(), path_inflow.breakpoints().end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  if (path_inflow.value_before() != 0) {
    // Flow arriving from the infinite past has no well-defined exit interval.
    throw std::invalid_argument("transfer_outflow: inflow does not vanish toward -infinity");
  }

  StepBuilder out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Rational slope = exit_time.slope_right_of(points[i]);
    if (slope == 0) continue;  // plateau: the image is a single point
    out.append(exit_time(points[i]), exit_time(points[i + 1]), path_inflow(points[i]) / slope);
  }
  const Rational tail_slope = exit_time.slope_after();
  const Rational last = points.back();
  if (tail_slope > 0) {
    out.append_tail(exit_time(last), path_inflow(last) / tail_slope);
  } else {
    out.append_tail(exit_time(last), Rational(0));
  }
  return out.build();
}

namespace {

struct PathState {
  std::vector<StepFunction> inflows;   // correct before `known`, zero after
  std::vector<StepFunction> outflows;
  std::vector<std::optional<Rational>> known;  // nullopt: known on all of R
};

bool known_at_least(const std::optional<Rational>& known, const Rational& bound) {
  return !known || *known >= bound;
}

}  // namespace

LoadingResult load(const Network& net, const PathFlowSet& path_flows) {
  for (const auto& e : net.edges()) {
    if (!(e.latency > 0)) {
      throw std::invalid_argument("network loading requires positive latency on every edge (edge " +
                                  e.id + ")");
    }
  }
  path_flows.validate(net);

  // Support bound: total mass bounds every queue, hence every edge traversal
  // time, hence the last exit over any path.
  Rational total_mass(0);
  std::size_t longest_path = 0;
  for (const auto& p : path_flows.paths) {
    total_mass += integrate(p.rate)(path_flows.horizon);
    longest_path = std::max(longest_path, p.edges.size());
  }
  Rational delay(0);
  for (const auto& e : net.edges()) {
    delay = std::max(delay, total_mass / e.capacity + e.latency);
  }
  const Rational bound = path_flows.horizon + Rational(static_cast<long>(longest_path)) * delay;

  std::map<std::string, PathState> state;
  for (const auto& p : path_flows.paths) {
    PathState ps;
    ps.inflows.assign(p.edges.size(), StepFunction());
    ps.outflows.assign(p.edges.size(), StepFunction());
    ps.known.assign(p.edges.size(), Rational(0));
    ps.inflows[0] = p.rate;
    ps.known[0] = std::nullopt;  // the first edge's inflow is given outright
    state.emplace(p.id, std::move(ps));
  }

  std::set<std::string> used_edges;
  for (const auto& p : path_flows.paths) used_edges.insert(p.edges.begin(), p.edges.end());

  Rational min_latency(0);
  for (const auto& e : net.edges()) {
    if (min_latency == 0 || e.latency < min_latency) min_latency = e.latency;
  }
  // Every sweep advances the least frontier by at least the least latency.
  std::size_t sweep_cap = 16;
  if (!path_flows.paths.empty()) {
    const Integer steps = numerator(bound / min_latency) / denominator(bound / min_latency) + 2;
    sweep_cap += 2 * static_cast<std::size_t>(steps.convert_to<unsigned long>());
  }

  auto edge_positions = [&](const std::string& eid) {
    std::vector<std::pair<const PathFlowSet::PathFlow*, std::size_t>> positions;
    for (const auto& p : path_flows.paths) {
      for (std::size_t i = 0; i < p.edges.size(); ++i) {
        if (p.edges[i] == eid) positions.push_back({&p, i});
      }
    }
    return positions;
  };

  for (std::size_t sweep = 0;; ++sweep) {
    bool all_known = true;
    for (const auto& [pid, ps] : state) {
      for (const auto& k : ps.known) {
        if (!known_at_least(k, bound)) all_known = false;
      }
    }
    if (all_known) break;
    if (sweep >= sweep_cap) {
      throw std::runtime_error("network loading did not converge (runaway event count)");
    }
    for (const auto& eid : used_edges) {
      const auto positions = edge_positions(eid);
      std::optional<Rational> edge_known;  // least frontier among the sharers
      bool unbounded = true;
      for (const auto& [p, i] : positions) {
        const auto& k = state.at(p->id).known[i];
        if (k) {
          unbounded = false;
          if (!edge_known || *k < *edge_known) edge_known = *k;
        }
      }
      std::vector<StepFunction> shares;
      for (const auto& [p, i] : positions) shares.push_back(state.at(p->id).inflows[i]);
      const Edge& e = net.edge(eid);
      const auto [queue, exit_time] = queue_evolve(sum(shares), e.capacity, e.latency);
      std::optional<Rational> out_known;
      if (!unbounded && edge_known) out_known = exit_time(*edge_known);
      for (const auto& [p, i] : positions) {
        PathState& ps = state.at(p->id);
        StepFunction outflow = transfer_outflow(ps.inflows[i], exit_time);
        if (out_known) outflow = outflow.truncated_after(*out_known);
        ps.outflows[i] = outflow;
        if (i + 1 < p->edges.size()) {
          const auto& succ_known = ps.known[i + 1];
          if (succ_known && (!out_known || *out_known > *succ_known)) {
            ps.inflows[i + 1] = outflow;
            if (out_known) {
              ps.known[i + 1] = *out_known;
            } else {
              ps.known[i + 1] = std::nullopt;
            }
          }
        }
      }
    }
  }

  LoadingResult result;
  result.support_bound = bound;
  for (const auto& e : net.edges()) {
    std::vector<StepFunction> shares;
    for (const auto& [p, i] : edge_positions(e.id)) shares.push_back(state.at(p->id).inflows[i]);
    EdgeLoading loading;
    loading.inflow = sum(shares);
    auto [queue, exit_time] = queue_evolve(loading.inflow, e.capacity, e.latency);
    loading.queue = std::move(queue);
    loading.exit_time = std::move(exit_time);
    std::vector<StepFunction> out_shares;
    for (const auto& [p, i] : edge_positions(e.id)) {
      StepFunction outflow = transfer_outflow(state.at(p->id).inflows[i], loading.exit_time);
      state.at(p->id).outflows[i] = outflow;
      out_shares.push_back(std::move(outflow));
    }
    loading.outflow = sum(out_shares);
    result.edges.emplace(e.id, std::move(loading));
  }
  for (const auto& p : path_flows.paths) {
    result.path_edge_inflows[p.id] = state.at(p.id).inflows;
    result.path_edge_outflows[p.id] = state.at(p.id).outflows;
    PiecewiseLinear arrival = PiecewiseLinear::identity();
    for (const auto& eid : p.edges) {
      arrival = compose_monotone(result.edges.at(eid).exit_time, arrival);
    }
    result.path_arrivals.emplace(p.id, std::move(arrival));
  }
  return result;
}

PathTimes path_times(const Network& net, const LoadingResult& result,
                     const PathFlowSet& path_flows) {
  PathTimes times;
  std::map<std::string, std::vector<PiecewiseLinear>> node_candidates;
  std::map<std::pair<std::string, std::string>, std::vector<PiecewiseLinear>> od_candidates;
  for (const auto& p : path_flows.paths) {
    PiecewiseLinear arrival = PiecewiseLinear::identity();
    node_candidates[net.edge(p.edges.front()).tail].push_back(arrival);
    for (const auto& eid : p.edges) {
      arrival = compose_monotone(result.edges.at(eid).exit_time, arrival);
      node_candidates[net.edge(eid).head].push_back(arrival);
    }
    times.per_path.emplace(p.id, arrival);
    od_candidates[{net.edge(p.edges.front()).tail, net.edge(p.edges.back()).head}].push_back(
        arrival);
  }
  for (const auto& [node, candidates] : node_candidates) {
    times.per_node.emplace(node, min_pointwise(candidates));
  }
  for (const auto& [od, candidates] : od_candidates) {
    times.per_od.emplace(od, min_pointwise(candidates));
  }
  return times;
}

}  // namespace flowtime
