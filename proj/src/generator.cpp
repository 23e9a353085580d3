#include "flowtime/generator.hpp"

#include <algorithm>

namespace flowtime {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  while (true) {
    const std::uint64_t r = gen_();
    if (r < limit) return r % n;
  }
}

Rational Rng::halves(long max_halves) {
  return Rational(static_cast<long>(below(static_cast<std::uint64_t>(2 * max_halves + 1))), 2);
}

namespace {

std::string node_name(std::size_t i) { return "v" + std::to_string(i); }

std::string edge_name(std::size_t i) {
  std::string n = std::to_string(i);
  return "e" + std::string(n.size() < 2 ? 2 - n.size() : 0, '0') + n;
}

const std::vector<Rational> kCapacities = {
    Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(5, 2), Rational(3)};
const std::vector<Rational> kLatencies = {
    Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(3)};

struct Skeleton {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  std::vector<std::size_t> spanning;  // indices of the reachability edges
  std::vector<std::size_t> forward;   // indices of index-increasing extras
};

// Nodes v0..v{n-1}; a spanning edge into every non-source node keeps all of
// them reachable, extras are random ordered pairs (parallel edges allowed).
Skeleton random_skeleton(Rng& rng, const GeneratorOptions& options) {
  Skeleton s;
  const std::size_t n = 2 + rng.below(options.max_nodes - 1);
  for (std::size_t i = 0; i < n; ++i) s.nodes.push_back(node_name(i));
  std::size_t eid = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t tail = rng.below(i);
    s.spanning.push_back(s.edges.size());
    s.edges.push_back({edge_name(eid++), node_name(tail), node_name(i), rng.pick(kCapacities),
                       rng.pick(kLatencies)});
  }
  const std::size_t extras =
      s.edges.size() >= options.max_edges ? 0 : rng.below(options.max_edges - s.edges.size() + 1);
  for (std::size_t k = 0; k < extras; ++k) {
    std::size_t a = rng.below(n), b = rng.below(n);
    if (a == b) continue;
    if (a > b && rng.below(2) == 0) std::swap(a, b);  // bias toward forward edges
    if (a < b) s.forward.push_back(s.edges.size());
    s.edges.push_back({edge_name(eid++), node_name(a), node_name(b), rng.pick(kCapacities),
                       rng.pick(kLatencies)});
  }
  return s;
}

StepFunction random_inflow(Rng& rng, const GeneratorOptions& options, const Rational& horizon) {
  const std::size_t pieces = 1 + rng.below(options.max_inflow_pieces);
  std::vector<Rational> from, rate;
  Rational t(0);
  for (std::size_t i = 0; i < pieces; ++i) {
    if (i > 0) {
      t += 1 + Rational(static_cast<long>(rng.below(4)), 2);
      if (t >= horizon) break;
    }
    from.push_back(t);
    rate.push_back(Rational(static_cast<long>(rng.below(9)), 2));
  }
  return StepFunction(Rational(0), std::move(from), std::move(rate));
}

}  // namespace

Network random_network(Rng& rng, const GeneratorOptions& options) {
  const Skeleton s = random_skeleton(rng, options);
  return Network(s.nodes, s.edges, s.nodes.front(), s.nodes.back());
}

NtfInstance random_instance(Rng& rng, const GeneratorOptions& options) {
  const Skeleton s = random_skeleton(rng, options);
  NtfInstance instance{Network(s.nodes, s.edges, s.nodes.front(), s.nodes.back()),
                       {},
                       Rational(static_cast<long>(rng.below(5)))};
  // The spanning edges keep every node reachable; forward extras keep the
  // active set acyclic.
  for (const auto& idx : s.spanning) instance.sets.active.insert(s.edges[idx].id);
  for (const auto& idx : s.forward) {
    if (rng.below(2) == 0) instance.sets.active.insert(s.edges[idx].id);
  }
  for (const auto& eid : instance.sets.active) {
    if (rng.below(3) == 0) instance.sets.resetting.insert(eid);
  }
  return instance;
}

Scenario random_scenario(Rng& rng, const GeneratorOptions& options) {
  Scenario scenario{random_network(rng, options), StepFunction(), Rational(0), std::nullopt};
  scenario.horizon = Rational(2 + static_cast<long>(rng.below(
                             static_cast<std::uint64_t>(options.max_horizon - 1))));
  scenario.inflow = random_inflow(rng, options, scenario.horizon);
  return scenario;
}

PathFlowSet random_path_flows(Rng& rng, const Network& net, const Rational& horizon) {
  // Collect all simple source-sink paths, lexicographic by edge ids.
  std::vector<std::vector<std::string>> all_paths;
  std::vector<std::string> current;
  auto visit = [&](auto&& self, const std::string& node) -> void {
    if (node == net.sink() && !current.empty()) {
      all_paths.push_back(current);
      return;
    }
    if (all_paths.size() >= 64) return;
    for (const auto& eid : net.out_edges(node)) {
      bool revisits = false;
      for (const auto& used : current) {
        if (net.edge(used).tail == net.edge(eid).head || net.edge(used).head == net.edge(eid).head) {
          revisits = true;
          break;
        }
      }
      if (net.edge(eid).head == net.source()) revisits = true;
      if (revisits) continue;
      current.push_back(eid);
      self(self, net.edge(eid).head);
      current.pop_back();
    }
  };
  visit(visit, net.source());

  PathFlowSet set;
  set.horizon = horizon;
  if (all_paths.empty()) return set;
  const std::size_t count = 1 + rng.below(std::min<std::uint64_t>(3, all_paths.size()));
  std::set<std::vector<std::string>> chosen;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::string> path = all_paths[rng.below(all_paths.size())];
    if (rng.below(4) == 0 && path.size() > 1) {
      path.resize(1 + rng.below(path.size() - 1));  // a prefix: different destination
    }
    if (!chosen.insert(path).second) continue;
    PathFlowSet::PathFlow flow;
    flow.id = "P" + std::to_string(set.paths.size());
    flow.edges = std::move(path);
    GeneratorOptions opts;
    flow.rate = random_inflow(rng, opts, horizon).truncated_after(horizon);
    set.paths.push_back(std::move(flow));
  }
  return set;
}

}  // namespace flowtime
