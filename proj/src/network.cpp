#include "flowtime/network.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace flowtime {

Network::Network(std::vector<std::string> nodes, std::vector<Edge> edges, std::string source,
                 std::string sink)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), source_(std::move(source)), sink_(std::move(sink)) {
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw std::invalid_argument("duplicate node id");
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  for (const auto& n : nodes_) {
    out_edges_[n];
    in_edges_[n];
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (!edge_index_.emplace(e.id, i).second) throw std::invalid_argument("duplicate edge id: " + e.id);
    if (!has_node(e.tail) || !has_node(e.head)) {
      throw std::invalid_argument("edge " + e.id + " references an unknown node");
    }
    out_edges_[e.tail].push_back(e.id);
    in_edges_[e.head].push_back(e.id);
  }
  if (!has_node(source_)) throw std::invalid_argument("unknown source node: " + source_);
  if (!has_node(sink_)) throw std::invalid_argument("unknown sink node: " + sink_);
}

bool Network::has_node(const std::string& id) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), id);
}

bool Network::has_edge(const std::string& id) const { return edge_index_.count(id) != 0; }

const Edge& Network::edge(const std::string& id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) throw std::invalid_argument("unknown edge id: " + id);
  return edges_[it->second];
}

const std::vector<std::string>& Network::out_edges(const std::string& node) const {
  auto it = out_edges_.find(node);
  if (it == out_edges_.end()) throw std::invalid_argument("unknown node id: " + node);
  return it->second;
}

const std::vector<std::string>& Network::in_edges(const std::string& node) const {
  auto it = in_edges_.find(node);
  if (it == in_edges_.end()) throw std::invalid_argument("unknown node id: " + node);
  return it->second;
}

namespace {

// Nodes reachable from `start` using edges accepted by `take`.
template <typename Pred>
std::set<std::string> reachable(const Network& net, const std::string& start, Pred take) {
  std::set<std::string> seen{start};
  std::deque<std::string> queue{start};
  while (!queue.empty()) {
    const std::string v = queue.front();
    queue.pop_front();
    for (const auto& eid : net.out_edges(v)) {
      const Edge& e = net.edge(eid);
      if (!take(e)) continue;
      if (seen.insert(e.head).second) queue.push_back(e.head);
    }
  }
  return seen;
}

// Searches for a directed cycle among the given edges; returns the node
// sequence of one cycle, or empty.
std::vector<std::string> find_cycle(const Network& net, const std::set<std::string>& edge_ids) {
  std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::vector<std::string> cycle;

  auto dfs = [&](auto&& self, const std::string& v) -> bool {
    state[v] = 1;
    stack.push_back(v);
    for (const auto& eid : net.out_edges(v)) {
      if (!edge_ids.count(eid)) continue;
      const std::string& w = net.edge(eid).head;
      if (state[w] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        cycle.assign(it, stack.end());
        return true;
      }
      if (state[w] == 0 && self(self, w)) return true;
    }
    stack.pop_back();
    state[v] = 2;
    return false;
  };

  for (const auto& n : net.nodes()) {
    if (state[n] == 0 && dfs(dfs, n)) return cycle;
  }
  return {};
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::vector<std::string> validate(const Network& net) {
  std::vector<std::string> violations;
  for (const auto& e : net.edges()) {
    if (e.tail == e.head) violations.push_back("edge " + e.id + " is a self-loop");
    if (!(e.capacity > 0)) violations.push_back("edge " + e.id + " has nonpositive capacity");
    if (e.latency < 0) violations.push_back("edge " + e.id + " has negative latency");
  }
  const auto seen = reachable(net, net.source(), [](const Edge&) { return true; });
  for (const auto& n : net.nodes()) {
    if (!seen.count(n)) violations.push_back("node " + n + " is not reachable from the source");
  }
  // Every directed cycle must have positive total latency, i.e. the subgraph
  // of zero-latency edges must be acyclic.
  std::set<std::string> zero_latency;
  for (const auto& e : net.edges()) {
    if (e.latency == 0) zero_latency.insert(e.id);
  }
  const auto cycle = find_cycle(net, zero_latency);
  if (!cycle.empty()) {
    violations.push_back("zero-latency cycle through nodes [" + join(cycle, ", ") + "]");
  }
  return violations;
}

std::map<std::string, Rational> free_flow_labels(const Network& net) {
  std::map<std::string, Rational> dist;
  dist[net.source()] = 0;
  // Bellman-Ford; the networks are tiny and latencies are nonnegative.
  for (std::size_t round = 0; round + 1 < std::max<std::size_t>(net.nodes().size(), 1); ++round) {
    bool changed = false;
    for (const auto& e : net.edges()) {
      auto it = dist.find(e.tail);
      if (it == dist.end()) continue;
      const Rational candidate = it->second + e.latency;
      auto [jt, inserted] = dist.emplace(e.head, candidate);
      if (!inserted && candidate < jt->second) {
        jt->second = candidate;
        changed = true;
      } else if (inserted) {
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (dist.size() != net.nodes().size()) {
    throw std::invalid_argument("free_flow_labels: some node is unreachable from the source");
  }
  return dist;
}

EdgeSets derive_edge_sets(const Network& net, const std::map<std::string, Rational>& labels) {
  EdgeSets sets;
  for (const auto& e : net.edges()) {
    const auto tail = labels.find(e.tail);
    const auto head = labels.find(e.head);
    if (tail == labels.end() || head == labels.end()) {
      throw std::invalid_argument("derive_edge_sets: labels missing for edge " + e.id);
    }
    const Rational gap = head->second - tail->second - e.latency;
    if (gap >= 0) sets.active.insert(e.id);
    if (gap > 0) sets.resetting.insert(e.id);
  }
  return sets;
}

std::string edge_sets_violation(const Network& net, const EdgeSets& sets) {
  for (const auto& eid : sets.resetting) {
    if (!sets.active.count(eid)) return "resetting edge " + eid + " is not active";
  }
  for (const auto& eid : sets.active) {
    if (!net.has_edge(eid)) return "active set references unknown edge " + eid;
  }
  const auto cycle = find_cycle(net, sets.active);
  if (!cycle.empty()) return "active edge set has a cycle through [" + join(cycle, ", ") + "]";
  const auto seen =
      reachable(net, net.source(), [&](const Edge& e) { return sets.active.count(e.id) != 0; });
  for (const auto& n : net.nodes()) {
    if (!seen.count(n)) return "node " + n + " has no source path within the active set";
  }
  return "";
}

std::vector<std::string> topological_order(const Network& net, const std::set<std::string>& edges) {
  std::map<std::string, int> indegree;
  for (const auto& n : net.nodes()) indegree[n] = 0;
  for (const auto& eid : edges) ++indegree[net.edge(eid).head];

  // Deterministic Kahn: source first among the ready nodes, then lexicographic.
  std::set<std::string> ready;
  for (const auto& [n, d] : indegree) {
    if (d == 0) ready.insert(n);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string v;
    if (ready.count(net.source())) {
      v = net.source();
    } else {
      v = *ready.begin();
    }
    ready.erase(v);
    order.push_back(v);
    for (const auto& eid : net.out_edges(v)) {
      if (!edges.count(eid)) continue;
      const std::string& w = net.edge(eid).head;
      if (--indegree[w] == 0) ready.insert(w);
    }
  }
  if (order.size() != net.nodes().size()) {
    const auto cycle = find_cycle(net, edges);
    throw std::invalid_argument("topological_order: cycle through [" + join(cycle, ", ") + "]");
  }
  return order;
}

}  // namespace flowtime
