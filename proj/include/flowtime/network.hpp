#pragma once

#include "flowtime/rational.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace flowtime {

struct Edge {
  std::string id;
  std::string tail;
  std::string head;
  Rational capacity;  // queue service rate, > 0
  Rational latency;   // free-flow travel time, >= 0
};

/// Directed network with a designated source and sink. Node and edge ids are
/// opaque strings; every deterministic iteration is in lexicographic id order.
/// Parallel edges between the same node pair are allowed (they are
/// distinguished by id); self-loops are not.
class Network {
 public:
  Network(std::vector<std::string> nodes, std::vector<Edge> edges, std::string source,
          std::string sink);

  const std::vector<std::string>& nodes() const { return nodes_; }   // sorted
  const std::vector<Edge>& edges() const { return edges_; }          // sorted by id
  const std::string& source() const { return source_; }
  const std::string& sink() const { return sink_; }

  bool has_node(const std::string& id) const;
  bool has_edge(const std::string& id) const;
  const Edge& edge(const std::string& id) const;
  /// Edge ids leaving / entering a node, sorted.
  const std::vector<std::string>& out_edges(const std::string& node) const;
  const std::vector<std::string>& in_edges(const std::string& node) const;

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::string source_;
  std::string sink_;
  std::map<std::string, std::size_t> edge_index_;
  std::map<std::string, std::vector<std::string>> out_edges_;
  std::map<std::string, std::vector<std::string>> in_edges_;
};

/// Active edge set E' with its resetting subset E* (edges with positive
/// queue).
struct EdgeSets {
  std::set<std::string> active;
  std::set<std::string> resetting;

  bool operator==(const EdgeSets&) const = default;
};

/// Structural diagnostics; empty result means the network satisfies every
/// model assumption (source/sink present, all nodes reachable from the
/// source, positive capacities, nonnegative latencies, no self-loops, and no
/// directed cycle of zero total latency).
std::vector<std::string> validate(const Network& net);

/// Shortest s-v travel times with empty queues (edge weights = latencies).
std::map<std::string, Rational> free_flow_labels(const Network& net);

/// Classifies edges by node labels: active when l_head >= l_tail + latency,
/// resetting when strict.
EdgeSets derive_edge_sets(const Network& net, const std::map<std::string, Rational>& labels);

/// Error message when (E*, E') violates the structural hypothesis required of
/// edge-set pairs: E* subset of E', E' acyclic, and every node reachable from
/// the source within E'. Empty string when all hold.
std::string edge_sets_violation(const Network& net, const EdgeSets& sets);

/// Topological order of all nodes under the given edge subset, source first
/// among ties, then lexicographic. Throws std::invalid_argument naming a cycle
/// when the subset is cyclic.
std::vector<std::string> topological_order(const Network& net, const std::set<std::string>& edges);

}  // namespace flowtime
