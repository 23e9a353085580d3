#include "flowtime/thinflow.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>

namespace flowtime {

void NtfInstance::validate() const {
  if (inflow_value < 0) throw std::invalid_argument("thin-flow instance with negative inflow value");
  const std::string problem = edge_sets_violation(network, sets);
  if (!problem.empty()) throw std::invalid_argument("thin-flow instance: " + problem);
}

Rational ntf_rho(const NtfInstance& inst, const Edge& edge, const Rational& tail_label,
                 const Rational& flow) {
  const Rational by_flow = flow / edge.capacity;
  if (inst.sets.resetting.count(edge.id)) return by_flow;
  return std::max(tail_label, by_flow);
}

namespace {

Rational flow_at(const std::map<std::string, Rational>& flow, const std::string& edge_id) {
  auto it = flow.find(edge_id);
  return it == flow.end() ? Rational(0) : it->second;
}

// Net outflow minus inflow of a node under the given edge flows.
Rational excess(const Network& net, const std::map<std::string, Rational>& flow,
                const std::string& node) {
  Rational value(0);
  for (const auto& eid : net.out_edges(node)) value += flow_at(flow, eid);
  for (const auto& eid : net.in_edges(node)) value -= flow_at(flow, eid);
  return value;
}

std::vector<std::string> feasibility_violations(const NtfInstance& inst,
                                                const std::map<std::string, Rational>& flow) {
  std::vector<std::string> out;
  const Network& net = inst.network;
  for (const auto& [eid, value] : flow) {
    if (!net.has_edge(eid)) {
      out.push_back("flow references unknown edge " + eid);
      continue;
    }
    if (value < 0) out.push_back("negative flow on edge " + eid);
    if (value != 0 && !inst.sets.active.count(eid)) out.push_back("flow on inactive edge " + eid);
  }
  for (const auto& node : net.nodes()) {
    if (node == net.source() || node == net.sink()) continue;
    if (excess(net, flow, node) != 0) out.push_back("flow conservation fails at node " + node);
  }
  if (net.source() != net.sink()) {
    if (excess(net, flow, net.source()) != inst.inflow_value) {
      out.push_back("flow value at the source differs from the inflow value");
    }
    if (excess(net, flow, net.sink()) != -inst.inflow_value) {
      out.push_back("flow value at the sink differs from the inflow value");
    }
  }
  return out;
}

}  // namespace

std::map<std::string, Rational> ntf_labels(const NtfInstance& inst,
                                           const std::map<std::string, Rational>& flow) {
  inst.validate();
  const auto problems = feasibility_violations(inst, flow);
  if (!problems.empty()) {
    throw std::invalid_argument("ntf_labels: infeasible flow: " + problems.front());
  }
  const Network& net = inst.network;
  std::map<std::string, Rational> labels;
  labels[net.source()] = 1;
  for (const auto& node : topological_order(net, inst.sets.active)) {
    if (node == net.source()) continue;
    std::optional<Rational> best;
    for (const auto& eid : net.in_edges(node)) {
      if (!inst.sets.active.count(eid)) continue;
      const Edge& e = net.edge(eid);
      const Rational rho = ntf_rho(inst, e, labels.at(e.tail), flow_at(flow, eid));
      if (!best || rho < *best) best = rho;
    }
    // The structural hypothesis guarantees an active incoming edge.
    labels[node] = *best;
  }
  return labels;
}

NtfCertificate certify_ntf(const NtfInstance& inst, const NtfSolution& sol) {
  inst.validate();
  NtfCertificate cert;
  cert.violations = feasibility_violations(inst, sol.flow);
  const Network& net = inst.network;
  for (const auto& node : net.nodes()) {
    if (!sol.labels.count(node)) cert.violations.push_back("label missing for node " + node);
  }
  if (!cert.violations.empty()) return cert;

  if (sol.labels.at(net.source()) != 1) {
    cert.violations.push_back("source label is not normalized to 1");
  }
  for (const auto& node : net.nodes()) {
    if (node == net.source()) continue;
    std::optional<Rational> best;
    for (const auto& eid : net.in_edges(node)) {
      if (!inst.sets.active.count(eid)) continue;
      const Edge& e = net.edge(eid);
      const Rational rho = ntf_rho(inst, e, sol.labels.at(e.tail), flow_at(sol.flow, eid));
      if (!best || rho < *best) best = rho;
    }
    if (best && sol.labels.at(node) != *best) {
      cert.violations.push_back("label recursion fails at node " + node);
    }
  }
  for (const auto& eid : inst.sets.active) {
    const Edge& e = net.edge(eid);
    const Rational x = flow_at(sol.flow, eid);
    if (x == 0) continue;
    const Rational rho = ntf_rho(inst, e, sol.labels.at(e.tail), x);
    if (sol.labels.at(e.head) < rho) {
      cert.violations.push_back("positive flow on edge " + eid + " that misses its label bound");
    }
  }
  cert.valid = cert.violations.empty();
  return cert;
}

namespace {

struct IncomingEdge {
  std::string id;
  std::string tail;
  Rational capacity;
  bool resetting = false;
};

// One admissible (tight subset, branch pattern) pair for a node.
struct NodeChoice {
  std::uint32_t tight = 0;   // bit per incoming active edge
  std::uint32_t branch = 0;  // bit per incoming edge: rho attained by flow/capacity
};

struct NodePattern {
  std::string node;
  std::vector<IncomingEdge> incoming;  // sorted by edge id
  std::vector<NodeChoice> choices;
};

// Per-node enumeration of the admissible guesses: every node needs at least
// one tight incoming edge (the label minimum is attained), resetting edges
// have no branch, and branch bits apply to tight non-resetting edges only.
std::vector<NodePattern> build_patterns(const NtfInstance& inst) {
  const Network& net = inst.network;
  std::vector<NodePattern> patterns;
  for (const auto& node : net.nodes()) {
    if (node == net.source()) continue;
    NodePattern p;
    p.node = node;
    for (const auto& eid : net.in_edges(node)) {
      if (!inst.sets.active.count(eid)) continue;
      const Edge& e = net.edge(eid);
      p.incoming.push_back({e.id, e.tail, e.capacity, inst.sets.resetting.count(eid) != 0});
    }
    const std::uint32_t d = static_cast<std::uint32_t>(p.incoming.size());
    for (std::uint32_t tight = 1; tight < (1u << d); ++tight) {
      std::uint32_t branchable = 0;
      for (std::uint32_t b = 0; b < d; ++b) {
        if ((tight & (1u << b)) && !p.incoming[b].resetting) branchable |= 1u << b;
      }
      // Iterate the subsets of `branchable` in increasing order.
      std::uint32_t sub = 0;
      while (true) {
        p.choices.push_back({tight, sub});
        if (sub == branchable) break;
        sub = (sub - branchable) & branchable;
      }
    }
    patterns.push_back(std::move(p));
  }
  return patterns;
}

std::string label_var(const std::string& node) { return "n:" + node; }
std::string flow_var(const std::string& edge) { return "e:" + edge; }

// Interval propagation over the guessed system; returns false when some label
// interval becomes empty, i.e. the guess is infeasible. Sound: every rule is
// implied by the guess constraints together with 0 <= x_e <= u0.
bool propagate_intervals(const NtfInstance& inst, const std::vector<NodePattern>& patterns,
                         const std::vector<std::size_t>& choice) {
  const Network& net = inst.network;
  std::map<std::string, Rational> lo;
  std::map<std::string, std::optional<Rational>> hi;
  for (const auto& node : net.nodes()) {
    lo[node] = 0;
    hi[node] = std::nullopt;
  }
  lo[net.source()] = 1;
  hi[net.source()] = Rational(1);

  bool changed = true;
  for (std::size_t pass = 0; changed && pass < 2 * net.nodes().size() + 2; ++pass) {
    changed = false;
    auto tighten_hi = [&](const std::string& node, const Rational& bound) {
      auto& h = hi[node];
      if (!h || bound < *h) {
        h = bound;
        changed = true;
      }
    };
    auto raise_lo = [&](const std::string& node, const Rational& bound) {
      auto& l = lo[node];
      if (bound > l) {
        l = bound;
        changed = true;
      }
    };
    for (std::size_t k = 0; k < patterns.size(); ++k) {
      const NodePattern& p = patterns[k];
      const NodeChoice& c = p.choices[choice[k]];
      for (std::size_t b = 0; b < p.incoming.size(); ++b) {
        const IncomingEdge& e = p.incoming[b];
        const bool tight = c.tight & (1u << b);
        const Rational flow_cap = inst.inflow_value / e.capacity;  // x_e/nu_e <= u0/nu_e
        if (!tight) {
          if (e.resetting) {
            tighten_hi(p.node, Rational(0));
          } else {
            if (hi[e.tail]) tighten_hi(p.node, *hi[e.tail]);
            raise_lo(e.tail, lo[p.node]);
          }
          continue;
        }
        if (e.resetting || (c.branch & (1u << b))) {
          tighten_hi(p.node, flow_cap);
          if (!e.resetting) tighten_hi(e.tail, flow_cap);
        } else {
          if (hi[e.tail]) tighten_hi(p.node, *hi[e.tail]);
          if (hi[p.node]) tighten_hi(e.tail, *hi[p.node]);
          raise_lo(p.node, lo[e.tail]);
          raise_lo(e.tail, lo[p.node]);
        }
      }
    }
    for (const auto& node : net.nodes()) {
      if (hi[node] && lo[node] > *hi[node]) return false;
    }
  }
  return true;
}

LinearProgram build_guess_lp(const NtfInstance& inst, const std::vector<NodePattern>& patterns,
                             const std::vector<std::size_t>& choice) {
  const Network& net = inst.network;
  LinearProgram lp;
  std::set<std::string> tight_edges;
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    const NodePattern& p = patterns[k];
    const NodeChoice& c = p.choices[choice[k]];
    for (std::size_t b = 0; b < p.incoming.size(); ++b) {
      if (c.tight & (1u << b)) tight_edges.insert(p.incoming[b].id);
    }
  }
  for (const auto& node : net.nodes()) {
    lp.variables.push_back(label_var(node));
    lp.objective[label_var(node)] = 1;
  }
  for (const auto& eid : tight_edges) lp.variables.push_back(flow_var(eid));
  for (const auto& v : lp.variables) lp.nonneg.insert(v);

  lp.constraints.push_back({{{label_var(net.source()), Rational(1)}}, Relation::Equal, Rational(1)});

  for (const auto& node : net.nodes()) {
    if (node == net.sink()) continue;
    LinearProgram::Constraint con;
    con.relation = Relation::Equal;
    con.rhs = node == net.source() ? inst.inflow_value : Rational(0);
    for (const auto& eid : net.out_edges(node)) {
      if (tight_edges.count(eid)) con.coeffs[flow_var(eid)] += 1;
    }
    for (const auto& eid : net.in_edges(node)) {
      if (tight_edges.count(eid)) con.coeffs[flow_var(eid)] -= 1;
    }
    lp.constraints.push_back(std::move(con));
  }

  for (std::size_t k = 0; k < patterns.size(); ++k) {
    const NodePattern& p = patterns[k];
    const NodeChoice& c = p.choices[choice[k]];
    const std::string lw = label_var(p.node);
    for (std::size_t b = 0; b < p.incoming.size(); ++b) {
      const IncomingEdge& e = p.incoming[b];
      const std::string lv = label_var(e.tail);
      const Rational inv_cap = 1 / e.capacity;
      const bool tight = c.tight & (1u << b);
      if (!tight) {
        if (e.resetting) {
          lp.constraints.push_back({{{lw, Rational(1)}}, Relation::LessEq, Rational(0)});
        } else {
          lp.constraints.push_back(
              {{{lw, Rational(1)}, {lv, Rational(-1)}}, Relation::LessEq, Rational(0)});
        }
        continue;
      }
      const std::string xe = flow_var(e.id);
      if (e.resetting) {
        lp.constraints.push_back(
            {{{lw, Rational(1)}, {xe, -inv_cap}}, Relation::Equal, Rational(0)});
      } else if (c.branch & (1u << b)) {
        lp.constraints.push_back(
            {{{lw, Rational(1)}, {xe, -inv_cap}}, Relation::Equal, Rational(0)});
        lp.constraints.push_back(
            {{{xe, inv_cap}, {lv, Rational(-1)}}, Relation::GreaterEq, Rational(0)});
      } else {
        lp.constraints.push_back(
            {{{lw, Rational(1)}, {lv, Rational(-1)}}, Relation::Equal, Rational(0)});
        lp.constraints.push_back(
            {{{lv, Rational(1)}, {xe, -inv_cap}}, Relation::GreaterEq, Rational(0)});
      }
    }
  }
  return lp;
}

NtfSolution solution_from_assignment(const NtfInstance& inst,
                                     const std::map<std::string, Rational>& assignment) {
  NtfSolution sol;
  for (const auto& node : inst.network.nodes()) {
    sol.labels[node] = assignment.at(label_var(node));
  }
  for (const auto& e : inst.network.edges()) {
    auto it = assignment.find(flow_var(e.id));
    sol.flow[e.id] = it == assignment.end() ? Rational(0) : it->second;
  }
  return sol;
}

// Runs `visit` on every certified guess in lexicographic order until it
// returns true; reports whether any guess certified.
bool for_each_certified(const NtfInstance& inst,
                        const std::function<bool(const NtfSolution&)>& visit) {
  const std::vector<NodePattern> patterns = build_patterns(inst);
  std::vector<std::size_t> choice(patterns.size(), 0);
  while (true) {
    if (propagate_intervals(inst, patterns, choice)) {
      const LinearProgram lp = build_guess_lp(inst, patterns, choice);
      const LpOutcome outcome = solve(lp);
      if (outcome.status == LpStatus::Optimal) {
        const NtfSolution sol = solution_from_assignment(inst, outcome.assignment);
        if (certify_ntf(inst, sol).valid && visit(sol)) return true;
      }
    }
    // Odometer increment, last node fastest.
    std::size_t k = patterns.size();
    while (k > 0) {
      --k;
      if (++choice[k] < patterns[k].choices.size()) break;
      choice[k] = 0;
      if (k == 0) return false;
    }
    if (patterns.empty()) return false;
  }
}

}  // namespace

NtfSolution solve_ntf(const NtfInstance& inst) {
  inst.validate();
  if (inst.inflow_value == 0) {
    // K(E', 0) = {0}: no search needed.
    NtfSolution sol;
    for (const auto& e : inst.network.edges()) sol.flow[e.id] = 0;
    sol.labels = ntf_labels(inst, sol.flow);
    const auto cert = certify_ntf(inst, sol);
    if (!cert.valid) throw std::logic_error("zero thin flow failed certification: " + cert.violations.front());
    return sol;
  }
  NtfSolution found;
  const bool ok = for_each_certified(inst, [&](const NtfSolution& sol) {
    found = sol;
    return true;
  });
  if (!ok) {
    throw std::logic_error("thin-flow search exhausted all guesses without a certified solution");
  }
  return found;
}

std::set<std::map<std::string, Rational>> enumerate_ntf_labels(const NtfInstance& inst,
                                                               std::size_t edge_cap) {
  inst.validate();
  if (inst.sets.active.size() > edge_cap) {
    throw std::invalid_argument("enumerate_ntf_labels: active set exceeds the edge cap");
  }
  std::set<std::map<std::string, Rational>> labels;
  for_each_certified(inst, [&](const NtfSolution& sol) {
    labels.insert(sol.labels);
    return false;
  });
  return labels;
}

}  // namespace flowtime
