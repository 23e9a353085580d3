#pragma once

#include "flowtime/generator.hpp"
#include "flowtime/network.hpp"
#include "flowtime/piecewise.hpp"
#include "flowtime/scenario.hpp"

#include <map>
#include <string>
#include <vector>

namespace testsupport {

using flowtime::Edge;
using flowtime::Network;
using flowtime::PiecewiseLinear;
using flowtime::Rational;
using flowtime::StepFunction;

inline Rational Q(const std::string& text) { return flowtime::parse_rational(text); }

// Three-node network with a bottleneck edge into a middle node and two
// parallel arcs to the sink, one of them too slow to ever be used.
inline Network fig1_network() {
  return Network({"s", "r", "t"},
                 {{"a", "s", "r", Q("1"), Q("1")},
                  {"b", "r", "t", Q("1"), Q("1")},
                  {"c", "r", "t", Q("1"), Q("2")}},
                 "s", "t");
}

// Pulse of rate 2 on [0,1), nothing on [1,2), then constant rate 1.
inline StepFunction fig1_inflow() {
  return StepFunction(Q("0"), {Q("0"), Q("1"), Q("2")}, {Q("2"), Q("0"), Q("1")});
}

// Two parallel source-sink edges with capacities 1 and 2.
inline Network parallel_network() {
  return Network({"s", "t"},
                 {{"e1", "s", "t", Q("1"), Q("1")}, {"e2", "s", "t", Q("2"), Q("1")}}, "s", "t");
}

// Pointwise equality of two functions on a dense rational grid.
template <typename F, typename G>
bool grid_equal(const F& f, const G& g, const Rational& lo, const Rational& hi, int steps = 997) {
  const Rational width = hi - lo;
  for (int i = 0; i <= steps; ++i) {
    const Rational x = lo + width * i / steps;
    if (f(x) != g(x)) return false;
  }
  return true;
}

inline Rational random_rational(flowtime::Rng& rng, long span = 12) {
  const long num = static_cast<long>(rng.below(static_cast<std::uint64_t>(2 * span * 6 + 1))) - span * 6;
  const long den = 1 + static_cast<long>(rng.below(6));
  return Rational(num, den);
}

inline StepFunction random_step(flowtime::Rng& rng, std::size_t max_pieces = 5) {
  const std::size_t n = rng.below(max_pieces + 1);
  std::vector<Rational> bps, vals;
  Rational x = random_rational(rng);
  for (std::size_t i = 0; i < n; ++i) {
    bps.push_back(x);
    vals.push_back(random_rational(rng));
    x += Q("1/3") + Rational(static_cast<long>(rng.below(5)), 2);
  }
  return StepFunction(random_rational(rng), std::move(bps), std::move(vals));
}

inline PiecewiseLinear random_plw(flowtime::Rng& rng, std::size_t max_kinks = 5) {
  const std::size_t n = 1 + rng.below(max_kinks);
  std::vector<Rational> xs, ys;
  Rational x = random_rational(rng);
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(x);
    ys.push_back(random_rational(rng));
    x += Q("1/2") + Rational(static_cast<long>(rng.below(5)), 2);
  }
  return PiecewiseLinear(std::move(xs), std::move(ys), random_rational(rng), random_rational(rng));
}

inline PiecewiseLinear random_monotone_plw(flowtime::Rng& rng, std::size_t max_kinks = 5) {
  const std::size_t n = 1 + rng.below(max_kinks);
  std::vector<Rational> xs, ys;
  Rational x = random_rational(rng);
  Rational y = random_rational(rng);
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(x);
    ys.push_back(y);
    x += Q("1/2") + Rational(static_cast<long>(rng.below(5)), 2);
    y += Rational(static_cast<long>(rng.below(7)), 3);
  }
  const Rational sb = Rational(static_cast<long>(rng.below(5)), 2);
  const Rational sa = Rational(static_cast<long>(rng.below(5)), 2);
  return PiecewiseLinear(std::move(xs), std::move(ys), sb, sa);
}

// Shortest source-to-node latency by enumerating every simple path.
inline std::map<std::string, Rational> brute_force_free_flow(const Network& net) {
  std::map<std::string, Rational> best;
  best[net.source()] = Q("0");
  std::vector<std::string> visited{net.source()};
  auto dfs = [&](auto&& self, const std::string& node, const Rational& cost) -> void {
    for (const auto& eid : net.out_edges(node)) {
      const Edge& e = net.edge(eid);
      bool seen = false;
      for (const auto& v : visited) {
        if (v == e.head) seen = true;
      }
      if (seen) continue;
      const Rational next = cost + e.latency;
      auto [it, inserted] = best.emplace(e.head, next);
      if (!inserted && next < it->second) it->second = next;
      visited.push_back(e.head);
      self(self, e.head, next);
      visited.pop_back();
    }
  };
  dfs(dfs, net.source(), Q("0"));
  return best;
}

}  // namespace testsupport
