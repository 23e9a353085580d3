#include "flowtime/network.hpp"

#include "flowtime/generator.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace flowtime;
using namespace testsupport;

TEST_CASE("the bottleneck example network validates cleanly") {
  CHECK(validate(fig1_network()).empty());
}

TEST_CASE("validation diagnostics name the offender") {
  const Network unreachable({"s", "t", "x"}, {{"a", "s", "t", Q("1"), Q("1")}}, "s", "t");
  const auto v1 = validate(unreachable);
  REQUIRE(v1.size() == 1);
  CHECK(v1[0].find("x") != std::string::npos);

  // Two-node cycle of zero latency.
  const Network cyclic({"s", "t"},
                       {{"a", "s", "t", Q("1"), Q("0")}, {"b", "t", "s", Q("1"), Q("0")}}, "s", "t");
  const auto v2 = validate(cyclic);
  REQUIRE(v2.size() == 1);
  CHECK(v2[0].find("cycle") != std::string::npos);

  const Network loop({"s", "t"},
                     {{"a", "s", "t", Q("1"), Q("1")}, {"l", "t", "t", Q("1"), Q("1")}}, "s", "t");
  CHECK(!validate(loop).empty());
  CHECK_THROWS_AS(Network({"s"}, {}, "s", "missing"), std::invalid_argument);
}

TEST_CASE("free-flow labels") {
  const auto labels = free_flow_labels(fig1_network());
  CHECK(labels.at("s") == 0);
  CHECK(labels.at("r") == 1);
  CHECK(labels.at("t") == 2);

  CHECK(free_flow_labels(Network({"s"}, {}, "s", "s")).at("s") == 0);
  CHECK(free_flow_labels(parallel_network()).at("t") == 1);
}

TEST_CASE("free-flow labels satisfy the shortest-path recursion") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(300 + seed);
    const Network net = random_network(rng);
    const auto labels = free_flow_labels(net);
    const auto brute = brute_force_free_flow(net);
    for (const auto& [node, value] : brute) CHECK(labels.at(node) == value);
    CHECK(labels.size() == brute.size());
    // Bellman condition: every edge is relaxed.
    for (const auto& e : net.edges()) {
      CHECK(labels.at(e.head) <= labels.at(e.tail) + e.latency);
    }
  }
}

TEST_CASE("edge sets derived from labels") {
  const Network net = fig1_network();
  const EdgeSets at_start = derive_edge_sets(net, {{"s", Q("0")}, {"r", Q("1")}, {"t", Q("2")}});
  CHECK(at_start.active == std::set<std::string>{"a", "b"});
  CHECK(at_start.resetting.empty());

  const EdgeSets queued = derive_edge_sets(net, {{"s", Q("1")}, {"r", Q("3")}, {"t", Q("4")}});
  CHECK(queued.active == std::set<std::string>{"a", "b"});
  CHECK(queued.resetting == std::set<std::string>{"a"});

  CHECK(derive_edge_sets(net, free_flow_labels(net)).resetting.empty());
  CHECK_THROWS_AS(derive_edge_sets(net, {{"s", Q("0")}}), std::invalid_argument);
}

TEST_CASE("resetting edges are always active") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(400 + seed);
    const Network net = random_network(rng);
    std::map<std::string, Rational> labels;
    for (const auto& node : net.nodes()) labels[node] = random_rational(rng, 6);
    const EdgeSets sets = derive_edge_sets(net, labels);
    for (const auto& eid : sets.resetting) CHECK(sets.active.count(eid) == 1);
  }
}

TEST_CASE("topological order puts every edge forward") {
  const Network net = fig1_network();
  CHECK(topological_order(net, {"a", "b"}) == std::vector<std::string>{"s", "r", "t"});
  CHECK(topological_order(net, {}).front() == "s");

  const Network diamond({"s", "a", "b", "t"},
                        {{"e1", "s", "a", Q("1"), Q("1")},
                         {"e2", "s", "b", Q("1"), Q("1")},
                         {"e3", "a", "t", Q("1"), Q("1")},
                         {"e4", "b", "t", Q("1"), Q("1")}},
                        "s", "t");
  const auto order = topological_order(diamond, {"e1", "e2", "e3", "e4"});
  const auto position = [&](const std::string& n) {
    return std::find(order.begin(), order.end(), n) - order.begin();
  };
  for (const auto& e : diamond.edges()) CHECK(position(e.tail) < position(e.head));

  const Network cyclic({"s", "t"},
                       {{"a", "s", "t", Q("1"), Q("1")}, {"b", "t", "s", Q("1"), Q("1")}}, "s", "t");
  CHECK_THROWS_WITH_AS(topological_order(cyclic, {"a", "b"}),
                       doctest::Contains("cycle"), std::invalid_argument);
}

TEST_CASE("edge set hypothesis diagnostics") {
  const Network net = fig1_network();
  CHECK(edge_sets_violation(net, {{"a", "b"}, {}}) == "");
  CHECK(edge_sets_violation(net, {{"b"}, {}}) != "");          // r unreachable
  CHECK(edge_sets_violation(net, {{"a", "b"}, {"c"}}) != "");  // resetting not active
}
