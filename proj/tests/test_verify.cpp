#include "flowtime/verify.hpp"

#include "flowtime/generator.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace flowtime;
using namespace testsupport;

namespace {

EquilibriumTrajectory fig1_trajectory() {
  return solve_equilibrium(fig1_network(), fig1_inflow(), Q("5"));
}

StepFunction scale_step_value(const StepFunction& f, std::size_t index, const Rational& factor) {
  std::vector<Rational> values = f.values();
  values.at(index) *= factor;
  return StepFunction(f.value_before(), f.breakpoints(), values);
}

PiecewiseLinear shift_plw_value(const PiecewiseLinear& f, std::size_t index, const Rational& delta) {
  std::vector<Rational> ys = f.ys();
  ys.at(index) += delta;
  return PiecewiseLinear(f.xs(), ys, f.slope_before(), f.slope_after());
}

bool has_kind(const std::vector<Violation>& violations, const std::string& kind) {
  for (const auto& v : violations) {
    if (v.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("the bottleneck equilibrium verifies cleanly") {
  const EquilibriumTrajectory t = fig1_trajectory();
  CHECK(check_feasible(fig1_network(), t, fig1_inflow()).empty());
  CHECK(check_equilibrium(fig1_network(), t).empty());
  const CrossCheckReport report = cross_check(fig1_network(), fig1_inflow(), t);
  CHECK(report.ok);
}

TEST_CASE("a zero-inflow trajectory verifies trivially") {
  const StepFunction none;
  const EquilibriumTrajectory t = solve_equilibrium(fig1_network(), none, Q("5"));
  CHECK(check_feasible(fig1_network(), t, none).empty());
  CHECK(check_equilibrium(fig1_network(), t).empty());
  CHECK(cross_check(fig1_network(), none, t).ok);
}

TEST_CASE("capacity violations carry a recheckable witness") {
  EquilibriumTrajectory t = fig1_trajectory();
  t.edge_outflows.at("a") = scale_step_value(t.edge_outflows.at("a"), 0, Q("3"));
  const auto violations = check_feasible(fig1_network(), t, fig1_inflow());
  REQUIRE(has_kind(violations, "capacity"));
  for (const auto& v : violations) {
    if (v.kind == "capacity") {
      CHECK(v.element == "a");
      CHECK(v.lhs > v.rhs);  // the recorded inequality reproduces the claim
    }
  }
}

TEST_CASE("outflow before inflow breaks the non-deficit constraint") {
  EquilibriumTrajectory t = fig1_trajectory();
  // Edge b suddenly emits mass half a unit before anything arrived.
  t.edge_outflows.at("b") = StepFunction(Q("0"), {Q("1/2")}, {Q("1")});
  const auto violations = check_feasible(fig1_network(), t, fig1_inflow());
  CHECK(has_kind(violations, "non-deficit"));
}

TEST_CASE("conservation notices retained flow") {
  EquilibriumTrajectory t = fig1_trajectory();
  t.edge_inflows.at("b") = scale_step_value(t.edge_inflows.at("b"), 0, Q("1/2"));
  const auto violations = check_feasible(fig1_network(), t, fig1_inflow());
  REQUIRE(has_kind(violations, "conservation"));
  for (const auto& v : violations) {
    if (v.kind == "conservation") CHECK(v.element == "r");
  }
}

TEST_CASE("flow diverted to the slow edge is flagged as inactive inflow") {
  EquilibriumTrajectory t = fig1_trajectory();
  // Transplant edge b's flow onto the never-active parallel edge c.
  std::swap(t.edge_inflows.at("b"), t.edge_inflows.at("c"));
  std::swap(t.edge_outflows.at("b"), t.edge_outflows.at("c"));
  const auto violations = check_equilibrium(fig1_network(), t);
  CHECK(has_kind(violations, "inactive-inflow"));
}

TEST_CASE("label mutations break the recursion") {
  EquilibriumTrajectory t = fig1_trajectory();
  t.labels.at("r") = shift_plw_value(t.labels.at("r"), 1, Q("1/7"));
  const auto violations = check_equilibrium(fig1_network(), t);
  CHECK(!violations.empty());
  CHECK((has_kind(violations, "label-recursion") || has_kind(violations, "cumulative-mismatch") ||
         has_kind(violations, "capacity-operation")));
}

TEST_CASE("queue profile mutations are caught") {
  EquilibriumTrajectory t = fig1_trajectory();
  t.queues.at("a") = shift_plw_value(t.queues.at("a"), 1, Q("1"));
  const auto violations = check_equilibrium(fig1_network(), t);
  CHECK(has_kind(violations, "capacity-operation"));
}

TEST_CASE("loading results pass and mutations fail capacity operation") {
  Rng rng(1400);
  const Scenario sc = random_scenario(rng);
  const PathFlowSet pf = random_path_flows(rng, sc.network, sc.horizon);
  const LoadingResult result = load(sc.network, pf);
  CHECK(check_capacity_operation(sc.network, result).empty());

  // Doubling one queue value breaks the waiting-time identity.
  for (const auto& [eid, loading] : result.edges) {
    bool mutated = false;
    for (std::size_t i = 0; i < loading.queue.ys().size(); ++i) {
      if (loading.queue.ys()[i] != 0) {
        LoadingResult broken = result;
        broken.edges.at(eid).queue = shift_plw_value(loading.queue, i, loading.queue.ys()[i]);
        const auto violations = check_capacity_operation(sc.network, broken);
        CHECK(has_kind(violations, "capacity-operation"));
        mutated = true;
        break;
      }
    }
    if (mutated) break;
  }

  // An outflow pushed past the service rate breaks the capacity constraint.
  LoadingResult overdriven = result;
  auto& first = overdriven.edges.begin()->second;
  const Rational cap = sc.network.edge(overdriven.edges.begin()->first).capacity;
  first.outflow = StepFunction(Q("0"), {Q("0")}, {cap + 1});
  CHECK(has_kind(check_capacity_operation(sc.network, overdriven), "capacity"));
}

TEST_CASE("breakpoint-and-midpoint equality matches dense sampling") {
  // The checker compares piecewise-linear data at breakpoints and midpoints;
  // that must coincide with equality on a dense grid and with exact equality.
  Rng rng(1500);
  for (int trial = 0; trial < 60; ++trial) {
    const PiecewiseLinear f = random_plw(rng);
    PiecewiseLinear g = f;
    if (rng.below(2) == 0) {
      const std::size_t idx = rng.below(g.ys().size());
      g = shift_plw_value(g, idx, Rational(static_cast<long>(rng.below(3)), 7));
    }
    const bool exact_equal = f == g;
    const Rational lo = std::min(f.xs().front(), g.xs().front()) - 3;
    const Rational hi = std::max(f.xs().back(), g.xs().back()) + 3;
    const bool dense_equal = grid_equal(f, g, lo, hi, 1009);

    // Midpoint scheme over the merged grid.
    std::vector<Rational> grid = f.xs();
    grid.insert(grid.end(), g.xs().begin(), g.xs().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    bool midpoint_equal = f(grid.front() - 1) == g(grid.front() - 1) &&
                          f(grid.front() - 2) == g(grid.front() - 2) &&
                          f(grid.back() + 1) == g(grid.back() + 1) &&
                          f(grid.back() + 2) == g(grid.back() + 2);
    for (std::size_t i = 0; midpoint_equal && i < grid.size(); ++i) {
      if (f(grid[i]) != g(grid[i])) midpoint_equal = false;
      if (i + 1 < grid.size() && f((grid[i] + grid[i + 1]) / 2) != g((grid[i] + grid[i + 1]) / 2)) {
        midpoint_equal = false;
      }
    }
    CHECK(exact_equal == midpoint_equal);
    CHECK(midpoint_equal == dense_equal);
  }
}

TEST_CASE("cross-check detects tampered labels") {
  EquilibriumTrajectory t = fig1_trajectory();
  t.labels.at("t") = shift_plw_value(t.labels.at("t"), 1, Q("1/3"));
  const CrossCheckReport report = cross_check(fig1_network(), fig1_inflow(), t);
  CHECK(!report.ok);
  REQUIRE(report.mismatch);
  CHECK(report.mismatch->first == "t");
}

TEST_CASE("single local mutations always surface") {
  std::size_t tested = 0;
  for (std::uint64_t seed = 2000; tested < 12; ++seed) {
    Rng rng(seed);
    const Scenario sc = random_scenario(rng);
    const EquilibriumTrajectory t = solve_equilibrium(sc.network, sc.inflow, sc.horizon);

    // Pick the mutation kind per seed; skip scenarios without a mutable spot.
    EquilibriumTrajectory broken = t;
    bool mutated = false;
    if (seed % 2 == 0) {
      for (auto& [eid, fn] : broken.edge_inflows) {
        for (std::size_t i = 0; i < fn.values().size() && !mutated; ++i) {
          if (fn.values()[i] != 0) {
            fn = scale_step_value(fn, i, Q("2"));
            mutated = true;
          }
        }
        if (mutated) break;
      }
    } else {
      for (auto& [node, fn] : broken.labels) {
        if (node == sc.network.source()) continue;
        fn = shift_plw_value(fn, fn.ys().size() - 1, Q("2/9"));
        mutated = true;
        break;
      }
    }
    if (!mutated) continue;
    ++tested;
    auto violations = check_feasible(sc.network, broken, sc.inflow);
    const auto equilibrium = check_equilibrium(sc.network, broken);
    violations.insert(violations.end(), equilibrium.begin(), equilibrium.end());
    CAPTURE(seed);
    CHECK(!violations.empty());
  }
}
