#include "flowtime/simplex.hpp"

#include "flowtime/generator.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace flowtime;
using namespace testsupport;

namespace {

LinearProgram::Constraint row(std::map<std::string, Rational> coeffs, Relation rel, Rational rhs) {
  return {std::move(coeffs), rel, std::move(rhs)};
}

bool satisfies(const LinearProgram& lp, const std::map<std::string, Rational>& point) {
  for (const auto& con : lp.constraints) {
    Rational lhs(0);
    for (const auto& [name, coeff] : con.coeffs) lhs += coeff * point.at(name);
    switch (con.relation) {
      case Relation::LessEq:
        if (!(lhs <= con.rhs)) return false;
        break;
      case Relation::Equal:
        if (lhs != con.rhs) return false;
        break;
      case Relation::GreaterEq:
        if (!(lhs >= con.rhs)) return false;
        break;
    }
  }
  for (const auto& name : lp.nonneg) {
    if (point.at(name) < 0) return false;
  }
  return true;
}

Rational objective_value(const LinearProgram& lp, const std::map<std::string, Rational>& point) {
  Rational value(0);
  for (const auto& [name, coeff] : lp.objective) value += coeff * point.at(name);
  return value;
}

// Random box-bounded program with <= rows and nonnegative variables.
LinearProgram random_bounded_lp(Rng& rng, std::size_t vars, std::size_t rows) {
  LinearProgram lp;
  for (std::size_t v = 0; v < vars; ++v) {
    const std::string name = "x" + std::to_string(v);
    lp.variables.push_back(name);
    lp.nonneg.insert(name);
    lp.objective[name] = random_rational(rng, 3);
    lp.constraints.push_back(row({{name, Q("1")}}, Relation::LessEq, Rational(1 + static_cast<long>(rng.below(5)))));
  }
  for (std::size_t r = 0; r < rows; ++r) {
    std::map<std::string, Rational> coeffs;
    for (const auto& name : lp.variables) {
      if (rng.below(3) != 0) coeffs[name] = random_rational(rng, 2);
    }
    if (coeffs.empty()) continue;
    lp.constraints.push_back(row(std::move(coeffs), Relation::LessEq, Rational(static_cast<long>(rng.below(9)))));
  }
  return lp;
}

// The mechanical dual of max{c x : A x <= b, x >= 0}.
LinearProgram dual_of(const LinearProgram& primal) {
  LinearProgram dual;
  for (std::size_t i = 0; i < primal.constraints.size(); ++i) {
    const std::string name = "y" + std::to_string(i);
    dual.variables.push_back(name);
    dual.nonneg.insert(name);
    dual.objective[name] = -primal.constraints[i].rhs;  // minimize b*y as maximize -b*y
  }
  for (const auto& var : primal.variables) {
    std::map<std::string, Rational> coeffs;
    for (std::size_t i = 0; i < primal.constraints.size(); ++i) {
      const auto it = primal.constraints[i].coeffs.find(var);
      if (it != primal.constraints[i].coeffs.end()) coeffs["y" + std::to_string(i)] = it->second;
    }
    Rational c(0);
    if (auto it = primal.objective.find(var); it != primal.objective.end()) c = it->second;
    dual.constraints.push_back(row(std::move(coeffs), Relation::GreaterEq, c));
  }
  return dual;
}

}  // namespace

TEST_CASE("textbook instances") {
  LinearProgram lp;
  lp.variables = {"x"};
  lp.nonneg = {"x"};
  lp.objective["x"] = 1;
  lp.constraints.push_back(row({{"x", Q("1")}}, Relation::LessEq, Q("1")));
  const LpOutcome bounded = solve(lp);
  CHECK(bounded.status == LpStatus::Optimal);
  CHECK(bounded.value == 1);
  CHECK(bounded.assignment.at("x") == 1);

  lp.constraints[0].rhs = Q("-1");
  CHECK(solve(lp).status == LpStatus::Infeasible);

  LinearProgram two;
  two.variables = {"x", "y"};
  two.nonneg = {"x", "y"};
  two.objective = {{"x", Q("1")}, {"y", Q("1")}};
  two.constraints.push_back(row({{"x", Q("1")}, {"y", Q("1")}}, Relation::LessEq, Q("2")));
  two.constraints.push_back(row({{"x", Q("1")}}, Relation::LessEq, Q("1")));
  const LpOutcome out = solve(two);
  CHECK(out.status == LpStatus::Optimal);
  CHECK(out.value == 2);
  CHECK(satisfies(two, out.assignment));
}

TEST_CASE("unbounded detection") {
  LinearProgram lp;
  lp.variables = {"x"};
  lp.nonneg = {"x"};
  lp.objective["x"] = 1;
  CHECK(solve(lp).status == LpStatus::Unbounded);

  // Free variable pushed down without bound.
  LinearProgram open;
  open.variables = {"z"};
  open.objective["z"] = -1;
  open.constraints.push_back(row({{"z", Q("1")}}, Relation::LessEq, Q("5")));
  CHECK(solve(open).status == LpStatus::Unbounded);
}

TEST_CASE("equalities and free variables") {
  LinearProgram lp;
  lp.variables = {"x", "y"};
  lp.nonneg = {"y"};
  lp.objective = {{"x", Q("2")}, {"y", Q("-1")}};
  lp.constraints.push_back(row({{"x", Q("1")}, {"y", Q("1")}}, Relation::Equal, Q("3")));
  lp.constraints.push_back(row({{"x", Q("1")}}, Relation::LessEq, Q("1")));
  const LpOutcome out = solve(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.assignment.at("x") == 1);
  CHECK(out.assignment.at("y") == 2);
  CHECK(out.value == 0);
}

TEST_CASE("malformed programs are rejected") {
  LinearProgram lp;
  lp.variables = {"x", "x"};
  CHECK_THROWS_AS(solve(lp), std::invalid_argument);

  LinearProgram unknown;
  unknown.variables = {"x"};
  unknown.constraints.push_back(row({{"ghost", Q("1")}}, Relation::LessEq, Q("1")));
  CHECK_THROWS_AS(solve(unknown), std::invalid_argument);
}

TEST_CASE("optimal assignments satisfy every constraint exactly") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(500 + seed);
    const LinearProgram lp = random_bounded_lp(rng, 2 + rng.below(3), 1 + rng.below(4));
    const LpOutcome out = solve(lp);
    REQUIRE(out.status == LpStatus::Optimal);  // box-bounded and 0 feasible
    CHECK(satisfies(lp, out.assignment));
    CHECK(objective_value(lp, out.assignment) == out.value);
  }
}

TEST_CASE("no sampled feasible point beats the optimum") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(600 + seed);
    const LinearProgram lp = random_bounded_lp(rng, 2 + rng.below(2), 1 + rng.below(3));
    const LpOutcome out = solve(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    for (int sample = 0; sample < 200; ++sample) {
      std::map<std::string, Rational> point;
      for (const auto& name : lp.variables) point[name] = Rational(static_cast<long>(rng.below(21)), 4);
      if (satisfies(lp, point)) CHECK(objective_value(lp, point) <= out.value);
    }
  }
}

TEST_CASE("strong duality on box-bounded programs") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(700 + seed);
    const LinearProgram primal = random_bounded_lp(rng, 2 + rng.below(3), 1 + rng.below(3));
    const LpOutcome p = solve(primal);
    REQUIRE(p.status == LpStatus::Optimal);
    const LpOutcome d = solve(dual_of(primal));
    REQUIRE(d.status == LpStatus::Optimal);
    CHECK(p.value == -d.value);
  }
}

TEST_CASE("degenerate vertices do not cycle") {
  // Many redundant constraints meet at the optimum; Bland's rule must leave.
  LinearProgram lp;
  lp.variables = {"x", "y"};
  lp.nonneg = {"x", "y"};
  lp.objective = {{"x", Q("1")}, {"y", Q("1")}};
  for (int k = 1; k <= 6; ++k) {
    lp.constraints.push_back(row({{"x", Rational(k)}, {"y", Rational(k)}}, Relation::LessEq, Rational(2 * k)));
  }
  const LpOutcome out = solve(lp);
  CHECK(out.status == LpStatus::Optimal);
  CHECK(out.value == 2);
}
