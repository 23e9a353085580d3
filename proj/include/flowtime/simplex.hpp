#pragma once

#include "flowtime/rational.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace flowtime {

enum class Relation { LessEq, Equal, GreaterEq };

/// Maximization linear program over named variables. Variables listed in
/// `nonneg` are constrained >= 0, all others are free.
struct LinearProgram {
  struct Constraint {
    std::map<std::string, Rational> coeffs;
    Relation relation = Relation::LessEq;
    Rational rhs;
  };

  std::vector<std::string> variables;  // ordered, unique
  std::map<std::string, Rational> objective;
  std::vector<Constraint> constraints;
  std::set<std::string> nonneg;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Rational value;                             // when optimal
  std::map<std::string, Rational> assignment; // when optimal; a vertex solution
};

/// Exact two-phase simplex with Bland's pivot rule. Deterministic: the same
/// program always yields the same vertex. Throws std::invalid_argument on
/// malformed programs (unknown coefficient names, duplicate variables).
LpOutcome solve(const LinearProgram& lp);

}  // namespace flowtime
