#include "flowtime/simplex.hpp"

#include <algorithm>
#include <stdexcept>

namespace flowtime {

namespace {

struct Tableau {
  // rows[i] holds the constraint coefficients followed by the rhs.
  std::vector<std::vector<Rational>> rows;
  std::vector<std::size_t> basis;  // basic column per row
  std::size_t cols = 0;            // coefficient columns (rhs excluded)

  Rational& at(std::size_t i, std::size_t j) { return rows[i][j]; }
  Rational& rhs(std::size_t i) { return rows[i][cols]; }

  void pivot(std::size_t r, std::size_t c, std::vector<Rational>& reduced, Rational& objective) {
    auto& prow = rows[r];
    const Rational inv = 1 / prow[c];
    for (auto& v : prow) v *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r) continue;
      const Rational factor = rows[i][c];
      if (factor == 0) continue;
      auto& row = rows[i];
      for (std::size_t j = 0; j <= cols; ++j) {
        if (prow[j] != 0) row[j] -= factor * prow[j];
      }
    }
    const Rational rfactor = reduced[c];
    if (rfactor != 0) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (prow[j] != 0) reduced[j] -= rfactor * prow[j];
      }
      objective += rfactor * rhs(r);
    }
    basis[r] = c;
  }

  enum class Step { Pivoted, Optimal, Unbounded };

  // One Bland's-rule step restricted to the first `allowed_cols` columns.
  Step step(std::vector<Rational>& reduced, Rational& objective, std::size_t allowed_cols) {
    std::size_t entering = cols;
    for (std::size_t j = 0; j < allowed_cols; ++j) {
      if (reduced[j] > 0) {
        entering = j;
        break;
      }
    }
    if (entering == cols) return Step::Optimal;
    std::size_t leaving = rows.size();
    Rational best;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i][entering] <= 0) continue;
      const Rational ratio = rhs(i) / rows[i][entering];
      if (leaving == rows.size() || ratio < best ||
          (ratio == best && basis[i] < basis[leaving])) {
        leaving = i;
        best = ratio;
      }
    }
    if (leaving == rows.size()) return Step::Unbounded;
    pivot(leaving, entering, reduced, objective);
    return Step::Pivoted;
  }
};

}  // namespace

LpOutcome solve(const LinearProgram& lp) {
  // Column layout: one column per nonnegative variable, two (positive and
  // negative part) per free variable; then slack/surplus columns; artificial
  // columns last.
  std::map<std::string, std::size_t> var_pos;
  for (std::size_t i = 0; i < lp.variables.size(); ++i) {
    if (!var_pos.emplace(lp.variables[i], i).second) {
      throw std::invalid_argument("duplicate variable: " + lp.variables[i]);
    }
  }
  for (const auto& [name, coeff] : lp.objective) {
    if (!var_pos.count(name)) throw std::invalid_argument("objective names unknown variable: " + name);
  }
  for (const auto& con : lp.constraints) {
    for (const auto& [name, coeff] : con.coeffs) {
      if (!var_pos.count(name)) throw std::invalid_argument("constraint names unknown variable: " + name);
    }
  }

  std::vector<std::size_t> pos_col(lp.variables.size());
  std::vector<std::size_t> neg_col(lp.variables.size(), static_cast<std::size_t>(-1));
  std::size_t ncols = 0;
  for (std::size_t i = 0; i < lp.variables.size(); ++i) {
    pos_col[i] = ncols++;
    if (!lp.nonneg.count(lp.variables[i])) neg_col[i] = ncols++;
  }
  const std::size_t structural_cols = ncols;

  const std::size_t m = lp.constraints.size();
  std::size_t slack_count = 0;
  for (const auto& con : lp.constraints) {
    if (con.relation != Relation::Equal) ++slack_count;
  }
  // Worst case every row also needs an artificial.
  const std::size_t total_cols = structural_cols + slack_count + m;

  Tableau tab;
  tab.cols = total_cols;
  tab.rows.assign(m, std::vector<Rational>(total_cols + 1, Rational(0)));
  tab.basis.assign(m, 0);

  std::vector<bool> artificial_col(total_cols, false);
  std::size_t next_slack = structural_cols;
  std::size_t next_artificial = structural_cols + slack_count;

  for (std::size_t i = 0; i < m; ++i) {
    const auto& con = lp.constraints[i];
    auto& row = tab.rows[i];
    for (const auto& [name, coeff] : con.coeffs) {
      const std::size_t v = var_pos[name];
      row[pos_col[v]] += coeff;
      if (neg_col[v] != static_cast<std::size_t>(-1)) row[neg_col[v]] -= coeff;
    }
    row[total_cols] = con.rhs;
    Relation rel = con.relation;
    if (row[total_cols] < 0) {
      for (auto& v : row) v = -v;
      if (rel == Relation::LessEq) rel = Relation::GreaterEq;
      else if (rel == Relation::GreaterEq) rel = Relation::LessEq;
    }
    if (rel == Relation::LessEq) {
      row[next_slack] = 1;
      tab.basis[i] = next_slack++;
    } else {
      if (rel == Relation::GreaterEq) row[next_slack++] = -1;
      row[next_artificial] = 1;
      artificial_col[next_artificial] = true;
      tab.basis[i] = next_artificial++;
    }
  }

  // Phase 1: maximize minus the sum of artificials.
  std::vector<Rational> reduced(total_cols, Rational(0));
  Rational objective(0);
  for (std::size_t i = 0; i < m; ++i) {
    if (!artificial_col[tab.basis[i]]) continue;
    objective -= tab.rhs(i);
    for (std::size_t j = 0; j < total_cols; ++j) reduced[j] += tab.rows[i][j];
  }
  for (std::size_t j = 0; j < total_cols; ++j) {
    if (artificial_col[j]) reduced[j] -= 1;
  }
  Tableau::Step step;
  while ((step = tab.step(reduced, objective, total_cols)) == Tableau::Step::Pivoted) {
  }
  if (step == Tableau::Step::Unbounded) {
    // Cannot occur: the phase-1 objective is bounded above by zero.
    throw std::logic_error("phase-1 simplex reported unbounded");
  }
  if (objective != 0) return LpOutcome{LpStatus::Infeasible, Rational(0), {}};

  // Drive leftover artificials out of the basis; drop redundant rows.
  for (std::size_t i = tab.rows.size(); i-- > 0;) {
    if (!artificial_col[tab.basis[i]]) continue;
    std::size_t c = total_cols;
    for (std::size_t j = 0; j < total_cols; ++j) {
      if (!artificial_col[j] && tab.rows[i][j] != 0) {
        c = j;
        break;
      }
    }
    if (c == total_cols) {
      tab.rows.erase(tab.rows.begin() + static_cast<std::ptrdiff_t>(i));
      tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      Rational ignored(0);
      std::vector<Rational> no_costs(total_cols, Rational(0));
      tab.pivot(i, c, no_costs, ignored);
    }
  }

  // Phase 2: the real objective over the non-artificial columns.
  std::vector<Rational> costs(total_cols, Rational(0));
  for (const auto& [name, coeff] : lp.objective) {
    const std::size_t v = var_pos[name];
    costs[pos_col[v]] += coeff;
    if (neg_col[v] != static_cast<std::size_t>(-1)) costs[neg_col[v]] -= coeff;
  }
  reduced = costs;
  objective = 0;
  for (std::size_t i = 0; i < tab.rows.size(); ++i) {
    const Rational cb = costs[tab.basis[i]];
    if (cb == 0) continue;
    objective += cb * tab.rhs(i);
    for (std::size_t j = 0; j < total_cols; ++j) reduced[j] -= cb * tab.rows[i][j];
  }
  const std::size_t phase2_cols = structural_cols + slack_count;  // artificials stay out
  while ((step = tab.step(reduced, objective, phase2_cols)) == Tableau::Step::Pivoted) {
  }
  if (step == Tableau::Step::Unbounded) return LpOutcome{LpStatus::Unbounded, Rational(0), {}};

  std::vector<Rational> col_value(total_cols, Rational(0));
  for (std::size_t i = 0; i < tab.rows.size(); ++i) col_value[tab.basis[i]] = tab.rhs(i);
  LpOutcome out;
  out.status = LpStatus::Optimal;
  out.value = objective;
  for (std::size_t v = 0; v < lp.variables.size(); ++v) {
    Rational value = col_value[pos_col[v]];
    if (neg_col[v] != static_cast<std::size_t>(-1)) value -= col_value[neg_col[v]];
    out.assignment[lp.variables[v]] = value;
  }
  return out;
}

}  // namespace flowtime
