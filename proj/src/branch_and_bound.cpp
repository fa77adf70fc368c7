#include <cmath>
#include <cstdint>

#include "mtdgrid/errors.hpp"
#include "mtdgrid/optim.hpp"

namespace mtdgrid::optim {
namespace {

constexpr std::int8_t kFree = -1;

struct Node {
  std::vector<std::int8_t> fixed;
  // Relaxation bound inherited from the parent (minimization sense).
  double parent_bound;
};

bool integral_objective(const std::vector<double>& c) {
  for (double v : c) {
    if (v != std::round(v)) return false;
  }
  return true;
}

}  // namespace

LinearProgram relaxation(const BinaryProgram& p) {
  LinearProgram lp;
  lp.objective = p.objective;
  if (p.sense == Sense::kMinimize) {
    for (double& c : lp.objective) c = -c;
  }
  lp.constraints = p.constraints;
  lp.lower.assign(p.num_variables(), 0.0);
  lp.upper.assign(p.num_variables(), 1.0);
  return lp;
}

Solution solve_bilp(const BinaryProgram& p, const BilpOptions& options,
                    BilpStats* stats) {
  const std::size_t n = p.num_variables();
  for (const Constraint& c : p.constraints) {
    if (c.coefficients.size() != n) {
      throw ArgumentError("constraint width does not match variable count");
    }
    for (double v : c.coefficients) {
      if (!std::isfinite(v)) throw ArgumentError("non-finite constraint coefficient");
    }
    if (!std::isfinite(c.bound)) throw ArgumentError("non-finite constraint bound");
  }
  for (double v : p.objective) {
    if (!std::isfinite(v)) throw ArgumentError("non-finite objective coefficient");
  }
  if (options.cutoff && !std::isfinite(*options.cutoff)) {
    throw ArgumentError("non-finite cutoff");
  }

  // Everything below minimizes `cost`.
  const double sense = p.sense == Sense::kMinimize ? 1.0 : -1.0;
  std::vector<double> cost = p.objective;
  for (double& c : cost) c *= sense;
  const bool integral = integral_objective(cost);
  const std::optional<double> cutoff =
      options.cutoff ? std::optional<double>(*options.cutoff * sense) : std::nullopt;

  bool have_incumbent = false;
  double incumbent = 0.0;
  std::vector<double> best;

  // A node whose relaxation bound is `bound` may still contain an acceptable
  // solution.
  auto promising = [&](double bound) {
    if (integral) bound = std::ceil(bound - kFeasibilityTolerance);
    if (have_incumbent) {
      return integral ? bound < incumbent - 0.5
                      : bound < incumbent - kFeasibilityTolerance;
    }
    if (cutoff) return bound <= *cutoff + kFeasibilityTolerance;
    return true;
  };

  BilpStats local;
  std::vector<Node> stack;
  stack.push_back({std::vector<std::int8_t>(n, kFree), -kInfinity});
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (!promising(node.parent_bound)) continue;
    ++local.nodes;
    if (options.max_nodes && local.nodes > options.max_nodes) {
      throw SolverError("branch and bound node limit exceeded");
    }

    // Relaxation over the free variables only.
    std::vector<std::size_t> free_vars;
    double fixed_cost = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (node.fixed[j] == kFree) {
        free_vars.push_back(j);
      } else {
        fixed_cost += cost[j] * node.fixed[j];
      }
    }
    LinearProgram lp;
    lp.objective.reserve(free_vars.size());
    for (std::size_t j : free_vars) lp.objective.push_back(-cost[j]);
    lp.lower.assign(free_vars.size(), 0.0);
    lp.upper.assign(free_vars.size(), 1.0);
    bool dead = false;
    for (const Constraint& c : p.constraints) {
      Constraint row{std::vector<double>(free_vars.size(), 0.0), c.relation,
                     c.bound};
      bool any = false;
      for (std::size_t j = 0; j < n; ++j) {
        if (node.fixed[j] != kFree) row.bound -= c.coefficients[j] * node.fixed[j];
      }
      for (std::size_t k = 0; k < free_vars.size(); ++k) {
        row.coefficients[k] = c.coefficients[free_vars[k]];
        any = any || row.coefficients[k] != 0.0;
      }
      if (!any) {
        const double slack = row.bound;  // constraint reads 0 <rel> slack
        const bool ok =
            (c.relation == Relation::kLessEqual && slack >= -kFeasibilityTolerance) ||
            (c.relation == Relation::kGreaterEqual && slack <= kFeasibilityTolerance) ||
            (c.relation == Relation::kEqual && std::abs(slack) <= kFeasibilityTolerance);
        if (!ok) {
          dead = true;
          break;
        }
        continue;
      }
      lp.constraints.push_back(std::move(row));
    }
    if (dead) continue;

    ++local.lp_solves;
    const Solution relaxed = solve_lp(lp);
    if (relaxed.status == Status::kInfeasible) continue;
    if (relaxed.status == Status::kUnbounded) {
      throw SolverError("bounded relaxation reported unbounded");
    }
    const double bound = fixed_cost - relaxed.objective_value;
    if (!promising(bound)) continue;

    std::size_t branch_k = free_vars.size();
    double most = kFeasibilityTolerance;
    for (std::size_t k = 0; k < free_vars.size(); ++k) {
      const double v = relaxed.assignment[k];
      const double frac = std::abs(v - std::round(v));
      if (frac > most + 1e-12) {
        most = frac;
        branch_k = k;
      }
    }

    if (branch_k == free_vars.size()) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) {
        if (node.fixed[j] != kFree) x[j] = node.fixed[j];
      }
      for (std::size_t k = 0; k < free_vars.size(); ++k) {
        x[free_vars[k]] = std::round(relaxed.assignment[k]) > 0.5 ? 1.0 : 0.0;
      }
      if (!satisfies(p.constraints, x)) {
        throw SolverError("rounded relaxation violates a constraint");
      }
      double value = 0.0;
      for (std::size_t j = 0; j < n; ++j) value += cost[j] * x[j];
      const bool accept =
          have_incumbent ? value < incumbent - kFeasibilityTolerance
                         : (!cutoff || value <= *cutoff + kFeasibilityTolerance);
      if (accept) {
        have_incumbent = true;
        incumbent = value;
        best = std::move(x);
      }
      continue;
    }

    const std::size_t var = free_vars[branch_k];
    const std::int8_t first = relaxed.assignment[branch_k] >= 0.5 ? 1 : 0;
    Node later{node.fixed, bound};
    later.fixed[var] = static_cast<std::int8_t>(1 - first);
    Node sooner{std::move(node.fixed), bound};
    sooner.fixed[var] = first;
    stack.push_back(std::move(later));
    stack.push_back(std::move(sooner));
  }

  if (stats) *stats = local;
  Solution sol;
  if (!have_incumbent) {
    sol.status = Status::kInfeasible;
    return sol;
  }
  sol.status = Status::kOptimal;
  sol.assignment = std::move(best);
  sol.objective_value = incumbent * sense + 0.0;
  return sol;
}

}  // namespace mtdgrid::optim
