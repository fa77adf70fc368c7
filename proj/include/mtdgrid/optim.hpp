#ifndef MTDGRID_OPTIM_HPP
#define MTDGRID_OPTIM_HPP

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace mtdgrid::optim {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
// Smallest pivot magnitude and reduced cost the simplex acts on.
inline constexpr double kPivotTolerance = 1e-9;
// Constraint violation and objective comparisons.
inline constexpr double kFeasibilityTolerance = 1e-6;

enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Sense { kMinimize, kMaximize };
enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::kLessEqual;
  double bound = 0.0;
};

// maximize objective . x  subject to constraints and lower <= x <= upper.
// Empty bound vectors mean [0, +inf) for every variable.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_variables() const { return objective.size(); }
};

// Every variable is restricted to {0, 1}.
struct BinaryProgram {
  Sense sense = Sense::kMinimize;
  std::vector<double> objective;
  std::vector<Constraint> constraints;

  std::size_t num_variables() const { return objective.size(); }
};

struct Solution {
  Status status = Status::kInfeasible;
  std::vector<double> assignment;
  double objective_value = 0.0;

  bool optimal() const { return status == Status::kOptimal; }
  friend bool operator==(const Solution&, const Solution&) = default;
};

// Primal two-phase simplex with Bland's rule. Throws ArgumentError on
// non-finite coefficients, mismatched widths or lo > hi.
Solution solve_lp(const LinearProgram& p);

struct BilpOptions {
  // Only accept solutions whose objective is no worse than this value
  // (<= for minimization, >= for maximization). Status is kInfeasible when
  // no such solution exists.
  std::optional<double> cutoff;
  // 0 = unlimited. Exceeding the limit throws SolverError.
  std::size_t max_nodes = 0;
};

struct BilpStats {
  std::size_t nodes = 0;
  std::size_t lp_solves = 0;
};

// Depth-first branch and bound over LP relaxations. Branches on the most
// fractional variable (lowest index on ties), exploring the nearer rounding
// first.
Solution solve_bilp(const BinaryProgram& p, const BilpOptions& options = {},
                    BilpStats* stats = nullptr);

// LP relaxation of `p` with every variable in [0, 1], as a maximization.
LinearProgram relaxation(const BinaryProgram& p);

// True when `x` satisfies every constraint within kFeasibilityTolerance.
bool satisfies(std::span<const Constraint> constraints,
               std::span<const double> x);

// CPLEX-LP style text, for cross-checking with external solvers.
void write_lp(const LinearProgram& p, std::ostream& out);
void write_lp(const BinaryProgram& p, std::ostream& out);

}  // namespace mtdgrid::optim

#endif  // MTDGRID_OPTIM_HPP
