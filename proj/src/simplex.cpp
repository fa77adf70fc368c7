#include <algorithm>
#include <cmath>
#include <ostream>

#include "mtdgrid/errors.hpp"
#include "mtdgrid/optim.hpp"

namespace mtdgrid::optim {
namespace {

// Dense simplex tableau over non-negative columns. Row r reads
// sum_j a[r][j] z_j = rhs[r] with column basis_[r] basic.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0), basis_(rows, -1) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const {
    return a_[r * (cols_ + 1) + c];
  }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<int>& basis() { return basis_; }
  const std::vector<int>& basis() const { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const std::size_t width = cols_ + 1;
    double* prow = &a_[pr * width];
    const double inv = 1.0 / prow[pc];
    for (std::size_t j = 0; j < width; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* row = &a_[r * width];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) {
        if (prow[j] != 0.0) {
          row[j] -= f * prow[j];
          if (std::abs(row[j]) < 1e-12) row[j] = 0.0;
        }
      }
      row[pc] = 0.0;
    }
    const double f = reduced_[pc];
    if (f != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (prow[j] != 0.0) reduced_[j] -= f * prow[j];
      }
      value_ += f * prow[cols_];
      reduced_[pc] = 0.0;
    }
    basis_[pr] = static_cast<int>(pc);
  }

  // Drops row r (redundant after phase 1).
  void erase_row(std::size_t r) {
    const std::size_t width = cols_ + 1;
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r * width),
             a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

  // Installs costs (maximize cost . z) and prices out the current basis.
  void set_objective(const std::vector<double>& cost) {
    reduced_ = cost;
    value_ = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= cb * at(r, j);
      value_ += cb * rhs(r);
    }
  }

  double value() const { return value_; }

  enum class Outcome { kOptimal, kUnbounded };

  // Bland's rule: lowest-index improving column enters; among tied ratios the
  // lowest-index basic column leaves.
  Outcome optimize(const std::vector<bool>& allowed) {
    const std::size_t limit = 100000 + 50 * (rows_ + cols_) * (rows_ + 1);
    for (std::size_t iter = 0; iter < limit; ++iter) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed[j] && reduced_[j] > kPivotTolerance) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return Outcome::kOptimal;

      std::size_t leave = rows_;
      double best = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double coef = at(r, enter);
        if (coef <= kPivotTolerance) continue;
        const double ratio = rhs(r) / coef;
        if (leave == rows_ || ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_) return Outcome::kUnbounded;
      pivot(leave, enter);
    }
    throw SolverError("simplex iteration limit exceeded");
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
  std::vector<int> basis_;
  std::vector<double> reduced_;
  double value_ = 0.0;
};

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw ArgumentError(std::string("non-finite ") + what);
  }
}

// Row over the shifted, non-negative variables.
struct StdRow {
  std::vector<double> coef;
  bool greater_equal = false;
  double rhs = 0.0;
};

}  // namespace

Solution solve_lp(const LinearProgram& p) {
  const std::size_t n = p.num_variables();
  std::vector<double> lower = p.lower.empty() ? std::vector<double>(n, 0.0) : p.lower;
  std::vector<double> upper = p.upper.empty() ? std::vector<double>(n, kInfinity) : p.upper;
  if (lower.size() != n || upper.size() != n) {
    throw ArgumentError("bound vectors must match the variable count");
  }
  for (double c : p.objective) check_finite(c, "objective coefficient");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] == kInfinity ||
        upper[j] == -kInfinity) {
      throw ArgumentError("invalid variable bound");
    }
    if (lower[j] > upper[j]) throw ArgumentError("lower bound exceeds upper bound");
  }
  for (const Constraint& c : p.constraints) {
    if (c.coefficients.size() != n) {
      throw ArgumentError("constraint width does not match variable count");
    }
    for (double v : c.coefficients) check_finite(v, "constraint coefficient");
    check_finite(c.bound, "constraint bound");
  }

  // x_j = offset_j + sum over its columns of sign * z_col, z >= 0.
  struct Column {
    std::size_t var;
    double sign;
  };
  std::vector<Column> columns;
  std::vector<double> offset(n, 0.0);
  std::vector<std::vector<std::size_t>> var_columns(n);
  std::vector<StdRow> rows;
  for (std::size_t j = 0; j < n; ++j) {
    const bool lo_finite = std::isfinite(lower[j]);
    const bool hi_finite = std::isfinite(upper[j]);
    if (lo_finite) {
      offset[j] = lower[j];
      var_columns[j].push_back(columns.size());
      columns.push_back({j, 1.0});
    } else if (hi_finite) {
      offset[j] = upper[j];
      var_columns[j].push_back(columns.size());
      columns.push_back({j, -1.0});
    } else {
      var_columns[j].push_back(columns.size());
      columns.push_back({j, 1.0});
      var_columns[j].push_back(columns.size());
      columns.push_back({j, -1.0});
    }
  }
  const std::size_t nz = columns.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(lower[j]) && std::isfinite(upper[j])) {
      StdRow row{std::vector<double>(nz, 0.0), false, upper[j] - lower[j]};
      row.coef[var_columns[j][0]] = 1.0;
      rows.push_back(std::move(row));
    }
  }
  for (const Constraint& c : p.constraints) {
    std::vector<double> coef(nz, 0.0);
    double rhs = c.bound;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = c.coefficients[j];
      if (a == 0.0) continue;
      rhs -= a * offset[j];
      for (std::size_t col : var_columns[j]) coef[col] = a * columns[col].sign;
    }
    if (c.relation != Relation::kGreaterEqual) rows.push_back({coef, false, rhs});
    if (c.relation != Relation::kLessEqual) rows.push_back({coef, true, rhs});
  }
  for (StdRow& row : rows) {
    if (row.rhs < 0.0) {
      for (double& v : row.coef) v = -v;
      row.rhs = -row.rhs;
      row.greater_equal = !row.greater_equal;
    }
  }

  // Columns: [z | one slack/surplus per row | artificials for >= rows].
  const std::size_t m = rows.size();
  std::size_t n_art = 0;
  for (const StdRow& row : rows) n_art += row.greater_equal ? 1 : 0;
  const std::size_t total = nz + m + n_art;
  Tableau tab(m, total);
  std::vector<bool> is_artificial(total, false);
  std::size_t next_art = nz + m;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < nz; ++j) tab.at(r, j) = rows[r].coef[j];
    tab.rhs(r) = rows[r].rhs;
    if (rows[r].greater_equal) {
      tab.at(r, nz + r) = -1.0;
      tab.at(r, next_art) = 1.0;
      is_artificial[next_art] = true;
      tab.basis()[r] = static_cast<int>(next_art++);
    } else {
      tab.at(r, nz + r) = 1.0;
      tab.basis()[r] = static_cast<int>(nz + r);
    }
  }

  Solution sol;
  if (n_art > 0) {
    std::vector<double> phase1(total, 0.0);
    for (std::size_t j = 0; j < total; ++j) {
      if (is_artificial[j]) phase1[j] = -1.0;
    }
    tab.set_objective(phase1);
    tab.optimize(std::vector<bool>(total, true));
    if (tab.value() < -kFeasibilityTolerance) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    // Pivot zero-level artificials out of the basis, dropping redundant rows.
    for (std::size_t r = 0; r < tab.rows();) {
      if (!is_artificial[tab.basis()[r]]) {
        ++r;
        continue;
      }
      std::size_t col = total;
      for (std::size_t j = 0; j < nz + m; ++j) {
        if (std::abs(tab.at(r, j)) > kPivotTolerance) {
          col = j;
          break;
        }
      }
      if (col == total) {
        tab.erase_row(r);
      } else {
        tab.pivot(r, col);
        ++r;
      }
    }
  }

  std::vector<double> cost(total, 0.0);
  for (std::size_t col = 0; col < nz; ++col) {
    cost[col] = p.objective[columns[col].var] * columns[col].sign;
  }
  std::vector<bool> allowed(total, true);
  for (std::size_t j = 0; j < total; ++j) allowed[j] = !is_artificial[j];
  tab.set_objective(cost);
  if (tab.optimize(allowed) == Tableau::Outcome::kUnbounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }

  std::vector<double> z(total, 0.0);
  for (std::size_t r = 0; r < tab.rows(); ++r) z[tab.basis()[r]] = tab.rhs(r);
  sol.status = Status::kOptimal;
  sol.assignment = offset;
  for (std::size_t col = 0; col < nz; ++col) {
    sol.assignment[columns[col].var] += columns[col].sign * z[col];
  }
  double value = 0.0;
  for (std::size_t j = 0; j < n; ++j) value += p.objective[j] * sol.assignment[j];
  sol.objective_value = value;
  return sol;
}

bool satisfies(std::span<const Constraint> constraints,
               std::span<const double> x) {
  for (const Constraint& c : constraints) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size() && j < c.coefficients.size(); ++j) {
      lhs += c.coefficients[j] * x[j];
    }
    switch (c.relation) {
      case Relation::kLessEqual:
        if (lhs > c.bound + kFeasibilityTolerance) return false;
        break;
      case Relation::kGreaterEqual:
        if (lhs < c.bound - kFeasibilityTolerance) return false;
        break;
      case Relation::kEqual:
        if (std::abs(lhs - c.bound) > kFeasibilityTolerance) return false;
        break;
    }
  }
  return true;
}

namespace {

void write_terms(std::ostream& out, const std::vector<double>& coef) {
  bool any = false;
  for (std::size_t j = 0; j < coef.size(); ++j) {
    if (coef[j] == 0.0) continue;
    out << (coef[j] < 0 ? " - " : (any ? " + " : " ")) << std::abs(coef[j])
        << " x" << j;
    any = true;
  }
  if (!any) out << " 0 x0";
}

void write_rows(std::ostream& out, const std::vector<Constraint>& rows) {
  out << "Subject To\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << " c" << i << ':';
    write_terms(out, rows[i].coefficients);
    switch (rows[i].relation) {
      case Relation::kLessEqual: out << " <= "; break;
      case Relation::kEqual: out << " = "; break;
      case Relation::kGreaterEqual: out << " >= "; break;
    }
    out << rows[i].bound << '\n';
  }
}

}  // namespace

void write_lp(const LinearProgram& p, std::ostream& out) {
  out << "Maximize\n obj:";
  write_terms(out, p.objective);
  out << '\n';
  write_rows(out, p.constraints);
  out << "Bounds\n";
  for (std::size_t j = 0; j < p.num_variables(); ++j) {
    const double lo = p.lower.empty() ? 0.0 : p.lower[j];
    const double hi = p.upper.empty() ? kInfinity : p.upper[j];
    out << ' ' << (std::isfinite(lo) ? std::to_string(lo) : "-inf") << " <= x"
        << j << " <= " << (std::isfinite(hi) ? std::to_string(hi) : "+inf")
        << '\n';
  }
  out << "End\n";
}

void write_lp(const BinaryProgram& p, std::ostream& out) {
  out << (p.sense == Sense::kMinimize ? "Minimize" : "Maximize") << "\n obj:";
  write_terms(out, p.objective);
  out << '\n';
  write_rows(out, p.constraints);
  out << "Binary\n";
  for (std::size_t j = 0; j < p.num_variables(); ++j) out << " x" << j << '\n';
  out << "End\n";
}

}  // namespace mtdgrid::optim
