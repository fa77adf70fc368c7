#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mtdgrid/errors.hpp"
#include "mtdgrid/mdcs.hpp"
#include "mtdgrid/optim.hpp"
#include "oracles.hpp"

using namespace mtdgrid;
using namespace mtdgrid::optim;

TEST_CASE("solve_lp small fixtures") {
  SUBCASE("single constraint") {
    LinearProgram p{{1.0}, {{{1.0}, Relation::kLessEqual, 3.0}}, {0.0}, {10.0}};
    const Solution s = solve_lp(p);
    REQUIRE(s.optimal());
    CHECK(s.assignment[0] == doctest::Approx(3.0));
    CHECK(s.objective_value == doctest::Approx(3.0));
  }
  SUBCASE("simplex edge") {
    LinearProgram p{{1.0, 1.0}, {{{1.0, 1.0}, Relation::kLessEqual, 1.0}}, {}, {}};
    const Solution s = solve_lp(p);
    REQUIRE(s.optimal());
    CHECK(s.objective_value == doctest::Approx(1.0));
  }
  SUBCASE("contradiction") {
    LinearProgram p{{1.0},
                    {{{1.0}, Relation::kLessEqual, 0.0}, {{1.0}, Relation::kGreaterEqual, 1.0}},
                    {},
                    {}};
    CHECK(solve_lp(p).status == Status::kInfeasible);
  }
  SUBCASE("unbounded") {
    LinearProgram p{{1.0, 0.0}, {{{-1.0, 1.0}, Relation::kLessEqual, 2.0}}, {}, {}};
    CHECK(solve_lp(p).status == Status::kUnbounded);
  }
  SUBCASE("free and negative-bounded variables") {
    // max -x - y with x free, y <= -1 (y unbounded below), x + y >= 0.
    LinearProgram p{{-1.0, -1.0},
                    {{{1.0, 1.0}, Relation::kGreaterEqual, 0.0}},
                    {-kInfinity, -kInfinity},
                    {kInfinity, -1.0}};
    const Solution s = solve_lp(p);
    REQUIRE(s.optimal());
    CHECK(s.objective_value == doctest::Approx(0.0));
    CHECK(s.assignment[1] <= -1.0 + 1e-9);
  }
  SUBCASE("equality with negative right-hand side") {
    LinearProgram p{{1.0, 2.0},
                    {{{1.0, -1.0}, Relation::kEqual, -2.0}},
                    {0.0, 0.0},
                    {5.0, 5.0}};
    const Solution s = solve_lp(p);
    REQUIRE(s.optimal());
    CHECK(s.assignment[0] == doctest::Approx(3.0));
    CHECK(s.assignment[1] == doctest::Approx(5.0));
    CHECK(s.objective_value == doctest::Approx(13.0));
  }
}

TEST_CASE("solve_lp rejects malformed programs") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(solve_lp({{nan}, {}, {}, {}}), ArgumentError);
  CHECK_THROWS_AS(solve_lp({{1.0}, {{{kInfinity}, Relation::kLessEqual, 1.0}}, {}, {}}),
                  ArgumentError);
  CHECK_THROWS_AS(solve_lp({{1.0}, {{{1.0, 2.0}, Relation::kLessEqual, 1.0}}, {}, {}}),
                  ArgumentError);
  CHECK_THROWS_AS(solve_lp({{1.0}, {}, {2.0}, {1.0}}), ArgumentError);
  CHECK_THROWS_AS(solve_bilp({Sense::kMinimize, {nan}, {}}), ArgumentError);
}

TEST_CASE("solve_lp optimum is not beaten by sampled feasible points") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coef(-3.0, 3.0), unit(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    LinearProgram p;
    for (int j = 0; j < n; ++j) p.objective.push_back(coef(rng));
    p.lower.assign(n, 0.0);
    p.upper.assign(n, 4.0);
    for (int r = 0; r < 4; ++r) {
      Constraint c;
      for (int j = 0; j < n; ++j) c.coefficients.push_back(coef(rng));
      c.relation = Relation::kLessEqual;
      c.bound = 2.0 + coef(rng);
      p.constraints.push_back(c);
    }
    const Solution s = solve_lp(p);
    if (!s.optimal()) {
      CHECK(s.status == Status::kInfeasible);
      continue;
    }
    ++checked;
    CHECK(satisfies(p.constraints, s.assignment));
    for (int j = 0; j < n; ++j) {
      CHECK(s.assignment[j] >= -1e-6);
      CHECK(s.assignment[j] <= 4.0 + 1e-6);
    }
    // Randomized rounding of the optimum and uniform samples of the box.
    for (int k = 0; k < 300; ++k) {
      std::vector<double> x(n);
      for (int j = 0; j < n; ++j) {
        x[j] = k % 2 == 0 ? std::floor(s.assignment[j]) + (unit(rng) < 0.5 ? 0 : 1)
                          : 4.0 * unit(rng);
        x[j] = std::clamp(x[j], 0.0, 4.0);
      }
      if (!satisfies(p.constraints, x)) continue;
      double v = 0.0;
      for (int j = 0; j < n; ++j) v += p.objective[j] * x[j];
      CHECK(v <= s.objective_value + 1e-6);
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("solve_bilp small fixtures") {
  SUBCASE("pick either") {
    BinaryProgram p{Sense::kMinimize, {1.0, 1.0}, {{{1.0, 1.0}, Relation::kGreaterEqual, 1.0}}};
    const Solution s = solve_bilp(p);
    REQUIRE(s.optimal());
    CHECK(s.objective_value == doctest::Approx(1.0));
  }
  SUBCASE("contradiction") {
    BinaryProgram p{Sense::kMinimize,
                    {1.0},
                    {{{1.0}, Relation::kGreaterEqual, 1.0}, {{1.0}, Relation::kLessEqual, 0.0}}};
    CHECK(solve_bilp(p).status == Status::kInfeasible);
  }
  SUBCASE("tiny fixture MDCS encoding") {
    const BinaryProgram p = k_dcs_program(mtdgrid::testing::tiny_fixture(), 1);
    // Brute force over all 2^4 subsets.
    REQUIRE(mtdgrid::testing::enumerate_bilp(p) == 2.0);
    const Solution s = solve_bilp(p);
    REQUIRE(s.optimal());
    CHECK(s.objective_value == doctest::Approx(2.0));
  }
  SUBCASE("cutoff") {
    BinaryProgram p{Sense::kMinimize,
                    {1.0, 1.0, 1.0},
                    {{{1.0, 1.0, 1.0}, Relation::kGreaterEqual, 2.0}}};
    CHECK(solve_bilp(p, {.cutoff = 1.0}).status == Status::kInfeasible);
    CHECK(solve_bilp(p, {.cutoff = 2.0}).objective_value == doctest::Approx(2.0));
    BinaryProgram q = p;
    q.sense = Sense::kMaximize;
    CHECK(solve_bilp(q, {.cutoff = 4.0}).status == Status::kInfeasible);
    CHECK(solve_bilp(q, {.cutoff = 3.0}).objective_value == doctest::Approx(3.0));
  }
  SUBCASE("node limit") {
    // The relaxation sits at (1/2, 1/2, 1/2), so the root has to branch.
    BinaryProgram p{Sense::kMinimize,
                    {1.0, 1.0, 1.0},
                    {{{1.0, 1.0, 0.0}, Relation::kGreaterEqual, 1.0},
                     {{0.0, 1.0, 1.0}, Relation::kGreaterEqual, 1.0},
                     {{1.0, 0.0, 1.0}, Relation::kGreaterEqual, 1.0}}};
    CHECK_THROWS_AS(solve_bilp(p, {.max_nodes = 1}), SolverError);
    BilpStats stats;
    CHECK(solve_bilp(p, {}, &stats).objective_value == doctest::Approx(2.0));
    CHECK(stats.nodes > 1);
  }
}

TEST_CASE("solve_bilp agrees with enumeration on random programs") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const BinaryProgram p = mtdgrid::testing::random_bilp(rng, 12, 8);
    const auto expected = mtdgrid::testing::enumerate_bilp(p);
    const Solution s = solve_bilp(p);
    if (!expected) {
      CHECK(s.status == Status::kInfeasible);
      continue;
    }
    REQUIRE(s.optimal());
    CHECK(s.objective_value == doctest::Approx(*expected));
    CHECK(satisfies(p.constraints, s.assignment));
    for (double x : s.assignment) CHECK((x == 0.0 || x == 1.0));
  }
}

TEST_CASE("LP relaxation bounds the binary optimum") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    BinaryProgram p = mtdgrid::testing::random_bilp(rng, 10, 6);
    p.sense = Sense::kMinimize;
    const Solution integer = solve_bilp(p);
    const Solution relaxed = solve_lp(relaxation(p));
    if (!integer.optimal()) continue;
    REQUIRE(relaxed.optimal());
    // relaxation() maximizes the negated objective.
    CHECK(-relaxed.objective_value <= integer.objective_value + 1e-6);
  }
}

TEST_CASE("solvers are deterministic") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    const BinaryProgram p = mtdgrid::testing::random_bilp(rng, 12, 8);
    CHECK(solve_bilp(p) == solve_bilp(p));
    const LinearProgram lp = relaxation(p);
    CHECK(solve_lp(lp) == solve_lp(lp));
  }
}

TEST_CASE("write_lp emits a readable dump") {
  BinaryProgram p{Sense::kMinimize, {1.0, -2.0}, {{{1.0, 1.0}, Relation::kGreaterEqual, 1.0}}};
  std::ostringstream out;
  write_lp(p, out);
  const std::string text = out.str();
  CHECK(text.find("Minimize") == 0);
  CHECK(text.find("c0: 1 x0 + 1 x1 >= 1") != std::string::npos);
  CHECK(text.find("Binary") != std::string::npos);
  std::ostringstream lp_out;
  write_lp(relaxation(p), lp_out);
  CHECK(lp_out.str().find("Bounds") != std::string::npos);
}
