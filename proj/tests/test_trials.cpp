#include <sstream>

#include "doctest.h"
#include "mtdgrid/errors.hpp"
#include "mtdgrid/trials.hpp"
#include "oracles.hpp"

using namespace mtdgrid;
using mtdgrid::testing::tiny_fixture;

namespace {

ConfigurationSet tiny_configuration() {
  return {{CodeSet({0, 1}), CodeSet({2, 3})}, 2};
}

}  // namespace

TEST_CASE("draw_profile is seeded per trial") {
  const BipartiteGraph g = tiny_fixture();
  const UtilityProfile a = draw_profile(g, 7, 0, false);
  const UtilityProfile b = draw_profile(g, 7, 0, false);
  const UtilityProfile c = draw_profile(g, 7, 1, false);
  CHECK(a.transformer_utility == b.transformer_utility);
  CHECK(a.attack_cost == b.attack_cost);
  CHECK(a.transformer_utility != c.transformer_utility);
  REQUIRE(a.attack_cost.size() == 4);
  for (double v : a.transformer_utility) {
    CHECK(v >= 0.0);
    CHECK(v <= 10.0);
  }
  const UtilityProfile whole = draw_profile(g, 7, 0, true);
  for (const auto& [site, v] : whole.attack_cost) CHECK(v == static_cast<int>(v));
}

TEST_CASE("run_trials is deterministic and SSE dominates URS") {
  const BipartiteGraph g = tiny_fixture();
  const ConfigurationSet greedy = greedy_k(g);
  const ConfigurationSet optimal = find_kmax(g);
  const TrialReport a = run_trials(g, greedy, optimal, 100, 99);
  const TrialReport b = run_trials(g, greedy, optimal, 100, 99);
  std::ostringstream ca, cb;
  write_csv(a, ca);
  write_csv(b, cb);
  CHECK(ca.str() == cb.str());
  for (const TrialRow& row : a.rows) {
    CHECK(row.sse_k >= row.urs_k - 1e-6);
    CHECK(row.sse_kmax >= row.urs_kmax - 1e-6);
  }

  TrialOptions parallel;
  parallel.parallel = true;
  std::ostringstream cp;
  write_csv(run_trials(g, greedy, optimal, 100, 99, parallel), cp);
  CHECK(cp.str() == ca.str());
}

TEST_CASE("identical configurations give identical columns") {
  const BipartiteGraph g = tiny_fixture();
  const ConfigurationSet c = find_kmax(g);
  const TrialReport r = run_trials(g, c, c, 30, 5);
  for (const TrialRow& row : r.rows) {
    CHECK(row.urs_k == row.urs_kmax);
    CHECK(row.sse_k == row.sse_kmax);
  }
}

TEST_CASE("one trial replays by hand") {
  const BipartiteGraph g = tiny_fixture();
  const ConfigurationSet c = tiny_configuration();
  const TrialReport r = run_trials(g, c, c, 1, 2024);
  const UtilityProfile u = draw_profile(g, 2024, 0, false);
  const double u1 = u.transformer_utility[0];
  const double u2 = u.transformer_utility[1];
  auto cost = [&](Site s) { return u.attack_cost.at(s); };

  // Removing s1 or s3 blinds t1, removing s2 or s4 blinds t2, and a site of
  // the other set leaves both identified.
  GameMatrix game;
  game.defender_actions = c.sets;
  game.attacker_actions = {0, 1, 2, 3};
  game.defender_payoff = {{u2, u1, u1 + u2, u1 + u2}, {u1 + u2, u1 + u2, u2, u1}};
  game.attacker_payoff = {{u1 - cost(0), u2 - cost(1), -cost(2), -cost(3)},
                          {-cost(0), -cost(1), u1 - cost(2), u2 - cost(3)}};

  CHECK(r.rows[0].sse_kmax ==
        doctest::Approx(mtdgrid::testing::two_row_sse_oracle(game)).epsilon(1e-9));
  CHECK(r.rows[0].urs_kmax ==
        doctest::Approx(mtdgrid::testing::value_at_mix(game, {0.5, 0.5})).epsilon(1e-9));
  CHECK(r.stddev == std::array<double, 4>{0, 0, 0, 0});
}

TEST_CASE("run_trials argument checks") {
  const BipartiteGraph g = tiny_fixture();
  const ConfigurationSet c = tiny_configuration();
  CHECK_THROWS_AS(run_trials(g, c, c, 0, 1), ArgumentError);
  const ConfigurationSet broken{{CodeSet({0})}, 1};
  CHECK_THROWS_AS(run_trials(g, broken, c, 1, 1), ArgumentError);
}

TEST_CASE("CSV layout") {
  TrialReport r;
  r.rows = {{1, 2, 3, 4}, {3, 4, 5, 6}};
  r.mean = {2, 3, 4, 5};
  r.stddev = {1.41421356, 1.41421356, 1.41421356, 1.41421356};
  std::ostringstream out;
  write_csv(r, out);
  CHECK(out.str() ==
        "trial,urs_k,urs_kmax,sse_k,sse_kmax\n"
        "1,1.0000,2.0000,3.0000,4.0000\n"
        "2,3.0000,4.0000,5.0000,6.0000\n"
        "mean,2.0000,3.0000,4.0000,5.0000\n"
        "std,1.4142,1.4142,1.4142,1.4142\n");
}
