#include "mtdgrid/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mtdgrid/errors.hpp"
#include "mtdgrid/optim.hpp"

namespace mtdgrid {
namespace {

// Attacker actions whose expected payoff is within this of the best count as
// tied best responses.
constexpr double kTieTolerance = 1e-9;

void check_range(double v, const std::string& what) {
  if (!(v >= 0.0 && v <= kMaxUtility)) {
    throw ArgumentError(what + " outside [0, 10]");
  }
}

void check_transformers(const BipartiteGraph& g, const UtilityProfile& u) {
  if (u.transformer_utility.size() != g.num_transformers()) {
    throw ArgumentError("utility profile must cover every transformer");
  }
}

double cost_of(const UtilityProfile& u, Site s) {
  auto it = u.attack_cost.find(s);
  if (it == u.attack_cost.end()) {
    throw ArgumentError("no attack cost for site " + std::to_string(s));
  }
  return it->second;
}

std::vector<Site> without(const CodeSet& active, Site attacked) {
  std::vector<Site> rest;
  rest.reserve(active.size());
  for (Site s : active.sensors) {
    if (s != attacked) rest.push_back(s);
  }
  return rest;
}

void check_shape(const GameMatrix& game) {
  if (game.rows() == 0 || game.cols() == 0) {
    throw ArgumentError("game needs at least one action per player");
  }
  for (std::size_t i = 0; i < game.rows(); ++i) {
    if (game.defender_payoff.size() != game.rows() ||
        game.attacker_payoff.size() != game.rows() ||
        game.defender_payoff[i].size() != game.cols() ||
        game.attacker_payoff[i].size() != game.cols()) {
      throw ArgumentError("payoff matrix shape mismatch");
    }
  }
}

// Best attacker column for `mix`, breaking ties for the defender and then by
// lowest index.
std::size_t favourable_response(const GameMatrix& game,
                                const std::vector<double>& mix) {
  const auto att = attacker_expected(game, mix);
  const auto def = defender_expected(game, mix);
  const double top = *std::max_element(att.begin(), att.end());
  std::size_t pick = game.cols();
  for (std::size_t j = 0; j < game.cols(); ++j) {
    if (att[j] < top - kTieTolerance) continue;
    if (pick == game.cols() || def[j] > def[pick]) pick = j;
  }
  return pick;
}

}  // namespace

double defender_payoff(const BipartiteGraph& g, const CodeSet& active,
                       Site attacked, const UtilityProfile& u) {
  check_transformers(g, u);
  const auto ok = identified_transformers(g, without(active, attacked));
  double total = 0.0;
  for (std::size_t t = 0; t < ok.size(); ++t) {
    if (ok[t]) total += u.transformer_utility[t];
  }
  return total;
}

double attacker_payoff(const BipartiteGraph& g, const CodeSet& active,
                       Site attacked, const UtilityProfile& u,
                       const GameOptions& opt) {
  check_transformers(g, u);
  const auto ok = identified_transformers(g, without(active, attacked));
  double gained = 0.0;
  for (std::size_t t = 0; t < ok.size(); ++t) {
    if (!ok[t]) gained += u.transformer_utility[t];
  }
  const bool charged = opt.cost_on_miss || active.contains(attacked);
  return charged ? gained - cost_of(u, attacked) : gained;
}

GameMatrix build_game(const BipartiteGraph& g, const ConfigurationSet& c,
                      const UtilityProfile& u, const GameOptions& opt) {
  check_transformers(g, u);
  if (c.sets.empty()) throw ArgumentError("empty configuration set");
  for (double v : u.transformer_utility) check_range(v, "transformer utility");

  GameMatrix game;
  game.defender_actions = c.sets;
  game.attacker_actions = c.sites();
  for (Site s : game.attacker_actions) check_range(cost_of(u, s), "attack cost");

  for (const CodeSet& active : game.defender_actions) {
    std::vector<double> drow, arow;
    for (Site s : game.attacker_actions) {
      drow.push_back(defender_payoff(g, active, s, u));
      arow.push_back(attacker_payoff(g, active, s, u, opt));
    }
    game.defender_payoff.push_back(std::move(drow));
    game.attacker_payoff.push_back(std::move(arow));
  }
  return game;
}

std::vector<double> attacker_expected(const GameMatrix& game,
                                      const std::vector<double>& mix) {
  std::vector<double> out(game.cols(), 0.0);
  for (std::size_t i = 0; i < game.rows(); ++i) {
    for (std::size_t j = 0; j < game.cols(); ++j) {
      out[j] += mix[i] * game.attacker_payoff[i][j];
    }
  }
  return out;
}

std::vector<double> defender_expected(const GameMatrix& game,
                                      const std::vector<double>& mix) {
  std::vector<double> out(game.cols(), 0.0);
  for (std::size_t i = 0; i < game.rows(); ++i) {
    for (std::size_t j = 0; j < game.cols(); ++j) {
      out[j] += mix[i] * game.defender_payoff[i][j];
    }
  }
  return out;
}

SseSolution solve_sse(const GameMatrix& game) {
  check_shape(game);
  const std::size_t k = game.rows();
  const std::size_t cols = game.cols();

  bool found = false;
  SseSolution best;
  for (std::size_t j = 0; j < cols; ++j) {
    // max_p sum_i p_i D[i][j]  s.t. column j is an attacker best response.
    optim::LinearProgram lp;
    lp.objective.resize(k);
    for (std::size_t i = 0; i < k; ++i) lp.objective[i] = game.defender_payoff[i][j];
    lp.lower.assign(k, 0.0);
    lp.upper.assign(k, 1.0);
    lp.constraints.push_back(
        {std::vector<double>(k, 1.0), optim::Relation::kEqual, 1.0});
    for (std::size_t other = 0; other < cols; ++other) {
      if (other == j) continue;
      optim::Constraint c{std::vector<double>(k), optim::Relation::kGreaterEqual, 0.0};
      for (std::size_t i = 0; i < k; ++i) {
        c.coefficients[i] = game.attacker_payoff[i][j] - game.attacker_payoff[i][other];
      }
      lp.constraints.push_back(std::move(c));
    }
    const optim::Solution sol = optim::solve_lp(lp);
    if (!sol.optimal()) continue;
    if (found && sol.objective_value <= best.defender_value + optim::kFeasibilityTolerance) {
      continue;
    }
    found = true;
    best.defender_mix = sol.assignment;
    best.attacker_response = j;
    best.defender_value = sol.objective_value;
  }
  if (!found) throw SolverError("no attacker action is a best response to any mix");

  for (double& p : best.defender_mix) p = std::clamp(p, 0.0, 1.0);
  best.attacker_value = attacker_expected(game, best.defender_mix)[best.attacker_response];
  return best;
}

double urs_value(const GameMatrix& game) {
  check_shape(game);
  const std::vector<double> mix(game.rows(), 1.0 / static_cast<double>(game.rows()));
  const std::size_t j = favourable_response(game, mix);
  return defender_expected(game, mix)[j];
}

}  // namespace mtdgrid
