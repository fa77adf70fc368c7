#ifndef MTDGRID_GAME_HPP
#define MTDGRID_GAME_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "mtdgrid/graph.hpp"
#include "mtdgrid/mdcs.hpp"

namespace mtdgrid {

inline constexpr double kMaxUtility = 10.0;

// Transformer importance and per-site attack cost, both on [0, 10].
struct UtilityProfile {
  std::vector<double> transformer_utility;  // indexed by Transformer
  std::map<Site, double> attack_cost;
};

struct GameOptions {
  // Charge the attack cost even when the attacked site is inactive.
  bool cost_on_miss = true;
};

// Rows are defender configurations, columns attacked sites.
struct GameMatrix {
  std::vector<CodeSet> defender_actions;
  std::vector<Site> attacker_actions;
  std::vector<std::vector<double>> defender_payoff;
  std::vector<std::vector<double>> attacker_payoff;

  std::size_t rows() const { return defender_actions.size(); }
  std::size_t cols() const { return attacker_actions.size(); }
};

struct SseSolution {
  std::vector<double> defender_mix;
  std::size_t attacker_response = 0;  // column index into attacker_actions
  double defender_value = 0.0;
  double attacker_value = 0.0;
};

// Total utility of transformers still uniquely identified once `attacked` is
// removed from `active`.
double defender_payoff(const BipartiteGraph& g, const CodeSet& active,
                       Site attacked, const UtilityProfile& u);

// Utility of the transformers the attack leaves unidentified, minus the cost.
double attacker_payoff(const BipartiteGraph& g, const CodeSet& active,
                       Site attacked, const UtilityProfile& u,
                       const GameOptions& opt = {});

// Throws ArgumentError when `u` misses a transformer or a site of `c`, or a
// value lies outside [0, 10].
GameMatrix build_game(const BipartiteGraph& g, const ConfigurationSet& c,
                      const UtilityProfile& u, const GameOptions& opt = {});

// Expected payoffs of every attacker column under `mix`.
std::vector<double> attacker_expected(const GameMatrix& game,
                                      const std::vector<double>& mix);
std::vector<double> defender_expected(const GameMatrix& game,
                                      const std::vector<double>& mix);

// Strong Stackelberg equilibrium by one LP per attacker action.
SseSolution solve_sse(const GameMatrix& game);

// Defender value under the uniform mix against a defender-favourable best
// response.
double urs_value(const GameMatrix& game);

}  // namespace mtdgrid

#endif  // MTDGRID_GAME_HPP
