#ifndef MTDGRID_TRIALS_HPP
#define MTDGRID_TRIALS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mtdgrid/game.hpp"
#include "mtdgrid/graph.hpp"
#include "mtdgrid/mdcs.hpp"

namespace mtdgrid {

struct TrialOptions {
  bool integer_utilities = false;
  GameOptions game;
  // Evaluate trials on worker threads; output is identical either way.
  bool parallel = false;
};

// Defender values of one randomized trial.
struct TrialRow {
  double urs_k = 0.0;
  double urs_kmax = 0.0;
  double sse_k = 0.0;
  double sse_kmax = 0.0;

  std::array<double, 4> values() const { return {urs_k, urs_kmax, sse_k, sse_kmax}; }
};

struct TrialReport {
  std::vector<TrialRow> rows;
  std::array<double, 4> mean{};
  std::array<double, 4> stddev{};  // sample standard deviation; 0 for n = 1
};

// Utilities for every transformer, then attack costs for every site in index
// order, drawn uniformly on [0, 10] from a generator seeded with
// seed_seq{seed low 32 bits, seed high 32 bits, trial}.
UtilityProfile draw_profile(const BipartiteGraph& g, std::uint64_t seed,
                            std::size_t trial, bool integer_utilities);

// Evaluates URS and SSE on the greedy (K) and optimal (K_max) configurations
// for `n_trials` independent utility draws.
TrialReport run_trials(const BipartiteGraph& g, const ConfigurationSet& greedy,
                       const ConfigurationSet& optimal, std::size_t n_trials,
                       std::uint64_t seed, const TrialOptions& opt = {});

// CSV: header, one row per trial (1-based), then `mean` and `std` rows; four
// decimal places.
void write_csv(const TrialReport& report, std::ostream& out);

}  // namespace mtdgrid

#endif  // MTDGRID_TRIALS_HPP
