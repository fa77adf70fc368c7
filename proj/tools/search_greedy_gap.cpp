// Random search for a graph on which greedy_k finds fewer disjoint MDCSs than
// find_kmax. The hit is confirmed by brute force and written as a graph file.
#include <iostream>
#include <random>
#include <string>

#include "mtdgrid/errors.hpp"
#include "mtdgrid/mdcs.hpp"

using namespace mtdgrid;

int main(int argc, char** argv) {
  const std::string out = argc > 1 ? argv[1] : "greedy_gap.graph";
  const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 1;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nt(2, 5), ns(4, 10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (long attempt = 1; attempt <= 200000; ++attempt) {
    const int t = nt(rng), s = ns(rng);
    const double density = 0.3 + 0.4 * unit(rng);
    std::vector<std::string> t_ids, s_ids;
    for (int i = 0; i < t; ++i) t_ids.push_back("t" + std::to_string(i + 1));
    for (int j = 0; j < s; ++j) s_ids.push_back("s" + std::to_string(j + 1));
    std::vector<std::vector<Site>> nbr(t);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < s; ++j)
        if (unit(rng) < density) nbr[i].push_back(j);
    const BipartiteGraph g(t_ids, s_ids, nbr);
    try {
      const ConfigurationSet greedy = greedy_k(g);
      const ConfigurationSet best = find_kmax(g);
      if (greedy.k() >= best.k()) continue;
      if (brute_force_kmax(g).k() != best.k()) {
        std::cerr << "solver and brute force disagree at attempt " << attempt << "\n";
        return 1;
      }
      save_graph_file(g, out);
      std::cout << "attempt " << attempt << ": greedy K=" << greedy.k()
                << " optimal K=" << best.k() << " l=" << best.l << " -> " << out << "\n";
      return 0;
    } catch (const InfeasibleError&) {
    }
  }
  std::cerr << "no gap found\n";
  return 2;
}
