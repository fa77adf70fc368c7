#ifndef MTDGRID_MDCS_HPP
#define MTDGRID_MDCS_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtdgrid/graph.hpp"
#include "mtdgrid/optim.hpp"

namespace mtdgrid {

// K pairwise-disjoint discriminating code sets of common size l.
struct ConfigurationSet {
  std::vector<CodeSet> sets;
  std::size_t l = 0;

  std::size_t k() const { return sets.size(); }
  // Union of all members in set order; one attacker action per entry.
  std::vector<Site> sites() const;
  friend bool operator==(const ConfigurationSet&, const ConfigurationSet&) = default;
};

// Human-readable reasons the configuration breaks its invariants (every member
// a DCS, equal size l, pairwise disjoint). Empty when valid.
std::vector<std::string> configuration_violations(const BipartiteGraph& g,
                                                  const ConfigurationSet& c);

enum class KSearch { kLinear, kBinary };

struct MdcsOptions {
  // Order blocks by smallest member site (lexicographic on bit-vectors for
  // disjoint blocks).
  bool symmetry_breaking = false;
  KSearch k_search = KSearch::kLinear;
  optim::BilpOptions bilp;
};

// Throws InfeasibleError when some N(t) is empty or two transformers share a
// neighborhood.
void check_discriminable(const BipartiteGraph& g);

// Variable index of x_{s,k} in the K-block encoding.
inline std::size_t block_variable(const BipartiteGraph& g, Site s,
                                  std::size_t k) {
  return k * g.num_sites() + static_cast<std::size_t>(s);
}

// Binary program for K equal-size, pairwise-disjoint DCSs minimizing their
// common size. Disjointness uses x_sk + x_sk' <= 1.
optim::BinaryProgram k_dcs_program(const BipartiteGraph& g, std::size_t k,
                                   bool symmetry_breaking = false);

// The K-block constraint system with the quadratic disjointness form
// sum_s (x_sk - x_sk')^2 = 2l evaluated literally on a binary assignment.
bool satisfies_quadratic_encoding(const BipartiteGraph& g, std::size_t k,
                                  std::span<const double> x);

// Reads the K code sets out of a K-block assignment.
ConfigurationSet decode_blocks(const BipartiteGraph& g, std::size_t k,
                               std::span<const double> x);

CodeSet solve_mdcs(const BipartiteGraph& g, const MdcsOptions& opt = {});

// Optimal K equal-size disjoint DCSs. `max_size`, when given, rejects
// solutions with l above it (InfeasibleError).
ConfigurationSet solve_k_dcs(const BipartiteGraph& g, std::size_t k,
                             const MdcsOptions& opt = {},
                             std::optional<std::size_t> max_size = std::nullopt);

// Largest K admitting K disjoint MDCSs, with one such family.
ConfigurationSet find_kmax(const BipartiteGraph& g, const MdcsOptions& opt = {});

// Repeatedly solves a single MDCS with previously chosen sites forced to 0.
ConfigurationSet greedy_k(const BipartiteGraph& g,
                          std::optional<std::size_t> k_target = std::nullopt,
                          const MdcsOptions& opt = {});

inline constexpr std::size_t kBruteForceSiteLimit = 25;

// Exhaustive ground truth: every MDCS, then a maximum pairwise-disjoint family
// among them. Refuses graphs with more than kBruteForceSiteLimit sites.
ConfigurationSet brute_force_kmax(const BipartiteGraph& g);

// Minimum DCS size by exhaustive enumeration; nullopt when infeasible.
std::optional<std::size_t> brute_force_mdcs_size(const BipartiteGraph& g);

// `kmax <K> l <l>` followed by `mdcs <k>: <site-id> ...` per set (1-based k).
void write_configuration(const BipartiteGraph& g, const ConfigurationSet& c,
                         std::ostream& out);

}  // namespace mtdgrid

#endif  // MTDGRID_MDCS_HPP
