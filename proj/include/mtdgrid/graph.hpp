#ifndef MTDGRID_GRAPH_HPP
#define MTDGRID_GRAPH_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mtdgrid {

// Dense indices into BipartiteGraph::transformers() / sites().
using Transformer = int;
using Site = int;

struct Branch {
  int from_bus = 0;
  int to_bus = 0;
  double tap_ratio = 0.0;
};

// Bus/branch topology of a transmission grid. Immutable after construction.
class PowerGrid {
 public:
  // Throws StructuralError if a branch references an unknown bus, a bus id
  // repeats, a transformer index is out of range, or either table is empty.
  PowerGrid(std::vector<int> buses, std::vector<Branch> branches,
            std::vector<std::size_t> transformer_branches);

  const std::vector<int>& buses() const { return buses_; }
  const std::vector<Branch>& branches() const { return branches_; }
  // Indices into branches(), ascending.
  const std::vector<std::size_t>& transformer_branches() const {
    return transformer_branches_;
  }

  // Same topology with a different transformer selection.
  PowerGrid with_transformers(std::vector<std::size_t> branch_indices) const;

  // Index of `bus_id` in buses(), or nullopt.
  std::optional<std::size_t> bus_index(int bus_id) const;

 private:
  std::vector<int> buses_;
  std::vector<Branch> branches_;
  std::vector<std::size_t> transformer_branches_;
};

// Reads the mpc.bus and mpc.branch matrices of a MATPOWER case file. Only bus
// column 1 and branch columns 1, 2 and 9 are consumed. Branches with a
// nonzero tap ratio are flagged as transformers.
PowerGrid parse_matpower(std::istream& in);
PowerGrid parse_matpower_string(std::string_view text);

// Resolves a user transformer token against the grid: either a 1-based branch
// row number ("8") or an endpoint pair ("4-7", first matching row).
std::size_t resolve_branch(const PowerGrid& grid, std::string_view token);

enum class SiteRule { kLineEnds, kBuses };

// Bipartite monitoring graph G = (T u S, E). Node ids are external labels;
// every query works on dense indices.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  // `neighborhoods[t]` lists site indices adjacent to transformer t. They are
  // sorted on construction. Throws FormatError on duplicate ids (across T and
  // S), duplicate edges or out-of-range site indices.
  BipartiteGraph(std::vector<std::string> transformer_ids,
                 std::vector<std::string> site_ids,
                 std::vector<std::vector<Site>> neighborhoods,
                 std::optional<int> hop_limit = std::nullopt);

  std::size_t num_transformers() const { return transformer_ids_.size(); }
  std::size_t num_sites() const { return site_ids_.size(); }
  std::size_t num_edges() const;

  const std::vector<std::string>& transformer_ids() const {
    return transformer_ids_;
  }
  const std::vector<std::string>& site_ids() const { return site_ids_; }
  const std::string& transformer_id(Transformer t) const;
  const std::string& site_id(Site s) const;

  // Sorted site indices adjacent to t. Throws ArgumentError for unknown t.
  const std::vector<Site>& neighborhood(Transformer t) const;

  // Hop limit the graph was built with, when known.
  std::optional<int> hop_limit() const { return hop_limit_; }

  std::optional<Site> find_site(std::string_view id) const;

  // Equality ignores hop_limit, which is provenance only.
  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.transformer_ids_ == b.transformer_ids_ &&
           a.site_ids_ == b.site_ids_ && a.adjacency_ == b.adjacency_;
  }

 private:
  std::vector<std::string> transformer_ids_;
  std::vector<std::string> site_ids_;
  std::vector<std::vector<Site>> adjacency_;
  std::optional<int> hop_limit_;
};

// Builds the monitoring graph for the selected transformer branches. A hop is
// one branch traversal: the endpoints of a transformer branch are at hop 1,
// their neighbours at hop 2, and so on. A site is adjacent to a transformer
// when its bus lies within `hop_limit` hops.
BipartiteGraph build_bipartite(const PowerGrid& grid,
                               std::span<const std::size_t> hvt_branches,
                               int hop_limit,
                               SiteRule rule = SiteRule::kLineEnds);

// Line-oriented graph text format:
//   t <id>          transformer
//   s <id>          sensor site
//   e <t-id> <s-id> edge
//   # ...           comment
// Nodes must be declared before use. A "# hop_limit N" comment restores the
// hop limit.
BipartiteGraph load_graph(std::istream& in);
BipartiteGraph load_graph_file(const std::string& path);
void save_graph(const BipartiteGraph& g, std::ostream& out);
void save_graph_file(const BipartiteGraph& g, const std::string& path);

// A subset of S, kept sorted and duplicate-free.
struct CodeSet {
  std::vector<Site> sensors;

  CodeSet() = default;
  explicit CodeSet(std::vector<Site> s);

  std::size_t size() const { return sensors.size(); }
  bool contains(Site s) const;
  friend bool operator==(const CodeSet&, const CodeSet&) = default;
};

// N(t) n active. `active` must be sorted.
std::vector<Site> code_of(const BipartiteGraph& g, Transformer t,
                          std::span<const Site> active);

// True iff every transformer's code under `candidate` is non-empty and all
// codes are pairwise distinct.
bool is_dcs(const BipartiteGraph& g, std::span<const Site> candidate);
inline bool is_dcs(const BipartiteGraph& g, const CodeSet& c) {
  return is_dcs(g, std::span<const Site>(c.sensors));
}

// Per-transformer flag: code under `active` is non-empty and unique among
// all transformers' codes.
std::vector<bool> identified_transformers(const BipartiteGraph& g,
                                          std::span<const Site> active);

}  // namespace mtdgrid

#endif  // MTDGRID_GRAPH_HPP
