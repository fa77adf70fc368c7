#include "mtdgrid/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mtdgrid/errors.hpp"

namespace mtdgrid {

// ---------------------------------------------------------------------------
// PowerGrid

PowerGrid::PowerGrid(std::vector<int> buses, std::vector<Branch> branches,
                     std::vector<std::size_t> transformer_branches)
    : buses_(std::move(buses)),
      branches_(std::move(branches)),
      transformer_branches_(std::move(transformer_branches)) {
  if (buses_.empty()) throw StructuralError("grid has no buses");
  if (branches_.empty()) throw StructuralError("grid has no branches");
  std::unordered_set<int> seen;
  for (int b : buses_) {
    if (!seen.insert(b).second) {
      throw StructuralError("duplicate bus id " + std::to_string(b));
    }
  }
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const Branch& br = branches_[i];
    if (!seen.count(br.from_bus) || !seen.count(br.to_bus)) {
      throw StructuralError("branch " + std::to_string(i + 1) +
                            " references an unknown bus");
    }
  }
  std::sort(transformer_branches_.begin(), transformer_branches_.end());
  transformer_branches_.erase(
      std::unique(transformer_branches_.begin(), transformer_branches_.end()),
      transformer_branches_.end());
  if (!transformer_branches_.empty() &&
      transformer_branches_.back() >= branches_.size()) {
    throw StructuralError("transformer index out of range");
  }
}

PowerGrid PowerGrid::with_transformers(
    std::vector<std::size_t> branch_indices) const {
  return PowerGrid(buses_, branches_, std::move(branch_indices));
}

std::optional<std::size_t> PowerGrid::bus_index(int bus_id) const {
  auto it = std::find(buses_.begin(), buses_.end(), bus_id);
  if (it == buses_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - buses_.begin());
}

// ---------------------------------------------------------------------------
// MATPOWER

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct MatrixRow {
  std::size_t line;
  std::vector<double> values;
};

// Splits the body of an `mpc.<name> = [ ... ];` block into rows. Rows end at
// ';' or newline; '%' starts a comment.
std::vector<MatrixRow> read_matrix(const std::vector<std::string>& lines,
                                   std::size_t& i) {
  std::vector<MatrixRow> rows;
  bool first = true;
  for (; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (auto pct = line.find('%'); pct != std::string_view::npos) {
      line = line.substr(0, pct);
    }
    if (first) {
      auto open = line.find('[');
      line = line.substr(open + 1);
      first = false;
    }
    bool closed = false;
    if (auto close = line.find(']'); close != std::string_view::npos) {
      line = line.substr(0, close);
      closed = true;
    }
    std::size_t start = 0;
    while (start <= line.size()) {
      auto semi = line.find(';', start);
      std::string_view chunk =
          trim(line.substr(start, semi == std::string_view::npos
                                      ? std::string_view::npos
                                      : semi - start));
      if (!chunk.empty()) {
        MatrixRow row{i + 1, {}};
        std::istringstream ss{std::string(chunk)};
        std::string tok;
        while (ss >> tok) {
          std::size_t used = 0;
          double v = 0.0;
          try {
            v = std::stod(tok, &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (used != tok.size()) {
            throw ParseError(i + 1, "not a number: '" + tok + "'");
          }
          row.values.push_back(v);
        }
        rows.push_back(std::move(row));
      }
      if (semi == std::string_view::npos) break;
      start = semi + 1;
    }
    if (closed) return rows;
  }
  throw ParseError(lines.size(), "unterminated matrix");
}

bool is_integral(double v) { return v == static_cast<double>(static_cast<long long>(v)); }

}  // namespace

PowerGrid parse_matpower(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);

  std::optional<std::vector<MatrixRow>> bus_rows;
  std::optional<std::vector<MatrixRow>> branch_rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    auto starts = [&](std::string_view name) {
      if (!line.starts_with(name)) return false;
      std::string_view rest = trim(line.substr(name.size()));
      return rest.starts_with("=");
    };
    if (starts("mpc.bus")) {
      bus_rows = read_matrix(lines, i);
    } else if (starts("mpc.branch")) {
      branch_rows = read_matrix(lines, i);
    }
  }
  if (!bus_rows || bus_rows->empty()) {
    throw StructuralError("missing or empty mpc.bus table");
  }
  if (!branch_rows || branch_rows->empty()) {
    throw StructuralError("missing or empty mpc.branch table");
  }

  std::vector<int> buses;
  std::unordered_set<int> known;
  for (const MatrixRow& row : *bus_rows) {
    if (row.values.empty() || !is_integral(row.values[0])) {
      throw ParseError(row.line, "bus row needs an integer bus id");
    }
    int id = static_cast<int>(row.values[0]);
    if (!known.insert(id).second) {
      throw ParseError(row.line, "duplicate bus id " + std::to_string(id));
    }
    buses.push_back(id);
  }

  std::vector<Branch> branches;
  std::vector<std::size_t> transformers;
  for (const MatrixRow& row : *branch_rows) {
    if (row.values.size() < 9) {
      throw ParseError(row.line, "branch row has fewer than 9 columns");
    }
    if (!is_integral(row.values[0]) || !is_integral(row.values[1])) {
      throw ParseError(row.line, "branch endpoints must be integer bus ids");
    }
    Branch br{static_cast<int>(row.values[0]), static_cast<int>(row.values[1]),
              row.values[8]};
    for (int end : {br.from_bus, br.to_bus}) {
      if (!known.count(end)) {
        throw ParseError(row.line,
                         "branch references unknown bus " + std::to_string(end));
      }
    }
    if (br.tap_ratio != 0.0) transformers.push_back(branches.size());
    branches.push_back(br);
  }
  return PowerGrid(std::move(buses), std::move(branches),
                   std::move(transformers));
}

PowerGrid parse_matpower_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_matpower(in);
}

std::size_t resolve_branch(const PowerGrid& grid, std::string_view token) {
  token = trim(token);
  const auto& branches = grid.branches();
  auto to_int = [&](std::string_view s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(std::string(s), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size()) {
      throw ArgumentError("bad transformer selector '" + std::string(token) +
                          "'");
    }
    return v;
  };
  if (auto dash = token.find('-'); dash != std::string_view::npos && dash > 0) {
    int a = to_int(token.substr(0, dash));
    int b = to_int(token.substr(dash + 1));
    for (std::size_t i = 0; i < branches.size(); ++i) {
      if ((branches[i].from_bus == a && branches[i].to_bus == b) ||
          (branches[i].from_bus == b && branches[i].to_bus == a)) {
        return i;
      }
    }
    throw ArgumentError("no branch between buses " + std::to_string(a) +
                        " and " + std::to_string(b));
  }
  int row = to_int(token);
  if (row < 1 || static_cast<std::size_t>(row) > branches.size()) {
    throw ArgumentError("branch row " + std::to_string(row) + " out of range");
  }
  return static_cast<std::size_t>(row - 1);
}

// ---------------------------------------------------------------------------
// BipartiteGraph

BipartiteGraph::BipartiteGraph(std::vector<std::string> transformer_ids,
                               std::vector<std::string> site_ids,
                               std::vector<std::vector<Site>> neighborhoods,
                               std::optional<int> hop_limit)
    : transformer_ids_(std::move(transformer_ids)),
      site_ids_(std::move(site_ids)),
      adjacency_(std::move(neighborhoods)),
      hop_limit_(hop_limit) {
  if (adjacency_.size() != transformer_ids_.size()) {
    throw ArgumentError("one neighborhood per transformer required");
  }
  std::unordered_set<std::string> ids;
  for (const auto* list : {&transformer_ids_, &site_ids_}) {
    for (const std::string& id : *list) {
      if (id.empty()) throw FormatError(0, "empty node id");
      if (!ids.insert(id).second) {
        throw FormatError(0, "duplicate node id '" + id + "'");
      }
    }
  }
  const auto n_sites = static_cast<Site>(site_ids_.size());
  for (auto& nb : adjacency_) {
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
      throw FormatError(0, "duplicate edge");
    }
    if (!nb.empty() && (nb.front() < 0 || nb.back() >= n_sites)) {
      throw FormatError(0, "edge to unknown site index");
    }
  }
}

std::size_t BipartiteGraph::num_edges() const {
  std::size_t n = 0;
  for (const auto& nb : adjacency_) n += nb.size();
  return n;
}

const std::string& BipartiteGraph::transformer_id(Transformer t) const {
  if (t < 0 || static_cast<std::size_t>(t) >= transformer_ids_.size()) {
    throw ArgumentError("unknown transformer index " + std::to_string(t));
  }
  return transformer_ids_[t];
}

const std::string& BipartiteGraph::site_id(Site s) const {
  if (s < 0 || static_cast<std::size_t>(s) >= site_ids_.size()) {
    throw ArgumentError("unknown site index " + std::to_string(s));
  }
  return site_ids_[s];
}

const std::vector<Site>& BipartiteGraph::neighborhood(Transformer t) const {
  if (t < 0 || static_cast<std::size_t>(t) >= adjacency_.size()) {
    throw ArgumentError("unknown transformer index " + std::to_string(t));
  }
  return adjacency_[t];
}

std::optional<Site> BipartiteGraph::find_site(std::string_view id) const {
  for (std::size_t i = 0; i < site_ids_.size(); ++i) {
    if (site_ids_[i] == id) return static_cast<Site>(i);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Construction from a grid

BipartiteGraph build_bipartite(const PowerGrid& grid,
                               std::span<const std::size_t> hvt_branches,
                               int hop_limit, SiteRule rule) {
  if (hvt_branches.empty()) throw ArgumentError("no transformers selected");
  if (hop_limit < 1) throw ArgumentError("hop limit must be at least 1");

  const auto& buses = grid.buses();
  const auto& branches = grid.branches();
  const std::size_t n_bus = buses.size();
  std::vector<std::vector<std::size_t>> bus_adj(n_bus);
  std::vector<std::size_t> from(branches.size()), to(branches.size());
  for (std::size_t i = 0; i < branches.size(); ++i) {
    from[i] = *grid.bus_index(branches[i].from_bus);
    to[i] = *grid.bus_index(branches[i].to_bus);
    bus_adj[from[i]].push_back(to[i]);
    bus_adj[to[i]].push_back(from[i]);
  }

  // Sites and the bus each one sits on.
  std::vector<std::string> site_ids;
  std::vector<std::size_t> site_bus;
  if (rule == SiteRule::kLineEnds) {
    for (std::size_t i = 0; i < branches.size(); ++i) {
      for (std::size_t b : {from[i], to[i]}) {
        site_ids.push_back("s" + std::to_string(buses[b]) + "_" +
                           std::to_string(i + 1));
        site_bus.push_back(b);
      }
    }
  } else {
    for (std::size_t b = 0; b < n_bus; ++b) {
      site_ids.push_back("b" + std::to_string(buses[b]));
      site_bus.push_back(b);
    }
  }

  std::vector<std::string> t_ids;
  std::vector<std::vector<Site>> adjacency;
  for (std::size_t br : hvt_branches) {
    if (br >= branches.size()) throw ArgumentError("transformer branch out of range");
    t_ids.push_back("t" + std::to_string(br + 1) + "_" +
                    std::to_string(branches[br].from_bus) + "-" +
                    std::to_string(branches[br].to_bus));

    // Multi-source BFS over buses; both endpoints sit at hop 1.
    std::vector<int> hops(n_bus, -1);
    std::queue<std::size_t> frontier;
    for (std::size_t b : {from[br], to[br]}) {
      if (hops[b] < 0) {
        hops[b] = 1;
        frontier.push(b);
      }
    }
    while (!frontier.empty()) {
      std::size_t u = frontier.front();
      frontier.pop();
      if (hops[u] >= hop_limit) continue;
      for (std::size_t v : bus_adj[u]) {
        if (hops[v] < 0) {
          hops[v] = hops[u] + 1;
          frontier.push(v);
        }
      }
    }
    std::vector<Site> nb;
    for (std::size_t s = 0; s < site_bus.size(); ++s) {
      if (hops[site_bus[s]] > 0) nb.push_back(static_cast<Site>(s));
    }
    adjacency.push_back(std::move(nb));
  }
  return BipartiteGraph(std::move(t_ids), std::move(site_ids),
                        std::move(adjacency), hop_limit);
}

// ---------------------------------------------------------------------------
// Text format

BipartiteGraph load_graph(std::istream& in) {
  std::vector<std::string> t_ids, s_ids;
  std::vector<std::vector<Site>> adjacency;
  std::unordered_map<std::string, std::pair<char, int>> index;
  std::optional<int> hop_limit;

  std::string raw;
  for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      std::istringstream comment{std::string(line.substr(hash + 1))};
      std::string key;
      int value = 0;
      if (comment >> key >> value && key == "hop_limit" && value >= 1) {
        hop_limit = value;
      }
      line = line.substr(0, hash);
    }
    std::istringstream ss{std::string(line)};
    std::vector<std::string> tok;
    for (std::string w; ss >> w;) tok.push_back(w);
    if (tok.empty()) continue;

    const std::string& kind = tok[0];
    if (kind == "t" || kind == "s") {
      if (tok.size() != 2) throw FormatError(line_no, "expected '" + kind + " <id>'");
      const bool is_t = kind == "t";
      int idx = static_cast<int>(is_t ? t_ids.size() : s_ids.size());
      if (!index.emplace(tok[1], std::pair{kind[0], idx}).second) {
        throw FormatError(line_no, "duplicate node id '" + tok[1] + "'");
      }
      if (is_t) {
        t_ids.push_back(tok[1]);
        adjacency.emplace_back();
      } else {
        s_ids.push_back(tok[1]);
      }
    } else if (kind == "e") {
      if (tok.size() != 3) throw FormatError(line_no, "expected 'e <t-id> <s-id>'");
      auto a = index.find(tok[1]);
      auto b = index.find(tok[2]);
      if (a == index.end() || b == index.end()) {
        throw FormatError(line_no, "edge references undeclared node");
      }
      if (a->second.first != 't' || b->second.first != 's') {
        throw FormatError(line_no, "edge must join a transformer and a site");
      }
      auto& nb = adjacency[a->second.second];
      if (std::find(nb.begin(), nb.end(), b->second.second) != nb.end()) {
        throw FormatError(line_no, "duplicate edge");
      }
      nb.push_back(b->second.second);
    } else {
      throw FormatError(line_no, "unknown record '" + kind + "'");
    }
  }
  return BipartiteGraph(std::move(t_ids), std::move(s_ids),
                        std::move(adjacency), hop_limit);
}

BipartiteGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  return load_graph(in);
}

void save_graph(const BipartiteGraph& g, std::ostream& out) {
  out << "# bipartite monitoring graph: " << g.num_transformers()
      << " transformers, " << g.num_sites() << " sites, " << g.num_edges()
      << " edges\n";
  if (g.hop_limit()) out << "# hop_limit " << *g.hop_limit() << '\n';
  for (const auto& id : g.transformer_ids()) out << "t " << id << '\n';
  for (const auto& id : g.site_ids()) out << "s " << id << '\n';
  for (std::size_t t = 0; t < g.num_transformers(); ++t) {
    for (Site s : g.neighborhood(static_cast<Transformer>(t))) {
      out << "e " << g.transformer_ids()[t] << ' ' << g.site_ids()[s] << '\n';
    }
  }
}

void save_graph_file(const BipartiteGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  save_graph(g, out);
}

// ---------------------------------------------------------------------------
// Codes

CodeSet::CodeSet(std::vector<Site> s) : sensors(std::move(s)) {
  std::sort(sensors.begin(), sensors.end());
  sensors.erase(std::unique(sensors.begin(), sensors.end()), sensors.end());
}

bool CodeSet::contains(Site s) const {
  return std::binary_search(sensors.begin(), sensors.end(), s);
}

namespace {

std::vector<Site> sorted_copy(std::span<const Site> active) {
  std::vector<Site> v(active.begin(), active.end());
  if (!std::is_sorted(v.begin(), v.end())) std::sort(v.begin(), v.end());
  return v;
}

std::vector<Site> intersect(const std::vector<Site>& a,
                            const std::vector<Site>& b) {
  std::vector<Site> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<Site> code_of(const BipartiteGraph& g, Transformer t,
                          std::span<const Site> active) {
  return intersect(g.neighborhood(t), sorted_copy(active));
}

std::vector<bool> identified_transformers(const BipartiteGraph& g,
                                          std::span<const Site> active) {
  const std::vector<Site> act = sorted_copy(active);
  const std::size_t n = g.num_transformers();
  std::map<std::vector<Site>, int> multiplicity;
  std::vector<std::vector<Site>> codes(n);
  for (std::size_t t = 0; t < n; ++t) {
    codes[t] = intersect(g.neighborhood(static_cast<Transformer>(t)), act);
    ++multiplicity[codes[t]];
  }
  std::vector<bool> ok(n);
  for (std::size_t t = 0; t < n; ++t) {
    ok[t] = !codes[t].empty() && multiplicity[codes[t]] == 1;
  }
  return ok;
}

bool is_dcs(const BipartiteGraph& g, std::span<const Site> candidate) {
  const auto ok = identified_transformers(g, candidate);
  return std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
}

}  // namespace mtdgrid
