#include "mtdgrid/mdcs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>

#include "mtdgrid/errors.hpp"

namespace mtdgrid {

using optim::BinaryProgram;
using optim::Constraint;
using optim::Relation;

std::vector<Site> ConfigurationSet::sites() const {
  std::vector<Site> out;
  for (const CodeSet& c : sets) {
    out.insert(out.end(), c.sensors.begin(), c.sensors.end());
  }
  return out;
}

std::vector<std::string> configuration_violations(const BipartiteGraph& g,
                                                  const ConfigurationSet& c) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < c.sets.size(); ++i) {
    const CodeSet& set = c.sets[i];
    for (Site s : set.sensors) {
      if (s < 0 || static_cast<std::size_t>(s) >= g.num_sites()) {
        out.push_back("set " + std::to_string(i + 1) + " has a foreign site");
      }
    }
    if (!is_dcs(g, set)) {
      out.push_back("set " + std::to_string(i + 1) + " is not a DCS");
    }
    if (set.size() != c.l) {
      out.push_back("set " + std::to_string(i + 1) + " has size " +
                    std::to_string(set.size()) + ", expected " +
                    std::to_string(c.l));
    }
    for (std::size_t j = i + 1; j < c.sets.size(); ++j) {
      std::vector<Site> common;
      std::set_intersection(set.sensors.begin(), set.sensors.end(),
                            c.sets[j].sensors.begin(), c.sets[j].sensors.end(),
                            std::back_inserter(common));
      if (!common.empty()) {
        out.push_back("sets " + std::to_string(i + 1) + " and " +
                      std::to_string(j + 1) + " share a site");
      }
    }
  }
  return out;
}

void check_discriminable(const BipartiteGraph& g) {
  const auto n = static_cast<Transformer>(g.num_transformers());
  if (n == 0) throw ArgumentError("graph has no transformers");
  for (Transformer t = 0; t < n; ++t) {
    if (g.neighborhood(t).empty()) {
      throw InfeasibleError("transformer " + g.transformer_id(t) +
                                " reaches no sensor site",
                            t, t);
    }
  }
  for (Transformer a = 0; a < n; ++a) {
    for (Transformer b = a + 1; b < n; ++b) {
      if (g.neighborhood(a) == g.neighborhood(b)) {
        throw InfeasibleError("transformers " + g.transformer_id(a) + " and " +
                                  g.transformer_id(b) +
                                  " have identical neighborhoods",
                              a, b);
      }
    }
  }
}

namespace {

std::vector<Site> symmetric_difference(const std::vector<Site>& a,
                                       const std::vector<Site>& b) {
  std::vector<Site> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
  return out;
}

// Cover and separation rows for block k: every transformer hits the block and
// every pair is split by it.
void add_dcs_rows(const BipartiteGraph& g, std::size_t k, std::size_t width,
                  std::vector<Constraint>& rows) {
  const auto n = static_cast<Transformer>(g.num_transformers());
  for (Transformer t = 0; t < n; ++t) {
    Constraint c{std::vector<double>(width, 0.0), Relation::kGreaterEqual, 1.0};
    for (Site s : g.neighborhood(t)) c.coefficients[block_variable(g, s, k)] = 1.0;
    rows.push_back(std::move(c));
  }
  for (Transformer a = 0; a < n; ++a) {
    for (Transformer b = a + 1; b < n; ++b) {
      Constraint c{std::vector<double>(width, 0.0), Relation::kGreaterEqual, 1.0};
      for (Site s : symmetric_difference(g.neighborhood(a), g.neighborhood(b))) {
        c.coefficients[block_variable(g, s, k)] = 1.0;
      }
      rows.push_back(std::move(c));
    }
  }
}

}  // namespace

BinaryProgram k_dcs_program(const BipartiteGraph& g, std::size_t k,
                            bool symmetry_breaking) {
  if (k == 0) throw ArgumentError("K must be positive");
  const std::size_t n_sites = g.num_sites();
  const std::size_t width = k * n_sites;
  BinaryProgram p;
  p.sense = optim::Sense::kMinimize;
  p.objective.assign(width, 0.0);
  for (std::size_t s = 0; s < n_sites; ++s) p.objective[s] = 1.0;

  // Equal sizes: block k matches block 0, whose size is l.
  for (std::size_t b = 1; b < k; ++b) {
    Constraint c{std::vector<double>(width, 0.0), Relation::kEqual, 0.0};
    for (std::size_t s = 0; s < n_sites; ++s) {
      c.coefficients[b * n_sites + s] = 1.0;
      c.coefficients[s] = -1.0;
    }
    p.constraints.push_back(std::move(c));
  }
  // Disjointness, linearized from sum_s (x_sk - x_sk')^2 = 2l.
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      for (std::size_t s = 0; s < n_sites; ++s) {
        Constraint c{std::vector<double>(width, 0.0), Relation::kLessEqual, 1.0};
        c.coefficients[a * n_sites + s] = 1.0;
        c.coefficients[b * n_sites + s] = 1.0;
        p.constraints.push_back(std::move(c));
      }
    }
  }
  // The same condition summed over blocks. Redundant for binary points but it
  // cuts off most of the fractional ones.
  if (k > 2) {
    for (std::size_t s = 0; s < n_sites; ++s) {
      Constraint c{std::vector<double>(width, 0.0), Relation::kLessEqual, 1.0};
      for (std::size_t b = 0; b < k; ++b) c.coefficients[b * n_sites + s] = 1.0;
      p.constraints.push_back(std::move(c));
    }
  }
  for (std::size_t b = 0; b < k; ++b) add_dcs_rows(g, b, width, p.constraints);

  if (symmetry_breaking) {
    // min(block b) < min(block b+1): a site in block b+1 needs a smaller site
    // in block b.
    for (std::size_t b = 0; b + 1 < k; ++b) {
      for (std::size_t s = 0; s < n_sites; ++s) {
        Constraint c{std::vector<double>(width, 0.0), Relation::kLessEqual, 0.0};
        c.coefficients[(b + 1) * n_sites + s] = 1.0;
        for (std::size_t r = 0; r < s; ++r) c.coefficients[b * n_sites + r] = -1.0;
        p.constraints.push_back(std::move(c));
      }
    }
  }
  return p;
}

bool satisfies_quadratic_encoding(const BipartiteGraph& g, std::size_t k,
                                  std::span<const double> x) {
  const std::size_t n_sites = g.num_sites();
  if (x.size() != k * n_sites) throw ArgumentError("assignment width mismatch");
  auto at = [&](std::size_t s, std::size_t b) { return x[b * n_sites + s]; };

  double l = 0.0;
  for (std::size_t s = 0; s < n_sites; ++s) l += at(s, 0);
  for (std::size_t b = 0; b < k; ++b) {
    double size = 0.0;
    for (std::size_t s = 0; s < n_sites; ++s) size += at(s, b);
    if (size != l) return false;
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      double sq = 0.0;
      for (std::size_t s = 0; s < n_sites; ++s) {
        const double d = at(s, a) - at(s, b);
        sq += d * d;
      }
      if (sq != 2.0 * l) return false;
    }
  }
  const auto n = static_cast<Transformer>(g.num_transformers());
  for (std::size_t b = 0; b < k; ++b) {
    for (Transformer t = 0; t < n; ++t) {
      double hit = 0.0;
      for (Site s : g.neighborhood(t)) hit += at(static_cast<std::size_t>(s), b);
      if (hit < 1.0) return false;
    }
    for (Transformer t = 0; t < n; ++t) {
      for (Transformer u = t + 1; u < n; ++u) {
        double hit = 0.0;
        for (Site s : symmetric_difference(g.neighborhood(t), g.neighborhood(u))) {
          hit += at(static_cast<std::size_t>(s), b);
        }
        if (hit < 1.0) return false;
      }
    }
  }
  return true;
}

ConfigurationSet decode_blocks(const BipartiteGraph& g, std::size_t k,
                               std::span<const double> x) {
  const std::size_t n_sites = g.num_sites();
  ConfigurationSet c;
  for (std::size_t b = 0; b < k; ++b) {
    std::vector<Site> members;
    for (std::size_t s = 0; s < n_sites; ++s) {
      if (x[b * n_sites + s] > 0.5) members.push_back(static_cast<Site>(s));
    }
    c.sets.emplace_back(std::move(members));
  }
  c.l = c.sets.empty() ? 0 : c.sets.front().size();
  return c;
}

ConfigurationSet solve_k_dcs(const BipartiteGraph& g, std::size_t k,
                             const MdcsOptions& opt,
                             std::optional<std::size_t> max_size) {
  if (k == 0) throw ArgumentError("K must be positive");
  check_discriminable(g);
  BinaryProgram p = k_dcs_program(g, k, opt.symmetry_breaking);
  optim::BilpOptions bilp = opt.bilp;
  if (max_size) {
    bilp.cutoff = static_cast<double>(*max_size);
    Constraint cap{std::vector<double>(p.num_variables(), 0.0), Relation::kLessEqual,
                   static_cast<double>(*max_size)};
    std::fill_n(cap.coefficients.begin(), g.num_sites(), 1.0);
    p.constraints.push_back(std::move(cap));
  }
  const optim::Solution sol = optim::solve_bilp(p, bilp);
  if (!sol.optimal()) {
    throw InfeasibleError(max_size ? "no " + std::to_string(k) +
                                         " disjoint DCSs of size <= " +
                                         std::to_string(*max_size)
                                   : "no " + std::to_string(k) + " disjoint DCSs");
  }
  ConfigurationSet c = decode_blocks(g, k, sol.assignment);
  if (!configuration_violations(g, c).empty()) {
    throw SolverError("solver returned an invalid configuration");
  }
  return c;
}

CodeSet solve_mdcs(const BipartiteGraph& g, const MdcsOptions& opt) {
  return solve_k_dcs(g, 1, opt).sets.front();
}

ConfigurationSet find_kmax(const BipartiteGraph& g, const MdcsOptions& opt) {
  ConfigurationSet best = solve_k_dcs(g, 1, opt);
  const std::size_t m = best.l;
  const std::size_t n_sites = g.num_sites();
  // K disjoint sets of size m need K*m distinct sites.
  const std::size_t k_ceiling = n_sites / m;

  auto attempt = [&](std::size_t k) -> std::optional<ConfigurationSet> {
    try {
      return solve_k_dcs(g, k, opt, m);
    } catch (const InfeasibleError&) {
      return std::nullopt;
    }
  };

  if (opt.k_search == KSearch::kLinear) {
    for (std::size_t k = 2; k <= k_ceiling; ++k) {
      auto c = attempt(k);
      if (!c) break;
      best = std::move(*c);
    }
    return best;
  }

  std::size_t lo = 1;
  std::size_t hi = k_ceiling;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (auto c = attempt(mid)) {
      lo = mid;
      best = std::move(*c);
    } else {
      hi = mid - 1;
    }
  }
  return best;
}

ConfigurationSet greedy_k(const BipartiteGraph& g,
                          std::optional<std::size_t> k_target,
                          const MdcsOptions& opt) {
  if (k_target && *k_target == 0) throw ArgumentError("K target must be positive");
  ConfigurationSet out;
  out.sets.push_back(solve_mdcs(g, opt));
  out.l = out.sets.front().size();

  std::vector<Site> used = out.sets.front().sensors;
  optim::BilpOptions bilp = opt.bilp;
  bilp.cutoff = static_cast<double>(out.l);
  while (!k_target || out.k() < *k_target) {
    BinaryProgram p = k_dcs_program(g, 1);
    for (Site s : used) {
      Constraint c{std::vector<double>(g.num_sites(), 0.0), Relation::kLessEqual, 0.0};
      c.coefficients[static_cast<std::size_t>(s)] = 1.0;
      p.constraints.push_back(std::move(c));
    }
    const optim::Solution sol = optim::solve_bilp(p, bilp);
    if (!sol.optimal()) break;
    CodeSet next = decode_blocks(g, 1, sol.assignment).sets.front();
    used.insert(used.end(), next.sensors.begin(), next.sensors.end());
    out.sets.push_back(std::move(next));
  }
  if (!configuration_violations(g, out).empty()) {
    throw SolverError("greedy produced an invalid configuration");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

namespace {

using Mask = std::uint32_t;

struct MaskGraph {
  std::vector<Mask> nb;

  explicit MaskGraph(const BipartiteGraph& g) {
    for (std::size_t t = 0; t < g.num_transformers(); ++t) {
      Mask m = 0;
      for (Site s : g.neighborhood(static_cast<Transformer>(t))) m |= Mask{1} << s;
      nb.push_back(m);
    }
  }

  bool discriminates(Mask active) const {
    std::vector<Mask> codes;
    codes.reserve(nb.size());
    for (Mask m : nb) {
      const Mask code = m & active;
      if (code == 0) return false;
      codes.push_back(code);
    }
    std::sort(codes.begin(), codes.end());
    return std::adjacent_find(codes.begin(), codes.end()) == codes.end();
  }
};

void guard(const BipartiteGraph& g) {
  if (g.num_sites() > kBruteForceSiteLimit) {
    throw ArgumentError("brute force refused: more than " +
                        std::to_string(kBruteForceSiteLimit) + " sites");
  }
  if (g.num_transformers() == 0) throw ArgumentError("graph has no transformers");
}

// All DCSs of the smallest size, in increasing mask order.
std::vector<Mask> all_mdcs(const BipartiteGraph& g) {
  const MaskGraph mg(g);
  const std::size_t n = g.num_sites();
  const Mask limit = n == 32 ? ~Mask{0} : (Mask{1} << n);
  for (std::size_t r = 1; r <= n; ++r) {
    std::vector<Mask> found;
    // Gosper's hack: all r-subsets of n bits.
    for (Mask m = (Mask{1} << r) - 1; m < limit && m != 0;) {
      if (mg.discriminates(m)) found.push_back(m);
      const Mask low = m & (~m + 1);
      const Mask ripple = m + low;
      if (ripple == 0 || ripple >= limit) break;
      m = (((ripple ^ m) >> 2) / low) | ripple;
    }
    if (!found.empty()) return found;
  }
  return {};
}

struct PackingSearch {
  const std::vector<Mask>& sets;
  std::size_t width;
  std::vector<std::size_t> chosen, best;

  void run(std::size_t i, Mask used) {
    if (chosen.size() > best.size()) best = chosen;
    if (i == sets.size()) return;
    const std::size_t free_sites =
        width - static_cast<std::size_t>(std::popcount(used));
    const std::size_t per_set = static_cast<std::size_t>(std::popcount(sets[0]));
    if (chosen.size() + free_sites / per_set <= best.size()) return;
    if ((sets[i] & used) == 0) {
      chosen.push_back(i);
      run(i + 1, used | sets[i]);
      chosen.pop_back();
    }
    run(i + 1, used);
  }
};

}  // namespace

std::optional<std::size_t> brute_force_mdcs_size(const BipartiteGraph& g) {
  guard(g);
  const auto found = all_mdcs(g);
  if (found.empty()) return std::nullopt;
  return static_cast<std::size_t>(std::popcount(found.front()));
}

ConfigurationSet brute_force_kmax(const BipartiteGraph& g) {
  guard(g);
  const auto found = all_mdcs(g);
  if (found.empty()) throw InfeasibleError("graph has no discriminating code set");
  PackingSearch search{found, g.num_sites(), {}, {}};
  search.run(0, 0);

  ConfigurationSet c;
  for (std::size_t idx : search.best) {
    std::vector<Site> members;
    for (std::size_t s = 0; s < g.num_sites(); ++s) {
      if (found[idx] >> s & 1U) members.push_back(static_cast<Site>(s));
    }
    c.sets.emplace_back(std::move(members));
  }
  c.l = static_cast<std::size_t>(std::popcount(found.front()));
  return c;
}

void write_configuration(const BipartiteGraph& g, const ConfigurationSet& c,
                         std::ostream& out) {
  out << "kmax " << c.k() << " l " << c.l << '\n';
  for (std::size_t i = 0; i < c.sets.size(); ++i) {
    out << "mdcs " << i + 1 << ':';
    for (Site s : c.sets[i].sensors) out << ' ' << g.site_id(s);
    out << '\n';
  }
}

}  // namespace mtdgrid
