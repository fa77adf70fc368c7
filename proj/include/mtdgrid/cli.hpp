#ifndef MTDGRID_CLI_HPP
#define MTDGRID_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mtdgrid/graph.hpp"
#include "mtdgrid/mdcs.hpp"

namespace mtdgrid::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kInfeasibleInstance = 3,
  kSolverFailure = 4,
};

enum class InputKind { kMatpower, kGraph };

struct RunConfig {
  std::string input;
  std::optional<InputKind> kind;  // inferred from the extension when unset
  int hops = 2;
  SiteRule sites = SiteRule::kLineEnds;
  std::vector<std::string> hvts;  // branch rows or "from-to" pairs
  bool symmetry_break = false;
  KSearch ksearch = KSearch::kLinear;
  std::size_t trials = 100;
  std::optional<std::uint64_t> seed;
  bool integer_utilities = false;
  bool cost_on_miss = true;
  bool parallel_trials = false;
  std::string out_dir = ".";
};

// Reads the input named by the config (MATPOWER case or graph text).
BipartiteGraph load_input(const RunConfig& config);

// Each command writes its artifact into config.out_dir, prints results to
// `out` and diagnostics (including timing) to `err`, and returns an ExitCode.
int cmd_build_graph(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_kmax(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_experiment(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (subcommand + flags) and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mtdgrid::cli

#endif  // MTDGRID_CLI_HPP
