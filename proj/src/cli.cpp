#include "mtdgrid/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "mtdgrid/errors.hpp"
#include "mtdgrid/trials.hpp"

namespace mtdgrid::cli {
namespace {

namespace fs = std::filesystem;

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasibleInstance;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const StructuralError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ArgumentError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

MdcsOptions solver_options(const RunConfig& config) {
  MdcsOptions opt;
  opt.symmetry_breaking = config.symmetry_break;
  opt.k_search = config.ksearch;
  return opt;
}

fs::path output_path(const RunConfig& config, const std::string& name) {
  fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ArgumentError("cannot create output directory " + config.out_dir);
  return dir / name;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot write " + path.string());
  return f;
}

template <typename F>
auto timed(double& seconds, F&& f) {
  const auto start = std::chrono::steady_clock::now();
  auto result = f();
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string mean_std(double mean, double sd) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f+-%.2f", mean, sd);
  return buf;
}

}  // namespace

BipartiteGraph load_input(const RunConfig& config) {
  if (config.input.empty()) throw ArgumentError("no --input given");
  if (!fs::exists(config.input)) {
    throw ArgumentError("input file not found: " + config.input);
  }
  InputKind kind = config.kind.value_or(
      fs::path(config.input).extension() == ".m" ? InputKind::kMatpower
                                                 : InputKind::kGraph);
  if (kind == InputKind::kGraph) return load_graph_file(config.input);

  std::ifstream in(config.input);
  if (!in) throw ArgumentError("cannot open " + config.input);
  PowerGrid grid = parse_matpower(in);
  if (!config.hvts.empty()) {
    std::vector<std::size_t> selected;
    for (const std::string& token : config.hvts) {
      selected.push_back(resolve_branch(grid, token));
    }
    grid = grid.with_transformers(std::move(selected));
  }
  return build_bipartite(grid, grid.transformer_branches(), config.hops,
                         config.sites);
}

int cmd_build_graph(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const BipartiteGraph g = load_input(config);
    const fs::path path = output_path(config, "graph.txt");
    std::ofstream f = open_output(path);
    save_graph(g, f);
    out << "|T|=" << g.num_transformers() << " |S|=" << g.num_sites()
        << " edges=" << g.num_edges() << '\n';
    return static_cast<int>(kSuccess);
  });
}

int cmd_kmax(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const BipartiteGraph g = load_input(config);
    const MdcsOptions opt = solver_options(config);
    double optimal_seconds = 0.0;
    double greedy_seconds = 0.0;
    const ConfigurationSet optimal =
        timed(optimal_seconds, [&] { return find_kmax(g, opt); });
    const ConfigurationSet greedy =
        timed(greedy_seconds, [&] { return greedy_k(g, std::nullopt, opt); });

    std::ofstream f = open_output(output_path(config, "solution.txt"));
    write_configuration(g, optimal, f);

    out << "# optimal\n";
    write_configuration(g, optimal, out);
    out << "# greedy\n";
    write_configuration(g, greedy, out);
    err << "optimal_seconds=" << optimal_seconds
        << " greedy_seconds=" << greedy_seconds << '\n';
    return static_cast<int>(kSuccess);
  });
}

int cmd_experiment(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!config.seed) throw ArgumentError("experiment mode requires --seed");
    if (config.trials == 0) throw ArgumentError("--trials must be at least 1");
    const BipartiteGraph g = load_input(config);
    const MdcsOptions opt = solver_options(config);
    const ConfigurationSet optimal = find_kmax(g, opt);
    const ConfigurationSet greedy = greedy_k(g, std::nullopt, opt);

    TrialOptions topt;
    topt.integer_utilities = config.integer_utilities;
    topt.game.cost_on_miss = config.cost_on_miss;
    topt.parallel = config.parallel_trials;
    const TrialReport report =
        run_trials(g, greedy, optimal, config.trials, *config.seed, topt);

    std::ofstream f = open_output(output_path(config, "trials.csv"));
    write_csv(report, f);

    const std::size_t nodes = g.num_transformers() + g.num_sites();
    out << "|S|+|T|  A_D (K/Kmax)  A_A (K/Kmax)  URS(K)  URS(Kmax)  SSE(K)  SSE(Kmax)\n";
    out << nodes << "  " << greedy.k() << '/' << optimal.k() << "  "
        << greedy.sites().size() << '/' << optimal.sites().size() << "  "
        << mean_std(report.mean[0], report.stddev[0]) << "  "
        << mean_std(report.mean[1], report.stddev[1]) << "  "
        << mean_std(report.mean[2], report.stddev[2]) << "  "
        << mean_std(report.mean[3], report.stddev[3]) << '\n';
    return static_cast<int>(kSuccess);
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentially immune sensor configurations and MTD strategies"};
  app.require_subcommand(1);

  RunConfig config;
  std::string format;
  std::string sites = "line-ends";
  std::string ksearch = "linear";
  std::string cost_on_miss = "true";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", config.input, "MATPOWER case (.m) or graph text file")
        ->required();
    sub->add_option("--format", format, "input kind")
        ->check(CLI::IsMember({"matpower", "graph"}));
    sub->add_option("--hops", config.hops, "hop limit for signal propagation")
        ->check(CLI::PositiveNumber);
    sub->add_option("--sites", sites, "candidate site rule")
        ->check(CLI::IsMember({"line-ends", "buses"}));
    sub->add_option("--hvts", config.hvts, "transformer branches (row or from-to)")
        ->delimiter(',');
    sub->add_flag("--symmetry-break", config.symmetry_break,
                  "order blocks to prune permuted solutions");
    sub->add_option("--ksearch", ksearch, "K_max search order")
        ->check(CLI::IsMember({"linear", "binary"}));
    sub->add_option("--out", config.out_dir, "output directory");
  };

  CLI::App* build = app.add_subcommand("build-graph", "build and save the monitoring graph");
  CLI::App* kmax = app.add_subcommand("kmax", "optimal and greedy differentially immune MDCS families");
  CLI::App* experiment = app.add_subcommand("experiment", "URS vs SSE randomized trials");
  for (CLI::App* sub : {build, kmax, experiment}) common(sub);
  experiment->add_option("--trials", config.trials, "number of trials");
  experiment->add_option("--seed", config.seed, "RNG seed");
  experiment->add_flag("--integer-utilities", config.integer_utilities,
                       "draw integer utilities");
  experiment->add_option("--cost-on-miss", cost_on_miss, "charge cost for inactive sites")
      ->check(CLI::IsMember({"true", "false"}));
  experiment->add_flag("--parallel-trials", config.parallel_trials,
                       "evaluate trials concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInputError;
  }

  if (!format.empty()) {
    config.kind = format == "matpower" ? InputKind::kMatpower : InputKind::kGraph;
  }
  config.sites = sites == "buses" ? SiteRule::kBuses : SiteRule::kLineEnds;
  config.ksearch = ksearch == "binary" ? KSearch::kBinary : KSearch::kLinear;
  config.cost_on_miss = cost_on_miss == "true";

  if (build->parsed()) return cmd_build_graph(config, out, err);
  if (kmax->parsed()) return cmd_kmax(config, out, err);
  return cmd_experiment(config, out, err);
}

}  // namespace mtdgrid::cli
