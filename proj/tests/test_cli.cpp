#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mtdgrid/cli.hpp"
#include "oracles.hpp"

using namespace mtdgrid;
using mtdgrid::testing::data_path;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mtdgrid");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mtdgrid_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("build-graph from a MATPOWER case") {
  const fs::path dir = scratch("build14");
  const Run r = run({"build-graph", "--input", data_path("case14.m"), "--hvts",
                     "4-7,4-9,5-6,7-8,7-9", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "|T|=5 |S|=40 edges=" +
                     std::to_string(load_graph_file((dir / "graph.txt").string()).num_edges()) +
                     "\n");
  const Run auto_hvts = run({"build-graph", "--input", data_path("case14.m"), "--format",
                             "matpower", "--sites", "buses", "--out", dir.string()});
  CHECK(auto_hvts.code == 0);
  CHECK(auto_hvts.out.starts_with("|T|=3 |S|=14 "));
}

TEST_CASE("build-graph passes graph files through") {
  const fs::path dir = scratch("passthrough");
  const Run first = run({"build-graph", "--input", data_path("tiny.graph"), "--out",
                         (dir / "a").string()});
  CHECK(first.code == 0);
  CHECK(first.out == "|T|=2 |S|=4 edges=4\n");
  CHECK(load_graph_file((dir / "a" / "graph.txt").string()) ==
        load_graph_file(data_path("tiny.graph")));
  const Run second = run({"build-graph", "--input", (dir / "a" / "graph.txt").string(),
                          "--out", (dir / "b").string()});
  CHECK(second.code == 0);
  CHECK(slurp(dir / "a" / "graph.txt") == slurp(dir / "b" / "graph.txt"));
}

TEST_CASE("input errors exit with 2") {
  const fs::path dir = scratch("errors");
  const Run missing = run({"kmax", "--input", (dir / "nope.graph").string()});
  CHECK(missing.code == 2);
  CHECK_FALSE(missing.err.empty());
  CHECK(run({"kmax"}).code == 2);
  CHECK(run({"kmax", "--input", data_path("tiny.graph"), "--ksearch", "sideways"}).code == 2);
  std::ofstream(dir / "bad.graph") << "t a\nt b\ne a b\n";
  CHECK(run({"kmax", "--input", (dir / "bad.graph").string()}).code == 2);
  CHECK(run({"build-graph", "--input", data_path("case14.m"), "--hvts", "99",
             "--out", dir.string()})
            .code == 2);
}

TEST_CASE("kmax command") {
  const fs::path dir = scratch("kmax");
  const Run r = run({"kmax", "--input", data_path("tiny.graph"), "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.starts_with("# optimal\nkmax 2 l 2\n"));
  CHECK(r.out.find("# greedy\n") != std::string::npos);
  CHECK(r.err.find("optimal_seconds=") != std::string::npos);
  CHECK(r.err.find("greedy_seconds=") != std::string::npos);
  CHECK(slurp(dir / "solution.txt").starts_with("kmax 2 l 2\nmdcs 1: "));

  const Run twins = run({"kmax", "--input", data_path("twins.graph"), "--out", dir.string()});
  CHECK(twins.code == 3);
  CHECK(twins.err.find("t1") != std::string::npos);
  CHECK(twins.err.find("t2") != std::string::npos);

  const Run flags = run({"kmax", "--input", data_path("tiny.graph"), "--symmetry-break",
                         "--ksearch", "binary", "--out", dir.string()});
  CHECK(flags.code == 0);
  CHECK(flags.out.starts_with("# optimal\nkmax 2 l 2\n"));
}

TEST_CASE("experiment command") {
  const fs::path dir = scratch("experiment");
  const std::vector<std::string> base{"experiment", "--input", data_path("tiny.graph"),
                                      "--seed", "7", "--trials", "100"};
  auto with_out = [&](const std::string& sub) {
    auto args = base;
    args.push_back("--out");
    args.push_back((dir / sub).string());
    return args;
  };
  const Run a = run(with_out("a"));
  const Run b = run(with_out("b"));
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  const std::string csv = slurp(dir / "a" / "trials.csv");
  CHECK(csv == slurp(dir / "b" / "trials.csv"));
  CHECK(csv.starts_with("trial,urs_k,urs_kmax,sse_k,sse_kmax\n"));

  auto parallel = with_out("c");
  parallel.push_back("--parallel-trials");
  CHECK(run(parallel).code == 0);
  CHECK(slurp(dir / "c" / "trials.csv") == csv);

  const Run one = run({"experiment", "--input", data_path("tiny.graph"), "--seed", "7",
                       "--trials", "1", "--integer-utilities", "--cost-on-miss", "false",
                       "--out", (dir / "one").string()});
  CHECK(one.code == 0);
  CHECK(slurp(dir / "one" / "trials.csv").ends_with("std,0.0000,0.0000,0.0000,0.0000\n"));

  CHECK(run({"experiment", "--input", data_path("tiny.graph"), "--out", dir.string()}).code == 2);
  CHECK(run({"experiment", "--input", data_path("tiny.graph"), "--seed", "1", "--trials", "0",
             "--out", dir.string()})
            .code == 2);
}
