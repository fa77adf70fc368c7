#include "mtdgrid/trials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "mtdgrid/errors.hpp"

namespace mtdgrid {

UtilityProfile draw_profile(const BipartiteGraph& g, std::uint64_t seed,
                            std::size_t trial, bool integer_utilities) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> real(0.0, kMaxUtility);
  std::uniform_int_distribution<int> whole(0, static_cast<int>(kMaxUtility));
  auto draw = [&] {
    return integer_utilities ? static_cast<double>(whole(rng)) : real(rng);
  };

  UtilityProfile u;
  u.transformer_utility.resize(g.num_transformers());
  for (double& v : u.transformer_utility) v = draw();
  for (std::size_t s = 0; s < g.num_sites(); ++s) {
    u.attack_cost[static_cast<Site>(s)] = draw();
  }
  return u;
}

namespace {

TrialRow evaluate(const BipartiteGraph& g, const ConfigurationSet& greedy,
                  const ConfigurationSet& optimal, const UtilityProfile& u,
                  const GameOptions& opt) {
  const GameMatrix gk = build_game(g, greedy, u, opt);
  const GameMatrix gmax = build_game(g, optimal, u, opt);
  TrialRow row;
  row.urs_k = urs_value(gk);
  row.urs_kmax = urs_value(gmax);
  row.sse_k = solve_sse(gk).defender_value;
  row.sse_kmax = solve_sse(gmax).defender_value;
  return row;
}

}  // namespace

TrialReport run_trials(const BipartiteGraph& g, const ConfigurationSet& greedy,
                       const ConfigurationSet& optimal, std::size_t n_trials,
                       std::uint64_t seed, const TrialOptions& opt) {
  if (n_trials == 0) throw ArgumentError("need at least one trial");
  for (const ConfigurationSet* c : {&greedy, &optimal}) {
    if (const auto v = configuration_violations(g, *c); !v.empty()) {
      throw ArgumentError("invalid configuration: " + v.front());
    }
  }

  TrialReport report;
  report.rows.resize(n_trials);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < n_trials; i += step) {
      const UtilityProfile u = draw_profile(g, seed, i, opt.integer_utilities);
      report.rows[i] = evaluate(g, greedy, optimal, u, opt.game);
    }
  };
  if (opt.parallel) {
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, n_trials);
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w, workers);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  } else {
    work(0, 1);
  }

  const double n = static_cast<double>(n_trials);
  for (const TrialRow& row : report.rows) {
    const auto v = row.values();
    for (std::size_t c = 0; c < 4; ++c) report.mean[c] += v[c] / n;
  }
  if (n_trials > 1) {
    for (const TrialRow& row : report.rows) {
      const auto v = row.values();
      for (std::size_t c = 0; c < 4; ++c) {
        const double d = v[c] - report.mean[c];
        report.stddev[c] += d * d;
      }
    }
    for (double& s : report.stddev) s = std::sqrt(s / (n - 1.0));
  }
  return report;
}

void write_csv(const TrialReport& report, std::ostream& out) {
  auto line = [&out](const std::string& label, const std::array<double, 4>& v) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%.4f,%.4f,%.4f,%.4f\n", label.c_str(),
                  v[0] + 0.0, v[1] + 0.0, v[2] + 0.0, v[3] + 0.0);
    out << buf;
  };
  out << "trial,urs_k,urs_kmax,sse_k,sse_kmax\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    line(std::to_string(i + 1), report.rows[i].values());
  }
  line("mean", report.mean);
  line("std", report.stddev);
}

}  // namespace mtdgrid
