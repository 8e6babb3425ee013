#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "otw/algorithms.hpp"
#include "otw/brute_force.hpp"
#include "otw/generate.hpp"

namespace otw {

struct BenchSpec {
  std::vector<std::string> families;
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> algorithms;
  std::string oracle = "exact";
  std::string deadline_oracle = "exact";
  bool brute_force = true;
  bool timing = false;  // elapsed column stays 0 unless asked, keeping files reproducible
  GenSpec base;         // length range, horizon, grain and weights for every instance
};

struct BenchRow {
  std::string instance;
  std::size_t n = 0;
  std::optional<Rational> l_min, l_max, l;
  std::string algorithm;
  std::string oracle;
  Rational alg_reward;
  std::optional<Rational> brute_reward;
  std::optional<Rational> ratio;  // brute / alg; empty when alg collected nothing but OPT > 0
  Rational bound;
  bool infeasible = false;
  double elapsed = 0;
};

inline const std::string bench_header =
  "instance,n,l_min,l_max,l,algorithm,oracle,alg_reward,brute_reward,empirical_ratio,"
  "theoretical_bound,elapsed";

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string opt_text(const std::optional<Rational>& r, const char* none) {
  return r ? to_string(*r) : none;
}

}  // namespace detail

/// One row per (instance, algorithm); rows come out in (instance, algorithm)
/// order whatever the evaluation order was.
inline std::vector<BenchRow> run_bench(const BenchSpec& spec, const OrienteeringOracle& oracle,
                                       const DeadlineOracle& deadline_oracle) {
  if (spec.brute_force)
    for (std::size_t n : spec.sizes)
      if (n > 12) throw Error(ErrorKind::guard, "brute force only runs for n <= 12");
  std::vector<Algorithm> algorithms;
  for (const auto& name : spec.algorithms) {
    auto a = parse_algorithm(name);
    if (!a) throw Error(ErrorKind::argument, "unknown algorithm '" + name + "'");
    algorithms.push_back(*a);
  }
  std::vector<BenchRow> rows;
  for (const auto& family : spec.families)
    for (std::size_t n : spec.sizes)
      for (std::uint64_t seed : spec.seeds)
        for (std::size_t i = 0; i < algorithms.size(); ++i) {
          GenSpec g = spec.base;
          g.family = family;
          g.n = n;
          g.seed = seed;
          g.free_endpoints = algorithms[i] == Algorithm::free_l2 ||
                             algorithms[i] == Algorithm::free_general;
          TwInstance x = generate_instance(g);
          WindowStats stats = window_stats(x);
          BenchRow row;
          row.instance = family + "-n" + std::to_string(n) + "-s" + std::to_string(seed) +
                         (g.free_endpoints ? "-free" : "");
          row.n = n;
          row.l_min = stats.l_min;
          row.l_max = stats.l_max;
          row.l = stats.l_ratio;
          row.algorithm = spec.algorithms[i];
          row.oracle = oracle.spec().name + "/" + deadline_oracle.spec().name;
          try {
            SolveReport r = solve(algorithms[i], x, oracle, deadline_oracle);
            row.alg_reward = r.walk.reward;
            row.bound = r.bound;
            if (spec.timing) row.elapsed = r.elapsed_seconds;
            if (spec.brute_force) {
              row.brute_reward = brute_force_opt(x).reward;
              if (row.alg_reward > 0)
                row.ratio = *row.brute_reward / row.alg_reward;
              else if (*row.brute_reward == 0)
                row.ratio = Rational(1);
            }
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::infeasible) throw;
            row.infeasible = true;
          }
          rows.push_back(row);
        }
  return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << bench_header << "\n";
  for (const BenchRow& r : rows) {
    std::ostringstream elapsed;
    elapsed << r.elapsed;
    out << detail::csv_field(r.instance) << "," << r.n << "," << detail::opt_text(r.l_min, "")
        << "," << detail::opt_text(r.l_max, "") << "," << detail::opt_text(r.l, "") << ","
        << detail::csv_field(r.algorithm) << "," << detail::csv_field(r.oracle) << ",";
    if (r.infeasible) {
      out << "infeasible,,,,";
    } else {
      out << to_string(r.alg_reward) << "," << detail::opt_text(r.brute_reward, "") << ","
          << (r.brute_reward ? detail::opt_text(r.ratio, "inf") : "") << "," << to_string(r.bound)
          << ",";
    }
    out << elapsed.str() << "\n";
  }
  return out.str();
}

/// Maximum empirical ratio per algorithm, and how many rows broke their bound.
inline std::string bench_summary(const std::vector<BenchRow>& rows) {
  std::map<std::string, std::pair<std::optional<Rational>, int>> worst;
  std::map<std::string, bool> unbounded;
  for (const BenchRow& r : rows) {
    auto& [max_ratio, violations] = worst[r.algorithm];
    if (r.infeasible || !r.brute_reward) continue;
    if (!r.ratio) {
      unbounded[r.algorithm] = true;
      ++violations;
      continue;
    }
    if (!max_ratio || *r.ratio > *max_ratio) max_ratio = r.ratio;
    if (*r.ratio > r.bound) ++violations;
  }
  std::ostringstream out;
  for (const auto& [name, entry] : worst) {
    out << "summary " << name << ": max_ratio="
        << (unbounded[name] ? std::string("inf") : detail::opt_text(entry.first, "-"))
        << " violations=" << entry.second << "\n";
  }
  return out.str();
}

}  // namespace otw
