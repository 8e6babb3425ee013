#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otw/algorithms.hpp"
#include "otw/bench.hpp"
#include "otw/brute_force.hpp"
#include "otw/decomposition.hpp"
#include "otw/generate.hpp"
#include "otw/io.hpp"

namespace otw {

enum ExitCode { exit_ok = 0, exit_usage = 1, exit_infeasible = 2 };

inline std::unique_ptr<OrienteeringOracle> make_oracle(const std::string& name) {
  if (name == "exact") return std::make_unique<ExactOrienteering>();
  if (name == "greedy") return std::make_unique<GreedyOrienteering>();
  throw Error(ErrorKind::argument, "unknown oracle '" + name + "'");
}

inline std::unique_ptr<DeadlineOracle> make_deadline_oracle(const std::string& name) {
  if (name == "exact") return std::make_unique<ExactDeadline>();
  if (name == "layered") return std::make_unique<LayeredDeadline>();
  throw Error(ErrorKind::argument, "unknown deadline oracle '" + name + "'");
}

inline void print_walk(std::ostream& out, const WalkSolution& w) {
  out << "reward: " << to_string(w.reward) << "\n";
  out << "walk:\n";
  for (const Visit& v : w.schedule)
    out << "  " << v.vertex << " @ " << to_string(v.time) << (v.collect ? " collect" : "") << "\n";
  out << "collected:";
  for (Vertex v : w.collected) out << " " << v;
  out << "\n";
}

inline void print_report(std::ostream& out, const SolveReport& r, bool timing) {
  out << "algorithm: " << r.algorithm << "\n";
  print_walk(out, r.walk);
  out << "bound: OPT <= " << to_string(r.bound) << " * reward (beta " << r.beta << ", alpha "
      << to_string(r.alpha) << ", " << r.asymptotic << ")\n";
  out << "versions:\n";
  for (const VersionResult& v : r.versions)
    out << "  " << v.family << " " << v.label << " " << to_string(v.reward) << "\n";
  if (timing) out << "elapsed: " << r.elapsed_seconds << "s\n";
}

namespace detail {

inline Rational option_rational(const std::string& text, const char* name) {
  auto r = parse_rational(text);
  if (!r) throw Error(ErrorKind::argument, std::string("--") + name + ": not a number: " + text);
  return *r;
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorKind::argument, "cannot write " + path);
  file << text;
}

inline void apply_policy(TwInstance& x, bool wait, bool no_wait) {
  if (wait && no_wait) throw Error(ErrorKind::argument, "--wait and --no-wait are exclusive");
  if (wait) x.wait_policy = WaitPolicy::wait;
  if (no_wait) x.wait_policy = WaitPolicy::no_wait;
}

}  // namespace detail

/// The `otw` command line. Returns the process exit code: 0 ok, 1 usage or
/// precondition error, 2 infeasible instance.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orienteering with time windows: solvers, decompositions, benchmarks"};
  app.require_subcommand(1);

  std::string instance_path, algorithm = "auto", oracle = "exact", deadline_oracle = "exact";
  std::string out_path, split = "dyadic";
  bool wait = false, no_wait = false, timing = false;

  auto* solve_cmd = app.add_subcommand("solve", "run an approximation algorithm");
  solve_cmd->add_option("instance", instance_path, "instance file")->required();
  solve_cmd->add_option("--algorithm", algorithm,
                        "integer-endpoints, l2, general, free-l2, free-general or auto");
  solve_cmd->add_option("--oracle", oracle, "exact or greedy");
  solve_cmd->add_option("--deadline-oracle", deadline_oracle, "exact or layered");
  solve_cmd->add_flag("--wait", wait, "allow waiting");
  solve_cmd->add_flag("--no-wait", no_wait, "forbid waiting");
  solve_cmd->add_flag("--timing", timing, "print elapsed time");

  auto* exact_cmd = app.add_subcommand("exact", "brute-force optimum");
  exact_cmd->add_option("instance", instance_path, "instance file")->required();
  exact_cmd->add_flag("--wait", wait, "allow waiting");
  exact_cmd->add_flag("--no-wait", no_wait, "forbid waiting");

  auto* decompose_cmd = app.add_subcommand("decompose", "dump a restricted-version family");
  decompose_cmd->add_option("instance", instance_path, "instance file")->required();
  decompose_cmd->add_option("--split", split, "dyadic, floor, ceil or five");
  decompose_cmd->add_option("--out", out_path, "output file (default stdout)");

  GenSpec gen;
  std::string len_lo = "1", len_hi = "2", horizon = "10";
  auto* gen_cmd = app.add_subcommand("gen", "generate a seeded instance");
  gen_cmd->add_option("--family", gen.family, "line, euclidean-grid, random-metric, directed-random");
  gen_cmd->add_option("--n", gen.n, "vertex count");
  gen_cmd->add_option("--len-lo", len_lo, "shortest window length");
  gen_cmd->add_option("--len-hi", len_hi, "longest window length");
  gen_cmd->add_option("--horizon", horizon, "time horizon and budget");
  gen_cmd->add_option("--grain", gen.grain, "times are multiples of 1/grain");
  gen_cmd->add_option("--max-weight", gen.max_weight, "largest edge travel time");
  gen_cmd->add_option("--max-reward", gen.max_reward, "largest vertex reward");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_flag("--free", gen.free_endpoints, "no start or end vertex");
  gen_cmd->add_option("--out", out_path, "output file (default stdout)");

  BenchSpec bench;
  bench.families = {"line"};
  bench.sizes = {6};
  bench.algorithms = {"general"};
  std::size_t seed_count = 10;
  std::uint64_t first_seed = 0;
  bool no_brute = false;
  auto* bench_cmd = app.add_subcommand("bench", "empirical ratios against brute force");
  bench_cmd->add_option("--families", bench.families, "instance families")->delimiter(',');
  bench_cmd->add_option("--sizes", bench.sizes, "vertex counts")->delimiter(',');
  bench_cmd->add_option("--algorithms", bench.algorithms, "algorithms")->delimiter(',');
  bench_cmd->add_option("--seeds", seed_count, "number of seeds");
  bench_cmd->add_option("--seed", first_seed, "first seed");
  bench_cmd->add_option("--oracle", oracle, "exact or greedy");
  bench_cmd->add_option("--deadline-oracle", deadline_oracle, "exact or layered");
  bench_cmd->add_option("--len-lo", len_lo, "shortest window length");
  bench_cmd->add_option("--len-hi", len_hi, "longest window length");
  bench_cmd->add_option("--horizon", horizon, "time horizon and budget");
  bench_cmd->add_option("--grain", bench.base.grain, "times are multiples of 1/grain");
  bench_cmd->add_flag("--no-brute", no_brute, "skip the brute-force column");
  bench_cmd->add_flag("--timing", timing, "fill the elapsed column");
  bench_cmd->add_option("--out", out_path, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*solve_cmd) {
      TwInstance x = parse_instance(instance_path);
      detail::apply_policy(x, wait, no_wait);
      auto a = parse_algorithm(algorithm);
      if (!a) throw Error(ErrorKind::argument, "unknown algorithm '" + algorithm + "'");
      auto o = make_oracle(oracle);
      auto d = make_deadline_oracle(deadline_oracle);
      print_report(out, solve(*a, x, *o, *d), timing);
    } else if (*exact_cmd) {
      TwInstance x = parse_instance(instance_path);
      detail::apply_policy(x, wait, no_wait);
      out << "algorithm: brute-force\n";
      print_walk(out, brute_force_opt(x));
    } else if (*decompose_cmd) {
      TwInstance x = parse_instance(instance_path);
      RestrictedFamily family;
      if (split == "dyadic")
        family = dyadic_family(x);
      else if (split == "floor")
        family = three_split_floor(x);
      else if (split == "ceil")
        family = three_split_ceil(x);
      else if (split == "five")
        family = five_split(x);
      else
        throw Error(ErrorKind::argument, "unknown split '" + split + "'");
      nlohmann::json doc;
      doc["split"] = split;
      doc["scale"] = detail::write_number(family.scale);
      doc["beta"] = family.beta();
      doc["versions"] = nlohmann::json::array();
      for (const auto& v : family.versions)
        doc["versions"].push_back({{"label", v.label}, {"instance", instance_to_json(v.instance)}});
      detail::write_output(out_path, doc.dump(1) + "\n", out);
    } else if (*gen_cmd) {
      gen.len_lo = detail::option_rational(len_lo, "len-lo");
      gen.len_hi = detail::option_rational(len_hi, "len-hi");
      gen.horizon = detail::option_rational(horizon, "horizon");
      detail::write_output(out_path, serialize_instance(generate_instance(gen)), out);
    } else if (*bench_cmd) {
      bench.base.len_lo = detail::option_rational(len_lo, "len-lo");
      bench.base.len_hi = detail::option_rational(len_hi, "len-hi");
      bench.base.horizon = detail::option_rational(horizon, "horizon");
      bench.brute_force = !no_brute;
      bench.timing = timing;
      bench.oracle = oracle;
      bench.deadline_oracle = deadline_oracle;
      for (std::size_t i = 0; i < seed_count; ++i) bench.seeds.push_back(first_seed + i);
      auto o = make_oracle(oracle);
      auto d = make_deadline_oracle(deadline_oracle);
      std::vector<BenchRow> rows = run_bench(bench, *o, *d);
      detail::write_output(out_path, bench_csv(rows), out);
      err << bench_summary(rows);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ErrorKind::infeasible ? exit_infeasible : exit_usage;
  }
  return exit_ok;
}

}  // namespace otw
