#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccqoe/errors.hpp"
#include "ccqoe/harness.hpp"
#include "ccqoe/io.hpp"
#include "ccqoe/model.hpp"
#include "ccqoe/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSelfTest = 1;
constexpr int kExitInput = 2;
constexpr int kExitResourceCap = 3;

ccqoe::Instance demo_instance(double time_budget) {
  // Five users with rates 1/(10k): descriptor k costs k seconds to deliver.
  std::vector<double> caps(5);
  for (int k = 1; k <= 5; ++k) caps[k - 1] = 1.0 / (10.0 * k);
  return ccqoe::Instance::from_capacities(5, 2, time_budget, std::move(caps));
}

void print_report(const ccqoe::SolverReport& report) {
  std::cout << "  " << ccqoe::to_string(report.algorithm)
            << ": qoe_sum=" << report.schedule.qoe_sum << " total_time="
            << ccqoe::io::format_double(report.schedule.total_time)
            << " per_user=[";
  for (std::size_t i = 0; i < report.schedule.qoe_per_user.size(); ++i) {
    if (i) std::cout << ',';
    std::cout << report.schedule.qoe_per_user[i];
  }
  std::cout << "] wall=" << ccqoe::io::format_double(report.wall_time)
            << "s\n";
}

int cmd_demo() {
  const auto instance = demo_instance(10.0);
  const auto groups = ccqoe::build_groups(instance);
  const double uncoded = ccqoe::uncoded_time(instance);
  const double full_cc = ccqoe::full_cc_time(instance);

  std::cout << "Demo network: K=5, t=2, P=10, rates c_k = 1/(10k)\n";
  std::cout << "Baselines: uncoded " << ccqoe::io::format_double(uncoded)
            << " s, full coded delivery " << ccqoe::io::format_double(full_cc)
            << " s\n";

  bool ok = std::abs(uncoded - 90.0) <= 1e-9 && std::abs(full_cc - 45.0) <= 1e-9;

  const ccqoe::Algorithm all[] = {
      ccqoe::Algorithm::Exhaustive, ccqoe::Algorithm::Dp,
      ccqoe::Algorithm::Sdt, ccqoe::Algorithm::Pdt};
  for (double budget : {10.0, 45.0}) {
    const int expected = budget == 10.0 ? 10 : 30;
    std::cout << "T_lim = " << ccqoe::io::format_double(budget) << " s:\n";
    for (ccqoe::Algorithm algorithm : all) {
      const auto report =
          ccqoe::solve(algorithm, groups, 5, 2, budget, {});
      print_report(report);
      if (report.schedule.qoe_sum != expected) ok = false;
      const bool exact = algorithm == ccqoe::Algorithm::Exhaustive ||
                         algorithm == ccqoe::Algorithm::Dp;
      if (exact && budget == 10.0 &&
          std::abs(report.schedule.total_time - 10.0) > 1e-9)
        ok = false;
      if (algorithm == ccqoe::Algorithm::Dp) {
        std::cout << "  decisions (dp):";
        for (std::size_t g = 0; g < groups.size(); ++g) {
          std::cout << " {";
          for (std::size_t i = 0; i < groups[g].members.size(); ++i) {
            if (i) std::cout << ',';
            std::cout << groups[g].members[i];
          }
          std::cout << "}=" << report.schedule.decisions[g];
        }
        std::cout << "\n";
      }
    }
  }

  std::cout << "Self-test: " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitSelfTest;
}

int cmd_solve(const std::string& instance_path, const std::string& algo_name,
              const std::string& out_path) {
  const auto algorithm = ccqoe::algorithm_from_string(algo_name);
  if (!algorithm) {
    std::cerr << "error: unknown algorithm '" << algo_name << "'\n";
    return kExitInput;
  }
  const auto instance = ccqoe::io::load_instance(instance_path);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitInput;
  }
  const auto groups = ccqoe::build_groups(instance);
  const auto report = ccqoe::solve(*algorithm, groups, instance.num_users,
                                   instance.gain, instance.time_budget, {});
  ccqoe::io::write_solve_csv(out, report, groups);
  std::cout << "qoe_sum=" << report.schedule.qoe_sum << " total_time="
            << ccqoe::io::format_double(report.schedule.total_time) << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& instance_path, const std::string& algo_name,
              double start, double stop, double step,
              const std::string& out_path) {
  const auto algorithm = ccqoe::algorithm_from_string(algo_name);
  if (!algorithm) {
    std::cerr << "error: unknown solver '" << algo_name << "'\n";
    return kExitInput;
  }
  if (!(step > 0)) {
    std::cerr << "error: step must be positive\n";
    return kExitInput;
  }
  const auto instance = ccqoe::io::load_instance(instance_path);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitInput;
  }
  const auto points =
      ccqoe::sweep_tlim(instance, *algorithm, start, stop, step, {});
  ccqoe::io::write_sweep_csv(out, *algorithm, instance.num_users, points);
  std::cout << points.size() << " sweep points written\n";
  return kExitOk;
}

int cmd_compare(const std::string& config_path, const std::string& out_path,
                std::uint64_t seed_override, bool seed_given, int jobs) {
  auto config = ccqoe::io::load_config(config_path);
  if (seed_given) config.seed = seed_override;
  config.jobs = jobs;
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitInput;
  }
  const auto output = ccqoe::compare_solvers(config, {});
  ccqoe::io::write_compare_csv(out, config, output.aggregates);
  std::cout << output.aggregates.size() << " aggregate rows written\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QoE-maximal coded-caching delivery scheduling"};
  app.require_subcommand(1);

  auto* demo = app.add_subcommand("demo", "run the built-in 5-user network and self-check its anchors");

  std::string instance_path, out_path, algo_name;
  auto* solve = app.add_subcommand("solve", "schedule one instance with one algorithm");
  solve->add_option("--instance", instance_path, "instance JSON file")->required();
  solve->add_option("--algo", algo_name, "exhaustive|dp|sdt|pdt")->required();
  solve->add_option("--out", out_path, "output CSV path")->required();

  double start = 0, stop = 0, step = 1;
  auto* sweep = app.add_subcommand("sweep", "solve across a T_lim grid");
  sweep->add_option("--instance", instance_path, "instance JSON file")->required();
  sweep->add_option("--solver", algo_name, "exhaustive|dp|sdt|pdt")->required();
  sweep->add_option("--start", start, "first T_lim, seconds")->required();
  sweep->add_option("--stop", stop, "last T_lim, seconds")->required();
  sweep->add_option("--step", step, "grid step, seconds")->required();
  sweep->add_option("--out", out_path, "output CSV path")->required();

  std::string config_path;
  std::uint64_t seed_override = 0;
  int jobs = 1;
  auto* compare = app.add_subcommand("compare", "run a solver-comparison grid");
  compare->add_option("--config", config_path, "experiment config JSON file")->required();
  compare->add_option("--out", out_path, "output CSV path")->required();
  auto* seed_opt = compare->add_option("--seed", seed_override, "override the config seed");
  compare->add_option("--jobs", jobs, "parallel trial workers")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (demo->parsed()) return cmd_demo();
    if (solve->parsed()) return cmd_solve(instance_path, algo_name, out_path);
    if (sweep->parsed())
      return cmd_sweep(instance_path, algo_name, start, stop, step, out_path);
    if (compare->parsed())
      return cmd_compare(config_path, out_path, seed_override,
                         !seed_opt->empty(), jobs);
  } catch (const ccqoe::TooLargeForExact& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const ccqoe::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
