// expanse_sim: simulate, classify and sweep scenarios.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expanse/config.hpp"
#include "expanse/errors.hpp"
#include "expanse/runner.hpp"

namespace {

int report_config_error(const std::exception& e) {
  std::cerr << "config error: " << e.what() << "\n";
  return expanse::exit_code::kConfigError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semilinear Schrodinger evolution on expanding backgrounds"};
  app.require_subcommand(1);

  std::vector<std::string> run_paths;
  expanse::RunOptions opts;
  std::uint64_t seed = 0;
  std::size_t max_steps = 0;

  auto* run = app.add_subcommand("run", "simulate one or more scenarios");
  run->add_option("configs", run_paths, "scenario files")->required()->check(CLI::ExistingFile);
  run->add_option("--out-dir", opts.out_dir, "output root")->capture_default_str();
  auto* seed_opt = run->add_option("--seed-override", seed, "replace initial.seed");
  auto* steps_opt = run->add_option("--max-steps", max_steps, "cap on accepted steps");
  run->add_flag("--quiet", opts.quiet, "suppress progress output");

  std::string classify_path;
  bool kv = false;
  auto* classify = app.add_subcommand("classify", "print the regime report");
  classify->add_option("config", classify_path, "scenario file")->required()->check(CLI::ExistingFile);
  classify->add_flag("--kv", kv, "key=value output");

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "classify (and optionally simulate) over a parameter grid");
  sweep->add_option("config", sweep_path, "scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out-dir", opts.out_dir, "output root")->capture_default_str();
  sweep->add_option("--max-steps", max_steps, "cap on steps per simulated point");
  bool stdout_only = false;
  sweep->add_flag("--stdout", stdout_only, "print the table instead of writing sweep.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : expanse::exit_code::kConfigError;
  }
  if (*seed_opt) opts.seed_override = seed;
  if (*steps_opt || max_steps > 0) opts.max_steps = max_steps;

  if (*run) {
    const auto res = expanse::run_batch(run_paths, opts);
    for (const auto& e : res.entries) {
      if (e.manifest) {
        if (!opts.quiet) {
          std::cout << e.path << ": " << expanse::to_string(e.manifest->status) << " at s="
                    << expanse::format_double(e.manifest->s_final) << " after " << e.manifest->steps
                    << " steps\n";
        }
      } else {
        std::cerr << e.path << ": " << e.error << "\n";
      }
    }
    return res.exit_code;
  }

  if (*classify) {
    try {
      const auto sc = expanse::load_scenario(classify_path);
      std::cout << expanse::classify_scenario(sc, kv);
      return 0;
    } catch (const expanse::ConfigError& e) {
      return report_config_error(e);
    } catch (const expanse::InvalidConfig& e) {
      std::cerr << "classifier rejected the spec: " << e.what() << "\n";
      return expanse::exit_code::kClassifierRejection;
    }
  }

  try {
    const auto sc = expanse::load_scenario(sweep_path);
    const auto res = expanse::sweep_scenario(sc, opts, !stdout_only);
    if (stdout_only) {
      std::cout << res.table;
    } else {
      std::cout << res.path << ": " << res.rows << " rows\n";
    }
    return 0;
  } catch (const expanse::ConfigError& e) {
    return report_config_error(e);
  }
}
