#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

#include "regkit/config.hpp"
#include "regkit/errors.hpp"
#include "regkit/harness.hpp"
#include "selftest.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3, kIo = 4 };

int run(const std::string& config_path, const std::string& out_dir, std::size_t threads,
        const std::optional<std::uint64_t>& seed) {
  auto cfg = regkit::load_config(config_path);
  if (seed) cfg.seed = seed;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (cfg.output_dir.empty()) throw regkit::ConfigError("no output directory: pass --out or set 'out' in the config");
  const auto result = regkit::run_experiment(cfg, threads);
  regkit::write_results(result, cfg.output_dir);
  std::cout << cfg.design << ": " << result.records.size() << " records written to " << cfg.output_dir << '\n';
  if (result.rate.points >= 2)
    std::cout << "log-log slope of median loss: " << result.rate.slope << " (se " << result.rate.standard_error
              << ")\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regkit: regularized estimators, Lepski tuning and Monte Carlo experiments"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a key=value config file");
  std::string config_path, out_dir;
  std::size_t threads = 0;
  std::optional<std::uint64_t> seed;
  run_cmd->add_option("config_file", config_path, "Config file (same as --config)");
  run_cmd->add_option("--config", config_path, "Config file");
  run_cmd->add_option("--out", out_dir, "Output directory (overrides 'out' in the config)");
  run_cmd->add_option("--threads", threads, "Worker threads; 0 runs serially")->default_val(0);
  run_cmd->add_option("--seed", seed, "Master seed (overrides the config)");

  auto* list_cmd = app.add_subcommand("list-designs", "List the simulation designs and their parameters");
  auto* self_cmd = app.add_subcommand("selftest", "Run the built-in closed-form checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run_cmd->parsed()) {
      if (config_path.empty()) throw regkit::ConfigError("missing --config");
      return run(config_path, out_dir, threads, seed);
    }
    if (list_cmd->parsed()) {
      for (const auto& d : regkit::list_designs()) {
        std::cout << d.name << "\n  " << d.description << "\n  aux: " << d.aux << "\n  params:";
        for (const auto& p : d.params) std::cout << ' ' << p;
        std::cout << '\n';
      }
      return kOk;
    }
    if (self_cmd->parsed()) return run_selftest(std::cout) == 0 ? kOk : kNumerical;
  } catch (const regkit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const regkit::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const regkit::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::logic_error& e) {
    // Precondition failures, e.g. a sieve larger than the sample.
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
