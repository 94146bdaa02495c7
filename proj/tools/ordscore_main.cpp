// ordscore: fit regression models with data-driven scores for ordered factors.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ordscore/cli.hpp"
#include "ordscore/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fit linear models and GLMs with optimized scores for ordered factors"};
  std::string config_path;
  std::optional<std::string> mode;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON run configuration (schema 1)")->required();
  app.add_option("--mode", mode, "compare | quantile | spline | baseline (default: config, else compare)");
  app.add_option("--output", output, "output directory (overrides output_dir)");
  app.add_option("--seed", seed, "seed for the optimizer start screening (overrides config)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  ordscore::cli::RunConfig config;
  try {
    config = ordscore::cli::load_config(config_path);
    if (mode) config.mode = ordscore::cli::mode_from_string(*mode);
    if (output) config.output_dir = *output;
    if (seed) config.seed = *seed;
  } catch (const ordscore::Error& e) {
    std::cerr << "ordscore: " << e.what() << "\n";
    return 1;
  }
  return ordscore::cli::run(config, std::cerr);
}
