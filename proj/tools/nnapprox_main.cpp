#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nnapprox/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ReLU network approximation-space toolkit"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Execute one experiment described by a JSON config");
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  run->add_option("--config", config_path, "Path to the JSON config")->required();
  run->add_option("--out-dir", out_dir, "Directory for report.json and data files")->required();
  run->add_option("--seed", seed, "Override the config seed");

  CLI11_PARSE(app, argc, argv);

  std::string error;
  const int code = nnapprox::run_cli(config_path, out_dir, seed, &error);
  if (!error.empty()) std::cerr << "error: " << error << "\n";
  return code;
}
