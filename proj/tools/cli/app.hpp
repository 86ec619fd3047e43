#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace effheis::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitValidation = 3,
  kExitVerification = 4,
  kExitExpectation = 5,
};

struct Options {
  std::string command;
  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> csv_path;
  std::optional<std::string> order;
  std::optional<std::vector<double>> lambdas;
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;
  bool expect_stable = false;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string status = "ok";
  nlohmann::json payload = nlohmann::json::object();
};

/// "0.2,0.1,0.05" → {0.2, 0.1, 0.05}; throws ConfigError.
std::vector<double> parse_lambda_list(const std::string& text);

/// EFFHEIS_DIM_CAP if set (must be a positive integer), else 4096.
std::size_t dim_cap_from_env();

CommandResult run_command(const Options& opts, const ModelConfig& cfg, std::size_t dim_cap);

/// Full pipeline: load config, run, write the JSON report. Never throws.
int execute(const Options& opts, std::ostream& out, std::ostream& err);

/// Argument parsing plus execute.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace effheis::cli
