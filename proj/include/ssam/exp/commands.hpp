#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace ssam {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2, kExitIo = 3 };

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

/// Runs one subcommand (train, ablate, spectrum, landscape, ratio, theory,
/// flops) and maps library errors onto exit codes, printing them to stderr.
int run_command(const std::string& name, const CommandOptions& opts);

}  // namespace ssam
