#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "pxbih/config.hpp"
#include "pxbih/error.hpp"

namespace pxbih {

enum ExitCode : int { kExitOk = 0, kExitMathFailure = 1, kExitUsage = 2 };

/// Exit code for an error escaping a command.
int exit_code_for(const Error& e) noexcept;

// Each command writes its files under out_dir and returns an exit code.
// Progress and warnings go to `log`.
int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_valley(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
/// Prints "norm <v>" and "modular <v>" (12 significant digits) for the
/// field file against the config's p.
int cmd_norm(const RunConfig& cfg, const std::filesystem::path& field_file, std::ostream& out);

struct CommandLine {
  std::string command;  // verify | solve | valley | sweep | norm
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> field;  // norm only
};

/// Loads the config, applies --out and --seed, runs the command and maps
/// every error to the exit-code contract.
int run_command(const CommandLine& cl, std::ostream& out, std::ostream& err);

}  // namespace pxbih
