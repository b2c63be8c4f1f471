#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "folner/config.hpp"

namespace folner {

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::size_t> cap; // replaces caps.set_size
  std::optional<int> depth;       // replaces schedule.depth
  std::optional<std::uint64_t> seed;
};

// Doubles as the process exit code.
enum class Verdict { Pass = 0, Fail = 2, Budget = 3 };

struct CommandResult {
  Verdict verdict = Verdict::Pass;
  std::string summary;
};

void apply_overrides(RunConfig &cfg, const RunOptions &opts);

// census | chain | dominate | simulate | sweep. Writes its artifacts under
// opts.out_dir; errors other than budget exhaustion propagate as exceptions.
CommandResult run_command(std::string_view command, RunConfig cfg, const RunOptions &opts);

CommandResult run_command_json(std::string_view command, std::string_view config_json,
                               const std::string &base_dir, const RunOptions &opts);

} // namespace folner
