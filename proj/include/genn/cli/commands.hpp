// Copyright 2026 The GENN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace genn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

inline constexpr const char* kVersion = "1.0.0";

struct CommandOptions {
  std::string command;  // train eval synth robustness correlate selftest
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> method;
  std::optional<std::filesystem::path> checkpoint;
};

/// Runs one subcommand and writes its artifacts plus manifest.json under
/// `out`. Failures are reported as {"error": {"code", "message"}} in
/// out/error.json and on `err`; the return value is the process exit code.
int run_command(const CommandOptions& options, std::ostream& log, std::ostream& err);

/// Writes the error report for `e` to `err` and out/error.json; returns the
/// exit code.
int report_failure(const std::exception& e, const std::filesystem::path& out, std::ostream& err);

}  // namespace genn::cli
