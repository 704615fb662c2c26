#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace ifpt::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kModelError = 3 };

struct CliOptions {
    std::string command; // calibrate | verify | compare | classify
    std::filesystem::path config;
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

/// Runs one command; messages go to `out`, errors to `err`. Never throws.
int run_command(const CliOptions& opts, std::ostream& out, std::ostream& err);

} // namespace ifpt::cli
