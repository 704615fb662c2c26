#pragma once

#include "ifpt/boundary.hpp"
#include "ifpt/initial.hpp"
#include "ifpt/processes.hpp"
#include "ifpt/targets.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace ifpt::cli {

struct VerifySection {
    std::optional<std::filesystem::path> boundary; // default <output dir>/boundary.csv
    std::optional<std::size_t> paths;              // default: particles
    std::optional<std::uint64_t> seed;             // default: derived from the run seed
    double tolerance = 0.02;
};

struct RunConfig;

struct CompareSection {
    std::shared_ptr<RunConfig> first;
    std::shared_ptr<RunConfig> second;
    double slack = 0.0;
};

/// Parsed, schema-checked configuration. Sections are optional here; each
/// command states which ones it needs via require().
struct RunConfig {
    std::filesystem::path source;
    std::string origin;     // "<file>:<line>" of the enclosing object
    std::string key_prefix; // "" or e.g. "compare.first."
    std::optional<ProcessModel> process;
    std::optional<InitialLaw> initial;
    std::optional<TargetDistribution> target;
    std::optional<TimeGrid> grid;
    std::optional<std::size_t> particles;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> output_dir;
    std::optional<VerifySection> verify;
    std::optional<CompareSection> compare;

    /// Throws InputError naming the first missing top-level key.
    void require(std::initializer_list<const char*> keys) const;

    const ProcessModel& process_or_throw() const;
    const TargetDistribution& target_or_throw() const;
    const TimeGrid& grid_or_throw() const;
    /// Point mass at 0 when the config has no `initial` section.
    InitialLaw initial_or_default() const;
};

/// Reads and validates a config file. Errors are InputErrors of the form
/// `<file>:<line>: <key path>: <message>`.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& source);

} // namespace ifpt::cli
