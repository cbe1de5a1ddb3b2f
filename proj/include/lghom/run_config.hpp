#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace lghom::cli {

/// Config documents that fail validation; maps to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quadrature oracle missed the requested tolerance; maps to exit code 3.
struct accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rebasing truncation leaked more than the configured bound; exit code 4.
struct leakage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { Json, Csv };

struct RunOptions {
    std::optional<std::string> out_path;
    std::optional<Format> format;  // per-command default when unset
    bool check = false;
    std::uint64_t seed = 0;            // reserved for property-test helpers
    std::optional<int> iterations;     // bench override
};

/// One produced document. An empty path means "print to stdout".
struct OutputFile {
    std::string path;
    std::string content;
};

struct RunResult {
    std::vector<OutputFile> files;
};

RunResult cmd_overlap(const nlohmann::json& config, const RunOptions& opts);
RunResult cmd_crosstalk(const nlohmann::json& config, const RunOptions& opts);
RunResult cmd_hom(const nlohmann::json& config, const RunOptions& opts);
RunResult cmd_network(const nlohmann::json& config, const RunOptions& opts);
RunResult cmd_bench(const nlohmann::json& config, const RunOptions& opts);

/// Dispatch by subcommand name; throws config_error for unknown names.
RunResult run_command(const std::string& command, const nlohmann::json& config,
                      const RunOptions& opts);

/// Round-trip-safe decimal rendering (17 significant digits).
std::string format_double(double value);

}  // namespace lghom::cli
