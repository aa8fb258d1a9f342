#pragma once

#include "stainbench/metrics/record.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stainbench {

/// Available hardware threads, at least 1.
[[nodiscard]] int default_jobs() noexcept;

/// A backend to benchmark. The label doubles as the model name in reports;
/// "default" and "fine-tuned" feed the speedup and box-comparison columns.
struct BackendSpec {
    std::string label;
    std::vector<std::string> command; ///< argv, or "builtin:classical" / "builtin:echo"
    std::vector<Mode> modes;          ///< empty: every mode the backend advertises

    friend bool operator==(const BackendSpec&, const BackendSpec&) = default;
};

struct RunConfig {
    std::filesystem::path manifest;
    std::vector<BackendSpec> backends;
    int points_per_side = 32;
    double tau = 0.5;
    std::filesystem::path out_dir = "bench-out";
    int jobs = default_jobs(); ///< sessions per backend
    std::uint64_t seed = 0;
    std::chrono::milliseconds request_timeout{120'000};
    std::chrono::milliseconds handshake_timeout{30'000};
    nlohmann::json params = nlohmann::json::object(); ///< merged into every request's params

    /// Throws InvalidArgument on duplicate labels, tau outside [0, 1], jobs < 1, ...
    void validate() const;
};

/// Reads a TOML run file. Relative manifest and out paths resolve against the
/// file's directory.
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);
[[nodiscard]] RunConfig parse_run_config(std::string_view toml_text, const std::filesystem::path& base_dir = {});

/// Parses "label=command args..." or "label@mode,mode=command args...".
/// Arguments split on whitespace; single or double quotes group words.
[[nodiscard]] BackendSpec parse_backend_flag(std::string_view flag);

[[nodiscard]] std::vector<std::string> split_command_line(std::string_view text);

/// Expands builtin backends into an argv that re-invokes `self_exe`.
[[nodiscard]] std::vector<std::string> resolve_command(const std::vector<std::string>& command,
                                                       const std::filesystem::path& self_exe,
                                                       const std::filesystem::path& manifest);

} // namespace stainbench
