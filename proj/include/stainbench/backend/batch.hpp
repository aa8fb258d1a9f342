#pragma once

#include "stainbench/backend/session.hpp"
#include "stainbench/dataset/manifest.hpp"
#include "stainbench/metrics/metrics.hpp"
#include "stainbench/metrics/record.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stainbench {

struct BatchOptions {
    Mode mode = Mode::box;
    std::string model;
    double tau = default_tau;
    bool multimask = false;
    nlohmann::json params = nlohmann::json::object();
};

/// Per-entry prompt under the fixed-shot policy for `mode`: the full-image box,
/// the centre point, or an auto grid; nothing for classical modes.
[[nodiscard]] std::optional<Prompt> fixed_prompt(Mode mode, int width, int height, int points_per_side);

/// Request id for an entry in a batch; unique per (mode, entry) within a session.
[[nodiscard]] std::string request_id(Mode mode, const ManifestEntry& entry);

/// Runs every entry through the sessions (one worker thread per session) and
/// returns one record per entry in manifest order. A failing image yields a
/// record with iou 0, passed false and an error note; other images are not
/// affected. A session that breaks is restarted before its next image.
/// `prompts` is empty or has one element per entry.
[[nodiscard]] std::vector<EvalRecord> run_batch(std::span<BackendSession* const> sessions,
                                                std::span<const ManifestEntry> entries,
                                                std::span<const std::optional<Prompt>> prompts,
                                                const BatchOptions& options);

[[nodiscard]] std::vector<EvalRecord> run_batch(BackendSession& session, std::span<const ManifestEntry> entries,
                                                std::span<const std::optional<Prompt>> prompts,
                                                const BatchOptions& options);

} // namespace stainbench
