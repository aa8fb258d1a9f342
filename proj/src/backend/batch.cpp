#include "stainbench/backend/batch.hpp"

#include "stainbench/error.hpp"
#include "stainbench/imaging/png_io.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <chrono>
#include <thread>

namespace stainbench {

std::optional<Prompt> fixed_prompt(Mode mode, int width, int height, int points_per_side)
{
    switch (mode) {
    case Mode::box: return full_image_box(width, height);
    case Mode::point: return center_point(width, height);
    case Mode::auto_grid: return AutoGridPrompt{points_per_side};
    default: return std::nullopt;
    }
}

std::string request_id(Mode mode, const ManifestEntry& entry)
{
    return std::string(record_name(mode)) + "/" + entry.image_id;
}

namespace {

EvalRecord evaluate_entry(BackendSession& session, const ManifestEntry& entry, const std::optional<Prompt>& prompt,
                          const BatchOptions& options)
{
    EvalRecord record;
    record.image_id = entry.image_id;
    record.angle_deg = entry.angle_deg;
    record.colorspace = entry.colorspace;
    record.mode = options.mode;
    record.model = options.model;

    const auto started = std::chrono::steady_clock::now();
    try {
        if (!entry.mask_path) {
            throw ValidationError("no ground-truth mask");
        }
        const auto truth = read_mask_png(*entry.mask_path);

        if (!session.healthy()) {
            session.restart();
        }
        SegmentRequest req;
        req.id = request_id(options.mode, entry);
        req.mode = options.mode;
        req.image_path = entry.image_path.string();
        req.prompt = prompt;
        req.multimask = options.multimask;
        req.params = options.params;

        SegmentResponse resp;
        const auto predicted = segment_one(session, req, &resp);
        const auto score = score_mask(predicted, truth, options.tau);
        record.iou = score.iou;
        record.dice = score.dice;
        record.passed = score.passed;
        record.latency_s = resp.latency_s;
        if (!resp.note.empty()) {
            spdlog::info("{}: {}", req.id, resp.note);
        }
    } catch (const std::exception& e) {
        record.iou = 0.0;
        record.dice = 0.0;
        record.passed = false;
        record.latency_s = 0.0;
        record.error = e.what();
        spdlog::warn("{} [{}]: {}", entry.image_id, record_name(options.mode), e.what());
    }
    record.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return record;
}

} // namespace

std::vector<EvalRecord> run_batch(std::span<BackendSession* const> sessions, std::span<const ManifestEntry> entries,
                                  std::span<const std::optional<Prompt>> prompts, const BatchOptions& options)
{
    if (!prompts.empty() && prompts.size() != entries.size()) {
        throw InvalidArgument(fmt::format("{} prompts for {} entries", prompts.size(), entries.size()));
    }
    if (sessions.empty() && !entries.empty()) {
        throw InvalidArgument("run_batch needs at least one session");
    }

    std::vector<EvalRecord> records(entries.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&](BackendSession& session) {
        for (std::size_t i = next++; i < entries.size(); i = next++) {
            static const std::optional<Prompt> none;
            records[i] = evaluate_entry(session, entries[i], prompts.empty() ? none : prompts[i], options);
        }
    };

    if (sessions.size() == 1 || entries.size() <= 1) {
        if (!entries.empty()) {
            work(*sessions.front());
        }
        return records;
    }
    std::vector<std::jthread> workers;
    workers.reserve(sessions.size());
    for (auto* session : sessions) {
        workers.emplace_back([&work, session] { work(*session); });
    }
    workers.clear(); // joins
    return records;
}

std::vector<EvalRecord> run_batch(BackendSession& session, std::span<const ManifestEntry> entries,
                                  std::span<const std::optional<Prompt>> prompts, const BatchOptions& options)
{
    BackendSession* const one[] = {&session};
    return run_batch(std::span<BackendSession* const>(one), entries, prompts, options);
}

} // namespace stainbench
