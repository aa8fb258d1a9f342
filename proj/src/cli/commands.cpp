#include "stainbench/cli/commands.hpp"

#include "stainbench/backend/batch.hpp"
#include "stainbench/error.hpp"
#include "stainbench/imaging/png_io.hpp"
#include "stainbench/metrics/aggregate.hpp"
#include "stainbench/metrics/report.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <memory>
#include <regex>
#include <set>

namespace fs = std::filesystem;

namespace stainbench {

fs::path cmd_gen_synth(const GenSynthOptions& options)
{
    for (const int angle : options.angles) {
        if (!is_dataset_angle(angle)) {
            throw InvalidArgument(fmt::format("angle {} is not one of 10, 20, ..., 90", angle));
        }
    }
    const auto specs = synthetic_grid(options.angles, options.seeds_per_angle, options.prototype, options.base_seed);
    const auto manifest = write_dataset(specs, options.out_dir, {options.split});
    if (options.gray_variants) {
        return cmd_gray_variants(manifest, options.out_dir);
    }
    return manifest;
}

fs::path cmd_gray_variants(const fs::path& manifest, const fs::path& out_dir)
{
    auto entries = load_manifest(manifest);
    std::set<std::string> ids;
    for (const auto& e : entries) {
        ids.insert(e.image_id);
    }
    std::vector<ManifestEntry> pending;
    for (const auto& e : entries) {
        if (e.colorspace == Colorspace::rgb && ids.contains(e.image_id + "-gray")) {
            continue;
        }
        pending.push_back(e);
    }
    const auto variants = grayscale_variants(pending, out_dir / "images");
    entries.insert(entries.end(), variants.begin(), variants.end());
    fs::create_directories(out_dir);
    const auto out = out_dir / "manifest.csv";
    write_manifest(out, entries);
    spdlog::info("{} grayscale variant(s) added, {} entries in {}", variants.size(), entries.size(), out.string());
    return out;
}

std::optional<int> angle_from_filename(const std::string& filename)
{
    static const std::regex token(R"((?:^|[^A-Za-z0-9])a(\d{1,2})(?:[^0-9]|$))");
    std::smatch m;
    if (std::regex_search(filename, m, token)) {
        const int angle = std::stoi(m[1].str());
        if (is_dataset_angle(angle)) {
            return angle;
        }
    }
    return std::nullopt;
}

PrepareGtResult cmd_prepare_gt(const PrepareGtOptions& options)
{
    if (!fs::is_directory(options.images_dir)) {
        throw IoError("'" + options.images_dir.string() + "' is not a directory");
    }
    if (!is_dataset_angle(options.default_angle)) {
        throw InvalidArgument(fmt::format("default angle {} is not one of 10, 20, ..., 90", options.default_angle));
    }
    std::vector<fs::path> files;
    for (const auto& item : fs::directory_iterator(options.images_dir)) {
        auto ext = item.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (item.is_regular_file() && ext == ".png") {
            files.push_back(item.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        spdlog::warn("no PNG files in '{}'", options.images_dir.string());
    }

    const auto masks_dir = options.out_dir / "masks";
    fs::create_directories(masks_dir);
    PrepareGtResult result;
    std::vector<ManifestEntry> entries;
    for (const auto& file : files) {
        try {
            const auto image = read_png(file);
            const auto mask = prepare_ground_truth(image, options.params);
            const auto mask_path = masks_dir / file.filename();
            write_mask_png(mask_path, mask);
            entries.push_back({file.stem().string(), fs::absolute(file), fs::absolute(mask_path),
                               angle_from_filename(file.filename().string()).value_or(options.default_angle),
                               image.channels() == 3 ? Colorspace::rgb : Colorspace::gray, options.split});
            ++result.written;
        } catch (const std::exception& e) {
            result.failures.push_back(file.filename().string() + ": " + e.what());
        }
    }
    result.manifest = options.out_dir / "manifest.csv";
    write_manifest(result.manifest, entries);
    return result;
}

namespace {

struct ImageDims {
    int width = 0;
    int height = 0;
};

std::string incomplete_banner(const std::vector<std::string>& problems)
{
    if (problems.empty()) {
        return {};
    }
    std::string out = "> **INCOMPLETE RUN**\n";
    for (const auto& p : problems) {
        out += "> - " + p + "\n";
    }
    return out + "\n";
}

} // namespace

BenchResult cmd_bench(const RunConfig& cfg, const fs::path& self_exe)
{
    cfg.validate();
    const auto entries = load_manifest(cfg.manifest);
    BenchResult result;

    std::vector<std::optional<ImageDims>> dims;
    dims.reserve(entries.size());
    for (const auto& e : entries) {
        try {
            const auto info = read_png_info(e.image_path);
            dims.push_back(ImageDims{info.width, info.height});
        } catch (const Error& err) {
            spdlog::warn("{}: {}", e.image_id, err.what());
            dims.emplace_back();
        }
    }

    auto params = cfg.params;
    params["seed"] = cfg.seed;

    for (const auto& backend : cfg.backends) {
        BackendCommand command{resolve_command(backend.command, self_exe, cfg.manifest), cfg.handshake_timeout,
                               cfg.request_timeout};
        const std::size_t n_sessions = std::clamp<std::size_t>(entries.size(), 1, static_cast<std::size_t>(cfg.jobs));
        std::vector<std::unique_ptr<BackendSession>> owned;
        try {
            for (std::size_t i = 0; i < n_sessions; ++i) {
                owned.push_back(std::make_unique<BackendSession>(BackendSession::spawn(command)));
            }
        } catch (const std::exception& e) {
            result.problems.push_back(fmt::format("backend '{}' failed to start: {}", backend.label, e.what()));
            spdlog::error("{}", result.problems.back());
            continue;
        }
        const auto& handshake = owned.front()->handshake();

        std::vector<Mode> modes;
        for (const auto mode : {Mode::auto_grid, Mode::box, Mode::point, Mode::threshold, Mode::threshold_median}) {
            const bool wanted =
                backend.modes.empty() || std::find(backend.modes.begin(), backend.modes.end(), mode) != backend.modes.end();
            if (!wanted) {
                continue;
            }
            if (handshake.supports(mode)) {
                modes.push_back(mode);
            } else if (!backend.modes.empty()) {
                result.problems.push_back(fmt::format("backend '{}' does not advertise mode '{}'", backend.label,
                                                      wire_name(mode)));
            }
        }

        std::vector<BackendSession*> sessions;
        for (auto& s : owned) {
            sessions.push_back(s.get());
        }
        for (const auto mode : modes) {
            std::vector<std::optional<Prompt>> prompts;
            prompts.reserve(entries.size());
            for (const auto& d : dims) {
                prompts.push_back(d ? fixed_prompt(mode, d->width, d->height, cfg.points_per_side) : std::nullopt);
            }
            const BatchOptions options{mode, backend.label, cfg.tau, false, params};
            spdlog::info("running {} x {} over {} image(s) with {} session(s)", backend.label, wire_name(mode),
                         entries.size(), sessions.size());
            auto records = run_batch(sessions, entries, prompts, options);
            const auto failed = std::count_if(records.begin(), records.end(),
                                              [](const EvalRecord& r) { return !r.error.empty(); });
            if (failed > 0) {
                result.problems.push_back(fmt::format("{} of {} image(s) failed for backend '{}' in mode '{}'", failed,
                                                      records.size(), backend.label, wire_name(mode)));
            }
            result.records.insert(result.records.end(), std::make_move_iterator(records.begin()),
                                  std::make_move_iterator(records.end()));
        }
    }

    fs::create_directories(cfg.out_dir);
    const auto banner = incomplete_banner(result.problems);
    const auto rows = aggregate_accuracy(result.records);
    const auto timing = timing_stats(result.records);
    const auto comparison = comparison_table(result.records);
    write_text_file(cfg.out_dir / "records.csv", records_csv(result.records));
    write_text_file(cfg.out_dir / "table1.md", banner + table1_markdown(rows));
    write_text_file(cfg.out_dir / "table1.csv", table1_csv(rows));
    write_text_file(cfg.out_dir / "table2.md", banner + table2_markdown(timing));
    write_text_file(cfg.out_dir / "table2.csv", table2_csv(timing));
    write_text_file(cfg.out_dir / "table4.md", banner + table4_markdown(comparison));
    write_text_file(cfg.out_dir / "table4.csv", table4_csv(comparison));

    result.exit_code = result.problems.empty() ? exit_ok : exit_incomplete;
    return result;
}

} // namespace stainbench
