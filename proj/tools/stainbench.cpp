// stainbench: bloodstain segmentation benchmark driver.

#include "stainbench/backend/server.hpp"
#include "stainbench/cli/commands.hpp"
#include "stainbench/error.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

namespace fs = std::filesystem;
using namespace stainbench;

namespace {

void setup_logging()
{
    // stdout belongs to the backend protocol in serve-* modes.
    auto logger = spdlog::stderr_color_mt("stainbench");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    spdlog::set_level(spdlog::level::info);
    if (const char* level = std::getenv("STAINBENCH_LOG")) {
        spdlog::set_level(spdlog::level::from_str(level));
    }
}

fs::path self_exe(const char* argv0)
{
    std::error_code ec;
    auto p = fs::read_symlink("/proc/self/exe", ec);
    return ec ? fs::absolute(argv0) : p;
}

} // namespace

int main(int argc, char** argv)
{
    setup_logging();

    CLI::App app{"Benchmark classical and promptable bloodstain segmentation"};
    app.require_subcommand(1);

    // gen-synth
    GenSynthOptions gen;
    std::string background = "white";
    std::string gen_split = "test";
    auto* gen_cmd = app.add_subcommand("gen-synth", "Generate a synthetic drip-stain dataset");
    gen_cmd->add_option("--angles", gen.angles, "Impact angles in degrees")->delimiter(',');
    gen_cmd->add_option("--seeds-per-angle", gen.seeds_per_angle, "Images per angle")->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--background", background, "white or textured")->check(CLI::IsMember({"white", "textured"}));
    gen_cmd->add_option("--noise-amplitude", gen.prototype.background.noise_amplitude, "Textured background amplitude");
    gen_cmd->add_option("--length", gen.prototype.droplet_length_px, "Droplet length in pixels");
    gen_cmd->add_option("--width", gen.prototype.width, "Image width");
    gen_cmd->add_option("--height", gen.prototype.height, "Image height");
    gen_cmd->add_option("--stain-intensity", gen.prototype.stain_intensity, "Stain red level 0..255");
    gen_cmd->add_option("--seed", gen.base_seed, "First RNG seed");
    gen_cmd->add_flag("--gray", gen.gray_variants, "Also write grayscale variants");
    gen_cmd->add_option("--split", gen_split, "train or test")->check(CLI::IsMember({"train", "test"}));
    gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();

    // gray-variants
    fs::path gray_manifest;
    fs::path gray_out;
    auto* gray_cmd = app.add_subcommand("gray-variants", "Add grayscale copies of every RGB manifest entry");
    gray_cmd->add_option("--manifest", gray_manifest, "Input manifest")->required();
    gray_cmd->add_option("--out", gray_out, "Output directory")->required();

    // prepare-gt
    PrepareGtOptions gt;
    std::string gt_split = "train";
    int gt_connectivity = 8;
    auto* gt_cmd = app.add_subcommand("prepare-gt", "Derive ground-truth masks from frames");
    gt_cmd->add_option("--images", gt.images_dir, "Directory of PNG frames")->required();
    gt_cmd->add_option("--out", gt.out_dir, "Output directory")->required();
    gt_cmd->add_option("--window", gt.params.window, "Adaptive threshold window (odd)");
    gt_cmd->add_option("--offset", gt.params.offset, "Adaptive threshold offset");
    gt_cmd->add_option("--median-radius", gt.params.median_radius, "Median filter radius");
    gt_cmd->add_option("--connectivity", gt_connectivity, "4 or 8")->check(CLI::IsMember({4, 8}));
    gt_cmd->add_option("--angle", gt.default_angle, "Angle for files without an aNN token");
    gt_cmd->add_option("--split", gt_split, "train or test")->check(CLI::IsMember({"train", "test"}));

    // bench
    fs::path config_path;
    std::optional<fs::path> manifest_flag;
    std::vector<std::string> backend_flags;
    std::optional<double> tau_flag;
    std::optional<int> pps_flag;
    std::optional<int> jobs_flag;
    std::optional<std::uint64_t> seed_flag;
    std::optional<fs::path> out_flag;
    std::optional<double> timeout_flag;
    auto* bench_cmd = app.add_subcommand("bench", "Run backends over a manifest and write reports");
    bench_cmd->add_option("--config", config_path, "TOML run file")->check(CLI::ExistingFile);
    bench_cmd->add_option("--manifest", manifest_flag, "Manifest CSV");
    bench_cmd->add_option("--backend", backend_flags,
                          "label=command or label@mode,mode=command; builtin:classical and builtin:echo are built in");
    bench_cmd->add_option("--tau", tau_flag, "IoU pass threshold");
    bench_cmd->add_option("--points-per-side", pps_flag, "Auto-mode grid size");
    bench_cmd->add_option("--jobs", jobs_flag, "Sessions per backend");
    bench_cmd->add_option("--seed", seed_flag, "Seed forwarded to backends");
    bench_cmd->add_option("--out", out_flag, "Report directory");
    bench_cmd->add_option("--timeout", timeout_flag, "Per-image timeout in seconds");

    // builtin backends
    auto* serve_classical = app.add_subcommand("serve-classical", "Serve the thresholding backend on stdin/stdout");
    fs::path echo_manifest;
    auto* serve_echo = app.add_subcommand("serve-echo", "Serve ground-truth masks from a manifest (testing)");
    serve_echo->add_option("--manifest", echo_manifest, "Manifest with mask paths")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*gen_cmd) {
            gen.prototype.background.kind =
                background == "textured" ? Background::Kind::textured : Background::Kind::white;
            gen.split = *parse_split(gen_split);
            std::cout << cmd_gen_synth(gen).string() << '\n';
            return exit_ok;
        }
        if (*gray_cmd) {
            std::cout << cmd_gray_variants(gray_manifest, gray_out).string() << '\n';
            return exit_ok;
        }
        if (*gt_cmd) {
            gt.split = *parse_split(gt_split);
            gt.params.connectivity = gt_connectivity == 4 ? Connectivity::four : Connectivity::eight;
            const auto result = cmd_prepare_gt(gt);
            std::cout << result.manifest.string() << '\n';
            if (!result.failures.empty()) {
                spdlog::error("{} file(s) failed:", result.failures.size());
                for (const auto& f : result.failures) {
                    spdlog::error("  {}", f);
                }
                return exit_incomplete;
            }
            return exit_ok;
        }
        if (*bench_cmd) {
            RunConfig cfg;
            if (!config_path.empty()) {
                cfg = load_run_config(config_path);
            }
            if (manifest_flag) {
                cfg.manifest = *manifest_flag;
            }
            if (!backend_flags.empty()) {
                cfg.backends.clear();
                for (const auto& flag : backend_flags) {
                    cfg.backends.push_back(parse_backend_flag(flag));
                }
            }
            if (tau_flag) {
                cfg.tau = *tau_flag;
            }
            if (pps_flag) {
                cfg.points_per_side = *pps_flag;
            }
            if (jobs_flag) {
                cfg.jobs = *jobs_flag;
            }
            if (seed_flag) {
                cfg.seed = *seed_flag;
            }
            if (out_flag) {
                cfg.out_dir = *out_flag;
            }
            if (timeout_flag) {
                cfg.request_timeout = std::chrono::milliseconds(static_cast<long long>(*timeout_flag * 1000.0));
            }
            const auto result = cmd_bench(cfg, self_exe(argv[0]));
            for (const auto& p : result.problems) {
                spdlog::error("{}", p);
            }
            std::cout << cfg.out_dir.string() << '\n';
            return result.exit_code;
        }
        if (*serve_classical) {
            return classical_backend_main(std::cin, std::cout);
        }
        if (*serve_echo) {
            return echo_backend_main(echo_manifest, std::cin, std::cout);
        }
    } catch (const InvalidArgument& e) {
        spdlog::error("{}", e.what());
        return exit_usage;
    } catch (const ValidationError& e) {
        spdlog::error("{}", e.what());
        return exit_usage;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return exit_incomplete;
    }
    return exit_ok;
}
