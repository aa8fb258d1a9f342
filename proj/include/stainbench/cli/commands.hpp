#pragma once

#include "stainbench/cli/config.hpp"
#include "stainbench/dataset/ground_truth.hpp"
#include "stainbench/dataset/synthetic.hpp"
#include "stainbench/metrics/record.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace stainbench {

/// Process exit codes of the subcommands.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,     ///< bad flags, config or manifest
    exit_incomplete = 2 ///< some backend, mode or image did not produce a good record
};

struct GenSynthOptions {
    std::vector<int> angles{dataset_angles.begin(), dataset_angles.end()};
    int seeds_per_angle = 10;
    SyntheticSpec prototype;
    std::uint64_t base_seed = 1;
    bool gray_variants = false; ///< also write a grayscale copy of every image
    Split split = Split::test;
    std::filesystem::path out_dir;
};

/// Writes the synthetic dataset and returns the manifest path.
std::filesystem::path cmd_gen_synth(const GenSynthOptions& options);

/// Adds grayscale variants of every RGB entry; writes out_dir/images/<id>-gray.png
/// and out_dir/manifest.csv holding the original entries followed by the variants.
/// Entries whose variant is already listed are not regenerated.
std::filesystem::path cmd_gray_variants(const std::filesystem::path& manifest, const std::filesystem::path& out_dir);

struct PrepareGtOptions {
    std::filesystem::path images_dir;
    std::filesystem::path out_dir;
    GroundTruthParams params;
    int default_angle = 90; ///< used when the file name carries no "aNN" angle token
    Split split = Split::train;
};

struct PrepareGtResult {
    std::filesystem::path manifest;
    std::size_t written = 0;
    std::vector<std::string> failures; ///< "file: reason"
};

/// Ground-truth masks for every PNG in images_dir (sorted by name) into
/// out_dir/masks, plus out_dir/manifest.csv pointing at the original images.
PrepareGtResult cmd_prepare_gt(const PrepareGtOptions& options);

/// Angle token in a file name ("a30-s000001.png" -> 30), if it names a dataset angle.
[[nodiscard]] std::optional<int> angle_from_filename(const std::string& filename);

struct BenchResult {
    int exit_code = exit_ok;
    std::vector<EvalRecord> records;
    std::vector<std::string> problems; ///< why the run is incomplete
};

/// Runs every (backend, mode) pair over the manifest with fixed prompts and
/// writes records.csv, table1/2/4 as .md and .csv into cfg.out_dir.
/// `self_exe` is the program that serves builtin backends.
BenchResult cmd_bench(const RunConfig& cfg, const std::filesystem::path& self_exe);

} // namespace stainbench
