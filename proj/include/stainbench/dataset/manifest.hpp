#pragma once

#include "stainbench/metrics/record.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stainbench {

/// The nine drip angles of the reference dataset, 10 to 90 degrees.
inline constexpr std::array<int, 9> dataset_angles{10, 20, 30, 40, 50, 60, 70, 80, 90};

[[nodiscard]] bool is_dataset_angle(int angle_deg) noexcept;

enum class Split { train, test };

[[nodiscard]] std::string_view to_string(Split split) noexcept;
[[nodiscard]] std::optional<Split> parse_split(std::string_view name) noexcept;

struct ManifestEntry {
    std::string image_id;
    std::filesystem::path image_path; ///< absolute once loaded
    std::optional<std::filesystem::path> mask_path;
    int angle_deg = 90;
    Colorspace colorspace = Colorspace::rgb;
    Split split = Split::test;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

inline constexpr std::string_view manifest_header = "image_id,image_path,mask_path,angle_deg,colorspace,split";

struct ManifestOptions {
    /// Check that image and mask files exist and that their dimensions agree.
    bool check_files = true;
};

/// Parses and validates a manifest CSV. Relative paths resolve against the
/// manifest's directory. All row problems are collected into one
/// ValidationError, one line per offending row ("row N: ...", header is row 1).
[[nodiscard]] std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path,
                                                       const ManifestOptions& options = {});

/// Writes entries with paths relative to the manifest's directory.
void write_manifest(const std::filesystem::path& path, std::span<const ManifestEntry> entries);

/// Writes a grayscale PNG per RGB entry into out_dir and returns entries for
/// them (id suffixed "-gray", same mask, angle and split). Entries that are
/// already gray are skipped with a warning. Per-file failures are gathered
/// into a single IoError after every entry has been attempted.
[[nodiscard]] std::vector<ManifestEntry> grayscale_variants(std::span<const ManifestEntry> entries,
                                                            const std::filesystem::path& out_dir);

/// Splits one CSV line, honouring double-quoted fields.
[[nodiscard]] std::vector<std::string> split_csv_line(std::string_view line);

} // namespace stainbench
