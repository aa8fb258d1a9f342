#include "stainbench/dataset/manifest.hpp"

#include "stainbench/error.hpp"
#include "stainbench/imaging/color.hpp"
#include "stainbench/imaging/png_io.hpp"
#include "stainbench/metrics/report.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

namespace fs = std::filesystem;

namespace stainbench {

bool is_dataset_angle(int angle_deg) noexcept
{
    return std::find(dataset_angles.begin(), dataset_angles.end(), angle_deg) != dataset_angles.end();
}

std::string_view to_string(Split split) noexcept { return split == Split::train ? "train" : "test"; }

std::optional<Split> parse_split(std::string_view name) noexcept
{
    if (name == "train") {
        return Split::train;
    }
    if (name == "test") {
        return Split::test;
    }
    return std::nullopt;
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    return s;
}

fs::path resolve(const fs::path& base, std::string_view p)
{
    fs::path path{std::string(p)};
    return path.is_absolute() ? path.lexically_normal() : (base / path).lexically_normal();
}

} // namespace

std::vector<ManifestEntry> load_manifest(const fs::path& path, const ManifestOptions& options)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open manifest '" + path.string() + "'");
    }
    const fs::path base = fs::absolute(path).parent_path();

    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("manifest '" + path.string() + "' is empty (expected header: " +
                              std::string(manifest_header) + ")");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    if (trim(line) != manifest_header) {
        throw ValidationError("row 1: manifest header must be '" + std::string(manifest_header) + "', got '" +
                              std::string(trim(line)) + "'");
    }

    std::vector<ManifestEntry> entries;
    std::vector<std::string> problems;
    std::set<std::string> seen_ids;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) {
            continue;
        }
        const auto fail = [&](const std::string& what) { problems.push_back(fmt::format("row {}: {}", row, what)); };
        auto fields = split_csv_line(trim(line));
        if (fields.size() != 6) {
            fail(fmt::format("expected 6 fields, got {}", fields.size()));
            continue;
        }
        for (auto& f : fields) {
            f = std::string(trim(f));
        }

        ManifestEntry entry;
        entry.image_id = fields[0];
        if (entry.image_id.empty()) {
            fail("empty image_id");
            continue;
        }
        if (!seen_ids.insert(entry.image_id).second) {
            fail("duplicate image_id '" + entry.image_id + "'");
            continue;
        }
        if (fields[1].empty()) {
            fail("empty image_path");
            continue;
        }
        entry.image_path = resolve(base, fields[1]);
        if (!fields[2].empty()) {
            entry.mask_path = resolve(base, fields[2]);
        }

        int angle = 0;
        const auto* end = fields[3].data() + fields[3].size();
        if (const auto [ptr, ec] = std::from_chars(fields[3].data(), end, angle); ec != std::errc{} || ptr != end) {
            fail("angle_deg '" + fields[3] + "' is not an integer");
            continue;
        }
        if (!is_dataset_angle(angle)) {
            fail(fmt::format("angle_deg {} is not one of 10, 20, ..., 90", angle));
            continue;
        }
        entry.angle_deg = angle;

        const auto cs = parse_colorspace(fields[4]);
        if (!cs) {
            fail("colorspace '" + fields[4] + "' must be RGB or gray");
            continue;
        }
        entry.colorspace = *cs;
        const auto split = parse_split(fields[5]);
        if (!split) {
            fail("split '" + fields[5] + "' must be train or test");
            continue;
        }
        entry.split = *split;

        if (options.check_files) {
            try {
                if (!fs::exists(entry.image_path)) {
                    fail("image file '" + entry.image_path.string() + "' does not exist");
                    continue;
                }
                const auto info = read_png_info(entry.image_path);
                if (entry.mask_path) {
                    if (!fs::exists(*entry.mask_path)) {
                        fail("mask file '" + entry.mask_path->string() + "' does not exist");
                        continue;
                    }
                    const auto mask_info = read_png_info(*entry.mask_path);
                    if (mask_info.width != info.width || mask_info.height != info.height) {
                        fail(fmt::format("dimension mismatch: image {}x{}, mask {}x{}", info.width, info.height,
                                         mask_info.width, mask_info.height));
                        continue;
                    }
                }
            } catch (const Error& e) {
                fail(e.what());
                continue;
            }
        }
        entries.push_back(std::move(entry));
    }

    if (!problems.empty()) {
        std::string message = "invalid manifest '" + path.string() + "':";
        for (const auto& p : problems) {
            message += "\n  " + p;
        }
        throw ValidationError(message);
    }
    return entries;
}

void write_manifest(const fs::path& path, std::span<const ManifestEntry> entries)
{
    const fs::path base = fs::absolute(path).parent_path();
    const auto rel = [&](const fs::path& p) { return fs::absolute(p).lexically_proximate(base).generic_string(); };
    std::string out(manifest_header);
    out += '\n';
    for (const auto& e : entries) {
        out += fmt::format("{},{},{},{},{},{}\n", csv_field(e.image_id), csv_field(rel(e.image_path)),
                           e.mask_path ? csv_field(rel(*e.mask_path)) : std::string(), e.angle_deg,
                           to_string(e.colorspace), to_string(e.split));
    }
    write_text_file(path, out);
}

std::vector<ManifestEntry> grayscale_variants(std::span<const ManifestEntry> entries, const fs::path& out_dir)
{
    std::vector<ManifestEntry> variants;
    std::vector<std::string> failures;
    if (!entries.empty()) {
        fs::create_directories(out_dir);
    }
    for (const auto& entry : entries) {
        if (entry.colorspace == Colorspace::gray) {
            spdlog::warn("'{}' is already gray; no variant written", entry.image_id);
            continue;
        }
        ManifestEntry gray = entry;
        gray.image_id = entry.image_id + "-gray";
        gray.colorspace = Colorspace::gray;
        gray.image_path = fs::absolute(out_dir / (gray.image_id + ".png")).lexically_normal();
        try {
            write_png(gray.image_path, as_grayscale(read_png(entry.image_path)));
        } catch (const Error& e) {
            failures.push_back(entry.image_id + ": " + e.what());
            continue;
        }
        variants.push_back(std::move(gray));
    }
    if (!failures.empty()) {
        std::string message = fmt::format("{} grayscale variant(s) failed:", failures.size());
        for (const auto& f : failures) {
            message += "\n  " + f;
        }
        throw IoError(message);
    }
    return variants;
}

} // namespace stainbench
