#pragma once

#include "stainbench/imaging/image.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "stainbench/dataset/manifest.hpp"

namespace stainbench {

struct Background {
    enum class Kind { white, textured };

    Kind kind = Kind::white;
    std::uint64_t seed = 0;
    double noise_amplitude = 70.0; ///< peak deviation from the base gray level, textured only

    static Background white() { return {}; }
    static Background textured(std::uint64_t seed, double amplitude = 70.0) { return {Kind::textured, seed, amplitude}; }
};

/// Gray level around which textured backgrounds vary.
inline constexpr int textured_base_level = 185;

/// Parameters of one synthetic drip stain.
struct SyntheticSpec {
    int angle_deg = 90;
    int droplet_length_px = 32;
    Background background;
    int stain_intensity = 140; ///< red channel of the stain colour
    std::uint64_t rng_seed = 0;
    int width = 96;
    int height = 96;
};

struct SyntheticDroplet {
    ImageBuffer image; ///< RGB
    BinaryMask mask;   ///< exactly the stained pixels
};

/// Stain colour for an intensity: (i, i/4, i/4), a dark blood red.
[[nodiscard]] std::array<std::uint8_t, 3> stain_color(int intensity) noexcept;

/// round(length * sin(angle)), at least 1.
[[nodiscard]] int droplet_width_px(int length_px, int angle_deg);

/// Renders an axis-aligned filled ellipse, length along the rows and
/// droplet_width_px across, at a seeded position keeping a 2 px margin.
/// Throws InvalidArgument when the droplet does not fit; the message names the
/// minimum image size.
[[nodiscard]] SyntheticDroplet generate_droplet(const SyntheticSpec& spec);

/// Identifier used for files and manifest rows, e.g. "a30-s000017".
[[nodiscard]] std::string synthetic_id(const SyntheticSpec& spec);

struct DatasetWriteOptions {
    Split split = Split::test;
};

/// Writes out_dir/{images,masks}/<id>.png and out_dir/manifest.csv; returns the manifest path.
std::filesystem::path write_dataset(std::span<const SyntheticSpec> specs, const std::filesystem::path& out_dir,
                                    const DatasetWriteOptions& options = {});

/// angles x seeds_per_angle specs; seeds are base_seed, base_seed + 1, ... in order.
[[nodiscard]] std::vector<SyntheticSpec> synthetic_grid(std::span<const int> angles, int seeds_per_angle,
                                                        const SyntheticSpec& prototype, std::uint64_t base_seed);

} // namespace stainbench
