#include "stainbench/dataset/synthetic.hpp"

#include "stainbench/error.hpp"
#include "stainbench/imaging/png_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace fs = std::filesystem;

namespace stainbench {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform in [-1, 1) from a hash of lattice coordinates.
double lattice_value(std::int64_t ix, std::int64_t iy, std::uint64_t seed)
{
    const auto h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(ix) * 0x632BE59BD9B4E019ULL ^
                                                 static_cast<std::uint64_t>(iy)));
    return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Bilinearly interpolated value noise with the given cell size, in [-1, 1].
double value_noise(int x, int y, int cell, std::uint64_t seed)
{
    const double fx = (x + 0.5) / cell;
    const double fy = (y + 0.5) / cell;
    const auto ix = static_cast<std::int64_t>(std::floor(fx));
    const auto iy = static_cast<std::int64_t>(std::floor(fy));
    const double tx = smoothstep(fx - static_cast<double>(ix));
    const double ty = smoothstep(fy - static_cast<double>(iy));
    const double a = lattice_value(ix, iy, seed);
    const double b = lattice_value(ix + 1, iy, seed);
    const double c = lattice_value(ix, iy + 1, seed);
    const double d = lattice_value(ix + 1, iy + 1, seed);
    return (a + (b - a) * tx) * (1.0 - ty) + (c + (d - c) * tx) * ty;
}

// Fabric-like texture: coarse weave, fine weave and per-pixel grain.
std::uint8_t textured_level(int x, int y, const Background& bg)
{
    const double n = 0.45 * value_noise(x, y, 7, bg.seed) + 0.35 * value_noise(x, y, 2, bg.seed + 1) +
                     0.20 * lattice_value(x, y, bg.seed + 2);
    const double v = textured_base_level + bg.noise_amplitude * n;
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

} // namespace

std::array<std::uint8_t, 3> stain_color(int intensity) noexcept
{
    const auto r = static_cast<std::uint8_t>(std::clamp(intensity, 0, 255));
    const auto gb = static_cast<std::uint8_t>(r / 4);
    return {r, gb, gb};
}

int droplet_width_px(int length_px, int angle_deg)
{
    const double w = std::round(length_px * std::sin(angle_deg * std::numbers::pi / 180.0));
    return std::max(1, static_cast<int>(w));
}

SyntheticDroplet generate_droplet(const SyntheticSpec& spec)
{
    if (spec.angle_deg < 1 || spec.angle_deg > 90) {
        throw InvalidArgument(fmt::format("droplet angle must be in (0, 90], got {}", spec.angle_deg));
    }
    if (spec.droplet_length_px < 1) {
        throw InvalidArgument(fmt::format("droplet length must be positive, got {}", spec.droplet_length_px));
    }
    if (spec.stain_intensity < 0 || spec.stain_intensity > 255) {
        throw InvalidArgument(fmt::format("stain intensity must be in [0, 255], got {}", spec.stain_intensity));
    }
    constexpr int margin = 2;
    const int stain_w = droplet_width_px(spec.droplet_length_px, spec.angle_deg);
    const int stain_h = spec.droplet_length_px;
    const int min_w = stain_w + 2 * margin;
    const int min_h = stain_h + 2 * margin;
    if (spec.width < min_w || spec.height < min_h) {
        throw InvalidArgument(fmt::format("droplet {}x{} px does not fit a {}x{} image; need at least {}x{}", stain_w,
                                          stain_h, spec.width, spec.height, min_w, min_h));
    }

    std::mt19937_64 rng(spec.rng_seed);
    const auto x0 = margin + static_cast<int>(rng() % static_cast<std::uint64_t>(spec.width - min_w + 1));
    const auto y0 = margin + static_cast<int>(rng() % static_cast<std::uint64_t>(spec.height - min_h + 1));

    SyntheticDroplet out{ImageBuffer(spec.width, spec.height, 3, 255), BinaryMask(spec.width, spec.height)};
    if (spec.background.kind == Background::Kind::textured) {
        for (int y = 0; y < spec.height; ++y) {
            for (int x = 0; x < spec.width; ++x) {
                const auto v = textured_level(x, y, spec.background);
                for (int c = 0; c < 3; ++c) {
                    out.image.at(x, y, c) = v;
                }
            }
        }
    }

    // Pixel-centre test against the ellipse inscribed in the stain_w x stain_h box.
    const double a = stain_w / 2.0;
    const double b = stain_h / 2.0;
    const auto color = stain_color(spec.stain_intensity);
    for (int j = 0; j < stain_h; ++j) {
        const double dy = (j + 0.5 - b) / b;
        for (int i = 0; i < stain_w; ++i) {
            const double dx = (i + 0.5 - a) / a;
            if (dx * dx + dy * dy <= 1.0) {
                out.mask.set(x0 + i, y0 + j, true);
                for (int c = 0; c < 3; ++c) {
                    out.image.at(x0 + i, y0 + j, c) = color[static_cast<std::size_t>(c)];
                }
            }
        }
    }
    return out;
}

std::string synthetic_id(const SyntheticSpec& spec)
{
    return fmt::format("a{:02}-s{:06}", spec.angle_deg, spec.rng_seed);
}

fs::path write_dataset(std::span<const SyntheticSpec> specs, const fs::path& out_dir,
                       const DatasetWriteOptions& options)
{
    const fs::path images = out_dir / "images";
    const fs::path masks = out_dir / "masks";
    fs::create_directories(images);
    fs::create_directories(masks);

    std::set<std::string> ids;
    for (const auto& spec : specs) {
        if (!ids.insert(synthetic_id(spec)).second) {
            throw InvalidArgument("duplicate synthetic id '" + synthetic_id(spec) + "'; vary angle or seed");
        }
    }

    std::vector<ManifestEntry> entries;
    entries.reserve(specs.size());
    for (const auto& spec : specs) {
        const auto droplet = generate_droplet(spec);
        const auto id = synthetic_id(spec);
        ManifestEntry entry{id, images / (id + ".png"), masks / (id + ".png"), spec.angle_deg, Colorspace::rgb,
                            options.split};
        write_png(entry.image_path, droplet.image);
        write_mask_png(*entry.mask_path, droplet.mask);
        entries.push_back(std::move(entry));
    }
    const auto manifest = out_dir / "manifest.csv";
    write_manifest(manifest, entries);
    return manifest;
}

std::vector<SyntheticSpec> synthetic_grid(std::span<const int> angles, int seeds_per_angle,
                                          const SyntheticSpec& prototype, std::uint64_t base_seed)
{
    std::vector<SyntheticSpec> specs;
    std::uint64_t seed = base_seed;
    for (const int angle : angles) {
        for (int k = 0; k < seeds_per_angle; ++k) {
            auto spec = prototype;
            spec.angle_deg = angle;
            spec.rng_seed = seed;
            if (spec.background.kind == Background::Kind::textured) {
                spec.background.seed = splitmix64(seed);
            }
            ++seed;
            specs.push_back(spec);
        }
    }
    return specs;
}

} // namespace stainbench
