#include "stainbench/imaging/threshold.hpp"

#include "stainbench/error.hpp"

#include <array>
#include <cstdlib>
#include <string>
#include <vector>

namespace stainbench {

namespace {

void require_gray(const ImageBuffer& image, const char* op)
{
    if (image.channels() != 1) {
        throw InvalidArgument(std::string(op) + " expects a 1-channel image");
    }
}

using u128 = unsigned __int128;

// Between-class variance for a split, up to the constant factor 1/N^2:
//   (N*S0 - W0*S)^2 / (W0*W1)
// held as quotient and remainder so two splits compare exactly.
struct SplitScore {
    u128 quotient = 0;
    u128 remainder = 0;
    u128 denominator = 1;

    [[nodiscard]] bool greater_than(const SplitScore& other) const
    {
        if (quotient != other.quotient) {
            return quotient > other.quotient;
        }
        // remainder < denominator, both bounded by N^2/4, so the products fit.
        return remainder * other.denominator > other.remainder * denominator;
    }
};

} // namespace

Polarity parse_polarity(std::string_view name)
{
    if (name == "dark" || name == "dark-foreground") {
        return Polarity::dark_foreground;
    }
    if (name == "bright" || name == "bright-foreground") {
        return Polarity::bright_foreground;
    }
    throw InvalidArgument("unknown polarity '" + std::string(name) + "'");
}

std::string_view to_string(Polarity polarity) noexcept
{
    return polarity == Polarity::dark_foreground ? "dark-foreground" : "bright-foreground";
}

BinaryMask global_threshold(const ImageBuffer& gray, std::uint8_t t, Polarity polarity)
{
    require_gray(gray, "global_threshold");
    BinaryMask mask(gray.width(), gray.height());
    const auto px = gray.pixels();
    const bool dark = polarity == Polarity::dark_foreground;
    for (std::size_t i = 0; i < px.size(); ++i) {
        mask.set(i, dark ? px[i] <= t : px[i] > t);
    }
    return mask;
}

std::uint8_t otsu_threshold(const ImageBuffer& gray)
{
    require_gray(gray, "otsu_threshold");

    std::array<std::uint64_t, 256> histogram{};
    for (const auto v : gray.pixels()) {
        ++histogram[v];
    }

    const auto n = static_cast<std::uint64_t>(gray.pixels().size());
    std::uint64_t total_sum = 0;
    int levels_present = 0;
    int only_level = 0;
    for (int v = 0; v < 256; ++v) {
        total_sum += histogram[v] * static_cast<std::uint64_t>(v);
        if (histogram[v] != 0) {
            ++levels_present;
            only_level = v;
        }
    }
    if (levels_present <= 1) {
        return static_cast<std::uint8_t>(only_level);
    }

    int best_t = 0;
    SplitScore best{};
    std::uint64_t w0 = 0;
    std::uint64_t s0 = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += histogram[t];
        s0 += histogram[t] * static_cast<std::uint64_t>(t);
        const std::uint64_t w1 = n - w0;
        if (w0 == 0 || w1 == 0) {
            continue; // zero variance; cannot beat a real split
        }
        const u128 lhs = static_cast<u128>(n) * s0;
        const u128 rhs = static_cast<u128>(w0) * total_sum;
        const u128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
        const u128 numerator = diff * diff;
        const u128 denominator = static_cast<u128>(w0) * w1;
        const SplitScore score{numerator / denominator, numerator % denominator, denominator};
        if (score.greater_than(best)) {
            best = score;
            best_t = t;
        }
    }
    return static_cast<std::uint8_t>(best_t);
}

BinaryMask adaptive_threshold(const ImageBuffer& gray, int window, int offset)
{
    require_gray(gray, "adaptive_threshold");
    if (window < 3 || window % 2 == 0) {
        throw InvalidArgument("adaptive_threshold window must be odd and >= 3, got " + std::to_string(window));
    }

    const int w = gray.width();
    const int h = gray.height();
    const int half = window / 2;

    // Summed-area table over the edge-replicated image, (pw+1) x (ph+1).
    const int pw = w + 2 * half;
    const int ph = h + 2 * half;
    std::vector<std::int64_t> table(static_cast<std::size_t>(pw + 1) * static_cast<std::size_t>(ph + 1), 0);
    const auto at = [&](int x, int y) -> std::int64_t& {
        return table[static_cast<std::size_t>(y) * static_cast<std::size_t>(pw + 1) + static_cast<std::size_t>(x)];
    };
    for (int py = 0; py < ph; ++py) {
        const int sy = std::clamp(py - half, 0, h - 1);
        std::int64_t row = 0;
        for (int px = 0; px < pw; ++px) {
            const int sx = std::clamp(px - half, 0, w - 1);
            row += gray.at(sx, sy);
            at(px + 1, py + 1) = at(px + 1, py) + row;
        }
    }

    const std::int64_t area = static_cast<std::int64_t>(window) * window;
    BinaryMask mask(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            // Padded window for pixel (x, y) spans [x, x + window) x [y, y + window).
            const std::int64_t sum =
                at(x + window, y + window) - at(x, y + window) - at(x + window, y) + at(x, y);
            // sample <= sum/area - offset, kept in integers.
            mask.set(x, y, static_cast<std::int64_t>(gray.at(x, y)) * area <= sum - offset * area);
        }
    }
    return mask;
}

} // namespace stainbench
