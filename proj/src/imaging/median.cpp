#include "stainbench/imaging/median.hpp"

#include "stainbench/error.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace stainbench {

ImageBuffer median_filter(const ImageBuffer& gray, int radius)
{
    if (gray.channels() != 1) {
        throw InvalidArgument("median_filter expects a 1-channel image");
    }
    if (radius < 1) {
        throw InvalidArgument("median_filter radius must be >= 1, got " + std::to_string(radius));
    }

    const int w = gray.width();
    const int h = gray.height();
    const int side = 2 * radius + 1;
    // Rank of the median among side*side samples (odd count).
    const int rank = (side * side) / 2;

    ImageBuffer out(w, h, 1);
    std::array<int, 256> histogram{};
    const auto sample = [&](int x, int y) {
        return gray.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
    };

    // Sliding histogram along each row.
    for (int y = 0; y < h; ++y) {
        histogram.fill(0);
        for (int dy = -radius; dy <= radius; ++dy) {
            for (int dx = -radius; dx <= radius; ++dx) {
                ++histogram[sample(dx, y + dy)];
            }
        }
        for (int x = 0; x < w; ++x) {
            if (x > 0) {
                for (int dy = -radius; dy <= radius; ++dy) {
                    --histogram[sample(x - 1 - radius, y + dy)];
                    ++histogram[sample(x + radius, y + dy)];
                }
            }
            int seen = 0;
            int v = 0;
            for (; v < 256; ++v) {
                seen += histogram[v];
                if (seen > rank) {
                    break;
                }
            }
            out.at(x, y) = static_cast<std::uint8_t>(v);
        }
    }
    return out;
}

} // namespace stainbench
