#pragma once

#include "stainbench/imaging/image.hpp"

#include <cstdint>
#include <vector>

namespace stainbench {

/// Row-major run lengths alternating background, foreground, background, ...
/// The first run is background and is the only one allowed to be zero.
struct RunLengthEncoding {
    int width = 0;
    int height = 0;
    std::vector<std::int64_t> runs;

    friend bool operator==(const RunLengthEncoding&, const RunLengthEncoding&) = default;
};

[[nodiscard]] RunLengthEncoding rle_encode(const BinaryMask& mask);

/// Throws ValidationError when runs are negative, contain an interior zero,
/// or do not sum to width * height.
[[nodiscard]] BinaryMask rle_decode(const RunLengthEncoding& rle);

/// Same checks as rle_decode without building the mask.
void validate_rle(const RunLengthEncoding& rle);

} // namespace stainbench
