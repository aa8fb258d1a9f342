#pragma once

#include "stainbench/imaging/image.hpp"

namespace stainbench {

/// BT.601 luma, round half up: round(0.299 R + 0.587 G + 0.114 B).
/// Throws InvalidArgument on 1-channel input; use as_grayscale to pass those through.
[[nodiscard]] ImageBuffer to_grayscale(const ImageBuffer& rgb);

/// to_grayscale for RGB input, a copy of the image otherwise.
[[nodiscard]] ImageBuffer as_grayscale(const ImageBuffer& image);

} // namespace stainbench
