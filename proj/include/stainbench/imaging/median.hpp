#pragma once

#include "stainbench/imaging/image.hpp"

namespace stainbench {

/// Median over the edge-clamped (2r+1)^2 neighbourhood of every pixel; radius >= 1.
[[nodiscard]] ImageBuffer median_filter(const ImageBuffer& gray, int radius);

} // namespace stainbench
