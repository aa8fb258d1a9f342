#pragma once

#include "stainbench/imaging/image.hpp"

namespace stainbench {

enum class Connectivity { four = 4, eight = 8 };

/// Keeps only the largest foreground component. Equal-sized components are
/// resolved in favour of the one whose first pixel comes first in row-major order.
[[nodiscard]] BinaryMask largest_component(const BinaryMask& mask, Connectivity connectivity = Connectivity::eight);

} // namespace stainbench
