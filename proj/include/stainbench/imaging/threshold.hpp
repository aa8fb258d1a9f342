#pragma once

#include "stainbench/imaging/image.hpp"

#include <cstdint>
#include <string_view>

namespace stainbench {

/// Which side of the cutoff counts as foreground.
enum class Polarity {
    dark_foreground,   ///< sample <= t
    bright_foreground, ///< sample > t
};

[[nodiscard]] Polarity parse_polarity(std::string_view name);
[[nodiscard]] std::string_view to_string(Polarity polarity) noexcept;

[[nodiscard]] BinaryMask global_threshold(const ImageBuffer& gray, std::uint8_t t,
                                          Polarity polarity = Polarity::dark_foreground);

/// Otsu's automatic threshold.
///
/// Returns the smallest t in [0, 255] maximizing the between-class variance of
/// {sample <= t} versus {sample > t}. The comparison is carried out in exact
/// integer arithmetic, so ties are genuine ties. A single-level histogram
/// returns that level.
[[nodiscard]] std::uint8_t otsu_threshold(const ImageBuffer& gray);

/// Local-mean threshold with dark foreground: a pixel is set iff
/// sample <= mean(window x window, edge-clamped) - offset.
/// `window` must be odd and >= 3.
[[nodiscard]] BinaryMask adaptive_threshold(const ImageBuffer& gray, int window, int offset);

} // namespace stainbench
