#pragma once

#include "stainbench/imaging/image.hpp"

#include <filesystem>

namespace stainbench {

struct ImageInfo {
    int width = 0;
    int height = 0;
    int channels = 0;
};

/// Reads an 8-bit PNG as gray (1 channel) or RGB (3 channels); alpha is dropped.
[[nodiscard]] ImageBuffer read_png(const std::filesystem::path& path);

/// Header-only probe of a PNG's dimensions.
[[nodiscard]] ImageInfo read_png_info(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const ImageBuffer& image);

/// Masks are stored as 8-bit gray, 0 = background, 255 = foreground.
/// On read any sample >= 128 counts as foreground.
[[nodiscard]] BinaryMask read_mask_png(const std::filesystem::path& path);
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

[[nodiscard]] ImageBuffer mask_to_image(const BinaryMask& mask);

} // namespace stainbench
