#include "stainbench/imaging/image.hpp"

#include "stainbench/error.hpp"

#include <algorithm>
#include <string>

namespace stainbench {

namespace {

void check_shape(int width, int height, int channels)
{
    if (width < 1 || height < 1) {
        throw InvalidArgument("image dimensions must be positive, got " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
    if (channels != 1 && channels != 3) {
        throw InvalidArgument("image must have 1 or 3 channels, got " + std::to_string(channels));
    }
}

} // namespace

ImageBuffer::ImageBuffer(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels)
{
    check_shape(width, height, channels);
    pixels_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

ImageBuffer::ImageBuffer(int width, int height, int channels, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), channels_(channels), pixels_(std::move(pixels))
{
    check_shape(width, height, channels);
    if (pixels_.size() != pixel_count() * static_cast<std::size_t>(channels)) {
        throw InvalidArgument("pixel buffer holds " + std::to_string(pixels_.size()) + " samples, expected " +
                              std::to_string(pixel_count() * static_cast<std::size_t>(channels)));
    }
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height)
{
    if (width < 1 || height < 1) {
        throw InvalidArgument("mask dimensions must be positive, got " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
    bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0);
}

std::size_t BinaryMask::area() const noexcept
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

} // namespace stainbench
