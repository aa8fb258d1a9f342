#include "stainbench/imaging/color.hpp"

#include "stainbench/error.hpp"

namespace stainbench {

ImageBuffer to_grayscale(const ImageBuffer& rgb)
{
    if (rgb.channels() != 3) {
        throw InvalidArgument("to_grayscale expects a 3-channel image; pass gray images through unchanged");
    }
    ImageBuffer gray(rgb.width(), rgb.height(), 1);
    const auto src = rgb.pixels();
    auto dst = gray.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        // Fixed-point 0.299/0.587/0.114 with +0.5 for round-half-up; max is exactly 255.
        const unsigned r = src[3 * i];
        const unsigned g = src[3 * i + 1];
        const unsigned b = src[3 * i + 2];
        dst[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
    }
    return gray;
}

ImageBuffer as_grayscale(const ImageBuffer& image)
{
    return image.channels() == 3 ? to_grayscale(image) : image;
}

} // namespace stainbench
