#include "stainbench/imaging/png_io.hpp"

#include "stainbench/error.hpp"

#include <png.h>

#include <cstring>
#include <memory>

namespace stainbench {

namespace {

// RAII over png_image; png_image_free is safe on a finished or failed image.
struct PngImage {
    png_image image{};

    PngImage()
    {
        std::memset(&image, 0, sizeof image);
        image.version = PNG_IMAGE_VERSION;
    }
    ~PngImage() { png_image_free(&image); }
    PngImage(const PngImage&) = delete;
    PngImage& operator=(const PngImage&) = delete;
};

void begin_read(PngImage& png, const std::filesystem::path& path)
{
    if (!png_image_begin_read_from_file(&png.image, path.c_str())) {
        throw IoError("cannot read PNG '" + path.string() + "': " + png.image.message);
    }
}

} // namespace

ImageInfo read_png_info(const std::filesystem::path& path)
{
    PngImage png;
    begin_read(png, path);
    const int channels = (png.image.format & PNG_FORMAT_FLAG_COLOR) != 0 ? 3 : 1;
    return {static_cast<int>(png.image.width), static_cast<int>(png.image.height), channels};
}

ImageBuffer read_png(const std::filesystem::path& path)
{
    PngImage png;
    begin_read(png, path);
    const bool color = (png.image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    png.image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const int channels = color ? 3 : 1;
    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(png.image));
    if (!png_image_finish_read(&png.image, nullptr, pixels.data(), 0, nullptr)) {
        throw IoError("cannot decode PNG '" + path.string() + "': " + png.image.message);
    }
    return ImageBuffer(static_cast<int>(png.image.width), static_cast<int>(png.image.height), channels,
                       std::move(pixels));
}

void write_png(const std::filesystem::path& path, const ImageBuffer& image)
{
    PngImage png;
    png.image.width = static_cast<png_uint_32>(image.width());
    png.image.height = static_cast<png_uint_32>(image.height());
    png.image.format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&png.image, path.c_str(), 0, image.pixels().data(), 0, nullptr)) {
        throw IoError("cannot write PNG '" + path.string() + "': " + png.image.message);
    }
}

BinaryMask read_mask_png(const std::filesystem::path& path)
{
    PngImage png;
    begin_read(png, path);
    png.image.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(png.image));
    if (!png_image_finish_read(&png.image, nullptr, pixels.data(), 0, nullptr)) {
        throw IoError("cannot decode mask PNG '" + path.string() + "': " + png.image.message);
    }
    BinaryMask mask(static_cast<int>(png.image.width), static_cast<int>(png.image.height));
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        mask.set(i, pixels[i] >= 128);
    }
    return mask;
}

ImageBuffer mask_to_image(const BinaryMask& mask)
{
    ImageBuffer image(mask.width(), mask.height(), 1);
    auto px = image.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        px[i] = mask[i] ? 255 : 0;
    }
    return image;
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask)
{
    write_png(path, mask_to_image(mask));
}

} // namespace stainbench
