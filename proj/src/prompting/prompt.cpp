#include "stainbench/prompting/prompt.hpp"

#include "stainbench/error.hpp"

#include <string>

namespace stainbench {

namespace {

void require_dims(int width, int height)
{
    if (width < 1 || height < 1) {
        throw InvalidArgument("prompt target dimensions must be positive, got " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
}

// floor((i + 0.5) * extent / n) == floor((2i + 1) * extent / 2n), exact in integers.
int cell_center(int i, int extent, int n)
{
    return static_cast<int>((2LL * i + 1) * extent / (2LL * n));
}

} // namespace

BoxPrompt full_image_box(int width, int height)
{
    require_dims(width, height);
    return {0, 0, width, height};
}

PointPrompt center_point(int width, int height)
{
    require_dims(width, height);
    return {width / 2, height / 2, 1};
}

std::vector<PointPrompt> auto_grid(int width, int height, int points_per_side)
{
    require_dims(width, height);
    if (points_per_side < 1) {
        throw InvalidArgument("points_per_side must be >= 1, got " + std::to_string(points_per_side));
    }
    std::vector<PointPrompt> points;
    points.reserve(static_cast<std::size_t>(points_per_side) * points_per_side);
    for (int j = 0; j < points_per_side; ++j) {
        const int y = cell_center(j, height, points_per_side);
        for (int i = 0; i < points_per_side; ++i) {
            points.push_back({cell_center(i, width, points_per_side), y, 1});
        }
    }
    return points;
}

void validate_prompt(const Prompt& prompt, int width, int height)
{
    struct Visitor {
        int width;
        int height;
        void operator()(const AutoGridPrompt& grid) const
        {
            if (grid.points_per_side < 1) {
                throw InvalidArgument("auto grid needs points_per_side >= 1");
            }
        }
        void operator()(const PointPrompt& p) const
        {
            if (p.x < 0 || p.x >= width || p.y < 0 || p.y >= height) {
                throw InvalidArgument("point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                                      ") lies outside the image");
            }
        }
        void operator()(const BoxPrompt& b) const
        {
            if (!(0 <= b.x0 && b.x0 < b.x1 && b.x1 <= width && 0 <= b.y0 && b.y0 < b.y1 && b.y1 <= height)) {
                throw InvalidArgument("box does not satisfy 0 <= x0 < x1 <= width, 0 <= y0 < y1 <= height");
            }
        }
    };
    std::visit(Visitor{width, height}, prompt);
}

} // namespace stainbench
