#pragma once

#include <variant>
#include <vector>

namespace stainbench {

/// Dense grid of single-point prompts (automatic / zero-shot mode).
struct AutoGridPrompt {
    int points_per_side = 32;
    friend bool operator==(const AutoGridPrompt&, const AutoGridPrompt&) = default;
};

/// Single foreground point at pixel column x, row y.
struct PointPrompt {
    int x = 0;
    int y = 0;
    int label = 1; ///< 1 = foreground; background points are never generated
    friend bool operator==(const PointPrompt&, const PointPrompt&) = default;
};

/// Pixel box, inclusive x0/y0 and exclusive x1/y1.
struct BoxPrompt {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;
    [[nodiscard]] long long area() const noexcept { return static_cast<long long>(x1 - x0) * (y1 - y0); }
    friend bool operator==(const BoxPrompt&, const BoxPrompt&) = default;
};

using Prompt = std::variant<AutoGridPrompt, PointPrompt, BoxPrompt>;

inline constexpr int default_points_per_side = 32;

/// The fixed box shot: the whole image.
[[nodiscard]] BoxPrompt full_image_box(int width, int height);

/// The fixed point shot: (floor(width/2), floor(height/2)).
[[nodiscard]] PointPrompt center_point(int width, int height);

/// n x n cell-centred points, x_i = floor((i + 0.5) * width / n), row-major.
[[nodiscard]] std::vector<PointPrompt> auto_grid(int width, int height, int points_per_side);

/// Throws InvalidArgument when the prompt falls outside a width x height image.
void validate_prompt(const Prompt& prompt, int width, int height);

} // namespace stainbench
