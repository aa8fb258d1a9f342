#include "stainbench/dataset/ground_truth.hpp"

#include "stainbench/imaging/color.hpp"
#include "stainbench/imaging/median.hpp"
#include "stainbench/imaging/png_io.hpp"
#include "stainbench/imaging/threshold.hpp"

namespace stainbench {

BinaryMask prepare_ground_truth(const ImageBuffer& image, const GroundTruthParams& params)
{
    const auto gray = as_grayscale(image);
    const auto raw = adaptive_threshold(gray, params.window, params.offset);
    // Median on the 0/255 rendering is a per-pixel majority vote.
    const auto smoothed = median_filter(mask_to_image(raw), params.median_radius);
    return largest_component(global_threshold(smoothed, 127, Polarity::bright_foreground), params.connectivity);
}

} // namespace stainbench
