#pragma once

#include "stainbench/imaging/components.hpp"
#include "stainbench/imaging/image.hpp"

namespace stainbench {

struct GroundTruthParams {
    int window = 31;
    int offset = 10;
    int median_radius = 1;
    Connectivity connectivity = Connectivity::eight;
};

/// adaptive_threshold -> median_filter -> largest_component, on the gray
/// version of the image.
[[nodiscard]] BinaryMask prepare_ground_truth(const ImageBuffer& image, const GroundTruthParams& params = {});

} // namespace stainbench
