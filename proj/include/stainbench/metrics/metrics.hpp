#pragma once

#include "stainbench/imaging/image.hpp"

namespace stainbench {

inline constexpr double default_tau = 0.5;

/// |a & b| / |a | b|; 1.0 when both masks are empty. Throws InvalidArgument on shape mismatch.
[[nodiscard]] double iou(const BinaryMask& a, const BinaryMask& b);

/// 2|a & b| / (|a| + |b|); 1.0 when both masks are empty.
[[nodiscard]] double dice(const BinaryMask& a, const BinaryMask& b);

[[nodiscard]] constexpr bool pass_fail(double iou_value, double tau) noexcept { return iou_value >= tau; }

struct MaskScore {
    double iou = 0.0;
    double dice = 0.0;
    bool passed = false;
};

[[nodiscard]] MaskScore score_mask(const BinaryMask& predicted, const BinaryMask& truth, double tau);

} // namespace stainbench
