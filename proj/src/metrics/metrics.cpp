#include "stainbench/metrics/metrics.hpp"

#include "stainbench/error.hpp"

#include <string>

namespace stainbench {

namespace {

struct Overlap {
    std::size_t intersection = 0;
    std::size_t area_a = 0;
    std::size_t area_b = 0;
};

Overlap overlap(const BinaryMask& a, const BinaryMask& b)
{
    if (!a.same_shape(b)) {
        throw InvalidArgument("mask dimension mismatch: " + std::to_string(a.width()) + "x" +
                              std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                              std::to_string(b.height()));
    }
    Overlap o;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool pa = a[i];
        const bool pb = b[i];
        o.area_a += pa;
        o.area_b += pb;
        o.intersection += pa && pb;
    }
    return o;
}

} // namespace

double iou(const BinaryMask& a, const BinaryMask& b)
{
    const auto o = overlap(a, b);
    const auto uni = o.area_a + o.area_b - o.intersection;
    return uni == 0 ? 1.0 : static_cast<double>(o.intersection) / static_cast<double>(uni);
}

double dice(const BinaryMask& a, const BinaryMask& b)
{
    const auto o = overlap(a, b);
    const auto total = o.area_a + o.area_b;
    return total == 0 ? 1.0 : 2.0 * static_cast<double>(o.intersection) / static_cast<double>(total);
}

MaskScore score_mask(const BinaryMask& predicted, const BinaryMask& truth, double tau)
{
    const double i = iou(predicted, truth);
    return {i, dice(predicted, truth), pass_fail(i, tau)};
}

} // namespace stainbench
