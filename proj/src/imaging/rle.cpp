#include "stainbench/imaging/rle.hpp"

#include "stainbench/error.hpp"

#include <string>

namespace stainbench {

RunLengthEncoding rle_encode(const BinaryMask& mask)
{
    RunLengthEncoding rle{mask.width(), mask.height(), {}};
    bool current = false;
    std::int64_t run = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i] != current) {
            rle.runs.push_back(run);
            current = mask[i];
            run = 0;
        }
        ++run;
    }
    rle.runs.push_back(run);
    return rle;
}

void validate_rle(const RunLengthEncoding& rle)
{
    if (rle.width < 1 || rle.height < 1) {
        throw ValidationError("malformed runs: dimensions " + std::to_string(rle.width) + "x" +
                              std::to_string(rle.height) + " are not positive");
    }
    if (rle.runs.empty()) {
        throw ValidationError("malformed runs: empty run list");
    }
    std::int64_t total = 0;
    const std::int64_t expected = static_cast<std::int64_t>(rle.width) * rle.height;
    for (std::size_t i = 0; i < rle.runs.size(); ++i) {
        const auto run = rle.runs[i];
        if (run < 0) {
            throw ValidationError("malformed runs: negative run " + std::to_string(run) + " at index " +
                                  std::to_string(i));
        }
        if (run == 0 && i != 0) {
            throw ValidationError("malformed runs: zero-length run at interior index " + std::to_string(i));
        }
        total += run;
        if (total > expected) {
            break;
        }
    }
    if (total != expected) {
        throw ValidationError("malformed runs: runs cover " + std::to_string(total) + " pixels, expected " +
                              std::to_string(expected));
    }
}

BinaryMask rle_decode(const RunLengthEncoding& rle)
{
    validate_rle(rle);
    BinaryMask mask(rle.width, rle.height);
    std::size_t pos = 0;
    bool value = false;
    for (const auto run : rle.runs) {
        if (value) {
            for (std::int64_t k = 0; k < run; ++k) {
                mask.set(pos + static_cast<std::size_t>(k), true);
            }
        }
        pos += static_cast<std::size_t>(run);
        value = !value;
    }
    return mask;
}

} // namespace stainbench
