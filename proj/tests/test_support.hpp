#pragma once

// Test-only reference implementations. They are deliberately naive and share
// no code path with the library routines they check.

#include "stainbench/imaging/image.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

namespace stainbench::testing {

/// Otsu by exhaustive sweep: for each t, split the raw pixel list and compare
/// between-class variance W0*W1*(mu0 - mu1)^2 exactly via cross-multiplication.
/// Smallest maximizing t; single-level images return that level.
std::uint8_t exhaustive_otsu(const ImageBuffer& gray);

/// Median by sorting the edge-clamped window of every pixel.
ImageBuffer sorted_window_median(const ImageBuffer& gray, int radius);

/// Largest component by breadth-first flood fill from each unvisited
/// foreground pixel in row-major order; the first maximum wins ties.
BinaryMask flood_fill_largest(const BinaryMask& mask, int connectivity);

/// Local-mean threshold evaluated window by window.
BinaryMask windowed_mean_threshold(const ImageBuffer& gray, int window, int offset);

/// True iff every foreground pixel is reachable from every other.
bool is_connected(const BinaryMask& mask, int connectivity);

ImageBuffer random_gray(std::mt19937& rng, int max_side = 64);
BinaryMask random_mask(std::mt19937& rng, int max_side = 64, double density = -1.0);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

} // namespace stainbench::testing
