#include "stainbench/imaging/components.hpp"

#include <numeric>
#include <vector>

namespace stainbench {

namespace {

class DisjointSet {
public:
    std::size_t make()
    {
        parent_.push_back(parent_.size());
        return parent_.size() - 1;
    }

    std::size_t find(std::size_t i)
    {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    // The smaller label wins so the root is always the earliest-created label.
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a < b) {
            parent_[b] = a;
        } else if (b < a) {
            parent_[a] = b;
        }
    }

private:
    std::vector<std::size_t> parent_;
};

constexpr std::size_t no_label = static_cast<std::size_t>(-1);

} // namespace

BinaryMask largest_component(const BinaryMask& mask, Connectivity connectivity)
{
    const int w = mask.width();
    const int h = mask.height();
    if (mask.size() == 0) {
        return mask;
    }

    // Two-pass labelling. Labels are created in row-major order of first
    // encounter, and unions keep the smaller label as root, so the root of a
    // component is the label of its first row-major pixel.
    std::vector<std::size_t> labels(mask.size(), no_label);
    DisjointSet sets;
    const bool diagonal = connectivity == Connectivity::eight;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) {
                continue;
            }
            const auto idx = static_cast<std::size_t>(y) * w + x;
            std::size_t label = no_label;
            const auto join = [&](int nx, int ny) {
                if (nx < 0 || nx >= w || ny < 0) {
                    return;
                }
                const auto n = labels[static_cast<std::size_t>(ny) * w + nx];
                if (n == no_label) {
                    return;
                }
                if (label == no_label) {
                    label = n;
                } else {
                    sets.unite(label, n);
                }
            };
            join(x - 1, y);
            join(x, y - 1);
            if (diagonal) {
                join(x - 1, y - 1);
                join(x + 1, y - 1);
            }
            labels[idx] = label == no_label ? sets.make() : label;
        }
    }

    std::vector<std::size_t> sizes;
    for (auto& label : labels) {
        if (label == no_label) {
            continue;
        }
        label = sets.find(label);
        if (label >= sizes.size()) {
            sizes.resize(label + 1, 0);
        }
        ++sizes[label];
    }

    BinaryMask out(w, h);
    if (sizes.empty()) {
        return out;
    }
    // Roots are ordered by first pixel, so the first maximum is the tie winner.
    std::size_t best = 0;
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] > sizes[best]) {
            best = i;
        }
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out.set(i, labels[i] == best);
    }
    return out;
}

} // namespace stainbench
