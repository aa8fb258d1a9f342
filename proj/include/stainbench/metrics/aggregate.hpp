#pragma once

#include "stainbench/metrics/record.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stainbench {

/// round_half_up(100 * passes / count, 1 decimal), as an integer count of tenths.
[[nodiscard]] std::int64_t accuracy_tenths(std::int64_t passes, std::int64_t count);

/// Half-up rounding to `decimals` places.
[[nodiscard]] double round_half_up(double value, int decimals);

/// Fixed-point text for a value already rounded (e.g. "87.8", "2.50").
[[nodiscard]] std::string format_fixed(double value, int decimals);
[[nodiscard]] std::string format_tenths(std::int64_t tenths);

/// Pass counts for one colorspace slice.
struct PassCount {
    std::int64_t passes = 0;
    std::int64_t count = 0;

    /// Percentage in tenths, absent when the slice is empty.
    [[nodiscard]] std::optional<std::int64_t> tenths() const;
    [[nodiscard]] std::optional<double> percent() const;
};

/// One row of the accuracy-by-mode/model table.
struct ReportRow {
    Mode mode = Mode::box;
    std::string model;
    PassCount rgb;
    PassCount gray;

    [[nodiscard]] PassCount overall() const { return {rgb.passes + gray.passes, rgb.count + gray.count}; }
    [[nodiscard]] std::string label() const; ///< "Box-Fine Tuned"
};

/// Groups records by (mode, model). Rows are ordered by mode, then by the
/// model's first appearance; groups without records never appear.
[[nodiscard]] std::vector<ReportRow> aggregate_accuracy(std::span<const EvalRecord> records);

struct TimingRow {
    Mode mode = Mode::box;
    std::string model;
    std::size_t count = 0;
    double mean_s = 0.0;
    double min_s = 0.0;
    double max_s = 0.0;
};

/// Latency mean/min/max per (mode, model); records that failed are excluded.
[[nodiscard]] std::vector<TimingRow> timing_stats(std::span<const EvalRecord> records);

/// 100 * (t_base - t_new) / t_new. Throws InvalidArgument unless both are positive.
[[nodiscard]] double speedup_percent(double t_base, double t_new);

/// Classical-versus-neural accuracy columns.
enum class ComparisonColumn { thres, thres_median, default_box, finetuned_box };

inline constexpr std::array<ComparisonColumn, 4> comparison_columns{
    ComparisonColumn::thres, ComparisonColumn::thres_median, ComparisonColumn::default_box,
    ComparisonColumn::finetuned_box};

[[nodiscard]] std::string_view column_title(ComparisonColumn column) noexcept;

struct ComparisonCell {
    std::string model; ///< model whose records filled the column
    PassCount overall;
};

/// Each column is absent (nullopt) when its configuration has no records.
/// Threshold columns prefer the "classical" model and otherwise take the first
/// model seen for that mode; the box columns take "default" and "fine-tuned".
struct ComparisonTable {
    std::array<std::optional<ComparisonCell>, 4> cells;

    [[nodiscard]] const std::optional<ComparisonCell>& operator[](ComparisonColumn c) const
    {
        return cells[static_cast<std::size_t>(c)];
    }
};

[[nodiscard]] ComparisonTable comparison_table(std::span<const EvalRecord> records);

} // namespace stainbench
