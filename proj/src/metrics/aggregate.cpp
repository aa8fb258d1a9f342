#include "stainbench/metrics/aggregate.hpp"

#include "stainbench/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace stainbench {

namespace {

// Model labels in order of first appearance.
std::vector<std::string> model_order(std::span<const EvalRecord> records)
{
    std::vector<std::string> models;
    for (const auto& r : records) {
        if (std::find(models.begin(), models.end(), r.model) == models.end()) {
            models.push_back(r.model);
        }
    }
    return models;
}

struct GroupKey {
    Mode mode;
    std::size_t model_rank;
    auto operator<=>(const GroupKey&) const = default;
};

std::size_t rank_of(const std::vector<std::string>& models, const std::string& model)
{
    return static_cast<std::size_t>(std::find(models.begin(), models.end(), model) - models.begin());
}

} // namespace

std::int64_t accuracy_tenths(std::int64_t passes, std::int64_t count)
{
    if (count <= 0) {
        throw InvalidArgument("accuracy over an empty group");
    }
    // 1000 * passes is exact in double and division is correctly rounded; the
    // true quotient sits at least 1/(2*count) away from any other half-tenth.
    return static_cast<std::int64_t>(
        std::floor(1000.0 * static_cast<double>(passes) / static_cast<double>(count) + 0.5));
}

double round_half_up(double value, int decimals)
{
    const double scale = std::pow(10.0, decimals);
    return std::floor(value * scale + 0.5 + 1e-9) / scale;
}

std::string format_fixed(double value, int decimals)
{
    return fmt::format("{:.{}f}", round_half_up(value, decimals), decimals);
}

std::string format_tenths(std::int64_t tenths)
{
    return fmt::format("{}.{}", tenths / 10, tenths % 10);
}

std::optional<std::int64_t> PassCount::tenths() const
{
    if (count == 0) {
        return std::nullopt;
    }
    return accuracy_tenths(passes, count);
}

std::optional<double> PassCount::percent() const
{
    if (count == 0) {
        return std::nullopt;
    }
    return 100.0 * static_cast<double>(passes) / static_cast<double>(count);
}

std::string ReportRow::label() const
{
    return std::string(display_name(mode)) + "-" + display_model(model);
}

std::vector<ReportRow> aggregate_accuracy(std::span<const EvalRecord> records)
{
    const auto models = model_order(records);
    std::map<GroupKey, ReportRow> groups;
    for (const auto& r : records) {
        auto& row = groups[GroupKey{r.mode, rank_of(models, r.model)}];
        row.mode = r.mode;
        row.model = r.model;
        auto& slice = r.colorspace == Colorspace::rgb ? row.rgb : row.gray;
        ++slice.count;
        slice.passes += r.passed ? 1 : 0;
    }
    std::vector<ReportRow> rows;
    rows.reserve(groups.size());
    for (auto& [key, row] : groups) {
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<TimingRow> timing_stats(std::span<const EvalRecord> records)
{
    const auto models = model_order(records);
    struct Acc {
        TimingRow row;
        double sum = 0.0;
    };
    std::map<GroupKey, Acc> groups;
    for (const auto& r : records) {
        if (!r.error.empty()) {
            continue;
        }
        auto [it, fresh] = groups.try_emplace(GroupKey{r.mode, rank_of(models, r.model)});
        auto& acc = it->second;
        if (fresh) {
            acc.row.mode = r.mode;
            acc.row.model = r.model;
            acc.row.min_s = std::numeric_limits<double>::infinity();
            acc.row.max_s = -std::numeric_limits<double>::infinity();
        }
        ++acc.row.count;
        acc.sum += r.latency_s;
        acc.row.min_s = std::min(acc.row.min_s, r.latency_s);
        acc.row.max_s = std::max(acc.row.max_s, r.latency_s);
    }
    std::vector<TimingRow> rows;
    for (auto& [key, acc] : groups) {
        acc.row.mean_s = acc.sum / static_cast<double>(acc.row.count);
        rows.push_back(acc.row);
    }
    return rows;
}

double speedup_percent(double t_base, double t_new)
{
    if (!(t_base > 0.0) || !(t_new > 0.0)) {
        throw InvalidArgument(fmt::format("speedup needs positive times, got base={} new={}", t_base, t_new));
    }
    return 100.0 * (t_base - t_new) / t_new;
}

std::string_view column_title(ComparisonColumn column) noexcept
{
    switch (column) {
    case ComparisonColumn::thres: return "Thres";
    case ComparisonColumn::thres_median: return "Thres + MF";
    case ComparisonColumn::default_box: return "DB";
    case ComparisonColumn::finetuned_box: return "FB";
    }
    return "?";
}

ComparisonTable comparison_table(std::span<const EvalRecord> records)
{
    const auto rows = aggregate_accuracy(records);
    const auto find = [&](Mode mode, std::string_view model) -> const ReportRow* {
        for (const auto& row : rows) {
            if (row.mode == mode && row.model == model) {
                return &row;
            }
        }
        return nullptr;
    };
    const auto classical = [&](Mode mode) -> const ReportRow* {
        if (const auto* row = find(mode, "classical")) {
            return row;
        }
        for (const auto& row : rows) {
            if (row.mode == mode) {
                return &row;
            }
        }
        return nullptr;
    };

    const std::array<const ReportRow*, 4> picks{classical(Mode::threshold), classical(Mode::threshold_median),
                                                find(Mode::box, "default"), find(Mode::box, "fine-tuned")};
    ComparisonTable table;
    for (std::size_t i = 0; i < picks.size(); ++i) {
        if (picks[i] != nullptr) {
            table.cells[i] = ComparisonCell{picks[i]->model, picks[i]->overall()};
        }
    }
    return table;
}

} // namespace stainbench
