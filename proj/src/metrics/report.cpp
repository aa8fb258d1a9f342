#include "stainbench/metrics/report.hpp"

#include "stainbench/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>

namespace stainbench {

MarkdownTable::MarkdownTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }

void MarkdownTable::add_row(std::vector<std::string> cells)
{
    cells.resize(rows_.front().size());
    rows_.push_back(std::move(cells));
}

std::string MarkdownTable::render() const
{
    std::vector<std::size_t> widths(rows_.front().size(), 3);
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::string out;
    const auto emit = [&](const std::vector<std::string>& row) {
        out += '|';
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += fmt::format(" {:<{}} |", row[c], widths[c]);
        }
        out += '\n';
    };
    emit(rows_.front());
    out += '|';
    for (const auto w : widths) {
        out += std::string(w + 2, '-') + '|';
    }
    out += '\n';
    for (std::size_t r = 1; r < rows_.size(); ++r) {
        emit(rows_[r]);
    }
    return out;
}

std::string csv_field(std::string_view value)
{
    if (value.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(value);
    }
    std::string quoted = "\"";
    for (const char c : value) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string records_csv(std::span<const EvalRecord> records)
{
    std::string out(records_csv_header);
    out += '\n';
    for (const auto& r : records) {
        out += fmt::format("{},{},{},{},{},{:.6f},{:.6f},{},{:.6f},{:.6f},{}\n", csv_field(r.image_id), r.angle_deg,
                           to_string(r.colorspace), record_name(r.mode), csv_field(r.model), r.iou, r.dice,
                           r.passed ? "true" : "false", r.latency_s, r.wall_s, csv_field(r.error));
    }
    return out;
}

namespace {

std::string percent_cell(const PassCount& pc)
{
    const auto tenths = pc.tenths();
    return tenths ? format_tenths(*tenths) : std::string(absent_marker);
}

std::string count_cell(const PassCount& pc) { return fmt::format("{}/{}", pc.passes, pc.count); }

struct SpeedupRow {
    Mode mode;
    double base_s;
    double new_s;
    double percent;
};

std::vector<SpeedupRow> speedups(std::span<const TimingRow> rows)
{
    std::vector<SpeedupRow> out;
    for (const auto& base : rows) {
        if (base.model != "default") {
            continue;
        }
        for (const auto& tuned : rows) {
            if (tuned.model == "fine-tuned" && tuned.mode == base.mode && base.mean_s > 0 && tuned.mean_s > 0) {
                out.push_back({base.mode, base.mean_s, tuned.mean_s, speedup_percent(base.mean_s, tuned.mean_s)});
            }
        }
    }
    return out;
}

} // namespace

std::string table1_markdown(std::span<const ReportRow> rows)
{
    std::int64_t n_rgb = 0;
    std::int64_t n_gray = 0;
    for (const auto& row : rows) {
        n_rgb = std::max(n_rgb, row.rgb.count);
        n_gray = std::max(n_gray, row.gray.count);
    }
    MarkdownTable table({"Mode & Model", fmt::format("RGB Accuracy({})", n_rgb),
                         fmt::format("Grey Accuracy({})", n_gray), fmt::format("Overall Accuracy({})", n_rgb + n_gray),
                         "Passed"});
    for (const auto& row : rows) {
        table.add_row({row.label(), percent_cell(row.rgb), percent_cell(row.gray), percent_cell(row.overall()),
                       count_cell(row.overall())});
    }
    return "# Accuracy by mode and model\n\n" + table.render();
}

std::string table1_csv(std::span<const ReportRow> rows)
{
    std::string out = "mode,model,rgb_accuracy_pct,gray_accuracy_pct,overall_accuracy_pct,passes_rgb,n_rgb,passes_gray,"
                      "n_gray\n";
    const auto pct = [](const PassCount& pc) {
        const auto t = pc.tenths();
        return t ? format_tenths(*t) : std::string();
    };
    for (const auto& row : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", record_name(row.mode), csv_field(row.model), pct(row.rgb),
                           pct(row.gray), pct(row.overall()), row.rgb.passes, row.rgb.count, row.gray.passes,
                           row.gray.count);
    }
    return out;
}

std::string table2_markdown(std::span<const TimingRow> rows)
{
    MarkdownTable table({"Index", "Mean (seconds)", "Min (seconds)", "Max (seconds)", "Images"});
    for (const auto& row : rows) {
        table.add_row({std::string(display_name(row.mode)) + "-" + display_model(row.model),
                       format_fixed(row.mean_s, 2), format_fixed(row.min_s, 2), format_fixed(row.max_s, 2),
                       std::to_string(row.count)});
    }
    const auto faster = speedups(rows);
    for (const auto& s : faster) {
        table.add_row({fmt::format("Percentage Faster ({})", display_name(s.mode)),
                       format_fixed(s.percent, 2) + "%", "", "", ""});
    }
    std::string out = "# Image processing time\n\n" + table.render();
    out += "\nLatency is the backend-measured inference time per image, excluding image I/O.\n";
    if (!faster.empty()) {
        out += "\nSpeedup convention: 100 * (t_default - t_fine_tuned) / t_fine_tuned, computed from the mean "
               "latencies. The published reference pair 2.50 s / 2.39 s is reported there as 4.70%, which matches "
               "neither this convention (4.60%) nor the baseline-relative one (4.40%).\n";
    }
    return out;
}

std::string table2_csv(std::span<const TimingRow> rows)
{
    std::string out = "mode,model,count,mean_s,min_s,max_s\n";
    for (const auto& row : rows) {
        out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f}\n", record_name(row.mode), csv_field(row.model), row.count,
                           row.mean_s, row.min_s, row.max_s);
    }
    for (const auto& s : speedups(rows)) {
        out += fmt::format("{},speedup_percent,,{:.6f},,\n", record_name(s.mode), s.percent);
    }
    return out;
}

std::string table4_markdown(const ComparisonTable& table)
{
    std::vector<std::string> header;
    std::vector<std::string> pct;
    std::vector<std::string> counts;
    for (const auto column : comparison_columns) {
        header.emplace_back(column_title(column));
        const auto& cell = table[column];
        pct.push_back(cell ? percent_cell(cell->overall) + "%" : std::string(absent_marker));
        counts.push_back(cell ? count_cell(cell->overall) : std::string(absent_marker));
    }
    MarkdownTable md(header);
    md.add_row(pct);
    md.add_row(counts);
    return "# Accuracy, threshold vs. promptable segmentation\n\n" + md.render() +
           "\nThres: threshold; Thres + MF: threshold with median filtering; DB: default model, full-image box; "
           "FB: fine-tuned model, full-image box.\n";
}

std::string table4_csv(const ComparisonTable& table)
{
    std::string out = "column,model,passes,count,accuracy_pct\n";
    for (const auto column : comparison_columns) {
        const auto& cell = table[column];
        if (cell) {
            out += fmt::format("{},{},{},{},{}\n", csv_field(column_title(column)), csv_field(cell->model),
                               cell->overall.passes, cell->overall.count, percent_cell(cell->overall));
        } else {
            out += fmt::format("{},,,,{}\n", csv_field(column_title(column)), absent_marker);
        }
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

} // namespace stainbench
