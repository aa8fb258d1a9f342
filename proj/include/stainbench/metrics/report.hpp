#pragma once

#include "stainbench/metrics/aggregate.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace stainbench {

/// Column-aligned markdown table.
class MarkdownTable {
public:
    explicit MarkdownTable(std::vector<std::string> header);
    void add_row(std::vector<std::string> cells);
    [[nodiscard]] std::string render() const;

private:
    std::vector<std::vector<std::string>> rows_;
};

/// Quotes a CSV field when it contains a comma, quote or newline.
[[nodiscard]] std::string csv_field(std::string_view value);

inline constexpr std::string_view records_csv_header =
    "image_id,angle_deg,colorspace,mode,model,iou,dice,passed,latency_s,wall_s,error";

[[nodiscard]] std::string records_csv(std::span<const EvalRecord> records);

/// Placeholder for a configuration that produced no records.
inline constexpr std::string_view absent_marker = "absent";

/// Accuracy by mode/model and colorspace.
[[nodiscard]] std::string table1_markdown(std::span<const ReportRow> rows);
[[nodiscard]] std::string table1_csv(std::span<const ReportRow> rows);

/// Latency per mode/model plus a speedup row per mode served by both the
/// "default" and "fine-tuned" models.
[[nodiscard]] std::string table2_markdown(std::span<const TimingRow> rows);
[[nodiscard]] std::string table2_csv(std::span<const TimingRow> rows);

/// Classical versus box-prompted neural accuracy.
[[nodiscard]] std::string table4_markdown(const ComparisonTable& table);
[[nodiscard]] std::string table4_csv(const ComparisonTable& table);

void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace stainbench
