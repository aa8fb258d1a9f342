#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace stainbench {

/// Segmentation mode. Prompted modes go to neural backends, the two
/// classical modes to thresholding pipelines.
enum class Mode { auto_grid, box, point, threshold, threshold_median };

enum class Colorspace { rgb, gray };

/// Name used on the backend wire ("auto", "box", "point",
/// "classical-threshold", "classical-threshold-median").
[[nodiscard]] std::string_view wire_name(Mode mode) noexcept;
/// Name used in records ("auto", "box", "point", "threshold", "threshold+median").
[[nodiscard]] std::string_view record_name(Mode mode) noexcept;
/// Table label ("Auto", "Box", "Point", "Thres", "Thres + MF").
[[nodiscard]] std::string_view display_name(Mode mode) noexcept;

/// Accepts either the wire or the record spelling.
[[nodiscard]] std::optional<Mode> parse_mode(std::string_view name) noexcept;
[[nodiscard]] bool is_prompted(Mode mode) noexcept;

[[nodiscard]] std::string_view to_string(Colorspace cs) noexcept;
[[nodiscard]] std::optional<Colorspace> parse_colorspace(std::string_view name) noexcept;

/// "default" -> "Default", "fine-tuned" -> "Fine Tuned"; other labels verbatim.
[[nodiscard]] std::string display_model(std::string_view model);

/// Outcome of one image under one (mode, model) configuration.
struct EvalRecord {
    std::string image_id;
    int angle_deg = 0;
    Colorspace colorspace = Colorspace::rgb;
    Mode mode = Mode::box;
    std::string model;
    double iou = 0.0;
    double dice = 0.0;
    bool passed = false;
    double latency_s = 0.0; ///< backend-measured inference time
    double wall_s = 0.0;    ///< harness round-trip time, diagnostics only
    std::string error;      ///< empty unless the image failed
};

} // namespace stainbench
