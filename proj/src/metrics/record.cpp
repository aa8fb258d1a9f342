#include "stainbench/metrics/record.hpp"

namespace stainbench {

std::string_view wire_name(Mode mode) noexcept
{
    switch (mode) {
    case Mode::auto_grid: return "auto";
    case Mode::box: return "box";
    case Mode::point: return "point";
    case Mode::threshold: return "classical-threshold";
    case Mode::threshold_median: return "classical-threshold-median";
    }
    return "?";
}

std::string_view record_name(Mode mode) noexcept
{
    switch (mode) {
    case Mode::threshold: return "threshold";
    case Mode::threshold_median: return "threshold+median";
    default: return wire_name(mode);
    }
}

std::string_view display_name(Mode mode) noexcept
{
    switch (mode) {
    case Mode::auto_grid: return "Auto";
    case Mode::box: return "Box";
    case Mode::point: return "Point";
    case Mode::threshold: return "Thres";
    case Mode::threshold_median: return "Thres + MF";
    }
    return "?";
}

std::optional<Mode> parse_mode(std::string_view name) noexcept
{
    for (const auto mode : {Mode::auto_grid, Mode::box, Mode::point, Mode::threshold, Mode::threshold_median}) {
        if (name == wire_name(mode) || name == record_name(mode)) {
            return mode;
        }
    }
    return std::nullopt;
}

bool is_prompted(Mode mode) noexcept
{
    return mode == Mode::auto_grid || mode == Mode::box || mode == Mode::point;
}

std::string_view to_string(Colorspace cs) noexcept { return cs == Colorspace::rgb ? "RGB" : "gray"; }

std::optional<Colorspace> parse_colorspace(std::string_view name) noexcept
{
    if (name == "RGB" || name == "rgb") {
        return Colorspace::rgb;
    }
    if (name == "gray" || name == "grey" || name == "GRAY") {
        return Colorspace::gray;
    }
    return std::nullopt;
}

std::string display_model(std::string_view model)
{
    if (model == "default") {
        return "Default";
    }
    if (model == "fine-tuned") {
        return "Fine Tuned";
    }
    if (model == "classical") {
        return "Classical";
    }
    return std::string(model);
}

} // namespace stainbench
