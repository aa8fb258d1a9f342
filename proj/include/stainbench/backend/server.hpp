#pragma once

#include "stainbench/backend/protocol.hpp"
#include "stainbench/imaging/components.hpp"
#include "stainbench/imaging/threshold.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>

namespace stainbench {

using RequestHandler = std::function<SegmentResponse(const SegmentRequest&)>;

/// Backend side of the protocol: writes the handshake, then answers one line
/// per request until `in` ends. Handler exceptions and malformed or
/// unsupported requests become error lines; the loop never exits on bad input.
/// Output is flushed after every line.
int serve_backend(std::istream& in, std::ostream& out, const BackendHandshake& handshake,
                  const RequestHandler& handler);

/// Options of the thresholding pipelines, read from request params
/// ("threshold", "median_radius", "polarity", "connectivity").
struct ClassicalParams {
    std::optional<int> threshold; ///< fixed cutoff; Otsu when absent
    int median_radius = 1;
    Polarity polarity = Polarity::dark_foreground;
    Connectivity connectivity = Connectivity::eight;

    [[nodiscard]] static ClassicalParams from_json(const nlohmann::json& params);
};

/// classical-threshold: gray -> Otsu (or fixed t) -> largest component.
/// classical-threshold-median: gray -> median filter -> Otsu -> largest component.
[[nodiscard]] BinaryMask classical_segment(const ImageBuffer& image, Mode mode, const ClassicalParams& params);

[[nodiscard]] BackendHandshake classical_handshake();

/// Reads the image, runs classical_segment and times it.
[[nodiscard]] SegmentResponse classical_handle(const SegmentRequest& request);

int classical_backend_main(std::istream& in, std::ostream& out);

/// Test backend answering every mode with the ground-truth mask listed for
/// the request's image in a manifest.
class EchoOracle {
public:
    explicit EchoOracle(const std::filesystem::path& manifest);
    [[nodiscard]] SegmentResponse handle(const SegmentRequest& request) const;

private:
    std::map<std::filesystem::path, std::filesystem::path> masks_;
};

[[nodiscard]] BackendHandshake echo_handshake();

int echo_backend_main(const std::filesystem::path& manifest, std::istream& in, std::ostream& out);

} // namespace stainbench
