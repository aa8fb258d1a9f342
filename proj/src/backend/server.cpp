#include "stainbench/backend/server.hpp"

#include "stainbench/dataset/manifest.hpp"
#include "stainbench/error.hpp"
#include "stainbench/imaging/color.hpp"
#include "stainbench/imaging/median.hpp"
#include "stainbench/imaging/png_io.hpp"

#include <fmt/format.h>

#include <chrono>
#include <istream>
#include <ostream>

using nlohmann::json;

namespace stainbench {

namespace {

void emit(std::ostream& out, const std::string& line)
{
    out << line << '\n';
    out.flush();
}

// Best-effort id recovery from a request line that failed to decode.
std::optional<std::string> salvage_id(const std::string& line)
{
    try {
        const auto j = json::parse(line);
        if (j.is_object()) {
            if (const auto it = j.find("id"); it != j.end() && it->is_string()) {
                return it->get<std::string>();
            }
        }
    } catch (const json::exception&) {
    }
    return std::nullopt;
}

} // namespace

int serve_backend(std::istream& in, std::ostream& out, const BackendHandshake& handshake,
                  const RequestHandler& handler)
{
    emit(out, encode_handshake(handshake));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::optional<std::string> id;
        try {
            const auto req = decode_request(line);
            id = req.id;
            if (!handshake.supports(req.mode)) {
                throw InvalidArgument(fmt::format("unsupported mode '{}'", wire_name(req.mode)));
            }
            auto resp = handler(req);
            resp.id = req.id;
            emit(out, encode_response(resp));
        } catch (const std::exception& e) {
            emit(out, encode_error(id ? id : salvage_id(line), e.what()));
        }
    }
    return 0;
}

ClassicalParams ClassicalParams::from_json(const json& params)
{
    ClassicalParams p;
    try {
        if (const auto it = params.find("threshold"); it != params.end() && !it->is_null()) {
            const int t = it->get<int>();
            if (t < 0 || t > 255) {
                throw InvalidArgument(fmt::format("threshold {} outside [0, 255]", t));
            }
            p.threshold = t;
        }
        if (const auto it = params.find("median_radius"); it != params.end()) {
            p.median_radius = it->get<int>();
            if (p.median_radius < 1) {
                throw InvalidArgument(fmt::format("median_radius must be >= 1, got {}", p.median_radius));
            }
        }
        if (const auto it = params.find("polarity"); it != params.end()) {
            p.polarity = parse_polarity(it->get<std::string>());
        }
        if (const auto it = params.find("connectivity"); it != params.end()) {
            const int c = it->get<int>();
            if (c != 4 && c != 8) {
                throw InvalidArgument(fmt::format("connectivity must be 4 or 8, got {}", c));
            }
            p.connectivity = c == 4 ? Connectivity::four : Connectivity::eight;
        }
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("bad classical params: ") + e.what());
    }
    return p;
}

BinaryMask classical_segment(const ImageBuffer& image, Mode mode, const ClassicalParams& params)
{
    if (mode != Mode::threshold && mode != Mode::threshold_median) {
        throw InvalidArgument(fmt::format("classical pipeline cannot serve mode '{}'", wire_name(mode)));
    }
    auto gray = as_grayscale(image);
    if (mode == Mode::threshold_median) {
        gray = median_filter(gray, params.median_radius);
    }
    const auto t = params.threshold ? static_cast<std::uint8_t>(*params.threshold) : otsu_threshold(gray);
    return largest_component(global_threshold(gray, t, params.polarity), params.connectivity);
}

BackendHandshake classical_handshake()
{
    return {protocol_version, "classical", {Mode::threshold, Mode::threshold_median}};
}

SegmentResponse classical_handle(const SegmentRequest& request)
{
    const auto params = ClassicalParams::from_json(request.params);
    const auto image = read_png(request.image_path);
    const auto started = std::chrono::steady_clock::now();
    const auto mask = classical_segment(image, request.mode, params);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return {request.id, rle_encode(mask), elapsed, {}};
}

int classical_backend_main(std::istream& in, std::ostream& out)
{
    return serve_backend(in, out, classical_handshake(), classical_handle);
}

EchoOracle::EchoOracle(const std::filesystem::path& manifest)
{
    for (const auto& entry : load_manifest(manifest, {.check_files = false})) {
        if (entry.mask_path) {
            masks_.emplace(entry.image_path, *entry.mask_path);
        }
    }
}

SegmentResponse EchoOracle::handle(const SegmentRequest& request) const
{
    const auto it = masks_.find(std::filesystem::absolute(request.image_path).lexically_normal());
    if (it == masks_.end()) {
        throw InvalidArgument("no ground truth listed for '" + request.image_path + "'");
    }
    const auto started = std::chrono::steady_clock::now();
    const auto mask = read_mask_png(it->second);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return {request.id, rle_encode(mask), elapsed, {}};
}

BackendHandshake echo_handshake()
{
    return {protocol_version,
            "echo-oracle",
            {Mode::auto_grid, Mode::box, Mode::point, Mode::threshold, Mode::threshold_median}};
}

int echo_backend_main(const std::filesystem::path& manifest, std::istream& in, std::ostream& out)
{
    const EchoOracle oracle(manifest);
    return serve_backend(in, out, echo_handshake(), [&](const SegmentRequest& r) { return oracle.handle(r); });
}

} // namespace stainbench
