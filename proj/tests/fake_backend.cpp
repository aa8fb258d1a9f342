// Scriptable protocol peer for the session and harness tests. Faults are
// triggered by a substring of the request id.

#include "stainbench/backend/protocol.hpp"
#include "stainbench/imaging/png_io.hpp"
#include "stainbench/imaging/rle.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

using namespace stainbench;
namespace fs = std::filesystem;

namespace {

bool hits(const std::string& pattern, const std::string& id)
{
    return !pattern.empty() && id.find(pattern) != std::string::npos;
}

void emit(const std::string& line)
{
    std::cout << line << '\n' << std::flush;
}

// images/<name> -> masks/<name>, the write_dataset layout.
std::optional<BinaryMask> echo_mask(const fs::path& image)
{
    const auto mask = image.parent_path().parent_path() / "masks" / image.filename();
    if (!fs::exists(mask)) {
        return std::nullopt;
    }
    return read_mask_png(mask);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"fake segmentation backend"};
    std::string name = "fake";
    int version = protocol_version;
    std::vector<std::string> modes{"auto", "box", "point", "classical-threshold", "classical-threshold-median"};
    bool garbage_handshake = false;
    bool no_handshake = false;
    bool echo = false;
    double latency = 0.01;
    std::string fail_on, crash_on, hang_on, orphan_on, wrong_dims_on, garbage_on;
    app.add_option("--name", name);
    app.add_option("--version", version);
    app.add_option("--modes", modes)->delimiter(',');
    app.add_flag("--garbage-handshake", garbage_handshake);
    app.add_flag("--no-handshake", no_handshake);
    app.add_flag("--echo", echo);
    app.add_option("--latency", latency);
    app.add_option("--fail-on", fail_on);
    app.add_option("--crash-on", crash_on);
    app.add_option("--hang-on", hang_on);
    app.add_option("--orphan-on", orphan_on);
    app.add_option("--wrong-dims-on", wrong_dims_on);
    app.add_option("--garbage-on", garbage_on);
    CLI11_PARSE(app, argc, argv);

    if (no_handshake) {
        std::this_thread::sleep_for(std::chrono::hours(1));
        return 0;
    }
    if (garbage_handshake) {
        emit("HELLO I AM NOT JSON");
    } else {
        nlohmann::json hs{{"protocol_version", version}, {"backend_name", name}, {"modes", modes}};
        emit(hs.dump());
    }

    std::string line;
    while (std::getline(std::cin, line)) {
        SegmentRequest req;
        try {
            req = decode_request(line);
        } catch (const std::exception& e) {
            emit(encode_error(std::nullopt, e.what()));
            continue;
        }
        if (hits(crash_on, req.id)) {
            std::_Exit(3);
        }
        if (hits(hang_on, req.id)) {
            std::this_thread::sleep_for(std::chrono::hours(1));
        }
        if (hits(fail_on, req.id)) {
            emit(encode_error(req.id, "scripted failure"));
            continue;
        }
        if (hits(garbage_on, req.id)) {
            emit("{\"id\": broken");
            continue;
        }
        try {
            const auto info = read_png_info(req.image_path);
            std::optional<BinaryMask> mask;
            if (echo) {
                mask = echo_mask(req.image_path);
            }
            if (!mask) {
                mask = BinaryMask(info.width, info.height, true);
            }
            SegmentResponse resp{req.id, rle_encode(*mask), latency, {}};
            if (hits(orphan_on, req.id)) {
                resp.id = "orphan-" + req.id;
            }
            if (hits(wrong_dims_on, req.id)) {
                resp.rle = rle_encode(BinaryMask(info.width + 1, info.height));
            }
            emit(encode_response(resp));
        } catch (const std::exception& e) {
            emit(encode_error(req.id, e.what()));
        }
    }
    return 0;
}
