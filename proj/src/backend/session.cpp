#include "stainbench/backend/session.hpp"

#include "stainbench/error.hpp"
#include "stainbench/imaging/png_io.hpp"

#include <fmt/format.h>

namespace stainbench {

BackendSession BackendSession::spawn(const BackendCommand& command)
{
    auto process = Subprocess::spawn(command.argv);
    std::optional<std::string> line;
    try {
        line = process.read_line(command.handshake_timeout);
    } catch (const TimeoutError&) {
        throw TimeoutError(fmt::format("backend '{}' sent no handshake within {} ms", command.argv.front(),
                                       command.handshake_timeout.count()));
    }
    if (!line) {
        throw ProtocolError("backend '" + command.argv.front() + "' exited before sending a handshake");
    }
    auto handshake = decode_handshake(*line);
    return BackendSession(command, std::move(process), std::move(handshake));
}

void BackendSession::restart()
{
    *this = spawn(command_);
}

SegmentResponse BackendSession::request(const SegmentRequest& req)
{
    if (!healthy_) {
        throw ProtocolError("session with '" + handshake_.backend_name + "' is not healthy; restart it first");
    }
    if (!handshake_.supports(req.mode)) {
        throw InvalidArgument(fmt::format("backend '{}' does not support mode '{}'", handshake_.backend_name,
                                          wire_name(req.mode)));
    }
    if (is_prompted(req.mode) != req.prompt.has_value()) {
        throw InvalidArgument(fmt::format("mode '{}' {} a prompt", wire_name(req.mode),
                                          is_prompted(req.mode) ? "requires" : "does not take"));
    }

    const auto fail = [&](auto error) {
        healthy_ = false;
        throw error;
    };

    try {
        process_.write(encode_request(req) + "\n");
    } catch (const Error& e) {
        fail(ProtocolError(std::string("backend '") + handshake_.backend_name + "' is gone: " + e.what()));
    }

    std::optional<std::string> line;
    try {
        line = process_.read_line(command_.request_timeout);
    } catch (const TimeoutError&) {
        fail(TimeoutError(fmt::format("backend '{}' timed out after {} ms on '{}'", handshake_.backend_name,
                                      command_.request_timeout.count(), req.id)));
    }
    if (!line) {
        fail(ProtocolError(fmt::format("backend '{}' exited while handling '{}'", handshake_.backend_name, req.id)));
    }

    BackendReply reply;
    try {
        reply = decode_reply(*line);
    } catch (const ProtocolError& e) {
        fail(e);
    }

    if (auto* err = std::get_if<ErrorReply>(&reply)) {
        if (err->id && *err->id != req.id) {
            fail(ProtocolError(fmt::format("orphan error for id '{}' while awaiting '{}'", *err->id, req.id)));
        }
        throw BackendError(err->message);
    }
    auto& resp = std::get<SegmentResponse>(reply);
    if (resp.id != req.id) {
        fail(ProtocolError(fmt::format("orphan response id '{}' while awaiting '{}'", resp.id, req.id)));
    }
    if (!(resp.latency_s >= 0.0)) {
        fail(ProtocolError(fmt::format("negative latency {} for '{}'", resp.latency_s, req.id)));
    }
    try {
        validate_rle(resp.rle);
    } catch (const ValidationError& e) {
        // Request/reply pairing is intact, so the session remains usable.
        throw ProtocolError(fmt::format("reply for '{}': {}", req.id, e.what()));
    }
    return std::move(resp);
}

BinaryMask segment_one(BackendSession& session, const SegmentRequest& req, SegmentResponse* response)
{
    const auto info = read_png_info(req.image_path);
    auto resp = session.request(req);
    if (resp.rle.width != info.width || resp.rle.height != info.height) {
        throw ProtocolError(fmt::format("mask for '{}' is {}x{} but the image is {}x{}", req.id, resp.rle.width,
                                        resp.rle.height, info.width, info.height));
    }
    auto mask = rle_decode(resp.rle);
    if (response != nullptr) {
        *response = std::move(resp);
    }
    return mask;
}

} // namespace stainbench
