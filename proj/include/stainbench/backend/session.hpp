#pragma once

#include "stainbench/backend/protocol.hpp"
#include "stainbench/backend/subprocess.hpp"

#include <chrono>
#include <string>
#include <vector>

namespace stainbench {

/// How to start a backend and how long to wait for it.
struct BackendCommand {
    std::vector<std::string> argv;
    std::chrono::milliseconds handshake_timeout{30'000};
    std::chrono::milliseconds request_timeout{120'000};
};

/// One lock-step conversation with a backend process: at most one request in
/// flight. Single-owner; run several sessions for parallelism.
class BackendSession {
public:
    /// Starts the process and validates its handshake line.
    /// Throws Error (spawn), TimeoutError (no handshake) or ProtocolError.
    static BackendSession spawn(const BackendCommand& command);

    [[nodiscard]] const BackendHandshake& handshake() const noexcept { return handshake_; }
    [[nodiscard]] const BackendCommand& command() const noexcept { return command_; }

    /// False after a timeout, a protocol violation or backend exit; the
    /// session must be restarted before further use.
    [[nodiscard]] bool healthy() const noexcept { return healthy_; }

    /// Replaces the process with a fresh one speaking the same command.
    void restart();

    /// Sends one request and waits for its reply.
    ///
    /// Rejected locally with InvalidArgument, before anything is sent, when the
    /// mode is not advertised or the prompt presence does not match the mode.
    /// An error line raises BackendError (the session stays healthy). Timeouts,
    /// orphan ids, malformed replies or backend exit raise TimeoutError /
    /// ProtocolError and mark the session unhealthy.
    SegmentResponse request(const SegmentRequest& req);

    ~BackendSession() = default;
    BackendSession(BackendSession&&) noexcept = default;
    BackendSession& operator=(BackendSession&&) noexcept = default;

private:
    BackendSession(BackendCommand command, Subprocess process, BackendHandshake handshake)
        : command_(std::move(command)), process_(std::move(process)), handshake_(std::move(handshake))
    {
    }

    BackendCommand command_;
    Subprocess process_;
    BackendHandshake handshake_;
    bool healthy_ = true;
};

inline BackendSession spawn_backend(const BackendCommand& command) { return BackendSession::spawn(command); }

/// Request plus shape check: the decoded mask must match the image on disk.
/// Throws ProtocolError on a dimension mismatch.
[[nodiscard]] BinaryMask segment_one(BackendSession& session, const SegmentRequest& req,
                                     SegmentResponse* response = nullptr);

} // namespace stainbench
