#pragma once

#include "stainbench/imaging/rle.hpp"
#include "stainbench/metrics/record.hpp"
#include "stainbench/prompting/prompt.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Newline-delimited JSON over the backend's stdin/stdout, one object per line:
//
//   backend -> harness (first line)
//     {"protocol_version":1,"backend_name":"classical","modes":["classical-threshold",...]}
//   harness -> backend
//     {"id":"box/a30-s000001","mode":"box","image_path":"/abs/a.png",
//      "prompt":{"type":"box","x0":0,"y0":0,"x1":96,"y1":96},"multimask":false,"params":{}}
//   backend -> harness, exactly one of
//     {"id":"...","width":96,"height":96,"rle":[...],"latency_s":0.012}
//     {"id":"...","error":"message"}
//
// Prompt objects: {"type":"auto","points_per_side":32},
// {"type":"point","x":48,"y":48,"label":1}, {"type":"box","x0":..,"y0":..,"x1":..,"y1":..}.
// A backend closes its session when stdin reaches end of file.

namespace stainbench {

inline constexpr int protocol_version = 1;

struct BackendHandshake {
    int protocol_version = stainbench::protocol_version;
    std::string backend_name;
    std::vector<Mode> modes;

    [[nodiscard]] bool supports(Mode mode) const noexcept;
};

struct SegmentRequest {
    std::string id;
    Mode mode = Mode::box;
    std::string image_path;
    std::optional<Prompt> prompt; ///< present iff the mode is prompted
    bool multimask = false;
    nlohmann::json params = nlohmann::json::object();
};

struct SegmentResponse {
    std::string id;
    RunLengthEncoding rle;
    double latency_s = 0.0;
    std::string note; ///< optional backend remark, e.g. a policy override
};

/// Error line from the backend. The id may be missing when the request could not be parsed.
struct ErrorReply {
    std::optional<std::string> id;
    std::string message;
};

using BackendReply = std::variant<SegmentResponse, ErrorReply>;

[[nodiscard]] nlohmann::json to_json(const Prompt& prompt);
[[nodiscard]] Prompt prompt_from_json(const nlohmann::json& j);

[[nodiscard]] std::string encode_handshake(const BackendHandshake& handshake);
[[nodiscard]] std::string encode_request(const SegmentRequest& request);
[[nodiscard]] std::string encode_response(const SegmentResponse& response);
[[nodiscard]] std::string encode_error(const std::optional<std::string>& id, std::string_view message);

/// Each decoder throws ProtocolError naming the offending bytes.
[[nodiscard]] BackendHandshake decode_handshake(std::string_view line);
[[nodiscard]] SegmentRequest decode_request(std::string_view line);
[[nodiscard]] BackendReply decode_reply(std::string_view line);

/// Offending input, shortened for error messages.
[[nodiscard]] std::string excerpt(std::string_view bytes, std::size_t limit = 80);

} // namespace stainbench
