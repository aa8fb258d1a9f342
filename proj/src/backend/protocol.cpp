#include "stainbench/backend/protocol.hpp"

#include "stainbench/error.hpp"

#include <algorithm>

using nlohmann::json;

namespace stainbench {

namespace {

json parse_line(std::string_view line, std::string_view what)
{
    try {
        auto j = json::parse(line.begin(), line.end());
        if (!j.is_object()) {
            throw ProtocolError(std::string(what) + " is not a JSON object: " + excerpt(line));
        }
        return j;
    } catch (const json::parse_error&) {
        throw ProtocolError(std::string(what) + " is not valid JSON: " + excerpt(line));
    }
}

template <typename T>
T field(const json& j, const char* key, std::string_view line)
{
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ProtocolError(std::string("missing field '") + key + "' in " + excerpt(line));
    }
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ProtocolError(std::string("field '") + key + "' has the wrong type in " + excerpt(line));
    }
}

Mode mode_field(const json& j, std::string_view line)
{
    const auto name = field<std::string>(j, "mode", line);
    const auto mode = parse_mode(name);
    if (!mode) {
        throw ProtocolError("unknown mode '" + name + "'");
    }
    return *mode;
}

} // namespace

std::string excerpt(std::string_view bytes, std::size_t limit)
{
    std::string out = "'";
    for (const char c : bytes.substr(0, limit)) {
        const auto u = static_cast<unsigned char>(c);
        if (u < 0x20 || u == 0x7f) {
            static constexpr char hex[] = "0123456789abcdef";
            out += "\\x";
            out += hex[u >> 4];
            out += hex[u & 0xf];
        } else {
            out += c;
        }
    }
    out += bytes.size() > limit ? "'..." : "'";
    return out;
}

bool BackendHandshake::supports(Mode mode) const noexcept
{
    return std::find(modes.begin(), modes.end(), mode) != modes.end();
}

json to_json(const Prompt& prompt)
{
    struct Visitor {
        json operator()(const AutoGridPrompt& g) const { return {{"type", "auto"}, {"points_per_side", g.points_per_side}}; }
        json operator()(const PointPrompt& p) const { return {{"type", "point"}, {"x", p.x}, {"y", p.y}, {"label", p.label}}; }
        json operator()(const BoxPrompt& b) const
        {
            return {{"type", "box"}, {"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}};
        }
    };
    return std::visit(Visitor{}, prompt);
}

Prompt prompt_from_json(const json& j)
{
    const auto text = j.dump();
    if (!j.is_object()) {
        throw ProtocolError("prompt is not an object: " + excerpt(text));
    }
    const auto type = field<std::string>(j, "type", text);
    if (type == "auto") {
        return AutoGridPrompt{field<int>(j, "points_per_side", text)};
    }
    if (type == "point") {
        return PointPrompt{field<int>(j, "x", text), field<int>(j, "y", text), j.value("label", 1)};
    }
    if (type == "box") {
        return BoxPrompt{field<int>(j, "x0", text), field<int>(j, "y0", text), field<int>(j, "x1", text),
                         field<int>(j, "y1", text)};
    }
    throw ProtocolError("unknown prompt type '" + type + "'");
}

std::string encode_handshake(const BackendHandshake& handshake)
{
    json modes = json::array();
    for (const auto m : handshake.modes) {
        modes.push_back(std::string(wire_name(m)));
    }
    return json{{"protocol_version", handshake.protocol_version},
                {"backend_name", handshake.backend_name},
                {"modes", modes}}
        .dump();
}

std::string encode_request(const SegmentRequest& request)
{
    json j{{"id", request.id},
           {"mode", std::string(wire_name(request.mode))},
           {"image_path", request.image_path},
           {"multimask", request.multimask},
           {"params", request.params}};
    if (request.prompt) {
        j["prompt"] = to_json(*request.prompt);
    }
    return j.dump();
}

std::string encode_response(const SegmentResponse& response)
{
    json j{{"id", response.id},
           {"width", response.rle.width},
           {"height", response.rle.height},
           {"rle", response.rle.runs},
           {"latency_s", response.latency_s}};
    if (!response.note.empty()) {
        j["note"] = response.note;
    }
    return j.dump();
}

std::string encode_error(const std::optional<std::string>& id, std::string_view message)
{
    return json{{"id", id ? json(*id) : json(nullptr)}, {"error", std::string(message)}}.dump();
}

BackendHandshake decode_handshake(std::string_view line)
{
    const auto j = parse_line(line, "handshake");
    BackendHandshake hs;
    hs.protocol_version = field<int>(j, "protocol_version", line);
    if (hs.protocol_version != protocol_version) {
        throw ProtocolError("protocol version mismatch: backend speaks " + std::to_string(hs.protocol_version) +
                            ", harness speaks " + std::to_string(protocol_version));
    }
    hs.backend_name = field<std::string>(j, "backend_name", line);
    for (const auto& name : field<std::vector<std::string>>(j, "modes", line)) {
        const auto mode = parse_mode(name);
        if (!mode) {
            throw ProtocolError("handshake advertises unknown mode '" + name + "'");
        }
        if (!hs.supports(*mode)) {
            hs.modes.push_back(*mode);
        }
    }
    if (hs.modes.empty()) {
        throw ProtocolError("handshake advertises no modes: " + excerpt(line));
    }
    return hs;
}

SegmentRequest decode_request(std::string_view line)
{
    const auto j = parse_line(line, "request");
    SegmentRequest req;
    req.id = field<std::string>(j, "id", line);
    req.mode = mode_field(j, line);
    req.image_path = field<std::string>(j, "image_path", line);
    req.multimask = j.value("multimask", false);
    if (const auto it = j.find("params"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) {
            throw ProtocolError("params must be an object in " + excerpt(line));
        }
        req.params = *it;
    }
    if (const auto it = j.find("prompt"); it != j.end() && !it->is_null()) {
        req.prompt = prompt_from_json(*it);
    }
    return req;
}

BackendReply decode_reply(std::string_view line)
{
    const auto j = parse_line(line, "backend reply");
    std::optional<std::string> id;
    if (const auto it = j.find("id"); it != j.end() && it->is_string()) {
        id = it->get<std::string>();
    }
    if (const auto it = j.find("error"); it != j.end()) {
        return ErrorReply{id, it->is_string() ? it->get<std::string>() : it->dump()};
    }
    if (!id) {
        throw ProtocolError("reply without a string id: " + excerpt(line));
    }
    SegmentResponse resp;
    resp.id = *id;
    resp.rle.width = field<int>(j, "width", line);
    resp.rle.height = field<int>(j, "height", line);
    resp.rle.runs = field<std::vector<std::int64_t>>(j, "rle", line);
    resp.latency_s = field<double>(j, "latency_s", line);
    resp.note = j.value("note", std::string());
    return resp;
}

} // namespace stainbench
