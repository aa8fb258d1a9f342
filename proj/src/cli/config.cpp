#include "stainbench/cli/config.hpp"

#include "stainbench/error.hpp"

#include <fmt/format.h>
#include <toml.hpp>

#include <fstream>
#include <iterator>
#include <set>
#include <thread>

namespace fs = std::filesystem;

namespace stainbench {

int default_jobs() noexcept
{
    return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

void RunConfig::validate() const
{
    if (manifest.empty()) {
        throw InvalidArgument("no manifest given");
    }
    if (backends.empty()) {
        throw InvalidArgument("no backends given");
    }
    std::set<std::string> labels;
    for (const auto& b : backends) {
        if (b.label.empty()) {
            throw InvalidArgument("backend label must not be empty");
        }
        if (!labels.insert(b.label).second) {
            throw InvalidArgument("duplicate backend label '" + b.label + "'");
        }
        if (b.command.empty()) {
            throw InvalidArgument("backend '" + b.label + "' has no command");
        }
    }
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw InvalidArgument(fmt::format("tau must be in [0, 1], got {}", tau));
    }
    if (jobs < 1) {
        throw InvalidArgument(fmt::format("jobs must be >= 1, got {}", jobs));
    }
    if (points_per_side < 1) {
        throw InvalidArgument(fmt::format("points_per_side must be >= 1, got {}", points_per_side));
    }
    if (request_timeout.count() <= 0 || handshake_timeout.count() <= 0) {
        throw InvalidArgument("timeouts must be positive");
    }
}

std::vector<std::string> split_command_line(std::string_view text)
{
    std::vector<std::string> words;
    std::string current;
    bool in_word = false;
    char quote = 0;
    for (const char c : text) {
        if (quote != 0) {
            if (c == quote) {
                quote = 0;
            } else {
                current += c;
            }
        } else if (c == '"' || c == '\'') {
            quote = c;
            in_word = true;
        } else if (c == ' ' || c == '\t') {
            if (in_word) {
                words.push_back(std::move(current));
                current.clear();
                in_word = false;
            }
        } else {
            current += c;
            in_word = true;
        }
    }
    if (quote != 0) {
        throw InvalidArgument("unterminated quote in '" + std::string(text) + "'");
    }
    if (in_word) {
        words.push_back(std::move(current));
    }
    return words;
}

namespace {

std::vector<Mode> parse_modes(const std::vector<std::string>& names)
{
    std::vector<Mode> modes;
    for (const auto& name : names) {
        const auto mode = parse_mode(name);
        if (!mode) {
            throw InvalidArgument("unknown mode '" + name + "'");
        }
        modes.push_back(*mode);
    }
    return modes;
}

std::vector<std::string> split_list(std::string_view text, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find(sep, start);
        const auto piece = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (!piece.empty()) {
            out.emplace_back(piece);
        }
        if (end == std::string_view::npos) {
            break;
        }
        start = end + 1;
    }
    return out;
}

nlohmann::json to_json(const toml::node& node)
{
    if (const auto* t = node.as_table()) {
        auto obj = nlohmann::json::object();
        for (const auto& [k, v] : *t) {
            obj[std::string(k.str())] = to_json(v);
        }
        return obj;
    }
    if (const auto* a = node.as_array()) {
        auto arr = nlohmann::json::array();
        for (const auto& v : *a) {
            arr.push_back(to_json(v));
        }
        return arr;
    }
    if (const auto v = node.value<std::int64_t>(); v && node.is_integer()) {
        return *v;
    }
    if (const auto v = node.value<double>(); v && node.is_floating_point()) {
        return *v;
    }
    if (const auto v = node.value<bool>()) {
        return *v;
    }
    if (const auto v = node.value<std::string>()) {
        return *v;
    }
    throw InvalidArgument("unsupported TOML value in [params]");
}

std::vector<std::string> string_array(const toml::node_view<const toml::node>& view, const std::string& what)
{
    std::vector<std::string> out;
    if (const auto* arr = view.as_array()) {
        for (const auto& v : *arr) {
            const auto s = v.value<std::string>();
            if (!s) {
                throw InvalidArgument(what + " must contain strings");
            }
            out.push_back(*s);
        }
    } else if (const auto s = view.value<std::string>()) {
        out = split_command_line(*s);
    } else if (view) {
        throw InvalidArgument(what + " must be a string or an array of strings");
    }
    return out;
}

} // namespace

BackendSpec parse_backend_flag(std::string_view flag)
{
    const auto eq = flag.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw InvalidArgument("backend flag must look like label=command, got '" + std::string(flag) + "'");
    }
    BackendSpec spec;
    auto head = flag.substr(0, eq);
    if (const auto at = head.find('@'); at != std::string_view::npos) {
        spec.modes = parse_modes(split_list(head.substr(at + 1), ','));
        head = head.substr(0, at);
    }
    spec.label = std::string(head);
    spec.command = split_command_line(flag.substr(eq + 1));
    if (spec.label.empty() || spec.command.empty()) {
        throw InvalidArgument("backend flag needs a label and a command, got '" + std::string(flag) + "'");
    }
    return spec;
}

RunConfig parse_run_config(std::string_view toml_text, const fs::path& base_dir)
{
    toml::table tbl;
    try {
        tbl = toml::parse(toml_text);
    } catch (const toml::parse_error& e) {
        throw InvalidArgument(fmt::format("config parse error at line {}: {}", e.source().begin.line,
                                          e.description()));
    }
    const auto rel = [&](const std::string& p) { return fs::path(p).is_absolute() || base_dir.empty() ? fs::path(p) : base_dir / p; };

    RunConfig cfg;
    if (const auto v = tbl["manifest"].value<std::string>()) {
        cfg.manifest = rel(*v);
    }
    if (const auto v = tbl["out"].value<std::string>()) {
        cfg.out_dir = rel(*v);
    }
    if (const auto v = tbl["tau"].value<double>()) {
        cfg.tau = *v;
    }
    if (const auto v = tbl["points_per_side"].value<int>()) {
        cfg.points_per_side = *v;
    }
    if (const auto v = tbl["jobs"].value<int>()) {
        cfg.jobs = *v;
    }
    if (const auto v = tbl["seed"].value<std::int64_t>()) {
        cfg.seed = static_cast<std::uint64_t>(*v);
    }
    if (const auto v = tbl["timeout_s"].value<double>()) {
        cfg.request_timeout = std::chrono::milliseconds(static_cast<long long>(*v * 1000.0));
    }
    if (const auto v = tbl["handshake_timeout_s"].value<double>()) {
        cfg.handshake_timeout = std::chrono::milliseconds(static_cast<long long>(*v * 1000.0));
    }
    if (const auto* params = tbl["params"].as_table()) {
        cfg.params = to_json(*params);
    }
    if (const auto* arr = tbl["backend"].as_array()) {
        for (const auto& node : *arr) {
            const auto* t = node.as_table();
            if (t == nullptr) {
                throw InvalidArgument("[[backend]] entries must be tables");
            }
            const toml::node_view<const toml::node> view{t};
            BackendSpec spec;
            spec.label = view["label"].value_or(std::string());
            spec.command = string_array(view["command"], "backend command");
            spec.modes = parse_modes(string_array(view["modes"], "backend modes"));
            cfg.backends.push_back(std::move(spec));
        }
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config '" + path.string() + "'");
    }
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_run_config(text, fs::absolute(path).parent_path());
}

std::vector<std::string> resolve_command(const std::vector<std::string>& command, const fs::path& self_exe,
                                         const fs::path& manifest)
{
    if (command.empty()) {
        return command;
    }
    if (command.front() == "builtin:classical") {
        std::vector<std::string> argv{self_exe.string(), "serve-classical"};
        argv.insert(argv.end(), command.begin() + 1, command.end());
        return argv;
    }
    if (command.front() == "builtin:echo") {
        std::vector<std::string> argv{self_exe.string(), "serve-echo", "--manifest", fs::absolute(manifest).string()};
        argv.insert(argv.end(), command.begin() + 1, command.end());
        return argv;
    }
    return command;
}

} // namespace stainbench
