#include "stainbench/backend/batch.hpp"
#include "stainbench/backend/protocol.hpp"
#include "stainbench/backend/server.hpp"
#include "stainbench/backend/session.hpp"
#include "stainbench/dataset/manifest.hpp"
#include "stainbench/dataset/synthetic.hpp"
#include "stainbench/error.hpp"
#include "stainbench/imaging/png_io.hpp"
#include "stainbench/metrics/metrics.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <sstream>

using namespace stainbench;
using namespace stainbench::testing;
using namespace std::chrono_literals;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

BackendCommand fake(std::vector<std::string> args = {})
{
    BackendCommand cmd;
    cmd.argv = {FAKE_BACKEND_EXE};
    cmd.argv.insert(cmd.argv.end(), args.begin(), args.end());
    cmd.handshake_timeout = 5s;
    cmd.request_timeout = 5s;
    return cmd;
}

BackendCommand classical()
{
    return {{STAINBENCH_EXE, "serve-classical"}, 10s, 10s};
}

// Ten white-background droplets on disk, one per seed, angle 90.
struct SmallDataset {
    fs::path dir = scratch_dir("backend-ds");
    std::vector<ManifestEntry> entries;
    fs::path manifest;

    SmallDataset()
    {
        const int angles[] = {90};
        manifest = write_dataset(synthetic_grid(angles, 10, SyntheticSpec{}, 0), dir);
        entries = load_manifest(manifest);
    }
    ~SmallDataset() { fs::remove_all(dir); }
};

std::vector<std::optional<Prompt>> box_prompts(const std::vector<ManifestEntry>& entries)
{
    std::vector<std::optional<Prompt>> out;
    for (const auto& e : entries) {
        const auto info = read_png_info(e.image_path);
        out.push_back(fixed_prompt(Mode::box, info.width, info.height, default_points_per_side));
    }
    return out;
}

} // namespace

TEST_CASE("prompt json round trip")
{
    for (const Prompt p : {Prompt{AutoGridPrompt{16}}, Prompt{PointPrompt{3, 4, 1}}, Prompt{BoxPrompt{0, 1, 9, 8}}}) {
        CHECK(prompt_from_json(to_json(p)) == p);
    }
    CHECK(to_json(Prompt{BoxPrompt{0, 0, 96, 96}}) ==
          json{{"type", "box"}, {"x0", 0}, {"y0", 0}, {"x1", 96}, {"y1", 96}});
    CHECK_THROWS_AS((void)prompt_from_json(json{{"type", "lasso"}}), ProtocolError);
    CHECK_THROWS_AS((void)prompt_from_json(json::array()), ProtocolError);
}

TEST_CASE("handshake codec")
{
    const BackendHandshake hs{1, "x", {Mode::box, Mode::threshold}};
    const auto decoded = decode_handshake(encode_handshake(hs));
    CHECK(decoded.backend_name == "x");
    CHECK(decoded.modes == hs.modes);
    CHECK(decoded.supports(Mode::threshold));
    CHECK_FALSE(decoded.supports(Mode::point));
    CHECK(json::parse(encode_handshake(hs))["modes"] == json{"box", "classical-threshold"});

    const auto message = [](std::string_view line) -> std::string {
        try {
            (void)decode_handshake(line);
        } catch (const ProtocolError& e) {
            return e.what();
        }
        return {};
    };
    CHECK(message(R"({"protocol_version":2,"backend_name":"x","modes":["box"]})").find("version") !=
          std::string::npos);
    CHECK(message(R"({"protocol_version":1,"backend_name":"x","modes":[]})").find("no modes") != std::string::npos);
    CHECK(message(R"({"protocol_version":1,"backend_name":"x","modes":["lasso"]})").find("lasso") !=
          std::string::npos);
    CHECK(message("Traceback (most recent call last)").find("Traceback") != std::string::npos);
    CHECK(message(R"({"backend_name":"x","modes":["box"]})").find("protocol_version") != std::string::npos);
}

TEST_CASE("request and reply codec")
{
    SegmentRequest req{"box/a", Mode::box, "/tmp/a.png", Prompt{BoxPrompt{0, 0, 4, 4}}, false, json{{"k", 1}}};
    const auto back = decode_request(encode_request(req));
    CHECK(back.id == req.id);
    CHECK(back.mode == Mode::box);
    CHECK(back.image_path == req.image_path);
    CHECK(back.prompt == req.prompt);
    CHECK(back.params == req.params);

    SegmentRequest cls{"threshold/a", Mode::threshold, "/tmp/a.png", std::nullopt, false, json::object()};
    const auto wire = json::parse(encode_request(cls));
    CHECK(wire["mode"] == "classical-threshold");
    CHECK(decode_request(encode_request(cls)).prompt == std::nullopt);

    const SegmentResponse resp{"box/a", {2, 2, {0, 1, 2, 1}}, 0.25, "note"};
    const auto reply = decode_reply(encode_response(resp));
    REQUIRE(std::holds_alternative<SegmentResponse>(reply));
    const auto& r = std::get<SegmentResponse>(reply);
    CHECK(r.id == "box/a");
    CHECK(r.rle.runs == resp.rle.runs);
    CHECK(r.latency_s == 0.25);
    CHECK(r.note == "note");

    const auto err = decode_reply(encode_error(std::nullopt, "bad"));
    REQUIRE(std::holds_alternative<ErrorReply>(err));
    CHECK_FALSE(std::get<ErrorReply>(err).id.has_value());
    CHECK(std::get<ErrorReply>(err).message == "bad");

    CHECK_THROWS_AS((void)decode_reply("[1,2]"), ProtocolError);
    CHECK_THROWS_AS((void)decode_reply(R"({"id":"x","width":2})"), ProtocolError);
    CHECK_THROWS_AS((void)decode_request(R"({"id":"x","mode":"lasso","image_path":"a"})"), ProtocolError);
    CHECK(excerpt(std::string(500, 'z')).size() < 100);
}

TEST_CASE("serve_backend loop")
{
    const BackendHandshake hs{1, "test", {Mode::box}};
    int calls = 0;
    const RequestHandler handler = [&](const SegmentRequest& req) {
        ++calls;
        if (req.image_path == "boom") {
            throw IoError("cannot read boom");
        }
        return SegmentResponse{"ignored", {1, 1, {0, 1}}, 0.5, {}};
    };
    SegmentRequest ok{"box/1", Mode::box, "img", Prompt{BoxPrompt{0, 0, 1, 1}}, false, json::object()};
    SegmentRequest bad = ok;
    bad.id = "box/2";
    bad.image_path = "boom";
    SegmentRequest unsupported{"point/3", Mode::point, "img", Prompt{PointPrompt{0, 0, 1}}, false, json::object()};

    std::istringstream in(encode_request(ok) + "\n\nnot json\n" + encode_request(bad) + "\n" +
                          encode_request(unsupported) + "\n" + R"({"id":"salvaged","mode":"lasso"})" + "\n");
    std::ostringstream out;
    CHECK(serve_backend(in, out, hs, handler) == 0);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 6);
    CHECK(decode_handshake(lines[0]).backend_name == "test");

    const auto r1 = decode_reply(lines[1]);
    REQUIRE(std::holds_alternative<SegmentResponse>(r1));
    CHECK(std::get<SegmentResponse>(r1).id == "box/1");

    const auto r2 = std::get<ErrorReply>(decode_reply(lines[2]));
    CHECK_FALSE(r2.id.has_value());
    const auto r3 = std::get<ErrorReply>(decode_reply(lines[3]));
    CHECK(r3.id == "box/2");
    CHECK(r3.message.find("boom") != std::string::npos);
    const auto r4 = std::get<ErrorReply>(decode_reply(lines[4]));
    CHECK(r4.id == "point/3");
    CHECK(r4.message.find("unsupported mode") != std::string::npos);
    CHECK(std::get<ErrorReply>(decode_reply(lines[5])).id == "salvaged");
    CHECK(calls == 2);
}

TEST_CASE("classical pipelines")
{
    double thres = 0.0;
    for (std::uint64_t seed = 0; seed < 9; ++seed) {
        const auto d = generate_droplet(SyntheticSpec{.angle_deg = 10 * static_cast<int>(seed + 1), .rng_seed = seed});
        const auto m = classical_segment(d.image, Mode::threshold, {});
        thres += iou(m, d.mask);
        CHECK(iou(classical_segment(d.image, Mode::threshold_median, {}), d.mask) >= 0.85);
    }
    CHECK(thres / 9 >= 0.95);

    const auto d = generate_droplet(SyntheticSpec{});
    CHECK(classical_segment(d.image, Mode::threshold, {.threshold = 254}) == d.mask);
    CHECK(classical_segment(d.image, Mode::threshold, {.threshold = 0}).area() == 0);
    CHECK_THROWS_AS((void)classical_segment(d.image, Mode::box, {}), InvalidArgument);

    const auto p = ClassicalParams::from_json(
        json{{"threshold", 100}, {"median_radius", 2}, {"polarity", "bright-foreground"}, {"connectivity", 4}});
    CHECK(p.threshold == 100);
    CHECK(p.median_radius == 2);
    CHECK(p.polarity == Polarity::bright_foreground);
    CHECK(p.connectivity == Connectivity::four);
    CHECK_FALSE(ClassicalParams::from_json(json::object()).threshold.has_value());
    CHECK_THROWS_AS((void)ClassicalParams::from_json(json{{"threshold", 300}}), InvalidArgument);
    CHECK_THROWS_AS((void)ClassicalParams::from_json(json{{"connectivity", 6}}), InvalidArgument);
}

TEST_CASE("classical backend over the protocol")
{
    SmallDataset ds;
    const auto& entry = ds.entries.front();
    SegmentRequest req{"threshold/x", Mode::threshold, entry.image_path.string(), std::nullopt, false,
                       json::object()};

    SUBCASE("in-process determinism apart from latency")
    {
        const auto once = [&] {
            std::istringstream in(encode_request(req) + "\n" + encode_request(req) + "\n");
            std::ostringstream out;
            classical_backend_main(in, out);
            auto lines = lines_of(out.str());
            std::vector<json> replies;
            for (std::size_t i = 1; i < lines.size(); ++i) {
                auto j = json::parse(lines[i]);
                j.erase("latency_s");
                replies.push_back(j);
            }
            return replies;
        };
        const auto a = once();
        REQUIRE(a.size() == 2);
        CHECK(a[0] == a[1]);
        CHECK(a == once());
    }
    SUBCASE("auto mode is answered with an error line")
    {
        SegmentRequest automode{"auto/x", Mode::auto_grid, entry.image_path.string(), Prompt{AutoGridPrompt{4}},
                                false, json::object()};
        std::istringstream in(encode_request(automode) + "\n");
        std::ostringstream out;
        classical_backend_main(in, out);
        const auto lines = lines_of(out.str());
        REQUIRE(lines.size() == 2);
        const auto err = std::get<ErrorReply>(decode_reply(lines[1]));
        CHECK(err.id == "auto/x");
        CHECK(err.message.find("unsupported") != std::string::npos);
    }
    SUBCASE("child process session")
    {
        auto session = spawn_backend(classical());
        CHECK(session.handshake().supports(Mode::threshold));
        CHECK(session.handshake().supports(Mode::threshold_median));
        CHECK_FALSE(session.handshake().supports(Mode::box));

        const auto mask = segment_one(session, req);
        CHECK(iou(mask, read_mask_png(*entry.mask_path)) >= 0.85);

        SegmentRequest automode{"auto/x", Mode::auto_grid, entry.image_path.string(), Prompt{AutoGridPrompt{4}},
                                false, json::object()};
        CHECK_THROWS_AS((void)session.request(automode), InvalidArgument);
        auto with_prompt = req;
        with_prompt.prompt = full_image_box(96, 96);
        CHECK_THROWS_AS((void)session.request(with_prompt), InvalidArgument);
        CHECK(session.healthy());

        auto missing = req;
        missing.image_path = (ds.dir / "nope.png").string();
        missing.id = "threshold/missing";
        CHECK_THROWS_AS((void)session.request(missing), BackendError);
        CHECK(session.healthy());
        CHECK(segment_one(session, req) == mask);
    }
}

TEST_CASE("echo oracle backend")
{
    SmallDataset ds;
    auto session = spawn_backend({{STAINBENCH_EXE, "serve-echo", "--manifest", ds.manifest.string()}, 10s, 10s});
    CHECK(session.handshake().backend_name == "echo-oracle");
    for (const auto mode : {Mode::auto_grid, Mode::box, Mode::point, Mode::threshold, Mode::threshold_median}) {
        CHECK(session.handshake().supports(mode));
    }
    const auto prompts = box_prompts(ds.entries);
    const auto records = run_batch(session, ds.entries, prompts, {.mode = Mode::box, .model = "echo"});
    REQUIRE(records.size() == 10);
    for (const auto& r : records) {
        CHECK(r.error.empty());
        CHECK(r.iou == 1.0);
        CHECK(r.passed);
    }
}

TEST_CASE("spawn failures")
{
    CHECK_THROWS_AS((void)spawn_backend(fake({"--version", "2"})), ProtocolError);
    try {
        (void)spawn_backend(fake({"--garbage-handshake"}));
        FAIL("expected ProtocolError");
    } catch (const ProtocolError& e) {
        CHECK(std::string(e.what()).find("HELLO I AM NOT JSON") != std::string::npos);
    }
    auto silent = fake({"--no-handshake"});
    silent.handshake_timeout = 300ms;
    CHECK_THROWS_AS((void)spawn_backend(silent), TimeoutError);
    CHECK_THROWS_AS((void)spawn_backend({{"/nonexistent/backend"}, 1s, 1s}), Error);
    CHECK_THROWS_AS((void)spawn_backend({{"/bin/true"}, 1s, 1s}), ProtocolError);
}

TEST_CASE("fault isolation in run_batch")
{
    SmallDataset ds;
    const auto prompts = box_prompts(ds.entries);
    const BatchOptions options{.mode = Mode::box, .model = "fake"};
    const std::string victim = ds.entries[3].image_id;

    auto clean_session = spawn_backend(fake({"--echo"}));
    const auto clean = run_batch(clean_session, ds.entries, prompts, options);
    REQUIRE(clean.size() == 10);
    for (const auto& r : clean) {
        REQUIRE(r.error.empty());
        REQUIRE(r.iou == 1.0);
    }

    for (const std::string fault : {"--fail-on", "--crash-on", "--hang-on", "--orphan-on", "--wrong-dims-on",
                                    "--garbage-on"}) {
        CAPTURE(fault);
        auto cmd = fake({"--echo", fault, victim});
        cmd.request_timeout = 500ms;
        auto session = spawn_backend(cmd);
        const auto records = run_batch(session, ds.entries, prompts, options);
        REQUIRE(records.size() == 10);
        for (std::size_t i = 0; i < records.size(); ++i) {
            CHECK(records[i].image_id == ds.entries[i].image_id);
            if (i == 3) {
                CHECK_FALSE(records[i].error.empty());
                CHECK_FALSE(records[i].passed);
                CHECK(records[i].iou == 0.0);
            } else {
                CHECK(records[i].error.empty());
                CHECK(records[i].iou == clean[i].iou);
                CHECK(records[i].passed == clean[i].passed);
            }
        }
    }
}

TEST_CASE("session discipline")
{
    SmallDataset ds;
    const auto& entry = ds.entries.front();
    SegmentRequest req{"box/" + entry.image_id, Mode::box, entry.image_path.string(), full_image_box(96, 96), false,
                       json::object()};

    auto cmd = fake({"--orphan-on", "box/"});
    auto session = spawn_backend(cmd);
    CHECK_THROWS_AS((void)session.request(req), ProtocolError);
    CHECK_FALSE(session.healthy());
    CHECK_THROWS_AS((void)session.request(req), ProtocolError);

    auto limited = spawn_backend(fake({"--modes", "point"}));
    CHECK_THROWS_AS((void)limited.request(req), InvalidArgument);
    CHECK(limited.healthy());

    auto crashing = spawn_backend(fake({"--crash-on", "box/"}));
    CHECK_THROWS_AS((void)crashing.request(req), ProtocolError);
    CHECK_FALSE(crashing.healthy());
    crashing.restart();
    CHECK(crashing.healthy());
    auto other = req;
    other.id = "point-like";
    other.mode = Mode::point;
    other.prompt = center_point(96, 96);
    CHECK_NOTHROW((void)segment_one(crashing, other));
}

TEST_CASE("parallel sessions keep manifest order")
{
    SmallDataset ds;
    const auto prompts = box_prompts(ds.entries);
    const BatchOptions options{.mode = Mode::threshold, .model = "classical"};
    std::vector<std::optional<Prompt>> none;

    auto solo = spawn_backend(classical());
    const auto serial = run_batch(solo, ds.entries, none, options);

    std::vector<BackendSession> pool;
    for (int i = 0; i < 3; ++i) {
        pool.push_back(spawn_backend(classical()));
    }
    std::vector<BackendSession*> ptrs;
    for (auto& s : pool) {
        ptrs.push_back(&s);
    }
    const auto parallel = run_batch(ptrs, ds.entries, none, options);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(parallel[i].image_id == ds.entries[i].image_id);
        CHECK(parallel[i].iou == serial[i].iou);
        CHECK(parallel[i].passed == serial[i].passed);
    }
    CHECK(run_batch(solo, std::span<const ManifestEntry>{}, none, options).empty());
    CHECK_THROWS_AS((void)run_batch(solo, ds.entries, std::span(prompts).first(2), options), InvalidArgument);
}

TEST_CASE("fixed prompts and request ids")
{
    CHECK(fixed_prompt(Mode::box, 230, 700, 32) == Prompt{BoxPrompt{0, 0, 230, 700}});
    CHECK(fixed_prompt(Mode::point, 230, 700, 32) == Prompt{PointPrompt{115, 350, 1}});
    CHECK(fixed_prompt(Mode::auto_grid, 230, 700, 16) == Prompt{AutoGridPrompt{16}});
    CHECK_FALSE(fixed_prompt(Mode::threshold_median, 230, 700, 32).has_value());
    ManifestEntry e;
    e.image_id = "a30-s000001";
    CHECK(request_id(Mode::threshold_median, e) == "threshold+median/a30-s000001");
}
