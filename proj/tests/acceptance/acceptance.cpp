// Acceptance gate: one PASS/FAIL line per headline criterion, nonzero exit if
// any fails.

#include "stainbench/backend/batch.hpp"
#include "stainbench/backend/session.hpp"
#include "stainbench/cli/commands.hpp"
#include "stainbench/dataset/synthetic.hpp"
#include "stainbench/error.hpp"
#include "stainbench/imaging/components.hpp"
#include "stainbench/imaging/median.hpp"
#include "stainbench/imaging/rle.hpp"
#include "stainbench/imaging/threshold.hpp"
#include "stainbench/metrics/aggregate.hpp"
#include "stainbench/metrics/metrics.hpp"
#include "stainbench/metrics/report.hpp"

#include "test_support.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>

using namespace stainbench;
using namespace stainbench::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double limit_s; ///< 0: no runtime limit
    std::function<Outcome()> check;
};

Outcome otsu_oracle()
{
    std::mt19937 rng(101);
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        const auto img = random_gray(rng, 64);
        mismatches += otsu_threshold(img) != exhaustive_otsu(img);
    }
    return {mismatches == 0, fmt::format("{} mismatches over 200 images", mismatches)};
}

Outcome median_oracle()
{
    std::mt19937 rng(102);
    int mismatches = 0;
    for (int i = 0; i < 100; ++i) {
        const auto img = random_gray(rng, 64);
        for (int radius = 1; radius <= 3; ++radius) {
            mismatches += !(median_filter(img, radius) == sorted_window_median(img, radius));
        }
    }
    return {mismatches == 0, fmt::format("{} mismatches over 100 images x radius 1..3", mismatches)};
}

Outcome component_oracle()
{
    std::mt19937 rng(103);
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        const auto m = random_mask(rng, 64);
        mismatches += !(largest_component(m, Connectivity::four) == flood_fill_largest(m, 4));
        mismatches += !(largest_component(m, Connectivity::eight) == flood_fill_largest(m, 8));
    }
    return {mismatches == 0, fmt::format("{} mismatches over 200 masks x 2 connectivities", mismatches)};
}

Outcome rle_roundtrip()
{
    std::mt19937 rng(104);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto m = random_mask(rng, 64);
        mismatches += !(rle_decode(rle_encode(m)) == m);
    }
    const std::vector<RunLengthEncoding> malformed{
        {2, 2, {3}}, {2, 2, {5}}, {2, 2, {-1, 5}}, {2, 2, {1, 0, 3}}, {2, 2, {}}, {0, 0, {0}}};
    int accepted = 0;
    for (const auto& rle : malformed) {
        try {
            (void)rle_decode(rle);
            ++accepted;
        } catch (const ValidationError&) {
        }
    }
    return {mismatches == 0 && accepted == 0,
            fmt::format("{} round-trip mismatches over 1000 masks, {} of {} malformed inputs accepted", mismatches,
                        accepted, malformed.size())};
}

Outcome metric_identities()
{
    double worst = 0.0;
    int violations = 0;
    const auto check = [&](const BinaryMask& a, const BinaryMask& b) {
        const double i = iou(a, b);
        const double d = dice(a, b);
        worst = std::max(worst, std::abs(d - 2 * i / (1 + i)));
        violations += i != iou(b, a) || d != dice(b, a) || i < 0.0 || i > d || d > 1.0;
    };
    for (unsigned a = 0; a < 16; ++a) {
        for (unsigned b = 0; b < 16; ++b) {
            BinaryMask ma(2, 2);
            BinaryMask mb(2, 2);
            for (std::size_t k = 0; k < 4; ++k) {
                ma.set(k, ((a >> k) & 1U) != 0);
                mb.set(k, ((b >> k) & 1U) != 0);
            }
            check(ma, mb);
        }
    }
    std::mt19937 rng(105);
    for (int n = 0; n < 500; ++n) {
        const auto a = random_mask(rng, 64);
        BinaryMask b(a.width(), a.height());
        const unsigned flip = 1U + rng() % 4;
        for (std::size_t k = 0; k < b.size(); ++k) {
            b.set(k, rng() % 8 < flip ? !a[k] : a[k]);
        }
        check(a, b);
    }
    return {worst <= 1e-12 && violations == 0,
            fmt::format("756 pairs, max |dice - 2iou/(1+iou)| = {:.3g}, {} symmetry/bound violations", worst,
                        violations)};
}

std::vector<EvalRecord> pass_records(Mode mode, const std::string& model, int passes, int count)
{
    std::vector<EvalRecord> out;
    for (int i = 0; i < count; ++i) {
        EvalRecord r;
        r.image_id = fmt::format("{}-{}", model, i);
        r.mode = mode;
        r.model = model;
        r.passed = i < passes;
        out.push_back(r);
    }
    return out;
}

Outcome table1_arithmetic()
{
    struct Case {
        Mode mode;
        int passes;
        const char* expected;
    };
    const Case cases[] = {{Mode::auto_grid, 79, "87.8"},
                          {Mode::box, 82, "91.1"},
                          {Mode::point, 88, "97.8"},
                          {Mode::threshold, 89, "98.9"}};
    std::vector<EvalRecord> records;
    for (const auto& c : cases) {
        const auto r = pass_records(c.mode, "default", c.passes, 90);
        records.insert(records.end(), r.begin(), r.end());
    }
    const auto rows = aggregate_accuracy(records);
    const auto md = table1_markdown(rows);
    std::string shown;
    bool ok = rows.size() == 4;
    for (std::size_t i = 0; ok && i < rows.size(); ++i) {
        const auto text = format_tenths(*rows[i].overall().tenths());
        shown += fmt::format("{}/90->{} ", cases[i].passes, text);
        ok = text == cases[i].expected && md.find("| " + text + " ") != std::string::npos;
    }
    return {ok, shown};
}

Outcome table2_arithmetic()
{
    std::vector<EvalRecord> records;
    std::mt19937 rng(106);
    for (int i = 0; i < 90; ++i) {
        const double jitter = std::uniform_real_distribution<double>(-0.2, 0.2)(rng);
        for (const auto& [model, mean] : {std::pair{"default", 2.50}, std::pair{"fine-tuned", 2.39}}) {
            for (const double sign : {1.0, -1.0}) {
                EvalRecord r;
                r.image_id = fmt::format("{}-{}", i, sign);
                r.mode = Mode::box;
                r.model = model;
                r.latency_s = mean + sign * jitter;
                records.push_back(r);
            }
        }
    }
    const auto rows = timing_stats(records);
    if (rows.size() != 2) {
        return {false, fmt::format("{} timing rows", rows.size())};
    }
    const auto base = format_fixed(rows[0].mean_s, 2);
    const auto tuned = format_fixed(rows[1].mean_s, 2);
    const double s = speedup_percent(2.5, 2.39);
    const auto md = table2_markdown(rows);
    const bool ok = base == "2.50" && tuned == "2.39" && std::abs(s - 4.60) <= 0.01 &&
                    md.find("4.60%") != std::string::npos && md.find("4.70%") != std::string::npos;
    return {ok, fmt::format("means {} / {}, speedup_percent(2.5, 2.39) = {:.4f}, reference note present: {}", base,
                            tuned, s, md.find("4.70%") != std::string::npos)};
}

double mean_iou(const std::vector<EvalRecord>& records)
{
    double total = 0.0;
    for (const auto& r : records) {
        total += r.iou;
    }
    return records.empty() ? 0.0 : total / static_cast<double>(records.size());
}

int failed_count(const std::vector<EvalRecord>& records)
{
    return static_cast<int>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.error.empty(); }));
}

Outcome table4_direction()
{
    const auto dir = scratch_dir("acceptance-table4");
    SyntheticSpec textured;
    textured.background = Background::textured(0);
    auto specs = synthetic_grid(dataset_angles, 10, textured, 1);
    for (auto& s : specs) {
        s.background.seed = 7919 * s.rng_seed;
    }
    const auto textured_entries = load_manifest(write_dataset(specs, dir / "textured"));
    const auto white_entries = load_manifest(write_dataset(synthetic_grid(dataset_angles, 10, {}, 1), dir / "white"));

    auto session = spawn_backend({{STAINBENCH_EXE, "serve-classical"}, std::chrono::seconds(10), std::chrono::seconds(30)});
    const std::vector<std::optional<Prompt>> none;
    const auto t = run_batch(session, textured_entries, none, {.mode = Mode::threshold, .model = "classical"});
    const auto tm = run_batch(session, textured_entries, none, {.mode = Mode::threshold_median, .model = "classical"});
    const auto w = run_batch(session, white_entries, none, {.mode = Mode::threshold, .model = "classical"});
    fs::remove_all(dir);

    const int failures = failed_count(t) + failed_count(tm) + failed_count(w);
    const double mt = mean_iou(t);
    const double mtm = mean_iou(tm);
    const double mw = mean_iou(w);
    return {failures == 0 && t.size() >= 90 && mt <= mtm && mw >= 0.95,
            fmt::format("{} textured droplets: Thres {:.4f} <= Thres+MF {:.4f}; white Thres {:.4f} >= 0.95; {} failed",
                        t.size(), mt, mtm, mw, failures)};
}

Outcome echo_closure()
{
    const auto dir = scratch_dir("acceptance-echo");
    GenSynthOptions gen;
    gen.gray_variants = true;
    gen.out_dir = dir / "data";
    const auto manifest = cmd_gen_synth(gen);

    RunConfig cfg;
    cfg.manifest = manifest;
    cfg.out_dir = dir / "out";
    cfg.backends = {{"echo", {"builtin:echo"}, {}}};
    const auto result = cmd_bench(cfg, STAINBENCH_EXE);
    const auto rows = aggregate_accuracy(result.records);
    const auto entries = load_manifest(manifest).size();

    bool all_hundred = !rows.empty();
    for (const auto& row : rows) {
        all_hundred = all_hundred && row.rgb.tenths() == 1000 && row.gray.tenths() == 1000 &&
                      row.overall().tenths() == 1000;
    }
    fs::remove_all(dir);
    return {entries == 180 && all_hundred && result.exit_code == exit_ok && rows.size() == 5,
            fmt::format("{} entries, {} records, {} rows all 100.0: {}, exit code {}", entries, result.records.size(),
                        rows.size(), all_hundred, result.exit_code)};
}

std::string records_without_latency(const fs::path& csv)
{
    std::ifstream in(csv);
    std::string out;
    for (std::string line; std::getline(in, line);) {
        auto fields = split_csv_line(line);
        if (fields.size() == 11) {
            fields.erase(fields.begin() + 8, fields.begin() + 10);
        }
        for (const auto& f : fields) {
            out += f + '\x1f';
        }
        out += '\n';
    }
    return out;
}

Outcome reproducibility()
{
    const auto dir = scratch_dir("acceptance-repro");
    GenSynthOptions gen;
    gen.seeds_per_angle = 3;
    gen.gray_variants = true;
    gen.prototype.background = Background::textured(5);
    gen.out_dir = dir / "data";
    const auto manifest = cmd_gen_synth(gen);

    RunConfig cfg;
    cfg.manifest = manifest;
    cfg.seed = 2024;
    cfg.backends = {{"classical", {"builtin:classical"}, {}}, {"echo", {"builtin:echo"}, {}}};
    cfg.out_dir = dir / "run1";
    const auto a = cmd_bench(cfg, STAINBENCH_EXE);
    cfg.out_dir = dir / "run2";
    const auto b = cmd_bench(cfg, STAINBENCH_EXE);
    const auto ta = records_without_latency(dir / "run1" / "records.csv");
    const auto tb = records_without_latency(dir / "run2" / "records.csv");
    fs::remove_all(dir);
    return {a.exit_code == exit_ok && b.exit_code == exit_ok && ta == tb && !a.records.empty(),
            fmt::format("{} records per run, identical modulo latency: {}", a.records.size(), ta == tb)};
}

} // namespace

int main()
{
    spdlog::set_level(spdlog::level::err);
    const std::vector<Criterion> criteria{
        {"otsu-oracle", 5.0, otsu_oracle},
        {"median-oracle", 10.0, median_oracle},
        {"largest-component-oracle", 0.0, component_oracle},
        {"rle-round-trip", 0.0, rle_roundtrip},
        {"metric-identities", 0.0, metric_identities},
        {"table1-arithmetic", 0.0, table1_arithmetic},
        {"table2-arithmetic", 0.0, table2_arithmetic},
        {"table4-direction", 60.0, table4_direction},
        {"echo-oracle-closure", 60.0, echo_closure},
        {"reproducibility", 0.0, reproducibility},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Outcome outcome;
        const auto start = std::chrono::steady_clock::now();
        try {
            outcome = c.check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.limit_s <= 0.0 || elapsed < c.limit_s;
        const bool pass = outcome.pass && in_time;
        failed += !pass;
        const auto limit = c.limit_s > 0.0 ? fmt::format(" < {:.0f} s", c.limit_s) : std::string();
        fmt::print("{} {}: {} [{:.2f} s{}]\n", pass ? "PASS" : "FAIL", c.name, outcome.detail, elapsed, limit);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
