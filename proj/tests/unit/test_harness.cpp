#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mccdma/config.hpp"
#include "mccdma/errors.hpp"
#include "mccdma/harness.hpp"
#include "support.hpp"

namespace mccdma {
namespace {

Scenario bpsk(double ebn0_db) {
    Scenario s;
    s.name = "bpsk";
    s.pn_degree = 3;
    s.link.pn_length = 7;
    s.ebn0_db = {ebn0_db};
    s.slots_per_block = 64;
    return s;
}

TEST(RunScenario, BpskAtSixDecibelsInsideInterval) {
    auto s = bpsk(6.0);
    s.stopping.min_errors = 200;
    const auto report = run_scenario(s);
    ASSERT_EQ(report.records.size(), 1u);
    const auto& r = report.records[0];
    const double p = 0.5 * std::erfc(std::sqrt(std::pow(10.0, 0.6)));
    EXPECT_NEAR(p, 2.388e-3, 1e-6);
    EXPECT_GE(r.errors, 200);
    EXPECT_LE(std::abs(r.ber - p), binomial_ci95(static_cast<std::int64_t>(p * r.bits), r.bits));
    EXPECT_EQ(r.source, BerSource::monte_carlo);
    EXPECT_EQ(r.hpa_mode, "bypass");
    EXPECT_EQ(r.ibo_db, 0.0);
}

TEST(RunScenario, NoiselessSingleUserIsErrorFree) {
    auto s = bpsk(3.0);
    s.noise = false;
    s.stopping.max_bits = 20000;
    const auto report = run_scenario(s);
    const auto& r = report.records[0];
    EXPECT_EQ(r.errors, 0);
    EXPECT_EQ(r.ber, 0.0);
    EXPECT_GE(r.bits, 20000);
    EXPECT_EQ(r.source, BerSource::monte_carlo_censored);
}

TEST(RunScenario, CensoredWhenBitBudgetRunsOut) {
    auto s = bpsk(12.0);
    s.stopping.max_bits = 1000;
    const auto r = run_scenario(s).records[0];
    EXPECT_LT(r.errors, 100);
    EXPECT_EQ(r.source, BerSource::monte_carlo_censored);
    EXPECT_EQ(format_csv(std::vector<BerRecord>{r}).find("monte-carlo-censored") != std::string::npos, true);
}

Scenario small_multiuser() {
    Scenario s;
    s.name = "mu";
    s.link.users = 3;
    s.link.substreams = 2;
    s.link.subcarriers = 2;
    s.link.walsh_order = 2;
    s.pn_degree = 5;
    s.link.pn_length = 31;
    s.channel = ChannelSpec{2, 3.0, true};
    s.ebn0_db = {0.0, 4.0};
    s.stopping.min_errors = 40;
    s.stopping.allow_low_min_errors = true;
    s.slots_per_block = 2;
    s.seed = 77;
    return s;
}

TEST(RunScenario, SameSeedIsBitIdentical) {
    const auto s = small_multiuser();
    const auto a = run_scenario(s);
    const auto b = run_scenario(s);
    EXPECT_EQ(a.records, b.records);
    EXPECT_EQ(a.seeds, b.seeds);
    EXPECT_EQ(format_csv(a.records), format_csv(b.records));
}

TEST(RunScenario, WorkerCountDoesNotChangeResult) {
    const auto s = small_multiuser();
    const auto serial = format_csv(run_scenario(s, 1).records);
    for (int w : {2, 3, 5}) EXPECT_EQ(format_csv(run_scenario(s, w).records), serial) << w;
}

TEST(RunScenario, DifferentSeedsDiffer) {
    auto s = small_multiuser();
    const auto a = run_scenario(s);
    s.seed = 78;
    EXPECT_NE(a.records, run_scenario(s).records);
}

TEST(RunScenario, PointResultIndependentOfSweepNeighbours) {
    auto s = small_multiuser();
    const auto both = run_scenario(s);
    s.ebn0_db = {4.0};
    EXPECT_EQ(run_scenario(s).records[0], both.records[1]);
}

TEST(RunScenario, RejectsBadInputs) {
    auto s = small_multiuser();
    EXPECT_THROW(run_scenario(s, 0), ConfigError);
    s.ebn0_db.clear();
    EXPECT_THROW(run_scenario(s), ConfigError);
}

TEST(RunScenario, EchoesConfiguration) {
    const auto report = run_scenario(small_multiuser());
    EXPECT_NE(report.config_echo.find("users=3"), std::string::npos);
    EXPECT_EQ(report.wall_seconds.size(), 2u);
    EXPECT_EQ(report.seeds.size(), 2u);
    EXPECT_NE(report.seeds[0], report.seeds[1]);
}

TEST(RunScenario, MonotoneSweepRaisesNoWarning) {
    auto s = bpsk(0.0);
    s.ebn0_db = {0.0, 4.0, 8.0};
    s.stopping.max_bits = 20000;
    EXPECT_TRUE(run_scenario(s).warnings.empty());
}

TEST(ConfidenceInterval, CoversKnownProbability) {
    // Synthetic Bernoulli channel with p = 0.1, 100 independent runs of 2000 bits.
    std::mt19937_64 rng(2024);
    std::bernoulli_distribution flip(0.1);
    int covered = 0;
    for (int run = 0; run < 100; ++run) {
        std::int64_t errors = 0;
        constexpr std::int64_t kBits = 2000;
        for (std::int64_t i = 0; i < kBits; ++i) errors += flip(rng) ? 1 : 0;
        const double ber = static_cast<double>(errors) / kBits;
        covered += std::abs(ber - 0.1) <= binomial_ci95(errors, kBits) ? 1 : 0;
    }
    EXPECT_GE(covered, 90);
    EXPECT_LE(covered, 99);
}

BerRecord sample_record() {
    BerRecord r;
    r.scenario = "a \"quoted\", name";
    r.ebn0_db = 0.1;
    r.users = 20;
    r.substreams = 8;
    r.subcarriers = 8;
    r.hpa_mode = "saleh+pd";
    r.ibo_db = 7.0;
    r.bits = 123456789;
    r.errors = 4321;
    r.ber = static_cast<double>(r.errors) / static_cast<double>(r.bits);
    r.ci95 = binomial_ci95(r.errors, r.bits);
    r.source = BerSource::monte_carlo_censored;
    r.seed = 18446744073709551615ull;
    return r;
}

TEST(Csv, EmptyReportIsHeaderOnly) {
    EXPECT_EQ(format_csv({}), std::string(kCsvHeader) + "\n");
}

TEST(Csv, OneRecordIsTwoLines) {
    const std::vector<BerRecord> one{sample_record()};
    const auto text = format_csv(one);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(Csv, RoundTripIsExact) {
    const std::vector<BerRecord> one{sample_record()};
    EXPECT_EQ(parse_csv(format_csv(one)), one);
}

TEST(Csv, PropertyRoundTrip) {
    testing::for_all(200, 81, [](testing::Gen& g) {
        std::vector<BerRecord> records(static_cast<std::size_t>(g.integer(0, 4)));
        for (auto& r : records) {
            r.scenario = g.coin() ? "s" + std::to_string(g.integer(0, 99)) : "x,\"y\"";
            r.ebn0_db = g.real(-5.0, 20.0);
            r.users = g.integer(1, 64);
            r.substreams = g.integer(1, 8);
            r.subcarriers = g.integer(1, 8);
            r.hpa_mode = g.coin() ? "bypass" : "saleh";
            r.ibo_db = g.coin() ? 0.0 : g.real(0.0, 12.0);
            r.bits = g.integer(0, 1 << 30);
            r.errors = g.integer(0, 1000);
            r.ber = g.real(0.0, 0.5);
            r.ci95 = g.real(0.0, 0.1);
            r.source = g.coin() ? BerSource::theoretical : BerSource::monte_carlo;
            r.seed = static_cast<std::uint64_t>(g.integer(0, 1 << 30)) << 20;
        }
        EXPECT_EQ(parse_csv(format_csv(records)), records);
    });
}

TEST(Csv, ShortValuesUseSixSignificantDigits) {
    BerRecord r = sample_record();
    r.ebn0_db = 10.0;
    r.ber = 0.25;
    const std::vector<BerRecord> one{r};
    const auto text = format_csv(one);
    EXPECT_NE(text.find(",10.0000,"), std::string::npos);
    EXPECT_NE(text.find(",0.250000,"), std::string::npos);
}

TEST(Csv, MalformedInputIsConfigError) {
    EXPECT_THROW(parse_csv(""), ConfigError);
    EXPECT_THROW(parse_csv("a,b\n"), ConfigError);
    EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\nx,1\n"), ConfigError);
    EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\nx,one,1,1,1,bypass,0,1,0,0,0,monte-carlo,1\n"), ConfigError);
    EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\n\"x,1,1,1,1,bypass,0,1,0,0,0,monte-carlo,1\n"), ConfigError);
}

TEST(Csv, EmitWritesFileBytes) {
    const auto path = std::filesystem::temp_directory_path() / "mccdma_emit_test.csv";
    RunReport report;
    report.records.push_back(sample_record());
    emit_csv(report, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(buf.str(), format_csv(report.records));
    std::filesystem::remove(path);
}

TEST(Csv, EmitToBadPathIsIoError) {
    EXPECT_THROW(emit_csv(RunReport{}, "/nonexistent/dir/out.csv"), IoError);
}

bool same_except_hpa(Scenario a, const Scenario& b) {
    a.name = b.name;
    a.hpa_mode = b.hpa_mode;
    a.ibo_db = b.ibo_db;
    return describe(a) == describe(b);
}

TEST(Presets, Fig8DiffersOnlyInAmplifier) {
    const auto p = preset("fig8");
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0].hpa_mode, HpaMode::saleh);
    EXPECT_DOUBLE_EQ(p[0].ibo_db, 7.0);
    EXPECT_EQ(p[1].hpa_mode, HpaMode::saleh);
    EXPECT_DOUBLE_EQ(p[1].ibo_db, 9.0);
    EXPECT_EQ(p[2].hpa_mode, HpaMode::saleh_pd);
    for (const auto& s : p) {
        EXPECT_EQ(s.link.users, 20);
        EXPECT_EQ(s.link.substreams, 8);
        EXPECT_EQ(s.link.subcarriers, 8);
        EXPECT_TRUE(same_except_hpa(s, p[0]));
        EXPECT_NO_THROW(s.validate());
    }
}

TEST(Presets, Fig6UserCounts) {
    const auto p = preset("fig6");
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0].link.users, 1);
    EXPECT_EQ(p[1].link.users, 10);
    EXPECT_EQ(p[2].link.users, 50);
    for (const auto& s : p) {
        EXPECT_EQ(s.link.substreams, 8);
        EXPECT_EQ(s.link.subcarriers, 8);
        EXPECT_NO_THROW(s.validate());
    }
}

TEST(Presets, Fig7Subcarriers) {
    const auto p = preset("fig7");
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0].link.subcarriers, 2);
    EXPECT_EQ(p[1].link.subcarriers, 4);
    EXPECT_EQ(p[2].link.subcarriers, 8);
    for (const auto& s : p) {
        EXPECT_EQ(s.link.users, 20);
        EXPECT_EQ(s.link.substreams, 8);
    }
}

TEST(Presets, Fig5ThreeSystemsSharedSweep) {
    const auto p = preset("fig5");
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0].link.substreams, 8);
    EXPECT_EQ(p[0].link.subcarriers, 1);
    EXPECT_EQ(p[1].link.substreams, 1);
    EXPECT_EQ(p[1].link.subcarriers, 8);
    EXPECT_EQ(p[2].link.substreams, 8);
    EXPECT_EQ(p[2].link.subcarriers, 8);
    for (const auto& s : p) {
        EXPECT_EQ(s.link.users, 20);
        EXPECT_EQ(s.ebn0_db, p[0].ebn0_db);
        EXPECT_NO_THROW(s.validate());
    }
}

TEST(Presets, BaseSweepIsZeroToSixteen) {
    const auto base = preset_base();
    EXPECT_EQ(base.ebn0_db.front(), 0.0);
    EXPECT_EQ(base.ebn0_db.back(), 16.0);
    EXPECT_EQ(base.ebn0_db.size(), 9u);
}

TEST(Presets, UnknownNameIsConfigError) {
    EXPECT_THROW(preset("fig9"), ConfigError);
    EXPECT_EQ(preset_names().size(), 4u);
}

TEST(TheoreticalReport, TaggedAndShaped) {
    auto s = small_multiuser();
    s.channel = ChannelSpec{1, 0.0, false};
    const auto report = theoretical_report(s, 200);
    ASSERT_EQ(report.records.size(), 2u);
    for (const auto& r : report.records) {
        EXPECT_EQ(r.source, BerSource::theoretical);
        EXPECT_GT(r.ber, 0.0);
        EXPECT_LT(r.ber, 0.5);
    }
    EXPECT_GT(report.records[0].ber, report.records[1].ber);
}

TEST(TheoreticalReport, AwgnMatchesBpsk) {
    auto s = bpsk(0.0);
    s.ebn0_db = {0.0, 4.0, 8.0};
    const auto report = theoretical_report(s, 20000);
    for (const auto& r : report.records) {
        const double want = 0.5 * std::erfc(std::sqrt(std::pow(10.0, r.ebn0_db / 10.0)));
        EXPECT_NEAR(r.ber / want, 1.0, 0.15) << r.ebn0_db;
    }
}

}  // namespace
}  // namespace mccdma
