#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mccdma/errors.hpp"
#include "mccdma/link.hpp"
#include "mccdma/receiver.hpp"
#include "mccdma/rng.hpp"
#include "support.hpp"

namespace mccdma {
namespace {

Scenario linear_scenario(int K, int R, int M, int Na, int degree, int Q) {
    Scenario s;
    s.link.users = K;
    s.link.substreams = R;
    s.link.subcarriers = M;
    s.link.walsh_order = Na;
    s.pn_degree = degree;
    s.link.pn_length = (1 << degree) - 1;
    s.link.oversampling = Q;
    s.noise = false;
    s.slots_per_block = 4;
    return s;
}

TEST(Recover, PropertyNoiselessSingleUserIsExact) {
    testing::for_all(40, 61, [](testing::Gen& g) {
        const int Na = g.power_of_two(3);
        const int R = g.integer(1, Na);
        const int M = g.integer(1, 4);
        const int degree = g.integer(3, 6);
        const int Q = g.integer(2, 8);
        auto s = linear_scenario(1, R, M, Na, degree, Q);
        if (2 * M * Na >= Q * s.link.pn_length) return;  // outside the Nyquist bound
        const LinkSimulator link(s);
        Rng rng(static_cast<std::uint64_t>(g.integer(0, 1 << 30)));
        const auto block = link.run_block(rng, 0.0);
        const auto d = recover_bits(block.received, 0, link.modulator(), link.pn(0), block.reference,
                                    &block.symbols[0]);
        EXPECT_EQ(d.errors, 0) << "R=" << R << " M=" << M << " Na=" << Na << " Nc=" << s.link.pn_length << " Q=" << Q;
        EXPECT_EQ(d.compared, static_cast<std::int64_t>(R * M * s.slots_per_block));
    });
}

TEST(Recover, ReferencePhaseIsCounterRotated) {
    const auto s = linear_scenario(1, 4, 2, 4, 4, 4);
    const LinkSimulator link(s);
    testing::Gen g(62);
    const auto d = g.symbols(0, 4, 2, 6);
    const auto tx = link.modulator().modulate(d, link.pn(0));
    for (double phase : {0.0, std::numbers::pi / 3.0, 2.5}) {
        const std::vector<PathTap> taps{{1.0, 0, phase}};
        const auto rx = apply_multipath(tx, taps, s.link.oversampling);
        const auto out = recover_bits(rx, 0, link.modulator(), link.pn(0), taps[0], &d);
        EXPECT_EQ(out.errors, 0) << phase;
        for (int slot = 0; slot < 6; ++slot)
            for (int m = 0; m < 2; ++m)
                for (int r = 0; r < 4; ++r) EXPECT_EQ(out.bits.at(r, m, slot), d.at(r, m, slot));
    }
}

TEST(Recover, WithoutReferenceIsConfigError) {
    const auto s = linear_scenario(1, 1, 1, 1, 3, 4);
    const LinkSimulator link(s);
    BasebandFrame f;
    f.samples.assign(28, Sample{1.0});
    EXPECT_THROW(recover_bits(f, 0, link.modulator(), link.pn(0), std::nullopt), ConfigError);
    EXPECT_THROW(recover_bits(f, 0, link.modulator().walsh(), link.pn(0), s.link, std::nullopt), ConfigError);
}

TEST(Correlator, DesiredTermScaling) {
    auto s = linear_scenario(1, 2, 2, 2, 4, 4);
    s.link.power = 0.8;
    s.link.symbol_duration = 3.0;
    const LinkSimulator link(s);
    UserSymbols d(0, 2, 2, 1);
    for (int m = 0; m < 2; ++m)
        for (int r = 0; r < 2; ++r) d.set(r, m, 0, r == 1 ? -1 : 1);
    const auto tx = link.modulator().modulate(d, link.pn(0));
    const Correlator corr(link.modulator(), link.pn(0));
    const double amplitude = std::sqrt(2.0 * s.link.power);
    for (int m = 0; m < 2; ++m) {
        for (int r = 0; r < 2; ++r) {
            const Sample z = corr.correlate(tx, 0, r, m, PathTap{});
            EXPECT_NEAR(std::abs(z - amplitude * static_cast<double>(d.at(r, m, 0))), 0.0, 1e-12);
        }
    }
    // Rescaled to a passband integrator over T the squared desired term is (P/2) T^2.
    const double z = corr.correlate(tx, 0, 0, 0, PathTap{}).real();
    const double scale = passband_correlator_scale(s.link);
    EXPECT_DOUBLE_EQ(scale, 1.5);
    EXPECT_NEAR(z * z * scale * scale, s.link.power / 2.0 * 9.0, 1e-12);
}

TEST(Correlator, PropertyLinear) {
    testing::for_all(20, 63, [](testing::Gen& g) {
        const auto s = linear_scenario(1, 4, 2, 4, 5, 4);
        const LinkSimulator link(s);
        const Correlator corr(link.modulator(), link.pn(0));
        const int S = s.link.samples_per_symbol();
        const auto x = g.frame(static_cast<std::size_t>(2 * S), 1.0);
        const auto y = g.frame(static_cast<std::size_t>(2 * S), 1.0);
        BasebandFrame sum = x;
        for (std::size_t i = 0; i < sum.size(); ++i) sum.samples[i] += y.samples[i];
        const PathTap ref{1.0, g.integer(0, 3), g.real(0.0, 6.0)};
        std::vector<Sample> zx(8), zy(8), zs(8);
        corr.correlate_slot(x, 0, ref, zx);
        corr.correlate_slot(y, 0, ref, zy);
        corr.correlate_slot(sum, 0, ref, zs);
        for (std::size_t i = 0; i < 8; ++i) ASSERT_NEAR(std::abs(zs[i] - zx[i] - zy[i]), 0.0, 1e-12);
    });
}

TEST(Correlator, WrongOutputSizeThrows) {
    const auto s = linear_scenario(1, 2, 2, 2, 4, 4);
    const LinkSimulator link(s);
    const Correlator corr(link.modulator(), link.pn(0));
    BasebandFrame f;
    f.samples.assign(60, Sample{});
    std::vector<Sample> out(3);
    EXPECT_THROW(corr.correlate_slot(f, 0, PathTap{}, out), DimensionError);
}

TEST(Decompose, SingleUserSinglePathHasNoMultipathOrMultiUserTerms) {
    const auto s = linear_scenario(1, 4, 4, 4, 5, 4);
    const LinkSimulator link(s);
    Rng rng(64);
    const auto block = link.run_block(rng, 0.0, true);
    for (const auto& d : decompose_complex(link, block)) {
        EXPECT_EQ(d.components[kMpi], Sample{});
        EXPECT_EQ(d.components[kMui], Sample{});
        EXPECT_EQ(d.components[kNoise], Sample{});
        const double ref = std::abs(d.z_total);
        EXPECT_LE(std::abs(d.components[kIssi]), 1e-10 * ref);
        EXPECT_LE(std::abs(d.components[kIci]), 1e-10 * ref);
        EXPECT_NEAR(std::abs(d.components[kDs]), std::sqrt(2.0 * s.link.power), 1e-12);
    }
}

TEST(Decompose, ComponentsSumToTotal) {
    auto s = linear_scenario(3, 4, 2, 4, 5, 4);
    s.channel = ChannelSpec{3, 2.0, true};
    s.noise = true;
    const LinkSimulator link(s);
    for (std::uint64_t t = 0; t < 20; ++t) {
        auto rng = trial_rng(7, 1, t);
        const auto block = link.run_block(rng, 5.0, true);
        const auto real_parts = decompose_correlator_output(link, block);
        const auto parts = decompose_complex(link, block);
        ASSERT_EQ(parts.size(), real_parts.size());
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const auto& d = parts[i];
            EXPECT_LE(std::abs(d.z_total - d.components.sum()), 1e-10 * std::abs(d.z_total));
            EXPECT_DOUBLE_EQ(real_parts[i].z_total, d.z_total.real());
            EXPECT_NEAR(real_parts[i].z_total, real_parts[i].components[kDs] + real_parts[i].interference(),
                        1e-10 * std::abs(d.z_total));
        }
    }
}

TEST(Decompose, AmplifiedScenarioIsUnsupported) {
    auto s = linear_scenario(1, 2, 2, 2, 4, 4);
    s.hpa_mode = HpaMode::saleh;
    const LinkSimulator link(s);
    Rng rng(65);
    const auto block = link.run_block(rng, 0.0, true);
    EXPECT_THROW(decompose_complex(link, block), UnsupportedModeError);
}

TEST(Decompose, NoisyBlockWithoutKeptNoiseIsRejected) {
    auto s = linear_scenario(1, 1, 1, 1, 3, 4);
    s.noise = true;
    const LinkSimulator link(s);
    Rng rng(66);
    const auto block = link.run_block(rng, 3.0, false);
    EXPECT_THROW(decompose_complex(link, block), ConfigError);
}

TEST(Variances, NoiselessSingleUserIsZero) {
    const auto s = linear_scenario(1, 4, 2, 4, 4, 4);
    const auto v = estimate_interference_variances(s, 0.0, 1000, 67);
    EXPECT_EQ(v.symbols, 1000);
    EXPECT_LE(v.mpi, 1e-18);
    EXPECT_LE(v.issi, 1e-18);
    EXPECT_LE(v.ici, 1e-18);
    EXPECT_LE(v.mui, 1e-18);
    EXPECT_LE(v.noise, 1e-18);
    EXPECT_LE(v.total(), 1e-18);
}

TEST(Variances, AwgnMatchesAnalyticCorrelatorNoise) {
    auto s = linear_scenario(1, 1, 1, 1, 3, 4);
    s.noise = true;
    s.link.symbol_duration = 2.0;
    const double ebn0_db = 3.0;
    const auto v = estimate_interference_variances(s, ebn0_db, 10000, 68);
    // Constant envelope: Eb = 2 P T exactly, and E|z_n|^2 = N0 / T over both quadratures.
    const double n0 = 2.0 * s.link.power * s.link.symbol_duration / std::pow(10.0, ebn0_db / 10.0);
    EXPECT_NEAR(v.noise / (n0 / s.link.symbol_duration), 1.0, 0.05);
    EXPECT_NEAR(v.signal, 2.0 * s.link.power, 1e-12);
}

TEST(Variances, MoreUsersMoreMultiUserInterference) {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto v10 = estimate_interference_variances(linear_scenario(10, 2, 2, 2, 6, 4), 0.0, 1000, seed);
        const auto v20 = estimate_interference_variances(linear_scenario(20, 2, 2, 2, 6, 4), 0.0, 1000, seed);
        wins += v20.mui > v10.mui ? 1 : 0;
    }
    EXPECT_EQ(wins, 10);
}

TEST(Variances, TooFewSymbols) {
    EXPECT_THROW(estimate_interference_variances(linear_scenario(1, 1, 1, 1, 3, 4), 0.0, 1, 1), StatisticsError);
}

}  // namespace
}  // namespace mccdma
