#include "mccdma/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mccdma/errors.hpp"

namespace mccdma {

std::vector<double> power_delay_profile(int paths, double decay_db) {
    if (paths < 1) {
        throw DimensionError("path count must be >= 1, got " + std::to_string(paths));
    }
    if (!(decay_db >= 0.0) || !std::isfinite(decay_db)) {
        throw DomainError("decay_db must be finite and >= 0");
    }
    std::vector<double> profile(static_cast<std::size_t>(paths));
    double total = 0.0;
    for (int l = 0; l < paths; ++l) {
        profile[static_cast<std::size_t>(l)] = std::pow(10.0, -l * decay_db / 10.0);
        total += profile[static_cast<std::size_t>(l)];
    }
    for (auto& p : profile) {
        p /= total;
    }
    return profile;
}

ChannelRealization draw_channel(Rng& rng, int users, int paths, double decay_db, bool fading) {
    if (users < 1) {
        throw DimensionError("user count must be >= 1");
    }
    const auto profile = power_delay_profile(paths, decay_db);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);

    ChannelRealization ch;
    ch.paths = paths;
    ch.taps.resize(static_cast<std::size_t>(users));
    for (auto& user_taps : ch.taps) {
        user_taps.resize(static_cast<std::size_t>(paths));
        for (int l = 0; l < paths; ++l) {
            auto& tap = user_taps[static_cast<std::size_t>(l)];
            const double omega = profile[static_cast<std::size_t>(l)];
            tap.delay = l;
            if (fading) {
                const double x = gauss(rng);
                const double y = gauss(rng);
                tap.gain = std::sqrt(omega * (x * x + y * y));
                double phase = std::atan2(y, x);
                if (phase < 0.0) {
                    phase += 2.0 * std::numbers::pi;
                }
                tap.phase = phase;
            } else {
                tap.gain = std::sqrt(omega);
                tap.phase = uniform(rng);
            }
        }
    }
    return ch;
}

void accumulate_multipath(BasebandFrame& acc, const BasebandFrame& frame, std::span<const PathTap> taps,
                          int samples_per_chip) {
    const auto n = frame.size();
    if (acc.size() != n) {
        throw DomainError("accumulate_multipath: accumulator length differs from the frame");
    }
    Sample* dst = acc.samples.data();
    const Sample* src = frame.samples.data();
    for (const auto& tap : taps) {
        const Sample h = std::polar(tap.gain, tap.phase);
        const auto shift = static_cast<std::size_t>(tap.delay) * static_cast<std::size_t>(samples_per_chip);
        for (std::size_t i = shift; i < n; ++i) {
            dst[i] += h * src[i - shift];
        }
    }
}

BasebandFrame apply_multipath(const BasebandFrame& frame, std::span<const PathTap> taps, int samples_per_chip) {
    BasebandFrame out;
    out.sample_rate = frame.sample_rate;
    out.t0 = frame.t0;
    out.samples.assign(frame.size(), Sample{});
    accumulate_multipath(out, frame, taps, samples_per_chip);
    return out;
}

double noise_density(double eb, double ebn0_db) {
    if (!(eb > 0.0) || !std::isfinite(eb)) {
        throw DomainError("energy per bit must be positive and finite");
    }
    return eb / std::pow(10.0, ebn0_db / 10.0);
}

BasebandFrame awgn_frame(const BasebandFrame& like, double n0, Rng& rng) {
    BasebandFrame out;
    out.sample_rate = like.sample_rate;
    out.t0 = like.t0;
    out.samples.resize(like.size());
    const double sigma = std::sqrt(0.5 * n0 * like.sample_rate);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (auto& s : out.samples) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        s = Sample(re, im);
    }
    return out;
}

BasebandFrame add_awgn(const BasebandFrame& frame, const NoiseSpec& noise, double eb_measured, Rng& rng) {
    if (!noise.enabled) {
        return frame;
    }
    if (!(eb_measured > 0.0)) {
        throw DomainError("energy per bit must be positive to calibrate noise");
    }
    if (!std::isfinite(noise.ebn0_db)) {
        throw DomainError("Eb/N0 must be finite when noise is enabled");
    }
    BasebandFrame out = awgn_frame(frame, noise_density(eb_measured, noise.ebn0_db), rng);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.samples[i] += frame.samples[i];
    }
    return out;
}

}  // namespace mccdma
