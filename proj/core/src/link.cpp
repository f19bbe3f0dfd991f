#include "mccdma/link.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mccdma/errors.hpp"
#include "mccdma/hpa.hpp"

namespace mccdma {

namespace {

std::vector<PnSequence> build_codes(const Scenario& s) {
    const auto taps = s.resolved_taps();
    return assign_user_codes(s.pn_degree, taps, s.link.users);
}

// Amplified frame; `rotation` receives arg <y, x>, the mean phase the amplifier adds.
BasebandFrame amplify(const Scenario& s, const BasebandFrame& x, double* rotation) {
    BasebandFrame y;
    switch (s.hpa_mode) {
        case HpaMode::bypass:
            if (rotation) *rotation = 0.0;
            return x;
        case HpaMode::saleh: {
            const auto op = set_operating_point(x, s.ibo_db, s.saleh);
            y = apply_hpa(x, s.saleh, op);
            break;
        }
        case HpaMode::saleh_pd: {
            // Wanted output envelope sits ibo_db below the amplifier's peak output power.
            const double px = x.mean_power();
            if (!(px > 0.0)) {
                throw DegenerateError("cannot predistort a zero-power frame");
            }
            const double target = s.saleh.max_output_power() / std::pow(10.0, s.ibo_db / 10.0);
            y = apply_hpa(apply_predistorter(x, s.saleh, std::sqrt(target / px)), s.saleh,
                          OperatingPoint{s.ibo_db, 1.0, s.saleh.max_input_power()});
            break;
        }
    }
    if (rotation) {
        Sample acc{};
        for (std::size_t i = 0; i < x.size(); ++i) {
            acc += y.samples[i] * std::conj(x.samples[i]);
        }
        *rotation = std::arg(acc);
    }
    return y;
}

}  // namespace

void Scenario::validate() const {
    link.validate();
    if (pn_degree < 2 || pn_degree > 24) {
        throw ConfigError("pn_degree must lie in [2, 24]");
    }
    if (link.pn_length != (1 << pn_degree) - 1) {
        throw ConfigError("pn_length " + std::to_string(link.pn_length) + " does not match pn_degree " +
                          std::to_string(pn_degree));
    }
    if (pn_taps.empty() && (pn_degree < 3 || pn_degree > 10)) {
        throw ConfigError("pn_degree " + std::to_string(pn_degree) + " has no built-in polynomial; set pn_taps");
    }
    if (link.users > link.pn_length) {
        throw ConfigError("more users than distinct PN shifts");
    }
    if (channel.paths < 1) throw ConfigError("paths must be >= 1");
    if (channel.paths > link.pn_length) throw ConfigError("path delays must stay within one symbol");
    if (!(channel.decay_db >= 0.0)) throw ConfigError("decay_db must be >= 0");
    saleh.validate();
    if (!std::isfinite(ibo_db)) throw ConfigError("ibo_db must be finite");
    if (ebn0_db.empty()) throw ConfigError("Eb/N0 sweep is empty");
    for (double e : ebn0_db) {
        if (!std::isfinite(e)) throw ConfigError("Eb/N0 values must be finite");
    }
    if (stopping.min_errors < 100 && !stopping.allow_low_min_errors) {
        throw ConfigError("min_errors below 100 needs allow_low_min_errors");
    }
    if (stopping.min_errors < 1 || stopping.max_bits < 1) {
        throw ConfigError("stopping rule needs min_errors >= 1 and max_bits >= 1");
    }
    if (slots_per_block < 1) throw ConfigError("slots_per_block must be >= 1");
}

std::vector<int> Scenario::resolved_taps() const {
    if (!pn_taps.empty()) {
        return pn_taps;
    }
    const auto t = primitive_taps(pn_degree);
    return {t.begin(), t.end()};
}

UserSymbols random_symbols(Rng& rng, int user, const LinkConfig& config, int slots) {
    UserSymbols symbols(user, config.substreams, config.subcarriers, slots);
    std::uint64_t word = 0;
    int left = 0;
    for (int s = 0; s < slots; ++s) {
        for (int m = 0; m < config.subcarriers; ++m) {
            for (int r = 0; r < config.substreams; ++r) {
                if (left == 0) {
                    word = rng();
                    left = 64;
                }
                symbols.set(r, m, s, (word & 1U) ? -1 : 1);
                word >>= 1;
                --left;
            }
        }
    }
    return symbols;
}

LinkSimulator::LinkSimulator(const Scenario& scenario)
    : scenario_((scenario.validate(), scenario)),
      modulator_(scenario.link, generate_walsh(scenario.link.walsh_order)),
      pn_(build_codes(scenario)) {}

BasebandFrame LinkSimulator::transmit(const UserSymbols& symbols) const {
    return amplify(scenario_, modulator_.modulate(symbols, pn(symbols.user())), nullptr);
}

TrialBlock LinkSimulator::run_block(Rng& rng, double ebn0_db, bool keep_noise) const {
    const auto& cfg = scenario_.link;
    TrialBlock block;
    block.channel = draw_channel(rng, cfg.users, scenario_.channel.paths, scenario_.channel.decay_db,
                                 scenario_.channel.fading);
    block.symbols.reserve(static_cast<std::size_t>(cfg.users));
    for (int k = 0; k < cfg.users; ++k) {
        block.symbols.push_back(random_symbols(rng, k, cfg, scenario_.slots_per_block));
    }

    double rotation = 0.0;
    for (int k = 0; k < cfg.users; ++k) {
        const auto x = modulator_.modulate(block.symbols[static_cast<std::size_t>(k)], pn(k));
        const auto y = amplify(scenario_, x, k == 0 ? &rotation : nullptr);
        if (k == 0) {
            block.eb = y.mean_power() * cfg.symbol_duration / cfg.bits_per_symbol();
        }
        if (k == 0) {
            block.received.sample_rate = y.sample_rate;
            block.received.t0 = y.t0;
            block.received.samples.assign(y.size(), Sample{});
        }
        accumulate_multipath(block.received, y, block.channel.taps[static_cast<std::size_t>(k)], cfg.oversampling);
    }

    if (scenario_.noise) {
        block.n0 = noise_density(block.eb, ebn0_db);
        auto noise = awgn_frame(block.received, block.n0, rng);
        for (std::size_t i = 0; i < noise.size(); ++i) {
            block.received.samples[i] += noise.samples[i];
        }
        if (keep_noise) {
            block.noise = std::move(noise);
        }
    }

    block.reference = block.channel.taps.front().front();
    if (scenario_.track_hpa_phase) {
        block.reference.phase = std::fmod(block.reference.phase + rotation + 2.0 * std::numbers::pi,
                                          2.0 * std::numbers::pi);
    }
    return block;
}

}  // namespace mccdma
