#include "mccdma/receiver.hpp"

#include <cmath>
#include <string>

#include "mccdma/errors.hpp"
#include "mccdma/rng.hpp"

namespace mccdma {

Correlator::Correlator(const Modulator& modulator, const PnSequence& pn) : modulator_(&modulator), pn_(&pn) {
    if (static_cast<int>(pn.length()) != modulator.config().pn_length) {
        throw DimensionError("PN length does not match the modulator configuration");
    }
}

void Correlator::correlate_slot(const BasebandFrame& frame, int slot, const PathTap& reference,
                                std::span<Sample> out) const {
    const auto& cfg = modulator_->config();
    const int S = cfg.samples_per_symbol();
    const int M = cfg.subcarriers;
    const int R = cfg.substreams;
    const int Na = cfg.walsh_order;
    const int Q = cfg.oversampling;
    if (out.size() != static_cast<std::size_t>(R * M)) {
        throw DimensionError("correlate_slot output span must hold R*M values");
    }

    // bins[n * M + m]: despread, carrier-stripped sum over Walsh chip n.
    std::vector<Sample> bins(static_cast<std::size_t>(Na * M));
    const std::size_t start = static_cast<std::size_t>(slot) * S + static_cast<std::size_t>(reference.delay) * Q;
    const std::size_t end = std::min(start + static_cast<std::size_t>(S), frame.size());
    for (std::size_t idx = start; idx < end; ++idx) {
        const int i = static_cast<int>(idx - start);
        const Sample y = frame.samples[idx] * static_cast<double>(pn_->chips[static_cast<std::size_t>(i / Q)]);
        Sample* b = bins.data() + static_cast<std::size_t>(modulator_->walsh_chip(i)) * M;
        for (int m = 0; m < M; ++m) {
            b[m] += y * std::conj(modulator_->carrier(m, i));
        }
    }

    const Sample derotate = std::polar(1.0 / S, -reference.phase);
    const auto& walsh = modulator_->walsh();
    for (int m = 0; m < M; ++m) {
        for (int r = 0; r < R; ++r) {
            Sample acc{};
            for (int n = 0; n < Na; ++n) {
                acc += static_cast<double>(walsh.at(r, n)) * bins[static_cast<std::size_t>(n * M + m)];
            }
            out[static_cast<std::size_t>(m * R + r)] = acc * derotate;
        }
    }
}

Sample Correlator::correlate(const BasebandFrame& frame, int slot, int r, int m, const PathTap& reference) const {
    const auto& cfg = modulator_->config();
    std::vector<Sample> out(static_cast<std::size_t>(cfg.substreams * cfg.subcarriers));
    correlate_slot(frame, slot, reference, out);
    return out[static_cast<std::size_t>(m * cfg.substreams + r)];
}

double passband_correlator_scale(const LinkConfig& config) { return config.symbol_duration / 2.0; }

BitDecisions recover_bits(const BasebandFrame& frame, int user, const Modulator& modulator, const PnSequence& pn,
                          const std::optional<PathTap>& channel_ref, const UserSymbols* reference) {
    if (!channel_ref) {
        throw ConfigError("receiver is not synchronised: no reference path given");
    }
    const auto& cfg = modulator.config();
    const int S = cfg.samples_per_symbol();
    const int slots = static_cast<int>(frame.size() / static_cast<std::size_t>(S));
    if (reference && (reference->slots() != slots || reference->substreams() != cfg.substreams ||
                      reference->subcarriers() != cfg.subcarriers)) {
        throw DimensionError("reference symbols do not match the frame dimensions");
    }

    const Correlator correlator(modulator, pn);
    BitDecisions result{UserSymbols(user, cfg.substreams, cfg.subcarriers, slots), 0, 0};
    std::vector<Sample> z(static_cast<std::size_t>(cfg.bits_per_symbol()));
    for (int slot = 0; slot < slots; ++slot) {
        correlator.correlate_slot(frame, slot, *channel_ref, z);
        for (int m = 0; m < cfg.subcarriers; ++m) {
            for (int r = 0; r < cfg.substreams; ++r) {
                const int bit = z[static_cast<std::size_t>(m * cfg.substreams + r)].real() >= 0.0 ? 1 : -1;
                result.bits.set(r, m, slot, bit);
                if (reference) {
                    result.errors += bit != reference->at(r, m, slot) ? 1 : 0;
                    ++result.compared;
                }
            }
        }
    }
    return result;
}

BitDecisions recover_bits(const BasebandFrame& frame, int user, const WalshMatrix& walsh, const PnSequence& pn,
                          const LinkConfig& config, const std::optional<PathTap>& channel_ref,
                          const UserSymbols* reference) {
    const Modulator modulator(config, walsh);
    return recover_bits(frame, user, modulator, pn, channel_ref, reference);
}

namespace {

BasebandFrame sum_multipath(const BasebandFrame& tx, std::span<const PathTap> taps, int q) {
    return apply_multipath(tx, taps, q);
}

void accumulate(BasebandFrame& into, const BasebandFrame& add) {
    if (into.samples.empty()) {
        into = add;
        return;
    }
    for (std::size_t i = 0; i < into.size(); ++i) {
        into.samples[i] += add.samples[i];
    }
}

}  // namespace

std::vector<ComplexDecomposition> decompose_complex(const LinkSimulator& link, const TrialBlock& block) {
    const auto& sc = link.scenario();
    if (sc.hpa_mode != HpaMode::bypass) {
        throw UnsupportedModeError(
            "correlator decomposition is defined only for a linear transmitter; the amplifier breaks superposition");
    }
    if (block.n0 > 0.0 && block.noise.size() != block.received.size()) {
        throw ConfigError("decomposition needs the noise frame: run the block with keep_noise");
    }
    const auto& cfg = sc.link;
    const int Q = cfg.oversampling;
    const auto& mod = link.modulator();
    const auto& user0 = block.symbols.front();
    const auto& taps0 = block.channel.taps.front();
    const std::span<const PathTap> first(taps0.data(), 1);
    const std::span<const PathTap> others(taps0.data() + 1, taps0.size() - 1);

    const auto ref_slot = mod.modulate_masked(user0, link.pn(0), [](int r, int m) { return r == 0 && m == 0; });
    std::array<BasebandFrame, kComponentCount> parts;
    parts[kDs] = sum_multipath(ref_slot, first, Q);
    parts[kMpi] = sum_multipath(ref_slot, others, Q);
    parts[kIssi] = sum_multipath(
        mod.modulate_masked(user0, link.pn(0), [](int r, int m) { return r != 0 && m == 0; }), taps0, Q);
    parts[kIci] =
        sum_multipath(mod.modulate_masked(user0, link.pn(0), [](int, int m) { return m != 0; }), taps0, Q);
    for (int k = 1; k < cfg.users; ++k) {
        accumulate(parts[kMui], sum_multipath(mod.modulate(block.symbols[static_cast<std::size_t>(k)], link.pn(k)),
                                              block.channel.taps[static_cast<std::size_t>(k)], Q));
    }
    for (auto* p : {&parts[kMui], &parts[kNoise]}) {
        if (p->samples.empty()) {
            p->samples.assign(block.received.size(), Sample{});
            p->sample_rate = block.received.sample_rate;
        }
    }
    if (block.n0 > 0.0) {
        parts[kNoise] = block.noise;
    }

    const Correlator correlator(mod, link.pn(0));
    std::vector<ComplexDecomposition> out;
    out.reserve(static_cast<std::size_t>(user0.slots()));
    for (int slot = 0; slot < user0.slots(); ++slot) {
        ComplexDecomposition d;
        d.slot = slot;
        d.z_total = correlator.correlate(block.received, slot, 0, 0, block.reference);
        for (int c = 0; c < kComponentCount; ++c) {
            d.components.values[static_cast<std::size_t>(c)] =
                correlator.correlate(parts[static_cast<std::size_t>(c)], slot, 0, 0, block.reference);
        }
        out.push_back(d);
    }
    return out;
}

std::vector<CorrelatorOutput> decompose_correlator_output(const LinkSimulator& link, const TrialBlock& block) {
    const auto complex_parts = decompose_complex(link, block);
    std::vector<CorrelatorOutput> out;
    out.reserve(complex_parts.size());
    for (const auto& d : complex_parts) {
        CorrelatorOutput o;
        o.z_total = d.z_total.real();
        for (std::size_t c = 0; c < o.components.values.size(); ++c) {
            o.components.values[c] = d.components.values[c].real();
        }
        o.slot = d.slot;
        out.push_back(o);
    }
    return out;
}

InterferenceVariances estimate_interference_variances(const Scenario& scenario, double ebn0_db,
                                                      std::int64_t n_symbols, std::uint64_t seed) {
    if (n_symbols < 2) {
        throw StatisticsError("variance estimation needs at least two symbols");
    }
    const LinkSimulator link(scenario);
    // Welford accumulators per interference component.
    std::array<Sample, kComponentCount> mean{};
    std::array<double, kComponentCount> m2{};
    double signal = 0.0;
    std::int64_t n = 0;
    for (std::uint64_t trial = 0; n < n_symbols; ++trial) {
        auto rng = trial_rng(seed, 0xDEC0u, trial);
        const auto block = link.run_block(rng, ebn0_db, true);
        for (const auto& d : decompose_complex(link, block)) {
            if (n == n_symbols) break;
            ++n;
            for (std::size_t c = 0; c < mean.size(); ++c) {
                const Sample x = d.components.values[c];
                const Sample delta = x - mean[c];
                mean[c] += delta / static_cast<double>(n);
                m2[c] += (std::conj(delta) * (x - mean[c])).real();
            }
            signal += std::norm(d.components[kDs]);
        }
    }
    const double denom = static_cast<double>(n - 1);
    InterferenceVariances v;
    v.mpi = m2[kMpi] / denom;
    v.issi = m2[kIssi] / denom;
    v.ici = m2[kIci] / denom;
    v.mui = m2[kMui] / denom;
    v.noise = m2[kNoise] / denom;
    v.signal = signal / static_cast<double>(n);
    v.symbols = n;
    return v;
}

}  // namespace mccdma
