#include "mccdma/txchain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mccdma/errors.hpp"

namespace mccdma {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::string dims(const char* what, long got) { return std::string(what) + " = " + std::to_string(got); }

}  // namespace

void LinkConfig::validate() const {
    if (users < 1) throw ConfigError("users must be >= 1, " + dims("K", users));
    if (substreams < 1) throw ConfigError("substreams must be >= 1, " + dims("R", substreams));
    if (subcarriers < 1) throw ConfigError("subcarriers must be >= 1, " + dims("M", subcarriers));
    if (!is_power_of_two(walsh_order)) {
        throw ConfigError("walsh_order must be a power of two, " + dims("N_a", walsh_order));
    }
    if (walsh_order < substreams) {
        throw ConfigError("walsh_order must be >= substreams (" + std::to_string(walsh_order) + " < " +
                          std::to_string(substreams) + ")");
    }
    if (pn_length < 3 || !is_power_of_two(pn_length + 1)) {
        throw ConfigError("pn_length must be 2^n - 1 with n >= 2, " + dims("N_c", pn_length));
    }
    if (oversampling < 2) throw ConfigError("oversampling must be >= 2, " + dims("Q", oversampling));
    if (!(power > 0.0) || !std::isfinite(power)) throw ConfigError("power must be positive and finite");
    if (!(symbol_duration > 0.0) || !std::isfinite(symbol_duration)) {
        throw ConfigError("symbol_duration must be positive and finite");
    }
    if (walsh_order > samples_per_symbol()) {
        throw ConfigError("walsh_order exceeds samples per symbol");
    }
    // Highest subcarrier must stay below half the sample rate.
    if (2 * subcarriers * walsh_order >= samples_per_symbol()) {
        throw ConfigError("subcarrier " + std::to_string(subcarriers) + " at " +
                          std::to_string(subcarriers * walsh_order) + "/T_sym is above Nyquist for " +
                          std::to_string(samples_per_symbol()) + " samples per symbol; raise oversampling");
    }
}

UserSymbols::UserSymbols(int user, int substreams, int subcarriers, int slots)
    : user_(user), substreams_(substreams), subcarriers_(subcarriers), slots_(slots) {
    if (substreams < 1 || subcarriers < 1 || slots < 0) {
        throw DimensionError("UserSymbols needs R >= 1, M >= 1, slots >= 0");
    }
    values_.assign(static_cast<std::size_t>(substreams) * subcarriers * slots, 1);
}

void UserSymbols::set(int r, int m, int slot, int value) {
    if (value != 1 && value != -1) {
        throw DomainError("BPSK symbol must be +1 or -1, got " + std::to_string(value));
    }
    values_[index(r, m, slot)] = static_cast<std::int8_t>(value);
}

double BasebandFrame::mean_power() const {
    if (samples.empty()) {
        return 0.0;
    }
    double acc = 0.0;
    for (const auto& s : samples) {
        acc += std::norm(s);
    }
    return acc / static_cast<double>(samples.size());
}

std::vector<std::vector<int>> serial_to_parallel(std::span<const int> bits, int lanes) {
    if (lanes < 1) {
        throw DimensionError("lanes must be >= 1");
    }
    if (bits.size() % static_cast<std::size_t>(lanes) != 0) {
        throw DimensionError("stream of " + std::to_string(bits.size()) + " bits does not split into " +
                             std::to_string(lanes) + " lanes; pad the input");
    }
    const std::size_t depth = bits.size() / static_cast<std::size_t>(lanes);
    std::vector<std::vector<int>> out(static_cast<std::size_t>(lanes), std::vector<int>(depth));
    for (std::size_t i = 0; i < bits.size(); ++i) {
        out[i % static_cast<std::size_t>(lanes)][i / static_cast<std::size_t>(lanes)] = bits[i];
    }
    return out;
}

std::vector<int> parallel_to_serial(const std::vector<std::vector<int>>& lanes) {
    if (lanes.empty()) {
        return {};
    }
    const std::size_t depth = lanes.front().size();
    for (const auto& lane : lanes) {
        if (lane.size() != depth) {
            throw DimensionError("parallel_to_serial: ragged lanes");
        }
    }
    std::vector<int> out(depth * lanes.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = lanes[i % lanes.size()][i / lanes.size()];
    }
    return out;
}

UserSymbols split_user_bits(std::span<const int> bits, int user, const LinkConfig& config) {
    const int per_slot = config.bits_per_symbol();
    if (bits.size() % static_cast<std::size_t>(per_slot) != 0) {
        throw DimensionError("user stream length " + std::to_string(bits.size()) +
                             " is not a multiple of R*M = " + std::to_string(per_slot));
    }
    const int slots = static_cast<int>(bits.size()) / per_slot;
    UserSymbols symbols(user, config.substreams, config.subcarriers, slots);
    const auto substreams = serial_to_parallel(bits, config.substreams);
    for (int r = 0; r < config.substreams; ++r) {
        const auto carriers = serial_to_parallel(substreams[static_cast<std::size_t>(r)], config.subcarriers);
        for (int m = 0; m < config.subcarriers; ++m) {
            for (int s = 0; s < slots; ++s) {
                symbols.set(r, m, s, carriers[static_cast<std::size_t>(m)][static_cast<std::size_t>(s)]);
            }
        }
    }
    return symbols;
}

std::vector<int> merge_user_bits(const UserSymbols& symbols) {
    std::vector<std::vector<int>> substreams(static_cast<std::size_t>(symbols.substreams()));
    for (int r = 0; r < symbols.substreams(); ++r) {
        std::vector<std::vector<int>> carriers(static_cast<std::size_t>(symbols.subcarriers()));
        for (int m = 0; m < symbols.subcarriers(); ++m) {
            auto& lane = carriers[static_cast<std::size_t>(m)];
            lane.reserve(static_cast<std::size_t>(symbols.slots()));
            for (int s = 0; s < symbols.slots(); ++s) {
                lane.push_back(symbols.at(r, m, s));
            }
        }
        substreams[static_cast<std::size_t>(r)] = parallel_to_serial(carriers);
    }
    return parallel_to_serial(substreams);
}

std::vector<int> multicode_spread(std::span<const int> substream_symbols, const WalshMatrix& walsh) {
    const auto R = static_cast<int>(substream_symbols.size());
    if (R > walsh.order()) {
        throw DimensionError("R = " + std::to_string(R) + " substreams exceed Walsh order " +
                             std::to_string(walsh.order()));
    }
    std::vector<int> chips(static_cast<std::size_t>(walsh.order()), 0);
    for (int r = 0; r < R; ++r) {
        const int d = substream_symbols[static_cast<std::size_t>(r)];
        for (int n = 0; n < walsh.order(); ++n) {
            chips[static_cast<std::size_t>(n)] += d * walsh.at(r, n);
        }
    }
    return chips;
}

double subcarrier_frequency(int m, const LinkConfig& config) {
    if (m < 1 || m > config.subcarriers) {
        throw DimensionError("subcarrier index " + std::to_string(m) + " outside [1, " +
                             std::to_string(config.subcarriers) + "]");
    }
    return static_cast<double>(m) * config.walsh_order / config.symbol_duration;
}

Modulator::Modulator(const LinkConfig& config, WalshMatrix walsh) : config_(config), walsh_(std::move(walsh)) {
    config_.validate();
    if (walsh_.order() != config_.walsh_order) {
        throw DimensionError("Walsh order " + std::to_string(walsh_.order()) + " does not match config N_a = " +
                             std::to_string(config_.walsh_order));
    }
    const int S = config_.samples_per_symbol();
    const int M = config_.subcarriers;
    carriers_.resize(static_cast<std::size_t>(S) * M);
    walsh_chip_.resize(static_cast<std::size_t>(S));
    for (int i = 0; i < S; ++i) {
        for (int m = 0; m < M; ++m) {
            // f_m * t = (m+1) * N_a * i / S cycles; reduce the integer part before scaling.
            const long long cycles_num = static_cast<long long>(m + 1) * config_.walsh_order * i;
            const double frac = static_cast<double>(cycles_num % S) / S;
            carriers_[static_cast<std::size_t>(i * M + m)] = std::polar(1.0, 2.0 * std::numbers::pi * frac);
        }
        walsh_chip_[static_cast<std::size_t>(i)] =
            static_cast<int>(static_cast<long long>(i) * config_.walsh_order / S);
    }
}

void Modulator::check(const UserSymbols& symbols, const PnSequence& pn) const {
    if (symbols.substreams() != config_.substreams || symbols.subcarriers() != config_.subcarriers) {
        throw DimensionError("symbol matrix is " + std::to_string(symbols.substreams()) + "x" +
                             std::to_string(symbols.subcarriers()) + ", config expects " +
                             std::to_string(config_.substreams) + "x" + std::to_string(config_.subcarriers));
    }
    if (static_cast<int>(pn.length()) != config_.pn_length) {
        throw DimensionError("PN length " + std::to_string(pn.length()) + " does not match config N_c = " +
                             std::to_string(config_.pn_length));
    }
}

BasebandFrame Modulator::modulate(const UserSymbols& symbols, const PnSequence& pn) const {
    const std::vector<std::uint8_t> all(static_cast<std::size_t>(config_.substreams * config_.subcarriers), 1);
    return modulate_impl(symbols, pn, all);
}

BasebandFrame Modulator::modulate_impl(const UserSymbols& symbols, const PnSequence& pn,
                                       std::span<const std::uint8_t> mask) const {
    check(symbols, pn);
    const int S = config_.samples_per_symbol();
    const int M = config_.subcarriers;
    const int R = config_.substreams;
    const int Na = config_.walsh_order;
    const int Q = config_.oversampling;
    const double amplitude = std::sqrt(2.0 * config_.power);

    BasebandFrame frame;
    frame.sample_rate = config_.sample_rate();
    frame.samples.resize(static_cast<std::size_t>(S) * symbols.slots());

    // superstream[n * M + m] = sum_r d_rm a_r[n]
    std::vector<double> superstream(static_cast<std::size_t>(Na * M));
    for (int slot = 0; slot < symbols.slots(); ++slot) {
        std::fill(superstream.begin(), superstream.end(), 0.0);
        for (int m = 0; m < M; ++m) {
            for (int r = 0; r < R; ++r) {
                if (!mask[static_cast<std::size_t>(m * R + r)]) {
                    continue;
                }
                const int d = symbols.at(r, m, slot);
                for (int n = 0; n < Na; ++n) {
                    superstream[static_cast<std::size_t>(n * M + m)] += d * walsh_.at(r, n);
                }
            }
        }
        Sample* out = frame.samples.data() + static_cast<std::size_t>(slot) * S;
        for (int i = 0; i < S; ++i) {
            const double* b = superstream.data() + static_cast<std::size_t>(walsh_chip_[static_cast<std::size_t>(i)]) * M;
            const Sample* car = carriers_.data() + static_cast<std::size_t>(i) * M;
            double re = 0.0;
            double im = 0.0;
            for (int m = 0; m < M; ++m) {
                re += b[m] * car[m].real();
                im += b[m] * car[m].imag();
            }
            const double scale = amplitude * pn.chips[static_cast<std::size_t>(i / Q)];
            out[i] = Sample(scale * re, scale * im);
        }
    }
    return frame;
}

BasebandFrame modulate_user(const UserSymbols& symbols, const WalshMatrix& walsh, const PnSequence& pn,
                            const LinkConfig& config) {
    return Modulator(config, walsh).modulate(symbols, pn);
}

}  // namespace mccdma
