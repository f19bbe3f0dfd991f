#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mccdma/receiver.hpp"

namespace mccdma {

enum class BerSource { monte_carlo, monte_carlo_censored, theoretical };

std::string_view to_string(BerSource source);
BerSource parse_ber_source(std::string_view text);

/// One point of a BER curve, measured or predicted.
struct BerRecord {
    std::string scenario;
    double ebn0_db = 0.0;
    int users = 0;
    int substreams = 0;
    int subcarriers = 0;
    std::string hpa_mode;
    double ibo_db = 0.0;
    std::int64_t bits = 0;
    std::int64_t errors = 0;
    double ber = 0.0;
    double ci95 = 0.0;  // half-width, binomial normal approximation
    BerSource source = BerSource::monte_carlo;
    std::uint64_t seed = 0;

    bool operator==(const BerRecord&) const = default;
};

// 1.96 * sqrt(p (1 - p) / n), zero for n == 0.
double binomial_ci95(std::int64_t errors, std::int64_t bits);

double erfc(double x);

// How gamma enters the complementary error function.
enum class ErfcArgument {
    sqrt_gamma,  // 0.5 erfc(sqrt(gamma)), matches coherent BPSK
    gamma,       // 0.5 erfc(gamma), literal reading
};

double conditional_ber(double gamma, ErfcArgument argument = ErfcArgument::sqrt_gamma);

/// Average of conditional_ber over an exponentially distributed gamma (Rayleigh
/// amplitude) with mean mean_gamma, by adaptive Simpson quadrature.
double fading_averaged_ber(double mean_gamma, ErfcArgument argument = ErfcArgument::sqrt_gamma);

// 0.5 (1 - sqrt(g / (1 + g))), the closed form of fading_averaged_ber under sqrt_gamma.
double rayleigh_bpsk_ber(double mean_gamma);

struct TheoryPoint {
    double ebn0_db = 0.0;
    InterferenceVariances variances;
    double signal = 0.0;  // S, in the same units as the variances
};

struct TheoryOptions {
    bool fading = false;
    ErfcArgument argument = ErfcArgument::sqrt_gamma;
    std::string scenario;
    int users = 0;
    int substreams = 0;
    int subcarriers = 0;
    std::string hpa_mode = "bypass";
    double ibo_db = 0.0;
    std::uint64_t seed = 0;
};

/// gamma = S / sigma^2_total at each point, then conditional or fading-averaged BER.
std::vector<BerRecord> theoretical_curve(std::span<const TheoryPoint> points, const TheoryOptions& options);

}  // namespace mccdma
