#include "mccdma/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mccdma/errors.hpp"

namespace mccdma {

std::string_view to_string(BerSource source) {
    switch (source) {
        case BerSource::monte_carlo: return "monte-carlo";
        case BerSource::monte_carlo_censored: return "monte-carlo-censored";
        case BerSource::theoretical: return "theoretical";
    }
    return "?";
}

BerSource parse_ber_source(std::string_view text) {
    if (text == "monte-carlo") return BerSource::monte_carlo;
    if (text == "monte-carlo-censored") return BerSource::monte_carlo_censored;
    if (text == "theoretical") return BerSource::theoretical;
    throw ConfigError("unknown BER source '" + std::string(text) + "'");
}

double binomial_ci95(std::int64_t errors, std::int64_t bits) {
    if (bits <= 0) {
        return 0.0;
    }
    const double p = static_cast<double>(errors) / static_cast<double>(bits);
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(bits));
}

double erfc(double x) { return std::erfc(x); }

double conditional_ber(double gamma, ErfcArgument argument) {
    if (std::isnan(gamma) || gamma < 0.0) {
        throw DomainError("gamma must be >= 0");
    }
    if (std::isinf(gamma)) {
        return 0.0;
    }
    return 0.5 * erfc(argument == ErfcArgument::sqrt_gamma ? std::sqrt(gamma) : gamma);
}

double rayleigh_bpsk_ber(double mean_gamma) {
    if (std::isnan(mean_gamma) || mean_gamma < 0.0) {
        throw DomainError("mean gamma must be >= 0");
    }
    return 0.5 * (1.0 - std::sqrt(mean_gamma / (1.0 + mean_gamma)));
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m,
                        double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    return adaptive_simpson(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 50);
}

}  // namespace

double fading_averaged_ber(double mean_gamma, ErfcArgument argument) {
    if (std::isnan(mean_gamma) || mean_gamma < 0.0) {
        throw DomainError("mean gamma must be >= 0");
    }
    if (mean_gamma == 0.0) {
        return 0.5;
    }
    // gamma = x^2 with density (2x / mean) exp(-x^2 / mean) dx on x >= 0; smooth at x = 0.
    // The conditional BER is below exp(-x^2), so both factors vanish beyond 8.5 min(1, sqrt(mean)).
    const auto integrand = [&](double x) {
        return 2.0 * x / mean_gamma * std::exp(-x * x / mean_gamma) * conditional_ber(x * x, argument);
    };
    const double upper = 8.5 * std::min(1.0, std::sqrt(mean_gamma));
    constexpr int kPanels = 64;
    double total = 0.0;
    for (int i = 0; i < kPanels; ++i) {
        total += integrate(integrand, upper * i / kPanels, upper * (i + 1) / kPanels, 1e-14);
    }
    return total;
}

std::vector<BerRecord> theoretical_curve(std::span<const TheoryPoint> points, const TheoryOptions& options) {
    std::vector<BerRecord> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        const double total = p.variances.total();
        double ber = 0.0;
        if (total > 0.0) {
            const double gamma = p.signal / total;
            ber = options.fading ? fading_averaged_ber(gamma, options.argument)
                                 : conditional_ber(gamma, options.argument);
        } else if (!(p.signal > 0.0)) {
            ber = 0.5;
        }
        BerRecord r;
        r.scenario = options.scenario;
        r.ebn0_db = p.ebn0_db;
        r.users = options.users;
        r.substreams = options.substreams;
        r.subcarriers = options.subcarriers;
        r.hpa_mode = options.hpa_mode;
        r.ibo_db = options.ibo_db;
        r.bits = 0;
        r.errors = 0;
        r.ber = ber;
        r.ci95 = 0.0;
        r.source = BerSource::theoretical;
        r.seed = options.seed;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace mccdma
