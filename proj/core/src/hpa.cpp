#include "mccdma/hpa.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <type_traits>

#include "mccdma/errors.hpp"

namespace mccdma {

namespace {

void check_modulus(double u, const char* what) {
    if (!std::isfinite(u) || u < 0.0) {
        throw DomainError(std::string(what) + ": modulus must be finite and >= 0, got " + std::to_string(u));
    }
}

// Taylor coefficients of cos and sin(x)/x in x^2: (-1)^k / (2k)! and (-1)^k / (2k+1)!.
constexpr auto kTaylor = [] {
    std::array<std::array<double, 2>, 10> t{};
    double f = 1.0;
    for (int k = 0; k < 10; ++k) {
        if (k > 0) f *= -1.0 / ((2.0 * k - 1.0) * (2.0 * k));
        t[static_cast<std::size_t>(k)] = {f, f / (2.0 * k + 1.0)};
    }
    return t;
}();

constexpr double kTaylorRange = 0.7853981633974483;

// cos and sin of phi with error below 1e-16 for |phi| <= pi/4.
inline void taylor_sincos(double phi, double& c, double& s) {
    const double p2 = phi * phi;
    c = kTaylor.back()[0];
    s = kTaylor.back()[1];
    for (std::size_t k = kTaylor.size() - 1; k-- > 0;) {
        c = c * p2 + kTaylor[k][0];
        s = s * p2 + kTaylor[k][1];
    }
    s *= phi;
}

// Largest |scale * x|^2 over the frame; rejects non-finite samples.
double peak_norm(const BasebandFrame& frame, double scale) {
    double peak = 0.0;
    for (const auto& v : frame.samples) {
        const double n = std::norm(v);
        if (!std::isfinite(n)) {
            throw DomainError("frame contains a non-finite sample");
        }
        peak = std::max(peak, n);
    }
    const double out = scale * scale * peak;
    if (!std::isfinite(out)) {
        throw DomainError("scaled frame is not finite");
    }
    return out;
}

// Upper bound of |Phi(u)| for u in [0, u_max].
double ampm_bound(double u_max, const SalehParams& p) {
    const double u = p.ampm_quadratic ? u_max : std::min(u_max, 1.0 / std::sqrt(p.beta_phi));
    return p.alpha_phi * (p.ampm_quadratic ? u * u : u) / (1.0 + p.beta_phi * u * u);
}

template <bool Taylor>
inline void phasor(double phi, double& c, double& s) {
    if constexpr (Taylor) {
        taylor_sincos(phi, c, s);
    } else {
        c = std::cos(phi);
        s = std::sin(phi);
    }
}

// A(u) e^{j Phi(u)} applied to the unit phasor x / u; A(u) / u has no pole at 0.
template <bool Taylor, bool Quad>
void hpa_kernel(const double* __restrict in, double* __restrict out, std::size_t n, double scale,
                const SalehParams& p) {
    const double aa = p.alpha_a;
    const double ba = p.beta_a;
    const double ap = p.alpha_phi;
    const double bp = p.beta_phi;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = scale * in[2 * i];
        const double xi = scale * in[2 * i + 1];
        const double u2 = xr * xr + xi * xi;
        const double gain = aa / (1.0 + ba * u2);
        const double phi = ap * (Quad ? u2 : std::sqrt(u2)) / (1.0 + bp * u2);
        double cs;
        double sn;
        phasor<Taylor>(phi, cs, sn);
        out[2 * i] = gain * (xr * cs - xi * sn);
        out[2 * i + 1] = gain * (xr * sn + xi * cs);
    }
}

// Multiplies by u / g, from the same root as pd_amplitude and finite at g = 0, then
// rotates by -Phi(u).
template <bool Taylor, bool Quad>
void pd_kernel(const double* __restrict in, double* __restrict out, std::size_t n, double scale,
               const SalehParams& p) {
    const double a = p.alpha_a;
    const double four_b = 4.0 * p.beta_a;
    const double g_sat = p.saturation_output();
    const double u_sat = p.saturation_input();
    const double ap = p.alpha_phi;
    const double bp = p.beta_phi;
    for (std::size_t i = 0; i < n; ++i) {
        const double sr = scale * in[2 * i];
        const double si = scale * in[2 * i + 1];
        const double g2 = sr * sr + si * si;
        const double g = std::sqrt(g2);
        const double clipped = u_sat / std::max(g, g_sat);
        const double rising = 2.0 / (a + std::sqrt(std::max(a * a - four_b * g2, 0.0)));
        const double ratio = g >= g_sat ? clipped : rising;
        const double u = ratio * g;
        const double u2 = u * u;
        const double phi = -ap * (Quad ? u2 : u) / (1.0 + bp * u2);
        double cs;
        double sn;
        phasor<Taylor>(phi, cs, sn);
        out[2 * i] = ratio * (sr * cs - si * sn);
        out[2 * i + 1] = ratio * (sr * sn + si * cs);
    }
}

// Calls f with the Taylor and quadratic AM/PM choices as compile-time constants.
template <typename F>
void dispatch(bool taylor, bool quad, F&& f) {
    if (taylor) {
        quad ? f(std::true_type{}, std::true_type{}) : f(std::true_type{}, std::false_type{});
    } else {
        quad ? f(std::false_type{}, std::true_type{}) : f(std::false_type{}, std::false_type{});
    }
}

// Interleaved re/im view; std::complex<double> guarantees this layout.
const double* flat(const BasebandFrame& f) { return reinterpret_cast<const double*>(f.samples.data()); }
double* flat(BasebandFrame& f) { return reinterpret_cast<double*>(f.samples.data()); }
}  // namespace

void SalehParams::validate() const {
    if (!(alpha_a > 0.0) || !(beta_a > 0.0) || !(alpha_phi > 0.0) || !(beta_phi > 0.0) ||
        !std::isfinite(alpha_a) || !std::isfinite(beta_a) || !std::isfinite(alpha_phi) || !std::isfinite(beta_phi)) {
        throw ConfigError("Saleh coefficients must all be positive and finite");
    }
}

double SalehParams::saturation_input() const { return 1.0 / std::sqrt(beta_a); }

double SalehParams::saturation_output() const { return alpha_a / (2.0 * std::sqrt(beta_a)); }

double SalehParams::max_output_power() const {
    const double g = saturation_output();
    return g * g;
}

std::string_view to_string(HpaMode mode) {
    switch (mode) {
        case HpaMode::bypass: return "bypass";
        case HpaMode::saleh: return "saleh";
        case HpaMode::saleh_pd: return "saleh+pd";
    }
    return "?";
}

HpaMode parse_hpa_mode(std::string_view text) {
    if (text == "bypass" || text == "linear") return HpaMode::bypass;
    if (text == "saleh") return HpaMode::saleh;
    if (text == "saleh+pd" || text == "saleh_pd") return HpaMode::saleh_pd;
    throw ConfigError("unknown HPA mode '" + std::string(text) + "' (expected bypass, saleh or saleh+pd)");
}

double amam(double u, const SalehParams& params) {
    check_modulus(u, "amam");
    return params.alpha_a * u / (1.0 + params.beta_a * u * u);
}

double ampm(double u, const SalehParams& params) {
    check_modulus(u, "ampm");
    const double num = params.ampm_quadratic ? u * u : u;
    return params.alpha_phi * num / (1.0 + params.beta_phi * u * u);
}

BasebandFrame apply_hpa(const BasebandFrame& frame, const SalehParams& params, const OperatingPoint& op) {
    BasebandFrame out;
    out.sample_rate = frame.sample_rate;
    out.t0 = frame.t0;
    out.samples.resize(frame.size());
    const double c = op.input_scale;
    const double u_max = std::sqrt(peak_norm(frame, c));
    dispatch(ampm_bound(u_max, params) <= kTaylorRange, params.ampm_quadratic, [&](auto taylor, auto quad) {
        hpa_kernel<decltype(taylor)::value, decltype(quad)::value>(flat(frame), flat(out), frame.size(), c, params);
    });
    return out;
}

OperatingPoint set_operating_point(const BasebandFrame& frame, double ibo_db, const SalehParams& params) {
    if (!std::isfinite(ibo_db)) {
        throw DomainError("IBO must be finite");
    }
    const double px = frame.mean_power();
    if (!(px > 0.0)) {
        throw DegenerateError("cannot set an operating point on a zero-power frame");
    }
    OperatingPoint op;
    op.ibo_db = ibo_db;
    op.p_max_in = params.max_input_power();
    op.input_scale = std::sqrt(op.p_max_in / (px * std::pow(10.0, ibo_db / 10.0)));
    return op;
}

double compute_obo(const BasebandFrame& frame_out, const SalehParams& params) {
    const double py = frame_out.mean_power();
    if (!(py > 0.0)) {
        throw DegenerateError("cannot compute OBO of a zero-power frame");
    }
    return 10.0 * std::log10(params.max_output_power() / py);
}

double pd_amplitude(double g, const SalehParams& params) {
    if (!std::isfinite(g) || g < 0.0) {
        throw DomainError("pd_amplitude: wanted modulus must be finite and >= 0, got " + std::to_string(g));
    }
    if (g == 0.0) {
        return 0.0;
    }
    if (g >= params.saturation_output()) {
        return params.saturation_input();
    }
    const double a = params.alpha_a;
    const double b = params.beta_a;
    const double disc = a * a - 4.0 * b * g * g;
    // Minus root written as 2g / (a + sqrt(disc)) to avoid cancellation at small g.
    return 2.0 * g / (a + std::sqrt(disc));
}

BasebandFrame apply_predistorter(const BasebandFrame& frame, const SalehParams& params, double input_scale) {
    if (!std::isfinite(input_scale) || input_scale < 0.0) {
        throw DomainError("apply_predistorter: input scale must be finite and >= 0");
    }
    BasebandFrame out;
    out.sample_rate = frame.sample_rate;
    out.t0 = frame.t0;
    out.samples.resize(frame.size());
    peak_norm(frame, input_scale);
    // Outputs never exceed the saturation input.
    dispatch(ampm_bound(params.saturation_input(), params) <= kTaylorRange, params.ampm_quadratic,
             [&](auto taylor, auto quad) {
                 pd_kernel<decltype(taylor)::value, decltype(quad)::value>(flat(frame), flat(out), frame.size(),
                                                                          input_scale, params);
             });
    return out;
}

}  // namespace mccdma
