#pragma once

#include <string_view>

#include "mccdma/txchain.hpp"

namespace mccdma {

/// Saleh TWTA coefficients. With `ampm_quadratic` the phase curve uses the
/// classical u^2 numerator; otherwise alpha_phi * u / (1 + beta_phi * u^2).
struct SalehParams {
    double alpha_a = 2.1587;
    double beta_a = 1.1517;
    double alpha_phi = 4.0033;
    double beta_phi = 9.1040;
    bool ampm_quadratic = false;

    void validate() const;

    // Input modulus of the AM/AM peak, 1 / sqrt(beta_a).
    double saturation_input() const;
    // Peak output modulus alpha_a / (2 sqrt(beta_a)).
    double saturation_output() const;
    // P_maxin = 1 / beta_a and P_maxout = saturation_output()^2.
    double max_input_power() const { return 1.0 / beta_a; }
    double max_output_power() const;
};

struct OperatingPoint {
    double ibo_db = 0.0;
    double input_scale = 1.0;
    double p_max_in = 0.0;
};

enum class HpaMode { bypass, saleh, saleh_pd };

std::string_view to_string(HpaMode mode);
HpaMode parse_hpa_mode(std::string_view text);

double amam(double u, const SalehParams& params);
double ampm(double u, const SalehParams& params);

// Memoryless map on every sample: x = c * s, output A(|x|) exp(j(arg x + Phi(|x|))).
BasebandFrame apply_hpa(const BasebandFrame& frame, const SalehParams& params, const OperatingPoint& op);

// Input scale that places the frame's mean power ibo_db below P_maxin.
OperatingPoint set_operating_point(const BasebandFrame& frame, double ibo_db, const SalehParams& params);

// 10 log10(P_maxout / mean output power).
double compute_obo(const BasebandFrame& frame_out, const SalehParams& params);

/// Inverse of the AM/AM curve on its rising branch:
/// u = (alpha_a - sqrt(alpha_a^2 - 4 beta_a g^2)) / (2 beta_a g).
/// Moduli above the peak output clamp to the saturation input.
double pd_amplitude(double g, const SalehParams& params);

// Each sample's modulus is taken as the wanted HPA output modulus; the phase is
// pre-rotated by -Phi(u) so the amplifier's AM/PM cancels. Samples are multiplied
// by `input_scale` first.
BasebandFrame apply_predistorter(const BasebandFrame& frame, const SalehParams& params, double input_scale = 1.0);

}  // namespace mccdma
