// Tabulates the amplifier transfer curves and the predistorter residuals as long-format CSV.

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "mccdma/config.hpp"
#include "mccdma/errors.hpp"
#include "mccdma/hpa.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kIoError = 2;

std::string row(const char* curve, double x, double y) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g\n", curve, x, y);
    return buf;
}

std::string tabulate(const mccdma::SalehParams& p, int points) {
    std::string out = "curve,x,y\n";
    const double u_max = 3.0 * p.saturation_input();
    for (int i = 0; i < points; ++i) {
        const double u = u_max * i / (points - 1);
        out += row("am_am", u, mccdma::amam(u, p));
    }
    for (int i = 0; i < points; ++i) {
        const double u = u_max * i / (points - 1);
        out += row("am_pm", u, mccdma::ampm(u, p));
    }
    // Cascade residuals up to the peak output; beyond it the predistorter clamps.
    const double g_max = p.saturation_output();
    mccdma::BasebandFrame wanted;
    wanted.sample_rate = 1.0;
    for (int i = 0; i < points; ++i) {
        wanted.samples.emplace_back(g_max * i / (points - 1), 0.0);
    }
    const auto cascade =
        mccdma::apply_hpa(mccdma::apply_predistorter(wanted, p), p, {0.0, 1.0, p.max_input_power()});
    for (std::size_t i = 0; i < wanted.size(); ++i) {
        out += row("pd_amplitude_residual", wanted.samples[i].real(),
                   std::abs(cascade.samples[i]) - wanted.samples[i].real());
    }
    for (std::size_t i = 0; i < wanted.size(); ++i) {
        out += row("pd_phase_residual", wanted.samples[i].real(), std::arg(cascade.samples[i]));
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Saleh amplifier characterisation"};
    std::string params_path;
    std::string out_path;
    int points = 501;
    app.add_option("--params", params_path, "key=value amplifier coefficients")->required();
    app.add_option("--out", out_path, "CSV output path")->required();
    app.add_option("--points", points, "samples per curve")->check(CLI::Range(2, 1'000'000));
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    mccdma::SalehParams params;
    mccdma::apply_saleh_config(params, mccdma::load_config(params_path));
    const auto text = tabulate(params, points);

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw mccdma::IoError("cannot open " + out_path + " for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw mccdma::IoError("write to " + out_path + " failed");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mccdma::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIoError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    }
}
