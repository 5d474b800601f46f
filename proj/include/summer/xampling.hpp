#ifndef SUMMER_XAMPLING_HPP
#define SUMMER_XAMPLING_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "summer/config.hpp"
#include "summer/errors.hpp"
#include "summer/synthesis.hpp"

namespace summer {

/// Frame Fourier coefficients before matched filtering: page (c, p) holds
/// c_q^p at the global indices kappa_k + f_c tau, one row per kappa entry.
struct RawCoefficients {
    RadarConfig config;
    ChannelLayout layout;
    std::vector<Eigen::MatrixXcd> pages; // channels * pris, each K x Q

    Eigen::MatrixXcd& page(int c, int p) { return pages[std::size_t(c) * layout.pris + p]; }
    const Eigen::MatrixXcd& page(int c, int p) const {
        return pages[std::size_t(c) * layout.pris + p];
    }
};

/// Digital stand-in for the sub-Nyquist front end: trapezoidal quadrature of
/// (1/tau) int x_q(t) exp(-j 2 pi k t / tau) dt over each frame, at the MK
/// global Fourier indices covered by the transmitted bands.
inline RawCoefficients extract_coefficients(const TimeDomainRecord& record,
                                            const RadarConfig& cfg) {
    const ChannelLayout lay = effective_layout(cfg);
    const double span = (cfg.waveform.t_count + 1) * cfg.waveform.bandwidth_bh;
    if (record.sample_rate < span * (1.0 - 1e-12)) {
        throw acquisition_error("extract: sample rate below the transmitted frequency span");
    }
    if (int(record.rx.size()) != cfg.q_count()) {
        throw acquisition_error("extract: receiver count does not match configuration");
    }
    const int ns = record.samples_per_pri;
    if (ns < 2 || record.pris != lay.pris) {
        throw acquisition_error("extract: record does not cover the configured CPI");
    }

    RawCoefficients out;
    out.config = cfg;
    out.layout = lay;
    out.pages.assign(std::size_t(lay.channels) * lay.pris,
                     Eigen::MatrixXcd::Zero(cfg.k_count(), cfg.q_count()));

    const int total = ns * record.pris;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Eigen::VectorXcd basis(ns);
    for (int c = 0; c < lay.channels; ++c) {
        for (int k = 0; k < cfg.k_count(); ++k) {
            const long k_global = cfg.sampling.kappa[k] + lay.carrier_shift[c];
            for (int j = 0; j < ns; ++j) {
                basis(j) = std::polar(1.0, -two_pi * double(k_global) * j / double(ns));
            }
            for (int q = 0; q < cfg.q_count(); ++q) {
                const auto& samples = record.rx[q];
                for (int p = 0; p < lay.pris; ++p) {
                    const int at = p * ns;
                    // Composite trapezoid; the right endpoint is the next
                    // frame's first sample (zero beyond the CPI).
                    std::complex<double> acc =
                        0.5 * samples(at) * basis(0);
                    for (int j = 1; j < ns; ++j) acc += samples(at + j) * basis(j);
                    if (at + ns < total) acc += 0.5 * samples(at + ns) * basis(0);
                    out.page(c, p)(k, q) = acc / double(ns);
                }
            }
        }
    }
    return out;
}

/// Matched filter, band alignment and normalization: per band, multiply by
/// the conjugate pulse spectrum, divide by its squared modulus, shift to
/// baseband and compensate the known sub-pulse launch offset.
inline ChannelCoefficients matched_filter_align(const RawCoefficients& raw,
                                                const PulseSpec& pulse) {
    const RadarConfig& cfg = raw.config;
    const ChannelLayout& lay = raw.layout;
    const double tau = cfg.waveform.pri_tau;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    ChannelCoefficients out;
    out.config = cfg;
    out.layout = lay;
    out.pages.assign(raw.pages.size(), Eigen::MatrixXcd(cfg.k_count(), cfg.q_count()));

    std::vector<std::complex<double>> filt(cfg.k_count());
    double max_power = 0.0;
    for (int k = 0; k < cfg.k_count(); ++k) {
        filt[k] = pulse.spectrum(cfg.sampling.kappa[k] / tau);
        max_power = std::max(max_power, std::norm(filt[k]));
    }
    for (int k = 0; k < cfg.k_count(); ++k) {
        if (std::norm(filt[k]) < 1e-12 * max_power) {
            throw normalization_error("matched filter: vanishing spectrum on kappa");
        }
    }

    for (int c = 0; c < lay.channels; ++c) {
        const int sub = lay.sub_index(c);
        for (int p = 0; p < lay.pris; ++p) {
            const auto& src = raw.page(c, p);
            auto& dst = out.page(c, p);
            for (int k = 0; k < cfg.k_count(); ++k) {
                const long k_global = cfg.sampling.kappa[k] + lay.carrier_shift[c];
                std::complex<double> scale =
                    tau * std::conj(filt[k]) / std::norm(filt[k]);
                if (sub != 0) {
                    scale *= std::polar(1.0, two_pi * double(k_global) * sub /
                                                 double(lay.gamma));
                }
                dst.row(k) = scale * src.row(k);
            }
        }
    }
    return out;
}

} // namespace summer

#endif
