#ifndef SUMMER_SYNTHESIS_HPP
#define SUMMER_SYNTHESIS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "summer/config.hpp"
#include "summer/errors.hpp"
#include "summer/rng.hpp"
#include "summer/scene.hpp"

namespace summer {

namespace detail {

/// Sine integral Si(x) = int_0^x sin(t)/t dt. Power series below 20,
/// asymptotic expansion above; absolute error around 1e-9 or better.
inline double sine_integral(double x) {
    const double ax = std::abs(x);
    double si;
    if (ax <= 20.0) {
        double term = ax;
        double sum = ax;
        for (int k = 0; k < 60; ++k) {
            const double n = 2.0 * k + 1.0;
            term *= -ax * ax * n / ((n + 2.0) * (n + 2.0) * (n + 1.0));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        si = sum;
    } else {
        double f = 0.0, g = 0.0, fterm = 1.0 / ax, gterm = 1.0 / (ax * ax);
        for (int k = 0; k < 12; ++k) {
            f += fterm;
            g += gterm;
            fterm *= -(2.0 * k + 1.0) * (2.0 * k + 2.0) / (ax * ax);
            gterm *= -(2.0 * k + 2.0) * (2.0 * k + 3.0) / (ax * ax);
            if (std::abs(fterm) < 1e-18) break;
        }
        si = 0.5 * std::numbers::pi - f * std::cos(ax) - g * std::sin(ax);
    }
    return x < 0.0 ? -si : si;
}

} // namespace detail

/// Baseband pulse with a nominally rectangular spectrum of width B_h: a sinc
/// envelope time-limited to [0, duration]. `spectrum` returns the exact
/// transform of the truncated pulse so matched-filter normalization stays
/// exact even at band-edge Fourier indices.
struct PulseSpec {
    double bandwidth = 0.0; // B_h, Hz
    double duration = 0.0;  // T_p, seconds

    double sample(double t) const {
        if (t < 0.0 || t > duration) return 0.0;
        const double u = std::numbers::pi * bandwidth * (t - 0.5 * duration);
        if (std::abs(u) < 1e-12) return bandwidth;
        return bandwidth * std::sin(u) / u;
    }

    std::complex<double> spectrum(double f) const {
        const double a = std::numbers::pi * duration * (0.5 * bandwidth + f);
        const double b = std::numbers::pi * duration * (0.5 * bandwidth - f);
        const double mag =
            (detail::sine_integral(a) + detail::sine_integral(b)) / std::numbers::pi;
        return std::polar(mag, -std::numbers::pi * f * duration);
    }
};

inline PulseSpec make_pulse(const WaveformParams& w, double duration_fraction = 0.25) {
    PulseSpec p;
    p.bandwidth = w.bandwidth_bh;
    p.duration = duration_fraction * w.pri_tau;
    if (!(p.duration > 0.0 && p.duration < w.pri_tau)) {
        throw config_error("pulse: duration must satisfy 0 < T_p < tau");
    }
    return p;
}

/// Normalized and aligned Fourier coefficients of every channel: page (c, p)
/// holds the K x Q matrix y_{c,q}^p[kappa_k]. The sole observable handed to
/// recovery.
struct ChannelCoefficients {
    RadarConfig config;
    ChannelLayout layout;
    std::vector<Eigen::MatrixXcd> pages; // layout.channels * layout.pris, each K x Q

    Eigen::MatrixXcd& page(int c, int p) { return pages[std::size_t(c) * layout.pris + p]; }
    const Eigen::MatrixXcd& page(int c, int p) const {
        return pages[std::size_t(c) * layout.pris + p];
    }
    long coefficient_count() const {
        return long(pages.size()) * config.k_count() * config.q_count();
    }
};

inline ChannelCoefficients zero_coefficients(const RadarConfig& cfg) {
    ChannelCoefficients out;
    out.config = cfg;
    out.layout = effective_layout(cfg);
    out.pages.assign(std::size_t(out.layout.channels) * out.layout.pris,
                     Eigen::MatrixXcd::Zero(cfg.k_count(), cfg.q_count()));
    return out;
}

/// Exact evaluation of the channel model for an on-grid scene: the (k, q)
/// entry of page (c, p) accumulates, over targets,
///   alpha * exp(+j 2 pi beta_cq theta) * exp(-j 2 pi (kappa_k / tau + f_c) tau_l)
///         * exp(+j 2 pi fD * t_pulse(c, p)).
inline ChannelCoefficients synthesize_coefficients(const TargetScene& scene,
                                                   const RadarConfig& cfg) {
    if (scene.dims.delay_bins != cfg.waveform.delay_bins() ||
        scene.dims.azimuth_bins != cfg.waveform.azimuth_bins() ||
        scene.dims.doppler_bins != cfg.waveform.pulses_p) {
        throw model_error("synthesis: scene grid does not match configuration");
    }
    validate(scene);
    ChannelCoefficients out = zero_coefficients(cfg);
    const auto& lay = out.layout;
    const int kc = cfg.k_count();
    const int qc = cfg.q_count();
    const double tau = cfg.waveform.pri_tau;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    Eigen::VectorXcd delay_vec(kc);
    Eigen::RowVectorXcd azi_vec(qc);
    for (const Target& t : scene.targets) {
        const double tau_l = grid_delay(t.delay_idx, scene.dims, cfg.waveform);
        const double theta = grid_azimuth_sine(t.azimuth_idx, scene.dims);
        const double doppler = grid_doppler(t.doppler_idx, scene.dims, cfg.waveform);
        for (int c = 0; c < lay.channels; ++c) {
            for (int k = 0; k < kc; ++k) {
                const double freq = cfg.sampling.kappa[k] / tau + lay.carrier[c];
                delay_vec(k) = std::polar(1.0, -two_pi * freq * tau_l);
            }
            for (int q = 0; q < qc; ++q) {
                azi_vec(q) = std::polar(1.0, two_pi * cfg.beta(c, q) * theta);
            }
            for (int p = 0; p < lay.pris; ++p) {
                const std::complex<double> coef =
                    t.amplitude * std::polar(1.0, two_pi * doppler * lay.pulse_time(c, p));
                out.page(c, p).noalias() += coef * delay_vec * azi_vec;
            }
        }
    }
    return out;
}

/// Per-coefficient complex noise variance realizing the selected SNR
/// definition. single_band references one transmission's power over N0 B_h;
/// cdma_equivalent references the M deployed transmitters' power over
/// N0 T B_h, making curves comparable across compression levels.
inline double coefficient_noise_variance(const RadarConfig& cfg, double snr_db) {
    const double s = std::pow(10.0, snr_db / 10.0);
    if (cfg.snr_definition == SnrDefinition::single_band) return 1.0 / s;
    return double(cfg.m_count()) / (double(cfg.waveform.t_count) * s);
}

/// Adds circularly-symmetric white Gaussian noise per coefficient. An
/// infinite snr_db leaves the data untouched. Deterministic per seed.
inline ChannelCoefficients add_noise(const ChannelCoefficients& coeffs, double snr_db,
                                     std::uint64_t seed) {
    ChannelCoefficients out = coeffs;
    if (std::isinf(snr_db) && snr_db > 0.0) return out;
    if (!std::isfinite(snr_db) ) {
        throw model_error("noise: snr_db must be finite or +inf");
    }
    const double sigma = std::sqrt(coefficient_noise_variance(coeffs.config, snr_db));
    Rng rng(derive_seed(seed, 0x6e6f697365ULL));
    for (auto& page : out.pages) {
        for (Eigen::Index col = 0; col < page.cols(); ++col) {
            for (Eigen::Index row = 0; row < page.rows(); ++row) {
                page(row, col) += sigma * rng.complex_gaussian();
            }
        }
    }
    return out;
}

/// Dense baseband samples of the received signal per receiver over [0, P tau).
struct TimeDomainRecord {
    double sample_rate = 0.0;
    int samples_per_pri = 0;
    int pris = 0;
    PulseSpec pulse;
    std::vector<Eigen::VectorXcd> rx; // one dense vector per receiver
};

/// Time-domain validation oracle: superposition of delayed, band-modulated
/// pulse echoes per channel. Requires tau_l + T_p to stay inside the frame
/// that launched the pulse (no range ambiguity).
inline TimeDomainRecord synthesize_time_domain(const TargetScene& scene, const RadarConfig& cfg,
                                               int oversample, const PulseSpec& pulse) {
    if (oversample < 1) throw acquisition_error("time synthesis: oversample must be >= 1");
    validate(scene);
    const ChannelLayout lay = effective_layout(cfg);
    const double tau = cfg.waveform.pri_tau;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    TimeDomainRecord rec;
    rec.pulse = pulse;
    rec.pris = lay.pris;
    rec.sample_rate = double(oversample) * (cfg.waveform.t_count + 1) * cfg.waveform.bandwidth_bh;
    rec.samples_per_pri = int(std::llround(rec.sample_rate * tau));
    const int total = rec.samples_per_pri * rec.pris;
    rec.rx.assign(cfg.q_count(), Eigen::VectorXcd::Zero(total));

    const double dt = 1.0 / rec.sample_rate;
    for (const Target& t : scene.targets) {
        const double tau_l = grid_delay(t.delay_idx, scene.dims, cfg.waveform);
        const double theta = grid_azimuth_sine(t.azimuth_idx, scene.dims);
        const double doppler = grid_doppler(t.doppler_idx, scene.dims, cfg.waveform);
        for (int c = 0; c < lay.channels; ++c) {
            const double sub_offset = lay.sub_index(c) * lay.sub_step();
            if (sub_offset + tau_l + pulse.duration >= tau) {
                throw model_error("time synthesis: echo crosses its frame boundary");
            }
            for (int p = 0; p < lay.pris; ++p) {
                const double launch = p * tau + sub_offset;
                const std::complex<double> gain =
                    t.amplitude * std::polar(1.0, two_pi * doppler * lay.pulse_time(c, p));
                const int j0 = std::max(0, int(std::ceil((launch + tau_l) / dt)));
                const int j1 =
                    std::min(total - 1, int(std::floor((launch + tau_l + pulse.duration) / dt)));
                for (int q = 0; q < cfg.q_count(); ++q) {
                    const std::complex<double> channel_gain =
                        gain * std::polar(1.0, two_pi * cfg.beta(c, q) * theta);
                    auto& samples = rec.rx[q];
                    for (int j = j0; j <= j1; ++j) {
                        const double u = j * dt - launch - tau_l;
                        samples(j) += channel_gain * pulse.sample(u) *
                                      std::polar(1.0, two_pi * lay.carrier[c] * u);
                    }
                }
            }
        }
    }
    return rec;
}

} // namespace summer

#endif
