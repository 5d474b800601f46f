#ifndef SUMMER_CONFIG_HPP
#define SUMMER_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "summer/errors.hpp"
#include "summer/rng.hpp"

namespace summer {

constexpr double kSpeedOfLight = 299792458.0;

/// Pulse-train parameters plus the reference (uncompressed) array sizes.
struct WaveformParams {
    double pri_tau = 0.0;      // PRI, seconds
    double bandwidth_bh = 0.0; // single-transmission bandwidth, Hz
    double carrier_fc = 0.0;   // RF carrier, Hz
    int pulses_p = 1;          // pulses per CPI
    int n_nyquist = 0;         // N = tau * B_h, per-band Nyquist count
    int t_count = 1;           // reference transmitter count T
    int r_count = 1;           // reference receiver count R

    double wavelength() const { return kSpeedOfLight / carrier_fc; }
    int delay_bins() const { return t_count * n_nyquist; }   // TN
    int azimuth_bins() const { return t_count * r_count; }   // TR
};

inline WaveformParams make_waveform(double pri_tau, double bandwidth_bh, double carrier_fc,
                                    int pulses_p, int t_count, int r_count) {
    WaveformParams w;
    w.pri_tau = pri_tau;
    w.bandwidth_bh = bandwidth_bh;
    w.carrier_fc = carrier_fc;
    w.pulses_p = pulses_p;
    w.t_count = t_count;
    w.r_count = r_count;
    const double n = pri_tau * bandwidth_bh;
    w.n_nyquist = int(std::llround(n));
    if (pri_tau <= 0.0 || bandwidth_bh <= 0.0) {
        throw config_error("waveform: pri_tau and bandwidth_bh must be positive");
    }
    if (carrier_fc <= 0.0) {
        throw config_error("waveform.carrier_fc: must be positive");
    }
    if (w.n_nyquist < 1 || std::abs(n - double(w.n_nyquist)) > 1e-9 * n) {
        throw config_error("waveform: pri_tau * bandwidth_bh must be a positive integer");
    }
    if (pulses_p < 1) throw config_error("waveform.pulses_p: must be >= 1");
    if (t_count < 1) throw config_error("waveform.t_count: must be >= 1");
    if (r_count < 1) throw config_error("waveform.r_count: must be >= 1");
    return w;
}

/// Antenna positions in units of wavelength within the virtual aperture [0, Z].
struct ArrayGeometry {
    std::vector<double> tx_positions; // xi_m
    std::vector<double> rx_positions; // zeta_q
    double aperture_z = 0.0;          // Z = TR/2

    int m_count() const { return int(tx_positions.size()); }
    int q_count() const { return int(rx_positions.size()); }
};

/// Full virtual ULA: R receivers spaced 1/2, T transmitters spaced R/2.
inline ArrayGeometry build_virtual_ula(int t_count, int r_count) {
    if (t_count < 1 || r_count < 1) throw config_error("array: T and R must be >= 1");
    ArrayGeometry g;
    g.aperture_z = 0.5 * double(t_count) * double(r_count);
    g.rx_positions.resize(r_count);
    for (int q = 0; q < r_count; ++q) g.rx_positions[q] = 0.5 * q;
    g.tx_positions.resize(t_count);
    for (int m = 0; m < t_count; ++m) g.tx_positions[m] = 0.5 * double(m) * double(r_count);
    return g;
}

/// Thinned array: M + Q positions i.i.d. uniform on [0, Z], sorted ascending.
inline ArrayGeometry thin_array(int t_count, int r_count, int m_count, int q_count,
                                std::uint64_t seed) {
    if (m_count < 1 || q_count < 1) throw config_error("array: M and Q must be >= 1");
    if (m_count > t_count) throw config_error("array.m_count: M must not exceed T");
    if (q_count > r_count) throw config_error("array.q_count: Q must not exceed R");
    ArrayGeometry g;
    g.aperture_z = 0.5 * double(t_count) * double(r_count);
    Rng rng(derive_seed(seed, 0x6172726179ULL));
    g.tx_positions.resize(m_count);
    for (double& x : g.tx_positions) x = rng.uniform(0.0, g.aperture_z);
    g.rx_positions.resize(q_count);
    for (double& x : g.rx_positions) x = rng.uniform(0.0, g.aperture_z);
    std::sort(g.tx_positions.begin(), g.tx_positions.end());
    std::sort(g.rx_positions.begin(), g.rx_positions.end());
    return g;
}

/// FDMA carrier plan: f_m = (i_m - T/2) * B_h on the B_h grid, slots distinct.
struct CarrierPlan {
    std::vector<double> carriers; // Hz, one per transmit channel
    std::vector<int> grid_indices; // i_m in [0, T]

    int count() const { return int(carriers.size()); }
};

inline CarrierPlan carriers_from_grid_indices(int t_count, const std::vector<int>& slots,
                                              double bandwidth_bh) {
    CarrierPlan plan;
    plan.grid_indices = slots;
    plan.carriers.reserve(slots.size());
    std::vector<int> sorted = slots;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw config_error("carriers.grid_indices: slots must be distinct");
    }
    for (int i : slots) {
        if (i < 0 || i > t_count) {
            throw config_error("carriers.grid_indices: slot out of [0, T]");
        }
        plan.carriers.push_back((double(i) - 0.5 * double(t_count)) * bandwidth_bh);
    }
    return plan;
}

/// Draw `count` distinct carrier slots uniformly from the T+1 grid positions.
inline CarrierPlan assign_carriers(int t_count, int count, double bandwidth_bh,
                                   std::uint64_t seed) {
    if (count < 1) throw config_error("carriers: channel count must be >= 1");
    if (count > t_count + 1) {
        throw config_error("carriers: not enough distinct slots in [0, T]");
    }
    Rng rng(derive_seed(seed, 0x6361727269657273ULL));
    const auto picks = rng.sample_without_replacement(std::uint64_t(t_count) + 1, count);
    std::vector<int> slots(picks.begin(), picks.end());
    return carriers_from_grid_indices(t_count, slots, bandwidth_bh);
}

/// Selected Fourier indices kappa, distinct, in [-N/2, N/2 - 1], sorted.
struct SamplingPlan {
    std::vector<int> kappa;

    int k_count() const { return int(kappa.size()); }
};

inline SamplingPlan select_fourier_indices(int n_nyquist, int k_count, std::uint64_t seed) {
    if (k_count < 1) throw config_error("sampling.k_count: must be >= 1");
    if (k_count > n_nyquist) throw config_error("sampling.k_count: K must not exceed N");
    SamplingPlan plan;
    Rng rng(derive_seed(seed, 0x6b61707061ULL));
    const auto picks = rng.sample_without_replacement(std::uint64_t(n_nyquist), k_count);
    plan.kappa.reserve(k_count);
    for (auto p : picks) plan.kappa.push_back(int(p) - n_nyquist / 2);
    std::sort(plan.kappa.begin(), plan.kappa.end());
    return plan;
}

enum class SnrDefinition {
    single_band,     // signal power over N0 * B_h
    cdma_equivalent, // total transmit power over N0 * T * B_h
};

inline std::string to_string(SnrDefinition d) {
    return d == SnrDefinition::single_band ? "single_band" : "cdma_equivalent";
}

/// Complete radar system description; immutable after validation.
struct RadarConfig {
    WaveformParams waveform;
    ArrayGeometry geometry;
    CarrierPlan carriers;
    SamplingPlan sampling;
    int multi_carrier_gamma = 1; // 1 disables multi-carrier mode
    bool approximate_beta = false;
    SnrDefinition snr_definition = SnrDefinition::single_band;

    int m_count() const { return geometry.m_count(); }
    int q_count() const { return geometry.q_count(); }
    int k_count() const { return sampling.k_count(); }

    /// beta_mq for transmit channel `c` (carrier index) and receiver `q`.
    /// Channel c maps to physical transmitter c / gamma.
    double beta(int c, int q) const {
        const double pos = geometry.tx_positions[std::size_t(c) / multi_carrier_gamma] +
                           geometry.rx_positions[q];
        if (approximate_beta) return pos;
        return pos * (carriers.carriers[c] / waveform.carrier_fc + 1.0);
    }
};

inline void validate(const RadarConfig& cfg) {
    const auto& w = cfg.waveform;
    make_waveform(w.pri_tau, w.bandwidth_bh, w.carrier_fc, w.pulses_p, w.t_count, w.r_count);
    if (cfg.multi_carrier_gamma < 1) {
        throw config_error("mode.gamma: must be >= 1");
    }
    if (cfg.geometry.m_count() < 1 || cfg.geometry.q_count() < 1) {
        throw config_error("array: empty geometry");
    }
    if (cfg.geometry.m_count() > w.t_count) {
        throw config_error("array.m_count: M must not exceed T");
    }
    if (cfg.geometry.q_count() > w.r_count) {
        throw config_error("array.q_count: Q must not exceed R");
    }
    for (double x : cfg.geometry.tx_positions) {
        if (!(x >= 0.0 && x <= cfg.geometry.aperture_z)) {
            throw config_error("array.tx_positions: position outside [0, Z]");
        }
    }
    for (double x : cfg.geometry.rx_positions) {
        if (!(x >= 0.0 && x <= cfg.geometry.aperture_z)) {
            throw config_error("array.rx_positions: position outside [0, Z]");
        }
    }
    if (cfg.carriers.count() != cfg.geometry.m_count() * cfg.multi_carrier_gamma) {
        throw config_error("carriers: expected gamma * M carrier slots");
    }
    // Slots distinct and on-grid were checked at construction; recheck range.
    for (int i : cfg.carriers.grid_indices) {
        if (i < 0 || i > w.t_count) throw config_error("carriers.grid_indices: slot out of [0, T]");
    }
    if (cfg.sampling.k_count() < 1 || cfg.sampling.k_count() > w.n_nyquist) {
        throw config_error("sampling.k_count: K must be in [1, N]");
    }
    for (int k : cfg.sampling.kappa) {
        if (k < -w.n_nyquist / 2 || k >= w.n_nyquist - w.n_nyquist / 2) {
            throw config_error("sampling.kappa: index outside [-N/2, N/2 - 1]");
        }
    }
    std::vector<int> kap = cfg.sampling.kappa;
    std::sort(kap.begin(), kap.end());
    if (std::adjacent_find(kap.begin(), kap.end()) != kap.end()) {
        throw config_error("sampling.kappa: indices must be distinct");
    }
    // Carrier alignment shift f_m * tau must land on an integer Fourier index.
    for (double f : cfg.carriers.carriers) {
        const double shift = f * w.pri_tau;
        if (std::abs(shift - std::round(shift)) > 1e-6) {
            throw config_error("carriers: f_m * tau must be integral for band alignment");
        }
    }
}

/// Per-transmit-channel view used by synthesis, dictionaries and recovery.
/// Channel c = m * gamma + i is the i-th band of physical transmitter m; it
/// observes one pulse per PRI, launched at p * tau + i * tau / gamma. The
/// staggered sub-pulses extend the unambiguous Doppler span to gamma / tau,
/// so the Doppler grid has gamma * P bins at the usual 1 / (P tau) spacing.
struct ChannelLayout {
    int channels = 0;        // gamma * M
    int pris = 0;            // P, pulses observed per channel
    int gamma = 1;
    double pri = 0.0;        // tau, seconds
    std::vector<double> carrier;    // per channel, Hz
    std::vector<int> carrier_shift; // f_c * tau, integer Fourier index shift

    int sub_index(int c) const { return c % gamma; }
    double sub_step() const { return pri / double(gamma); }
    double pulse_time(int c, int p) const { return p * pri + sub_index(c) * sub_step(); }

    int doppler_bins() const { return gamma * pris; }
    double doppler_resolution() const { return 1.0 / (double(pris) * pri); }
    double doppler_freq(int j) const {
        return -0.5 * gamma / pri + double(j) * doppler_resolution();
    }
    /// Offset of the reference P-pulse Doppler grid inside this layout's grid.
    int doppler_offset() const { return (gamma - 1) * pris / 2; }
};

inline ChannelLayout effective_layout(const RadarConfig& cfg) {
    ChannelLayout lay;
    lay.gamma = cfg.multi_carrier_gamma;
    lay.channels = cfg.m_count() * lay.gamma;
    lay.pris = cfg.waveform.pulses_p;
    lay.pri = cfg.waveform.pri_tau;
    lay.carrier = cfg.carriers.carriers;
    lay.carrier_shift.reserve(lay.channels);
    for (double f : lay.carrier) {
        lay.carrier_shift.push_back(int(std::llround(f * cfg.waveform.pri_tau)));
    }
    return lay;
}

namespace detail {
inline void fnv_mix(std::uint64_t& h, const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
}
template <typename T> inline void fnv_value(std::uint64_t& h, const T& v) {
    fnv_mix(h, &v, sizeof(T));
}
} // namespace detail

/// Stable hash of every field of the configuration; identifies experiment
/// artifacts and manifests.
inline std::string fingerprint(const RadarConfig& cfg) {
    std::uint64_t h = 1469598103934665603ULL;
    detail::fnv_value(h, cfg.waveform.pri_tau);
    detail::fnv_value(h, cfg.waveform.bandwidth_bh);
    detail::fnv_value(h, cfg.waveform.carrier_fc);
    detail::fnv_value(h, cfg.waveform.pulses_p);
    detail::fnv_value(h, cfg.waveform.t_count);
    detail::fnv_value(h, cfg.waveform.r_count);
    for (double x : cfg.geometry.tx_positions) detail::fnv_value(h, x);
    for (double x : cfg.geometry.rx_positions) detail::fnv_value(h, x);
    detail::fnv_value(h, cfg.geometry.aperture_z);
    for (int i : cfg.carriers.grid_indices) detail::fnv_value(h, i);
    for (int k : cfg.sampling.kappa) detail::fnv_value(h, k);
    detail::fnv_value(h, cfg.multi_carrier_gamma);
    detail::fnv_value(h, cfg.approximate_beta);
    detail::fnv_value(h, int(cfg.snr_definition));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Report for the necessary noiseless-recovery conditions plus the minimal
/// antenna-count recommendation for a given target load.
struct RecoveryConditionReport {
    long mk = 0, mq = 0, p = 0;
    long required = 0; // 2L
    bool mk_ok = false, mq_ok = false, p_ok = false;
    std::vector<std::pair<int, int>> antenna_suggestion; // (M, Q), minimal M+Q
};

inline RecoveryConditionReport check_recovery_conditions(const RadarConfig& cfg, int l_targets) {
    RecoveryConditionReport rep;
    const ChannelLayout lay = effective_layout(cfg);
    rep.required = 2L * l_targets;
    rep.mk = long(lay.channels) * cfg.k_count();
    rep.mq = long(lay.channels) * cfg.q_count();
    rep.p = long(lay.gamma) * lay.pris;
    rep.mk_ok = rep.mk >= rep.required;
    rep.mq_ok = rep.mq >= rep.required;
    rep.p_ok = rep.p >= rep.required;

    const double root = std::sqrt(double(rep.required));
    const int lo = std::max(1, int(std::ceil(root - 1.0)));
    const int hi = std::max(lo, int(std::floor(root + 1.0)));
    int best = INT32_MAX;
    for (int m = lo; m <= hi; ++m) {
        for (int q = lo; q <= hi; ++q) {
            if (long(m) * q < rep.required) continue;
            if (m + q < best) {
                best = m + q;
                rep.antenna_suggestion.clear();
            }
            if (m + q == best) rep.antenna_suggestion.emplace_back(m, q);
        }
    }
    return rep;
}

} // namespace summer

#endif
