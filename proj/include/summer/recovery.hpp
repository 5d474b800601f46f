#ifndef SUMMER_RECOVERY_HPP
#define SUMMER_RECOVERY_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "summer/config.hpp"
#include "summer/dictionaries.hpp"
#include "summer/errors.hpp"
#include "summer/scene.hpp"
#include "summer/synthesis.hpp"
#include "summer/xampling.hpp"

namespace summer {

/// Recovered support entry on the recovery grid. In multi-carrier mode the
/// Doppler axis spans gamma * P bins; doppler_offset of the owning map gives
/// the position of the reference P-bin grid inside it.
struct SparseEntry {
    int delay_idx = 0;
    int azimuth_idx = 0;
    int doppler_idx = 0;
    std::complex<double> amplitude{0.0, 0.0};
    int iteration = 0;
};

struct SparseTargetMap {
    std::vector<SparseEntry> entries;
    GridDims dims;                      // recovery grid (TN, TR, doppler bins)
    int doppler_offset = 0;             // reference grid offset inside dims
    bool stopped_early = false;
    std::vector<double> residual_norms; // ||vec(R_t)|| after each iteration
};

struct RecoveredTarget {
    double delay_s = 0.0;
    double azimuth_sine = 0.0;
    double doppler_hz = 0.0;
    std::complex<double> amplitude{0.0, 0.0};
};

struct RecoveredTargets {
    std::vector<RecoveredTarget> targets;
};

struct RecoveryOptions {
    bool residual_stop = false; // optional unknown-L stopping rule
    double residual_eta = 1e-8; // stop when ||R|| <= eta * ||Y||
};

namespace detail {

// Deterministic argmax over |values| skipping already-selected cells; ties
// resolve to the smallest linear index (s, then r, then u significance).
struct ArgMax {
    double best = -1.0;
    long linear = -1;
    int s = 0, r = 0, u = 0;

    void consider(double v, int si, int ri, int ui, long lin) {
        if (v > best) {
            best = v;
            linear = lin;
            s = si;
            r = ri;
            u = ui;
        }
    }
};

inline void check_monotone(std::vector<double>& norms, double value) {
    if (!norms.empty() && value > norms.back() * (1.0 + 1e-9) + 1e-12) {
        throw recovery_error("recovery: residual norm increased");
    }
    norms.push_back(value);
}

// Joint least-squares refit over the selected atom columns; throws on a
// rank-deficient atom system instead of silently regularizing.
inline Eigen::VectorXcd solve_amplitudes(const Eigen::MatrixXcd& atoms,
                                         const Eigen::VectorXcd& data) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(atoms);
    qr.setThreshold(1e-12);
    if (qr.rank() < atoms.cols()) {
        throw recovery_error("recovery: ill-posed support, atom system is rank deficient");
    }
    return qr.solve(data);
}

} // namespace detail

/// OMP over the M simultaneous matrix equations Y^m = A^m X (B^m)^H for a
/// single pulse. Runs exactly `l_targets` iterations (known-L stopping) with
/// a joint least-squares amplitude refit against vec(Y) each iteration.
/// Projection convention: Psi = sum_m (A^m)^H R^m B^m, which peaks at the
/// true cell for noiseless single-atom data.
inline SparseTargetMap omp_matrix(const std::vector<Eigen::MatrixXcd>& observations,
                                  const DictionarySet& dict, int l_targets,
                                  const RecoveryOptions& opts = {}) {
    const int channels = dict.channels();
    if (int(observations.size()) != channels || channels == 0) {
        throw model_error("omp: observation count does not match dictionary channels");
    }
    const int kc = int(dict.A[0].rows());
    const int qc = int(dict.B[0].rows());
    const int tn = int(dict.A[0].cols());
    const int tr = int(dict.B[0].cols());
    for (const auto& y : observations) {
        if (y.rows() != kc || y.cols() != qc) {
            throw model_error("omp: observation dimensions do not match dictionary");
        }
    }
    const long page = long(kc) * qc;
    Eigen::VectorXcd data(page * channels);
    for (int c = 0; c < channels; ++c) {
        data.segment(c * page, page) =
            Eigen::Map<const Eigen::VectorXcd>(observations[c].data(), page);
    }
    const double data_norm = data.norm();

    SparseTargetMap map;
    map.dims = {tn, tr, 1};
    std::vector<Eigen::MatrixXcd> residual = observations;
    std::vector<char> selected(std::size_t(tn) * tr, 0);
    Eigen::MatrixXcd atoms(data.size(), 0);
    Eigen::MatrixXcd psi(tn, tr);

    for (int t = 0; t < l_targets; ++t) {
        psi.setZero();
        for (int c = 0; c < channels; ++c) {
            psi.noalias() += dict.A[c].adjoint() * residual[c] * dict.B[c];
        }
        detail::ArgMax pick;
        for (int r = 0; r < tr; ++r) {
            for (int s = 0; s < tn; ++s) {
                const long lin = s + long(r) * tn;
                if (selected[lin]) continue;
                pick.consider(std::abs(psi(s, r)), s, r, 0, lin);
            }
        }
        if (pick.linear < 0) break; // grid exhausted
        selected[pick.linear] = 1;
        map.entries.push_back({pick.s, pick.r, 0, {0.0, 0.0}, t + 1});

        atoms.conservativeResize(Eigen::NoChange, t + 1);
        for (int c = 0; c < channels; ++c) {
            const Eigen::MatrixXcd outer =
                dict.A[c].col(pick.s) * dict.B[c].col(pick.r).conjugate().transpose();
            atoms.col(t).segment(c * page, page) =
                Eigen::Map<const Eigen::VectorXcd>(outer.data(), page);
        }
        const Eigen::VectorXcd alpha = detail::solve_amplitudes(atoms, data);
        for (int l = 0; l <= t; ++l) map.entries[l].amplitude = alpha(l);

        const Eigen::VectorXcd res_vec = data - atoms * alpha;
        for (int c = 0; c < channels; ++c) {
            residual[c] = Eigen::Map<const Eigen::MatrixXcd>(res_vec.data() + c * page, kc, qc);
        }
        detail::check_monotone(map.residual_norms, res_vec.norm());
        if (opts.residual_stop && res_vec.norm() <= opts.residual_eta * data_norm) {
            map.stopped_early = true;
            break;
        }
    }
    return map;
}

/// Doppler-focused coefficients: page (c, j) = sum_p y^p_c conj(d_j(c, p))
/// where d_j is the pulse phase of Doppler bin j on the layout grid. Computed
/// with an FFT along the pulse axis.
struct FocusedCoefficients {
    ChannelLayout layout;
    int k_count = 0, q_count = 0;
    std::vector<Eigen::MatrixXcd> pages; // channels * doppler_bins, each K x Q

    Eigen::MatrixXcd& page(int c, int j) {
        return pages[std::size_t(c) * layout.doppler_bins() + j];
    }
    const Eigen::MatrixXcd& page(int c, int j) const {
        return pages[std::size_t(c) * layout.doppler_bins() + j];
    }
};

inline FocusedCoefficients doppler_focus(const ChannelCoefficients& coeffs) {
    const ChannelLayout& lay = coeffs.layout;
    const int pris = lay.pris;
    const int bins = lay.doppler_bins();
    const int kc = coeffs.config.k_count();
    const int qc = coeffs.config.q_count();
    constexpr double two_pi = 2.0 * std::numbers::pi;

    FocusedCoefficients out;
    out.layout = lay;
    out.k_count = kc;
    out.q_count = qc;
    out.pages.assign(std::size_t(lay.channels) * bins, Eigen::MatrixXcd::Zero(kc, qc));

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> series(pris), spectrum(pris);
    for (int c = 0; c < lay.channels; ++c) {
        const int sub = lay.sub_index(c);
        for (int q = 0; q < qc; ++q) {
            for (int k = 0; k < kc; ++k) {
                for (int p = 0; p < pris; ++p) {
                    // (-1)^(gamma p) centers the Doppler grid.
                    const double sign = (long(lay.gamma) * p) % 2 == 0 ? 1.0 : -1.0;
                    series[p] = sign * coeffs.page(c, p)(k, q);
                }
                fft.fwd(spectrum, series);
                for (int j = 0; j < bins; ++j) {
                    const std::complex<double> offset =
                        sub == 0 ? std::complex<double>(1.0, 0.0)
                                 : std::polar(1.0, std::numbers::pi * sub -
                                                       two_pi * double(j) * sub /
                                                           double(bins));
                    out.page(c, j)(k, q) = offset * spectrum[j % pris];
                }
            }
        }
    }
    return out;
}

namespace detail {

// Cached cross-gram columns used by the incremental projection update.
struct GramCache {
    const DictionarySet* dict = nullptr;
    std::vector<Eigen::MatrixXcd> gram_b; // per channel, TR x TR
    std::map<std::pair<int, int>, Eigen::VectorXcd> a_cols; // (c, s) -> A^H a_s

    void init(const DictionarySet& d) {
        dict = &d;
        gram_b.reserve(d.channels());
        for (int c = 0; c < d.channels(); ++c) {
            gram_b.push_back(d.B[c].adjoint() * d.B[c]);
        }
    }
    const Eigen::VectorXcd& a_col(int c, int s) {
        auto it = a_cols.find({c, s});
        if (it == a_cols.end()) {
            it = a_cols.emplace(std::make_pair(c, s),
                                (dict->A[c].adjoint() * dict->A[c].col(s)).eval())
                     .first;
        }
        return it->second;
    }
};

} // namespace detail

/// OMP for simultaneous 3D recovery with Doppler focusing (the multi-pulse
/// path). Each iteration focuses the data-domain residuals, projects every
/// focused slice onto the dictionaries, picks the strongest
/// (delay, azimuth, Doppler) cell, refits all amplitudes jointly against
/// vec(Z) and recomputes the residuals. The focused projections are updated
/// incrementally: an on-grid atom only touches the Doppler slices congruent
/// to its own bin modulo P.
inline SparseTargetMap omp_focus_3d(const ChannelCoefficients& data, const DictionarySet& dict,
                                    int l_targets, const RecoveryOptions& opts = {}) {
    const ChannelLayout& lay = data.layout;
    const int channels = lay.channels;
    if (dict.channels() != channels) {
        throw model_error("omp3d: dictionary channels do not match data");
    }
    const int kc = data.config.k_count();
    const int qc = data.config.q_count();
    const int tn = int(dict.A[0].cols());
    const int tr = int(dict.B[0].cols());
    const int pris = lay.pris;
    const int bins = lay.doppler_bins();
    constexpr double two_pi = 2.0 * std::numbers::pi;

    // vec(Z): channel-major, then pulse, column-major pages.
    const long page = long(kc) * qc;
    Eigen::VectorXcd vec_z(page * channels * pris);
    for (int c = 0; c < channels; ++c) {
        for (int p = 0; p < pris; ++p) {
            vec_z.segment((long(c) * pris + p) * page, page) =
                Eigen::Map<const Eigen::VectorXcd>(data.page(c, p).data(), page);
        }
    }
    const double data_norm = vec_z.norm();

    // Initial focused projections Psi0[j] = sum_c A_c^H Phi0(c, j) B_c.
    const FocusedCoefficients phi0 = doppler_focus(data);
    std::vector<Eigen::MatrixXcd> psi0(bins, Eigen::MatrixXcd::Zero(tn, tr));
    for (int c = 0; c < channels; ++c) {
        for (int j = 0; j < bins; ++j) {
            psi0[j].noalias() += dict.A[c].adjoint() * phi0.page(c, j) * dict.B[c];
        }
    }

    SparseTargetMap map;
    map.dims = {tn, tr, bins};
    map.doppler_offset = lay.doppler_offset();

    detail::GramCache grams;
    grams.init(dict);
    std::vector<char> selected(std::size_t(tn) * tr * bins, 0);
    Eigen::MatrixXcd atoms(vec_z.size(), 0);
    Eigen::VectorXcd alpha;
    std::vector<Eigen::MatrixXcd> psi = psi0;

    for (int t = 0; t < l_targets; ++t) {
        if (t > 0) {
            // psi = psi0 - sum_l alpha_l * (projection of atom l).
            psi = psi0;
            for (std::size_t l = 0; l < map.entries.size(); ++l) {
                const SparseEntry& e = map.entries[l];
                for (int d = 0; d < lay.gamma; ++d) {
                    const int j = e.doppler_idx % pris + d * pris;
                    const int dd = (e.doppler_idx - j) / pris;
                    for (int c = 0; c < channels; ++c) {
                        const std::complex<double> factor =
                            std::polar(double(pris),
                                       two_pi * double(dd) * lay.sub_index(c) /
                                           double(lay.gamma));
                        psi[j].noalias() -= alpha(l) * factor *
                                            grams.a_col(c, e.delay_idx) *
                                            grams.gram_b[c].row(e.azimuth_idx);
                    }
                }
            }
        }

        detail::ArgMax pick;
        for (int j = 0; j < bins; ++j) {
            const long base = long(j) * tn * tr;
            for (int r = 0; r < tr; ++r) {
                for (int s = 0; s < tn; ++s) {
                    const long lin = base + long(r) * tn + s;
                    if (selected[lin]) continue;
                    pick.consider(std::abs(psi[j](s, r)), s, r, j, lin);
                }
            }
        }
        if (pick.linear < 0) break;
        selected[pick.linear] = 1;
        map.entries.push_back({pick.s, pick.r, pick.u, {0.0, 0.0}, t + 1});

        atoms.conservativeResize(Eigen::NoChange, t + 1);
        const double nu = lay.doppler_freq(pick.u);
        for (int c = 0; c < channels; ++c) {
            const Eigen::MatrixXcd outer =
                dict.A[c].col(pick.s) * dict.B[c].col(pick.r).conjugate().transpose();
            const Eigen::Map<const Eigen::VectorXcd> outer_vec(outer.data(), page);
            for (int p = 0; p < pris; ++p) {
                atoms.col(t).segment((long(c) * pris + p) * page, page) =
                    std::polar(1.0, two_pi * nu * lay.pulse_time(c, p)) * outer_vec;
            }
        }
        alpha = detail::solve_amplitudes(atoms, vec_z);
        for (int l = 0; l <= t; ++l) map.entries[l].amplitude = alpha(l);

        const double res_norm = (vec_z - atoms * alpha).norm();
        detail::check_monotone(map.residual_norms, res_norm);
        if (opts.residual_stop && res_norm <= opts.residual_eta * data_norm) {
            map.stopped_early = true;
            break;
        }
    }
    return map;
}

/// Physical parameters of the recovered support on the recovery grid.
inline RecoveredTargets estimate_params(const SparseTargetMap& map, const RadarConfig& cfg) {
    const ChannelLayout lay = effective_layout(cfg);
    RecoveredTargets out;
    out.targets.reserve(map.entries.size());
    for (const SparseEntry& e : map.entries) {
        RecoveredTarget t;
        t.delay_s = cfg.waveform.pri_tau * double(e.delay_idx) / double(map.dims.delay_bins);
        t.azimuth_sine = -1.0 + 2.0 * double(e.azimuth_idx) / double(map.dims.azimuth_bins);
        t.doppler_hz = map.dims.doppler_bins == 1 ? -0.5 / cfg.waveform.pri_tau
                                                  : lay.doppler_freq(e.doppler_idx);
        t.amplitude = e.amplitude;
        out.targets.push_back(t);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Classic Nyquist MIMO baselines
// ---------------------------------------------------------------------------

/// Idealized code-division channel data: every (m, q) pair is separated
/// perfectly by construction and observes the full T B_h bandwidth, i.e. TN
/// Fourier coefficients per pulse at resolution 1 / (T B_h).
struct CdmaCoefficients {
    RadarConfig config;
    std::vector<Eigen::MatrixXcd> pages; // per pulse, TN x (M * Q)
};

inline CdmaCoefficients synthesize_cdma_coefficients(const TargetScene& scene,
                                                     const RadarConfig& cfg) {
    if (scene.dims.delay_bins != cfg.waveform.delay_bins() ||
        scene.dims.azimuth_bins != cfg.waveform.azimuth_bins() ||
        scene.dims.doppler_bins != cfg.waveform.pulses_p) {
        throw model_error("cdma synthesis: scene grid does not match configuration");
    }
    validate(scene);
    const int tn = cfg.waveform.delay_bins();
    const int mc = cfg.m_count();
    const int qc = cfg.q_count();
    const int pc = cfg.waveform.pulses_p;
    const double tau = cfg.waveform.pri_tau;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    CdmaCoefficients out;
    out.config = cfg;
    out.pages.assign(pc, Eigen::MatrixXcd::Zero(tn, mc * qc));
    Eigen::VectorXcd delay_vec(tn);
    for (const Target& t : scene.targets) {
        const double tau_l = grid_delay(t.delay_idx, scene.dims, cfg.waveform);
        const double theta = grid_azimuth_sine(t.azimuth_idx, scene.dims);
        const double doppler = grid_doppler(t.doppler_idx, scene.dims, cfg.waveform);
        for (int kk = 0; kk < tn; ++kk) {
            delay_vec(kk) = std::polar(1.0, -two_pi * double(kk - tn / 2) * tau_l / tau);
        }
        for (int m = 0; m < mc; ++m) {
            for (int q = 0; q < qc; ++q) {
                const double pos = cfg.geometry.tx_positions[m] + cfg.geometry.rx_positions[q];
                const std::complex<double> steer = std::polar(1.0, two_pi * pos * theta);
                for (int p = 0; p < pc; ++p) {
                    const std::complex<double> gain =
                        t.amplitude * steer * std::polar(1.0, two_pi * doppler * p * tau);
                    out.pages[p].col(m * qc + q) += gain * delay_vec;
                }
            }
        }
    }
    return out;
}

/// Noise for the classic baseline. Each full-bandwidth coefficient carries
/// T times the per-coefficient variance of a single-band coefficient at the
/// same SNR (bandwidth ratio of the matched filters).
inline CdmaCoefficients add_noise(const CdmaCoefficients& coeffs, double snr_db,
                                  std::uint64_t seed) {
    CdmaCoefficients out = coeffs;
    if (std::isinf(snr_db) && snr_db > 0.0) return out;
    const double sigma = std::sqrt(double(coeffs.config.waveform.t_count) *
                                   coefficient_noise_variance(coeffs.config, snr_db));
    Rng rng(derive_seed(seed, 0x636c6e6f697365ULL));
    for (auto& pg : out.pages) {
        for (Eigen::Index col = 0; col < pg.cols(); ++col) {
            for (Eigen::Index row = 0; row < pg.rows(); ++row) {
                pg(row, col) += sigma * rng.complex_gaussian();
            }
        }
    }
    return out;
}

/// Five-stage classic processing of the idealized code-division data:
/// matched filtering (the coefficients are already normalized), a delay
/// transform to TN range bins, beamforming over the TR azimuth grid, a
/// Doppler transform over pulses, and top-L peak selection.
inline SparseTargetMap classic_process_cdma(const CdmaCoefficients& data, int l_targets) {
    const RadarConfig& cfg = data.config;
    const int tn = cfg.waveform.delay_bins();
    const int tr = cfg.waveform.azimuth_bins();
    const int mc = cfg.m_count();
    const int qc = cfg.q_count();
    const int pc = cfg.waveform.pulses_p;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    // Steering matrix over the azimuth grid, conjugated at correlation time.
    Eigen::MatrixXcd steer(mc * qc, tr);
    for (int m = 0; m < mc; ++m) {
        for (int q = 0; q < qc; ++q) {
            const double pos = cfg.geometry.tx_positions[m] + cfg.geometry.rx_positions[q];
            for (int r = 0; r < tr; ++r) {
                const double theta = -1.0 + 2.0 * double(r) / double(tr);
                steer(m * qc + q, r) = std::polar(1.0, two_pi * pos * theta);
            }
        }
    }

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> col(tn), prof(tn);
    std::vector<Eigen::MatrixXcd> beamformed(pc); // TN x TR per pulse
    for (int p = 0; p < pc; ++p) {
        Eigen::MatrixXcd profiles(tn, mc * qc);
        for (int ch = 0; ch < mc * qc; ++ch) {
            for (int kk = 0; kk < tn; ++kk) col[kk] = data.pages[p](kk, ch);
            fft.inv(prof, col);
            for (int s = 0; s < tn; ++s) {
                const double sign = s % 2 == 0 ? 1.0 : -1.0; // index origin at -TN/2
                profiles(s, ch) = sign * double(tn) * prof[s];
            }
        }
        beamformed[p].noalias() = profiles * steer.conjugate();
    }

    SparseTargetMap map;
    map.dims = {tn, tr, pc};
    // Doppler correlation and top-L selection on the |.| map.
    std::vector<std::pair<double, long>> peaks;
    peaks.reserve(std::size_t(tn) * tr);
    Eigen::VectorXcd doppler_steer(pc);
    std::vector<double> mag(std::size_t(tn) * tr * pc);
    for (int u = 0; u < pc; ++u) {
        for (int p = 0; p < pc; ++p) {
            const double sign = p % 2 == 0 ? 1.0 : -1.0;
            doppler_steer(p) = sign * std::polar(1.0, -two_pi * double(u) * p / double(pc));
        }
        for (int r = 0; r < tr; ++r) {
            for (int s = 0; s < tn; ++s) {
                std::complex<double> acc{0.0, 0.0};
                for (int p = 0; p < pc; ++p) acc += beamformed[p](s, r) * doppler_steer(p);
                mag[(std::size_t(u) * tr + r) * tn + s] = std::abs(acc);
            }
        }
    }
    std::vector<char> taken(mag.size(), 0);
    const double norm = double(tn) * mc * qc * pc;
    for (int t = 0; t < l_targets; ++t) {
        detail::ArgMax pick;
        for (int u = 0; u < pc; ++u) {
            for (int r = 0; r < tr; ++r) {
                for (int s = 0; s < tn; ++s) {
                    const long lin = (long(u) * tr + r) * tn + s;
                    if (taken[lin]) continue;
                    pick.consider(mag[lin], s, r, u, lin);
                }
            }
        }
        if (pick.linear < 0) break;
        taken[pick.linear] = 1;
        map.entries.push_back(
            {pick.s, pick.r, pick.u, std::complex<double>(pick.best / norm, 0.0), t + 1});
    }
    return map;
}

/// Literal five-stage classic pipeline on an FDMA record sampled at the full
/// Nyquist rate: per-waveform matched filter at resolution 1/B_h (N range
/// bins per channel), beamforming over the TR azimuth grid, Doppler
/// correlation over pulses and top-L selection. Per-channel range profiles
/// keep the carrier-delay phase of the sub-bin offset, which is what couples
/// range and azimuth for FDMA. Delay indices are reported on the TN grid
/// (bin centers, stride T).
inline SparseTargetMap classic_process(const TimeDomainRecord& record, const RadarConfig& cfg,
                                       int l_targets) {
    if (cfg.multi_carrier_gamma != 1) {
        throw model_error("classic: multi-carrier transmission is not a classic mode");
    }
    // Stage 1 is the record itself. Use all N per-band indices (Nyquist).
    RadarConfig full = cfg;
    full.sampling.kappa.clear();
    const int n = cfg.waveform.n_nyquist;
    for (int k = -n / 2; k < n - n / 2; ++k) full.sampling.kappa.push_back(k);

    // Stage 2: matched filter per waveform; N-bin range profiles per channel
    // with the known coarse-bin carrier phase compensated. The sub-bin
    // carrier-delay phase survives, which couples range and azimuth.
    const ChannelCoefficients y = matched_filter_align(extract_coefficients(record, full),
                                                       record.pulse);
    const ChannelLayout& lay = y.layout;
    const int qc = cfg.q_count();
    const int tr = cfg.waveform.azimuth_bins();
    const int tn = cfg.waveform.delay_bins();
    const int pc = lay.pris;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    Eigen::MatrixXcd idft(n, n);
    for (int k = 0; k < n; ++k) {
        for (int s = 0; s < n; ++s) {
            idft(s, k) = std::polar(1.0, two_pi * double(k - n / 2) * s / double(n));
        }
    }
    const DictionarySet dict = build_dictionaries(full);

    // Stages 3-4: beamforming over the azimuth grid, then Doppler
    // correlation over pulses.
    std::vector<Eigen::MatrixXcd> beamformed(pc, Eigen::MatrixXcd::Zero(n, tr));
    for (int c = 0; c < lay.channels; ++c) {
        Eigen::VectorXcd comp(n);
        for (int s = 0; s < n; ++s) {
            comp(s) = std::polar(1.0, two_pi * double(lay.carrier_shift[c]) * s / double(n));
        }
        for (int p = 0; p < pc; ++p) {
            Eigen::MatrixXcd prof = idft * y.page(c, p);
            prof.array().colwise() *= comp.array();
            beamformed[p].noalias() += prof * dict.B[c];
        }
    }

    SparseTargetMap map;
    map.dims = {tn, tr, pc};
    std::vector<double> mag(std::size_t(n) * tr * pc);
    for (int u = 0; u < pc; ++u) {
        Eigen::VectorXcd steer(pc);
        for (int p = 0; p < pc; ++p) {
            const double sign = p % 2 == 0 ? 1.0 : -1.0;
            steer(p) = sign * std::polar(1.0, -two_pi * double(u) * p / double(pc));
        }
        for (int r = 0; r < tr; ++r) {
            for (int s = 0; s < n; ++s) {
                std::complex<double> acc{0.0, 0.0};
                for (int p = 0; p < pc; ++p) acc += beamformed[p](s, r) * steer(p);
                mag[(std::size_t(u) * tr + r) * n + s] = std::abs(acc);
            }
        }
    }

    // Stage 5: top-L peaks; delay bins land on the TN grid with stride T.
    std::vector<char> taken(mag.size(), 0);
    const double norm = double(n) * lay.channels * qc * pc;
    for (int t = 0; t < l_targets; ++t) {
        detail::ArgMax pick;
        for (int u = 0; u < pc; ++u) {
            for (int r = 0; r < tr; ++r) {
                for (int s = 0; s < n; ++s) {
                    const long lin = (long(u) * tr + r) * n + s;
                    if (taken[lin]) continue;
                    pick.consider(mag[lin], s, r, u, lin);
                }
            }
        }
        if (pick.linear < 0) break;
        taken[pick.linear] = 1;
        map.entries.push_back({pick.s * cfg.waveform.t_count, pick.r, pick.u,
                               std::complex<double>(pick.best / norm, 0.0), t + 1});
    }
    return map;
}

} // namespace summer

#endif
