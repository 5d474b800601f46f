#ifndef SUMMER_SCENE_HPP
#define SUMMER_SCENE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "summer/config.hpp"
#include "summer/errors.hpp"
#include "summer/rng.hpp"

namespace summer {

/// On-grid point target: (delay, azimuth, Doppler) indices plus amplitude.
struct Target {
    int delay_idx = 0;   // s in [0, TN)
    int azimuth_idx = 0; // r in [0, TR)
    int doppler_idx = 0; // u in [0, P)
    std::complex<double> amplitude{1.0, 0.0};
};

struct GridDims {
    int delay_bins = 0;   // TN
    int azimuth_bins = 0; // TR
    int doppler_bins = 0; // P

    long cells() const { return long(delay_bins) * azimuth_bins * doppler_bins; }
    bool operator==(const GridDims&) const = default;
};

inline GridDims grid_dims(const WaveformParams& w) {
    return {w.delay_bins(), w.azimuth_bins(), w.pulses_p};
}

struct TargetScene {
    std::vector<Target> targets;
    GridDims dims;

    int count() const { return int(targets.size()); }
};

inline void validate(const TargetScene& scene) {
    std::set<std::tuple<int, int, int>> seen;
    for (const Target& t : scene.targets) {
        if (t.delay_idx < 0 || t.delay_idx >= scene.dims.delay_bins ||
            t.azimuth_idx < 0 || t.azimuth_idx >= scene.dims.azimuth_bins ||
            t.doppler_idx < 0 || t.doppler_idx >= scene.dims.doppler_bins) {
            throw scene_error("scene: target index outside grid");
        }
        if (std::abs(t.amplitude) <= 0.0) throw scene_error("scene: zero amplitude");
        if (!seen.insert({t.delay_idx, t.azimuth_idx, t.doppler_idx}).second) {
            throw scene_error("scene: duplicate (s, r, u) triple");
        }
    }
}

/// Physical parameters of a grid cell.
inline double grid_delay(int s, const GridDims& d, const WaveformParams& w) {
    return w.pri_tau * double(s) / double(d.delay_bins);
}
inline double grid_azimuth_sine(int r, const GridDims& d) {
    return -1.0 + 2.0 * double(r) / double(d.azimuth_bins);
}
inline double grid_doppler(int u, const GridDims& d, const WaveformParams& w) {
    return -0.5 / w.pri_tau + double(u) / (double(d.doppler_bins) * w.pri_tau);
}

/// L distinct cells uniform without replacement, unit amplitudes with
/// uniformly random phases.
inline TargetScene generate_scene(int l_targets, const GridDims& dims, std::uint64_t seed) {
    if (l_targets < 0 || long(l_targets) > dims.cells()) {
        throw scene_error("scene: L exceeds the number of grid cells");
    }
    TargetScene scene;
    scene.dims = dims;
    Rng rng(derive_seed(seed, 0x7363656e65ULL));
    const auto cells = rng.sample_without_replacement(std::uint64_t(dims.cells()),
                                                      std::uint64_t(l_targets));
    scene.targets.reserve(l_targets);
    for (auto cell : cells) {
        Target t;
        t.delay_idx = int(cell % std::uint64_t(dims.delay_bins));
        const std::uint64_t rest = cell / std::uint64_t(dims.delay_bins);
        t.azimuth_idx = int(rest % std::uint64_t(dims.azimuth_bins));
        t.doppler_idx = int(rest / std::uint64_t(dims.azimuth_bins));
        t.amplitude = rng.unit_phase();
        scene.targets.push_back(t);
    }
    return scene;
}

enum class CloseAxis { range, azimuth, doppler };

/// Two unit targets one grid step apart along `axis`, sharing the other
/// indices; the shared indices are drawn per seed.
inline TargetScene generate_close_pair(CloseAxis axis, const GridDims& dims,
                                       std::uint64_t seed) {
    const int extent = axis == CloseAxis::range     ? dims.delay_bins
                       : axis == CloseAxis::azimuth ? dims.azimuth_bins
                                                    : dims.doppler_bins;
    if (extent < 2) throw scene_error("scene: close pair needs >= 2 bins on its axis");
    Rng rng(derive_seed(seed, 0x70616972ULL));
    Target a;
    a.delay_idx = int(rng.uniform_index(std::uint64_t(dims.delay_bins)));
    a.azimuth_idx = int(rng.uniform_index(std::uint64_t(dims.azimuth_bins)));
    a.doppler_idx = int(rng.uniform_index(std::uint64_t(dims.doppler_bins)));
    Target b = a;
    switch (axis) {
    case CloseAxis::range:
        a.delay_idx = int(rng.uniform_index(std::uint64_t(dims.delay_bins - 1)));
        b.delay_idx = a.delay_idx + 1;
        break;
    case CloseAxis::azimuth:
        a.azimuth_idx = int(rng.uniform_index(std::uint64_t(dims.azimuth_bins - 1)));
        b.azimuth_idx = a.azimuth_idx + 1;
        break;
    case CloseAxis::doppler:
        a.doppler_idx = int(rng.uniform_index(std::uint64_t(dims.doppler_bins - 1)));
        b.doppler_idx = a.doppler_idx + 1;
        break;
    }
    a.amplitude = rng.unit_phase();
    b.amplitude = rng.unit_phase();
    TargetScene scene;
    scene.dims = dims;
    scene.targets = {a, b};
    return scene;
}

namespace detail {
// Nearest grid index with half-way ties rounded toward -inf, clamped to range.
inline int round_to_grid(double x, int extent) {
    int idx = int(std::ceil(x - 0.5));
    if (idx < 0) idx = 0;
    if (idx > extent - 1) idx = extent - 1;
    return idx;
}
} // namespace detail

/// Quantize physical (delay, azimuth sine, Doppler) onto the grid.
inline std::tuple<int, int, int> quantize(double delay, double azimuth_sine, double doppler,
                                          const GridDims& dims, const WaveformParams& w) {
    const double tau = w.pri_tau;
    if (!(delay >= 0.0 && delay < tau)) throw scene_error("quantize: delay outside [0, tau)");
    if (!(azimuth_sine >= -1.0 && azimuth_sine < 1.0)) {
        throw scene_error("quantize: azimuth sine outside [-1, 1)");
    }
    if (!(doppler >= -0.5 / tau && doppler < 0.5 / tau)) {
        throw scene_error("quantize: Doppler outside [-1/(2 tau), 1/(2 tau))");
    }
    const int s = detail::round_to_grid(delay / tau * double(dims.delay_bins), dims.delay_bins);
    const int r = detail::round_to_grid((azimuth_sine + 1.0) * 0.5 * double(dims.azimuth_bins),
                                        dims.azimuth_bins);
    const int u = detail::round_to_grid((doppler + 0.5 / tau) * tau * double(dims.doppler_bins),
                                        dims.doppler_bins);
    return {s, r, u};
}

} // namespace summer

#endif
