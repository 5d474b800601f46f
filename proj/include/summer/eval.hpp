#ifndef SUMMER_EVAL_HPP
#define SUMMER_EVAL_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "summer/config.hpp"
#include "summer/dictionaries.hpp"
#include "summer/recovery.hpp"
#include "summer/scene.hpp"
#include "summer/synthesis.hpp"

namespace summer {

struct HitResult {
    int hits = 0;
    double rate = 1.0;
};

/// Hit-or-miss scoring: a found target hits a truth target when every index
/// differs by at most one bin (Doppler included only in pulse-Doppler mode,
/// i.e. when the truth grid has more than one Doppler bin). Matching is
/// greedy by descending found amplitude, one truth target per estimate.
inline HitResult hit_or_miss(const TargetScene& truth, const SparseTargetMap& found) {
    if (found.dims.delay_bins != truth.dims.delay_bins ||
        found.dims.azimuth_bins != truth.dims.azimuth_bins) {
        throw model_error("hit_or_miss: grids do not match");
    }
    const bool pulse_doppler = truth.dims.doppler_bins > 1;
    std::vector<std::size_t> order(found.entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(found.entries[a].amplitude) > std::abs(found.entries[b].amplitude);
    });

    std::vector<char> matched(truth.targets.size(), 0);
    int hits = 0;
    for (std::size_t oi : order) {
        const SparseEntry& e = found.entries[oi];
        for (std::size_t ti = 0; ti < truth.targets.size(); ++ti) {
            if (matched[ti]) continue;
            const Target& t = truth.targets[ti];
            if (std::abs(e.delay_idx - t.delay_idx) > 1) continue;
            if (std::abs(e.azimuth_idx - t.azimuth_idx) > 1) continue;
            if (pulse_doppler &&
                std::abs((e.doppler_idx - found.doppler_offset) - t.doppler_idx) > 1) {
                continue;
            }
            matched[ti] = 1;
            ++hits;
            break;
        }
    }
    HitResult res;
    res.hits = hits;
    res.rate = truth.targets.empty() ? 1.0 : double(hits) / double(truth.targets.size());
    return res;
}

enum class Algorithm { summer, classic, multi_carrier };

inline std::string to_string(Algorithm a) {
    switch (a) {
    case Algorithm::summer: return "summer";
    case Algorithm::classic: return "classic";
    default: return "multi_carrier";
    }
}

/// How each trial draws its ground-truth scene.
struct ScenePolicy {
    enum class Kind { random_targets, close_pair };
    Kind kind = Kind::random_targets;
    int l_targets = 1;
    CloseAxis axis = CloseAxis::azimuth;
};

/// Curve metric: mean per-target hit rate, or the fraction of trials in
/// which every target was hit (resolution experiments).
enum class CurveMetric { average_hits, all_hits };

struct HitRateCurve {
    std::vector<double> snr_points_db;
    std::vector<double> hit_rate;
    int trials = 0;
    std::string algorithm;
    std::string snr_definition;
    std::string metric;
    std::string config_fingerprint;
    std::uint64_t seed = 0;
    long failed_trials = 0; // recovery errors counted as zero-hit trials
};

namespace detail {

inline int thread_budget() {
    if (const char* env = std::getenv("SUMMER_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

template <typename Fn>
inline void parallel_trials(int count, Fn&& fn) {
    const int workers = std::min(thread_budget(), std::max(1, count));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

inline TargetScene draw_scene(const ScenePolicy& policy, const GridDims& dims,
                              std::uint64_t seed) {
    if (policy.kind == ScenePolicy::Kind::close_pair) {
        return generate_close_pair(policy.axis, dims, seed);
    }
    return generate_scene(policy.l_targets, dims, seed);
}

/// One trial of the selected pipeline; returns (hits, targets).
inline std::pair<int, int> run_trial(const RadarConfig& cfg, const DictionarySet* dict,
                                     const ScenePolicy& policy, double snr_db,
                                     Algorithm algo, std::uint64_t trial_seed) {
    const GridDims dims = grid_dims(cfg.waveform);
    const TargetScene scene = draw_scene(policy, dims, derive_seed(trial_seed, 1));
    const std::uint64_t noise_seed = derive_seed(trial_seed, 2);
    SparseTargetMap found;
    if (algo == Algorithm::classic) {
        CdmaCoefficients data =
            add_noise(synthesize_cdma_coefficients(scene, cfg), snr_db, noise_seed);
        found = classic_process_cdma(data, scene.count());
    } else {
        ChannelCoefficients data =
            add_noise(synthesize_coefficients(scene, cfg), snr_db, noise_seed);
        if (cfg.waveform.pulses_p == 1 && cfg.multi_carrier_gamma == 1) {
            found = omp_matrix(data.pages, *dict, scene.count());
        } else {
            found = omp_focus_3d(data, *dict, scene.count());
        }
    }
    const HitResult res = hit_or_miss(scene, found);
    return {res.hits, scene.count()};
}

} // namespace detail

/// Monte-Carlo sweep over SNR points. Every trial derives its own sub-seed
/// from (seed, snr index, trial index), so curves are reproducible and
/// trials can run in parallel; recovery failures count as zero-hit trials.
inline HitRateCurve run_monte_carlo(const RadarConfig& cfg, const ScenePolicy& policy,
                                    const std::vector<double>& snr_list_db, int trials,
                                    Algorithm algo, std::uint64_t seed,
                                    CurveMetric metric = CurveMetric::average_hits) {
    validate(cfg);
    if (trials < 1) throw config_error("monte carlo: trials must be >= 1");
    HitRateCurve curve;
    curve.snr_points_db = snr_list_db;
    curve.trials = trials;
    curve.algorithm = to_string(algo);
    curve.snr_definition = to_string(cfg.snr_definition);
    curve.metric = metric == CurveMetric::average_hits ? "average_hits" : "all_hits";
    curve.config_fingerprint = fingerprint(cfg);
    curve.seed = seed;

    std::optional<DictionarySet> dict;
    if (algo != Algorithm::classic) dict = build_dictionaries(cfg);

    std::atomic<long> failures{0};
    for (std::size_t si = 0; si < snr_list_db.size(); ++si) {
        std::vector<int> hits(trials, 0), total(trials, 0), all(trials, 0);
        detail::parallel_trials(trials, [&](int t) {
            const std::uint64_t ts = derive_seed(seed, si, std::uint64_t(t));
            try {
                const auto [h, n] =
                    detail::run_trial(cfg, dict ? &*dict : nullptr, policy,
                                      snr_list_db[si], algo, ts);
                hits[t] = h;
                total[t] = n;
                all[t] = (h == n) ? 1 : 0;
            } catch (const std::exception&) {
                failures.fetch_add(1);
                total[t] = std::max(1, policy.l_targets);
            }
        });
        long h = 0, n = 0, a = 0;
        for (int t = 0; t < trials; ++t) {
            h += hits[t];
            n += total[t];
            a += all[t];
        }
        curve.hit_rate.push_back(metric == CurveMetric::average_hits
                                     ? (n == 0 ? 1.0 : double(h) / double(n))
                                     : double(a) / double(trials));
    }
    curve.failed_trials = failures.load();
    return curve;
}

/// Close-pair resolution sweep; reports the both-target hit rate per
/// algorithm. The per-trial scenes are shared across algorithms (same
/// sub-seeds), which keeps the comparison tight.
inline std::vector<HitRateCurve> resolution_experiment(const RadarConfig& cfg, CloseAxis axis,
                                                       const std::vector<Algorithm>& algorithms,
                                                       const std::vector<double>& snr_list_db,
                                                       int trials, std::uint64_t seed) {
    ScenePolicy policy;
    policy.kind = ScenePolicy::Kind::close_pair;
    policy.l_targets = 2;
    policy.axis = axis;
    std::vector<HitRateCurve> out;
    out.reserve(algorithms.size());
    for (Algorithm a : algorithms) {
        out.push_back(run_monte_carlo(cfg, policy, snr_list_db, trials, a, seed,
                                      CurveMetric::all_hits));
    }
    return out;
}

/// Pool-adjacent-violators fit; used to check monotonicity up to noise.
inline std::vector<double> isotonic_fit(const std::vector<double>& y) {
    std::vector<double> level;
    std::vector<double> weight;
    for (double v : y) {
        level.push_back(v);
        weight.push_back(1.0);
        while (level.size() > 1 && level[level.size() - 2] > level.back()) {
            const double w = weight[weight.size() - 2] + weight.back();
            const double l = (level[level.size() - 2] * weight[weight.size() - 2] +
                              level.back() * weight.back()) /
                             w;
            level.pop_back();
            weight.pop_back();
            level.back() = l;
            weight.back() = w;
        }
    }
    std::vector<double> out;
    out.reserve(y.size());
    for (std::size_t i = 0; i < level.size(); ++i) {
        for (int r = 0; r < int(std::lround(weight[i])); ++r) out.push_back(level[i]);
    }
    return out;
}

/// SNR at which the isotonic-smoothed curve crosses `level`, by linear
/// interpolation; empty when the curve never reaches it.
inline std::optional<double> snr_at_rate(const HitRateCurve& curve, double level) {
    const std::vector<double> fit = isotonic_fit(curve.hit_rate);
    for (std::size_t i = 0; i < fit.size(); ++i) {
        if (fit[i] >= level) {
            if (i == 0) return curve.snr_points_db[0];
            const double x0 = curve.snr_points_db[i - 1], x1 = curve.snr_points_db[i];
            const double y0 = fit[i - 1], y1 = fit[i];
            if (y1 <= y0) return x1;
            return x0 + (level - y0) / (y1 - y0) * (x1 - x0);
        }
    }
    return std::nullopt;
}

} // namespace summer

#endif
