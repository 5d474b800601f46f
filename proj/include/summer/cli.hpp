#ifndef SUMMER_CLI_HPP
#define SUMMER_CLI_HPP

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "summer/summer.hpp"

namespace summer {
namespace cli {

inline GenerativeConfig desk_preset() {
    GenerativeConfig g;
    g.pri_tau = 6.4e-6; // N = 32 at B_h = 5 MHz
    g.bandwidth_bh = 5e6;
    g.carrier_fc = 10e9;
    g.pulses_p = 8;
    g.t_count = 8;
    g.r_count = 8;
    g.m_count = 4;
    g.q_count = 4;
    g.k_count = 32;
    return g;
}

inline GenerativeConfig paper_preset() {
    GenerativeConfig g;
    g.pri_tau = 100e-6; // N = 500
    g.bandwidth_bh = 5e6;
    g.carrier_fc = 10e9;
    g.pulses_p = 10;
    g.t_count = 20;
    g.r_count = 20;
    g.m_count = 10;
    g.q_count = 10;
    g.k_count = 250;
    return g;
}

namespace detail {

struct CommonArgs {
    std::string config_path;
    std::string scale = "desk";
    std::vector<std::string> overrides;
    std::string output = "out";
    std::uint64_t seed = 1;
    int trials = 0; // 0 = experiment default
    std::vector<double> snr_list;
};

inline void add_common(CLI::App* cmd, CommonArgs& args, bool with_sweep) {
    cmd->add_option("--config", args.config_path, "configuration file");
    cmd->add_option("--scale", args.scale, "built-in preset when no --config is given")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--set", args.overrides, "dotted-path override, e.g. sampling.k_count=16");
    cmd->add_option("--output", args.output, "output directory");
    cmd->add_option("--seed", args.seed, "master seed");
    if (with_sweep) {
        cmd->add_option("--trials", args.trials, "Monte-Carlo trials per SNR point");
        cmd->add_option("--snr-list", args.snr_list, "SNR points in dB");
    }
}

inline GenerativeConfig resolve_config(const CommonArgs& args) {
    GenerativeConfig gen;
    if (!args.config_path.empty()) {
        gen = load_config_file(args.config_path);
    } else {
        gen = args.scale == "paper" ? paper_preset() : desk_preset();
    }
    for (const std::string& ov : args.overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) {
            throw config_error("--set expects key=value, got '" + ov + "'");
        }
        apply_override(gen, ov.substr(0, eq), ov.substr(eq + 1));
    }
    return gen;
}

inline std::filesystem::path prepare_output(const std::string& dir) {
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

inline double parse_snr(const std::string& text) {
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    return std::stod(text);
}

inline nlohmann::json conditions_to_json(const RecoveryConditionReport& rep) {
    nlohmann::json j;
    j["required_2l"] = rep.required;
    j["mk"] = {{"value", rep.mk}, {"ok", rep.mk_ok}};
    j["mq"] = {{"value", rep.mq}, {"ok", rep.mq_ok}};
    j["p"] = {{"value", rep.p}, {"ok", rep.p_ok}};
    nlohmann::json sugg = nlohmann::json::array();
    for (auto [m, q] : rep.antenna_suggestion) sugg.push_back({{"m", m}, {"q", q}});
    j["antenna_suggestion"] = sugg;
    return j;
}

/// Fig. 5 style scene: close pairs on the named axes plus random fill-up.
inline TargetScene demo_scene(const GridDims& dims, const std::vector<CloseAxis>& pairs,
                              int l_total, std::uint64_t seed) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        TargetScene scene;
        scene.dims = dims;
        std::set<std::tuple<int, int, int>> used;
        bool ok = true;
        for (std::size_t i = 0; i < pairs.size() && ok; ++i) {
            const TargetScene pair = generate_close_pair(
                pairs[i], dims, derive_seed(seed, 0xf5, attempt, i));
            for (const Target& t : pair.targets) {
                if (!used.insert({t.delay_idx, t.azimuth_idx, t.doppler_idx}).second) {
                    ok = false;
                    break;
                }
                scene.targets.push_back(t);
            }
        }
        if (!ok) continue;
        Rng rng(derive_seed(seed, 0xf6, attempt));
        while (int(scene.targets.size()) < l_total) {
            Target t;
            t.delay_idx = int(rng.uniform_index(std::uint64_t(dims.delay_bins)));
            t.azimuth_idx = int(rng.uniform_index(std::uint64_t(dims.azimuth_bins)));
            t.doppler_idx = int(rng.uniform_index(std::uint64_t(dims.doppler_bins)));
            if (!used.insert({t.delay_idx, t.azimuth_idx, t.doppler_idx}).second) continue;
            t.amplitude = rng.unit_phase();
            scene.targets.push_back(t);
        }
        return scene;
    }
    throw scene_error("demo scene: could not place distinct targets");
}

inline SparseTargetMap recover_once(const RadarConfig& cfg, const TargetScene& scene,
                                    double snr_db, std::uint64_t seed) {
    ChannelCoefficients data =
        add_noise(synthesize_coefficients(scene, cfg), snr_db, derive_seed(seed, 2));
    const DictionarySet dict = build_dictionaries(cfg);
    if (cfg.waveform.pulses_p == 1 && cfg.multi_carrier_gamma == 1) {
        return omp_matrix(data.pages, dict, scene.count());
    }
    return omp_focus_3d(data, dict, scene.count());
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

inline int cmd_recover(const CommonArgs& args, const std::string& scene_path,
                       const std::string& snr_text, int l_targets,
                       const std::string& algorithm) {
    const GenerativeConfig gen = resolve_config(args);
    const RadarConfig cfg = gen.materialize();
    const auto out = prepare_output(args.output);
    const double snr_db = parse_snr(snr_text);

    TargetScene scene;
    if (!scene_path.empty()) {
        scene = load_scene(scene_path);
    } else {
        scene = generate_scene(l_targets, grid_dims(cfg.waveform), derive_seed(args.seed, 1));
    }

    SparseTargetMap map;
    if (algorithm == "classic") {
        CdmaCoefficients data = add_noise(synthesize_cdma_coefficients(scene, cfg), snr_db,
                                          derive_seed(args.seed, 2));
        map = classic_process_cdma(data, scene.count());
    } else {
        map = recover_once(cfg, scene, snr_db, args.seed);
    }
    const RecoveredTargets rec = estimate_params(map, cfg);
    const HitResult score = hit_or_miss(scene, map);

    save_scene(scene, out / "scene.txt");
    write_text_file(out / "targets.txt", targets_to_text(rec, map));
    nlohmann::json report;
    report["hits"] = score.hits;
    report["hit_rate"] = score.rate;
    report["targets"] = scene.count();
    report["algorithm"] = algorithm;
    report["snr_db"] = std::isinf(snr_db) ? nlohmann::json("inf") : nlohmann::json(snr_db);
    write_text_file(out / "report.json", report.dump(2) + "\n");
    nlohmann::json manifest = make_manifest("recover", gen, cfg, args.seed, {}, 1,
                                            {"scene.txt", "targets.txt", "report.json"});
    manifest["snr_db"] = snr_text;
    manifest["algorithm"] = algorithm;
    write_text_file(out / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "recover: " << score.hits << "/" << scene.count() << " hits\n";
    return 0;
}

inline int cmd_fig5_map(const CommonArgs& args, bool doppler_mode, std::string snr_text) {
    GenerativeConfig gen = resolve_config(args);
    if (!doppler_mode) gen.pulses_p = 1;
    const RadarConfig cfg = gen.materialize();
    const auto out = prepare_output(args.output);
    if (snr_text.empty()) snr_text = doppler_mode ? "-10" : "0";
    const double snr_db = parse_snr(snr_text);

    const GridDims dims = grid_dims(cfg.waveform);
    std::vector<CloseAxis> pairs = {CloseAxis::range, CloseAxis::azimuth};
    int l_total = 7;
    if (doppler_mode) {
        pairs.push_back(CloseAxis::doppler);
        l_total = 6;
    }
    const TargetScene scene = demo_scene(dims, pairs, l_total, args.seed);
    const SparseTargetMap map = recover_once(cfg, scene, snr_db, args.seed);
    const RecoveredTargets rec = estimate_params(map, cfg);
    const HitResult score = hit_or_miss(scene, map);

    save_scene(scene, out / "scene.txt");
    write_text_file(out / "targets.txt", targets_to_text(rec, map));
    nlohmann::json report;
    report["hits"] = score.hits;
    report["targets"] = scene.count();
    report["snr_db"] = snr_db;
    report["mode"] = doppler_mode ? "range-azimuth-doppler" : "range-azimuth";
    write_text_file(out / "report.json", report.dump(2) + "\n");
    nlohmann::json manifest = make_manifest("fig5-map", gen, cfg, args.seed, {snr_db}, 1,
                                            {"scene.txt", "targets.txt", "report.json"});
    write_text_file(out / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "fig5-map: " << score.hits << "/" << scene.count() << " hits\n";
    return 0;
}

inline int cmd_time_compression(const CommonArgs& args) {
    GenerativeConfig gen = resolve_config(args);
    gen.snr_definition = SnrDefinition::single_band;
    const bool paper = args.config_path.empty() && args.scale == "paper";
    const int trials = args.trials > 0 ? args.trials : 100;
    std::vector<double> snr = args.snr_list;
    if (snr.empty()) {
        snr = {-32.5, -30, -27.5, -25, -22.5, -20, -17.5, -15, -12.5, -10};
    }
    const auto out = prepare_output(args.output);

    ScenePolicy policy;
    policy.l_targets = paper ? 10 : 3;
    const int n = gen.k_count; // full per-band count of the resolved config
    std::vector<std::string> outputs;
    nlohmann::json manifest;
    for (int div : {1, 2, 4}) {
        GenerativeConfig g = gen;
        g.k_count = n / div;
        const RadarConfig cfg = g.materialize();
        const HitRateCurve curve = run_monte_carlo(cfg, policy, snr, trials,
                                                   Algorithm::summer, args.seed);
        const std::string name = "time_compression_k" + std::to_string(g.k_count) + ".csv";
        write_text_file(out / name, curve_to_csv(curve));
        outputs.push_back(name);
        manifest["conditions"][name] =
            conditions_to_json(check_recovery_conditions(cfg, policy.l_targets));
    }
    const RadarConfig base_cfg = gen.materialize();
    nlohmann::json m = make_manifest("fig-time-compression", gen, base_cfg, args.seed, snr,
                                     trials, outputs);
    m["conditions"] = manifest["conditions"];
    m["l_targets"] = policy.l_targets;
    write_text_file(out / "manifest.json", m.dump(2) + "\n");
    std::cout << "fig-time-compression: wrote " << outputs.size() << " curves\n";
    return 0;
}

inline int cmd_resolution(const CommonArgs& args) {
    GenerativeConfig gen = resolve_config(args);
    gen.pulses_p = 1;
    gen.snr_definition = SnrDefinition::cdma_equivalent;
    const int trials = args.trials > 0 ? args.trials : 50;
    std::vector<double> snr = args.snr_list;
    if (snr.empty()) snr = {-25, -20, -15, -10, -5, 0, 5};
    const auto out = prepare_output(args.output);

    std::vector<std::string> outputs;
    for (const bool compressed : {false, true}) {
        GenerativeConfig g = gen;
        if (!compressed) {
            g.m_count = g.t_count;
            g.q_count = g.r_count;
        } else {
            g.m_count = std::max(1, g.t_count / 2);
            g.q_count = std::max(1, g.r_count / 2);
        }
        const RadarConfig cfg = g.materialize();
        const auto curves =
            resolution_experiment(cfg, CloseAxis::azimuth,
                                  {Algorithm::summer, Algorithm::classic}, snr, trials,
                                  args.seed);
        const std::string regime = compressed ? "compressed" : "full";
        for (const HitRateCurve& curve : curves) {
            const std::string name = "resolution_" + curve.algorithm + "_" + regime + ".csv";
            write_text_file(out / name, curve_to_csv(curve));
            outputs.push_back(name);
        }
    }
    const nlohmann::json m = make_manifest("fig-resolution", gen, gen.materialize(), args.seed,
                                           snr, trials, outputs);
    write_text_file(out / "manifest.json", m.dump(2) + "\n");
    std::cout << "fig-resolution: wrote " << outputs.size() << " curves\n";
    return 0;
}

inline int cmd_multicarrier(const CommonArgs& args) {
    GenerativeConfig gen = resolve_config(args);
    gen.snr_definition = SnrDefinition::cdma_equivalent;
    const int trials = args.trials > 0 ? args.trials : 50;
    std::vector<double> snr = args.snr_list;
    if (snr.empty()) snr = {-35, -30, -25, -20, -15, -10};
    const auto out = prepare_output(args.output);

    ScenePolicy policy;
    policy.l_targets = 3;

    struct Variant {
        const char* label;
        bool compressed;
        int gamma;
        Algorithm algo;
    };
    const Variant variants[] = {
        {"summer_full", false, 1, Algorithm::summer},
        {"summer_compressed", true, 1, Algorithm::summer},
        {"multi_carrier", true, 2, Algorithm::multi_carrier},
    };
    std::vector<std::string> outputs;
    for (const Variant& v : variants) {
        GenerativeConfig g = gen;
        if (v.compressed) {
            g.m_count = std::max(1, g.t_count / 2);
            g.q_count = std::max(1, g.r_count / 2);
        } else {
            g.m_count = g.t_count;
            g.q_count = g.r_count;
        }
        g.gamma = v.gamma;
        const RadarConfig cfg = g.materialize();
        const HitRateCurve curve =
            run_monte_carlo(cfg, policy, snr, trials, v.algo, args.seed);
        const std::string name = std::string("multicarrier_") + v.label + ".csv";
        write_text_file(out / name, curve_to_csv(curve));
        outputs.push_back(name);
    }
    const nlohmann::json m = make_manifest("fig-multicarrier", gen, gen.materialize(),
                                           args.seed, snr, trials, outputs);
    write_text_file(out / "manifest.json", m.dump(2) + "\n");
    std::cout << "fig-multicarrier: wrote " << outputs.size() << " curves\n";
    return 0;
}

inline int cmd_lemma1(const CommonArgs& args, int instances) {
    const auto out = prepare_output(args.output);
    const Lemma1Suite suite = run_lemma1_suite(instances, args.seed);
    nlohmann::json j;
    j["random_instances"] = suite.random_instances;
    j["random_equal"] = suite.random_equal;
    j["planted_instances"] = suite.planted_instances;
    j["planted_equal"] = suite.planted_equal;
    j["all_equal"] = suite.all_equal();
    j["seed"] = args.seed;
    write_text_file(out / "lemma1.json", j.dump(2) + "\n");
    std::cout << "lemma1-check: " << suite.random_equal << "/" << suite.random_instances
              << " random, " << suite.planted_equal << "/" << suite.planted_instances
              << " planted\n";
    return suite.all_equal() ? 0 : 1;
}

inline int cmd_coherence_search(const CommonArgs& args, int trials, const std::string& what) {
    const GenerativeConfig gen = resolve_config(args);
    const RadarConfig base = gen.materialize();
    const auto out = prepare_output(args.output);
    const SearchSpace space = what == "time"    ? SearchSpace::time
                              : what == "space" ? SearchSpace::space
                                                : SearchSpace::both;
    const CoherenceSearchResult res = coherence_search(base, trials, args.seed, space);

    std::ostringstream trace;
    trace << "# summer-csv v1\ntrial,coherence\n";
    for (std::size_t i = 0; i < res.trace.size(); ++i) {
        trace << i << "," << summer::detail::format_double(res.trace[i]) << "\n";
    }
    write_text_file(out / "trace.csv", trace.str());
    nlohmann::json best;
    best["coherence"] = res.best_coherence;
    best["tx_positions"] = res.best.geometry.tx_positions;
    best["rx_positions"] = res.best.geometry.rx_positions;
    best["carrier_grid_indices"] = res.best.carriers.grid_indices;
    best["kappa"] = res.best.sampling.kappa;
    best["fingerprint"] = fingerprint(res.best);
    write_text_file(out / "best_config.json", best.dump(2) + "\n");
    const nlohmann::json m =
        make_manifest("coherence-search", gen, base, args.seed, {}, trials,
                      {"trace.csv", "best_config.json"});
    write_text_file(out / "manifest.json", m.dump(2) + "\n");
    std::cout << "coherence-search: best " << res.best_coherence << " over " << trials
              << " trials\n";
    return 0;
}

} // namespace detail

/// CLI entry point; returns the process exit code (0 ok, 1 runtime failure,
/// 2 usage error, 3 invalid configuration).
inline int run(const std::vector<std::string>& args) {
    CLI::App app{"sub-Nyquist MIMO radar simulator"};
    app.require_subcommand(1);

    detail::CommonArgs common;

    auto* recover = app.add_subcommand("recover", "recover a target scene once");
    detail::add_common(recover, common, false);
    std::string scene_path, snr_text = "inf", algorithm = "summer";
    int l_targets = 5;
    recover->add_option("--scene", scene_path, "scene file to replay");
    recover->add_option("--snr", snr_text, "SNR in dB, or inf");
    recover->add_option("--targets", l_targets, "targets to draw when no scene is given");
    recover->add_option("--algorithm", algorithm, "summer or classic")
        ->check(CLI::IsMember({"summer", "classic"}));

    auto* fig5 = app.add_subcommand("fig5-map", "single-scene recovery map demo");
    detail::add_common(fig5, common, false);
    bool doppler_mode = false;
    std::string fig5_snr;
    fig5->add_flag("--doppler", doppler_mode, "range-azimuth-Doppler variant");
    fig5->add_option("--snr", fig5_snr, "SNR in dB, or inf");

    auto* timec = app.add_subcommand("fig-time-compression",
                                     "hit-rate curves for K, K/2, K/4 samples per band");
    detail::add_common(timec, common, true);

    auto* resol = app.add_subcommand("fig-resolution",
                                     "close-pair azimuth resolution vs the classic baseline");
    detail::add_common(resol, common, true);

    auto* multi = app.add_subcommand("fig-multicarrier",
                                     "multi-carrier mode vs compressed and full arrays");
    detail::add_common(multi, common, true);

    auto* lemma = app.add_subcommand("lemma1-check", "spark identity check battery");
    detail::add_common(lemma, common, false);
    int instances = 50;
    lemma->add_option("--instances", instances, "number of random instances");

    auto* cohere = app.add_subcommand("coherence-search",
                                      "randomized low-coherence parameter search");
    detail::add_common(cohere, common, false);
    int search_trials = 100;
    std::string search_space = "both";
    cohere->add_option("--trials", search_trials, "search trials");
    cohere->add_option("--space", search_space, "what to redraw: time, space or both")
        ->check(CLI::IsMember({"time", "space", "both"}));

    std::vector<std::string> argv_like = args;
    try {
        std::vector<const char*> argv;
        argv.push_back("summer");
        for (const std::string& a : argv_like) argv.push_back(a.c_str());
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (recover->parsed()) {
            return detail::cmd_recover(common, scene_path, snr_text, l_targets, algorithm);
        }
        if (fig5->parsed()) return detail::cmd_fig5_map(common, doppler_mode, fig5_snr);
        if (timec->parsed()) return detail::cmd_time_compression(common);
        if (resol->parsed()) return detail::cmd_resolution(common);
        if (multi->parsed()) return detail::cmd_multicarrier(common);
        if (lemma->parsed()) return detail::cmd_lemma1(common, instances);
        if (cohere->parsed()) {
            return detail::cmd_coherence_search(common, search_trials, search_space);
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace cli
} // namespace summer

#endif
