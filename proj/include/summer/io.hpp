#ifndef SUMMER_IO_HPP
#define SUMMER_IO_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "summer/config.hpp"
#include "summer/errors.hpp"
#include "summer/eval.hpp"
#include "summer/recovery.hpp"
#include "summer/scene.hpp"
#include "summer/synthesis.hpp"
#include "summer/version.hpp"

namespace summer {

enum class ArrayPlacement { random, ula };

/// File-level system description: counts plus seeds. Materialized into a
/// concrete RadarConfig by drawing positions, carrier slots and Fourier
/// indices from the recorded seeds.
struct GenerativeConfig {
    double pri_tau = 100e-6;
    double bandwidth_bh = 5e6;
    double carrier_fc = 10e9;
    int pulses_p = 10;
    int t_count = 20;
    int r_count = 20;
    int m_count = 20;
    int q_count = 20;
    int k_count = 500;
    int gamma = 1;
    ArrayPlacement placement = ArrayPlacement::random;
    bool approximate_beta = false;
    SnrDefinition snr_definition = SnrDefinition::cdma_equivalent;
    std::uint64_t array_seed = 1;
    std::uint64_t carrier_seed = 2;
    std::uint64_t sampling_seed = 3;

    RadarConfig materialize() const {
        RadarConfig cfg;
        cfg.waveform =
            make_waveform(pri_tau, bandwidth_bh, carrier_fc, pulses_p, t_count, r_count);
        if (placement == ArrayPlacement::ula) {
            if (m_count != t_count || q_count != r_count) {
                throw config_error("array.placement: ula requires M = T and Q = R");
            }
            cfg.geometry = build_virtual_ula(t_count, r_count);
        } else {
            cfg.geometry = thin_array(t_count, r_count, m_count, q_count, array_seed);
        }
        cfg.carriers =
            assign_carriers(t_count, m_count * gamma, bandwidth_bh, carrier_seed);
        cfg.sampling =
            select_fourier_indices(cfg.waveform.n_nyquist, k_count, sampling_seed);
        cfg.multi_carrier_gamma = gamma;
        cfg.approximate_beta = approximate_beta;
        cfg.snr_definition = snr_definition;
        validate(cfg);
        return cfg;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& path, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error(path + ": expected a number, got '" + v + "'");
    }
}

inline long parse_long(const std::string& path, const std::string& v) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error(path + ": expected an integer, got '" + v + "'");
    }
}

inline bool parse_bool(const std::string& path, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error(path + ": expected true/false, got '" + v + "'");
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Applies a dotted-path override such as "sampling.k_count=250".
inline void apply_override(GenerativeConfig& cfg, const std::string& key,
                           const std::string& value) {
    const std::string v = detail::trim(value);
    if (key == "waveform.pri_tau") cfg.pri_tau = detail::parse_double(key, v);
    else if (key == "waveform.bandwidth_bh") cfg.bandwidth_bh = detail::parse_double(key, v);
    else if (key == "waveform.carrier_fc") cfg.carrier_fc = detail::parse_double(key, v);
    else if (key == "waveform.pulses_p") cfg.pulses_p = int(detail::parse_long(key, v));
    else if (key == "waveform.t_count") cfg.t_count = int(detail::parse_long(key, v));
    else if (key == "waveform.r_count") cfg.r_count = int(detail::parse_long(key, v));
    else if (key == "array.m_count") cfg.m_count = int(detail::parse_long(key, v));
    else if (key == "array.q_count") cfg.q_count = int(detail::parse_long(key, v));
    else if (key == "array.seed") cfg.array_seed = std::uint64_t(detail::parse_long(key, v));
    else if (key == "array.placement") {
        if (v == "random") cfg.placement = ArrayPlacement::random;
        else if (v == "ula") cfg.placement = ArrayPlacement::ula;
        else throw config_error(key + ": expected random or ula, got '" + v + "'");
    } else if (key == "carriers.seed") {
        cfg.carrier_seed = std::uint64_t(detail::parse_long(key, v));
    } else if (key == "sampling.k_count") {
        cfg.k_count = int(detail::parse_long(key, v));
    } else if (key == "sampling.seed") {
        cfg.sampling_seed = std::uint64_t(detail::parse_long(key, v));
    } else if (key == "mode.gamma") {
        cfg.gamma = int(detail::parse_long(key, v));
    } else if (key == "mode.approximate_beta") {
        cfg.approximate_beta = detail::parse_bool(key, v);
    } else if (key == "mode.snr_definition") {
        if (v == "single_band") cfg.snr_definition = SnrDefinition::single_band;
        else if (v == "cdma_equivalent") cfg.snr_definition = SnrDefinition::cdma_equivalent;
        else throw config_error(key + ": expected single_band or cdma_equivalent");
    } else {
        throw config_error(key + ": unknown configuration field");
    }
}

/// Key/value config file with [section] headers and # comments.
inline GenerativeConfig parse_config_text(std::istream& in) {
    GenerativeConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw config_error("config line " + std::to_string(lineno) +
                                   ": unterminated section header");
            }
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty()) {
            throw config_error("config line " + std::to_string(lineno) +
                               ": key outside any [section]");
        }
        apply_override(cfg, section + "." + key, value);
    }
    return cfg;
}

inline GenerativeConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path.string());
    return parse_config_text(in);
}

inline std::string config_to_text(const GenerativeConfig& c) {
    std::ostringstream os;
    os << "[waveform]\n"
       << "pri_tau = " << detail::format_double(c.pri_tau) << "\n"
       << "bandwidth_bh = " << detail::format_double(c.bandwidth_bh) << "\n"
       << "carrier_fc = " << detail::format_double(c.carrier_fc) << "\n"
       << "pulses_p = " << c.pulses_p << "\n"
       << "t_count = " << c.t_count << "\n"
       << "r_count = " << c.r_count << "\n\n"
       << "[array]\n"
       << "m_count = " << c.m_count << "\n"
       << "q_count = " << c.q_count << "\n"
       << "placement = " << (c.placement == ArrayPlacement::ula ? "ula" : "random") << "\n"
       << "seed = " << c.array_seed << "\n\n"
       << "[carriers]\n"
       << "seed = " << c.carrier_seed << "\n\n"
       << "[sampling]\n"
       << "k_count = " << c.k_count << "\n"
       << "seed = " << c.sampling_seed << "\n\n"
       << "[mode]\n"
       << "gamma = " << c.gamma << "\n"
       << "approximate_beta = " << (c.approximate_beta ? "true" : "false") << "\n"
       << "snr_definition = " << to_string(c.snr_definition) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Scene files
// ---------------------------------------------------------------------------

inline void save_scene(const TargetScene& scene, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write scene file: " + path.string());
    out << "# summer-scene v1\n";
    out << "dims " << scene.dims.delay_bins << " " << scene.dims.azimuth_bins << " "
        << scene.dims.doppler_bins << "\n";
    for (const Target& t : scene.targets) {
        out << "target " << t.delay_idx << " " << t.azimuth_idx << " " << t.doppler_idx << " "
            << detail::format_double(t.amplitude.real()) << " "
            << detail::format_double(t.amplitude.imag()) << "\n";
    }
}

inline TargetScene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open scene file: " + path.string());
    TargetScene scene;
    bool have_dims = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::istringstream is(line);
        std::string tag;
        is >> tag;
        if (tag == "dims") {
            is >> scene.dims.delay_bins >> scene.dims.azimuth_bins >> scene.dims.doppler_bins;
            have_dims = bool(is);
        } else if (tag == "target") {
            Target t;
            double re = 0.0, im = 0.0;
            is >> t.delay_idx >> t.azimuth_idx >> t.doppler_idx >> re >> im;
            if (!is) throw io_error("scene line " + std::to_string(lineno) + ": malformed target");
            t.amplitude = {re, im};
            scene.targets.push_back(t);
        } else {
            throw io_error("scene line " + std::to_string(lineno) + ": unknown record '" + tag +
                           "'");
        }
    }
    if (!have_dims) throw io_error("scene file missing dims record: " + path.string());
    validate(scene);
    return scene;
}

// ---------------------------------------------------------------------------
// Coefficient dumps (little-endian interleaved complex64)
// ---------------------------------------------------------------------------

inline void save_coefficients(const ChannelCoefficients& coeffs,
                              const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write coefficient dump: " + path.string());
    const char magic[4] = {'S', 'U', 'M', 'C'};
    out.write(magic, 4);
    auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    put_u32(1); // version
    put_u32(std::uint32_t(coeffs.layout.channels));
    put_u32(std::uint32_t(coeffs.layout.pris));
    put_u32(std::uint32_t(coeffs.config.k_count()));
    put_u32(std::uint32_t(coeffs.config.q_count()));
    put_u32(std::uint32_t(coeffs.layout.gamma));
    const double pri = coeffs.layout.pri;
    out.write(reinterpret_cast<const char*>(&pri), 8);
    for (const auto& page : coeffs.pages) {
        for (Eigen::Index col = 0; col < page.cols(); ++col) {
            for (Eigen::Index row = 0; row < page.rows(); ++row) {
                const float re = float(page(row, col).real());
                const float im = float(page(row, col).imag());
                out.write(reinterpret_cast<const char*>(&re), 4);
                out.write(reinterpret_cast<const char*>(&im), 4);
            }
        }
    }
}

struct CoefficientDump {
    int channels = 0, pris = 0, k_count = 0, q_count = 0, gamma = 1;
    double pri = 0.0;
    std::vector<Eigen::MatrixXcf> pages;
};

inline CoefficientDump load_coefficients(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open coefficient dump: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != "SUMC") throw io_error("coefficient dump: bad magic");
    auto get_u32 = [&]() {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    const std::uint32_t version = get_u32();
    if (version != 1) throw io_error("coefficient dump: unsupported version");
    CoefficientDump d;
    d.channels = int(get_u32());
    d.pris = int(get_u32());
    d.k_count = int(get_u32());
    d.q_count = int(get_u32());
    d.gamma = int(get_u32());
    in.read(reinterpret_cast<char*>(&d.pri), 8);
    d.pages.assign(std::size_t(d.channels) * d.pris, Eigen::MatrixXcf(d.k_count, d.q_count));
    for (auto& page : d.pages) {
        for (Eigen::Index col = 0; col < page.cols(); ++col) {
            for (Eigen::Index row = 0; row < page.rows(); ++row) {
                float re = 0.0f, im = 0.0f;
                in.read(reinterpret_cast<char*>(&re), 4);
                in.read(reinterpret_cast<char*>(&im), 4);
                page(row, col) = {re, im};
            }
        }
    }
    if (!in) throw io_error("coefficient dump: truncated file");
    return d;
}

// ---------------------------------------------------------------------------
// CSV and manifests
// ---------------------------------------------------------------------------

inline std::string curve_to_csv(const HitRateCurve& curve) {
    std::ostringstream os;
    os << "# summer-csv v1\n";
    os << "snr_db,hit_rate,trials,algorithm,metric,snr_definition,config_hash,seed\n";
    for (std::size_t i = 0; i < curve.snr_points_db.size(); ++i) {
        os << detail::format_double(curve.snr_points_db[i]) << ","
           << detail::format_double(curve.hit_rate[i]) << "," << curve.trials << ","
           << curve.algorithm << "," << curve.metric << "," << curve.snr_definition << ","
           << curve.config_fingerprint << "," << curve.seed << "\n";
    }
    return os.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write file: " + path.string());
    out << text;
}

inline nlohmann::json config_to_json(const GenerativeConfig& gen, const RadarConfig& cfg) {
    nlohmann::json j;
    j["generative"] = {
        {"pri_tau", gen.pri_tau},
        {"bandwidth_bh", gen.bandwidth_bh},
        {"carrier_fc", gen.carrier_fc},
        {"pulses_p", gen.pulses_p},
        {"t_count", gen.t_count},
        {"r_count", gen.r_count},
        {"m_count", gen.m_count},
        {"q_count", gen.q_count},
        {"k_count", gen.k_count},
        {"gamma", gen.gamma},
        {"placement", gen.placement == ArrayPlacement::ula ? "ula" : "random"},
        {"approximate_beta", gen.approximate_beta},
        {"snr_definition", to_string(gen.snr_definition)},
        {"array_seed", gen.array_seed},
        {"carrier_seed", gen.carrier_seed},
        {"sampling_seed", gen.sampling_seed},
    };
    j["realized"] = {
        {"tx_positions", cfg.geometry.tx_positions},
        {"rx_positions", cfg.geometry.rx_positions},
        {"carrier_grid_indices", cfg.carriers.grid_indices},
        {"kappa", cfg.sampling.kappa},
        {"fingerprint", fingerprint(cfg)},
    };
    return j;
}

/// Experiment manifest: everything needed for a byte-identical rerun.
/// Deliberately timestamp-free.
inline nlohmann::json make_manifest(const std::string& subcommand,
                                    const GenerativeConfig& gen, const RadarConfig& cfg,
                                    std::uint64_t seed,
                                    const std::vector<double>& snr_list, int trials,
                                    const std::vector<std::string>& outputs) {
    nlohmann::json j;
    j["tool"] = "summer";
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["seed"] = seed;
    j["snr_list_db"] = snr_list;
    j["trials"] = trials;
    j["config"] = config_to_json(gen, cfg);
    j["outputs"] = outputs;
    return j;
}

inline std::string targets_to_text(const RecoveredTargets& rec, const SparseTargetMap& map) {
    std::ostringstream os;
    os << "# summer-targets v1\n";
    os << "# s r u delay_s azimuth_sine doppler_hz amp_re amp_im iteration\n";
    for (std::size_t i = 0; i < map.entries.size(); ++i) {
        const SparseEntry& e = map.entries[i];
        const RecoveredTarget& t = rec.targets[i];
        os << e.delay_idx << " " << e.azimuth_idx << " " << e.doppler_idx << " "
           << detail::format_double(t.delay_s) << " "
           << detail::format_double(t.azimuth_sine) << " "
           << detail::format_double(t.doppler_hz) << " "
           << detail::format_double(t.amplitude.real()) << " "
           << detail::format_double(t.amplitude.imag()) << " " << e.iteration << "\n";
    }
    return os.str();
}

} // namespace summer

#endif
