#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crt/core.hpp"
#include "crt/errors.hpp"
#include "crt/phantom.hpp"
#include "crt/reconstruct.hpp"

namespace crt {

// Line-oriented `key = value` configuration with `#` comments and repeated
// `[bump]` sections. Key=value pairs may follow a section header on the same
// line. Unknown sections and keys are rejected with their line number.
//
//   d = 2
//   [bump] kind=mollifier center=0,2 radius=1 amplitude=1
//   [sinogram_grid]
//   u_extent = -14,14
//   n_u = 256
//   theta_min = 0.05
//   theta_max = 1.3
//   n_theta = 180

namespace detail {

struct ConfigEntry {
    std::string value;
    int line = 0;
};

struct ConfigSection {
    std::string name;  // "" for the global scope
    int line = 0;
    std::map<std::string, ConfigEntry> entries;
};

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline const std::map<std::string, std::set<std::string>>& config_schema() {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"", {"d"}},
        {"bump", {"kind", "center", "radius", "sigma", "amplitude"}},
        {"field_grid", {"x_extent", "n_x", "y_extent", "n_y"}},
        {"sinogram_grid", {"u_extent", "n_u", "theta_min", "theta_max", "n_theta"}},
        {"reconstruction",
         {"method", "band_fraction", "window", "pad_factor", "sphere_nodes", "interpolation"}},
        {"forward", {"n_s", "sphere_nodes"}},
    };
    return schema;
}

inline void add_entry(ConfigSection& sec, const std::string& key, const std::string& value,
                      int line) {
    const auto& schema = config_schema();
    auto it = schema.find(sec.name);
    if (it == schema.end() || !it->second.count(key))
        throw parse_error("line " + std::to_string(line) + ": unknown key '" + key + "'" +
                          (sec.name.empty() ? "" : " in section [" + sec.name + "]"));
    if (sec.entries.count(key))
        throw parse_error("line " + std::to_string(line) + ": duplicate key '" + key + "'");
    sec.entries[key] = ConfigEntry{value, line};
}

inline double parse_number(const ConfigEntry& e, const std::string& key) {
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(e.value, &used);
    } catch (const std::exception&) {
        throw parse_error("line " + std::to_string(e.line) + ": key '" + key +
                          "' expects a number, got '" + e.value + "'");
    }
    if (used != e.value.size())
        throw parse_error("line " + std::to_string(e.line) + ": key '" + key +
                          "' has trailing characters in '" + e.value + "'");
    return v;
}

inline std::vector<double> parse_number_list(const ConfigEntry& e, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        out.push_back(parse_number(ConfigEntry{item, e.line}, key));
    }
    if (out.empty())
        throw parse_error("line " + std::to_string(e.line) + ": key '" + key + "' is empty");
    return out;
}

inline std::size_t parse_count(const ConfigEntry& e, const std::string& key) {
    double v = parse_number(e, key);
    auto n = static_cast<std::size_t>(v);
    if (v != static_cast<double>(n))
        throw parse_error("line " + std::to_string(e.line) + ": key '" + key +
                          "' expects a non-negative integer");
    return n;
}

} // namespace detail

struct ConfigFile {
    detail::ConfigSection global;
    std::vector<detail::ConfigSection> sections;

    const detail::ConfigSection* find(const std::string& name) const {
        for (const auto& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    }
};

inline ConfigFile parse_config(const std::string& text) {
    ConfigFile cfg;
    detail::ConfigSection* current = &cfg.global;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        if (line[0] == '[') {
            auto close = line.find(']');
            if (close == std::string::npos)
                throw parse_error("line " + std::to_string(line_no) + ": unterminated '['");
            std::string name = detail::trim(line.substr(1, close - 1));
            if (!detail::config_schema().count(name))
                throw parse_error("line " + std::to_string(line_no) + ": unknown section [" +
                                  name + "]");
            cfg.sections.push_back(detail::ConfigSection{name, line_no, {}});
            current = &cfg.sections.back();
            line = detail::trim(line.substr(close + 1));
            if (line.empty()) continue;
            // inline key=value pairs after the header, whitespace separated
            std::stringstream ss(line);
            std::string tok;
            while (ss >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos)
                    throw parse_error("line " + std::to_string(line_no) +
                                      ": expected key=value, got '" + tok + "'");
                detail::add_entry(*current, detail::trim(tok.substr(0, eq)),
                                  detail::trim(tok.substr(eq + 1)), line_no);
            }
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error("line " + std::to_string(line_no) + ": expected key = value");
        detail::add_entry(*current, detail::trim(line.substr(0, eq)),
                          detail::trim(line.substr(eq + 1)), line_no);
    }
    return cfg;
}

namespace detail {

inline const ConfigEntry& require_key(const ConfigSection& sec, const std::string& key) {
    auto it = sec.entries.find(key);
    if (it == sec.entries.end())
        throw parse_error("section [" + sec.name + "] (line " + std::to_string(sec.line) +
                          "): missing key '" + key + "'");
    return it->second;
}

} // namespace detail

inline int config_dimension(const ConfigFile& cfg) {
    auto it = cfg.global.entries.find("d");
    if (it == cfg.global.entries.end()) throw parse_error("missing global key 'd'");
    auto d = static_cast<int>(detail::parse_count(it->second, "d"));
    if (d != 2 && d != 3) throw parse_error("line " + std::to_string(it->second.line) +
                                            ": d must be 2 or 3");
    return d;
}

inline PhantomSpec config_phantom(const ConfigFile& cfg) {
    int d = config_dimension(cfg);
    std::vector<Bump> bumps;
    for (const auto& sec : cfg.sections) {
        if (sec.name != "bump") continue;
        Bump b;
        const auto& kind = detail::require_key(sec, "kind");
        if (kind.value == "mollifier")
            b.kind = BumpKind::mollifier;
        else if (kind.value == "truncated-gaussian")
            b.kind = BumpKind::truncated_gaussian;
        else
            throw parse_error("line " + std::to_string(kind.line) +
                              ": kind must be 'mollifier' or 'truncated-gaussian'");
        auto center = detail::parse_number_list(detail::require_key(sec, "center"), "center");
        if (center.size() != static_cast<std::size_t>(d))
            throw parse_error("line " + std::to_string(sec.line) + ": center needs " +
                              std::to_string(d) + " coordinates");
        b.center = {center[0], d == 3 ? center[1] : 0.0, center[d - 1]};
        b.radius = detail::parse_number(detail::require_key(sec, "radius"), "radius");
        b.amplitude = detail::parse_number(detail::require_key(sec, "amplitude"), "amplitude");
        if (b.kind == BumpKind::truncated_gaussian)
            b.sigma = detail::parse_number(detail::require_key(sec, "sigma"), "sigma");
        else if (sec.entries.count("sigma"))
            throw parse_error("line " + std::to_string(sec.entries.at("sigma").line) +
                              ": 'sigma' applies to truncated-gaussian bumps only");
        bumps.push_back(b);
    }
    return make_phantom_spec(d, std::move(bumps));
}

inline VolumeGrid config_field_grid(const ConfigFile& cfg) {
    int d = config_dimension(cfg);
    const auto* sec = cfg.find("field_grid");
    if (!sec) throw parse_error("missing section [field_grid]");
    auto xe = detail::parse_number_list(detail::require_key(*sec, "x_extent"), "x_extent");
    auto nx = detail::parse_number_list(detail::require_key(*sec, "n_x"), "n_x");
    auto ye = detail::parse_number_list(detail::require_key(*sec, "y_extent"), "y_extent");
    auto ny = detail::parse_count(detail::require_key(*sec, "n_y"), "n_y");
    if (xe.size() != 2 * static_cast<std::size_t>(d - 1) ||
        nx.size() != static_cast<std::size_t>(d - 1) || ye.size() != 2)
        throw parse_error("section [field_grid] (line " + std::to_string(sec->line) +
                          "): extent/count sizes do not match d=" + std::to_string(d));
    std::vector<Interval> x;
    std::vector<std::size_t> n;
    for (int a = 0; a < d - 1; ++a) {
        x.push_back(Interval{xe[2 * a], xe[2 * a + 1]});
        n.push_back(static_cast<std::size_t>(nx[a]));
    }
    return make_volume_grid(d, std::move(x), std::move(n), Interval{ye[0], ye[1]}, ny);
}

inline ConeSinogramGrid config_sinogram_grid(const ConfigFile& cfg) {
    int d = config_dimension(cfg);
    const auto* sec = cfg.find("sinogram_grid");
    if (!sec) throw parse_error("missing section [sinogram_grid]");
    auto ue = detail::parse_number_list(detail::require_key(*sec, "u_extent"), "u_extent");
    auto nu = detail::parse_number_list(detail::require_key(*sec, "n_u"), "n_u");
    double th_lo = detail::parse_number(detail::require_key(*sec, "theta_min"), "theta_min");
    double th_hi = detail::parse_number(detail::require_key(*sec, "theta_max"), "theta_max");
    auto nt = detail::parse_count(detail::require_key(*sec, "n_theta"), "n_theta");
    if (ue.size() != 2 * static_cast<std::size_t>(d - 1) ||
        nu.size() != static_cast<std::size_t>(d - 1))
        throw parse_error("section [sinogram_grid] (line " + std::to_string(sec->line) +
                          "): extent/count sizes do not match d=" + std::to_string(d));
    std::vector<Interval> u;
    std::vector<std::size_t> n;
    for (int a = 0; a < d - 1; ++a) {
        u.push_back(Interval{ue[2 * a], ue[2 * a + 1]});
        n.push_back(static_cast<std::size_t>(nu[a]));
    }
    return make_sinogram_grid(d, std::move(u), std::move(n), Interval{th_lo, th_hi}, nt);
}

inline ReconstructionConfig config_reconstruction(const ConfigFile& cfg) {
    ReconstructionConfig rc;
    const auto* sec = cfg.find("reconstruction");
    if (!sec) return rc;
    if (auto it = sec->entries.find("method"); it != sec->entries.end()) {
        if (it->second.value == "fbp-angular")
            rc.method = ReconstructionMethod::fbp_angular;
        else if (it->second.value == "fbp-spatial")
            rc.method = ReconstructionMethod::fbp_spatial;
        else if (it->second.value == "fourier-hankel")
            rc.method = ReconstructionMethod::fourier_hankel;
        else
            throw parse_error("line " + std::to_string(it->second.line) +
                              ": method must be fbp-angular, fbp-spatial, or fourier-hankel");
    }
    if (auto it = sec->entries.find("band_fraction"); it != sec->entries.end())
        rc.filter.band_fraction = detail::parse_number(it->second, "band_fraction");
    if (auto it = sec->entries.find("window"); it != sec->entries.end()) {
        if (it->second.value == "none")
            rc.filter.window = Window::none;
        else if (it->second.value == "cosine")
            rc.filter.window = Window::cosine;
        else if (it->second.value == "hann")
            rc.filter.window = Window::hann;
        else
            throw parse_error("line " + std::to_string(it->second.line) +
                              ": window must be none, cosine, or hann");
    }
    if (auto it = sec->entries.find("pad_factor"); it != sec->entries.end())
        rc.filter.pad_factor = detail::parse_count(it->second, "pad_factor");
    if (auto it = sec->entries.find("sphere_nodes"); it != sec->entries.end())
        rc.sphere_nodes = detail::parse_count(it->second, "sphere_nodes");
    if (auto it = sec->entries.find("interpolation"); it != sec->entries.end()) {
        if (it->second.value != "linear")
            throw parse_error("line " + std::to_string(it->second.line) +
                              ": only linear interpolation is supported");
    }
    validate_filter_config(rc.filter);
    return rc;
}

struct ForwardParams {
    std::size_t n_s = 256;
    std::size_t sphere_nodes = 64;
};

inline ForwardParams config_forward(const ConfigFile& cfg) {
    ForwardParams fp;
    const auto* sec = cfg.find("forward");
    if (!sec) return fp;
    if (auto it = sec->entries.find("n_s"); it != sec->entries.end())
        fp.n_s = detail::parse_count(it->second, "n_s");
    if (auto it = sec->entries.find("sphere_nodes"); it != sec->entries.end())
        fp.sphere_nodes = detail::parse_count(it->second, "sphere_nodes");
    return fp;
}

} // namespace crt
