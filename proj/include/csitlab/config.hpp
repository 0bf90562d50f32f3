#pragma once

// Flat "key = value" channel configs, dB grids and CSV output.
//
// Grammar: one assignment per line, '#' starts a comment, blank lines are
// ignored. Keys (all optional, defaults in parentheses):
//   model_a.family  gaussian-iid | ring-phase   (gaussian-iid)
//   model_a.s       estimate std, or ring radius for ring-phase   (1)
//   model_a.eps     error std per component, > 0   (0.1)
//   model_h.*       same keys for the Terminal Z link
//   noise_var       (1)
//   power           (1)

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "csitlab/channel_model.hpp"
#include "csitlab/core.hpp"

namespace csitlab {

/// A config file is missing, malformed or fails validation.
class config_error : public precondition_error {
public:
    using precondition_error::precondition_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline const std::vector<std::string>& accepted_config_keys() {
    static const std::vector<std::string> keys{"model_a.family", "model_a.s", "model_a.eps", "model_h.family",
                                               "model_h.s",      "model_h.eps", "noise_var", "power"};
    return keys;
}

inline double parse_real(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw config_error("config: " + key + " = '" + text + "' is not a finite number");
    return v;
}

inline FadingModel build_model(const std::string& prefix, const std::map<std::string, std::string>& kv) {
    auto get = [&](const std::string& k, const std::string& fallback) {
        const auto it = kv.find(prefix + "." + k);
        return it == kv.end() ? fallback : it->second;
    };
    const std::string family = get("family", "gaussian-iid");
    const double s = parse_real(prefix + ".s", get("s", "1"));
    const double eps = parse_real(prefix + ".eps", get("eps", "0.1"));
    if (!(eps > 0.0)) {
        throw config_error("config: " + prefix + ".eps = " + get("eps", "") +
                           " must be > 0: the estimation error needs finite differential entropy");
    }
    try {
        if (family == "gaussian-iid") return FadingModel::gaussian_iid(s, eps);
        if (family == "ring-phase") return FadingModel::ring_phase(s, eps);
    } catch (const precondition_error& e) {
        throw config_error("config: " + prefix + ".s: " + e.what());
    }
    throw config_error("config: " + prefix + ".family = '" + family + "' (expected gaussian-iid or ring-phase)");
}

}  // namespace detail

[[nodiscard]] inline ChannelConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const auto& keys = detail::accepted_config_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            std::string list;
            for (const auto& k : keys) list += (list.empty() ? "" : ", ") + k;
            throw config_error("config: line " + std::to_string(line_no) + ": unknown key '" + key +
                               "'; accepted keys: " + list);
        }
        if (value.empty()) throw config_error("config: line " + std::to_string(line_no) + ": empty value for " + key);
        if (!kv.emplace(key, value).second)
            throw config_error("config: line " + std::to_string(line_no) + ": duplicate key " + key);
    }
    ChannelConfig c;
    c.model_a = detail::build_model("model_a", kv);
    c.model_h = detail::build_model("model_h", kv);
    if (const auto it = kv.find("noise_var"); it != kv.end()) c.noise_var = detail::parse_real("noise_var", it->second);
    if (const auto it = kv.find("power"); it != kv.end()) c.power = detail::parse_real("power", it->second);
    if (!(c.noise_var > 0.0)) throw config_error("config: noise_var must be > 0");
    if (!(c.power > 0.0)) throw config_error("config: power must be > 0");
    return c;
}

[[nodiscard]] inline ChannelConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str());
}

/// start, start + step, ... up to stop inclusive (within 1e-9 of a step).
[[nodiscard]] inline std::vector<double> db_grid(double start_db, double stop_db, double step_db) {
    require(std::isfinite(start_db) && std::isfinite(stop_db) && std::isfinite(step_db), "db grid: non-finite bound");
    require(step_db > 0.0, "db grid: step must be > 0");
    require(stop_db >= start_db, "db grid: stop must be >= start");
    const auto n = static_cast<std::size_t>(std::floor((stop_db - start_db) / step_db + 1e-9)) + 1;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = start_db + static_cast<double>(i) * step_db;
    return g;
}

/// Shortest round-tripping text for a double.
[[nodiscard]] inline std::string format_real(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Writes a header once, then rows of the same width.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), width_(header.size()) {
        write(header);
    }

    void row(const std::vector<std::string>& cells) {
        require(cells.size() == width_, "csv: row width does not match the header");
        write(cells);
    }

private:
    void write(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

    std::ostream& out_;
    std::size_t width_;
};

}  // namespace csitlab
