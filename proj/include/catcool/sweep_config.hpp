// sweep_config.hpp
// Plain-text key=value configuration for parameter sweeps

#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace catcool {

struct GridSpec {
    double min = 0.0;
    double max = 1.0;
    std::size_t points = 2;
    bool log_scale = false;

    std::vector<double> values() const {
        std::vector<double> v(points);
        for (std::size_t i = 0; i < points; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(points - 1);
            v[i] = log_scale ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                             : min + f * (max - min);
        }
        v.front() = min;
        v.back() = max;
        return v;
    }
};

struct SweepConfig {
    std::map<std::string, GridSpec> grids;
    std::optional<std::string> output;
    std::map<std::string, double> tolerances;
    std::map<std::string, std::string> values;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& text, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw invalid_input("cannot parse " + what + " '" + text + "'");
    }
    if (pos != text.size()) {
        throw invalid_input("cannot parse " + what + " '" + text + "'");
    }
    return v;
}

inline std::size_t parse_count(const std::string& text, const std::string& what) {
    const double v = parse_double(text, what);
    if (!(v >= 0.0) || v != std::floor(v)) {
        throw invalid_input(what + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

} // namespace detail

// Grid lines read "grid.<name> = min, max, points[, linear|log]".
inline GridSpec parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        parts.push_back(detail::trim(tok));
    }
    if (parts.size() < 3 || parts.size() > 4) {
        throw invalid_input("grid needs min, max, points and an optional scale");
    }
    GridSpec g;
    g.min = detail::parse_double(parts[0], "grid min");
    g.max = detail::parse_double(parts[1], "grid max");
    g.points = detail::parse_count(parts[2], "grid points");
    if (parts.size() == 4) {
        if (parts[3] == "log") {
            g.log_scale = true;
        } else if (parts[3] != "linear") {
            throw invalid_input("grid scale must be linear or log");
        }
    }
    if (g.points < 2) {
        throw invalid_input("grid needs at least two points");
    }
    if (!(g.min < g.max)) {
        throw invalid_input("grid needs min < max");
    }
    if (g.log_scale && !(g.min > 0.0)) {
        throw invalid_input("log grid needs a positive minimum");
    }
    return g;
}

inline SweepConfig parse_sweep_config(const std::string& text) {
    SweepConfig cfg;
    std::stringstream lines(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw invalid_input("config line " + std::to_string(lineno) + " has no '='");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) {
            throw invalid_input("config line " + std::to_string(lineno) + " has an empty key");
        }
        if (key.rfind("grid.", 0) == 0) {
            cfg.grids[key.substr(5)] = parse_grid(value);
        } else if (key.rfind("tol.", 0) == 0) {
            const double t = detail::parse_double(value, "tolerance");
            if (!(t > 0.0)) {
                throw invalid_input("tolerances must be positive");
            }
            cfg.tolerances[key.substr(4)] = t;
        } else if (key == "output") {
            cfg.output = value;
        } else {
            cfg.values[key] = value;
        }
    }
    return cfg;
}

} // namespace catcool
