#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wv/errors.hpp"
#include "wv/manifold.hpp"

namespace wv {

/// Manifold configuration file (UTF-8 JSON). Schema:
///
///   {
///     "fiber": {"unit_sphere": true, "dim": 2}
///             | {"dim": N, "area": A, "ricci_lower": R, "diameter": D?},
///     "warp":  {"family": "schwarzschild", "mass": m}
///             | {"family": "reissner-nordstrom", "mass": m, "charge": q}
///             | {"family": "cone", "slope": a, "offset": c}
///             | {"family": "profile-samples", "s_floor": s, "samples": [[s, omega], ...]}
///             | {"family": "warp-samples", "samples": [[r, h], ...]},
///     "probes": {"r_probe"?, "points_per_decade"?, "warp_horizon"?,
///                "avr_radii_scales"?: [..]}   // optional overrides
///   }
///
/// Unknown keys are rejected at every level.
struct ManifoldConfig {
    WarpedProduct manifold;
    ProbeSettings probes;
    std::vector<double> avr_radii_scales;  // empty means defaults
};

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("missing key \"" + key + "\" in " + where);
    if (!obj[key].is_number()) throw ConfigError("key \"" + key + "\" in " + where + " must be a number");
    return obj[key].get<double>();
}

inline FiberManifold parse_fiber(const nlohmann::json& obj) {
    if (!obj.is_object()) throw ConfigError("\"fiber\" must be an object");
    if (obj.value("unit_sphere", false)) {
        reject_unknown(obj, {"unit_sphere", "dim"}, "fiber");
        const double dim = require_number(obj, "dim", "fiber");
        return FiberManifold::unit_sphere(static_cast<int>(dim));
    }
    reject_unknown(obj, {"unit_sphere", "dim", "area", "ricci_lower", "diameter"}, "fiber");
    FiberManifold f;
    f.dim = static_cast<int>(require_number(obj, "dim", "fiber"));
    f.area = require_number(obj, "area", "fiber");
    f.ricci_lower = require_number(obj, "ricci_lower", "fiber");
    if (obj.contains("diameter")) f.diameter = require_number(obj, "diameter", "fiber");
    try {
        f.validate();
    } catch (const InvalidParameters& e) {
        throw ConfigError(std::string("fiber: ") + e.what());
    }
    return f;
}

inline std::pair<std::vector<double>, std::vector<double>> parse_pairs(const nlohmann::json& arr,
                                                                       const std::string& where) {
    if (!arr.is_array() || arr.size() < 3)
        throw ConfigError(where + " must be an array of at least 3 [x, y] pairs");
    std::vector<double> xs, ys;
    for (const auto& item : arr) {
        if (!item.is_array() || item.size() != 2)
            throw ConfigError(where + " entries must be [x, y] pairs");
        xs.push_back(item[0].get<double>());
        ys.push_back(item[1].get<double>());
    }
    return {xs, ys};
}

inline WarpedProduct parse_warp(const nlohmann::json& obj, FiberManifold fiber, double horizon) {
    if (!obj.is_object()) throw ConfigError("\"warp\" must be an object");
    if (!obj.contains("family") || !obj["family"].is_string())
        throw ConfigError("warp needs a string \"family\"");
    const std::string family = obj["family"].get<std::string>();
    try {
        if (family == "schwarzschild") {
            reject_unknown(obj, {"family", "mass"}, "warp");
            return schwarzschild(require_number(obj, "mass", "warp"), fiber.dim + 1, horizon);
        }
        if (family == "reissner-nordstrom") {
            reject_unknown(obj, {"family", "mass", "charge"}, "warp");
            return reissner_nordstrom(require_number(obj, "mass", "warp"),
                                      require_number(obj, "charge", "warp"), fiber.dim + 1, horizon);
        }
        if (family == "cone") {
            reject_unknown(obj, {"family", "slope", "offset"}, "warp");
            return cone(require_number(obj, "slope", "warp"), require_number(obj, "offset", "warp"),
                        fiber);
        }
        if (family == "profile-samples") {
            reject_unknown(obj, {"family", "s_floor", "samples"}, "warp");
            const double s_floor = require_number(obj, "s_floor", "warp");
            auto [ss, ws] = parse_pairs(obj["samples"], "warp.samples");
            auto spline = std::make_shared<detail::CubicSpline>(std::move(ss), std::move(ws));
            auto omega = [spline](double sv) { return spline->value(sv); };
            auto omega_prime = [spline](double sv) { return spline->derivative(sv); };
            return from_profile(omega, omega_prime, s_floor, fiber, horizon);
        }
        if (family == "warp-samples") {
            reject_unknown(obj, {"family", "samples"}, "warp");
            auto [rs, hs] = parse_pairs(obj["samples"], "warp.samples");
            auto warp = WarpFunction::tabulated(std::move(rs), std::move(hs));
            warp.validate_positive(1e4);
            return WarpedProduct::make(fiber, warp);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const InputError& e) {
        throw ConfigError(std::string("warp: ") + e.what());
    }
    throw ConfigError("unknown warp family \"" + family + "\"");
}

}  // namespace detail

inline ManifoldConfig parse_config(const nlohmann::json& root) {
    if (!root.is_object()) throw ConfigError("configuration root must be an object");
    detail::reject_unknown(root, {"fiber", "warp", "probes"}, "configuration root");
    if (!root.contains("fiber") || !root.contains("warp"))
        throw ConfigError("configuration needs \"fiber\" and \"warp\"");

    ManifoldConfig cfg;
    double horizon = 0.0;
    if (root.contains("probes")) {
        const auto& probes = root["probes"];
        detail::reject_unknown(probes,
                               {"r_probe", "points_per_decade", "warp_horizon", "avr_radii_scales"},
                               "probes");
        if (probes.contains("r_probe")) cfg.probes.r_probe = probes["r_probe"].get<double>();
        if (probes.contains("points_per_decade"))
            cfg.probes.points_per_decade = probes["points_per_decade"].get<int>();
        if (probes.contains("warp_horizon")) horizon = probes["warp_horizon"].get<double>();
        if (probes.contains("avr_radii_scales"))
            for (const auto& v : probes["avr_radii_scales"])
                cfg.avr_radii_scales.push_back(v.get<double>());
    }
    FiberManifold fiber = detail::parse_fiber(root["fiber"]);
    cfg.manifold = detail::parse_warp(root["warp"], fiber, horizon);
    return cfg;
}

inline ManifoldConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file: " + path);
    nlohmann::json root;
    try {
        in >> root;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    return parse_config(root);
}

}  // namespace wv
