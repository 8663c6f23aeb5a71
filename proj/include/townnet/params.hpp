#pragma once

// Generator parameters: defaults, validation and the JSON config format.
//
// Config documents are partial overrides of default_params(). Absent keys keep
// their defaults, unknown keys are rejected. Layer blocks are keyed by
// layer_name(): household, blue_collar, white_collar, school, friendship,
// service, random.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "townnet/layers.hpp"

namespace townnet {

/// Skew-normal household size distribution (shape, location, scale).
struct HouseholdDist {
    double alpha = 3.96;
    double xi = 1.22;
    double omega = 1.75;

    bool operator==(const HouseholdDist&) const = default;
};

struct LayerParams {
    /// Population fraction holding the layer's role. Absent for household,
    /// friendship and random layers, which have no role.
    std::optional<double> gamma_ratio;
    /// Mean / std of container capacity or star connection count.
    double mu = 0.0;
    double sigma = 0.0;
    /// Displacement mean / std; absent means inherit ModelParams::mu0 / sigma0.
    std::optional<double> mu_d;
    std::optional<double> sigma_d;
    /// Edge weight of the layer is beta^beta_exponent.
    int beta_exponent = 1;

    bool operator==(const LayerParams&) const = default;
};

/// How the sampled connection count k_i of a star layer is read.
enum class StarCountMode : std::uint8_t {
    /// k_i is i's capacity, the most contacts it holds in the layer. Contacts
    /// received from earlier agents count towards it, and a hit on an eligible
    /// agent already at capacity is dropped (mean layer degree about mu).
    Degree,
    /// k_i is the number of contacts i initiates; contacts received from
    /// other agents come on top (mean layer degree about 2 mu).
    Outgoing,
};

constexpr std::string_view star_count_name(StarCountMode mode) {
    return mode == StarCountMode::Degree ? "degree" : "outgoing";
}

struct ModelParams {
    std::int64_t n_houses = 10000;
    HouseholdDist household;
    std::int64_t teachers_per_class = 3;
    std::array<LayerParams, kLayerCount> layers;
    double mu0 = 0.0;
    double sigma0 = 1000.0;
    StarCountMode star_count = StarCountMode::Degree;

    LayerParams& layer(LayerKind kind) { return layers[layer_index(kind)]; }
    const LayerParams& layer(LayerKind kind) const { return layers[layer_index(kind)]; }

    double displacement_mean(LayerKind kind) const { return layer(kind).mu_d.value_or(mu0); }
    double displacement_std(LayerKind kind) const { return layer(kind).sigma_d.value_or(sigma0); }
    double gamma(LayerKind kind) const { return layer(kind).gamma_ratio.value_or(0.0); }
    int beta_exponent(LayerKind kind) const { return layer(kind).beta_exponent; }

    bool operator==(const ModelParams&) const = default;
};

/// Layers whose role fraction is a required parameter.
constexpr bool layer_has_gamma(LayerKind kind) {
    return kind == LayerKind::BlueCollar || kind == LayerKind::WhiteCollar ||
           kind == LayerKind::School || kind == LayerKind::Service;
}

inline ModelParams default_params() {
    ModelParams p;
    auto set = [&p](LayerKind kind, std::optional<double> gamma, double mu, double sigma, int exponent) {
        auto& lp = p.layer(kind);
        lp.gamma_ratio = gamma;
        lp.mu = mu;
        lp.sigma = sigma;
        lp.beta_exponent = exponent;
    };
    set(LayerKind::Household, std::nullopt, 0.0, 0.0, 0);
    set(LayerKind::BlueCollar, 0.21, 7.6, 3.0, 1);
    set(LayerKind::WhiteCollar, 0.27, 7.6, 3.0, 1);
    set(LayerKind::School, 0.247, 19.6, 3.0, 1);
    set(LayerKind::Friendship, std::nullopt, 12.3, 5.0, 1);
    set(LayerKind::Service, 0.15, 50.0, 20.0, 2);
    set(LayerKind::Random, std::nullopt, 50.0, 20.0, 3);
    return p;
}

/// Returns every violated invariant as "<field path>: <message>"; empty means valid.
inline std::vector<std::string> validate(const ModelParams& p) {
    std::vector<std::string> errors;
    auto fail = [&errors](std::string path, std::string_view msg) {
        errors.push_back(std::move(path) + ": " + std::string(msg));
    };
    auto finite = [](double x) { return std::isfinite(x); };

    if (p.n_houses < 1) fail("n_houses", "must be at least 1");
    if (p.teachers_per_class < 0) fail("teachers_per_class", "must be non-negative");
    if (!finite(p.household.alpha)) fail("household.alpha", "must be finite");
    if (!finite(p.household.xi)) fail("household.xi", "must be finite");
    if (!(p.household.omega > 0.0) || !finite(p.household.omega))
        fail("household.omega", "omega must be positive");
    if (!finite(p.mu0)) fail("mu0", "must be finite");
    if (!(p.sigma0 >= 0.0) || !finite(p.sigma0)) fail("sigma0", "must be non-negative");

    for (auto kind : kAllLayers) {
        const auto& lp = p.layer(kind);
        const std::string path = "layers." + std::string(layer_name(kind));
        if (lp.gamma_ratio) {
            if (!layer_has_gamma(kind))
                fail(path + ".gamma_ratio", "layer has no role fraction");
            else if (!(*lp.gamma_ratio >= 0.0 && *lp.gamma_ratio <= 1.0))
                fail(path + ".gamma_ratio", "must lie in [0, 1]");
        } else if (layer_has_gamma(kind)) {
            fail(path + ".gamma_ratio", "required for this layer");
        }
        if (!finite(lp.mu)) fail(path + ".mu", "must be finite");
        if (!(lp.sigma >= 0.0) || !finite(lp.sigma)) fail(path + ".sigma", "must be non-negative");
        if (lp.mu_d && !finite(*lp.mu_d)) fail(path + ".mu_d", "must be finite");
        if (lp.sigma_d && !(*lp.sigma_d >= 0.0 && finite(*lp.sigma_d)))
            fail(path + ".sigma_d", "must be non-negative");
        if (lp.beta_exponent < 0 || lp.beta_exponent > 3)
            fail(path + ".beta_exponent", "must be one of 0, 1, 2, 3");
    }

    const double roles = p.gamma(LayerKind::BlueCollar) + p.gamma(LayerKind::WhiteCollar) +
                         p.gamma(LayerKind::School);
    if (roles > 1.0 + 1e-12) fail("layers", "role ratios exceed 1 (blue + white + student)");
    if (p.gamma(LayerKind::Service) > p.gamma(LayerKind::BlueCollar) + 1e-12)
        fail("layers.service.gamma_ratio", "service workers are drawn from blue-collar workers; must not exceed blue_collar.gamma_ratio");
    return errors;
}

/// Raised by load_params; carries every problem found in the document.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors)
        : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

    const std::vector<std::string>& errors() const { return errors_; }

private:
    static std::string join(const std::vector<std::string>& errors) {
        std::string out = "invalid config";
        for (const auto& e : errors) out += "\n  " + e;
        return out;
    }
    std::vector<std::string> errors_;
};

inline nlohmann::json to_json(const ModelParams& p) {
    nlohmann::json doc;
    doc["n_houses"] = p.n_houses;
    doc["household"] = {{"alpha", p.household.alpha}, {"xi", p.household.xi}, {"omega", p.household.omega}};
    doc["teachers_per_class"] = p.teachers_per_class;
    doc["mu0"] = p.mu0;
    doc["sigma0"] = p.sigma0;
    doc["star_count"] = std::string(star_count_name(p.star_count));
    auto& layers = doc["layers"];
    for (auto kind : kAllLayers) {
        const auto& lp = p.layer(kind);
        nlohmann::json block;
        if (lp.gamma_ratio) block["gamma_ratio"] = *lp.gamma_ratio;
        block["mu"] = lp.mu;
        block["sigma"] = lp.sigma;
        if (lp.mu_d) block["mu_d"] = *lp.mu_d;
        if (lp.sigma_d) block["sigma_d"] = *lp.sigma_d;
        block["beta_exponent"] = lp.beta_exponent;
        layers[std::string(layer_name(kind))] = std::move(block);
    }
    return doc;
}

inline std::string serialize(const ModelParams& p) { return to_json(p).dump(2); }

namespace detail {

inline void line_column(std::string_view text, std::size_t byte, std::size_t& line, std::size_t& column) {
    line = 1;
    column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
}

class Overlay {
public:
    explicit Overlay(std::vector<std::string>& errors) : errors_(errors) {}

    void number(const nlohmann::json& v, const std::string& path, double& out) {
        if (!v.is_number()) return type_error(path, "a number");
        out = v.get<double>();
    }
    void number(const nlohmann::json& v, const std::string& path, std::optional<double>& out) {
        if (v.is_null()) {
            out.reset();
            return;
        }
        double x = 0.0;
        if (!v.is_number()) return type_error(path, "a number or null");
        x = v.get<double>();
        out = x;
    }
    template <class Int>
    void integer(const nlohmann::json& v, const std::string& path, Int& out) {
        if (v.is_number_integer()) {
            out = static_cast<Int>(v.get<std::int64_t>());
        } else if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) {
            out = static_cast<Int>(v.get<double>());
        } else {
            type_error(path, "an integer");
        }
    }
    bool object(const nlohmann::json& v, const std::string& path) {
        if (v.is_object()) return true;
        type_error(path, "an object");
        return false;
    }
    void unknown(const std::string& path) { errors_.push_back(path + ": unknown key"); }

private:
    void type_error(const std::string& path, std::string_view expected) {
        errors_.push_back(path + ": expected " + std::string(expected));
    }
    std::vector<std::string>& errors_;
};

inline std::string join_path(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

inline void apply_layer(Overlay& ov, const nlohmann::json& block, const std::string& path, LayerParams& lp) {
    if (!ov.object(block, path)) return;
    for (const auto& [key, value] : block.items()) {
        const auto at = join_path(path, key);
        if (key == "gamma_ratio") ov.number(value, at, lp.gamma_ratio);
        else if (key == "mu") ov.number(value, at, lp.mu);
        else if (key == "sigma") ov.number(value, at, lp.sigma);
        else if (key == "mu_d") ov.number(value, at, lp.mu_d);
        else if (key == "sigma_d") ov.number(value, at, lp.sigma_d);
        else if (key == "beta_exponent") ov.integer(value, at, lp.beta_exponent);
        else ov.unknown(at);
    }
}

}  // namespace detail

/// Overlays a JSON document on `base`. Throws ConfigError listing parse,
/// type, unknown-key and validation problems.
inline ModelParams load_params(std::string_view document, ModelParams base = default_params()) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 0, column = 0;
        detail::line_column(document, e.byte, line, column);
        throw ConfigError({"parse error at line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + e.what()});
    }

    std::vector<std::string> errors;
    detail::Overlay ov(errors);
    ModelParams p = std::move(base);
    if (ov.object(doc, "<root>")) {
        for (const auto& [key, value] : doc.items()) {
            if (key == "n_houses") {
                ov.integer(value, key, p.n_houses);
            } else if (key == "teachers_per_class") {
                ov.integer(value, key, p.teachers_per_class);
            } else if (key == "mu0") {
                ov.number(value, key, p.mu0);
            } else if (key == "sigma0") {
                ov.number(value, key, p.sigma0);
            } else if (key == "star_count") {
                if (value == "degree") p.star_count = StarCountMode::Degree;
                else if (value == "outgoing") p.star_count = StarCountMode::Outgoing;
                else errors.push_back("star_count: expected \"degree\" or \"outgoing\"");
            } else if (key == "household") {
                if (!ov.object(value, key)) continue;
                for (const auto& [hkey, hval] : value.items()) {
                    const auto at = detail::join_path(key, hkey);
                    if (hkey == "alpha") ov.number(hval, at, p.household.alpha);
                    else if (hkey == "xi") ov.number(hval, at, p.household.xi);
                    else if (hkey == "omega") ov.number(hval, at, p.household.omega);
                    else ov.unknown(at);
                }
            } else if (key == "layers") {
                if (!ov.object(value, key)) continue;
                for (const auto& [lkey, lval] : value.items()) {
                    const auto at = detail::join_path(key, lkey);
                    if (auto kind = layer_from_name(lkey))
                        detail::apply_layer(ov, lval, at, p.layer(*kind));
                    else
                        ov.unknown(at);
                }
            } else {
                ov.unknown(key);
            }
        }
    }
    if (errors.empty()) errors = validate(p);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return p;
}

/// 64-bit FNV-1a over the canonical serialization plus the master seed.
inline std::string params_fingerprint(const ModelParams& p, std::uint64_t master_seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ULL;
    };
    for (char c : to_json(p).dump()) feed(static_cast<unsigned char>(c));
    for (int i = 0; i < 8; ++i) feed(static_cast<unsigned char>(master_seed >> (8 * i)));
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace townnet
