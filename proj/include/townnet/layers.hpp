#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace townnet {

using Vertex = std::uint32_t;

/// The seven interaction layers, ordered from the most intimate relation
/// (household) to the weakest (random encounters).
enum class LayerKind : std::uint8_t {
    Household = 0,    // L1
    BlueCollar = 1,   // L2
    WhiteCollar = 2,  // L3
    School = 3,       // L4
    Friendship = 4,   // L5
    Service = 5,      // L6
    Random = 6,       // L7
};

inline constexpr std::size_t kLayerCount = 7;

inline constexpr std::array<LayerKind, kLayerCount> kAllLayers = {
    LayerKind::Household, LayerKind::BlueCollar, LayerKind::WhiteCollar, LayerKind::School,
    LayerKind::Friendship, LayerKind::Service, LayerKind::Random};

constexpr std::size_t layer_index(LayerKind kind) { return static_cast<std::size_t>(kind); }

/// 1-based layer number, as in "L4".
constexpr int layer_number(LayerKind kind) { return static_cast<int>(kind) + 1; }

/// Config/CSV key for a layer.
constexpr std::string_view layer_name(LayerKind kind) {
    constexpr std::array<std::string_view, kLayerCount> names = {
        "household", "blue_collar", "white_collar", "school", "friendship", "service", "random"};
    return names[layer_index(kind)];
}

inline std::optional<LayerKind> layer_from_name(std::string_view name) {
    for (auto kind : kAllLayers)
        if (layer_name(kind) == name) return kind;
    return std::nullopt;
}

constexpr bool is_container_layer(LayerKind kind) {
    return kind == LayerKind::Household || kind == LayerKind::BlueCollar ||
           kind == LayerKind::WhiteCollar || kind == LayerKind::School;
}

constexpr bool is_star_layer(LayerKind kind) { return !is_container_layer(kind); }

/// Parses "L3", "l3", "3" or a layer name such as "school".
inline LayerKind parse_layer(std::string_view token) {
    if (auto named = layer_from_name(token)) return *named;
    std::string_view digits = token;
    if (!digits.empty() && (digits.front() == 'L' || digits.front() == 'l')) digits.remove_prefix(1);
    if (digits.size() == 1 && digits[0] >= '1' && digits[0] <= '7')
        return static_cast<LayerKind>(digits[0] - '1');
    throw std::invalid_argument("unknown layer '" + std::string(token) + "'");
}

/// A set of layers stored as a 7-bit mask.
class LayerSet {
public:
    constexpr LayerSet() = default;
    constexpr LayerSet(std::initializer_list<LayerKind> kinds) {
        for (auto k : kinds) insert(k);
    }

    static constexpr LayerSet all() { return LayerSet(0x7Fu); }

    /// {L1, ..., Lk}
    static constexpr LayerSet prefix(int k) {
        return LayerSet(static_cast<std::uint8_t>((1u << k) - 1u));
    }

    constexpr bool contains(LayerKind kind) const { return (mask_ >> layer_index(kind)) & 1u; }
    constexpr void insert(LayerKind kind) { mask_ |= static_cast<std::uint8_t>(1u << layer_index(kind)); }
    constexpr void erase(LayerKind kind) { mask_ &= static_cast<std::uint8_t>(~(1u << layer_index(kind))); }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr std::uint8_t mask() const { return mask_; }

    constexpr bool is_subset_of(LayerSet other) const { return (mask_ & ~other.mask_) == 0; }
    constexpr LayerSet operator|(LayerSet other) const {
        return LayerSet(static_cast<std::uint8_t>(mask_ | other.mask_));
    }
    constexpr bool operator==(const LayerSet&) const = default;

    std::vector<LayerKind> kinds() const {
        std::vector<LayerKind> out;
        for (auto k : kAllLayers)
            if (contains(k)) out.push_back(k);
        return out;
    }

    /// "L1,L2,L6"
    std::string to_string(char sep = ',') const {
        std::string out;
        for (auto k : kinds()) {
            if (!out.empty()) out += sep;
            out += 'L';
            out += static_cast<char>('0' + layer_number(k));
        }
        return out;
    }

    /// "[L1-L4]" for prefixes, otherwise "[L1,L2,L6]".
    std::string label() const {
        for (int k = 1; k <= static_cast<int>(kLayerCount); ++k) {
            if (*this == prefix(k))
                return k == 1 ? "[L1]" : "[L1-L" + std::to_string(k) + "]";
        }
        return "[" + to_string() + "]";
    }

private:
    constexpr explicit LayerSet(std::uint8_t mask) : mask_(mask) {}
    std::uint8_t mask_ = 0;
};

/// Parses a comma-separated list of layer tokens.
inline LayerSet parse_layer_set(std::string_view csv) {
    LayerSet set;
    while (!csv.empty()) {
        auto comma = csv.find(',');
        auto token = csv.substr(0, comma);
        if (!token.empty()) set.insert(parse_layer(token));
        if (comma == std::string_view::npos) break;
        csv.remove_prefix(comma + 1);
    }
    return set;
}

}  // namespace townnet
