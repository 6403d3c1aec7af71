#pragma once

// Walk models: simple steps E, W, N, S in Z^2 with semipermeable barriers on
// the coordinate axes and an optional region constraint.
//
// A west step is forbidden FROM a point (0, j) with j in the west barrier
// domain; a south step is forbidden FROM (i, 0) with i in the south barrier
// domain. A step whose target leaves the region is forbidden.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "semiperm/section.hpp"

namespace semiperm {

enum class DomainSpec { All, Empty, Pos, Neg, NonNeg, NonPos };

constexpr bool contains(DomainSpec d, long long k) noexcept {
    switch (d) {
    case DomainSpec::All: return true;
    case DomainSpec::Empty: return false;
    case DomainSpec::Pos: return k > 0;
    case DomainSpec::Neg: return k < 0;
    case DomainSpec::NonNeg: return k >= 0;
    case DomainSpec::NonPos: return k <= 0;
    }
    return false;
}

std::string_view to_string(DomainSpec d) noexcept;
DomainSpec parse_domain(std::string_view text);

enum class PlaneRegion { FullPlane, QuarterPlane, AvoidNonNegQuadrant };

std::string_view to_string(PlaneRegion r) noexcept;
PlaneRegion parse_region(std::string_view text);

constexpr bool region_admits(PlaneRegion r, long long i, long long j) noexcept {
    switch (r) {
    case PlaneRegion::FullPlane: return true;
    case PlaneRegion::QuarterPlane: return i >= 0 && j >= 0;
    case PlaneRegion::AvoidNonNegQuadrant: return !(i >= 0 && j >= 0);
    }
    return false;
}

struct Point {
    int x = 0;
    int y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

struct ModelSpec {
    std::string id;
    Point start{-1, -1};
    DomainSpec west_barrier = DomainSpec::Empty;
    DomainSpec south_barrier = DomainSpec::Empty;
    PlaneRegion region = PlaneRegion::FullPlane;

    /// Throws std::invalid_argument when the start violates the region.
    void validate() const;

    [[nodiscard]] bool west_blocked(long long i, long long j) const noexcept {
        return i == 0 && contains(west_barrier, j);
    }
    [[nodiscard]] bool south_blocked(long long i, long long j) const noexcept {
        return j == 0 && contains(south_barrier, i);
    }
    [[nodiscard]] bool admits(long long i, long long j) const noexcept { return region_admits(region, i, j); }

    /// The start lies on a barrier line, so a barrier applies from step one.
    [[nodiscard]] bool degenerate_start() const noexcept {
        return west_blocked(start.x, start.y) || south_blocked(start.x, start.y);
    }

    /// Same barriers and region, different start.
    [[nodiscard]] ModelSpec with_start(Point p) const;

    /// "S2 start=-1,-1 west=all south=all region=full"
    [[nodiscard]] std::string describe() const;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// The named instances S2, S3, S4a, S4b, S5, QP, TQP.
const std::vector<ModelSpec>& model_catalog();
/// Looks up a catalog id; throws std::invalid_argument when unknown.
const ModelSpec& catalog_model(std::string_view id);

void to_json(nlohmann::json& j, const ModelSpec& m);
void from_json(const nlohmann::json& j, ModelSpec& m);

/// Reading of F(0,y,t) and F(x,0,t) in the functional equation:
/// F(0,y,t) = [x^0][y in west]F and F(x,0,t) = [y^0][x in south]F.
struct Interpretation {
    DomainSpec west;
    DomainSpec south;
    friend bool operator==(const Interpretation&, const Interpretation&) = default;
};

/// Parses "y-all,x-all" (west reading first, then south reading).
Interpretation parse_interpretation(std::string_view text);
std::string to_string(const Interpretation& in);

/// The reading that matches a model's barriers.
inline Interpretation matching_interpretation(const ModelSpec& m) { return {m.west_barrier, m.south_barrier}; }

} // namespace semiperm
