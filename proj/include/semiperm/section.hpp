#pragma once

// Bracket operators on Laurent series ([x^>], [y^0], coefficient extraction),
// the Klein four-group acting by x -> 1/x and y -> 1/y, and orbit sums.

#include <array>
#include <string>
#include <string_view>

#include "semiperm/tseries.hpp"

namespace semiperm {

enum class Axis { X, Y };

/// Sign classes of an exponent. Zero, Pos and Neg partition the integers.
enum class SignRegion { All, Pos, Neg, NonNeg, NonPos, Zero };

constexpr bool region_contains(SignRegion r, long long k) noexcept {
    switch (r) {
    case SignRegion::All: return true;
    case SignRegion::Pos: return k > 0;
    case SignRegion::Neg: return k < 0;
    case SignRegion::NonNeg: return k >= 0;
    case SignRegion::NonPos: return k <= 0;
    case SignRegion::Zero: return k == 0;
    }
    return false;
}

std::string_view to_string(SignRegion r) noexcept;
SignRegion parse_sign_region(std::string_view text);

struct SectionSpec {
    Axis axis;
    SignRegion region;
};

template <class R>
LaurentPoly2<R> section(const LaurentPoly2<R>& p, SectionSpec s) {
    return p.filtered([s](int i, int j) { return region_contains(s.region, s.axis == Axis::X ? i : j); });
}

template <class R>
TSeries<R> section(const TSeries<R>& f, SectionSpec s) {
    return f.map([s](const LaurentPoly2<R>& p) { return section(p, s); });
}

/// [x^>][y^<]-style double section.
template <class R>
TSeries<R> section(const TSeries<R>& f, SignRegion x_region, SignRegion y_region) {
    return f.map([=](const LaurentPoly2<R>& p) {
        return p.filtered([=](int i, int j) { return region_contains(x_region, i) && region_contains(y_region, j); });
    });
}

/// Coefficient of axis^k, as a Laurent polynomial in the other variable
/// (the extracted axis carries exponent 0 in the result).
template <class R>
LaurentPoly2<R> coeff_of(const LaurentPoly2<R>& p, Axis axis, int k) {
    LaurentPoly2<R> r;
    for (const auto& [e, c] : p) {
        if (axis == Axis::X && e.x == k) r.add_term({0, e.y}, c);
        if (axis == Axis::Y && e.y == k) r.add_term({e.x, 0}, c);
    }
    return r;
}

template <class R>
TSeries<R> coeff_of(const TSeries<R>& f, Axis axis, int k) {
    return f.map([axis, k](const LaurentPoly2<R>& p) { return coeff_of(p, axis, k); });
}

/// F(x, y, t) -> F(y, x, t).
template <class R>
TSeries<R> swap_xy(const TSeries<R>& f) {
    return f.map([](const LaurentPoly2<R>& p) { return p.remapped([](int i, int j) { return Exponent{j, i}; }); });
}

/// Id, Phi: x -> 1/x, Psi: y -> 1/y, and their composite.
enum class GroupElement { Id, Phi, Psi, PhiPsi };

inline constexpr std::array<GroupElement, 4> kGroupElements = {GroupElement::Id, GroupElement::Phi,
                                                               GroupElement::Psi, GroupElement::PhiPsi};

constexpr bool flips_x(GroupElement g) noexcept { return g == GroupElement::Phi || g == GroupElement::PhiPsi; }
constexpr bool flips_y(GroupElement g) noexcept { return g == GroupElement::Psi || g == GroupElement::PhiPsi; }

constexpr GroupElement compose(GroupElement g, GroupElement h) noexcept {
    const bool fx = flips_x(g) != flips_x(h);
    const bool fy = flips_y(g) != flips_y(h);
    if (fx && fy) return GroupElement::PhiPsi;
    if (fx) return GroupElement::Phi;
    if (fy) return GroupElement::Psi;
    return GroupElement::Id;
}

/// +1 for Id and PhiPsi, -1 for Phi and Psi.
constexpr int orbit_sign(GroupElement g) noexcept { return flips_x(g) == flips_y(g) ? 1 : -1; }

template <class R>
LaurentPoly2<R> group_act(GroupElement g, const LaurentPoly2<R>& p) {
    const int sx = flips_x(g) ? -1 : 1;
    const int sy = flips_y(g) ? -1 : 1;
    return p.remapped([sx, sy](int i, int j) { return Exponent{sx * i, sy * j}; });
}

template <class R>
TSeries<R> group_act(GroupElement g, const TSeries<R>& f) {
    return f.map([g](const LaurentPoly2<R>& p) { return group_act(g, p); });
}

/// Sum over the group of sign(g) * g(x y p).
template <class R>
LaurentPoly2<R> orbit_sum(const LaurentPoly2<R>& p) {
    const LaurentPoly2<R> xyp = p.shifted(1, 1);
    LaurentPoly2<R> r;
    for (GroupElement g : kGroupElements) {
        if (orbit_sign(g) > 0) r += group_act(g, xyp);
        else r -= group_act(g, xyp);
    }
    return r;
}

template <class R>
TSeries<R> orbit_sum(const TSeries<R>& f) {
    return f.map([](const LaurentPoly2<R>& p) { return orbit_sum(p); });
}

} // namespace semiperm
