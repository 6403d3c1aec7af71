#pragma once

// Kernel-method closed forms as truncated series.
//
// Every rational factor is 1/(1 - S t), expanded as K = sum S^n t^n; every
// other operation is a monomial product, a sign-region section or a
// coefficient extraction. The results are meant to be compared with the
// enumerator term by term.

#include <stdexcept>
#include <string>

#include "semiperm/enumerate.hpp"
#include "semiperm/model.hpp"
#include "semiperm/section.hpp"
#include "semiperm/tseries.hpp"

namespace semiperm {

namespace detail {

template <class R>
LaurentPoly2<R> mono(int i, int j, const R& c) {
    return LaurentPoly2<R>::monomial(i, j, c);
}

// xy - xbar y - x ybar + xbar ybar
template <class Ring>
LaurentPoly2<typename Ring::value_type> orbit_numerator(const Ring& ring) {
    const auto one = ring.from_int(1);
    return mono(1, 1, one) - mono(-1, 1, one) - mono(1, -1, one) + mono(-1, -1, one);
}

template <class R>
void require_order(const TSeries<R>& f, int order, const char* what) {
    if (f.order() < order) {
        throw TruncationError(std::string(what) + " is known to order " + std::to_string(f.order()) +
                              ", order " + std::to_string(order) + " was requested");
    }
}

} // namespace detail

/// sum_{n <= order} S^n t^n
template <class Ring>
TSeries<typename Ring::value_type> kernel_inverse_series(int order, const Ring& ring) {
    using R = typename Ring::value_type;
    TSeries<R> k(order);
    const auto s = step_polynomial(ring);
    LaurentPoly2<R> power = detail::mono(0, 0, ring.from_int(1));
    for (int n = 0; n <= order; ++n) {
        k[n] = power;
        if (n < order) power = power * s;
    }
    return k;
}

/// The quarter-plane series: xy Q = [x^>][y^>]((xy - xbar y - x ybar + xbar ybar) K).
template <class Ring>
TSeries<typename Ring::value_type> quarter_plane_Q(int order, const Ring& ring) {
    const auto k = kernel_inverse_series(order, ring);
    const auto positive = section(detail::orbit_numerator(ring) * k, SignRegion::Pos, SignRegion::Pos);
    return positive.shifted(-1, -1);
}

template <class R>
struct S2Compartments {
    TSeries<R> f1; ///< i < 0, j < 0
    TSeries<R> f2; ///< i < 0, j >= 0
    TSeries<R> f3; ///< i >= 0, j < 0
    TSeries<R> f4; ///< i >= 0, j >= 0
    [[nodiscard]] TSeries<R> sum() const { return f1 + f2 + f3 + f4; }
};

/// Closed forms for the four compartments of the model whose axes are
/// one-way (west and south barriers on the whole axes), started at (-1,-1).
template <class Ring>
S2Compartments<typename Ring::value_type> f_compartments_s2(int order, const Ring& ring) {
    using R = typename Ring::value_type;
    const R one = ring.from_int(1);
    const auto k = kernel_inverse_series(order, ring);
    const auto orbit_k = detail::orbit_numerator(ring) * k;
    const auto q = section(orbit_k, SignRegion::Pos, SignRegion::Pos).shifted(-1, -1);

    S2Compartments<R> out;
    // F1(x, y) = xbar ybar Q(xbar, ybar)
    out.f1 = group_act(GroupElement::PhiPsi, q).shifted(-1, -1);

    const auto y_diff = detail::mono(0, 1, one) - detail::mono(0, -1, one);
    const auto x_diff = detail::mono(1, 0, one) - detail::mono(-1, 0, one);
    const auto a = section(y_diff * k, {Axis::Y, SignRegion::Pos});
    const auto b = coeff_of(orbit_k, Axis::Y, -1);
    out.f2 = section(a * b, {Axis::X, SignRegion::Neg}).times_t(1).shifted(0, -1);
    out.f3 = swap_xy(out.f2);

    const auto inner = coeff_of(y_diff * b * k, Axis::X, -1);
    const auto cx = section(x_diff * k, {Axis::X, SignRegion::Pos});
    const auto half = section(inner * cx, {Axis::Y, SignRegion::Pos}).times_t(2).shifted(-1, -1);
    out.f4 = half + swap_xy(half);
    return out;
}

/// Order of sectioning and of y -> ybar in the term [y^<=]F1(x, ybar, t).
enum class SubstitutionOrder {
    SubstituteFirst, ///< evaluate F1 at ybar, then keep nonpositive powers of y
    SectionFirst,    ///< keep nonpositive powers of y in F1, then substitute
};

/// Quadrant part of the model whose barriers are the nonnegative half-axes,
/// from F1, its part outside the closed quadrant:
///   F2 = xbar ybar t [x^>][y^>]((H(x,y) + H(y,x)) K),
///   H(x,y) = (xbar - x) [xbar](ybar [y^<=]F1(x,ybar) - y [y^>=]F1(x,y)).
/// Only SubstituteFirst reproduces the enumerated series.
template <class Ring>
TSeries<typename Ring::value_type> f2_s3(int order, const TSeries<typename Ring::value_type>& f1, const Ring& ring,
                                         SubstitutionOrder how = SubstitutionOrder::SubstituteFirst) {
    using R = typename Ring::value_type;
    detail::require_order(f1, order, "F1");
    const R one = ring.from_int(1);
    const auto f = f1.truncated(order);
    const auto reflected = how == SubstitutionOrder::SubstituteFirst
                               ? section(group_act(GroupElement::Psi, f), {Axis::Y, SignRegion::NonPos})
                               : group_act(GroupElement::Psi, section(f, {Axis::Y, SignRegion::NonPos}));
    const auto upper = section(f, {Axis::Y, SignRegion::NonNeg});
    const auto bracket = coeff_of(reflected.shifted(0, -1) - upper.shifted(0, 1), Axis::X, -1);
    const auto h = (detail::mono(-1, 0, one) - detail::mono(1, 0, one)) * bracket;
    const auto k = kernel_inverse_series(order, ring);
    return section((h + swap_xy(h)) * k, SignRegion::Pos, SignRegion::Pos).times_t(1).shifted(-1, -1);
}

template <class R>
struct DiagonalParts {
    TSeries<R> d; ///< i = j >= 0
    TSeries<R> l; ///< i >= 0, j <= i - 1
    TSeries<R> u; ///< j >= 0, i <= j - 1
};

/// Splits a series supported where i >= 0 or j >= 0 into diagonal, lower and
/// upper parts. Throws std::invalid_argument on a term with i < 0 and j < 0,
/// which none of the three parts holds.
template <class R>
DiagonalParts<R> diag_sections(const TSeries<R>& f) {
    for (int n = 0; n <= f.order(); ++n) {
        for (const auto& [e, c] : f[n]) {
            if (e.x < 0 && e.y < 0) throw std::invalid_argument("diag_sections: term with i < 0 and j < 0");
        }
    }
    auto keep = [&f](auto pred) {
        return f.map([&pred](const LaurentPoly2<R>& p) { return p.filtered(pred); });
    };
    return {keep([](int i, int j) { return i == j && i >= 0; }),
            keep([](int i, int j) { return i >= 0 && j <= i - 1; }),
            keep([](int i, int j) { return j >= 0 && i <= j - 1; })};
}

/// The power-series root X(y, t) = t + (y + ybar) t^2 + ... of the kernel:
/// X = t (X^2 + (y + ybar) X + 1), by fixed-point iteration.
template <class Ring>
TSeries<typename Ring::value_type> kernel_root_X(int order, const Ring& ring) {
    using R = typename Ring::value_type;
    const R one = ring.from_int(1);
    const auto one_s = TSeries<R>::constant(detail::mono(0, 0, one), order);
    const auto yy = detail::mono(0, 1, one) + detail::mono(0, -1, one);
    TSeries<R> x(order);
    // Each pass fixes one more coefficient.
    for (int pass = 0; pass <= order; ++pass) x = (x * x + yy * x + one_s).times_t(1);
    return x;
}

/// X - t (X^2 + (y + ybar) X + 1); zero exactly when X is the kernel root.
template <class Ring>
TSeries<typename Ring::value_type> kernel_root_residual(const TSeries<typename Ring::value_type>& x,
                                                        const Ring& ring) {
    using R = typename Ring::value_type;
    const R one = ring.from_int(1);
    const auto yy = detail::mono(0, 1, one) + detail::mono(0, -1, one);
    const auto one_s = TSeries<R>::constant(detail::mono(0, 0, one), x.order());
    return x - (x * x + yy * x + one_s).times_t(1);
}

/// f(X(y,t), y, t) by Horner's rule over the x-exponents of f. Requires f to
/// hold no negative powers of x and X to have no t^0 term, so that the result
/// is determined through order min(f.order(), X.order()).
template <class R>
TSeries<R> substitute_x(const TSeries<R>& f, const TSeries<R>& x) {
    if (!x[0].is_zero()) throw std::invalid_argument("substitute_x: X must vanish at t = 0");
    int max_i = 0;
    for (int n = 0; n <= f.order(); ++n) {
        for (const auto& [e, c] : f[n]) {
            if (e.x < 0) throw std::invalid_argument("substitute_x: negative power of x");
            max_i = std::max(max_i, e.x);
        }
    }
    const int order = std::min(f.order(), x.order());
    TSeries<R> acc(order);
    for (int i = max_i; i >= 0; --i) acc = acc * x + coeff_of(f, Axis::X, i).truncated(order);
    return acc;
}

/// Which ingredient of the star identity to keep.
enum class StarVariant {
    Full,         ///< the identity as stated
    DropDiagonal, ///< replace the diagonal part by 0 (the check must then fail)
};

/// For the model with barriers on the negative half-axes, with F1 = [x^<][y^<]F
/// and F2 = F - F1 split by diag_sections into D + L + U:
///   (1 - S t) L - t [xbar]F1 - (t x + t ybar - 1/2) D + t xbar [x^0]L.
/// Every input comes from the enumerator. Vanishes through `order` for the
/// start (-1,-1). Needs 1/2 in the ring.
template <class Ring>
TSeries<typename Ring::value_type> star_residual(int order, const Ring& ring, Point start = {-1, -1},
                                                 StarVariant variant = StarVariant::Full) {
    using R = typename Ring::value_type;
    const R half = ring.half();
    const R one = ring.from_int(1);
    const auto model = catalog_model("S4a").with_start(start);
    const auto f = enumerate_series(model, order, ring);
    const auto f1 = section(f, SignRegion::Neg, SignRegion::Neg);
    auto parts = diag_sections(f - f1);
    if (variant == StarVariant::DropDiagonal) parts.d = TSeries<R>(order);
    const auto s = step_polynomial(ring);
    const auto& l = parts.l;
    TSeries<R> res = l - (s * l).times_t(1);
    res -= coeff_of(f1, Axis::X, -1).times_t(1);
    res -= ((detail::mono(1, 0, one) + detail::mono(0, -1, one)) * parts.d).times_t(1);
    res += half * parts.d;
    res += coeff_of(l, Axis::X, 0).shifted(-1, 0).times_t(1);
    return res;
}

/// [x^0]L - X [xbar]F1 - X (X + ybar) D(X) + (1/2) X D(X) / t, for the same
/// model and split as star_residual, X the kernel root (plus t^2 when
/// `perturb` is set). Vanishes through order - 1, the last order at which
/// D(X)/t is known.
template <class Ring>
TSeries<typename Ring::value_type> x0_f2l_identity(int order, const Ring& ring, bool perturb = false) {
    using R = typename Ring::value_type;
    if (order < 1) throw std::invalid_argument("x0_f2l_identity needs order >= 1");
    const R half = ring.half();
    const R one = ring.from_int(1);
    const auto f = enumerate_series(catalog_model("S4a"), order, ring);
    const auto f1 = section(f, SignRegion::Neg, SignRegion::Neg);
    const auto parts = diag_sections(f - f1);
    auto x = kernel_root_X(order, ring);
    if (perturb) x[2] += detail::mono(0, 0, one);
    const auto dx = substitute_x(parts.d, x);
    const auto dx_over_t = dx.divided_by_t();
    const auto ybar = TSeries<R>::constant(detail::mono(0, -1, one), order);
    TSeries<R> res = coeff_of(parts.l, Axis::X, 0).truncated(order - 1);
    res -= x * coeff_of(f1, Axis::X, -1);
    res -= x * (x + ybar) * dx;
    res += half * (x * dx_over_t);
    return res;
}

/// (1 - S t) F - x^s1 y^s2 + t xbar [x^0][y in west]F + t ybar [y^0][x in south]F
/// for the enumerated series F of `m`. Zero exactly when the interpretation
/// describes the walks of `m`.
template <class Ring>
TSeries<typename Ring::value_type> verify_functional_equation(const ModelSpec& m, const Interpretation& interp,
                                                              int order, const Ring& ring) {
    using R = typename Ring::value_type;
    const auto f = enumerate_series(m, order, ring);
    const auto s = step_polynomial(ring);
    const auto on_y_axis = f.map([&](const LaurentPoly2<R>& p) {
        return p.filtered([&](int i, int j) { return i == 0 && contains(interp.west, j); });
    });
    const auto on_x_axis = f.map([&](const LaurentPoly2<R>& p) {
        return p.filtered([&](int i, int j) { return j == 0 && contains(interp.south, i); });
    });
    TSeries<R> res = f - (s * f).times_t(1);
    res[0] -= detail::mono(m.start.x, m.start.y, ring.from_int(1));
    res += on_y_axis.shifted(-1, 0).times_t(1);
    res += on_x_axis.shifted(0, -1).times_t(1);
    return res;
}

/// orbit_sum((1 - S t) F) - orbit_sum(x^s1 y^s2) t^0. For every barrier model
/// the axis terms cancel in the orbit sum, so this vanishes.
template <class Ring>
TSeries<typename Ring::value_type> orbit_sum_identity(const ModelSpec& m, int order, const Ring& ring) {
    const auto f = enumerate_series(m, order, ring);
    const auto s = step_polynomial(ring);
    auto res = orbit_sum(f - (s * f).times_t(1));
    res[0] -= orbit_sum(detail::mono(m.start.x, m.start.y, ring.from_int(1)));
    return res;
}

} // namespace semiperm
