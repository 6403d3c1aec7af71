#pragma once

// Brute-force enumeration of admissible walks, layer by layer.
//
// This is the reference oracle: every closed form elsewhere in the library is
// checked against the series produced here. Layers are sparse Laurent
// polynomials, so the oracle is meant for orders up to a few hundred; long
// coefficient sequences go through the dense engine in engine.hpp.

#include <cstddef>
#include <stdexcept>
#include <string>

#include "semiperm/model.hpp"
#include "semiperm/tseries.hpp"

namespace semiperm {

class ResourceLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultCellBudget = 100'000'000;

/// SEMIPERM_CELL_BUDGET when set, kDefaultCellBudget otherwise.
std::size_t cell_budget();

template <class R>
struct DPLayer {
    int n = 0;
    LaurentPoly2<R> counts;
};

template <class R>
DPLayer<R> initial_layer(const ModelSpec& m, const R& one) {
    m.validate();
    return {0, LaurentPoly2<R>::monomial(m.start.x, m.start.y, one)};
}

template <class R>
DPLayer<R> dp_step(const DPLayer<R>& layer, const ModelSpec& m) {
    DPLayer<R> next{layer.n + 1, {}};
    for (const auto& [e, c] : layer.counts) {
        const int i = e.x;
        const int j = e.y;
        if (m.admits(i + 1, j)) next.counts.add_term({i + 1, j}, c);
        if (m.admits(i, j + 1)) next.counts.add_term({i, j + 1}, c);
        if (!m.west_blocked(i, j) && m.admits(i - 1, j)) next.counts.add_term({i - 1, j}, c);
        if (!m.south_blocked(i, j) && m.admits(i, j - 1)) next.counts.add_term({i, j - 1}, c);
    }
    return next;
}

/// Upper bound on the cells stored by enumerate_series up to order N.
constexpr std::size_t series_cell_estimate(int order) noexcept {
    const auto n = static_cast<std::size_t>(order) + 1;
    return n * (n + 1) * (2 * n + 1) / 6;
}

/// Generating series of admissible walks: [x^i y^j t^n] counts walks of
/// length n from the start to (i, j).
template <class Ring>
TSeries<typename Ring::value_type> enumerate_series(const ModelSpec& m, int order, const Ring& ring,
                                                    std::size_t budget = cell_budget()) {
    if (order < 0) throw std::invalid_argument("order must be nonnegative");
    if (series_cell_estimate(order) > budget) {
        throw ResourceLimitExceeded("series enumeration to order " + std::to_string(order) + " needs about " +
                                    std::to_string(series_cell_estimate(order)) + " cells, budget is " +
                                    std::to_string(budget));
    }
    using R = typename Ring::value_type;
    TSeries<R> series(order);
    DPLayer<R> layer = initial_layer(m, ring.from_int(1));
    series[0] = layer.counts;
    for (int n = 1; n <= order; ++n) {
        layer = dp_step(layer, m);
        series[n] = layer.counts;
    }
    return series;
}

} // namespace semiperm
