#pragma once

// Truncated power series in t with Laurent polynomial coefficients.
//
// A TSeries of order N stores the coefficients of t^0 .. t^N. Binary
// operations truncate to the smaller order of their operands.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "semiperm/laurent.hpp"

namespace semiperm {

class TruncationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

template <class R>
class TSeries {
public:
    using value_type = R;
    using poly_type = LaurentPoly2<R>;

    TSeries() : coeffs_(1) {}
    explicit TSeries(int order) : coeffs_(checked_size(order)) {}

    static TSeries constant(poly_type p, int order) {
        TSeries s(order);
        s.coeffs_[0] = std::move(p);
        return s;
    }

    [[nodiscard]] int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] const poly_type& operator[](int n) const { return coeffs_.at(static_cast<std::size_t>(n)); }
    [[nodiscard]] poly_type& operator[](int n) { return coeffs_.at(static_cast<std::size_t>(n)); }
    [[nodiscard]] const std::vector<poly_type>& coefficients() const noexcept { return coeffs_; }

    [[nodiscard]] TSeries truncated(int order) const {
        if (order > this->order()) {
            throw TruncationError("cannot extend a series of order " + std::to_string(this->order()) +
                                  " to order " + std::to_string(order));
        }
        TSeries r(order);
        std::copy_n(coeffs_.begin(), order + 1, r.coeffs_.begin());
        return r;
    }

    [[nodiscard]] bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const poly_type& p) { return p.is_zero(); });
    }

    /// Smallest n with a nonzero t^n coefficient.
    [[nodiscard]] std::optional<int> valuation() const {
        for (int n = 0; n <= order(); ++n) {
            if (!coeffs_[n].is_zero()) return n;
        }
        return std::nullopt;
    }

    TSeries& operator+=(const TSeries& o) {
        shrink_to(o.order());
        for (int n = 0; n <= order(); ++n) coeffs_[n] += o.coeffs_[n];
        return *this;
    }
    TSeries& operator-=(const TSeries& o) {
        shrink_to(o.order());
        for (int n = 0; n <= order(); ++n) coeffs_[n] -= o.coeffs_[n];
        return *this;
    }
    friend TSeries operator+(TSeries a, const TSeries& b) { return a += b; }
    friend TSeries operator-(TSeries a, const TSeries& b) { return a -= b; }
    friend TSeries operator-(const TSeries& a) {
        TSeries r(a.order());
        for (int n = 0; n <= a.order(); ++n) r.coeffs_[n] = -a.coeffs_[n];
        return r;
    }

    friend TSeries operator*(const TSeries& a, const TSeries& b) {
        const int order = std::min(a.order(), b.order());
        TSeries r(order);
        for (int i = 0; i <= order; ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            for (int j = 0; i + j <= order; ++j) {
                if (b.coeffs_[j].is_zero()) continue;
                r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return r;
    }

    /// Multiplication by a t-free Laurent polynomial.
    friend TSeries operator*(const poly_type& p, const TSeries& a) {
        TSeries r(a.order());
        for (int n = 0; n <= a.order(); ++n) r.coeffs_[n] = p * a.coeffs_[n];
        return r;
    }

    friend TSeries operator*(const R& s, const TSeries& a) {
        TSeries r(a.order());
        for (int n = 0; n <= a.order(); ++n) r.coeffs_[n] = s * a.coeffs_[n];
        return r;
    }

    friend bool operator==(const TSeries&, const TSeries&) = default;

    /// Multiplication by t^k, keeping the truncation order.
    [[nodiscard]] TSeries times_t(int k = 1) const {
        TSeries r(order());
        for (int n = k; n <= order(); ++n) r.coeffs_[n] = coeffs_[n - k];
        return r;
    }

    /// Exact division by t; the order drops by one.
    [[nodiscard]] TSeries divided_by_t() const {
        if (!coeffs_[0].is_zero()) throw std::domain_error("series is not divisible by t");
        if (order() == 0) throw TruncationError("dividing an order-0 series by t leaves no coefficients");
        TSeries r(order() - 1);
        for (int n = 1; n <= order(); ++n) r.coeffs_[n - 1] = coeffs_[n];
        return r;
    }

    /// Multiplication by the monomial x^i y^j.
    [[nodiscard]] TSeries shifted(int i, int j) const {
        return map([i, j](const poly_type& p) { return p.shifted(i, j); });
    }

    template <class F>
    [[nodiscard]] TSeries map(F f) const {
        TSeries r(order());
        for (int n = 0; n <= order(); ++n) r.coeffs_[n] = f(coeffs_[n]);
        return r;
    }

    /// The sequence of values at x = y = 1.
    [[nodiscard]] std::vector<R> at_one() const {
        std::vector<R> out;
        out.reserve(coeffs_.size());
        for (const auto& p : coeffs_) out.push_back(p.sum_coefficients());
        return out;
    }

private:
    static std::size_t checked_size(int order) {
        if (order < 0) throw TruncationError("negative truncation order");
        return static_cast<std::size_t>(order) + 1;
    }
    void shrink_to(int order) {
        if (order < this->order()) coeffs_.resize(static_cast<std::size_t>(order) + 1);
    }

    std::vector<poly_type> coeffs_;
};

} // namespace semiperm
