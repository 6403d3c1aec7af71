#pragma once

// Sparse bivariate Laurent polynomials in x and y.
//
// Terms are kept in a std::map keyed by the exponent pair; zero coefficients
// are never stored, so two polynomials are equal exactly when their term maps
// are equal.

#include <compare>
#include <cstddef>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "semiperm/ring.hpp"

namespace semiperm {

struct Exponent {
    int x = 0;
    int y = 0;
    friend auto operator<=>(const Exponent&, const Exponent&) = default;
    friend Exponent operator+(Exponent a, Exponent b) { return {a.x + b.x, a.y + b.y}; }
};

template <class R>
class LaurentPoly2 {
public:
    using value_type = R;
    using map_type = std::map<Exponent, R>;
    using const_iterator = typename map_type::const_iterator;

    LaurentPoly2() = default;

    static LaurentPoly2 monomial(int i, int j, R c) {
        LaurentPoly2 p;
        p.add_term({i, j}, c);
        return p;
    }

    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    [[nodiscard]] const_iterator begin() const noexcept { return terms_.begin(); }
    [[nodiscard]] const_iterator end() const noexcept { return terms_.end(); }
    [[nodiscard]] const map_type& terms() const noexcept { return terms_; }

    /// Coefficient of x^i y^j, or R{} when absent.
    [[nodiscard]] R coefficient(int i, int j) const {
        auto it = terms_.find({i, j});
        return it == terms_.end() ? R{} : it->second;
    }

    void add_term(Exponent e, const R& c) {
        if (is_zero_value(c)) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (is_zero_value(it->second)) terms_.erase(it);
        }
    }

    LaurentPoly2& operator+=(const LaurentPoly2& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    LaurentPoly2& operator-=(const LaurentPoly2& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend LaurentPoly2 operator+(LaurentPoly2 a, const LaurentPoly2& b) { return a += b; }
    friend LaurentPoly2 operator-(LaurentPoly2 a, const LaurentPoly2& b) { return a -= b; }
    friend LaurentPoly2 operator-(const LaurentPoly2& a) {
        LaurentPoly2 r;
        for (const auto& [e, c] : a.terms_) r.terms_.emplace_hint(r.terms_.end(), e, -c);
        return r;
    }

    friend LaurentPoly2 operator*(const LaurentPoly2& a, const LaurentPoly2& b) {
        LaurentPoly2 r;
        if (a.is_zero() || b.is_zero()) return r;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                auto prod = ca * cb;
                auto [it, inserted] = r.terms_.try_emplace(ea + eb, prod);
                if (!inserted) it->second += prod;
            }
        }
        std::erase_if(r.terms_, [](const auto& kv) { return is_zero_value(kv.second); });
        return r;
    }

    friend LaurentPoly2 operator*(const R& s, const LaurentPoly2& a) {
        LaurentPoly2 r;
        if (is_zero_value(s)) return r;
        for (const auto& [e, c] : a.terms_) {
            auto v = s * c;
            if (!is_zero_value(v)) r.terms_.emplace_hint(r.terms_.end(), e, std::move(v));
        }
        return r;
    }

    friend bool operator==(const LaurentPoly2&, const LaurentPoly2&) = default;

    /// Multiplication by the monomial x^di y^dj.
    [[nodiscard]] LaurentPoly2 shifted(int di, int dj) const {
        LaurentPoly2 r;
        for (const auto& [e, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), Exponent{e.x + di, e.y + dj}, c);
        return r;
    }

    /// Keeps the terms whose exponent satisfies `keep(i, j)`.
    template <class Pred>
    [[nodiscard]] LaurentPoly2 filtered(Pred keep) const {
        LaurentPoly2 r;
        for (const auto& [e, c] : terms_) {
            if (keep(e.x, e.y)) r.terms_.emplace_hint(r.terms_.end(), e, c);
        }
        return r;
    }

    /// Applies an exponent map (i, j) -> Exponent; the map must be injective.
    template <class Map>
    [[nodiscard]] LaurentPoly2 remapped(Map f) const {
        LaurentPoly2 r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(f(e.x, e.y), c);
        return r;
    }

    /// Value at x = y = 1.
    [[nodiscard]] R sum_coefficients() const {
        R s{};
        for (const auto& [e, c] : terms_) s += c;
        return s;
    }

    [[nodiscard]] std::string to_string() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const LaurentPoly2& p) {
        if (p.is_zero()) return os << "0";
        bool first = true;
        // Highest exponents first reads more naturally: xy - xbar*y - ...
        for (auto it = p.terms_.rbegin(); it != p.terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            std::ostringstream cs;
            cs << c;
            std::string coef = cs.str();
            bool negative = !coef.empty() && coef.front() == '-';
            if (negative) coef.erase(0, 1);
            if (!first) os << (negative ? " - " : " + ");
            else if (negative) os << "-";
            first = false;
            std::string mono = monomial_text(e);
            if (mono.empty()) os << coef;
            else if (coef == "1") os << mono;
            else os << coef << "*" << mono;
        }
        return os;
    }

private:
    static bool is_zero_value(const R& c) { return semiperm::is_zero(c); }

    static std::string monomial_text(Exponent e) {
        std::string s;
        auto factor = [&s](int k, const char* pos, const char* neg) {
            if (k == 0) return;
            if (!s.empty()) s += "*";
            s += k > 0 ? pos : neg;
            int a = k > 0 ? k : -k;
            if (a != 1) s += "^" + std::to_string(a);
        };
        factor(e.x, "x", "xbar");
        factor(e.y, "y", "ybar");
        return s;
    }

    map_type terms_;
};

/// x + y + 1/x + 1/y over the ring.
template <class Ring>
LaurentPoly2<typename Ring::value_type> step_polynomial(const Ring& ring) {
    LaurentPoly2<typename Ring::value_type> s;
    auto one = ring.from_int(1);
    s.add_term({1, 0}, one);
    s.add_term({-1, 0}, one);
    s.add_term({0, 1}, one);
    s.add_term({0, -1}, one);
    return s;
}

} // namespace semiperm
