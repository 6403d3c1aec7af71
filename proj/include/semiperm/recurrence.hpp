#pragma once

// Linear recurrences sum_k p_k(n) a(n+k) = 0 and linear differential
// equations sum_i q_i(t) f^(i)(t) = 0 with polynomial coefficients.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semiperm/ring.hpp"

namespace semiperm {

/// coeffs[k][e] is the coefficient of n^e in p_k (or of t^e in q_k).
template <class R>
struct PolyOperator {
    std::vector<std::vector<R>> coeffs;

    PolyOperator() = default;
    PolyOperator(int order, int degree)
        : coeffs(static_cast<std::size_t>(order) + 1, std::vector<R>(static_cast<std::size_t>(degree) + 1)) {}
    explicit PolyOperator(std::vector<std::vector<R>> c) : coeffs(std::move(c)) {}

    [[nodiscard]] int order() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
    [[nodiscard]] int degree() const noexcept {
        int d = -1;
        for (const auto& p : coeffs) d = std::max(d, static_cast<int>(p.size()) - 1);
        return d;
    }
    [[nodiscard]] R coefficient(int k, int e) const {
        if (k < 0 || k > order() || e < 0 || e >= static_cast<int>(coeffs[k].size())) return R{};
        return coeffs[k][e];
    }
    [[nodiscard]] bool is_zero() const {
        for (const auto& p : coeffs)
            for (const auto& c : p)
                if (!semiperm::is_zero(c)) return false;
        return true;
    }
    friend bool operator==(const PolyOperator&, const PolyOperator&) = default;
};

template <class R>
struct Recurrence : PolyOperator<R> {
    using PolyOperator<R>::PolyOperator;
    /// p_k(n), by Horner's rule
    [[nodiscard]] R eval(int k, const R& n) const {
        R acc{};
        const auto& p = this->coeffs.at(static_cast<std::size_t>(k));
        for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * n + *it;
        return acc;
    }
    friend bool operator==(const Recurrence&, const Recurrence&) = default;
};

template <class R>
struct DiffEquation : PolyOperator<R> {
    using PolyOperator<R>::PolyOperator;
    friend bool operator==(const DiffEquation&, const DiffEquation&) = default;
};

using ExactRecurrence = Recurrence<Integer>;
using ModRecurrence = Recurrence<ModP>;

struct VerifyResult {
    bool ok = true;
    long first_violation = -1; ///< smallest n with a nonzero left-hand side
    long checked = 0;          ///< relations checked: n = 0 .. checked-1
};

template <class R, class Ring>
VerifyResult verify_recurrence(const Recurrence<R>& rec, const std::vector<R>& terms, const Ring& ring) {
    const int r = rec.order();
    if (r < 0) throw std::invalid_argument("empty recurrence");
    if (static_cast<long>(terms.size()) < r + 1) {
        throw std::invalid_argument("need at least " + std::to_string(r + 1) + " terms, got " +
                                    std::to_string(terms.size()));
    }
    VerifyResult out;
    out.checked = static_cast<long>(terms.size()) - r;
    for (long n = 0; n < out.checked; ++n) {
        const R nn = ring.from_int(n);
        R sum{};
        for (int k = 0; k <= r; ++k) sum = sum + rec.eval(k, nn) * terms[static_cast<std::size_t>(n + k)];
        if (!is_zero(sum)) {
            out.ok = false;
            out.first_violation = n;
            return out;
        }
    }
    return out;
}

/// Drops zero top polynomials and zero top degrees, divides by the content
/// and makes the leading coefficient of the leading polynomial positive.
/// Throws std::invalid_argument on the zero recurrence.
ExactRecurrence canonicalize(const ExactRecurrence& rec);
/// Same trimming; scales the leading coefficient of the leading polynomial to 1.
ModRecurrence canonicalize(const ModRecurrence& rec);
DiffEquation<ModP> canonicalize(const DiffEquation<ModP>& eq);

/// Reduced echelon basis of the span, ordered by (order, degree,
/// coefficients) and canonicalized one by one.
std::vector<ModRecurrence> canonicalize_basis(const std::vector<ModRecurrence>& basis);

ModRecurrence reduce(const ExactRecurrence& rec, std::uint32_t p);

/// "(n^2 + 3*n + 2)*a(n+1) - (4*n + 2)*a(n) = 0", highest shift first.
std::string to_string(const ExactRecurrence& rec);
std::string to_string(const ModRecurrence& rec);
/// "(1 - 2*t)*D(f) - 2*f = 0" with D^i(f) for the i-th derivative.
std::string to_string(const DiffEquation<ModP>& eq);

class RecurrenceParseError : public std::runtime_error {
public:
    RecurrenceParseError(int line, int column, const std::string& what);
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Parses one recurrence in n and a(n+k), e.g.
///   (2 + n)(4 + n)*a(n+2) - 4(n+3)*a(n+1) + 16*a(n) = 0
/// Products may be written by juxtaposition, '#' starts a comment, and the
/// equation may span several lines. Negative shifts are renormalized so the
/// lowest shift is a(n).
ExactRecurrence parse_recurrence(std::string_view text);

/// The recurrence for the totals of the one-way-axes model from (-1,-1).
ExactRecurrence s2_totals_recurrence();

} // namespace semiperm
