#pragma once

// Exact scalar domains used by every series and sequence in the library.
//
// Three value types are supported:
//   Integer  - arbitrary precision integers (GMP)
//   Rational - arbitrary precision rationals (GMP)
//   ModP     - residues modulo a prime p < 2^31
//
// Generic code is written against a "ring" object that knows how to build
// constants (`from_int`, `half`) and a value type with the usual operators.
// A default-constructed ModP is an unbound zero: it adopts the modulus of the
// first bound operand it meets, which lets generic accumulators start at R{}.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace semiperm {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when two operands live in different coefficient rings.
class RingMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an operation needs a constant the ring does not have (e.g. 1/2 in Z).
class RingError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr std::uint32_t kDefaultPrime = 45007;
inline constexpr std::uint32_t kCollisionPrime = 2147483629;

/// Deterministic Miller-Rabin, valid for every 64-bit input.
bool is_prime(std::uint64_t n) noexcept;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept;
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) noexcept;

class ModP {
public:
    constexpr ModP() noexcept = default;
    /// `value` must already be reduced; use ModPRing::from_int otherwise.
    constexpr ModP(std::uint32_t value, std::uint32_t modulus) noexcept : v_(value), p_(modulus) {}

    [[nodiscard]] constexpr std::uint32_t value() const noexcept { return v_; }
    [[nodiscard]] constexpr std::uint32_t modulus() const noexcept { return p_; }
    [[nodiscard]] constexpr bool is_zero() const noexcept { return v_ == 0; }

    ModP& operator+=(const ModP& o) {
        bind(o);
        std::uint64_t s = std::uint64_t{v_} + o.v_;
        v_ = static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
        return *this;
    }
    ModP& operator-=(const ModP& o) {
        bind(o);
        v_ = v_ >= o.v_ ? v_ - o.v_ : static_cast<std::uint32_t>(std::uint64_t{v_} + p_ - o.v_);
        return *this;
    }
    ModP& operator*=(const ModP& o) {
        bind(o);
        v_ = p_ == 0 ? 0 : static_cast<std::uint32_t>(std::uint64_t{v_} * o.v_ % p_);
        return *this;
    }
    friend ModP operator+(ModP a, const ModP& b) { return a += b; }
    friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
    friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
    friend ModP operator-(const ModP& a) { return ModP{} - a; }
    friend bool operator==(const ModP& a, const ModP& b) {
        if (a.p_ != 0 && b.p_ != 0 && a.p_ != b.p_) {
            throw RingMismatch("ModP comparison across moduli " + std::to_string(a.p_) + " and " +
                               std::to_string(b.p_));
        }
        return a.v_ == b.v_;
    }

    /// Multiplicative inverse; throws RingError for zero.
    [[nodiscard]] ModP inverse() const;

    friend std::ostream& operator<<(std::ostream& os, const ModP& a) { return os << a.v_; }

private:
    void bind(const ModP& o) {
        if (p_ == o.p_) return;
        if (o.p_ == 0) return;
        if (p_ == 0) {
            p_ = o.p_;
            return;
        }
        throw RingMismatch("mixed moduli " + std::to_string(p_) + " and " + std::to_string(o.p_));
    }

    std::uint32_t v_ = 0;
    std::uint32_t p_ = 0;
};

inline bool is_zero(const Integer& a) { return sgn(a) == 0; }
inline bool is_zero(const Rational& a) { return sgn(a) == 0; }
inline bool is_zero(const ModP& a) { return a.is_zero(); }

struct IntegerRing {
    using value_type = Integer;
    [[nodiscard]] Integer from_int(long long k) const;
    [[nodiscard]] Integer from_integer(const Integer& k) const { return k; }
    [[nodiscard]] Integer half() const { throw RingError("the integers do not contain 1/2"); }
    [[nodiscard]] std::string name() const { return "exact-integer"; }
};

struct RationalRing {
    using value_type = Rational;
    [[nodiscard]] Rational from_int(long long k) const;
    [[nodiscard]] Rational from_integer(const Integer& k) const { return Rational(k); }
    [[nodiscard]] Rational half() const { return Rational(1, 2); }
    [[nodiscard]] std::string name() const { return "exact-rational"; }
};

class ModPRing {
public:
    using value_type = ModP;
    /// Throws std::invalid_argument unless p is a prime below 2^31.
    explicit ModPRing(std::uint32_t p);

    [[nodiscard]] std::uint32_t prime() const noexcept { return p_; }
    [[nodiscard]] ModP from_int(long long k) const;
    [[nodiscard]] ModP from_integer(const Integer& k) const;
    [[nodiscard]] ModP half() const;
    [[nodiscard]] std::string name() const { return "mod:" + std::to_string(p_); }

private:
    std::uint32_t p_;
};

/// Runtime descriptor of a coefficient ring, as it appears on the command line
/// and in term-cache headers ("exact", "rational", "mod:45007").
class CoefficientRing {
public:
    enum class Kind { ExactRational, ExactInteger, ModPrime };

    static CoefficientRing exact_integer() { return CoefficientRing(Kind::ExactInteger, 0); }
    static CoefficientRing exact_rational() { return CoefficientRing(Kind::ExactRational, 0); }
    static CoefficientRing mod_prime(std::uint32_t p);
    static CoefficientRing parse(std::string_view text);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::uint32_t prime() const noexcept { return p_; }
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const CoefficientRing&, const CoefficientRing&) = default;

    template <class F>
    decltype(auto) visit(F&& f) const {
        switch (kind_) {
        case Kind::ExactInteger: return f(IntegerRing{});
        case Kind::ExactRational: return f(RationalRing{});
        case Kind::ModPrime: break;
        }
        return f(ModPRing(p_));
    }

private:
    CoefficientRing(Kind k, std::uint32_t p) : kind_(k), p_(p) {}
    Kind kind_;
    std::uint32_t p_;
};

/// Image of an integer in a ring value type; used by generic code that mixes
/// exact sequences with reduced ones.
inline ModP reduce(const Integer& k, const ModPRing& ring) { return ring.from_integer(k); }

} // namespace semiperm
