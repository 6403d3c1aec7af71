#include "semiperm/ring.hpp"

#include <array>
#include <charconv>

namespace semiperm {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) noexcept {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e != 0) {
        if (e & 1U) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1U;
    }
    return r;
}

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    // These bases are a known deterministic witness set below 2^64.
    constexpr std::array<std::uint64_t, 7> bases = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};
    for (std::uint64_t a : bases) {
        a %= n;
        if (a == 0) continue;
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

ModP ModP::inverse() const {
    if (v_ == 0) throw RingError("inverse of zero");
    return {static_cast<std::uint32_t>(pow_mod(v_, p_ - 2, p_)), p_};
}

Integer IntegerRing::from_int(long long k) const {
    Integer r;
    mpz_set_si(r.get_mpz_t(), static_cast<long>(k));
    return r;
}

Rational RationalRing::from_int(long long k) const {
    Rational r;
    mpq_set_si(r.get_mpq_t(), static_cast<long>(k), 1);
    return r;
}

ModPRing::ModPRing(std::uint32_t p) : p_(p) {
    if (p >= (1U << 31)) throw std::invalid_argument("modulus must be below 2^31: " + std::to_string(p));
    if (!is_prime(p)) throw std::invalid_argument("modulus is not prime: " + std::to_string(p));
}

ModP ModPRing::from_int(long long k) const {
    long long r = k % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return {static_cast<std::uint32_t>(r), p_};
}

ModP ModPRing::from_integer(const Integer& k) const {
    return {static_cast<std::uint32_t>(mpz_fdiv_ui(k.get_mpz_t(), p_)), p_};
}

ModP ModPRing::half() const {
    if (p_ == 2) throw RingError("Z/2 does not contain 1/2");
    return {(p_ + 1) / 2, p_};
}

CoefficientRing CoefficientRing::mod_prime(std::uint32_t p) {
    ModPRing check(p);
    return {Kind::ModPrime, p};
}

CoefficientRing CoefficientRing::parse(std::string_view text) {
    if (text == "exact" || text == "integer" || text == "exact-integer") return exact_integer();
    if (text == "rational" || text == "exact-rational") return exact_rational();
    std::string_view digits;
    if (text.starts_with("mod:")) {
        digits = text.substr(4);
    } else if (text.starts_with("mod ")) {
        digits = text.substr(4);
    } else {
        throw std::invalid_argument("unknown ring descriptor '" + std::string(text) + "'");
    }
    std::uint64_t p = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || p >= (1ULL << 31)) {
        throw std::invalid_argument("bad modulus in ring descriptor '" + std::string(text) + "'");
    }
    return mod_prime(static_cast<std::uint32_t>(p));
}

std::string CoefficientRing::to_string() const {
    switch (kind_) {
    case Kind::ExactInteger: return "exact";
    case Kind::ExactRational: return "rational";
    case Kind::ModPrime: break;
    }
    return "mod:" + std::to_string(p_);
}

} // namespace semiperm
