#include <doctest.h>

#include <functional>
#include <random>
#include <type_traits>

#include "semiperm/laurent.hpp"
#include "semiperm/ring.hpp"
#include "semiperm/section.hpp"
#include "semiperm/tseries.hpp"

using namespace semiperm;

namespace {

using P = LaurentPoly2<Integer>;
using Q = LaurentPoly2<Rational>;

P mono(int i, int j, long c = 1) { return P::monomial(i, j, Integer(c)); }

P S() { return step_polynomial(IntegerRing{}); }

// Plain nested-loop expansion of S^n, independent of the series machinery.
std::map<std::pair<int, int>, long> power_of_s(int n) {
    std::map<std::pair<int, int>, long> cur{{{0, 0}, 1}};
    for (int k = 0; k < n; ++k) {
        std::map<std::pair<int, int>, long> next;
        for (auto [e, c] : cur) {
            next[{e.first + 1, e.second}] += c;
            next[{e.first - 1, e.second}] += c;
            next[{e.first, e.second + 1}] += c;
            next[{e.first, e.second - 1}] += c;
        }
        cur = next;
    }
    return cur;
}

template <class R>
TSeries<R> kernel_like(const LaurentPoly2<R>& s, int order) {
    TSeries<R> k(order);
    LaurentPoly2<R> p = LaurentPoly2<R>::monomial(0, 0, s.begin()->second / s.begin()->second);
    for (int n = 0; n <= order; ++n) {
        k[n] = p;
        p = p * s;
    }
    return k;
}

template <class A, class B>
concept Addable = requires(A a, B b) { a + b; };

} // namespace

static_assert(!Addable<P, Q>, "integer and rational polynomials must not mix");
static_assert(!Addable<LaurentPoly2<ModP>, P>);
static_assert(Addable<P, P>);

TEST_CASE("rings: construction and arithmetic") {
    CHECK_THROWS_AS(ModPRing(45006), std::invalid_argument);
    CHECK_THROWS_AS(ModPRing(1u << 31), std::invalid_argument);
    ModPRing r(45007);
    CHECK(r.from_int(-1).value() == 45006);
    CHECK(r.from_integer(Integer("123456789012345678901234567890")).value() ==
          mpz_class(Integer("123456789012345678901234567890") % 45007).get_ui());
    const ModP a = r.from_int(12345);
    CHECK((a * a.inverse()).value() == 1);
    CHECK_THROWS_AS((void)IntegerRing{}.half(), RingError);
    CHECK(RationalRing{}.half() * 2 == 1);
    CHECK(is_prime(45007));
    CHECK(is_prime(2147483629));
    CHECK(!is_prime(2147483629ULL * 3));
    CHECK(is_prime((1ULL << 61) - 1));
}

TEST_CASE("rings: mixed moduli are rejected at run time") {
    const ModP a = ModPRing(45007).from_int(3);
    const ModP b = ModPRing(65521).from_int(3);
    CHECK_THROWS_AS(a + b, RingMismatch);
    CHECK_THROWS_AS(a * b, RingMismatch);
    CHECK_THROWS_AS((void)(a == b), RingMismatch);
    auto pa = LaurentPoly2<ModP>::monomial(1, 0, a);
    auto pb = LaurentPoly2<ModP>::monomial(0, 1, b);
    CHECK_THROWS_AS(pa * pb, RingMismatch);
    // an unbound zero adopts the other modulus
    ModP z;
    z += a;
    CHECK(z.modulus() == 45007);
}

TEST_CASE("rings: coefficient ring names") {
    CHECK(CoefficientRing::parse("exact").kind() == CoefficientRing::Kind::ExactInteger);
    CHECK(CoefficientRing::parse("rational").kind() == CoefficientRing::Kind::ExactRational);
    CHECK(CoefficientRing::parse("integer").kind() == CoefficientRing::Kind::ExactInteger);
    CHECK(CoefficientRing::parse("mod:65521").prime() == 65521);
    CHECK(CoefficientRing::parse("mod:65521").to_string() == "mod:65521");
    CHECK_THROWS(CoefficientRing::parse("mod:65520"));
    CHECK_THROWS(CoefficientRing::parse("real"));
}

TEST_CASE("lp_mul") {
    CHECK((mono(1, 0) + mono(-1, 0)) * (mono(1, 0) - mono(-1, 0)) == mono(2, 0) - mono(-2, 0));
    CHECK(S() * mono(0, 0) == mono(1, 0) + mono(0, 1) + mono(-1, 0) + mono(0, -1));
    CHECK(mono(-1, -1) * mono(1, 1) == mono(0, 0));
    P zero = mono(1, 0) - mono(1, 0);
    CHECK(zero.is_zero());
    CHECK(zero.size() == 0);
    CHECK(S().to_string() == "x + y + ybar + xbar");
}

TEST_CASE("section and coeff_of") {
    const P orbit = mono(1, 1) - mono(-1, 1) - mono(1, -1) + mono(-1, -1);
    TSeries<Integer> f = TSeries<Integer>::constant(orbit, 0);
    CHECK(section(f, {Axis::X, SignRegion::Pos})[0] == mono(1, 1) - mono(1, -1));
    const auto once = section(kernel_like(S(), 4), {Axis::X, SignRegion::Pos});
    CHECK(section(once, {Axis::X, SignRegion::Pos}) == once);

    const auto k = kernel_like(S(), 2);
    const auto centre = section(k, SignRegion::Zero, SignRegion::Zero);
    CHECK(centre[2] == mono(0, 0, power_of_s(2)[{0, 0}]));
    CHECK(centre[2] == mono(0, 0, 4)); // EW, WE, NS, SN

    CHECK(coeff_of(mono(-1, -1), Axis::X, -1) == mono(0, -1));
    CHECK(coeff_of(S(), Axis::X, 1) == mono(0, 0));
    CHECK(coeff_of(S() * S(), Axis::X, 0) == mono(0, 2) + mono(0, 0, 4) + mono(0, -2));
}

TEST_CASE("sections partition every axis") {
    const auto k = kernel_like(S() + mono(2, -1), 5);
    for (Axis axis : {Axis::X, Axis::Y}) {
        auto sum = section(k, {axis, SignRegion::Pos}) + section(k, {axis, SignRegion::Zero}) +
                   section(k, {axis, SignRegion::Neg});
        CHECK(sum == k);
        CHECK(section(k, {axis, SignRegion::NonNeg}) + section(k, {axis, SignRegion::Neg}) == k);
        CHECK(section(k, {axis, SignRegion::NonPos}) + section(k, {axis, SignRegion::Pos}) == k);
        CHECK(section(k, {axis, SignRegion::All}) == k);
    }
}

TEST_CASE("group action") {
    CHECK(group_act(GroupElement::Phi, mono(1, 1)) == mono(-1, 1));
    CHECK(group_act(GroupElement::PhiPsi, mono(-1, -1)) == mono(1, 1));
    CHECK(group_act(GroupElement::Phi, S()) == S());
    const P f = mono(3, -2, 5) + mono(-1, 4, -7) + mono(0, 1, 2);
    for (GroupElement g : kGroupElements) {
        for (GroupElement h : kGroupElements) {
            CHECK(group_act(g, group_act(h, f)) == group_act(compose(g, h), f));
        }
        CHECK(compose(g, g) == GroupElement::Id);
    }
}

TEST_CASE("orbit sums") {
    CHECK(orbit_sum(mono(0, 0)) == mono(1, 1) - mono(-1, 1) - mono(1, -1) + mono(-1, -1));
    CHECK(orbit_sum(mono(-1, -1)).is_zero());
    CHECK(orbit_sum(mono(-1, 1)).is_zero());
    CHECK(!orbit_sum(mono(1, 0)).is_zero());
    // Rescaling by an invariant factor keeps zero orbit sums zero.
    for (const P& p : {mono(-1, -1), mono(-1, 1), mono(0, 0)}) {
        CHECK(orbit_sum(p).is_zero() == orbit_sum(p * S() * S()).is_zero());
    }
}

TEST_CASE("mod p arithmetic agrees with integer arithmetic on random expressions") {
    std::mt19937_64 rng(20240611);
    const ModPRing mp(45007);
    auto reduce_poly = [&](const P& p) {
        LaurentPoly2<ModP> out;
        for (const auto& [e, c] : p) out.add_term(e, mp.from_integer(c));
        return out;
    };
    std::uniform_int_distribution<int> expo(-3, 3);
    std::uniform_int_distribution<long> coef(-50000, 50000);
    std::uniform_int_distribution<int> op(0, 2);
    for (int trial = 0; trial < 100; ++trial) {
        std::function<std::pair<P, LaurentPoly2<ModP>>(int)> build = [&](int depth) -> std::pair<P, LaurentPoly2<ModP>> {
            if (depth == 0) {
                P leaf;
                for (int k = 0; k < 3; ++k) leaf.add_term({expo(rng), expo(rng)}, Integer(coef(rng)));
                return {leaf, reduce_poly(leaf)};
            }
            auto [a, am] = build(depth - 1);
            auto [b, bm] = build(depth - 1);
            switch (op(rng)) {
            case 0: return {a + b, am + bm};
            case 1: return {a - b, am - bm};
            default: return {a * b, am * bm};
            }
        };
        auto [exact, modular] = build(3);
        CHECK(reduce_poly(exact) == modular);
    }
}

TEST_CASE("t-series truncation") {
    TSeries<Integer> a = kernel_like(S(), 5);
    TSeries<Integer> b = kernel_like(S(), 3);
    CHECK((a + b).order() == 3);
    CHECK((a * b).order() == 3);
    CHECK_THROWS_AS((void)b.truncated(4), TruncationError);
    CHECK(a.times_t(2).valuation() == 2);
    CHECK(a.times_t(2).order() == 5);
    CHECK(a.times_t(1).divided_by_t() == a.truncated(4));
    CHECK_THROWS((void)a.divided_by_t());
    const auto ones = a.at_one();
    for (int n = 0; n <= 5; ++n) CHECK(ones[n] == Integer(1) << (2 * n));
}
