#include <doctest.h>

#include "semiperm/kernel.hpp"

using namespace semiperm;

namespace {

using P = LaurentPoly2<Integer>;
using PQ = LaurentPoly2<Rational>;
P mono(int i, int j, long c = 1) { return P::monomial(i, j, Integer(c)); }

template <class R>
TSeries<R> keep(const TSeries<R>& f, bool (*pred)(int, int)) {
    return f.map([pred](const LaurentPoly2<R>& p) { return p.filtered(pred); });
}

std::vector<Integer> ints(std::initializer_list<long> xs) {
    std::vector<Integer> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

} // namespace

TEST_CASE("kernel_inverse_series") {
    const auto k = kernel_inverse_series(4, IntegerRing{});
    CHECK(k[0] == mono(0, 0));
    CHECK(k[1] == step_polynomial(IntegerRing{}));
    CHECK(k[2].coefficient(0, 0) == 4);
    CHECK(k.at_one() == ints({1, 4, 16, 64, 256}));
}

TEST_CASE("quarter_plane_Q equals the enumerated quarter-plane series") {
    const auto q = quarter_plane_Q(30, IntegerRing{});
    CHECK(q[0] == mono(0, 0));
    const auto ones = q.at_one();
    CHECK(std::vector<Integer>(ones.begin(), ones.begin() + 3) == ints({1, 2, 6}));
    CHECK(q == enumerate_series(catalog_model("QP"), 30, IntegerRing{}));
}

TEST_CASE("four compartments of the one-way-axes model") {
    const int order = 25;
    const auto c = f_compartments_s2(order, IntegerRing{});
    CHECK(c.f1[0] == mono(-1, -1));
    CHECK(c.f2[0].is_zero());
    CHECK(c.f3[0].is_zero());
    CHECK(c.f4[0].is_zero());
    const auto ones = c.sum().at_one();
    CHECK(std::vector<Integer>(ones.begin(), ones.begin() + 4) == ints({1, 4, 14, 48}));

    const auto f = enumerate_series(catalog_model("S2"), order, IntegerRing{});
    CHECK(c.f1 == keep(f, [](int i, int j) { return i < 0 && j < 0; }));
    CHECK(c.f2 == keep(f, [](int i, int j) { return i < 0 && j >= 0; }));
    CHECK(c.f3 == keep(f, [](int i, int j) { return i >= 0 && j < 0; }));
    const auto quadrant = keep(f, [](int i, int j) { return i >= 0 && j >= 0; });
    CHECK(c.f4 == quadrant);
    CHECK(c.sum() == f);
    // (-1,-1) -> (0,-1) -> (0,0) enters the quadrant after two steps
    CHECK(quadrant.valuation() == 2);
    CHECK(c.f4.valuation() == 2);
}

TEST_CASE("quadrant part of the nonnegative-half-axes model") {
    const int order = 20;
    const IntegerRing zz;
    const auto f = enumerate_series(catalog_model("S3"), order, zz);
    const auto outside = keep(f, [](int i, int j) { return !(i >= 0 && j >= 0); });
    const auto quadrant = keep(f, [](int i, int j) { return i >= 0 && j >= 0; });

    const auto f2 = f2_s3(order, outside, zz);
    CHECK(f2[0].is_zero());
    CHECK(f2 == quadrant);
    const auto tqp = enumerate_series(catalog_model("TQP"), order, zz);
    CHECK(f2_s3(order, tqp, zz) == f2);
    CHECK(f2_s3(order, outside, zz, SubstitutionOrder::SectionFirst) != quadrant);
    CHECK_THROWS_AS(f2_s3(order + 1, outside, zz), TruncationError);
}

TEST_CASE("diag_sections") {
    auto one = [](const P& p) { return TSeries<Integer>::constant(p, 0); };
    auto d1 = diag_sections(one(mono(2, 2)));
    CHECK(d1.d[0] == mono(2, 2));
    CHECK(d1.l.is_zero());
    CHECK(d1.u.is_zero());
    auto d2 = diag_sections(one(mono(3, 1)));
    CHECK(d2.l[0] == mono(3, 1));
    CHECK(d2.d.is_zero());
    auto d3 = diag_sections(one(mono(-4, 2) + mono(0, 1)));
    CHECK(d3.u[0] == mono(-4, 2) + mono(0, 1));
    CHECK_THROWS(diag_sections(one(mono(-1, -1))));

    const auto f = enumerate_series(catalog_model("S4a"), 20, IntegerRing{});
    const auto f2 = f - section(f, SignRegion::Neg, SignRegion::Neg);
    const auto parts = diag_sections(f2);
    CHECK(parts.d + parts.l + parts.u == f2);
    CHECK(parts.u == swap_xy(parts.l));
}

TEST_CASE("kernel root") {
    const RationalRing qq;
    const auto x = kernel_root_X(12, qq);
    CHECK(x[0].is_zero());
    CHECK(x[1] == PQ::monomial(0, 0, 1));
    CHECK(x[2] == PQ::monomial(0, 1, 1) + PQ::monomial(0, -1, 1));
    CHECK(kernel_root_residual(x, qq).is_zero());
    auto bent = x;
    bent[3] += PQ::monomial(0, 0, 1);
    CHECK(!kernel_root_residual(bent, qq).is_zero());
}

TEST_CASE("substitute_x") {
    const RationalRing qq;
    const auto x = kernel_root_X(6, qq);
    // 1 + x + x^2 at x = X
    TSeries<Rational> f = TSeries<Rational>::constant(PQ::monomial(0, 0, 1) + PQ::monomial(1, 0, 1) +
                                                      PQ::monomial(2, 0, 1), 6);
    const auto one = TSeries<Rational>::constant(PQ::monomial(0, 0, 1), 6);
    CHECK(substitute_x(f, x) == one + x + x * x);
    CHECK_THROWS(substitute_x(f.shifted(-1, 0), x));
}

TEST_CASE("star identity") {
    const RationalRing qq;
    CHECK(star_residual(10, qq).is_zero());
    CHECK(star_residual(10, ModPRing(45007)).is_zero());
    CHECK(!star_residual(10, qq, {-1, 1}).is_zero());
    CHECK(!star_residual(10, qq, {-1, -1}, StarVariant::DropDiagonal).is_zero());
    CHECK_THROWS_AS(star_residual(4, IntegerRing{}), RingError);
    CHECK_THROWS(star_residual(4, ModPRing(2)));
}

TEST_CASE("[x^0] of the lower part through the kernel root") {
    const RationalRing qq;
    const auto res = x0_f2l_identity(9, qq);
    CHECK(res.order() == 8);
    CHECK(res.is_zero());
    CHECK(x0_f2l_identity(1, qq)[0].is_zero());
    CHECK(!x0_f2l_identity(9, qq, true).is_zero());
    CHECK(x0_f2l_identity(9, ModPRing(65521)).is_zero());
}

TEST_CASE("functional equation residual") {
    const IntegerRing zz;
    const int order = 14;
    CHECK(verify_functional_equation(catalog_model("S2"), parse_interpretation("y-all,x-all"), order, zz).is_zero());
    CHECK(verify_functional_equation(catalog_model("S5"), parse_interpretation("y-pos,x-pos"), order, zz).is_zero());
    CHECK(!verify_functional_equation(catalog_model("S2"), parse_interpretation("y-pos,x-pos"), order, zz).is_zero());
    for (const ModelSpec& m : model_catalog()) {
        if (m.region != PlaneRegion::FullPlane) continue;
        CAPTURE(m.id);
        CHECK(verify_functional_equation(m, matching_interpretation(m), order, zz).is_zero());
        CHECK(verify_functional_equation(m.with_start({-1, 1}), matching_interpretation(m), order, zz).is_zero());
    }
    // the quarter plane: inhomogeneous term 1, both axes read on the nonnegative side
    CHECK(verify_functional_equation(catalog_model("QP"), {DomainSpec::NonNeg, DomainSpec::NonNeg}, order, zz).is_zero());
    ModelSpec mixed{"mixed", {-1, -1}, DomainSpec::Pos, DomainSpec::NonPos, PlaneRegion::FullPlane};
    CHECK(verify_functional_equation(mixed, matching_interpretation(mixed), order, zz).is_zero());
    CHECK(!verify_functional_equation(mixed, {DomainSpec::NonPos, DomainSpec::Pos}, order, zz).is_zero());
}

TEST_CASE("orbit sum identity") {
    const IntegerRing zz;
    for (const ModelSpec& m : model_catalog()) {
        if (m.region != PlaneRegion::FullPlane) continue;
        CAPTURE(m.id);
        CHECK(orbit_sum_identity(m, 12, zz).is_zero());
        CHECK(orbit_sum(TSeries<Integer>::constant(mono(m.start.x, m.start.y), 0)).is_zero());
    }
    // from (1,0) the start monomial itself has a nonzero orbit sum
    const auto s2 = catalog_model("S2").with_start({1, 0});
    CHECK(orbit_sum_identity(s2, 8, zz).is_zero());
    CHECK(!orbit_sum(mono(1, 0)).is_zero());
}

TEST_CASE("sections commute with truncation") {
    const auto f = enumerate_series(catalog_model("S4b"), 16, IntegerRing{});
    for (SignRegion r : {SignRegion::Pos, SignRegion::Neg, SignRegion::Zero, SignRegion::NonNeg, SignRegion::NonPos}) {
        for (Axis a : {Axis::X, Axis::Y}) {
            CHECK(section(f.truncated(9), {a, r}) == section(f, {a, r}).truncated(9));
        }
        CHECK(section(f.truncated(7), r, r) == section(f, r, r).truncated(7));
    }
}
