#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "semiperm/engine.hpp"
#include "semiperm/enumerate.hpp"
#include "semiperm/section.hpp"
#include "semiperm/term_cache.hpp"

using namespace semiperm;

namespace {

using P = LaurentPoly2<Integer>;
P mono(int i, int j, long c = 1) { return P::monomial(i, j, Integer(c)); }

std::vector<Integer> ints(std::initializer_list<long> xs) {
    std::vector<Integer> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

// Walk-by-walk enumeration over all 4^n step words: independent of the layer
// recursion, so small orders cross-check dp_step itself.
std::pair<std::vector<long>, std::vector<long>> brute_force(const ModelSpec& m, int order) {
    std::vector<long> totals(order + 1, 0), returns(order + 1, 0);
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    auto walk = [&](auto&& self, int n, int i, int j) -> void {
        ++totals[n];
        if (i == m.start.x && j == m.start.y) ++returns[n];
        if (n == order) return;
        for (int s = 0; s < 4; ++s) {
            if (s == 1 && i == 0 && contains(m.west_barrier, j)) continue;
            if (s == 3 && j == 0 && contains(m.south_barrier, i)) continue;
            if (!m.admits(i + dx[s], j + dy[s])) continue;
            self(self, n + 1, i + dx[s], j + dy[s]);
        }
    };
    walk(walk, 0, m.start.x, m.start.y);
    return {totals, returns};
}

std::vector<ModelSpec> test_models() {
    std::vector<ModelSpec> ms = model_catalog();
    ModelSpec mixed{"mixed", {-1, -1}, DomainSpec::Pos, DomainSpec::NonPos, PlaneRegion::FullPlane};
    ms.push_back(mixed);
    ms.push_back(catalog_model("S2").with_start({-1, 1}));
    ms.push_back(catalog_model("S3").with_start({0, -1}));
    ms.push_back(catalog_model("S4a").with_start({2, -3}));
    ms.push_back(catalog_model("QP").with_start({2, 1}));
    ms.push_back(catalog_model("TQP").with_start({-2, 3}));
    return ms;
}

} // namespace

TEST_CASE("catalog") {
    const auto& cat = model_catalog();
    REQUIRE(cat.size() == 7);
    std::vector<std::string> ids;
    for (const auto& m : cat) ids.push_back(m.id);
    CHECK(ids == std::vector<std::string>{"S2", "S3", "S4a", "S4b", "S5", "QP", "TQP"});
    CHECK(catalog_model("S2").start == Point{-1, -1});
    CHECK(catalog_model("QP").start == Point{0, 0});
    CHECK(catalog_model("S4b").west_barrier == DomainSpec::NonPos);
    CHECK_THROWS(catalog_model("S6"));
    CHECK_THROWS(catalog_model("QP").with_start({-1, 0}).validate());
    CHECK_THROWS(catalog_model("TQP").with_start({0, 0}).validate());
    CHECK(catalog_model("S2").with_start({0, -1}).degenerate_start());
    CHECK(!catalog_model("S2").degenerate_start());

    nlohmann::json j = catalog_model("S4a");
    CHECK(j.get<ModelSpec>() == catalog_model("S4a"));
}

TEST_CASE("dp_step") {
    const ModelSpec& s2 = catalog_model("S2");
    auto l0 = initial_layer(s2, Integer(1));
    auto l1 = dp_step(l0, s2);
    CHECK(l1.counts == mono(0, -1) + mono(-2, -1) + mono(-1, 0) + mono(-1, -2));
    auto l2 = dp_step(l1, s2);
    CHECK(l2.counts.sum_coefficients() == 14);

    const ModelSpec s5 = catalog_model("S5").with_start({0, 0});
    auto succ = dp_step(initial_layer(s5, Integer(1)), s5);
    CHECK(succ.counts.size() == 4);
}

TEST_CASE("enumerate_series") {
    const auto s2 = enumerate_series(catalog_model("S2"), 3, IntegerRing{});
    CHECK(s2[0] == mono(-1, -1));
    CHECK(s2.at_one() == ints({1, 4, 14, 48}));
    CHECK(enumerate_series(catalog_model("QP"), 2, IntegerRing{}).at_one() == ints({1, 2, 6}));
    CHECK_THROWS_AS(enumerate_series(catalog_model("S2"), 200, IntegerRing{}, 1000), ResourceLimitExceeded);
}

TEST_CASE("support and parity of every layer") {
    for (const ModelSpec& m : test_models()) {
        auto layer = initial_layer(m, Integer(1));
        Integer bound = 1;
        for (int n = 1; n <= 30; ++n) {
            layer = dp_step(layer, m);
            bound *= 4;
            for (const auto& [e, c] : layer.counts) {
                const int d = std::abs(e.x - m.start.x) + std::abs(e.y - m.start.y);
                CHECK(d <= n);
                CHECK((e.x + e.y - m.start.x - m.start.y + n) % 2 == 0);
                CHECK(m.admits(e.x, e.y));
            }
            CHECK(layer.counts.sum_coefficients() <= bound);
        }
    }
}

TEST_CASE("totals and returns: small cases") {
    CHECK(totals(catalog_model("S2"), 3, IntegerRing{}) == ints({1, 4, 14, 48}));
    for (const ModelSpec& m : model_catalog()) {
        const auto a = totals(m, 40, IntegerRing{});
        const auto b = returns_to_start(m, 40, IntegerRing{});
        CHECK(a[0] == 1);
        CHECK(b[0] == 1);
        CHECK(b[1] == 0);
        for (int n = 1; n <= 40; n += 2) CHECK(b[n] == 0);
        if (m.region == PlaneRegion::FullPlane) {
            for (int n = 0; n < 40; ++n) {
                CHECK(a[n + 1] >= 2 * a[n]);
                CHECK(a[n + 1] <= 4 * a[n]);
            }
        }
    }
    CHECK(returns_to_start(catalog_model("S5"), 2, IntegerRing{})[2] == 4);
}

TEST_CASE("dense engine agrees with walk-by-walk enumeration") {
    for (const ModelSpec& m : test_models()) {
        CAPTURE(m.describe());
        const auto [t, r] = brute_force(m, 10);
        const auto a = walk_sequence_exact(m, 10, SequenceKind::Totals);
        const auto b = walk_sequence_exact(m, 10, SequenceKind::Returns);
        for (int n = 0; n <= 10; ++n) {
            CHECK(a[n] == t[n]);
            CHECK(b[n] == r[n]);
        }
    }
}

TEST_CASE("dense engine agrees with the layer oracle") {
    const int order = 60;
    for (const ModelSpec& m : test_models()) {
        CAPTURE(m.describe());
        const auto series = enumerate_series(m, order, IntegerRing{});
        const auto dense_t = walk_sequence_exact(m, order, SequenceKind::Totals, 1);
        const auto dense_r = walk_sequence_exact(m, order, SequenceKind::Returns, 2);
        for (int n = 0; n <= order; ++n) {
            CHECK(dense_t[n] == series[n].sum_coefficients());
            CHECK(dense_r[n] == series[n].coefficient(m.start.x, m.start.y));
        }
    }
}

TEST_CASE("exact terms reduced mod p equal mod p terms") {
    const int order = 200;
    for (std::uint32_t p : {45007U, 2147483629U, 2U, 1000000U}) {
        for (const ModelSpec& m : test_models()) {
            for (SequenceKind kind : {SequenceKind::Totals, SequenceKind::Returns}) {
                const auto exact = walk_sequence_exact(m, order, kind);
                const auto mod = walk_sequence_mod(m, order, kind, p);
                bool same = true;
                for (int n = 0; n <= order; ++n) same = same && mpz_fdiv_ui(exact[n].get_mpz_t(), p) == mod[n];
                CHECK_MESSAGE(same, m.describe(), " p=", p, " ", to_string(kind));
            }
        }
    }
    const ModPRing ring(45007);
    const auto via_template = totals(catalog_model("S3"), 50, ring);
    const auto exact = totals(catalog_model("S3"), 50, IntegerRing{});
    for (int n = 0; n <= 50; ++n) CHECK(via_template[n] == ring.from_integer(exact[n]));
}

TEST_CASE("floating point terms track exact terms") {
    const int order = 400;
    for (const ModelSpec& m : model_catalog()) {
        for (SequenceKind kind : {SequenceKind::Totals, SequenceKind::Returns}) {
            const auto exact = walk_sequence_exact(m, order, kind);
            const auto logs = walk_sequence_log(m, order, kind);
            for (int n = 0; n <= order; ++n) {
                if (exact[n] == 0) {
                    CHECK(std::isinf(logs[n]));
                    continue;
                }
                long exp2 = 0;
                const double mant = mpz_get_d_2exp(&exp2, exact[n].get_mpz_t());
                const double expected = std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
                CHECK(std::abs(logs[n] - expected) < 1e-11 * (1 + std::abs(expected)));
            }
        }
    }
}

TEST_CASE("section of the S3 series onto the quadrant complement is the TQP series") {
    const int order = 50;
    const auto s3 = enumerate_series(catalog_model("S3"), order, IntegerRing{});
    const auto tqp = enumerate_series(catalog_model("TQP"), order, IntegerRing{});
    auto outside = s3.map([](const P& p) { return p.filtered([](int i, int j) { return !(i >= 0 && j >= 0); }); });
    CHECK(outside == tqp);
}

TEST_CASE("cell budget") {
    CHECK_THROWS_AS(walk_sequence_mod(catalog_model("S2"), 5000, SequenceKind::Totals, 45007, 1000),
                    ResourceLimitExceeded);
    CHECK_NOTHROW(walk_sequence_mod(catalog_model("S2"), 30, SequenceKind::Totals, 45007, 1000));
    CHECK(engine_cell_estimate(100, SequenceKind::Returns) < engine_cell_estimate(100, SequenceKind::Totals));
}

TEST_CASE("term cache round trip") {
    for (const char* ring : {"exact", "mod:45007"}) {
        const TermSequence seq = compute_terms(catalog_model("S4b"), 120, SequenceKind::Totals, CoefficientRing::parse(ring));
        std::stringstream ss;
        write_terms(ss, seq);
        const std::string text = ss.str();
        CHECK(text.starts_with("semiperm-terms v1 model=S4b start=-1,-1 west=nonpos south=nonpos region=full ring=" +
                               std::string(ring) + " kind=totals order=120\n"));
        std::stringstream in(text);
        CHECK(read_terms(in) == seq);
    }
    std::stringstream bad("semiperm-terms v1 model=S2 start=-1,-1 west=all south=all region=full ring=mod:7 kind=totals order=1\n1\n9\n");
    try {
        read_terms(bad);
        FAIL("expected an error");
    } catch (const TermCacheError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::stringstream truncated("semiperm-terms v1 model=S2 start=-1,-1 west=all south=all region=full ring=exact kind=totals order=3\n1\n4\n");
    CHECK_THROWS_AS(read_terms(truncated), TermCacheError);
}
