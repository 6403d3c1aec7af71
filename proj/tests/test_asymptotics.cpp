#include <doctest.h>

#include <cmath>
#include <numbers>

#include "semiperm/asymptotics.hpp"
#include "semiperm/engine.hpp"

using namespace semiperm;

namespace {

// floor(c * (num/den)^n * n^alpha) for n >= 1, a_0 = 1.
std::vector<Integer> planted(double c, long num, long den, double alpha, int count) {
    std::vector<Integer> out{1};
    for (int n = 1; n < count; ++n) {
        Integer scaled;
        mpz_set_d(scaled.get_mpz_t(), std::ldexp(c * std::pow(static_cast<double>(n), alpha), 80));
        Integer p, q;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(num), static_cast<unsigned long>(n));
        mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(den), static_cast<unsigned long>(n));
        Integer v = p * scaled;
        v >>= 80;
        v /= q;
        out.push_back(v == 0 ? Integer(1) : v);
    }
    return out;
}

bool within_percent(double fit, double plant) {
    return std::abs(fit - plant) <= 0.01 * std::max(std::abs(plant), 1.0);
}

std::vector<Integer> central_binomials(int count) {
    std::vector<Integer> out;
    for (int n = 0; n < count; ++n) {
        Integer b;
        mpz_bin_uiui(b.get_mpz_t(), 2UL * static_cast<unsigned long>(n), static_cast<unsigned long>(n));
        out.push_back(b);
    }
    return out;
}

} // namespace

TEST_CASE("log_terms") {
    const auto l = log_terms({1, 2, 4, 8});
    CHECK(l[0] == 0.0);
    CHECK(l[1] == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
    CHECK(l[3] == doctest::Approx(3 * std::numbers::ln2).epsilon(1e-15));

    Integer big;
    mpz_ui_pow_ui(big.get_mpz_t(), 10, 1000);
    CHECK(log_integer(big) == doctest::Approx(1000 * std::numbers::ln10).epsilon(1e-15));
    CHECK(std::isfinite(log_integer(big * big * big)));

    const auto s2 = log_terms(walk_sequence_exact(catalog_model("S2"), 3, SequenceKind::Totals));
    CHECK(s2[2] == doctest::Approx(std::log(14.0)));
    CHECK(s2[3] == doctest::Approx(std::log(48.0)));

    CHECK_THROWS_AS(log_terms({1, 0, 2}), AsymptoticsError);
    CHECK_THROWS_AS(log_terms({1, -3}), AsymptoticsError);
}

TEST_CASE("argument checks") {
    CHECK_THROWS_AS(growth_rate(std::vector<Integer>(63, 1)), AsymptoticsError);
    CHECK_THROWS_AS(fit_asymptotics(std::vector<Integer>(20, 1), AsymMode::Totals), AsymptoticsError);
    CHECK_THROWS_AS(exponent(central_binomials(100), 0.0), AsymptoticsError);
    CHECK(parse_asym_mode("returns") == AsymMode::Returns);
    CHECK_THROWS(parse_asym_mode("both"));
}

TEST_CASE("pure exponentials") {
    std::vector<Integer> pow4, three_pow4;
    for (int n = 0; n < 200; ++n) {
        Integer v;
        mpz_ui_pow_ui(v.get_mpz_t(), 4, static_cast<unsigned long>(n));
        pow4.push_back(v);
        three_pow4.push_back(3 * v);
    }
    const auto mu = growth_rate(pow4);
    CHECK(std::abs(mu.value - 4) < 1e-12);
    CHECK(std::abs(exponent(pow4, 4).value) < 1e-9);
    CHECK(constant(three_pow4, 4, 0).value == doctest::Approx(3).epsilon(1e-12));
    const auto f = fit_asymptotics(three_pow4, AsymMode::Totals).best();
    CHECK(f.c == doctest::Approx(3).epsilon(1e-9));
    CHECK(f.alpha_exact->to_string() == "0");
}

TEST_CASE("central binomial coefficients") {
    const auto terms = central_binomials(1000);
    const auto mu = growth_rate(terms);
    CHECK(mu.value == doctest::Approx(4).epsilon(1e-9));
    const auto alpha = exponent(terms, 4);
    CHECK(alpha.value == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(constant(terms, 4, -0.5).value == doctest::Approx(1 / std::sqrt(std::numbers::pi)).epsilon(1e-8));
    // uncertainties cover the actual error
    CHECK(std::abs(mu.value - 4) <= mu.uncertainty);
    CHECK(std::abs(alpha.value + 0.5) <= alpha.uncertainty);
}

TEST_CASE("planted forms are recovered within 1%") {
    int cases = 0;
    for (double c : {0.5, 1.91, 7.0}) {
        for (auto [num, den] : {std::pair{2L, 1L}, {4L, 1L}, {5L, 2L}, {3L, 1L}}) {
            for (double alpha : {-5.0 / 3, -1.0, -0.45, -1.0 / 3, 0.0, 0.3, 0.5, 1.5}) {
                const double mu = static_cast<double>(num) / static_cast<double>(den);
                const auto report = fit_asymptotics(planted(c, num, den, alpha, 1000), AsymMode::Totals);
                for (const auto& f : report.fits) {
                    INFO("c=" << c << " mu=" << mu << " alpha=" << alpha << " " << f.subsequence);
                    CHECK(within_percent(f.mu, mu));
                    CHECK(within_percent(f.alpha, alpha));
                    CHECK(within_percent(f.c, c));
                    CHECK(within_percent(f.c_raw, c));
                    CHECK(f.stable());
                    // deeper columns shrink the last-step delta up to the chosen depth
                    for (int k = 1; k < f.alpha_fit.depth; ++k)
                        CHECK(f.alpha_fit.deltas[static_cast<std::size_t>(k)] <
                              f.alpha_fit.deltas[static_cast<std::size_t>(k - 1)]);
                }
                ++cases;
            }
        }
    }
    CHECK(cases == 96);
}

TEST_CASE("snapping") {
    CHECK(snap_rational(-0.3409, kAlphaSnapWindow)->to_string() == "-1/3");
    CHECK(snap_rational(4.0000017, 4 * kMuSnapWindow)->to_string() == "4");
    CHECK(!snap_rational(0.3, kAlphaSnapWindow));
    CHECK(!snap_rational(4.001, 4 * kMuSnapWindow));
    CHECK(snap_rational(-1.6690, kAlphaSnapWindow)->to_string() == "-5/3");
    CHECK(snap_rational(2.5, 1e-9)->to_string() == "5/2");
}

TEST_CASE("shift invariance") {
    const auto terms = planted(1.5, 4, 1, -1.0 / 3, 1000);
    const auto full = log_sequence(terms);
    const auto reference = fit(full);
    for (long long n0 : {0LL, 10LL, 50LL}) {
        LogSequence tail;
        for (std::size_t k = static_cast<std::size_t>(n0); k < full.size(); ++k) {
            tail.index.push_back(full.index[k]);
            tail.log.push_back(full.log[k]);
        }
        const auto f = fit(tail);
        CHECK(std::abs(f.alpha - reference.alpha) <= std::max(reference.alpha_fit.uncertainty, 1e-12));
    }
}

TEST_CASE("returns mode strips parity zeros and keeps the original index") {
    // unconstrained simple walk returns: C(n, n/2)^2 ~ (2/pi) 4^n n^-1
    std::vector<Integer> terms;
    for (unsigned long n = 0; n < 600; ++n) {
        Integer b = 0;
        if (n % 2 == 0) mpz_bin_uiui(b.get_mpz_t(), n, n / 2);
        terms.push_back(b * b);
    }
    const auto report = fit_asymptotics(terms, AsymMode::Returns);
    REQUIRE(report.fits.size() == 1);
    const auto& f = report.best();
    CHECK(f.mu == doctest::Approx(4).epsilon(1e-8));
    CHECK(f.alpha == doctest::Approx(-1).epsilon(1e-5));
    CHECK(f.c == doctest::Approx(2 / std::numbers::pi).epsilon(1e-6));
    CHECK(f.terms_used == 300);
    CHECK_THROWS_AS(fit_asymptotics(terms, AsymMode::Totals), AsymptoticsError);

    std::vector<double> logs(200, 1.0);
    logs[77] = -std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(strip_zeros(logs), AsymptoticsError);
}

TEST_CASE("one-way-axes totals") {
    const auto terms = walk_sequence_exact(catalog_model("S2"), 600, SequenceKind::Totals);
    const auto report = fit_asymptotics(terms, AsymMode::Totals);
    CHECK(report.fits.size() == 2);
    const auto& f = report.best();
    CHECK(std::abs(f.mu - 4) < 1e-3);
    CHECK(std::abs(f.alpha + 1) < 0.05);
    CHECK(f.alpha_exact->to_string() == "-1");

    nlohmann::json j = report;
    CHECK(j["mode"] == "totals");
    CHECK(j["mu"].get<double>() == f.mu);
    CHECK(j.contains("uncertainty"));
    CHECK(j["terms_used"].get<std::size_t>() == f.terms_used);
    CHECK(j["stable"].is_boolean());
    CHECK(j["fits"].size() == 2);
}
