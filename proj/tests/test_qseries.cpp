#include <random>

#include "bphi/qseries.hpp"
#include "doctest.h"

using namespace bphi;

TEST_CASE("Gaussian integer units cycle with period four") {
    CHECK(GaussInt::unit(0) == GaussInt(1));
    CHECK(GaussInt::unit(1) == GaussInt(0, 1));
    CHECK(GaussInt::unit(2) == GaussInt(-1));
    CHECK(GaussInt::unit(-1) == GaussInt(0, -1));
    CHECK(GaussInt::unit(7) == GaussInt::unit(3));
    CHECK(GaussInt(3, 4).norm() == 25);
    CHECK(to_string(GaussInt(0, -2)) != "");
}

TEST_CASE("series inverse and multiplication") {
    const long order = 30;
    ExactSeries f = factor_power(1, -1, 1, order);  // 1 - q
    ExactSeries g = f.inverse();                    // 1 + q + q^2 + ...
    for (long e = 0; e < order; ++e) CHECK(g.coeff(e) == GaussInt(1));
    CHECK(series_mul(f, g) == ExactSeries::constant(GaussInt(1), 1, order));
}

TEST_CASE("factor_power agrees with repeated multiplication") {
    const long order = 25;
    for (int sign : {1, -1})
        for (int k : {-3, 2, 5}) {
            ExactSeries direct = factor_power(2, sign, k, order);
            ExactSeries base = factor_power(2, sign, 1, order);
            ExactSeries rep = ExactSeries::constant(GaussInt(1), 1, order);
            for (int i = 0; i < std::abs(k); ++i) rep = rep * base;
            if (k < 0) rep = rep.inverse();
            CHECK(direct == rep);
        }
}

TEST_CASE("eta series follows the pentagonal exponents") {
    // q^{1/24} (1 - q - q^2 + q^5 + q^7 - q^12 - q^15 + ...)
    const ExactSeries eta = eta_series(1, 20);
    CHECK(eta.den() == 24);
    const std::map<long, long> want = {{0, 1}, {1, -1}, {2, -1}, {5, 1}, {7, 1}, {12, -1}, {15, -1}};
    for (long n = 0; n < 19; ++n) {
        const long c = want.count(n) ? want.at(n) : 0;
        CHECK(eta.coeff(1 + 24 * n) == GaussInt(c));
    }
}

TEST_CASE("c(n) stream matches frozen oracle values") {
    // computed independently as q^{-1} prod (1-q^n)^-8 (1-q^{2n})^8 (1-q^{4n})^-8
    const long frozen[] = {1, 8, 36, 128, 402, 1152, 3064, 7680, 18351, 42112, 93300, 200448};
    const auto c = c_coeffs(10);
    REQUIRE(c.size() >= 12);
    for (int i = 0; i < 12; ++i) CHECK(c[i] == frozen[i]);
}

TEST_CASE("exact series JSON round trip") {
    ExactSeries s(4, 10);
    s.add_term(3, GaussInt(2, -1));
    s.add_term(17, GaussInt(-5));
    CHECK(ExactSeries::from_json(s.to_json()) == s);
}

TEST_CASE("adding a term beyond the cap is ignored or rejected consistently") {
    ExactSeries s(1, 5);
    s.add_term(2, GaussInt(1));
    CHECK(s.valuation() == 2);
    CHECK(ExactSeries(1, 5).valuation() == 5);
}

TEST_CASE("MultiSeries binomial factor matches explicit product") {
    const long order = 6;
    MultiSeries a = MultiSeries::constant(GaussInt(1), 2, order);
    a.mul_binomial({1, 0, 1}, GaussInt(-1), 3);
    MultiSeries b = MultiSeries::constant(GaussInt(1), 2, order);
    MultiSeries lin = MultiSeries::constant(GaussInt(1), 2, order);
    lin.add_term({1, 0, 1}, GaussInt(-1));
    for (int i = 0; i < 3; ++i) b = b * lin;
    CHECK(a == b);
}

TEST_CASE("diagonal sums over the cross exponent") {
    MultiSeries s(2, 4, 2);
    s.add_term({1, 1, 1}, GaussInt(2));
    s.add_term({1, -1, 1}, GaussInt(3));
    s.add_term({1, 0, 1}, GaussInt(-1));
    const MultiSeries d = s.diagonal();
    CHECK(d.coeff({1, 0, 1}) == GaussInt(4));
    CHECK(d.terms().size() == 1);
}

TEST_CASE("property: series multiplication is commutative and associative") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coef(-4, 4);
    auto rnd = [&] {
        ExactSeries s(1, 12);
        for (long e = 0; e < 12; ++e) s.add_term(e, GaussInt(coef(rng), coef(rng)));
        return s;
    };
    for (int t = 0; t < 10; ++t) {
        const ExactSeries a = rnd(), b = rnd(), c = rnd();
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
    }
}
