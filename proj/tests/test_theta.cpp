#include <cmath>
#include <random>
#include <set>

#include "bphi/theta.hpp"
#include "doctest.h"

using namespace bphi;

TEST_CASE("genus-1 theta product and sum series agree") {
    for (Theta1 k : {Theta1::T0, Theta1::T2, Theta1::T3})
        CHECK(theta1_product_series(k, 60) == theta1_sum_series(k, 60));
}

TEST_CASE("Jacobi quartic identity holds exactly") {
    const long order = 100;
    const ExactSeries t3 = theta1_sum_series(Theta1::T3, order).pow(4);
    const ExactSeries t2 = theta1_sum_series(Theta1::T2, order).pow(4);
    const ExactSeries t0 = theta1_sum_series(Theta1::T0, order).pow(4);
    CHECK((t3 - t2 - t0).is_zero());
}

TEST_CASE("theta values: sum and product forms agree") {
    for (cplx tau : {cplx(0.1, 0.8), cplx(-0.4, 1.7), cplx(0.25, 0.55)})
        for (Theta1 k : {Theta1::T0, Theta1::T2, Theta1::T3})
            CHECK(std::abs(theta1_value(k, tau) - theta1_product_value(k, tau)) < 1e-12);
}

TEST_CASE("theta_3(i) closed form") {
    // theta_3(i) = pi^{1/4} / Gamma(3/4)
    const double want = std::pow(M_PI, 0.25) / std::tgamma(0.75);
    CHECK(std::abs(theta1_value(Theta1::T3, cplx(0, 1)) - want) < 1e-14);
}

TEST_CASE("lambda at tau = i is 1/2") { CHECK(std::abs(lambda_eval(cplx(0, 1)) - 0.5) < 1e-14); }

TEST_CASE("property: eta modular transformation") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.5, 3.0);
    for (int t = 0; t < 20; ++t) {
        const cplx tau(re(rng), im(rng));
        const cplx lhs = std::pow(eta_value(-1.0 / tau), 8);
        const cplx rhs = std::pow(tau, 4) * std::pow(eta_value(tau), 8);
        CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-10);
    }
}

TEST_CASE("ten even characteristics") {
    const auto ev = even_characteristics();
    CHECK(ev.size() == 10);
    std::set<std::string> labels;
    for (const auto& c : ev) {
        CHECK(c.even());
        labels.insert(c.label());
    }
    CHECK(labels.size() == 10);
    CHECK(ev_classes().size() == 10);
}

TEST_CASE("theta^8 series evaluates to the numeric theta^8") {
    const CMat2 T{{{cplx(0.1, 1.5), cplx(0.05, 0.2)}, {cplx(0.05, 0.2), cplx(-0.2, 1.4)}}};
    for (const Char2& ch : even_characteristics()) {
        const MultiSeries s = theta2_pow8(ch, 12);
        cplx sum = 0;
        for (const auto& [k, c] : s.terms()) {
            const cplx e = cplx(0, M_PI) * (double(k[0]) * T[0][0] + double(k[1]) * T[0][1] + double(k[2]) * T[1][1]) /
                           double(s.den());
            sum += cplx(c.re.get_d(), c.im.get_d()) * std::exp(e);
        }
        const cplx want = std::pow(theta2_value(ch, T), 8);
        CHECK(std::abs(sum - want) < 1e-6 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("diagonal genus-2 theta splits into genus-1 factors") {
    const cplx t1(0.2, 1.1), t2(-0.1, 0.9);
    const CMat2 T{{{t1, 0}, {0, t2}}};
    const Char2 ch{0, 1, 0, 0};  // (a1,b1) = (0,0), (a2,b2) = (1,0)
    const cplx want = theta1_value(Theta1::T3, t1) * theta1_value(Theta1::T2, t2);
    CHECK(std::abs(theta2_value(ch, T) - want) < 1e-12);
}

TEST_CASE("property: Freitag theta equals genus-2 theta squared on Siegel points") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> re(-0.5, 0.5), off(-0.25, 0.25), im(0.9, 1.6);
    for (int t = 0; t < 3; ++t) {
        const cplx a(re(rng), im(rng)), c(re(rng), im(rng)), b(re(rng), off(rng));
        const CMat2 T{{{a, b}, {b, c}}};
        for (const EvChar& ev : ev_classes()) {
            const cplx F = freitag_theta(ev, T);
            const cplx th = std::pow(theta2_value(ev.real_part(), T), 2);
            CHECK(std::abs(F - th) < 1e-10 * std::max(1.0, std::abs(F)));
        }
    }
}

TEST_CASE("correspondence tables") {
    const auto& t = correspondence_tables();
    CHECK(t.ev_to_partition.size() == 10);
    CHECK(t.char_to_partition.size() == 9);
    CHECK(t.epsdelta_to_partition.size() == 9);
    CHECK(t.minor_table.size() == 9);
    CHECK(epsilon_delta("126/345") == std::make_pair(3, 3));
    CHECK(epsilon_delta("135/246") == std::make_pair(2, 2));
    CHECK_THROWS(epsilon_delta("123/456"));
}
