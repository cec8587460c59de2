#include <random>

#include "bphi/lattice.hpp"
#include "doctest.h"

using namespace bphi;

TEST_CASE("E8 is even, unimodular and negative definite") {
    const IntegralLattice E8 = lattice_E8();
    CHECK(E8.is_even());
    CHECK(E8.determinant() == 1);
    CHECK(E8.is_negative_definite());
    CHECK(E8.signature() == std::make_pair(0, 8));
}

TEST_CASE("E8 short vector counts") {
    // 240 roots and 2160 vectors of norm 4, one of each sign pair
    const IntegralLattice E8 = lattice_E8();
    CHECK(short_vectors(E8, 2).size() == 120);
    long n4 = 0;
    for (const auto& v : short_vectors(E8, 4)) n4 += (E8.norm(v) == -4);
    CHECK(n4 == 1080);
}

TEST_CASE("Enriques lattice invariants") {
    const IntegralLattice L = lattice_Lambda();
    CHECK(L.rank() == 12);
    CHECK(L.is_even());
    CHECK(L.signature() == std::make_pair(2, 10));
    CHECK(L.determinant() == 1024);
    CHECK(level_of_isotropic(L, lambda_e(1)) == 1);
    CHECK(level_of_isotropic(L, lambda_e(2)) == 2);
    CHECK(L.inner(lambda_e(1), lambda_f(1)) == 1);
    CHECK(L.inner(lambda_e(2), lambda_f(2)) == 2);
}

TEST_CASE("M_l lattices") {
    const IntegralLattice M1 = lattice_M(1), M2 = lattice_M(2);
    CHECK(M1.signature() == std::make_pair(1, 9));
    CHECK(M2.signature() == std::make_pair(1, 9));
    // every norm in M1 is divisible by 4
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int t = 0; t < 200; ++t) {
        IVec v(10);
        for (auto& x : v) x = d(rng);
        CHECK(M1.norm(v) % 4 == 0);
    }
    CHECK_THROWS_AS(lattice_M(3), std::invalid_argument);
}

TEST_CASE("projection and lift are inverse on M") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int level : {1, 2}) {
        IVec m(10);
        for (auto& x : m) x = d(rng);
        CHECK(project_to_M(lift_from_M(m, level), level) == m);
        CHECK(lattice_M(level).norm(m) == lattice_Lambda().norm(lift_from_M(m, level)));
    }
}

TEST_CASE("elementary divisors and primitivity") {
    const IMat rows = {{2, 0, 0}, {0, 3, 0}};
    const auto ed = elementary_divisors(rows);
    REQUIRE(ed.size() == 2);
    CHECK(ed[0] == 1);
    CHECK(ed[1] == 6);
    CHECK_FALSE(spans_primitive(rows));
    CHECK(spans_primitive({{1, 2, 3}, {0, 1, 4}}));
}

TEST_CASE("integer solutions") {
    const IMat A = {{2, 4, 0}, {0, 3, 3}};
    const auto sol = solve_integer(A, {6, 9});
    REQUIRE(sol.has_value());
    CHECK(mat_vec(A, sol->particular) == IVec{6, 9});
    for (const auto& k : sol->kernel) CHECK(is_zero(mat_vec(A, k)));
    CHECK_FALSE(solve_integer({{2, 4}}, {3}).has_value());
}

TEST_CASE("positive cone of M_l contains e + f") {
    for (int level : {1, 2}) {
        const ConeReference c = cone_of_M(level);
        IVec ef(10, 0);
        ef[0] = ef[1] = 1;
        CHECK(c.in_open_cone(ef));
        CHECK_FALSE(c.in_closed_cone(scale(ef, -1)));
        IVec e(10, 0);
        e[0] = 1;
        CHECK(c.in_closed_cone(e));
        CHECK_FALSE(c.in_open_cone(e));
    }
}

TEST_CASE("quadratic enumeration counts lattice points in a disc") {
    // x^2 + y^2 <= 5 has 21 integer points
    long n = 0;
    enumerate_quadratic({{1, 0}, {0, 1}}, {0, 0}, 0, 5, [&](const IVec&) { ++n; });
    CHECK(n == 21);
}

TEST_CASE("slices of M_2 count the E8 roots") {
    const IntegralLattice M = lattice_M(2);
    IVec B(10, 0), D(10, 0);
    B[0] = 1;
    D[1] = 1;
    // v = e + f + w with 2 + w^2 >= -2: w = 0 or one of the 240 roots of E8 (norm -4 in E8(2))
    const auto s = slice_vectors(M, B, D, 1, 1, -2);
    CHECK(s.size() == 241);
    for (const auto& v : s) {
        CHECK(M.inner(v, B) == 1);
        CHECK(M.inner(v, D) == 1);
        CHECK(M.norm(v) >= -2);
    }
}

TEST_CASE("property: LLL keeps the lattice and shortens the basis") {
    const IMat gram = {{2, 0, 0}, {0, 2, 0}, {0, 0, 2}};
    const IMat basis = {{1, 5, 7}, {0, 1, 3}, {0, 0, 1}};
    const IMat red = lll_reduce(basis, gram);
    CHECK(elementary_divisors(red) == elementary_divisors(basis));
    long long before = 0, after = 0;
    for (const auto& r : basis) before = std::max(before, dot(r, r));
    for (const auto& r : red) after = std::max(after, dot(r, r));
    CHECK(after <= before);
}
