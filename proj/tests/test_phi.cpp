#include <cmath>

#include "bphi/phi.hpp"
#include "bphi/verify.hpp"
#include "doctest.h"

using namespace bphi;

namespace {

// frozen from an independent big-integer product expansion
const long kPhi1[] = {1, -16, 112, -448, 1136, -2016, 3136, -5504, 9328, -12112, 14112, -21312};
const long kPhi2[] = {0, 0, 256, 0, 2048, 0, 7168, 0, 16384, 0, 32256, 0};

TubePoint sample_point(int level) {
    TubePoint p{level, CVec(10, 0.0)};
    p.z[0] = cplx(0.1, 2.0);
    p.z[1] = cplx(0.03, 1.2);
    for (int i = 2; i < 10; ++i) p.z[i] = cplx(0.01 * i, 0.02 * (i % 3));
    return p;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST_CASE("boundary products match frozen coefficients") {
    const ExactSeries p1 = phi1_boundary(12), p2 = phi2_boundary(12);
    for (long n = 0; n < 12; ++n) {
        CHECK(p1.coeff(n) == GaussInt(kPhi1[n]));
        CHECK(p2.coeff(n) == GaussInt(kPhi2[n]));
    }
}

TEST_CASE("boundary products equal their eta quotients") {
    CHECK(phi1_boundary(50) == phi1_boundary_eta(50));
    CHECK(phi2_boundary(50) == phi2_boundary_eta(50));
    CHECK_THROWS_AS(phi1_boundary(0), std::invalid_argument);
}

TEST_CASE("level-2 product family expansion is a theta^8 product") {
    const SearchResult& s = cached_search("product", 2);
    REQUIRE_FALSE(s.embeddings.empty());
    const PeriodCoeffs pc = period_coeffs(s.embeddings.front());
    const RestrictedExpansion ex = restricted_expansion(pc, 6);
    CHECK(ex.integral);
    CHECK_FALSE(ex.zero_by_mirror);
    const MultiSeries d = ex.series.diagonal();
    bool found = false;
    for (const Char2& ch : even_characteristics()) {
        const MultiSeries t = theta2_pow8(ch, 6).diagonal();
        if (d == t || d == -t) found = true;
    }
    CHECK(found);
}

TEST_CASE("series and numerical product agree on the family") {
    const SearchResult& s = cached_search("product", 2);
    REQUIRE_FALSE(s.embeddings.empty());
    const PeriodCoeffs pc = period_coeffs(s.embeddings.front());
    const RestrictedExpansion ex = restricted_expansion(pc, 8);
    const CMat2 T{{{cplx(0.1, 2.4), cplx(0)}, {cplx(0), cplx(-0.2, 2.6)}}};
    const TubePoint p{2, family_point(pc, T)};
    REQUIRE(in_tube(p));
    const NumericValue v = eval_numeric(p, 30);
    CHECK(rel(evaluate_series(ex.series, T), v.value) < 1e-6);
}

TEST_CASE("property: translation by the lattice leaves Phi unchanged") {
    for (int level : {1, 2}) {
        const TubePoint p = sample_point(level);
        TubePoint q = p;
        const int shift[10] = {1, -2, 0, 1, 3, 0, -1, 0, 2, 1};
        for (int i = 0; i < 10; ++i) q.z[i] += double(shift[i]);
        const NumericValue a = eval_numeric(p, 25), b = eval_numeric(q, 25);
        CHECK(rel(b.value, a.value) < 1e-10);
    }
}

TEST_CASE("property: E8 reflections leave Phi unchanged") {
    for (int level : {1, 2})
        for (int k = 2; k < 10; ++k) {
            const TubePoint p = sample_point(level);
            CVec r(10, 0.0);
            r[k] = 1.0;  // a root of E8, norm -4 in E8(2)
            const cplx c = 2.0 * pairing(level, p.z, r) / pairing(level, r, r);
            TubePoint q = p;
            for (int i = 0; i < 10; ++i) q.z[i] -= c * r[i];
            REQUIRE(in_tube(q));
            CHECK(rel(eval_numeric(q, 25).value, eval_numeric(p, 25).value) < 1e-10);
        }
}

TEST_CASE("level relation at a tube point") {
    TubePoint p{1, CVec(10, 0.0)};
    p.z[0] = cplx(0.1, 2.5);
    p.z[1] = cplx(0.03, 0.8);
    for (int i = 2; i < 10; ++i) p.z[i] = cplx(0.01 * i, 0.0);
    const NumericValue v1 = eval_numeric(p, 30);
    const NumericValue v2 = eval_numeric(level_transform(p), 30);
    const cplx ez = pairing(1, p.z, CVec{1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    CHECK(rel(v2.value, std::pow(ez, 4) * v1.value) < 1e-6);
}

TEST_CASE("root orthogonal to the family with trivial phase kills the expansion") {
    const MirrorFamily fam = mirror_family();
    const RestrictedExpansion ex = restricted_expansion(fam.coeffs, 4);
    CHECK(ex.zero_by_mirror);
    CHECK(ex.series.is_zero());
    CHECK(lattice_M(2).norm(fam.root) == -2);
}

TEST_CASE("expansion budget and input validation") {
    const SearchResult& s = cached_search("product", 2);
    REQUIRE_FALSE(s.embeddings.empty());
    const PeriodCoeffs pc = period_coeffs(s.embeddings.front());
    ExpansionOptions o;
    o.budget = 10;
    CHECK_THROWS_AS(restricted_expansion(pc, 6, o), BudgetError);
    PeriodCoeffs bad = pc;
    bad.B[0] += 1;
    CHECK_THROWS_AS(restricted_expansion(bad, 4), std::invalid_argument);
    TubePoint outside{1, CVec(10, 0.0)};
    CHECK_THROWS_AS(eval_numeric(outside, 10), std::domain_error);
}

TEST_CASE("tube point JSON round trip") {
    const TubePoint p = sample_point(2);
    const TubePoint q = TubePoint::from_json(p.to_json());
    CHECK(q.level == 2);
    CHECK(q.z == p.z);
}
