#include <cmath>
#include <random>
#include <set>

#include "bphi/kummer.hpp"
#include "bphi/verify.hpp"
#include "doctest.h"

using namespace bphi;

TEST_CASE("partitions of six into two triples") {
    CHECK(all_partitions().size() == 10);
    CHECK(admissible_partitions().size() == 9);
    std::set<std::string> labels;
    for (const Partition& p : all_partitions()) labels.insert(p.label());
    CHECK(labels.size() == 10);
    CHECK(Partition::parse("246/135") == Partition::parse("135/246"));
    CHECK(Partition::parse("456/123").degenerate());
    CHECK_THROWS(Partition::parse("12/3456"));
}

TEST_CASE("bivariate polynomial parsing") {
    const BiPoly p = parse_bipoly("l1^2(l2-1)^2");
    CHECK(p.eval(mpq_class(2), mpq_class(3)) == 16);
    CHECK(parse_bipoly("1").eval(mpq_class(5), mpq_class(7)) == 1);
    CHECK((BiPoly::l1() * BiPoly::l2() - BiPoly::l2() * BiPoly::l1()).is_zero());
}

TEST_CASE("the degenerate minors vanish identically") {
    const auto m = all_minors();
    CHECK(m.size() == 20);
    // x0, x1, x2: the last two rows are proportional; y0, y1, y2: the first row is zero
    CHECK(m.at("123").is_zero());
    CHECK(m.at("456").is_zero());
    CHECK_FALSE(m.at("126").is_zero());
    CHECK(partition_minor(Partition::parse("123/456")).is_zero());
}

TEST_CASE("minor table holds symbolically and through theta quotients") {
    const auto rows = check_minor_table({{cplx(0.1, 1.2), cplx(-0.2, 0.9)}, {cplx(0, 1), cplx(0.3, 1.5)}});
    CHECK(rows.size() == 9);
    for (const auto& r : rows) {
        CHECK(r.symbolic_ok);
        CHECK(r.numeric_residual < 1e-10);
    }
}

TEST_CASE("property: R(A) R(B) equals the fourth power of the partition minor") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> n(-9, 9), d(2, 7);
    for (int t = 0; t < 6; ++t) {
        mpq_class l1(n(rng), d(rng)), l2(n(rng), d(rng));
        l1.canonicalize();
        l2.canonicalize();
        for (const Partition& p : admissible_partitions()) {
            const auto [A, B] = quadric_split(p, l1, l2);
            mpq_class delta = partition_minor(p).eval(l1, l2);
            delta *= delta;
            CHECK(macaulay_resultant(A) * macaulay_resultant(B) == delta * delta);
        }
    }
    CHECK_THROWS_AS(quadric_split(Partition::parse("123/456"), mpq_class(1, 3), mpq_class(1, 5)),
                    std::invalid_argument);
}

TEST_CASE("lambda at the square point") {
    const ProductPoint p{cplx(0, 1), cplx(0, 1)};
    CHECK(p.valid());
    CHECK(std::abs(p.lambda1() - 0.5) < 1e-14);
}

TEST_CASE("gamma34 period at tau = i in closed form") {
    // 4 c = pi^2 theta_3(i)^4 / 2 with theta_3(i)^4 = pi / Gamma(3/4)^4
    const PeriodQuantities q = period_quantities({cplx(0, 1), cplx(0, 1)});
    const double want = std::pow(M_PI, 3) / (2 * std::pow(std::tgamma(0.75), 4));
    CHECK(std::abs(q.gamma34_integral - want) < 1e-12 * want);
}

TEST_CASE("uniformized points lie on the quadrics, with degree two") {
    const ProductPoint p{cplx(0.1, 1.1), cplx(-0.3, 0.9)};
    const auto x = uniformize(p, cplx(0.31, 0.17), cplx(-0.22, 0.4));
    const auto m = m_matrix(p.lambda1(), p.lambda2());
    for (const auto& row : m) {
        cplx s = 0;
        for (int k = 0; k < 6; ++k) s += row[k] * x[k] * x[k];
        CHECK(std::abs(s) < 1e-10);
    }
    CHECK(uniformization_degree(p, cplx(0.31, 0.17), cplx(-0.22, 0.4)) == 2);
}

TEST_CASE("Monte-Carlo volume agrees with the closed form") {
    const ProductPoint p{cplx(0.3, 0.8), cplx(-0.4, 1.0)};
    const MonteCarloEstimate mc = monte_carlo_integral(p, 500, 11);
    const double closed = period_quantities(p).integral_x;
    CHECK(std::abs(mc.integral_x - closed) < 5e-3 * closed);
    CHECK(mc.max_model_residual < 1e-8);
}

TEST_CASE("norm identity at sample points") {
    for (const auto& pt : {ProductPoint{cplx(0, 1.1), cplx(0.9, 1.3)}, ProductPoint{cplx(0, 2), cplx(0, 2)}})
        for (const char* s : {"126/345", "135/246", "146/235"}) {
            const NormIdentityReport r = norm_identity_check(pt, Partition::parse(s));
            CHECK(r.residual < 1e-6);
        }
}

TEST_CASE("degenerate paths push lambda to the cusps") {
    CHECK(std::abs(ProductPoint{cplx(0, 6), cplx(0, 1)}.lambda1()) < 1e-6);
    CHECK(std::abs(ProductPoint{cplx(0, 0.15), cplx(0, 1)}.lambda1() - 1.0) < 1e-6);
}

TEST_CASE("genus-1 index of characteristic entries") {
    CHECK(genus1_index(0, 0) == 3);
    CHECK(genus1_index(1, 0) == 2);
    CHECK(genus1_index(0, 1) == 0);
    CHECK(genus1_index(1, 1) == -1);
}

TEST_CASE("level-2 product embeddings restrict to a unique theta^8") {
    SearchOptions o;
    o.max_results = 2;
    const SearchResult s = find_embeddings(derive_source_gram("product"), 2, o);
    REQUIRE_FALSE(s.embeddings.empty());
    for (const PinnedEmbedding& emb : s.embeddings) {
        const Theta8Report r = theta8_restriction_check(emb, 6);
        CHECK(r.ok());
        CHECK(r.integral);
        CHECK_FALSE(r.partition.empty());
    }
}
