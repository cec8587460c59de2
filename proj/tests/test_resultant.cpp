#include <random>

#include "bphi/resultant.hpp"
#include "doctest.h"

using namespace bphi;

namespace {

mpq_class rq(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n(-7, 7), d(1, 4);
    mpq_class q(n(rng), d(rng));
    q.canonicalize();
    return q;
}

QMat3 rmat(std::mt19937_64& rng) {
    QMat3 m;
    for (auto& r : m)
        for (auto& x : r) x = rq(rng);
    return m;
}

mpq_class pow4(mpq_class x) {
    x *= x;
    return x * x;
}

}  // namespace

TEST_CASE("unit triple has resultant one") { CHECK(macaulay_resultant(unit_triple()) == 1); }

TEST_CASE("diagonal triples give det^4") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        const QMat3 a = rmat(rng);
        CHECK(macaulay_resultant(diagonal_triple(a)) == pow4(det3(a)));
    }
}

TEST_CASE("frozen value from covariance: substituted diagonal triple") {
    // R(A^P) = det(P)^8 R(A) with A = diag rows (1,2,3),(0,1,1),(1,0,2) and P below
    QMat3 a;
    const int av[3][3] = {{1, 2, 3}, {0, 1, 1}, {1, 0, 2}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = av[i][j];
    QMat3 P;
    const int pv[3][3] = {{1, 1, 0}, {0, 2, 1}, {1, 0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) P[i][j] = pv[i][j];
    // det a = 1*(2-0) - 2*(0-1) + 3*(0-1) = 1, det P = 1*(2-0) - 1*(0-1) = 3
    CHECK(det3(a) == 1);
    CHECK(det3(P) == 3);
    CHECK(macaulay_resultant(substitute(diagonal_triple(a), P)) == 6561);
}

TEST_CASE("property: covariance laws") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 8; ++t) {
        QuadricTriple q;
        for (auto& A : q.A)
            for (int r = 0; r < 3; ++r)
                for (int c = r; c < 3; ++c) A[r][c] = A[c][r] = rq(rng);
        QMat3 P = rmat(rng);
        while (det3(P) == 0) P = rmat(rng);
        const CovarianceReport rep = covariance_check(q, P);
        CHECK(rep.combined_ok);
        CHECK(rep.substituted_ok);
    }
}

TEST_CASE("property: common zero forces R = 0") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 5; ++t) {
        QuadricTriple q;
        for (auto& A : q.A)
            for (int r = 0; r < 3; ++r)
                for (int c = r; c < 3; ++c) A[r][c] = A[c][r] = rq(rng);
        // put (1, 1, 1) on every conic
        for (auto& A : q.A) {
            mpq_class s = 0;
            for (auto& row : A)
                for (auto& x : row) s += x;
            A[2][2] -= s;
        }
        CHECK(macaulay_resultant(q) == 0);
    }
}

TEST_CASE("complex resultant agrees with exact arithmetic") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 5; ++t) {
        QuadricTriple q;
        CQuadricTriple c;
        for (int i = 0; i < 3; ++i)
            for (int r = 0; r < 3; ++r)
                for (int s = r; s < 3; ++s) {
                    q.A[i][r][s] = q.A[i][s][r] = rq(rng);
                    c.A[i][r][s] = c.A[i][s][r] = q.A[i][r][s].get_d();
                }
        const double exact = macaulay_resultant(q).get_d();
        CHECK(std::abs(macaulay_resultant(c) - exact) < 1e-8 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("complex resultant stays accurate for small diagonal entries") {
    CMat3 a{};
    a[0] = {0.03, -1.0, 0.0};
    a[1] = {0.0, 1.0, 0.03};
    a[2] = {1.0, 0.0, 1.0};
    const std::complex<double> d = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                                   a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                                   a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    CHECK(std::abs(macaulay_resultant(diagonal_triple(a)) - std::pow(d, 4)) < 1e-10);
}

TEST_CASE("JSON round trip") {
    std::mt19937_64 rng(5);
    const QuadricTriple t = diagonal_triple(rmat(rng));
    const QuadricTriple u = triple_from_json(triple_to_json(t));
    CHECK(macaulay_resultant(u) == macaulay_resultant(t));
    CHECK(is_symmetric(u));
}
