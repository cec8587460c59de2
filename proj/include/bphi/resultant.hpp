#pragma once

#include <gmpxx.h>

#include <array>
#include <complex>

#include "json.hpp"

namespace bphi {

using QMat3 = std::array<std::array<mpq_class, 3>, 3>;
using CMat3 = std::array<std::array<std::complex<double>, 3>, 3>;

// Three ternary quadratic forms Q(x; A_i) = sum_jk A_i[j][k] x_j x_k.
struct QuadricTriple {
    std::array<QMat3, 3> A;
};
struct CQuadricTriple {
    std::array<CMat3, 3> A;
};

QuadricTriple unit_triple();
// A_i = diag(a[i][0], a[i][1], a[i][2])
QuadricTriple diagonal_triple(const QMat3& a);
CQuadricTriple diagonal_triple(const CMat3& a);
bool is_symmetric(const QuadricTriple& t);

mpq_class macaulay_resultant(const QuadricTriple& t);
std::complex<double> macaulay_resultant(const CQuadricTriple& t);

// (A.P)_j = sum_i A_i P_ij
QuadricTriple combine(const QuadricTriple& t, const QMat3& P);
// (A^P)_i = P^T A_i P, i.e. x -> P x in every form
QuadricTriple substitute(const QuadricTriple& t, const QMat3& P);
mpq_class det3(const QMat3& m);

struct CovarianceReport {
    mpq_class R, R_combined, R_substituted, detP;
    bool combined_ok = false;     // R(A.P) = det(P)^4 R(A)
    bool substituted_ok = false;  // R(A^P) = det(P)^8 R(A)
    bool ok() const { return combined_ok && substituted_ok; }
};
CovarianceReport covariance_check(const QuadricTriple& t, const QMat3& P);

QuadricTriple triple_from_json(const nlohmann::json& j);
nlohmann::json triple_to_json(const QuadricTriple& t);
nlohmann::json rational_to_json(const mpq_class& q);

}  // namespace bphi
