#include "bphi/resultant.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bphi {

namespace {

using Mono = std::array<int, 3>;

// degree-4 monomials in x1,x2,x3, graded lex
const std::vector<Mono>& degree4() {
    static const std::vector<Mono> m = [] {
        std::vector<Mono> out;
        for (int a = 4; a >= 0; --a)
            for (int b = 4 - a; b >= 0; --b) out.push_back({a, b, 4 - a - b});
        return out;
    }();
    return m;
}

int mono_index(const Mono& m) {
    const auto& all = degree4();
    for (size_t i = 0; i < all.size(); ++i)
        if (all[i] == m) return static_cast<int>(i);
    throw std::logic_error("monomial out of range");
}

// Row of monomial m uses f_i * m / x_i^2 for the first i with x_i^2 | m.
int row_form(const Mono& m) {
    for (int i = 0; i < 3; ++i)
        if (m[i] >= 2) return i;
    return -1;
}

// Monomials divisible by two distinct squares: the rows/columns of the extraneous minor.
bool non_reduced(const Mono& m) {
    int c = 0;
    for (int i = 0; i < 3; ++i) c += (m[i] >= 2);
    return c >= 2;
}

template <class F>
using Mat = std::vector<std::vector<F>>;

template <class F>
Mat<F> macaulay_matrix(const std::array<std::array<std::array<F, 3>, 3>, 3>& A) {
    const auto& mons = degree4();
    const int N = static_cast<int>(mons.size());
    Mat<F> M(N, std::vector<F>(N, F(0)));
    for (int r = 0; r < N; ++r) {
        Mono m = mons[r];
        const int i = row_form(m);
        if (i < 0) throw std::logic_error("degree-4 monomial without a square factor");
        m[i] -= 2;
        for (int j = 0; j < 3; ++j)
            for (int k = j; k < 3; ++k) {
                F c = (j == k) ? A[i][j][j] : F(A[i][j][k] + A[i][k][j]);
                Mono t = m;
                t[j] += 1;
                t[k] += 1;
                M[r][mono_index(t)] += c;
            }
    }
    return M;
}

mpq_class det_exact(Mat<mpq_class> a) {
    // fraction-free elimination (Bareiss); exact over Q
    const int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    mpq_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int p = -1;
            for (int r = k + 1; r < n; ++r)
                if (a[r][k] != 0) {
                    p = r;
                    break;
                }
            if (p < 0) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

std::complex<double> det_numeric(Mat<std::complex<double>> a) {
    const int n = static_cast<int>(a.size());
    std::complex<double> d = 1;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int r = k + 1; r < n; ++r)
            if (std::abs(a[r][k]) > std::abs(a[p][k])) p = r;
        if (a[p][k] == 0.0) return 0;
        if (p != k) {
            std::swap(a[k], a[p]);
            d = -d;
        }
        d *= a[k][k];
        for (int i = k + 1; i < n; ++i) {
            const auto f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return d;
}

template <class F>
Mat<F> extraneous_block(const Mat<F>& M) {
    const auto& mons = degree4();
    std::vector<int> idx;
    for (size_t i = 0; i < mons.size(); ++i)
        if (non_reduced(mons[i])) idx.push_back(static_cast<int>(i));
    Mat<F> S(idx.size(), std::vector<F>(idx.size()));
    for (size_t r = 0; r < idx.size(); ++r)
        for (size_t c = 0; c < idx.size(); ++c) S[r][c] = M[idx[r]][idx[c]];
    return S;
}

// Deterministic unimodular substitutions used when the extraneous minor vanishes.
QMat3 fallback_matrix(int k) {
    QMat3 L{}, U{};
    for (int i = 0; i < 3; ++i) L[i][i] = U[i][i] = 1;
    L[1][0] = k;
    L[2][0] = k + 1;
    L[2][1] = k + 2;
    U[0][1] = k;
    U[0][2] = 1;
    U[1][2] = k + 1;
    QMat3 P{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            P[i][j] = 0;
            for (int t = 0; t < 3; ++t) P[i][j] += L[i][t] * U[t][j];
        }
    return P;
}

template <class F>
std::array<std::array<std::array<F, 3>, 3>, 3> substitute_generic(
    const std::array<std::array<std::array<F, 3>, 3>, 3>& A, const QMat3& P) {
    std::array<std::array<std::array<F, 3>, 3>, 3> out{};
    for (int i = 0; i < 3; ++i)
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                F s = F(0);
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k) {
                        if constexpr (std::is_same_v<F, mpq_class>) {
                            s += P[j][r] * A[i][j][k] * P[k][c];
                        } else {
                            s += P[j][r].get_d() * A[i][j][k] * P[k][c].get_d();
                        }
                    }
                out[i][r][c] = s;
            }
    return out;
}

mpq_class raw_resultant(const std::array<QMat3, 3>& A, bool& ok) {
    Mat<mpq_class> M = macaulay_matrix<mpq_class>(A);
    mpq_class den = det_exact(extraneous_block(M));
    ok = den != 0;
    if (!ok) return 0;
    return det_exact(M) / den;
}

const mpq_class& unit_normalizer() {
    static const mpq_class n = [] {
        bool ok = false;
        mpq_class r = raw_resultant(unit_triple().A, ok);
        if (!ok || r == 0) throw std::logic_error("unit triple normalization failed");
        return r;
    }();
    return n;
}

constexpr int kFallbackTries = 24;

}  // namespace

QuadricTriple unit_triple() {
    QMat3 a{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = (i == j) ? 1 : 0;
    return diagonal_triple(a);
}

QuadricTriple diagonal_triple(const QMat3& a) {
    QuadricTriple t;
    for (int i = 0; i < 3; ++i)
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) t.A[i][r][c] = (r == c) ? a[i][r] : mpq_class(0);
    return t;
}

CQuadricTriple diagonal_triple(const CMat3& a) {
    CQuadricTriple t;
    for (int i = 0; i < 3; ++i)
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) t.A[i][r][c] = (r == c) ? a[i][r] : 0.0;
    return t;
}

bool is_symmetric(const QuadricTriple& t) {
    for (const auto& a : t.A)
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < r; ++c)
                if (a[r][c] != a[c][r]) return false;
    return true;
}

mpq_class macaulay_resultant(const QuadricTriple& t) {
    if (!is_symmetric(t)) throw std::invalid_argument("quadric matrices must be symmetric");
    bool ok = false;
    mpq_class r = raw_resultant(t.A, ok);
    if (ok) return r / unit_normalizer();
    // R(A^P) = det(P)^8 R(A); the fallback matrices are unimodular
    for (int k = 1; k <= kFallbackTries; ++k) {
        const QMat3 P = fallback_matrix(k);
        r = raw_resultant(substitute_generic<mpq_class>(t.A, P), ok);
        if (ok) {
            mpq_class d = det3(P);
            mpq_class d8 = d * d;
            d8 *= d8;
            d8 *= d8;
            return r / unit_normalizer() / d8;
        }
    }
    throw std::runtime_error("Macaulay denominator vanished for every fallback substitution");
}

std::complex<double> macaulay_resultant(const CQuadricTriple& t) {
    const double norm = unit_normalizer().get_d();
    // keep the substitution whose extraneous minor is largest relative to the entry scale
    double best_rel = 0;
    std::complex<double> best = 0;
    for (int k = 0; k <= kFallbackTries; ++k) {
        const QMat3 P = k ? fallback_matrix(k) : QMat3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
        const std::array<CMat3, 3> A = k ? substitute_generic<std::complex<double>>(t.A, P) : t.A;
        Mat<std::complex<double>> M = macaulay_matrix<std::complex<double>>(A);
        const std::complex<double> den = det_numeric(extraneous_block(M));
        double scale = 0;
        for (const auto& a : A)
            for (const auto& row : a)
                for (const auto& v : row) scale = std::max(scale, std::abs(v));
        const double rel = std::abs(den) / std::pow(std::max(scale, 1e-300), 6);
        if (rel > best_rel) {
            best_rel = rel;
            best = det_numeric(M) / den / norm / std::pow(det3(P).get_d(), 8);
        }
        if (best_rel > 1e-6) break;
    }
    if (best_rel <= 1e-14) throw std::runtime_error("Macaulay denominator vanished for every fallback substitution");
    return best;
}

mpq_class det3(const QMat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

QuadricTriple combine(const QuadricTriple& t, const QMat3& P) {
    QuadricTriple out;
    for (int j = 0; j < 3; ++j)
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                mpq_class s = 0;
                for (int i = 0; i < 3; ++i) s += t.A[i][r][c] * P[i][j];
                out.A[j][r][c] = s;
            }
    return out;
}

QuadricTriple substitute(const QuadricTriple& t, const QMat3& P) {
    QuadricTriple out;
    out.A = substitute_generic<mpq_class>(t.A, P);
    return out;
}

CovarianceReport covariance_check(const QuadricTriple& t, const QMat3& P) {
    CovarianceReport rep;
    rep.detP = det3(P);
    if (rep.detP == 0) throw std::invalid_argument("P must be invertible");
    rep.R = macaulay_resultant(t);
    rep.R_combined = macaulay_resultant(combine(t, P));
    rep.R_substituted = macaulay_resultant(substitute(t, P));
    mpq_class d4 = rep.detP * rep.detP;
    d4 *= d4;
    rep.combined_ok = rep.R_combined == d4 * rep.R;
    rep.substituted_ok = rep.R_substituted == d4 * d4 * rep.R;
    return rep;
}

nlohmann::json rational_to_json(const mpq_class& q) {
    return {{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

namespace {
mpq_class rational_from_json(const nlohmann::json& v) {
    if (v.is_number_integer()) return mpq_class(mpz_class(std::to_string(v.get<long long>())));
    if (v.is_string()) {
        mpq_class q(v.get<std::string>());
        q.canonicalize();
        return q;
    }
    if (v.is_object()) {
        mpq_class q(mpz_class(v.at("num").get<std::string>()), mpz_class(v.at("den").get<std::string>()));
        q.canonicalize();
        return q;
    }
    throw std::invalid_argument("rational entries must be integers, \"p/q\" strings or {num,den}");
}
}  // namespace

QuadricTriple triple_from_json(const nlohmann::json& j) {
    const auto& arr = j.contains("A") ? j.at("A") : j;
    if (!arr.is_array() || arr.size() != 3) throw std::invalid_argument("triple needs three 3x3 matrices");
    QuadricTriple t;
    for (int i = 0; i < 3; ++i) {
        if (arr[i].size() != 3) throw std::invalid_argument("quadric matrix must be 3x3");
        for (int r = 0; r < 3; ++r) {
            if (arr[i][r].size() != 3) throw std::invalid_argument("quadric matrix must be 3x3");
            for (int c = 0; c < 3; ++c) t.A[i][r][c] = rational_from_json(arr[i][r][c]);
        }
    }
    if (!is_symmetric(t)) throw std::invalid_argument("quadric matrices must be symmetric");
    return t;
}

nlohmann::json triple_to_json(const QuadricTriple& t) {
    nlohmann::json A = nlohmann::json::array();
    for (const auto& a : t.A) {
        nlohmann::json m = nlohmann::json::array();
        for (const auto& row : a) {
            nlohmann::json r = nlohmann::json::array();
            for (const auto& v : row) r.push_back(v.get_str());
            m.push_back(r);
        }
        A.push_back(m);
    }
    return {{"A", A}};
}

}  // namespace bphi
