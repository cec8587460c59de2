#include "bphi/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bphi {

namespace {

using ZMat = std::vector<std::vector<mpz_class>>;

ZMat to_z(const IMat& a) {
    ZMat r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (long long v : a[i]) r[i].emplace_back(static_cast<long>(v));
    return r;
}

long long to_ll(const mpz_class& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
    return z.get_si();
}

void check_rank(const IntegralLattice& L, const IVec& x) {
    if (static_cast<int>(x.size()) != L.rank()) throw std::invalid_argument("vector length does not match lattice rank");
}

// Column echelon form: A*U = H, U unimodular; returns pivot rows in column order.
struct ColumnEchelon {
    ZMat H;
    ZMat U;
    std::vector<int> pivot_rows;
};

ColumnEchelon column_echelon(const IMat& A, int ncols) {
    ColumnEchelon ce;
    ce.H = to_z(A);
    const int m = static_cast<int>(A.size());
    const int n = ncols;
    ce.U.assign(n, std::vector<mpz_class>(n, 0));
    for (int i = 0; i < n; ++i) ce.U[i][i] = 1;
    auto col_swap = [&](int a, int b) {
        if (a == b) return;
        for (auto& row : ce.H) std::swap(row[a], row[b]);
        for (auto& row : ce.U) std::swap(row[a], row[b]);
    };
    // col a <- x*col a + y*col b ; col b <- u*col a + v*col b  (unimodular 2x2)
    auto col_combine = [&](int a, int b, const mpz_class& x, const mpz_class& y, const mpz_class& u,
                           const mpz_class& v) {
        for (auto* M : {&ce.H, &ce.U}) {
            for (auto& row : *M) {
                mpz_class na = x * row[a] + y * row[b];
                mpz_class nb = u * row[a] + v * row[b];
                row[a] = na;
                row[b] = nb;
            }
        }
    };
    int piv = 0;
    for (int i = 0; i < m && piv < n; ++i) {
        for (int j = piv + 1; j < n; ++j) {
            if (ce.H[i][j] == 0) continue;
            mpz_class g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), ce.H[i][piv].get_mpz_t(), ce.H[i][j].get_mpz_t());
            mpz_class a = ce.H[i][piv] / g;
            mpz_class b = ce.H[i][j] / g;
            // new piv = s*piv + t*j (entry g); new j = -b*piv + a*j (entry 0)
            col_combine(piv, j, s, t, -b, a);
        }
        if (ce.H[i][piv] != 0) {
            if (ce.H[i][piv] < 0) {
                for (auto& row : ce.H) row[piv] = -row[piv];
                for (auto& row : ce.U) row[piv] = -row[piv];
            }
            ce.pivot_rows.push_back(i);
            ++piv;
        } else {
            // no pivot in this row; look for a later column with a nonzero entry
            bool found = false;
            for (int j = piv + 1; j < n && !found; ++j) {
                if (ce.H[i][j] != 0) {
                    col_swap(piv, j);
                    found = true;
                }
            }
            if (found) {
                --i;  // redo the row with the swapped pivot column
            }
        }
    }
    return ce;
}

}  // namespace

IMat identity_matrix(int n) {
    IMat r(n, IVec(n, 0));
    for (int i = 0; i < n; ++i) r[i][i] = 1;
    return r;
}

IMat transpose(const IMat& a) {
    if (a.empty()) return {};
    IMat r(a[0].size(), IVec(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
    return r;
}

IMat mat_mul(const IMat& a, const IMat& b) {
    if (a.empty()) return {};
    const size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    if (a[0].size() != k) throw std::invalid_argument("matrix shape mismatch");
    IMat r(n, IVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t)
            if (a[i][t])
                for (size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
    return r;
}

IVec mat_vec(const IMat& a, const IVec& x) {
    IVec r(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = dot(a[i], x);
    return r;
}

long long dot(const IVec& a, const IVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
    long long s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

IVec add(const IVec& a, const IVec& b) {
    IVec r(a);
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

IVec sub(const IVec& a, const IVec& b) {
    IVec r(a);
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

IVec scale(const IVec& a, long long s) {
    IVec r(a);
    for (auto& v : r) v *= s;
    return r;
}

long long height(const IVec& v) {
    long long h = 0;
    for (long long x : v) h = std::max(h, std::llabs(x));
    return h;
}

bool is_zero(const IVec& v) {
    return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
}

long long content(const IVec& v) {
    long long g = 0;
    for (long long x : v) g = std::gcd(g, std::llabs(x));
    return g;
}

IVec canonical_sign(const IVec& v) {
    for (long long x : v) {
        if (x > 0) return v;
        if (x < 0) return scale(v, -1);
    }
    return v;
}

std::vector<mpz_class> elementary_divisors(const IMat& rows) {
    ZMat a = to_z(rows);
    const int m = static_cast<int>(a.size());
    const int n = m ? static_cast<int>(a[0].size()) : 0;
    std::vector<mpz_class> diag;
    for (int t = 0; t < std::min(m, n); ++t) {
        while (true) {
            int bi = -1, bj = -1;
            for (int i = t; i < m; ++i)
                for (int j = t; j < n; ++j)
                    if (a[i][j] != 0 && (bi < 0 || abs(a[i][j]) < abs(a[bi][bj]))) bi = i, bj = j;
            if (bi < 0) {
                // remaining block is zero
                while (static_cast<int>(diag.size()) < std::min(m, n)) diag.emplace_back(0);
                goto normalize;
            }
            std::swap(a[t], a[bi]);
            for (auto& row : a) std::swap(row[t], row[bj]);
            bool clean = true;
            for (int i = t + 1; i < m; ++i) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                if (q != 0)
                    for (int j = t; j < n; ++j) a[i][j] -= q * a[t][j];
                if (a[i][t] != 0) clean = false;
            }
            for (int j = t + 1; j < n; ++j) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                if (q != 0)
                    for (int i = t; i < m; ++i) a[i][j] -= q * a[i][t];
                if (a[t][j] != 0) clean = false;
            }
            if (clean) break;
        }
        diag.push_back(abs(a[t][t]));
    }
normalize:
    for (size_t i = 0; i < diag.size(); ++i)
        for (size_t j = i + 1; j < diag.size(); ++j) {
            mpz_class g = gcd(diag[i], diag[j]);
            mpz_class l = (g == 0) ? mpz_class(0) : mpz_class(diag[i] / g * diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    return diag;
}

bool spans_primitive(const IMat& rows) {
    for (const auto& d : elementary_divisors(rows))
        if (d != 1) return false;
    return true;
}

std::optional<IntSolution> solve_integer(const IMat& A, const IVec& r) {
    if (A.empty()) throw std::invalid_argument("empty constraint matrix");
    const int n = static_cast<int>(A[0].size());
    ColumnEchelon ce = column_echelon(A, n);
    const int rank = static_cast<int>(ce.pivot_rows.size());
    std::vector<mpz_class> y(n, 0);
    for (int j = 0; j < rank; ++j) {
        const int row = ce.pivot_rows[j];
        mpz_class s = static_cast<long>(r[row]);
        for (int k = 0; k < j; ++k) s -= ce.H[row][k] * y[k];
        if (s % ce.H[row][j] != 0) return std::nullopt;
        y[j] = s / ce.H[row][j];
    }
    for (size_t i = 0; i < A.size(); ++i) {
        mpz_class s = 0;
        for (int k = 0; k < n; ++k) s += ce.H[i][k] * y[k];
        if (s != static_cast<long>(r[i])) return std::nullopt;
    }
    IntSolution sol;
    sol.particular.assign(n, 0);
    for (int a = 0; a < n; ++a) {
        mpz_class s = 0;
        for (int k = 0; k < n; ++k) s += ce.U[a][k] * y[k];
        sol.particular[a] = to_ll(s);
    }
    for (int k = rank; k < n; ++k) {
        IVec col(n);
        for (int a = 0; a < n; ++a) col[a] = to_ll(ce.U[a][k]);
        sol.kernel.push_back(col);
    }
    return sol;
}

IMat integer_kernel(const IMat& A) {
    if (A.empty()) throw std::invalid_argument("empty constraint matrix");
    auto sol = solve_integer(A, IVec(A.size(), 0));
    return sol->kernel;
}

GeneratedBasis basis_from_generators(const IMat& gens) {
    if (gens.empty()) return {};
    const int n = static_cast<int>(gens.size());
    // columns of A are the generators: A * U = H, nonzero columns of H form a basis
    IMat A = transpose(gens);
    ColumnEchelon ce = column_echelon(A, n);
    const int rank = static_cast<int>(ce.pivot_rows.size());
    GeneratedBasis gb;
    for (int j = 0; j < rank; ++j) {
        IVec b(A.size()), c(n);
        for (size_t i = 0; i < A.size(); ++i) b[i] = to_ll(ce.H[i][j]);
        for (int i = 0; i < n; ++i) c[i] = to_ll(ce.U[i][j]);
        gb.basis.push_back(b);
        gb.coeffs.push_back(c);
    }
    return gb;
}

IMat lll_reduce(const IMat& basis, const IMat& gram_positive) {
    IMat b = basis;
    const int k = static_cast<int>(b.size());
    if (k <= 1) return b;
    auto ip = [&](const IVec& x, const IVec& y) {
        long double s = 0;
        IVec gy = mat_vec(gram_positive, y);
        for (size_t i = 0; i < x.size(); ++i) s += static_cast<long double>(x[i]) * gy[i];
        return s;
    };
    std::vector<std::vector<long double>> mu(k, std::vector<long double>(k, 0));
    std::vector<long double> bstar(k, 0);
    auto gso = [&]() {
        std::vector<std::vector<long double>> r(k, std::vector<long double>(k, 0));
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < i; ++j) {
                long double s = ip(b[i], b[j]);
                for (int t = 0; t < j; ++t) s -= mu[j][t] * mu[i][t] * bstar[t];
                mu[i][j] = s / bstar[j];
            }
            long double s = ip(b[i], b[i]);
            for (int t = 0; t < i; ++t) s -= mu[i][t] * mu[i][t] * bstar[t];
            bstar[i] = s;
        }
    };
    gso();
    int i = 1;
    int guard = 0;
    while (i < k && guard++ < 100000) {
        for (int j = i - 1; j >= 0; --j) {
            long long q = std::llround(mu[i][j]);
            if (q != 0) {
                b[i] = sub(b[i], scale(b[j], q));
                gso();
            }
        }
        if (bstar[i] < (0.99L - mu[i][i - 1] * mu[i][i - 1]) * bstar[i - 1]) {
            std::swap(b[i], b[i - 1]);
            gso();
            i = std::max(i - 1, 1);
        } else {
            ++i;
        }
    }
    return b;
}

// ---------------------------------------------------------------- IntegralLattice

IntegralLattice::IntegralLattice(IMat gram, std::string name) : gram_(std::move(gram)), name_(std::move(name)) {
    const size_t n = gram_.size();
    for (const auto& row : gram_)
        if (row.size() != n) throw std::invalid_argument("Gram matrix must be square");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (gram_[i][j] != gram_[j][i]) throw std::invalid_argument("Gram matrix must be symmetric");
    if (n > 0 && determinant() == 0) throw std::invalid_argument("Gram matrix is degenerate");
}

long long IntegralLattice::inner(const IVec& x, const IVec& y) const {
    check_rank(*this, x);
    check_rank(*this, y);
    __int128 s = 0;
    for (size_t i = 0; i < gram_.size(); ++i) {
        if (!x[i]) continue;
        for (size_t j = 0; j < gram_.size(); ++j)
            if (gram_[i][j] && y[j]) s += static_cast<__int128>(x[i]) * gram_[i][j] * y[j];
    }
    if (s > INT64_MAX || s < INT64_MIN) throw std::overflow_error("pairing overflow");
    return static_cast<long long>(s);
}

bool IntegralLattice::is_even() const {
    for (size_t i = 0; i < gram_.size(); ++i)
        if (gram_[i][i] % 2 != 0) return false;
    return true;
}

std::pair<int, int> IntegralLattice::signature() const {
    const int n = rank();
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = static_cast<long>(gram_[i][j]);
    int pos = 0, neg = 0;
    for (int t = 0; t < n; ++t) {
        int p = -1;
        for (int i = t; i < n; ++i)
            if (a[i][i] != 0) {
                p = i;
                break;
            }
        if (p < 0) {
            // all remaining diagonal entries vanish: make one nonzero by x_t += x_j
            int jj = -1, ii = -1;
            for (int i = t; i < n && jj < 0; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (a[i][j] != 0) {
                        ii = i;
                        jj = j;
                        break;
                    }
            if (jj < 0) break;  // zero block (cannot happen for nondegenerate input)
            for (int k = 0; k < n; ++k) a[ii][k] += a[jj][k];
            for (int k = 0; k < n; ++k) a[k][ii] += a[k][jj];
            p = ii;
        }
        std::swap(a[t], a[p]);
        for (auto& row : a) std::swap(row[t], row[p]);
        const mpq_class d = a[t][t];
        (d > 0 ? pos : neg)++;
        for (int i = t + 1; i < n; ++i) {
            if (a[i][t] == 0) continue;
            mpq_class f = a[i][t] / d;
            for (int k = t; k < n; ++k) a[i][k] -= f * a[t][k];
            for (int k = t; k < n; ++k) a[k][i] = a[i][k];
        }
    }
    return {pos, neg};
}

mpz_class IntegralLattice::determinant() const {
    const int n = rank();
    // fraction-free Bareiss
    ZMat a = to_z(gram_);
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

bool IntegralLattice::is_negative_definite() const {
    auto [p, q] = signature();
    return p == 0 && q == rank();
}

IVec IntegralLattice::basis_vector(int i) const {
    IVec v(rank(), 0);
    v.at(i) = 1;
    return v;
}

nlohmann::json IntegralLattice::to_json() const { return {{"name", name_}, {"gram", gram_}}; }

IntegralLattice lattice_U(long long k) { return IntegralLattice({{0, k}, {k, 0}}, k == 1 ? "U" : "U(" + std::to_string(k) + ")"); }

IntegralLattice lattice_E8() {
    IMat g(8, IVec(8, 0));
    for (int i = 0; i < 8; ++i) g[i][i] = -2;
    const int edges[7][2] = {{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 4}};
    for (const auto& e : edges) g[e[0] - 1][e[1] - 1] = g[e[1] - 1][e[0] - 1] = 1;
    return IntegralLattice(g, "E8");
}

IntegralLattice lattice_E8_2() {
    IMat g = lattice_E8().gram();
    for (auto& row : g)
        for (auto& x : row) x *= 2;
    return IntegralLattice(g, "E8(2)");
}

IntegralLattice direct_sum(const std::vector<IntegralLattice>& parts, const std::string& name) {
    int n = 0;
    for (const auto& p : parts) n += p.rank();
    IMat g(n, IVec(n, 0));
    int off = 0;
    for (const auto& p : parts) {
        for (int i = 0; i < p.rank(); ++i)
            for (int j = 0; j < p.rank(); ++j) g[off + i][off + j] = p.gram()[i][j];
        off += p.rank();
    }
    return IntegralLattice(g, name);
}

IntegralLattice lattice_Lambda() { return direct_sum({lattice_U(2), lattice_U(1), lattice_E8_2()}, "Lambda"); }

IntegralLattice lattice_M(int level) {
    if (level == 1) return direct_sum({lattice_U(2), lattice_E8_2()}, "M1");
    if (level == 2) return direct_sum({lattice_U(1), lattice_E8_2()}, "M2");
    throw std::invalid_argument("level must be 1 or 2");
}

IntegralLattice lattice_by_name(const std::string& name) {
    if (name == "U") return lattice_U(1);
    if (name == "U2") return lattice_U(2);
    if (name == "E8") return lattice_E8();
    if (name == "E8_2") return lattice_E8_2();
    if (name == "Lambda") return lattice_Lambda();
    if (name == "M1") return lattice_M(1);
    if (name == "M2") return lattice_M(2);
    throw std::invalid_argument("unknown lattice name: " + name);
}

IVec lambda_e(int level) {
    IVec v(12, 0);
    if (level == 1) v[2] = 1;
    else if (level == 2) v[0] = 1;
    else throw std::invalid_argument("level must be 1 or 2");
    return v;
}

IVec lambda_f(int level) {
    IVec v(12, 0);
    if (level == 1) v[3] = 1;
    else if (level == 2) v[1] = 1;
    else throw std::invalid_argument("level must be 1 or 2");
    return v;
}

IVec project_to_M(const IVec& x, int level) {
    if (x.size() != 12) throw std::invalid_argument("expected a Lambda vector");
    IVec r(10);
    const int off = (level == 1) ? 0 : 2;  // which U-pair survives
    r[0] = x[off];
    r[1] = x[off + 1];
    for (int i = 0; i < 8; ++i) r[2 + i] = x[4 + i];
    return r;
}

IVec lift_from_M(const IVec& m, int level) {
    if (m.size() != 10) throw std::invalid_argument("expected an M vector");
    IVec r(12, 0);
    const int off = (level == 1) ? 0 : 2;
    r[off] = m[0];
    r[off + 1] = m[1];
    for (int i = 0; i < 8; ++i) r[4 + i] = m[2 + i];
    return r;
}

bool ConeReference::in_closed_cone(const IVec& x) const {
    return lattice.norm(x) >= 0 && lattice.inner(x, reference) >= 0;
}

bool ConeReference::in_open_cone(const IVec& x) const {
    return lattice.norm(x) > 0 && lattice.inner(x, reference) > 0;
}

ConeReference cone_of_M(int level) {
    IntegralLattice M = lattice_M(level);
    IVec ref(10, 0);
    ref[0] = ref[1] = 1;
    return {M, ref};
}

// ---------------------------------------------------------------- enumeration

void enumerate_quadratic(const IMat& P, const IVec& b, long long c, long long bound,
                         const std::function<void(const IVec&)>& visit) {
    const int k = static_cast<int>(P.size());
    if (k == 0) {
        if (c <= bound) visit({});
        return;
    }
    // Cholesky P = R^T R
    std::vector<std::vector<long double>> R(k, std::vector<long double>(k, 0));
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            long double s = P[i][j];
            for (int t = 0; t < i; ++t) s -= R[t][i] * R[t][j];
            if (i == j) {
                if (s <= 0) throw std::domain_error("quadratic form is not positive definite");
                R[i][i] = std::sqrt(s);
            } else {
                R[i][j] = s / R[i][i];
            }
        }
    }
    // center = -P^{-1} b via the Cholesky factor
    std::vector<long double> y(k), center(k);
    for (int i = 0; i < k; ++i) {
        long double s = -static_cast<long double>(b[i]);
        for (int t = 0; t < i; ++t) s -= R[t][i] * y[t];
        y[i] = s / R[i][i];
    }
    for (int i = k - 1; i >= 0; --i) {
        long double s = y[i];
        for (int t = i + 1; t < k; ++t) s -= R[i][t] * center[t];
        center[i] = s / R[i][i];
    }
    long double shift = 0;  // b^T P^{-1} b
    for (int i = 0; i < k; ++i) shift += y[i] * y[i];
    const long double radius = static_cast<long double>(bound) - c + shift;
    if (radius < -1e-9L) return;
    const long double eps = 1e-9L * (1.0L + std::fabs(radius));

    auto exact_value = [&](const IVec& t) {
        __int128 s = c;
        for (int i = 0; i < k; ++i) {
            s += 2 * static_cast<__int128>(b[i]) * t[i];
            for (int j = 0; j < k; ++j) s += static_cast<__int128>(t[i]) * P[i][j] * t[j];
        }
        return s;
    };

    IVec t(k, 0);
    std::function<void(int, long double)> rec = [&](int i, long double acc) {
        long double s = 0;
        for (int j = i + 1; j < k; ++j) s += R[i][j] * (t[j] - center[j]);
        const long double rem = radius - acc;
        if (rem < -eps) return;
        const long double r = std::sqrt(std::max(rem, 0.0L) + eps) / R[i][i];
        const long double mid = center[i] - s / R[i][i];
        const long long lo = static_cast<long long>(std::ceil(mid - r));
        const long long hi = static_cast<long long>(std::floor(mid + r));
        for (long long v = lo; v <= hi; ++v) {
            t[i] = v;
            const long double term = R[i][i] * (v - center[i]) + s;
            const long double nacc = acc + term * term;
            if (nacc > radius + eps) continue;
            if (i == 0) {
                if (exact_value(t) <= bound) visit(t);
            } else {
                rec(i - 1, nacc);
            }
        }
        t[i] = 0;
    };
    rec(k - 1, 0.0L);
}

std::vector<IVec> short_vectors(const IntegralLattice& L, long long bound) {
    if (bound < 0) throw std::invalid_argument("bound must be nonnegative");
    auto [p, q] = L.signature();
    int sgn;
    if (p == L.rank()) sgn = 1;
    else if (q == L.rank()) sgn = -1;
    else throw std::invalid_argument("short_vectors needs a definite lattice");
    IMat P = L.gram();
    for (auto& row : P)
        for (auto& x : row) x *= sgn;
    std::vector<IVec> out;
    enumerate_quadratic(P, IVec(L.rank(), 0), 0, bound, [&](const IVec& t) {
        if (!is_zero(t) && canonical_sign(t) == t) out.push_back(t);
    });
    std::sort(out.begin(), out.end(), [&](const IVec& a, const IVec& b) {
        long long na = std::llabs(L.norm(a)), nb = std::llabs(L.norm(b));
        return na != nb ? na < nb : a < b;
    });
    return out;
}

int level_of_isotropic(const IntegralLattice& L, const IVec& v) {
    if (L.norm(v) != 0) throw std::invalid_argument("vector is not isotropic");
    if (content(v) != 1) throw std::invalid_argument("vector is not primitive");
    const long long g = content(mat_vec(L.gram(), v));
    return static_cast<int>(g);
}

IMat orthogonal_complement(const IntegralLattice& L, const IMat& vectors) {
    IMat A;
    for (const auto& v : vectors) A.push_back(mat_vec(L.gram(), v));
    IMat K = integer_kernel(A);
    if (K.empty()) return K;
    IMat sub = mat_mul(mat_mul(K, L.gram()), transpose(K));
    IntegralLattice S(sub);
    auto [p, q] = S.signature();
    if (p == 0 || q == 0) {
        IMat pos = L.gram();
        if (p == 0)
            for (auto& row : pos)
                for (auto& x : row) x = -x;
        K = lll_reduce(K, pos);
    }
    return K;
}

IntegralLattice sublattice(const IntegralLattice& L, const IMat& basis, const std::string& name) {
    return IntegralLattice(mat_mul(mat_mul(basis, L.gram()), transpose(basis)), name);
}

SliceEnumerator::SliceEnumerator(const IntegralLattice& M, const IVec& B, const IVec& D) : M_(M), B_(B), D_(D) {
    // proportional isotropic vectors pair to zero
    if (M.inner(B, D) == 0) throw std::invalid_argument("B and D must not be proportional");
    constraint_ = {mat_vec(M.gram(), B), mat_vec(M.gram(), D)};
    kernel_ = integer_kernel(constraint_);
    IMat neg = M.gram();
    for (auto& row : neg)
        for (auto& x : row) x = -x;
    kernel_ = lll_reduce(kernel_, neg);
    kernel_gram_neg_ = mat_mul(mat_mul(kernel_, neg), transpose(kernel_));
}

void SliceEnumerator::for_each(long long m, long long n, long long min_norm,
                               const std::function<void(const IVec&)>& visit) const {
    auto sol = solve_integer(constraint_, {m, n});
    if (!sol) return;
    const IVec& l0 = sol->particular;
    const IVec gl0 = mat_vec(M_.gram(), l0);
    // norm(l0 + K^T t) = -t^T P t + 2 (K G l0)^T t + n0
    IVec b(kernel_.size());
    for (size_t i = 0; i < kernel_.size(); ++i) b[i] = -dot(kernel_[i], gl0);
    const long long n0 = dot(l0, gl0);
    const bool zero_slice = (m == 0 && n == 0);
    enumerate_quadratic(kernel_gram_neg_, b, -n0, -min_norm, [&](const IVec& t) {
        IVec lam = l0;
        for (size_t i = 0; i < kernel_.size(); ++i)
            if (t[i])
                for (size_t j = 0; j < lam.size(); ++j) lam[j] += t[i] * kernel_[i][j];
        if (zero_slice && (is_zero(lam) || canonical_sign(lam) != lam)) return;
        visit(lam);
    });
}

std::vector<IVec> SliceEnumerator::slice(long long m, long long n, long long min_norm) const {
    std::vector<IVec> out;
    for_each(m, n, min_norm, [&](const IVec& v) { out.push_back(v); });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IVec> slice_vectors(const IntegralLattice& M, const IVec& B, const IVec& D, long long m, long long n,
                                long long min_norm) {
    return SliceEnumerator(M, B, D).slice(m, n, min_norm);
}

}  // namespace bphi
