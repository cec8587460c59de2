#include "bphi/phi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <functional>
#include <numbers>

namespace bphi {

namespace {

constexpr double kPi = std::numbers::pi;

// den-24 series whose exponents are multiples of 24 -> den 1
ExactSeries integral_exponents(const ExactSeries& s) {
    ExactSeries r(1, s.order());
    for (const auto& [e, c] : s.terms()) {
        if (e % s.den() != 0) throw std::logic_error("fractional exponent in boundary form");
        r.add_term(e / s.den(), c);
    }
    return r;
}

long long budget_from_env(long long requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BPHI_ENUM_BUDGET")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && v > 0) return v;
    }
    return 200'000'000;
}

long long floor_mod(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

IVec unit_vector(int n, int i) {
    IVec v(n, 0);
    v[i] = 1;
    return v;
}

std::vector<std::vector<double>> gram_double(const IntegralLattice& L) {
    std::vector<std::vector<double>> g(L.rank(), std::vector<double>(L.rank()));
    for (int i = 0; i < L.rank(); ++i)
        for (int j = 0; j < L.rank(); ++j) g[i][j] = static_cast<double>(L.gram()[i][j]);
    return g;
}

template <class T, class U>
auto bilinear(const std::vector<std::vector<double>>& g, const std::vector<T>& x, const std::vector<U>& y) {
    decltype(T{} * U{}) s{};
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < y.size(); ++j)
            if (g[i][j] != 0) s += x[i] * g[i][j] * y[j];
    return s;
}

}  // namespace

// ---------------------------------------------------------------- boundary forms

ExactSeries phi1_boundary(long order) {
    if (order < 1) throw std::invalid_argument("order must be at least 1");
    ExactSeries r = ExactSeries::constant(GaussInt(1), 1, order);
    const mpz_class eight(8), minus_eight(-8);
    for (int n = 1; n < order; ++n) {
        r = r * factor_power(n, -1, eight, order);
        r = r * factor_power(n, +1, minus_eight, order);
    }
    return r;
}

ExactSeries phi1_boundary_eta(long order) {
    return integral_exponents(eta_quotient({{1, 16}, {2, -8}}, order));
}

ExactSeries phi2_boundary(long order) {
    if (order < 2) throw std::invalid_argument("order must be at least 2");
    ExactSeries r = ExactSeries::monomial(GaussInt(256), 2, 1, order);
    for (int n = 1; 2 * n < order; ++n) r = r * factor_power(2 * n, -1, mpz_class(n % 2 ? -8 : 8), order);
    return r;
}

ExactSeries phi2_boundary_eta(long order) {
    return integral_exponents(eta_quotient({{4, 16}, {2, -8}}, order)).scaled(GaussInt(256));
}

// ---------------------------------------------------------------- restricted expansion

nlohmann::json RestrictedExpansion::to_json() const {
    return {{"level", level},
            {"coeffs", coeffs.to_json()},
            {"order", order},
            {"zero_by_mirror", zero_by_mirror},
            {"integral", integral},
            {"vectors_visited", vectors_visited},
            {"constant_roots", constant_roots},
            {"series", series.to_json()}};
}

RestrictedExpansion restricted_expansion(const PeriodCoeffs& pc, long order, const ExpansionOptions& opt) {
    if (order < 1) throw std::invalid_argument("order must be positive");
    if (!check_period_coeffs(pc)) throw std::invalid_argument("period coefficients fail validation");
    const int level = pc.level;
    const IntegralLattice M = lattice_M(level);
    const SliceEnumerator en(M, pc.B, pc.D);
    const long long budget = budget_from_env(opt.budget);
    const long cap = 2 * order;  // u-exponent bound on e11 + e22
    const int mult = (level == 1) ? 1 : 2;

    RestrictedExpansion out;
    out.level = level;
    out.coeffs = pc;
    out.order = order;

    long long visited = 0;
    auto count = [&] {
        if (++visited > budget) throw BudgetError("enumeration budget of " + std::to_string(budget) + " vectors exceeded");
    };

    // largest lambda^2/2 that can occur: lambda^2 <= mn for slice (m, n)
    const long smax = cap / mult;
    const std::vector<mpz_class> c = c_coeffs(std::max<long>(0, smax * smax / 8 + 1));
    auto cval = [&](long long norm) -> const mpz_class& { return c.at(norm / 2 + 1); };

    const IVec e1 = unit_vector(10, 0);
    const IVec f1 = unit_vector(10, 1);
    auto pair_C = [&](const IVec& v) { return pc.has_C() ? M.inner(v, pc.C) : 0LL; };

    // (exponent key, phase class) -> exponent of the factor
    std::map<std::pair<MultiSeries::Key, int>, mpz_class> agg;
    long two_power = 0;

    if (level == 2) {
        // walls of roots meeting the family near the cusp
        const std::pair<long long, long long> crossing[] = {{1, -1}, {-1, 1}, {1, -2}, {-2, 1}, {2, -1}, {-1, 2}};
        for (auto [m, n] : crossing) {
            en.for_each(m, n, -2, [&](const IVec& r) {
                throw ChamberError("family crosses the wall of the root " + nlohmann::json(r).dump());
            });
        }
        en.for_each(0, 0, -2, [&](const IVec& v) {
            count();
            if (M.norm(v) != -2) return;
            IVec r = v;
            if (M.inner(r, e1) < 0) r = scale(r, -1);
            if (pair_C(r) != 0)
                throw ChamberError("family crosses the wall of the root " + nlohmann::json(r).dump());
            out.constant_roots.push_back(r);
            const bool sign_plus = floor_mod(M.inner(r, sub(e1, f1)), 2) == 0;
            if (floor_mod(M.inner(r, pc.A), 2) == 0) {
                out.zero_by_mirror = true;
            } else {
                two_power += sign_plus ? 1 : -1;  // (1 - (-1))^{+-1}, c(-1) = 1
            }
        });
        std::sort(out.constant_roots.begin(), out.constant_roots.end());
    }

    if (out.zero_by_mirror) {
        out.series = MultiSeries(2, order);
        out.vectors_visited = visited;
        out.integral = true;
        return out;
    }

    for (long long m = 0; mult * m < cap; ++m) {
        for (long long n = 0; mult * (m + n) < cap; ++n) {
            if (m == 0 && n == 0) continue;
            const long long min_norm = (level == 1) ? 0 : -2;
            en.for_each(m, n, min_norm, [&](const IVec& v) {
                count();
                const long long norm = M.norm(v);
                const long long k = pair_C(v);
                if (level == 1) {
                    const MultiSeries::Key key{m, k, n};
                    agg[{key, static_cast<int>(floor_mod(M.inner(v, pc.A), 4))}] += cval(norm);
                } else {
                    if (norm < 0 && M.inner(v, e1) <= 0)
                        throw ChamberError("root " + nlohmann::json(v).dump() + " is positive on the family but not on W0");
                    const MultiSeries::Key key{2 * m, 2 * k, 2 * n};
                    const int phase = static_cast<int>(floor_mod(2 * M.inner(v, pc.A), 4));
                    const bool sign_plus = floor_mod(M.inner(v, sub(e1, f1)), 2) == 0;
                    mpz_class& slot = agg[{key, phase}];
                    if (sign_plus) slot += cval(norm);
                    else slot -= cval(norm);
                }
            });
        }
    }
    out.vectors_visited = visited;

    MultiSeries s(2, order);
    if (level == 1) {
        s = MultiSeries::constant(GaussInt(1), 2, order);
    } else {
        const MultiSeries::Key pre{2 * M.inner(e1, pc.B), 2 * pair_C(e1), 2 * M.inner(e1, pc.D)};
        s.add_term(pre, GaussInt::unit(2 * M.inner(e1, pc.A)) * mpz_class(256));
    }
    for (const auto& [kp, expo] : agg) {
        if (expo == 0) continue;
        const auto& [key, phase] = kp;
        const GaussInt rho = GaussInt::unit(phase);
        if (level == 1) {
            s.mul_binomial(key, -rho, expo);
            s.mul_binomial(key, rho, -expo);
        } else {
            s.mul_binomial(key, -rho, expo);
        }
    }

    if (two_power > 0) {
        s = s.scaled(GaussInt(mpz_class(1) << two_power, 0));
    } else if (two_power < 0) {
        const mpz_class d = mpz_class(1) << (-two_power);
        MultiSeries t(2, order);
        for (const auto& [key, v] : s.terms()) {
            if (v.re % d != 0 || v.im % d != 0) {
                out.series = s;
                out.integral = false;
                throw std::domain_error("constant root factor leaves a non-integral coefficient");
            }
            t.add_term(key, GaussInt(mpz_class(v.re / d), mpz_class(v.im / d)));
        }
        s = t;
    }
    out.integral = s.all_real();
    out.series = std::move(s);
    if (!out.integral) throw std::domain_error("restricted expansion has non-real coefficients");
    return out;
}

CVec family_point(const PeriodCoeffs& pc, const CMat2& T) {
    CVec z(10);
    for (int i = 0; i < 10; ++i) {
        cplx v = static_cast<double>(pc.A[i]) + T[0][0] * static_cast<double>(pc.B[i]) +
                 T[1][1] * static_cast<double>(pc.D[i]);
        if (pc.has_C()) v += T[0][1] * static_cast<double>(pc.C[i]);
        z[i] = 0.5 * v;
    }
    return z;
}

cplx evaluate_series(const MultiSeries& s, const CMat2& T) {
    const cplx I(0, 1);
    cplx sum = 0;
    for (const auto& [k, c] : s.terms()) {
        const cplx ex = I * kPi * (static_cast<double>(k[0]) * T[0][0] + static_cast<double>(k[1]) * T[0][1] +
                                   static_cast<double>(k[2]) * T[1][1]) /
                        static_cast<double>(s.den());
        sum += cplx(c.re.get_d(), c.im.get_d()) * std::exp(ex);
    }
    return sum;
}

cplx evaluate_series(const ExactSeries& s, cplx tau) {
    const cplx I(0, 1);
    cplx sum = 0;
    for (const auto& [e, c] : s.terms())
        sum += cplx(c.re.get_d(), c.im.get_d()) * std::exp(I * kPi * tau * static_cast<double>(e) / static_cast<double>(s.den()));
    return sum;
}

// ---------------------------------------------------------------- tube points

std::vector<double> TubePoint::imag() const {
    std::vector<double> y(z.size());
    for (size_t i = 0; i < z.size(); ++i) y[i] = z[i].imag();
    return y;
}

nlohmann::json TubePoint::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : z) arr.push_back({v.real(), v.imag()});
    return {{"level", level}, {"z", arr}};
}

TubePoint TubePoint::from_json(const nlohmann::json& j) {
    TubePoint p;
    p.level = j.at("level").get<int>();
    for (const auto& v : j.at("z")) {
        if (v.is_array()) p.z.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
        else p.z.emplace_back(v.get<double>(), 0.0);
    }
    if (p.z.size() != 10) throw std::invalid_argument("tube point needs 10 coordinates");
    return p;
}

cplx pairing(int level, const CVec& x, const CVec& y) {
    return bilinear(gram_double(lattice_M(level)), x, y);
}

bool in_tube(const TubePoint& p) {
    const auto g = gram_double(lattice_M(p.level));
    const std::vector<double> y = p.imag();
    std::vector<double> ref(10, 0.0);
    ref[0] = ref[1] = 1.0;
    return bilinear(g, y, y) > 0 && bilinear(g, y, ref) > 0;
}

nlohmann::json NumericValue::to_json() const {
    return {{"value", {value.real(), value.imag()}},
            {"log_value", {log_value.real(), log_value.imag()}},
            {"tail_bound", tail_bound},
            {"largest_factor", largest_factor},
            {"factors", factors}};
}

// all t in Z^n with t^T P t <= radius (P real positive definite)
static void enumerate_ellipsoid(const std::vector<std::vector<double>>& P, double radius,
                         const std::function<void(const IVec&)>& visit) {
    const int k = static_cast<int>(P.size());
    std::vector<std::vector<double>> R(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            double s = P[i][j];
            for (int t = 0; t < i; ++t) s -= R[t][i] * R[t][j];
            if (i == j) {
                if (s <= 0) throw std::domain_error("majorant is not positive definite");
                R[i][i] = std::sqrt(s);
            } else {
                R[i][j] = s / R[i][i];
            }
        }
    }
    const double eps = 1e-9 * (1.0 + radius);
    IVec t(k, 0);
    std::function<void(int, double)> rec = [&](int i, double acc) {
        double s = 0;
        for (int j = i + 1; j < k; ++j) s += R[i][j] * static_cast<double>(t[j]);
        const double rem = radius - acc;
        if (rem < -eps) return;
        const double r = std::sqrt(std::max(rem, 0.0) + eps) / R[i][i];
        const double mid = -s / R[i][i];
        const long long lo = static_cast<long long>(std::ceil(mid - r));
        const long long hi = static_cast<long long>(std::floor(mid + r));
        for (long long v = lo; v <= hi; ++v) {
            t[i] = v;
            const double term = R[i][i] * static_cast<double>(v) + s;
            const double nacc = acc + term * term;
            if (nacc > radius + eps) continue;
            if (i == 0) visit(t);
            else rec(i - 1, nacc);
        }
        t[i] = 0;
    };
    rec(k - 1, 0.0);
}

NumericValue eval_numeric(const TubePoint& p, double cutoff) {
    if (p.level != 1 && p.level != 2) throw std::invalid_argument("level must be 1 or 2");
    if (p.z.size() != 10) throw std::invalid_argument("tube point needs 10 coordinates");
    if (!in_tube(p)) throw std::domain_error("Im z is not in the positive cone");
    if (!(cutoff > 0)) throw std::invalid_argument("cutoff must be positive");

    const int level = p.level;
    const IntegralLattice M = lattice_M(level);
    const auto g = gram_double(M);
    const std::vector<double> y = p.imag();
    const double yy = bilinear(g, y, y);
    const double scale = kPi * level;
    const double margin = 4.0;
    const double hmax = (cutoff + margin) / scale;  // bound on <lambda, Y>
    const long long min_norm = (level == 1) ? 0 : -2;

    // Q(x) = 2<x,Y>^2/Y^2 - x^2 is positive definite; lambda in the region has Q <= 2 hmax^2/Y^2 - min_norm
    std::vector<double> gy(10);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) gy[i] += g[i][j] * y[j];
    std::vector<std::vector<double>> Q(10, std::vector<double>(10));
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) Q[i][j] = 2 * gy[i] * gy[j] / yy - g[i][j];
    const double radius = 2 * hmax * hmax / yy - static_cast<double>(min_norm);

    const long nmax = static_cast<long>(std::floor(radius / 2)) + 1;
    const std::vector<mpz_class> c = c_coeffs(std::max(1L, nmax));
    const IVec e = unit_vector(10, 0), f = unit_vector(10, 1);
    const IVec e1f1 = sub(e, f);
    const cplx I(0, 1);

    // positive side: the cone component of e+f at level 1, the W0 side (pairing with e1 + eps f1) at level 2
    auto positive = [&](const IVec& v) {
        if (level == 1) return M.inner(v, add(e, f)) > 0;
        const long long py = M.inner(v, e), px = M.inner(v, f);
        return py > 0 || (py == 0 && px > 0);
    };

    NumericValue out;
    cplx logv = 0;
    double tail = 0;
    enumerate_ellipsoid(Q, radius, [&](const IVec& v) {
        if (is_zero(v) || !positive(v)) return;
        const long long norm = M.norm(v);
        if (norm < min_norm) return;
        std::vector<double> vd(v.begin(), v.end());
        const double h = scale * bilinear(g, vd, y);
        if (h <= 0) throw std::domain_error("factor with |q| >= 1; point outside the convergence region");
        if (h > cutoff + margin) return;
        const cplx q = std::exp(I * scale * bilinear(g, vd, p.z));
        double cv = c.at(norm / 2 + 1).get_d();
        if (level == 2 && floor_mod(M.inner(v, e1f1), 2) != 0) cv = -cv;
        const double mag = std::abs(q);
        if (h <= cutoff) {
            if (level == 1) logv += cv * (std::log(1.0 - q) - std::log(1.0 + q));
            else logv += cv * std::log(1.0 - q);
            out.largest_factor = std::max(out.largest_factor, mag);
            ++out.factors;
        } else {
            tail += std::abs(cv) * (level == 1 ? 2.0 : 1.0) * mag / (1.0 - mag);
        }
    });
    if (level == 2) logv += std::log(256.0) + 2.0 * kPi * I * p.z[1];
    out.log_value = logv;
    out.value = std::exp(logv);
    out.tail_bound = tail / (1.0 - std::exp(-margin));
    return out;
}

TubePoint level_transform(const TubePoint& z) {
    if (z.level != 1) throw std::invalid_argument("level_transform expects a level-1 point");
    const cplx tau = 2.0 * z.z[1];  // <z, e2>
    if (std::abs(tau) == 0) throw std::domain_error("<z,e2> vanishes");
    if ((-1.0 / tau).imag() <= 0) throw std::domain_error("Im(-1/<z,e2>) is not positive");
    const cplx zz = pairing(1, z.z, z.z);
    TubePoint w;
    w.level = 2;
    w.z.resize(10);
    w.z[0] = zz / (2.0 * tau);
    w.z[1] = -1.0 / tau;
    for (int i = 2; i < 10; ++i) w.z[i] = -z.z[i] / tau;
    if (!in_tube(w)) throw std::domain_error("w(z) is outside the positive cone");
    return w;
}

CVec iota(const TubePoint& p) {
    const cplx uu = pairing(p.level, p.z, p.z);
    const IVec e = lambda_e(p.level), f = lambda_f(p.level);
    const double sigma = (p.level == 1) ? 1.0 : -1.0;
    CVec out(12, 0.0);
    const int off = (p.level == 1) ? 0 : 2;
    out[off] = sigma * p.z[0];
    out[off + 1] = sigma * p.z[1];
    for (int i = 0; i < 8; ++i) out[4 + i] = sigma * p.z[2 + i];
    for (int i = 0; i < 12; ++i) out[i] += -0.5 * uu * static_cast<double>(e[i]) + static_cast<double>(f[i]) / p.level;
    return out;
}

cplx lambda_pairing(const CVec& x, const CVec& y) { return bilinear(gram_double(lattice_Lambda()), x, y); }

double petersson_sq(const TubePoint& p, cplx value) {
    const std::vector<double> y = p.imag();
    const double n = bilinear(gram_double(lattice_M(p.level)), y, y);
    return std::pow(n, 4) * std::norm(value);
}

}  // namespace bphi
