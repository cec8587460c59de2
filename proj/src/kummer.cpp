#include "bphi/kummer.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bphi {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI(0, 1);


}  // namespace

// ---------------------------------------------------------------- partitions

Partition Partition::from_indices(std::array<int, 3> j) {
    std::sort(j.begin(), j.end());
    for (int v : j)
        if (v < 1 || v > 6) throw std::invalid_argument("partition index out of range");
    if (j[0] == j[1] || j[1] == j[2]) throw std::invalid_argument("partition indices must be distinct");
    std::array<int, 3> c{};
    int n = 0;
    for (int v = 1; v <= 6; ++v)
        if (std::find(j.begin(), j.end(), v) == j.end()) c[n++] = v;
    Partition p;
    if (j[0] == 1) {
        p.J = j;
        p.Jc = c;
    } else {
        p.J = c;
        p.Jc = j;
    }
    return p;
}

Partition Partition::parse(const std::string& s) {
    std::array<int, 3> j{};
    int n = 0;
    for (char ch : s) {
        if (ch == '/') break;
        if (ch < '1' || ch > '6' || n == 3) throw std::invalid_argument("bad partition label: " + s);
        j[n++] = ch - '0';
    }
    if (n != 3) throw std::invalid_argument("bad partition label: " + s);
    Partition p = from_indices(j);
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::array<int, 3> rest{};
        int m = 0;
        for (size_t i = slash + 1; i < s.size(); ++i) {
            if (m == 3) throw std::invalid_argument("bad partition label: " + s);
            rest[m++] = s[i] - '0';
        }
        if (m != 3 || !(from_indices(rest) == p)) throw std::invalid_argument("inconsistent partition label: " + s);
    }
    return p;
}

std::string Partition::label() const {
    std::string s;
    for (int v : J) s += char('0' + v);
    s += '/';
    for (int v : Jc) s += char('0' + v);
    return s;
}

std::vector<Partition> all_partitions() {
    std::vector<Partition> out;
    for (int b = 2; b <= 6; ++b)
        for (int c = b + 1; c <= 6; ++c) out.push_back(Partition::from_indices({1, b, c}));
    return out;
}

std::vector<Partition> admissible_partitions() {
    std::vector<Partition> out;
    for (const auto& p : all_partitions())
        if (!p.degenerate()) out.push_back(p);
    return out;
}

// ---------------------------------------------------------------- BiPoly

BiPoly::BiPoly(const mpq_class& c) { add_term({0, 0}, c); }

BiPoly BiPoly::l1() {
    BiPoly p;
    p.add_term({1, 0}, 1);
    return p;
}

BiPoly BiPoly::l2() {
    BiPoly p;
    p.add_term({0, 1}, 1);
    return p;
}

void BiPoly::add_term(const Mono& m, const mpq_class& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
    BiPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

BiPoly BiPoly::operator-() const {
    BiPoly r;
    for (const auto& [m, c] : terms_) r.add_term(m, -c);
    return r;
}

BiPoly BiPoly::operator-(const BiPoly& o) const { return *this + (-o); }

BiPoly BiPoly::operator*(const BiPoly& o) const {
    BiPoly r;
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) r.add_term({m1.first + m2.first, m1.second + m2.second}, c1 * c2);
    return r;
}

mpq_class BiPoly::eval(const mpq_class& a, const mpq_class& b) const {
    mpq_class s = 0;
    for (const auto& [m, c] : terms_) {
        mpq_class t = c;
        for (int i = 0; i < m.first; ++i) t *= a;
        for (int i = 0; i < m.second; ++i) t *= b;
        s += t;
    }
    return s;
}

cplx BiPoly::eval(cplx a, cplx b) const {
    cplx s = 0;
    for (const auto& [m, c] : terms_) s += c.get_d() * std::pow(a, m.first) * std::pow(b, m.second);
    return s;
}

std::string BiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        mpq_class a = abs(c);
        os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        const bool unit = (m.first || m.second);
        if (!(unit && a == 1)) os << a.get_str() << (unit ? "*" : "");
        if (m.first) os << "l1" << (m.first > 1 ? "^" + std::to_string(m.first) : "");
        if (m.first && m.second) os << "*";
        if (m.second) os << "l2" << (m.second > 1 ? "^" + std::to_string(m.second) : "");
        first = false;
    }
    return os.str();
}

namespace {

// "l1^2(l2-1)^2" -> {("l1",2), ("l2-1",2)}
std::vector<std::pair<std::string, int>> table_factors(const std::string& s) {
    std::vector<std::pair<std::string, int>> out;
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] == ' ') {
            ++i;
            continue;
        }
        std::string base;
        if (s[i] == '(') {
            const auto close = s.find(')', i);
            if (close == std::string::npos) throw std::invalid_argument("unbalanced factor in '" + s + "'");
            base = s.substr(i + 1, close - i - 1);
            i = close + 1;
        } else {
            const size_t j = i;
            while (i < s.size() && s[i] != '^' && s[i] != '(' && s[i] != ' ') ++i;
            base = s.substr(j, i - j);
        }
        int power = 1;
        if (i < s.size() && s[i] == '^') {
            const size_t j = ++i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i == j) throw std::invalid_argument("missing exponent in '" + s + "'");
            power = std::stoi(s.substr(j, i - j));
        }
        out.emplace_back(base, power);
    }
    return out;
}

}  // namespace

BiPoly parse_bipoly(const std::string& s) {
    BiPoly result(1);
    for (const auto& [base, power] : table_factors(s)) {
        BiPoly f;
        if (base == "1") f = BiPoly(1);
        else if (base == "l1") f = BiPoly::l1();
        else if (base == "l2") f = BiPoly::l2();
        else if (base == "l1-1") f = BiPoly::l1() - BiPoly(1);
        else if (base == "l2-1") f = BiPoly::l2() - BiPoly(1);
        else if (base == "1-l1") f = BiPoly(1) - BiPoly::l1();
        else if (base == "1-l2") f = BiPoly(1) - BiPoly::l2();
        else throw std::invalid_argument("unrecognised factor in '" + s + "': " + base);
        for (int i = 0; i < power; ++i) result = result * f;
    }
    return result;
}

// ---------------------------------------------------------------- matrix and minors

PolyMat m_matrix() {
    const BiPoly l1 = BiPoly::l1(), l2 = BiPoly::l2(), one(1), zero;
    PolyMat m;
    m[0] = {l1 - one, -l1, one, zero, zero, zero};
    m[1] = {l2, -l2, zero, -one, zero, one};
    m[2] = {one, -one, zero, -one, one, zero};
    return m;
}

std::array<std::array<mpq_class, 6>, 3> m_matrix(const mpq_class& l1, const mpq_class& l2) {
    const PolyMat m = m_matrix();
    std::array<std::array<mpq_class, 6>, 3> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 6; ++j) r[i][j] = m[i][j].eval(l1, l2);
    return r;
}

std::array<std::array<cplx, 6>, 3> m_matrix(cplx l1, cplx l2) {
    const PolyMat m = m_matrix();
    std::array<std::array<cplx, 6>, 3> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 6; ++j) r[i][j] = m[i][j].eval(l1, l2);
    return r;
}

BiPoly minor(const PolyMat& m, int i, int j, int k) {
    const int c[3] = {i - 1, j - 1, k - 1};
    auto e = [&](int r, int s) -> const BiPoly& { return m[r][c[s]]; };
    return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
           e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

std::map<std::string, BiPoly> all_minors() {
    const PolyMat m = m_matrix();
    std::map<std::string, BiPoly> out;
    for (int i = 1; i <= 6; ++i)
        for (int j = i + 1; j <= 6; ++j)
            for (int k = j + 1; k <= 6; ++k)
                out[std::to_string(i) + std::to_string(j) + std::to_string(k)] = minor(m, i, j, k);
    return out;
}

BiPoly partition_minor(const Partition& p) {
    const PolyMat m = m_matrix();
    return minor(m, p.J[0], p.J[1], p.J[2]) * minor(m, p.Jc[0], p.Jc[1], p.Jc[2]);
}

namespace {

cplx theta_const(int k, cplx tau) {
    switch (k) {
        case 0: return theta1_value(Theta1::T0, tau);
        case 2: return theta1_value(Theta1::T2, tau);
        case 3: return theta1_value(Theta1::T3, tau);
        default: throw std::invalid_argument("genus-1 theta index must be 0, 2 or 3");
    }
}

// l_i = theta_2^4/theta_3^4 and l_i - 1 = -theta_0^4/theta_3^4, factor by factor
cplx theta_side(const std::string& entry, cplx t1, cplx t2) {
    cplx r = 1;
    for (const auto& [base, power] : table_factors(entry)) {
        cplx f;
        if (base == "1") f = 1;
        else if (base == "l1") f = std::pow(theta_const(2, t1) / theta_const(3, t1), 4);
        else if (base == "l2") f = std::pow(theta_const(2, t2) / theta_const(3, t2), 4);
        else if (base == "l1-1") f = -std::pow(theta_const(0, t1) / theta_const(3, t1), 4);
        else if (base == "l2-1") f = -std::pow(theta_const(0, t2) / theta_const(3, t2), 4);
        else throw std::invalid_argument("unrecognised table factor: " + base);
        r *= std::pow(f, power);
    }
    return r;
}

}  // namespace

std::vector<MinorRowCheck> check_minor_table(const std::vector<std::pair<cplx, cplx>>& taus) {
    std::vector<MinorRowCheck> out;
    for (const auto& row : correspondence_tables().minor_table) {
        MinorRowCheck c;
        c.partition = Partition::parse(row.partition);
        const BiPoly d = partition_minor(c.partition);
        c.delta_sq = d * d;
        c.table = parse_bipoly(row.label);
        c.symbolic_ok = (c.delta_sq == c.table);
        for (const auto& [t1, t2] : taus) {
            const cplx got = c.delta_sq.eval(lambda_eval(t1), lambda_eval(t2));
            const cplx want = theta_side(row.label, t1, t2);
            c.numeric_residual = std::max(c.numeric_residual, std::abs(got - want) / std::max(1.0, std::abs(want)));
        }
        out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------- product points

cplx ProductPoint::lambda1() const { return lambda_eval(tau1); }
cplx ProductPoint::lambda2() const { return lambda_eval(tau2); }

bool ProductPoint::valid() const {
    if (tau1.imag() <= 0 || tau2.imag() <= 0) return false;
    for (cplx l : {lambda1(), lambda2()})
        if (std::abs(l) < 1e-14 || std::abs(l - 1.0) < 1e-14 || !std::isfinite(std::abs(l))) return false;
    return true;
}

namespace {

template <class T, class Triple, class Mat>
std::pair<Triple, Triple> split_impl(const Partition& p, const std::array<std::array<T, 6>, 3>& m) {
    if (p.degenerate()) throw std::invalid_argument("partition 123/456 is degenerate: both minors vanish identically");
    Mat a{}, b{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            a[i][k] = m[i][p.J[k] - 1];
            b[i][k] = m[i][p.Jc[k] - 1];
        }
    return {diagonal_triple(a), diagonal_triple(b)};
}

}  // namespace

std::pair<QuadricTriple, QuadricTriple> quadric_split(const Partition& p, const mpq_class& l1, const mpq_class& l2) {
    return split_impl<mpq_class, QuadricTriple, QMat3>(p, m_matrix(l1, l2));
}

std::pair<CQuadricTriple, CQuadricTriple> quadric_split(const Partition& p, cplx l1, cplx l2) {
    return split_impl<cplx, CQuadricTriple, CMat3>(p, m_matrix(l1, l2));
}

// ---------------------------------------------------------------- periods

nlohmann::json PeriodQuantities::to_json() const {
    return {{"pullbackConst", {pullback_const.real(), pullback_const.imag()}},
            {"gamma34Integral", {gamma34_integral.real(), gamma34_integral.imag()}},
            {"integralX", integral_x}};
}

PeriodQuantities period_quantities(const ProductPoint& p) {
    if (!p.valid()) throw std::invalid_argument("product point must have Im tau > 0 and nondegenerate lambda");
    const cplx t1 = theta_const(3, p.tau1), t2 = theta_const(3, p.tau2);
    PeriodQuantities q;
    q.pullback_const = kPi * kPi / 8.0 * t1 * t1 * t2 * t2;
    // beta_i has length 2
    q.gamma34_integral = 4.0 * q.pullback_const;
    // |dz ^ d zbar| = 2 dx dy over tori of area 4 Im tau_i; the uniformization is 2:1
    const double tori = (2.0 * 4.0 * p.tau1.imag()) * (2.0 * 4.0 * p.tau2.imag());
    q.integral_x = std::norm(q.pullback_const) * tori / 2.0;
    return q;
}

namespace {

// Jacobi theta functions with argument v, nome e^{pi i tau}
struct ThetaArg {
    cplx t1, t2, t3, t4;
};

ThetaArg theta_arg(cplx v, cplx tau) {
    const int N = static_cast<int>(std::sqrt(60.0 / (kPi * tau.imag()))) + 4;
    ThetaArg r{0, 0, 0, 0};
    for (int n = -N; n <= N; ++n) {
        const double h = n + 0.5;
        const cplx eh = std::exp(kI * kPi * (tau * (h * h) + 2.0 * h * v));
        const cplx en = std::exp(kI * kPi * (tau * double(n * n) + 2.0 * n * v));
        const double sg = (n & 1) ? -1.0 : 1.0;
        r.t1 += sg * eh;
        r.t2 += eh;
        r.t3 += en;
        r.t4 += sg * en;
    }
    r.t1 *= -kI;
    return r;
}

struct Jacobi {
    cplx sn, cn, dn;
};

// sn, cn, dn at u = pi theta_3(tau)^2 v with modulus k^2 = lambda(tau)
Jacobi jacobi(cplx v, cplx tau) {
    const ThetaArg z = theta_arg(0.0, tau);
    const ThetaArg a = theta_arg(v, tau);
    return {z.t3 / z.t2 * a.t1 / a.t4, z.t4 / z.t2 * a.t2 / a.t4, z.t4 / z.t3 * a.t3 / a.t4};
}

}  // namespace

std::array<cplx, 6> uniformize(const ProductPoint& p, cplx z1, cplx z2) {
    const Jacobi a = jacobi(z1, p.tau1), b = jacobi(z2, p.tau2);
    const cplx y0 = a.sn / b.sn;
    return {1.0, a.cn, a.dn, y0, y0 * b.cn, y0 * b.dn};
}

int uniformization_degree(const ProductPoint& p, cplx z1, cplx z2, double tol) {
    const auto base = uniformize(p, z1, z2);
    double scale = 0;
    for (cplx c : base) scale = std::max(scale, std::abs(c));
    const cplx half1[4] = {0.0, 1.0, p.tau1, 1.0 + p.tau1};
    const cplx half2[4] = {0.0, 1.0, p.tau2, 1.0 + p.tau2};
    int count = 0;
    for (int s1 : {1, -1})
        for (int s2 : {1, -1})
            for (cplx h1 : half1)
                for (cplx h2 : half2) {
                    const auto img = uniformize(p, double(s1) * z1 + h1, double(s2) * z2 + h2);
                    double d = 0;
                    for (int i = 0; i < 6; ++i) d = std::max(d, std::abs(img[i] - base[i]));
                    if (d <= tol * scale) ++count;
                }
    return count;
}

nlohmann::json MonteCarloEstimate::to_json() const {
    return {{"integralX", integral_x},
            {"stdError", std_error},
            {"samples", samples},
            {"maxModelResidual", max_model_residual}};
}

MonteCarloEstimate monte_carlo_integral(const ProductPoint& p, long samples, uint64_t seed, int degree) {
    if (!p.valid()) throw std::invalid_argument("product point must have Im tau > 0 and nondegenerate lambda");
    if (samples < 2 || degree < 1) throw std::invalid_argument("need at least 2 samples and a positive degree");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    const cplx l1 = p.lambda1(), l2 = p.lambda2();
    const double h = 1e-5;
    double sum = 0, sum2 = 0;
    MonteCarloEstimate est;
    for (long s = 0; s < samples; ++s) {
        const cplx z1 = 2.0 * U(rng) + 2.0 * U(rng) * p.tau1;
        const cplx z2 = 2.0 * U(rng) + 2.0 * U(rng) * p.tau2;
        const auto P = uniformize(p, z1, z2);
        // f^*(dx1 ^ dy0) = dx1/dz1 * dy0/dz2 dz1 ^ dz2 since x1 depends on z1 only
        const cplx dx1 = (uniformize(p, z1 + h, z2)[1] - uniformize(p, z1 - h, z2)[1]) / (2 * h);
        const cplx dy0 = (uniformize(p, z1, z2 + h)[3] - uniformize(p, z1, z2 - h)[3]) / (2 * h);
        const cplx g = dx1 * dy0 / (8.0 * P[2] * P[4] * P[5]);
        const double w = std::norm(g);
        sum += w;
        sum2 += w * w;
        double mag = 0;
        for (cplx c : P) mag = std::max(mag, std::norm(c));
        const cplx r1 = (1.0 - l1) * P[0] * P[0] + l1 * P[1] * P[1] - P[2] * P[2];
        const cplx r2 = l2 * P[0] * P[0] - l2 * P[1] * P[1] - P[3] * P[3] + P[5] * P[5];
        const cplx r3 = P[0] * P[0] - P[1] * P[1] - P[3] * P[3] + P[4] * P[4];
        est.max_model_residual =
            std::max(est.max_model_residual, std::max({std::abs(r1), std::abs(r2), std::abs(r3)}) / mag);
    }
    const double n = double(samples);
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    const double tori = (2.0 * 4.0 * p.tau1.imag()) * (2.0 * 4.0 * p.tau2.imag());
    est.samples = samples;
    est.integral_x = mean * tori / degree;
    est.std_error = std::sqrt(var / n) * tori / degree;
    return est;
}

// ---------------------------------------------------------------- identity checks

nlohmann::json NormIdentityReport::to_json() const {
    return {{"partition", partition.label()},
            {"eps", eps},
            {"delta", delta},
            {"deltaSq", {delta_sq.real(), delta_sq.imag()}},
            {"resultantProduct", {resultant_product.real(), resultant_product.imag()}},
            {"lhs", lhs},
            {"rhs", rhs},
            {"residual", residual}};
}

NormIdentityReport norm_identity_check(const ProductPoint& p, const Partition& part) {
    if (part.degenerate()) throw std::invalid_argument("partition 123/456 is degenerate");
    NormIdentityReport r;
    r.partition = part;
    std::tie(r.eps, r.delta) = epsilon_delta(part.label());
    const cplx l1 = p.lambda1(), l2 = p.lambda2();
    const BiPoly d = partition_minor(part);
    r.delta_sq = std::pow(d.eval(l1, l2), 2);
    const auto [A, B] = quadric_split(part, l1, l2);
    r.resultant_product = macaulay_resultant(A) * macaulay_resultant(B);
    const double y = p.tau1.imag() * p.tau2.imag();
    const double th = std::abs(theta_const(r.eps, p.tau1) * theta_const(r.delta, p.tau2));
    r.lhs = std::pow(y, 4) * std::pow(th, 16);
    const PeriodQuantities q = period_quantities(p);
    r.rhs = std::abs(r.resultant_product) * std::pow(2.0 / std::pow(kPi, 4) * q.integral_x, 4);
    r.residual = std::abs(r.lhs - r.rhs) / std::max(std::abs(r.lhs), 1e-300);
    return r;
}

int genus1_index(int a, int b) {
    if (a == 0 && b == 0) return 3;
    if (a == 1 && b == 0) return 2;
    if (a == 0 && b == 1) return 0;
    return -1;
}

nlohmann::json Theta8Report::to_json() const {
    return {{"kind", kind},
            {"level", level},
            {"order", order},
            {"coeffs", coeffs.to_json()},
            {"matches", matches},
            {"matched", matched},
            {"sign", sign},
            {"partition", partition},
            {"integral", integral},
            {"valuation", valuation},
            {"constantTerm", constant_term.get_str()},
            {"seconds", seconds}};
}

Theta8Report theta8_restriction_check(const PinnedEmbedding& emb, long order, const ExpansionOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    Theta8Report r;
    r.kind = emb.source.kind;
    r.level = emb.level;
    r.order = order;
    r.coeffs = period_coeffs(emb);
    const RestrictedExpansion ex = restricted_expansion(r.coeffs, order, opt);
    r.integral = ex.integral;
    r.valuation = ex.series.total_valuation();
    const GaussInt c0 = ex.series.coeff({0, 0, 0});
    r.constant_term = c0.re;
    const bool product = !r.coeffs.has_C();
    const auto& tables = correspondence_tables();
    for (const Char2& ch : even_characteristics()) {
        std::string label = ch.label();
        if (product) {
            const int e = genus1_index(ch.a1, ch.b1), d = genus1_index(ch.a2, ch.b2);
            if (e < 0 || d < 0) continue;
            label = std::to_string(e) + "," + std::to_string(d);
        }
        MultiSeries th = theta2_pow8(ch, order);
        if (product) th = th.diagonal();
        for (int sg : {1, -1}) {
            const MultiSeries cand = sg > 0 ? th : -th;
            if (!(cand == ex.series)) continue;
            r.matches.push_back((sg > 0 ? "+" : "-") + label);
            r.matched = label;
            r.sign = sg;
        }
    }
    if (r.matches.size() != 1) {
        r.matched.clear();
        r.sign = 0;
    } else {
        // theta_{a,b} bits name the Gaussian class with the same bits
        std::string key = r.matched;
        if (!product)
            for (char& ch : key)
                if (ch == '1') ch = 'i';
        const auto& rows = product ? tables.epsdelta_to_partition : tables.ev_to_partition;
        for (const auto& row : rows)
            if (row.label == key) r.partition = row.partition;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace bphi
