#include "bphi/theta.hpp"

#include <cmath>
#include <stdexcept>

namespace bphi {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI(0.0, 1.0);

// q^(e/4) bookkeeping: one-variable products assembled in den 4
ExactSeries prod_factor(int m4, int sign, long k, long order) {
    // (1 + sign q^(m4/4))^k in den 4
    ExactSeries base = factor_power(1, sign, k, order * 4 / m4 + 2);
    ExactSeries r(4, order);
    for (const auto& [e, c] : base.terms()) r.add_term(e * m4, c);
    return r;
}

}  // namespace

Theta1 theta1_from_int(int k) {
    if (k == 0) return Theta1::T0;
    if (k == 2) return Theta1::T2;
    if (k == 3) return Theta1::T3;
    throw std::invalid_argument("theta kind must be 0, 2 or 3");
}

ExactSeries theta1_product_series(Theta1 kind, long order) {
    ExactSeries r = ExactSeries::constant(GaussInt(1), 4, order);
    for (long n = 1; 2 * n <= order + 1; ++n) {
        if (2 * n < order) r = series_mul(r, prod_factor(static_cast<int>(8 * n), -1, 1, order));
        switch (kind) {
            case Theta1::T0:
                r = series_mul(r, prod_factor(static_cast<int>(4 * (2 * n - 1)), -1, 2, order));
                break;
            case Theta1::T3:
                r = series_mul(r, prod_factor(static_cast<int>(4 * (2 * n - 1)), 1, 2, order));
                break;
            case Theta1::T2:
                if (2 * n < order) r = series_mul(r, prod_factor(static_cast<int>(8 * n), 1, 2, order));
                break;
        }
    }
    if (kind == Theta1::T2) {
        ExactSeries shifted(4, order);
        for (const auto& [e, c] : r.terms()) shifted.add_term(e + 1, c * mpz_class(2));
        return shifted;
    }
    return r;
}

ExactSeries theta1_sum_series(Theta1 kind, long order) {
    ExactSeries r(4, order);
    const long cap = 4 * order;
    for (long n = -static_cast<long>(std::sqrt(static_cast<double>(order))) - 2;
         n <= static_cast<long>(std::sqrt(static_cast<double>(order))) + 2; ++n) {
        if (kind == Theta1::T2) {
            long X = 2 * n + 1;  // exponent (n+1/2)^2 = X^2/4
            if (X * X < cap) r.add_term(X * X, GaussInt(1));
        } else {
            long e = 4 * n * n;
            if (e >= cap) continue;
            long s = (kind == Theta1::T0 && (n & 1)) ? -1 : 1;
            r.add_term(e, GaussInt(s));
        }
    }
    return r;
}

cplx theta1_value(Theta1 kind, cplx tau) {
    if (tau.imag() <= 0) throw std::domain_error("tau must lie in the upper half plane");
    cplx sum = 0;
    const int N = static_cast<int>(std::sqrt(40.0 / (kPi * tau.imag()))) + 3;
    for (int n = -N; n <= N; ++n) {
        double x = (kind == Theta1::T2) ? n + 0.5 : n;
        cplx term = std::exp(kI * kPi * tau * (x * x));
        if (kind == Theta1::T0 && (n & 1)) term = -term;
        sum += term;
    }
    return sum;
}

cplx theta1_product_value(Theta1 kind, cplx tau) {
    if (tau.imag() <= 0) throw std::domain_error("tau must lie in the upper half plane");
    const cplx q = std::exp(kI * kPi * tau);
    cplx prod = 1;
    cplx q2n = 1;
    for (int n = 1; n < 400; ++n) {
        q2n *= q * q;
        const cplx qodd = q2n / q;
        cplx f = 1.0 - q2n;
        if (kind == Theta1::T0) f *= (1.0 - qodd) * (1.0 - qodd);
        if (kind == Theta1::T3) f *= (1.0 + qodd) * (1.0 + qodd);
        if (kind == Theta1::T2) f *= (1.0 + q2n) * (1.0 + q2n);
        prod *= f;
        if (std::abs(qodd) < 1e-18) break;
    }
    if (kind == Theta1::T2) prod *= 2.0 * std::exp(kI * kPi * tau / 4.0);
    return prod;
}

cplx lambda_eval(cplx tau) {
    const cplx t2 = theta1_value(Theta1::T2, tau);
    const cplx t3 = theta1_value(Theta1::T3, tau);
    return std::pow(t2 / t3, 4);
}

cplx eta_value(cplx tau) {
    if (tau.imag() <= 0) throw std::domain_error("tau must lie in the upper half plane");
    // pentagonal series converges faster than the product
    cplx sum = 0;
    for (int k = -60; k <= 60; ++k) {
        const double e = k * (3.0 * k - 1.0) / 2.0;
        cplx term = std::exp(2.0 * kPi * kI * tau * e);
        sum += (k & 1) ? -term : term;
    }
    return std::exp(2.0 * kPi * kI * tau / 24.0) * sum;
}

std::string Char2::label() const {
    return std::to_string(a1) + std::to_string(a2) + "/" + std::to_string(b1) + std::to_string(b2);
}

std::vector<Char2> even_characteristics() {
    std::vector<Char2> out;
    for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2)
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2) {
                    Char2 c{a1, a2, b1, b2};
                    if (c.even()) out.push_back(c);
                }
    return out;
}

MultiSeries theta2_series(const Char2& ch, long order) {
    // term n: q11^{X^2/4} q12^{XY/2} q22^{Y^2/4} * i^{X b1 + Y b2} with X = 2 n1 + a1, Y = 2 n2 + a2
    MultiSeries r(4, order, 0);
    const long cap = 4 * order;
    const long R = static_cast<long>(std::sqrt(static_cast<double>(cap))) + 2;
    for (long X = -R; X <= R; ++X) {
        if (((X - ch.a1) & 1) != 0) continue;
        for (long Y = -R; Y <= R; ++Y) {
            if (((Y - ch.a2) & 1) != 0) continue;
            if (X * X + Y * Y >= cap) continue;
            r.add_term({X * X, 2 * X * Y, Y * Y}, GaussInt::unit(X * ch.b1 + Y * ch.b2));
        }
    }
    return r;
}

MultiSeries theta2_pow8(const Char2& ch, long order) {
    if (!ch.even()) throw std::invalid_argument("odd characteristic " + ch.label());
    MultiSeries t = theta2_series(ch, order);
    return t.pow(8).truncated(order).rescaled(2);
}

cplx theta2_value(const Char2& ch, const CMat2& T) {
    const double a1 = ch.a1 / 2.0, a2 = ch.a2 / 2.0, b1 = ch.b1 / 2.0, b2 = ch.b2 / 2.0;
    const double y00 = T[0][0].imag(), y11 = T[1][1].imag(), y01 = T[0][1].imag();
    const double tr = y00 + y11, det = y00 * y11 - y01 * y01;
    if (y00 <= 0 || det <= 0) throw std::domain_error("Im T must be positive definite");
    const double mu = (tr - std::sqrt(std::max(tr * tr - 4 * det, 0.0))) / 2.0;
    const int N = static_cast<int>(std::sqrt(40.0 / (kPi * mu))) + 3;
    cplx sum = 0;
    for (int n1 = -N; n1 <= N; ++n1)
        for (int n2 = -N; n2 <= N; ++n2) {
            const double x = n1 + a1, y = n2 + a2;
            cplx quad = T[0][0] * (x * x) + 2.0 * T[0][1] * (x * y) + T[1][1] * (y * y);
            sum += std::exp(kI * kPi * quad + 2.0 * kPi * kI * (x * b1 + y * b2));
        }
    return sum;
}

std::string EvChar::label() const {
    auto c = [](int v) { return v ? std::string("i") : std::string("0"); };
    return c(a1) + c(a2) + "/" + c(b1) + c(b2);
}

std::vector<EvChar> ev_classes() {
    std::vector<EvChar> out;
    for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2)
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2) {
                    EvChar e{a1, a2, b1, b2};
                    if (e.valid()) out.push_back(e);
                }
    return out;
}

EvChar ev_from_label(const std::string& label) {
    if (label.size() != 5 || label[2] != '/') throw std::invalid_argument("bad Ev label " + label);
    auto v = [&](char ch) {
        if (ch == '0') return 0;
        if (ch == 'i') return 1;
        throw std::invalid_argument("bad Ev label " + label);
    };
    EvChar e{v(label[0]), v(label[1]), v(label[3]), v(label[4])};
    if (!e.valid()) throw std::invalid_argument("label is not in Ev: " + label);
    return e;
}

bool in_domain_D(const CMat2& W) {
    // H = (W - W^*)/2i must be positive definite
    const cplx h00 = (W[0][0] - std::conj(W[0][0])) / (2.0 * kI);
    const cplx h11 = (W[1][1] - std::conj(W[1][1])) / (2.0 * kI);
    const cplx h01 = (W[0][1] - std::conj(W[1][0])) / (2.0 * kI);
    const double det = h00.real() * h11.real() - std::norm(h01);
    return h00.real() > 0 && det > 0;
}

cplx freitag_theta(const EvChar& ev, const CMat2& W) {
    if (!in_domain_D(W)) throw std::domain_error("Omega is outside the domain");
    if (!ev.valid()) throw std::invalid_argument("characteristic not in Ev");
    const cplx h00 = (W[0][0] - std::conj(W[0][0])) / (2.0 * kI);
    const cplx h11 = (W[1][1] - std::conj(W[1][1])) / (2.0 * kI);
    const cplx h01 = (W[0][1] - std::conj(W[1][0])) / (2.0 * kI);
    const double tr = h00.real() + h11.real();
    const double det = h00.real() * h11.real() - std::norm(h01);
    const double mu = (tr - std::sqrt(std::max(tr * tr - 4 * det, 0.0))) / 2.0;
    // |term| <= exp(-pi mu |v|^2); stop once the dropped shell is below 1e-15 relative
    const int N = static_cast<int>(std::sqrt(36.0 * std::log(10.0) / (kPi * mu))) + 2;
    const cplx s1 = 0.5 * cplx(1, 1) * static_cast<double>(ev.a1);  // a/(1+i)
    const cplx s2 = 0.5 * cplx(1, 1) * static_cast<double>(ev.a2);
    const cplx c1 = std::conj(0.5 * cplx(1, 1) * static_cast<double>(ev.b1));
    const cplx c2 = std::conj(0.5 * cplx(1, 1) * static_cast<double>(ev.b2));
    cplx sum = 0;
    for (int x1 = -N; x1 <= N; ++x1)
        for (int y1 = -N; y1 <= N; ++y1)
            for (int x2 = -N; x2 <= N; ++x2)
                for (int y2 = -N; y2 <= N; ++y2) {
                    const cplx v1 = cplx(x1, y1) + s1;
                    const cplx v2 = cplx(x2, y2) + s2;
                    const cplx quad = (v1 * W[0][0] * std::conj(v1) + v1 * W[0][1] * std::conj(v2) +
                                       v2 * W[1][0] * std::conj(v1) + v2 * W[1][1] * std::conj(v2)) /
                                      2.0;
                    const double lin = (v1 * c1 + v2 * c2).real();
                    sum += std::exp(2.0 * kPi * kI * (quad + lin));
                }
    return sum;
}

double freitag_petersson_sq(const EvChar& ev, const CMat2& W) {
    const cplx h00 = (W[0][0] - std::conj(W[0][0])) / (2.0 * kI);
    const cplx h11 = (W[1][1] - std::conj(W[1][1])) / (2.0 * kI);
    const cplx h01 = (W[0][1] - std::conj(W[1][0])) / (2.0 * kI);
    const double det = h00.real() * h11.real() - std::norm(h01);
    return det * std::norm(freitag_theta(ev, W));
}

const CorrespondenceTables& correspondence_tables() {
    static const CorrespondenceTables t = [] {
        CorrespondenceTables c;
        c.ev_to_partition = {{"135/246", "00/00"}, {"146/235", "i0/00"}, {"136/245", "0i/00"},
                             {"125/346", "00/i0"}, {"134/256", "00/0i"}, {"145/236", "ii/00"},
                             {"156/234", "i0/0i"}, {"124/356", "00/ii"}, {"126/345", "0i/i0"},
                             {"123/456", "ii/ii"}};
        c.char_to_partition = {{"135/246", "10/10"}, {"134/256", "10/01"}, {"136/245", "10/11"},
                               {"146/235", "01/10"}, {"156/234", "01/01"}, {"145/236", "01/11"},
                               {"125/346", "11/10"}, {"124/356", "11/01"}, {"126/345", "11/11"}};
        c.epsdelta_to_partition = {{"135/246", "2,2"}, {"134/256", "2,0"}, {"136/245", "2,3"},
                                   {"146/235", "0,2"}, {"156/234", "0,0"}, {"145/236", "0,3"},
                                   {"125/346", "3,2"}, {"124/356", "3,0"}, {"126/345", "3,3"}};
        c.minor_table = {{"124/356", "(l2-1)^2"},          {"125/346", "l2^2"},
                         {"126/345", "1"},                 {"134/256", "l1^2(l2-1)^2"},
                         {"135/246", "l1^2 l2^2"},         {"136/245", "l1^2"},
                         {"145/236", "(l1-1)^2"},          {"146/235", "(l1-1)^2 l2^2"},
                         {"156/234", "(l1-1)^2(l2-1)^2"}};
        return c;
    }();
    return t;
}

nlohmann::json tables_to_json() {
    const auto& t = correspondence_tables();
    auto dump = [](const std::vector<TableRow>& rows) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) j.push_back({{"partition", r.partition}, {"key", r.label}});
        return j;
    };
    return {{"ev", dump(t.ev_to_partition)},
            {"characteristic", dump(t.char_to_partition)},
            {"epsilon_delta", dump(t.epsdelta_to_partition)},
            {"minor", dump(t.minor_table)}};
}

std::pair<int, int> epsilon_delta(const std::string& partition) {
    for (const auto& r : correspondence_tables().epsdelta_to_partition)
        if (r.partition == partition) return {r.label[0] - '0', r.label[2] - '0'};
    throw std::invalid_argument("partition has no (eps,delta) entry: " + partition);
}

}  // namespace bphi
