#include "bphi/qseries.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bphi {

namespace {

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

nlohmann::json big_to_json(const mpz_class& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

mpz_class big_from_json(const nlohmann::json& j) {
    if (j.is_string()) return mpz_class(j.get<std::string>());
    return mpz_class(j.get<long>());
}

}  // namespace

GaussInt GaussInt::unit(long k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

GaussInt& GaussInt::operator+=(const GaussInt& o) {
    re += o.re;
    im += o.im;
    return *this;
}

GaussInt& GaussInt::operator-=(const GaussInt& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

GaussInt& GaussInt::operator*=(const GaussInt& o) {
    mpz_class r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
}

GaussInt operator+(GaussInt a, const GaussInt& b) { return a += b; }
GaussInt operator-(GaussInt a, const GaussInt& b) { return a -= b; }
GaussInt operator*(const GaussInt& a, const GaussInt& b) {
    GaussInt r = a;
    return r *= b;
}
GaussInt operator*(const GaussInt& a, const mpz_class& s) { return {a.re * s, a.im * s}; }
bool operator==(const GaussInt& a, const GaussInt& b) { return a.re == b.re && a.im == b.im; }

std::string to_string(const GaussInt& z) {
    if (z.im == 0) return z.re.get_str();
    if (z.re == 0) return z.im.get_str() + "i";
    std::string s = z.re.get_str();
    s += (z.im < 0) ? "-" : "+";
    mpz_class a = abs(z.im);
    s += a.get_str() + "i";
    return s;
}

// ---------------------------------------------------------------- ExactSeries

ExactSeries::ExactSeries(int den, long order) : den_(den), order_(order) {
    if (den <= 0) throw std::invalid_argument("series denominator must be positive");
}

ExactSeries ExactSeries::constant(const GaussInt& c, int den, long order) {
    ExactSeries s(den, order);
    s.add_term(0, c);
    return s;
}

ExactSeries ExactSeries::monomial(const GaussInt& c, long e, int den, long order) {
    ExactSeries s(den, order);
    s.add_term(e, c);
    return s;
}

GaussInt ExactSeries::coeff(long e) const {
    if (e >= cap()) throw std::out_of_range("coefficient beyond truncation order");
    auto it = terms_.find(e);
    return it == terms_.end() ? GaussInt{} : it->second;
}

void ExactSeries::add_term(long e, const GaussInt& c) {
    if (e >= cap() || c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

long ExactSeries::valuation() const { return terms_.empty() ? cap() : terms_.begin()->first; }

ExactSeries ExactSeries::truncated(long order) const {
    ExactSeries r(den_, std::min(order, order_));
    for (const auto& [e, c] : terms_)
        if (e < r.cap()) r.terms_.emplace(e, c);
    return r;
}

ExactSeries ExactSeries::rescaled(int den) const {
    if (den % den_ != 0) throw std::invalid_argument("target denominator is not a multiple");
    const long k = den / den_;
    ExactSeries r(den, order_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e * k, c);
    return r;
}

ExactSeries ExactSeries::substitute_power(int k) const {
    if (k <= 0) throw std::invalid_argument("substitution power must be positive");
    ExactSeries r(den_, order_ * k);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e * k, c);
    return r;
}

ExactSeries& ExactSeries::operator+=(const ExactSeries& o) {
    if (o.den_ != den_) throw std::invalid_argument("mismatched denominators");
    order_ = std::min(order_, o.order_);
    for (auto it = terms_.begin(); it != terms_.end();)
        it = (it->first >= cap()) ? terms_.erase(it) : std::next(it);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

ExactSeries& ExactSeries::operator-=(const ExactSeries& o) { return *this += -o; }

ExactSeries ExactSeries::operator-() const {
    ExactSeries r(den_, order_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

ExactSeries ExactSeries::scaled(const GaussInt& c) const {
    ExactSeries r(den_, order_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
}

ExactSeries ExactSeries::pow(unsigned k) const {
    ExactSeries result = constant(GaussInt(1), den_, order_);
    ExactSeries base = *this;
    bool first = true;
    while (k) {
        if (k & 1u) {
            result = first ? base : series_mul(result, base);
            first = false;
        }
        k >>= 1u;
        if (k) base = series_mul(base, base);
    }
    return result;
}

ExactSeries ExactSeries::inverse() const {
    if (terms_.empty()) throw std::domain_error("cannot invert a zero series");
    const long v = valuation();
    const GaussInt lead = terms_.begin()->second;
    if (lead.norm() != 1) throw std::domain_error("leading coefficient is not a unit");
    const GaussInt lead_inv = lead.conj();
    // known exponents of the result run below cap - 2v
    const long new_cap = cap() - 2 * v;
    const long new_order = floor_div(new_cap, den_);
    ExactSeries r(den_, new_order);
    const long n_terms = new_order * den_ + v;  // shifted exponents 0..n_terms-1
    std::vector<GaussInt> b(std::max<long>(n_terms, 0));
    for (long n = 0; n < n_terms; ++n) {
        GaussInt acc = (n == 0) ? GaussInt(1) : GaussInt();
        for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
            long k = it->first - v;
            if (k > n) break;
            acc -= it->second * lead_inv * b[n - k];
        }
        b[n] = acc;
    }
    for (long n = 0; n < n_terms; ++n)
        if (!b[n].is_zero()) r.add_term(n - v, b[n] * lead_inv);
    return r;
}

nlohmann::json ExactSeries::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : terms_) terms.push_back({e, big_to_json(c.re), big_to_json(c.im)});
    return {{"den", den_}, {"order", order_}, {"terms", terms}};
}

ExactSeries ExactSeries::from_json(const nlohmann::json& j) {
    ExactSeries s(j.at("den").get<int>(), j.at("order").get<long>());
    for (const auto& t : j.at("terms"))
        s.add_term(t.at(0).get<long>(), GaussInt(big_from_json(t.at(1)), big_from_json(t.at(2))));
    return s;
}

ExactSeries operator+(ExactSeries a, const ExactSeries& b) { return a += b; }
ExactSeries operator-(ExactSeries a, const ExactSeries& b) { return a -= b; }

ExactSeries series_mul(const ExactSeries& a, const ExactSeries& b) {
    if (a.den() != b.den()) throw std::invalid_argument("mismatched denominators");
    const int den = a.den();
    const long order = std::min(a.order() + floor_div(b.valuation(), den),
                                b.order() + floor_div(a.valuation(), den));
    ExactSeries r(den, order);
    const long cap = r.cap();
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            if (ea + eb >= cap) break;
            r.add_term(ea + eb, ca * cb);
        }
    }
    return r;
}

bool operator==(const ExactSeries& a, const ExactSeries& b) {
    return a.den() == b.den() && a.order() == b.order() && a.terms() == b.terms();
}

ExactSeries factor_power(int m, int sign, const mpz_class& k, long order) {
    if (m < 1) throw std::invalid_argument("factor exponent scale must be positive");
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    ExactSeries r(1, order);
    mpz_class binom;
    for (unsigned long j = 0; static_cast<long>(j) * m < order; ++j) {
        mpz_bin_ui(binom.get_mpz_t(), k.get_mpz_t(), j);
        if (binom == 0) break;
        if (sign < 0 && (j & 1u)) binom = -binom;
        r.add_term(static_cast<long>(j) * m, GaussInt(binom, 0));
    }
    return r;
}

ExactSeries eta_series(int m, long order) {
    if (m < 1) throw std::invalid_argument("eta scale must be positive");
    ExactSeries prod = ExactSeries::constant(GaussInt(1), 1, order);
    for (long n = 1; n * m < order; ++n) prod = series_mul(prod, factor_power(static_cast<int>(n * m), -1, 1, order));
    ExactSeries r(24, order);
    for (const auto& [e, c] : prod.terms()) r.add_term(24 * e + m, c);
    return r;
}

ExactSeries eta_quotient(const std::vector<std::pair<int, int>>& factors, long order) {
    long margin = 2;
    for (const auto& [m, k] : factors) margin += (std::abs(k) * m + 23) / 24 * 2;
    const long work = order + margin;
    ExactSeries r = ExactSeries::constant(GaussInt(1), 24, work);
    for (const auto& [m, k] : factors) {
        ExactSeries e = eta_series(m, work);
        if (k < 0) e = e.inverse();
        r = series_mul(r, e.pow(static_cast<unsigned>(std::abs(k))));
    }
    if (r.order() < order) throw std::logic_error("eta quotient lost precision");
    return r.truncated(order);
}

std::vector<mpz_class> c_coeffs(long N) {
    if (N < -1) throw std::invalid_argument("N must be at least -1");
    ExactSeries s = eta_quotient({{1, -8}, {2, 8}, {4, -8}}, N + 1);
    std::vector<mpz_class> c;
    for (long n = -1; n <= N; ++n) {
        GaussInt v = s.coeff(24 * n);
        if (!v.is_real()) throw std::logic_error("non-real coefficient in c(n)");
        c.push_back(v.re);
    }
    for (const auto& [e, v] : s.terms())
        if (e % 24 != 0) throw std::logic_error("fractional exponent in c(n) stream");
    return c;
}

// ---------------------------------------------------------------- MultiSeries

MultiSeries::MultiSeries(int den, long order, long cross_slack) : den_(den), order_(order), slack_(cross_slack) {
    if (den <= 0) throw std::invalid_argument("series denominator must be positive");
}

MultiSeries MultiSeries::constant(const GaussInt& c, int den, long order, long cross_slack) {
    MultiSeries s(den, order, cross_slack);
    s.add_term({0, 0, 0}, c);
    return s;
}

GaussInt MultiSeries::coeff(const Key& k) const {
    if (k[0] + k[2] >= cap()) throw std::out_of_range("coefficient beyond truncation order");
    auto it = terms_.find(k);
    return it == terms_.end() ? GaussInt{} : it->second;
}

void MultiSeries::add_term(const Key& k, const GaussInt& c) {
    if (k[0] + k[2] >= cap() || c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

long MultiSeries::total_valuation() const {
    long v = cap();
    for (const auto& [k, c] : terms_) v = std::min(v, k[0] + k[2]);
    return v;
}

bool MultiSeries::within_cross_bound() const {
    for (const auto& [k, c] : terms_)
        if (k[0] < 0 || k[2] < 0 || std::abs(k[1]) > k[0] + k[2] + slack_) return false;
    return true;
}

bool MultiSeries::all_real() const {
    for (const auto& [k, c] : terms_)
        if (!c.is_real()) return false;
    return true;
}

MultiSeries MultiSeries::truncated(long order) const {
    MultiSeries r(den_, std::min(order, order_), slack_);
    for (const auto& [k, c] : terms_)
        if (k[0] + k[2] < r.cap()) r.terms_.emplace(k, c);
    return r;
}

MultiSeries MultiSeries::rescaled(int den) const {
    if (den % den_ == 0) {
        const long f = den / den_;
        MultiSeries r(den, order_, slack_ * f);
        for (const auto& [k, c] : terms_) r.terms_.emplace(Key{k[0] * f, k[1] * f, k[2] * f}, c);
        return r;
    }
    if (den_ % den == 0) {
        const long f = den_ / den;
        MultiSeries r(den, order_, (slack_ + f - 1) / f);
        for (const auto& [k, c] : terms_) {
            if (k[0] % f || k[1] % f || k[2] % f)
                throw std::domain_error("exponent not divisible when lowering denominator");
            r.terms_.emplace(Key{k[0] / f, k[1] / f, k[2] / f}, c);
        }
        return r;
    }
    throw std::invalid_argument("incompatible denominators");
}

MultiSeries& MultiSeries::operator+=(const MultiSeries& o) {
    if (o.den_ != den_) throw std::invalid_argument("mismatched denominators");
    order_ = std::min(order_, o.order_);
    slack_ = std::max(slack_, o.slack_);
    for (auto it = terms_.begin(); it != terms_.end();)
        it = (it->first[0] + it->first[2] >= cap()) ? terms_.erase(it) : std::next(it);
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

MultiSeries MultiSeries::operator-() const {
    MultiSeries r(den_, order_, slack_);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

MultiSeries MultiSeries::scaled(const GaussInt& c) const {
    MultiSeries r(den_, order_, slack_);
    if (c.is_zero()) return r;
    for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
    return r;
}

MultiSeries MultiSeries::pow(unsigned k) const {
    MultiSeries result = constant(GaussInt(1), den_, order_, 0);
    MultiSeries base = *this;
    bool first = true;
    while (k) {
        if (k & 1u) {
            result = first ? base : multi_mul(result, base);
            first = false;
        }
        k >>= 1u;
        if (k) base = multi_mul(base, base);
    }
    return result;
}

void MultiSeries::mul_binomial(const Key& x, const GaussInt& c, const mpz_class& k) {
    const long deg = x[0] + x[2];
    if (deg <= 0 || x[0] < 0 || x[2] < 0)
        throw std::invalid_argument("binomial factor needs positive diagonal degree");
    std::map<Key, GaussInt> out;
    mpz_class binom;
    GaussInt cpow(1);
    for (unsigned long j = 0; static_cast<long>(j) * deg < cap(); ++j) {
        mpz_bin_ui(binom.get_mpz_t(), k.get_mpz_t(), j);
        if (binom == 0) break;
        const GaussInt coef = cpow * binom;
        const long sj = static_cast<long>(j);
        for (const auto& [key, v] : terms_) {
            Key nk{key[0] + sj * x[0], key[1] + sj * x[1], key[2] + sj * x[2]};
            if (nk[0] + nk[2] >= cap()) continue;
            auto [it, fresh] = out.try_emplace(nk, v * coef);
            if (!fresh) it->second += v * coef;
        }
        cpow *= c;
    }
    terms_.clear();
    for (auto& [key, v] : out)
        if (!v.is_zero()) terms_.emplace(key, std::move(v));
}

MultiSeries MultiSeries::diagonal() const {
    MultiSeries r(den_, order_, 0);
    for (const auto& [k, c] : terms_) r.add_term({k[0], 0, k[2]}, c);
    return r;
}

nlohmann::json MultiSeries::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [k, c] : terms_) terms.push_back({k[0], k[1], k[2], big_to_json(c.re), big_to_json(c.im)});
    return {{"den", den_}, {"order", order_}, {"cross_slack", slack_}, {"terms", terms}};
}

MultiSeries multi_mul(const MultiSeries& a, const MultiSeries& b) {
    if (a.den() != b.den()) throw std::invalid_argument("mismatched denominators");
    const long va = a.total_valuation();
    const long vb = b.total_valuation();
    const int den = a.den();
    const long order = std::min(a.order() + floor_div(vb, den), b.order() + floor_div(va, den));
    MultiSeries r(den, order, a.cross_slack() + b.cross_slack());
    const long cap = r.cap();
    std::map<MultiSeries::Key, GaussInt> acc;
    for (const auto& [ka, ca] : a.terms()) {
        const long da = ka[0] + ka[2];
        if (da + vb >= cap) continue;
        for (const auto& [kb, cb] : b.terms()) {
            if (da + kb[0] + kb[2] >= cap) continue;
            MultiSeries::Key k{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]};
            auto [it, fresh] = acc.try_emplace(k, ca * cb);
            if (!fresh) it->second += ca * cb;
        }
    }
    for (const auto& [k, c] : acc) r.add_term(k, c);
    return r;
}

bool operator==(const MultiSeries& a, const MultiSeries& b) {
    return a.den() == b.den() && a.order() == b.order() && a.terms() == b.terms();
}

MultiSeries outer_product(const ExactSeries& f, const ExactSeries& g) {
    if (f.den() != g.den()) throw std::invalid_argument("mismatched denominators");
    const long vf = std::max(0L, f.valuation());
    const long vg = std::max(0L, g.valuation());
    const long order = std::min(f.order() + vg / f.den(), g.order() + vf / f.den());
    MultiSeries r(f.den(), order, 0);
    for (const auto& [ef, cf] : f.terms())
        for (const auto& [eg, cg] : g.terms()) r.add_term({ef, 0, eg}, cf * cg);
    return r;
}

}  // namespace bphi
