#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace bphi {

struct GaussInt {
    mpz_class re;
    mpz_class im;

    GaussInt() = default;
    GaussInt(long r) : re(r), im(0) {}
    GaussInt(long r, long i) : re(r), im(i) {}
    GaussInt(mpz_class r, mpz_class i) : re(std::move(r)), im(std::move(i)) {}

    // i^k for any integer k
    static GaussInt unit(long k);

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    GaussInt conj() const { return {re, -im}; }
    mpz_class norm() const { return re * re + im * im; }

    GaussInt& operator+=(const GaussInt& o);
    GaussInt& operator-=(const GaussInt& o);
    GaussInt& operator*=(const GaussInt& o);
    GaussInt operator-() const { return {-re, -im}; }
};

GaussInt operator+(GaussInt a, const GaussInt& b);
GaussInt operator-(GaussInt a, const GaussInt& b);
GaussInt operator*(const GaussInt& a, const GaussInt& b);
GaussInt operator*(const GaussInt& a, const mpz_class& s);
bool operator==(const GaussInt& a, const GaussInt& b);
inline bool operator!=(const GaussInt& a, const GaussInt& b) { return !(a == b); }
std::string to_string(const GaussInt& z);

// Truncated Laurent/Puiseux series in q. A stored exponent e stands for q^(e/den);
// every coefficient with e >= order*den is unknown and never stored.
class ExactSeries {
public:
    ExactSeries(int den, long order);

    static ExactSeries constant(const GaussInt& c, int den, long order);
    static ExactSeries monomial(const GaussInt& c, long e, int den, long order);

    int den() const { return den_; }
    long order() const { return order_; }
    long cap() const { return order_ * den_; }
    const std::map<long, GaussInt>& terms() const { return terms_; }

    GaussInt coeff(long e) const;
    void add_term(long e, const GaussInt& c);
    // lowest exponent with a nonzero coefficient; cap() when the series is zero
    long valuation() const;
    bool is_zero() const { return terms_.empty(); }

    ExactSeries truncated(long order) const;
    // re-express over a multiple of the current denominator
    ExactSeries rescaled(int den) const;
    // substitute q -> q^k
    ExactSeries substitute_power(int k) const;

    ExactSeries& operator+=(const ExactSeries& o);
    ExactSeries& operator-=(const ExactSeries& o);
    ExactSeries operator-() const;
    ExactSeries scaled(const GaussInt& c) const;
    ExactSeries pow(unsigned k) const;
    // requires a unit leading coefficient
    ExactSeries inverse() const;

    nlohmann::json to_json() const;
    static ExactSeries from_json(const nlohmann::json& j);

private:
    int den_;
    long order_;
    std::map<long, GaussInt> terms_;
};

ExactSeries operator+(ExactSeries a, const ExactSeries& b);
ExactSeries operator-(ExactSeries a, const ExactSeries& b);
ExactSeries series_mul(const ExactSeries& a, const ExactSeries& b);
inline ExactSeries operator*(const ExactSeries& a, const ExactSeries& b) { return series_mul(a, b); }
bool operator==(const ExactSeries& a, const ExactSeries& b);

// (1 + sign*q^m)^k, den 1, exact binomial series for either sign of k
ExactSeries factor_power(int m, int sign, const mpz_class& k, long order);
// eta(m*tau) with den 24
ExactSeries eta_series(int m, long order);
// prod eta(m*tau)^k over the given pairs, den 24
ExactSeries eta_quotient(const std::vector<std::pair<int, int>>& factors, long order);
// c(-1), ..., c(N) from eta(tau)^-8 eta(2tau)^8 eta(4tau)^-8
std::vector<mpz_class> c_coeffs(long N);

// Truncated series in three variables q11, q12, q22 (exponents over den).
// Truncation applies to e11 + e22; the cross exponent obeys |e12| <= e11 + e22 + cross_slack.
class MultiSeries {
public:
    using Key = std::array<long, 3>;

    MultiSeries(int den, long order, long cross_slack = 0);

    static MultiSeries constant(const GaussInt& c, int den, long order, long cross_slack = 0);

    int den() const { return den_; }
    long order() const { return order_; }
    long cap() const { return order_ * den_; }
    long cross_slack() const { return slack_; }
    const std::map<Key, GaussInt>& terms() const { return terms_; }

    GaussInt coeff(const Key& k) const;
    void add_term(const Key& k, const GaussInt& c);
    bool is_zero() const { return terms_.empty(); }
    // minimum of e11 + e22 over the stored terms; cap() when zero
    long total_valuation() const;
    bool within_cross_bound() const;
    bool all_real() const;

    MultiSeries truncated(long order) const;
    MultiSeries rescaled(int den) const;
    MultiSeries& operator+=(const MultiSeries& o);
    MultiSeries operator-() const;
    MultiSeries scaled(const GaussInt& c) const;
    MultiSeries pow(unsigned k) const;
    // multiply in place by (1 + c*x)^k where x is the monomial with exponent key
    void mul_binomial(const Key& x, const GaussInt& c, const mpz_class& k);
    // set e12 to zero by summing over it
    MultiSeries diagonal() const;

    nlohmann::json to_json() const;

private:
    int den_;
    long order_;
    long slack_;
    std::map<Key, GaussInt> terms_;
};

MultiSeries multi_mul(const MultiSeries& a, const MultiSeries& b);
inline MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) { return multi_mul(a, b); }
bool operator==(const MultiSeries& a, const MultiSeries& b);
// product f(q11) g(q22) of two one-variable series
MultiSeries outer_product(const ExactSeries& f, const ExactSeries& g);

}  // namespace bphi
