#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "bphi/embed.hpp"
#include "bphi/qseries.hpp"
#include "bphi/theta.hpp"

namespace bphi {

using CVec = std::vector<cplx>;

// prod ((1-q^n)/(1+q^n))^8, den 1
ExactSeries phi1_boundary(long order);
// eta(tau/2)^16 / eta(tau)^8 rewritten in q = e^{pi i tau}
ExactSeries phi1_boundary_eta(long order);
// 2^8 q^2 prod (1-q^{2n})^{8(-1)^n}, den 1
ExactSeries phi2_boundary(long order);
// 2^8 eta(2 sigma)^16 / eta(sigma)^8 rewritten in q = e^{pi i sigma}
ExactSeries phi2_boundary_eta(long order);

class ChamberError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExpansionOptions {
    // maximal number of lattice vectors visited; 0 reads BPHI_ENUM_BUDGET (default 2e8)
    long long budget = 0;
};

struct RestrictedExpansion {
    int level = 1;
    PeriodCoeffs coeffs;
    long order = 0;
    MultiSeries series{2, 1};
    bool zero_by_mirror = false;
    long long vectors_visited = 0;
    std::vector<IVec> constant_roots;  // (0,0)-slice roots, sign chosen on the W0 side
    bool integral = false;             // every coefficient a rational integer

    nlohmann::json to_json() const;
};

RestrictedExpansion restricted_expansion(const PeriodCoeffs& pc, long order, const ExpansionOptions& opt = {});

// point of the family: (A + T11 B + T12 C + T22 D)/2 in M_level (x) C
CVec family_point(const PeriodCoeffs& pc, const CMat2& T);
// numerical value of a u-series (u_mn = e^{pi i T_mn / 2} scaled by den)
cplx evaluate_series(const MultiSeries& s, const CMat2& T);
cplx evaluate_series(const ExactSeries& s, cplx tau);

struct TubePoint {
    int level = 1;
    CVec z;  // coordinates in M_level

    std::vector<double> imag() const;
    nlohmann::json to_json() const;
    static TubePoint from_json(const nlohmann::json& j);
};

// Im z has positive norm and lies in the component containing e+f
bool in_tube(const TubePoint& p);
cplx pairing(int level, const CVec& x, const CVec& y);

struct NumericValue {
    cplx value;
    cplx log_value;
    double tail_bound = 0;      // heuristic bound on |log| of the omitted factors
    double largest_factor = 0;  // max |q_lambda| among retained factors
    long long factors = 0;
    nlohmann::json to_json() const;
};

// cutoff bounds -log|q_lambda| of the retained factors
NumericValue eval_numeric(const TubePoint& p, double cutoff);

// w(z) for the level-1 point z
TubePoint level_transform(const TubePoint& z);
// iota_l(u) in Lambda (x) C
CVec iota(const TubePoint& p);
cplx lambda_pairing(const CVec& x, const CVec& y);
// <Im z, Im z>^4 |Phi|^2
double petersson_sq(const TubePoint& p, cplx value);

}  // namespace bphi
