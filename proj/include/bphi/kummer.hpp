#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bphi/embed.hpp"
#include "bphi/phi.hpp"
#include "bphi/resultant.hpp"
#include "bphi/theta.hpp"

namespace bphi {

// A partition {J, J^c} of {1..6} into two triples, stored with 1 in J.
struct Partition {
    std::array<int, 3> J{1, 2, 3};
    std::array<int, 3> Jc{4, 5, 6};

    static Partition from_indices(std::array<int, 3> j);
    static Partition parse(const std::string& s);  // "135/246" or "246/135"
    std::string label() const;
    bool degenerate() const { return J == std::array<int, 3>{1, 2, 3}; }
    bool operator==(const Partition&) const = default;
};
std::vector<Partition> all_partitions();         // the 10 partitions
std::vector<Partition> admissible_partitions();  // the 9 without 123/456

// Polynomials in (l1, l2) with rational coefficients.
class BiPoly {
public:
    using Mono = std::pair<int, int>;
    BiPoly() = default;
    BiPoly(const mpq_class& c);
    static BiPoly l1();
    static BiPoly l2();

    BiPoly operator+(const BiPoly& o) const;
    BiPoly operator-(const BiPoly& o) const;
    BiPoly operator*(const BiPoly& o) const;
    BiPoly operator-() const;
    bool operator==(const BiPoly& o) const { return terms_ == o.terms_; }
    bool is_zero() const { return terms_.empty(); }
    mpq_class eval(const mpq_class& a, const mpq_class& b) const;
    cplx eval(cplx a, cplx b) const;
    std::string to_string() const;
    const std::map<Mono, mpq_class>& terms() const { return terms_; }

private:
    void add_term(const Mono& m, const mpq_class& c);
    std::map<Mono, mpq_class> terms_;
};
// Parses table entries such as "1", "l1^2", "(l2-1)^2", "l1^2 (l2-1)^2".
BiPoly parse_bipoly(const std::string& s);

using PolyMat = std::array<std::array<BiPoly, 6>, 3>;
// Rows: the three quadrics; columns: x0, x1, x2, y0, y1, y2.
PolyMat m_matrix();
std::array<std::array<mpq_class, 6>, 3> m_matrix(const mpq_class& l1, const mpq_class& l2);
std::array<std::array<cplx, 6>, 3> m_matrix(cplx l1, cplx l2);

// Delta_{ijk} with 1-based column indices
BiPoly minor(const PolyMat& m, int i, int j, int k);
// all 20 maximal minors keyed by "ijk"
std::map<std::string, BiPoly> all_minors();
BiPoly partition_minor(const Partition& p);  // Delta_J * Delta_{J^c}

struct MinorRowCheck {
    Partition partition;
    BiPoly delta_sq;
    BiPoly table;
    bool symbolic_ok = false;
    double numeric_residual = 0;  // worst over the sampled tau pairs, against theta quotients
};
// symbolic comparison plus numerical comparison at the given (tau1, tau2)
std::vector<MinorRowCheck> check_minor_table(const std::vector<std::pair<cplx, cplx>>& taus);

struct ProductPoint {
    cplx tau1, tau2;
    cplx lambda1() const;
    cplx lambda2() const;
    bool valid() const;
};

// The two diagonal triples in the J- and J^c-variables.
std::pair<QuadricTriple, QuadricTriple> quadric_split(const Partition& p, const mpq_class& l1, const mpq_class& l2);
std::pair<CQuadricTriple, CQuadricTriple> quadric_split(const Partition& p, cplx l1, cplx l2);

struct PeriodQuantities {
    cplx pullback_const;    // f^* omega = c dz1 ^ dz2
    cplx gamma34_integral;  // integral over beta1 x beta2 of f^* omega
    double integral_x = 0;  // |int_X omega ^ conj omega|, closed form
    nlohmann::json to_json() const;
};
PeriodQuantities period_quantities(const ProductPoint& p);

struct MonteCarloEstimate {
    double integral_x = 0;
    double std_error = 0;
    long samples = 0;
    double max_model_residual = 0;  // worst |quadric| at sampled image points (relative)
    nlohmann::json to_json() const;
};
// Quadrature of |f^* omega|^2 over the torus (2Z + 2 tau1 Z) x (2Z + 2 tau2 Z), divided by `degree`.
MonteCarloEstimate monte_carlo_integral(const ProductPoint& p, long samples, uint64_t seed, int degree = 2);

// Point of X in P^5 (x0 = 1) from torus coordinates.
std::array<cplx, 6> uniformize(const ProductPoint& p, cplx z1, cplx z2);
// Number of maps (z1,z2) -> (s1 z1 + h1, s2 z2 + h2), s = +-1, h half periods, fixing f at the point.
int uniformization_degree(const ProductPoint& p, cplx z1, cplx z2, double tol = 1e-8);

struct NormIdentityReport {
    Partition partition;
    int eps = 0, delta = 0;
    cplx delta_sq;       // Delta_<J>^2 at the point
    cplx resultant_product;  // R(A) R(B)
    double lhs = 0;      // ||Phi||^2 = (y1 y2)^4 |theta_eps theta_delta|^16
    double rhs = 0;      // |R(A)R(B)| (2 pi^-4 integralX)^4
    double residual = 0;
    nlohmann::json to_json() const;
};
NormIdentityReport norm_identity_check(const ProductPoint& p, const Partition& part);

struct Theta8Report {
    std::string kind;
    int level = 1;
    long order = 0;
    PeriodCoeffs coeffs;
    std::vector<std::string> matches;  // labels with sign, e.g. "+00/10"
    std::string matched;               // the unique match, empty otherwise
    int sign = 0;
    std::string partition;             // partition the tables attach to the match
    bool integral = false;
    long valuation = -1;               // total degree of the lowest term
    mpz_class constant_term;
    double seconds = 0;
    bool ok() const { return matches.size() == 1; }
    nlohmann::json to_json() const;
};
// product sources are compared with theta_eps(tau1)^8 theta_delta(tau2)^8, jacobian ones with theta_{a,b}(T)^8
Theta8Report theta8_restriction_check(const PinnedEmbedding& emb, long order, const ExpansionOptions& opt = {});

// genus-1 label for the diagonal entry (a,b) of a characteristic: 3, 2, 0, or -1 for the odd one
int genus1_index(int a, int b);

}  // namespace bphi
