#pragma once

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace bphi {

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>;

IMat identity_matrix(int n);
IMat transpose(const IMat& a);
IMat mat_mul(const IMat& a, const IMat& b);
IVec mat_vec(const IMat& a, const IVec& x);
long long dot(const IVec& a, const IVec& b);
IVec add(const IVec& a, const IVec& b);
IVec sub(const IVec& a, const IVec& b);
IVec scale(const IVec& a, long long s);
long long height(const IVec& v);
bool is_zero(const IVec& v);
long long content(const IVec& v);
// first nonzero coordinate positive
IVec canonical_sign(const IVec& v);

// Elementary divisors (Smith normal form diagonal) of an integer matrix given by rows.
std::vector<mpz_class> elementary_divisors(const IMat& rows);
// Do the rows span a direct summand of Z^n?
bool spans_primitive(const IMat& rows);

// Integer solutions of A x = r: a particular solution and a kernel basis.
struct IntSolution {
    IVec particular;
    IMat kernel;  // basis vectors of {x : A x = 0}
};
std::optional<IntSolution> solve_integer(const IMat& A, const IVec& r);
IMat integer_kernel(const IMat& A);

// Basis of the Z-span of generators (rows); basis[j] = sum_i coeffs[j][i] * gens[i].
struct GeneratedBasis {
    IMat basis;
    IMat coeffs;
};
GeneratedBasis basis_from_generators(const IMat& gens);

// LLL reduction of the columns-as-rows basis under a positive definite Gram.
// Returns the reduced basis (rows) expressed in the ambient coordinates.
IMat lll_reduce(const IMat& basis, const IMat& gram_positive);

class IntegralLattice {
public:
    IntegralLattice() = default;
    IntegralLattice(IMat gram, std::string name = "");

    int rank() const { return static_cast<int>(gram_.size()); }
    const IMat& gram() const { return gram_; }
    const std::string& name() const { return name_; }
    long long inner(const IVec& x, const IVec& y) const;
    long long norm(const IVec& x) const { return inner(x, x); }
    bool is_even() const;
    std::pair<int, int> signature() const;
    mpz_class determinant() const;
    bool is_negative_definite() const;
    IVec basis_vector(int i) const;

    nlohmann::json to_json() const;

private:
    IMat gram_;
    std::string name_;
};

IntegralLattice lattice_U(long long k);
IntegralLattice lattice_E8();
IntegralLattice lattice_E8_2();
IntegralLattice direct_sum(const std::vector<IntegralLattice>& parts, const std::string& name = "");
// Lambda = U(2) + U + E8(2); coordinates: 0,1 = e2,f2 ; 2,3 = e1,f1 ; 4..11 = E8(2)
IntegralLattice lattice_Lambda();
// M_l = U(2/l) + E8(2): coordinates 0,1 = e,f ; 2..9 = E8(2)
IntegralLattice lattice_M(int level);
IntegralLattice lattice_by_name(const std::string& name);

// Coordinates of the named isotropic vectors of Lambda.
IVec lambda_e(int level);
IVec lambda_f(int level);
// Projection Lambda -> M_l (drops the U(l) pair belonging to level l's cusp)
IVec project_to_M(const IVec& lambda_vec, int level);
IVec lift_from_M(const IVec& m_vec, int level);

struct ConeReference {
    IntegralLattice lattice;
    IVec reference;  // vector of positive norm selecting the component
    bool in_closed_cone(const IVec& x) const;
    bool in_open_cone(const IVec& x) const;
};
// The component whose closure contains the e/f pair of M_l
ConeReference cone_of_M(int level);

// All v != 0 with |<v,v>| <= bound for a definite lattice, one of each +-v pair,
// canonical sign, ordered by (|norm|, coordinates).
std::vector<IVec> short_vectors(const IntegralLattice& L, long long bound);

// Enumerate t in Z^k with t^T P t + 2 b^T t + c <= bound (P positive definite).
void enumerate_quadratic(const IMat& P, const IVec& b, long long c, long long bound,
                         const std::function<void(const IVec&)>& visit);

int level_of_isotropic(const IntegralLattice& L, const IVec& v);

// Orthogonal complement of the given vectors, as a basis (rows, ambient coordinates)
// reduced under the negated Gram when definite.
IMat orthogonal_complement(const IntegralLattice& L, const IMat& vectors);
IntegralLattice sublattice(const IntegralLattice& L, const IMat& basis, const std::string& name = "");

// Slices {lambda : <lambda,B> = m, <lambda,D> = n, lambda^2 >= minNorm} of a Lorentzian lattice.
class SliceEnumerator {
public:
    SliceEnumerator(const IntegralLattice& M, const IVec& B, const IVec& D);
    void for_each(long long m, long long n, long long min_norm, const std::function<void(const IVec&)>& visit) const;
    std::vector<IVec> slice(long long m, long long n, long long min_norm) const;
    const IMat& kernel() const { return kernel_; }

private:
    IntegralLattice M_;
    IVec B_, D_;
    IMat constraint_;
    IMat kernel_;
    IMat kernel_gram_neg_;
};

std::vector<IVec> slice_vectors(const IntegralLattice& M, const IVec& B, const IVec& D, long long m, long long n,
                                long long min_norm);

}  // namespace bphi
