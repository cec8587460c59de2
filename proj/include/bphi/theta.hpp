#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "bphi/qseries.hpp"

namespace bphi {

using cplx = std::complex<double>;
using CMat2 = std::array<std::array<cplx, 2>, 2>;

// Genus-1 theta constants theta_0, theta_2, theta_3 (series in q = e^{pi i tau}, den 4).
enum class Theta1 { T0 = 0, T2 = 2, T3 = 3 };

Theta1 theta1_from_int(int k);
ExactSeries theta1_product_series(Theta1 kind, long order);
ExactSeries theta1_sum_series(Theta1 kind, long order);
cplx theta1_value(Theta1 kind, cplx tau);
cplx theta1_product_value(Theta1 kind, cplx tau);
cplx lambda_eval(cplx tau);
// Dedekind eta evaluated numerically
cplx eta_value(cplx tau);

// Half-integral characteristic: a = (a1,a2)/2, b = (b1,b2)/2 with entries in {0,1}.
struct Char2 {
    int a1 = 0, a2 = 0, b1 = 0, b2 = 0;
    int parity() const { return (a1 * b1 + a2 * b2) & 1; }
    bool even() const { return parity() == 0; }
    std::string label() const;
    bool operator==(const Char2&) const = default;
};
std::vector<Char2> even_characteristics();

// theta_{a,b}(T) as a series in q_mn = e^{pi i T_mn} with den 4
MultiSeries theta2_series(const Char2& ch, long order);
// theta_{a,b}(T)^8 with den 2 (u_mn = e^{pi i T_mn / 2})
MultiSeries theta2_pow8(const Char2& ch, long order);
cplx theta2_value(const Char2& ch, const CMat2& T);

// Characteristics over Z[i]/(1+i): each entry 0 or 1 standing for the classes of 0 and i.
struct EvChar {
    int a1 = 0, a2 = 0, b1 = 0, b2 = 0;
    bool valid() const { return ((a1 * b1 + a2 * b2) & 1) == 0; }
    std::string label() const;  // e.g. "i0/0i"
    // the half-integral characteristic that Re(a/(1+i)), Re(b/(1+i)) produce
    Char2 real_part() const { return {a1, a2, b1, b2}; }
    Char2 imag_part() const { return {a1, a2, b1, b2}; }
    bool operator==(const EvChar&) const = default;
};
std::vector<EvChar> ev_classes();
EvChar ev_from_label(const std::string& label);

cplx freitag_theta(const EvChar& ev, const CMat2& Omega);
double freitag_petersson_sq(const EvChar& ev, const CMat2& Omega);
bool in_domain_D(const CMat2& Omega);

// Fixed correspondence tables.
struct TableRow {
    std::string partition;  // "135/246"
    std::string label;      // table-specific key
};
struct CorrespondenceTables {
    std::vector<TableRow> ev_to_partition;       // Ev class -> partition
    std::vector<TableRow> char_to_partition;     // half-integral (a over b) -> partition
    std::vector<TableRow> epsdelta_to_partition; // (eps,delta) -> partition
    std::vector<TableRow> minor_table;           // partition -> Delta^2 in lambda form
};
const CorrespondenceTables& correspondence_tables();
nlohmann::json tables_to_json();
// (eps, delta) attached to an admissible partition
std::pair<int, int> epsilon_delta(const std::string& partition);

}  // namespace bphi
