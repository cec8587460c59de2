// Command-line front end for the bphi library.
//
// Exit codes: 0 success, 1 a requested check failed, 2 usage error, 3 runtime error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bphi/embed.hpp"
#include "bphi/kummer.hpp"
#include "bphi/phi.hpp"
#include "bphi/qseries.hpp"
#include "bphi/resultant.hpp"
#include "bphi/theta.hpp"
#include "bphi/tolerances.hpp"
#include "bphi/verify.hpp"

#ifndef BPHI_DEFAULT_CONFIG
#define BPHI_DEFAULT_CONFIG "config/tolerances.json"
#endif

using namespace bphi;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

void emit(const nlohmann::json& j, const std::string& out) {
    const std::string text = j.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
}

cplx parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw UsageError("complex values are written re,im: " + s);
    try {
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError("bad complex value: " + s);
    }
}

mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw UsageError("bad rational: " + s);
    q.canonicalize();
    return q;
}

PinnedEmbedding first_embedding(const std::string& kind, int level) {
    const SearchResult res = find_embeddings(derive_source_gram(kind), level);
    if (res.embeddings.empty())
        throw std::runtime_error("no embedding of the " + kind + " source at level " + std::to_string(level) +
                                 (res.message.empty() ? "" : ": " + res.message));
    return res.embeddings.front();
}

Theta1 theta_kind(int k) {
    if (k != 0 && k != 2 && k != 3) throw UsageError("theta kind must be 0, 2 or 3");
    return theta1_from_int(k);
}

Char2 parse_char(const std::string& s) {
    if (s.size() != 5 || s[2] != '/') throw UsageError("characteristic is written a1a2/b1b2, e.g. 00/10");
    auto bit = [&](char c) {
        if (c != '0' && c != '1') throw UsageError("characteristic digits are 0 or 1: " + s);
        return c - '0';
    };
    return {bit(s[0]), bit(s[1]), bit(s[3]), bit(s[4])};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Borcherds Phi expansions, theta constants, resultants and Kummer checks"};
    app.require_subcommand(1);
    std::string out;
    app.add_option("-o,--out", out, "write JSON output to this file instead of stdout");

    // phi
    auto* phi = app.add_subcommand("phi", "Phi boundary forms, restricted expansions and numeric values");
    phi->require_subcommand(1);
    int b_level = 1;
    long b_order = 20;
    bool b_eta = false;
    auto* boundary = phi->add_subcommand("boundary", "boundary form at the level-1 or level-2 cusp");
    boundary->add_option("--level", b_level)->check(CLI::IsMember({1, 2}));
    boundary->add_option("--order", b_order)->check(CLI::PositiveNumber);
    boundary->add_flag("--eta", b_eta, "use the eta-quotient form");

    std::string e_coeffs, e_kind = "product";
    int e_level = 2;
    long e_order = 6;
    auto* expand = phi->add_subcommand("expand", "restricted expansion of a Siegel family");
    expand->add_option("--coeffs", e_coeffs, "period coefficients JSON {level,A,B,C?,D}");
    expand->add_option("--kind", e_kind, "source used when --coeffs is absent")->check(CLI::IsMember({"product", "jacobian"}));
    expand->add_option("--level", e_level)->check(CLI::IsMember({1, 2}));
    expand->add_option("--order", e_order)->check(CLI::PositiveNumber);

    std::string v_point;
    double v_cutoff = 30;
    auto* eval = phi->add_subcommand("eval", "numeric value of Phi_l at a tube point");
    eval->add_option("--point", v_point, "tube point JSON {level, z: [[re,im],...]}")->required();
    eval->add_option("--cutoff", v_cutoff, "bound on -log|q| of retained factors")->check(CLI::PositiveNumber);

    // theta
    auto* theta = app.add_subcommand("theta", "theta constants");
    theta->require_subcommand(1);
    int t_kind = 3;
    long t_order = 20;
    auto* genus1 = theta->add_subcommand("genus1", "theta_0, theta_2 or theta_3 as a q-series");
    genus1->add_option("--kind", t_kind)->check(CLI::IsMember({0, 2, 3}));
    genus1->add_option("--order", t_order)->check(CLI::PositiveNumber);
    std::string t_char = "00/00";
    auto* genus2 = theta->add_subcommand("genus2", "theta_{a,b}(T)^8 as a series in exp(pi i T_mn / 2)");
    genus2->add_option("--char", t_char, "characteristic a1a2/b1b2");
    genus2->add_option("--order", t_order)->check(CLI::PositiveNumber);
    theta->add_subcommand("tables", "partition correspondence tables");

    // resultant
    auto* res = app.add_subcommand("resultant", "resultant of three ternary quadrics");
    std::string r_triple;
    bool r_json = false;
    res->add_option("--triple", r_triple, "JSON triple of symmetric 3x3 rational matrices")->required();
    res->add_flag("--json", r_json, "print {num, den} instead of a plain rational");

    // embed
    auto* embed = app.add_subcommand("embed", "lattice embeddings of period sublattices");
    embed->require_subcommand(1);
    std::string s_kind = "product";
    int s_level = 1;
    SearchOptions s_opt;
    auto* search = embed->add_subcommand("search", "search pinned primitive embeddings into Lambda");
    search->add_option("--kind", s_kind)->check(CLI::IsMember({"product", "jacobian"}));
    search->add_option("--level", s_level)->check(CLI::IsMember({1, 2}));
    search->add_option("--height", s_opt.height)->check(CLI::PositiveNumber);
    search->add_option("--max-results", s_opt.max_results)->check(CLI::PositiveNumber);

    // kummer
    auto* kummer = app.add_subcommand("kummer", "product-type Kummer data");
    kummer->require_subcommand(1);
    kummer->add_subcommand("minors", "maximal minors of M(l1,l2) and the Delta^2 table check");
    std::string k_part = "126/345", k_l1 = "2/7", k_l2 = "-3/5";
    auto* split = kummer->add_subcommand("split", "diagonal quadric triples of a partition at rational lambdas");
    split->add_option("--partition", k_part);
    split->add_option("--l1", k_l1);
    split->add_option("--l2", k_l2);
    std::string k_tau1 = "0,1.1", k_tau2 = "0.9,1.3";
    long k_samples = 4000;
    uint64_t k_seed = 20240601;
    auto* periods = kummer->add_subcommand("periods", "period quantities with the Monte-Carlo oracle");
    periods->add_option("--tau1", k_tau1, "re,im");
    periods->add_option("--tau2", k_tau2, "re,im");
    periods->add_option("--samples", k_samples)->check(CLI::PositiveNumber);
    periods->add_option("--seed", k_seed);
    auto* norm = kummer->add_subcommand("norm", "||Phi||^2 against resultants and the period integral");
    norm->add_option("--tau1", k_tau1, "re,im");
    norm->add_option("--tau2", k_tau2, "re,im");
    norm->add_option("--partition", k_part);
    std::string k6_kind = "product";
    int k6_level = 2;
    long k6_order = 10;
    auto* match = kummer->add_subcommand("theta8", "match a restricted expansion against +-theta^8");
    match->add_option("--kind", k6_kind)->check(CLI::IsMember({"product", "jacobian"}));
    match->add_option("--level", k6_level)->check(CLI::IsMember({1, 2}));
    match->add_option("--order", k6_order)->check(CLI::PositiveNumber);

    // verify
    auto* verify = app.add_subcommand("verify", "run verification checks");
    std::vector<std::string> v_ids;
    std::string v_json, v_config = BPHI_DEFAULT_CONFIG;
    uint64_t v_seed = 20240601;
    int v_jobs = 0;
    bool v_timings = false, v_list = false;
    verify->add_option("ids", v_ids, "check ids or 'all'");
    verify->add_option("--json", v_json, "write the report to this file");
    verify->add_option("--config", v_config, "tolerance file");
    verify->add_option("--seed", v_seed);
    verify->add_option("--jobs", v_jobs, "parallel checks (0: all at once)");
    verify->add_flag("--timings", v_timings, "record runtimes in the report");
    verify->add_flag("--list", v_list, "list check ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*boundary) {
            const ExactSeries s = b_level == 1 ? (b_eta ? phi1_boundary_eta(b_order) : phi1_boundary(b_order))
                                               : (b_eta ? phi2_boundary_eta(b_order) : phi2_boundary(b_order));
            emit({{"level", b_level}, {"variable", "q = exp(pi i tau)"}, {"series", s.to_json()}}, out);
        } else if (*expand) {
            PeriodCoeffs pc;
            if (!e_coeffs.empty()) {
                pc = PeriodCoeffs::from_json(read_json(e_coeffs));
            } else {
                PinnedEmbedding emb = first_embedding(e_kind, e_level);
                pc = period_coeffs(emb);
            }
            emit(restricted_expansion(pc, e_order).to_json(), out);
        } else if (*eval) {
            const TubePoint p = TubePoint::from_json(read_json(v_point));
            if (!in_tube(p)) throw UsageError("point is not in the tube domain");
            emit(eval_numeric(p, v_cutoff).to_json(), out);
        } else if (*genus1) {
            emit({{"kind", t_kind}, {"series", theta1_sum_series(theta_kind(t_kind), t_order).to_json()}}, out);
        } else if (*genus2) {
            const Char2 ch = parse_char(t_char);
            if (!ch.even()) throw UsageError("characteristic must be even");
            emit({{"char", ch.label()}, {"series", theta2_pow8(ch, t_order).to_json()}}, out);
        } else if (theta->got_subcommand("tables")) {
            emit(tables_to_json(), out);
        } else if (*res) {
            const QuadricTriple t = triple_from_json(read_json(r_triple));
            if (!is_symmetric(t)) throw UsageError("triple matrices must be symmetric");
            const mpq_class R = macaulay_resultant(t);
            if (r_json) emit(rational_to_json(R), out);
            else std::cout << R.get_str() << "\n";
        } else if (*search) {
            emit(find_embeddings(derive_source_gram(s_kind), s_level, s_opt).to_json(), out);
        } else if (kummer->got_subcommand("minors")) {
            nlohmann::json minors = nlohmann::json::object();
            for (const auto& [k, v] : all_minors()) minors[k] = v.to_string();
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& r : check_minor_table({{cplx(0.1, 1.1), cplx(-0.2, 0.9)}}))
                rows.push_back({{"partition", r.partition.label()},
                                {"deltaSquared", r.delta_sq.to_string()},
                                {"table", r.table.to_string()},
                                {"symbolic", r.symbolic_ok},
                                {"numericResidual", r.numeric_residual}});
            emit({{"minors", minors}, {"table", rows}}, out);
        } else if (*split) {
            const Partition p = Partition::parse(k_part);
            const mpq_class l1 = parse_rational(k_l1), l2 = parse_rational(k_l2);
            const auto [A, B] = quadric_split(p, l1, l2);
            const mpq_class ra = macaulay_resultant(A), rb = macaulay_resultant(B);
            mpq_class d = partition_minor(p).eval(l1, l2);
            d = d * d * d * d;
            emit({{"partition", p.label()},
                  {"A", triple_to_json(A)},
                  {"B", triple_to_json(B)},
                  {"RA", rational_to_json(ra)},
                  {"RB", rational_to_json(rb)},
                  {"deltaFourth", rational_to_json(d)},
                  {"identity", ra * rb == d}},
                 out);
        } else if (*periods) {
            const ProductPoint p{parse_complex(k_tau1), parse_complex(k_tau2)};
            if (!p.valid()) throw UsageError("tau must lie in the upper half plane with nondegenerate lambda");
            emit({{"closedForm", period_quantities(p).to_json()},
                  {"monteCarlo", monte_carlo_integral(p, k_samples, k_seed).to_json()},
                  {"degree", uniformization_degree(p, cplx(0.31, 0.17), cplx(-0.22, 0.41))}},
                 out);
        } else if (*norm) {
            const ProductPoint p{parse_complex(k_tau1), parse_complex(k_tau2)};
            if (!p.valid()) throw UsageError("tau must lie in the upper half plane with nondegenerate lambda");
            emit(norm_identity_check(p, Partition::parse(k_part)).to_json(), out);
        } else if (*match) {
            const Theta8Report rep = theta8_restriction_check(first_embedding(k6_kind, k6_level), k6_order);
            emit(rep.to_json(), out);
            return rep.ok() ? 0 : kExitCheckFailed;
        } else if (*verify) {
            if (v_list) {
                for (const auto& c : check_registry())
                    std::cout << c.criterion << "\t" << c.id << "\t" << c.description << "\n";
                return 0;
            }
            if (v_ids.empty()) throw UsageError("verify needs 'all' or at least one check id (see --list)");
            VerifyOptions opt;
            opt.tol = Tolerances::load(v_config);
            opt.seed = v_seed;
            opt.jobs = v_jobs;
            for (const auto& id : v_ids)
                if (id != "all") find_check(id);
            const auto results = run_checks(v_ids, opt);
            bool all = true;
            for (const auto& r : results) {
                all = all && r.pass;
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << ": " << r.summary << "\n";
            }
            const nlohmann::json rep = report_json(results, v_timings);
            if (!v_json.empty()) emit(rep, v_json);
            else if (!out.empty()) emit(rep, out);
            return all ? 0 : kExitCheckFailed;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
