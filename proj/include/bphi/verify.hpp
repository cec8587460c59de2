#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bphi/embed.hpp"
#include "bphi/phi.hpp"
#include "bphi/tolerances.hpp"
#include "json.hpp"

namespace bphi {

struct CheckResult {
    std::string id;
    int criterion = 0;
    bool pass = false;
    double residual = 0;
    double tolerance = 0;
    double runtime = 0;  // seconds
    std::string summary;
    nlohmann::json artifacts = nlohmann::json::object();

    // runtime is omitted unless requested, keeping reports reproducible
    nlohmann::json to_json(bool with_runtime = false) const;
};

struct VerifyOptions {
    Tolerances tol = Tolerances::defaults();
    uint64_t seed = 20240601;
    int jobs = 0;  // 0: one thread per check
};

struct VerificationCheck {
    std::string id;
    int criterion;
    std::string description;
    std::function<CheckResult(const VerifyOptions&)> run;
};

const std::vector<VerificationCheck>& check_registry();
const VerificationCheck& find_check(const std::string& id);
// runs the named checks ("all" expands to every check); results follow registry order
std::vector<CheckResult> run_checks(const std::vector<std::string>& ids, const VerifyOptions& opt);
nlohmann::json report_json(const std::vector<CheckResult>& results, bool with_runtime = false);

// Memoized embedding search with default options (thread safe).
const SearchResult& cached_search(const std::string& kind, int level);

// Level-2 family with B, D orthogonal to a root of trivial phase.
struct MirrorFamily {
    PeriodCoeffs coeffs;
    IVec root;
};
MirrorFamily mirror_family();

}  // namespace bphi
