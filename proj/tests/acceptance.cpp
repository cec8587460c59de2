// Runs every acceptance criterion once and prints one line per criterion.
// Thresholds are pinned here rather than read from config/ so that editing the
// shipped file cannot loosen them.

#include <cstdio>
#include <iostream>

#include "bphi/verify.hpp"

using namespace bphi;

int main() {
    VerifyOptions opt;
    opt.tol = Tolerances::from_json({{"defaults",
                                      {{"eta_modularity", 1e-10},
                                       {"level_relation", 1e-6},
                                       {"level_cutoff", 30},
                                       {"theta_numeric", 1e-10},
                                       {"minor_numeric", 1e-10},
                                       {"norm_identity", 1e-6},
                                       {"monte_carlo_rel", 5e-3},
                                       {"monte_carlo_samples", 4000},
                                       {"runtime_boundary", 1},
                                       {"runtime_level_relation", 30},
                                       {"runtime_resultant", 10},
                                       {"runtime_expansion", 300},
                                       {"runtime_norm_identity", 120},
                                       {"order_product", 10},
                                       {"order_jacobian", 6}}}});
    const auto results = run_checks({"all"}, opt);
    int failed = 0;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d %-20s %s (residual %.3g, tolerance %.3g, %.2fs)\n", r.pass ? "PASS" : "FAIL",
                    r.criterion, r.id.c_str(), r.summary.c_str(), r.residual, r.tolerance, r.runtime);
        failed += !r.pass;
    }
    std::printf("%d/%zu criteria passed\n", int(results.size()) - failed, results.size());
    return failed == 0 ? 0 : 1;
}
