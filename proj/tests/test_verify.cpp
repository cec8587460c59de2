#include <fstream>
#include <set>

#include "bphi/verify.hpp"
#include "doctest.h"

using namespace bphi;

TEST_CASE("registry lists twelve criteria in order") {
    const auto& reg = check_registry();
    REQUIRE(reg.size() == 12);
    std::set<std::string> ids;
    for (size_t i = 0; i < reg.size(); ++i) {
        CHECK(reg[i].criterion == int(i) + 1);
        ids.insert(reg[i].id);
    }
    CHECK(ids.size() == 12);
    CHECK(find_check("minor-table").criterion == 8);
    CHECK_THROWS(find_check("nope"));
}

TEST_CASE("shipped tolerance file equals the built-in defaults") {
    const Tolerances t = Tolerances::load(std::string(BPHI_SOURCE_DIR) + "/config/tolerances.json");
    CHECK(t.base() == Tolerances::defaults().base());
}

TEST_CASE("per-check overrides take precedence") {
    const Tolerances t = Tolerances::from_json(
        {{"defaults", {{"level_relation", 1e-6}}}, {"checks", {{"level-relation", {{"level_relation", 1e-3}}}}}});
    CHECK(t.get("level-relation", "level_relation") == 1e-3);
    CHECK(t.get("other", "level_relation") == 1e-6);
    CHECK(t.get("other", "eta_modularity") == Tolerances::defaults().get("other", "eta_modularity"));
}

TEST_CASE("fast checks pass and reports are reproducible") {
    const std::vector<std::string> ids = {"boundary-level1", "c-stream", "eta-modularity", "resultant-axioms",
                                          "theta-identities", "minor-table"};
    VerifyOptions o;
    const auto a = run_checks(ids, o);
    REQUIRE(a.size() == ids.size());
    for (const auto& r : a) CHECK_MESSAGE(r.pass, r.id << ": " << r.summary);
    const auto b = run_checks(ids, o);
    CHECK(report_json(a).dump() == report_json(b).dump());
    CHECK(report_json(a)["status"] == "pass");
    CHECK(report_json(a)["checks"][0]["runtime"].is_null());
}

TEST_CASE("a check held to an impossible tolerance fails") {
    VerifyOptions o;
    o.tol = Tolerances::from_json({{"defaults", {{"eta_modularity", 0.0}}}});
    const auto r = run_checks({"eta-modularity"}, o);
    REQUIRE(r.size() == 1);
    CHECK_FALSE(r[0].pass);
    CHECK(report_json(r)["status"] == "fail");
}
