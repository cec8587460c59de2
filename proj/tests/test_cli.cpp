#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "bphi/qseries.hpp"
#include "bphi/resultant.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bphi;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(BPHI_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("bphi_test_" + name)).string();
}

}  // namespace

TEST_CASE("resultant of the unit triple prints 1") {
    const std::string path = temp_path("unit.json");
    std::ofstream(path) << triple_to_json(unit_triple()).dump();
    const Run r = run("resultant --triple " + path);
    CHECK(r.code == 0);
    CHECK(r.out == "1\n");
    std::filesystem::remove(path);
}

TEST_CASE("level-2 boundary series starts with 256 q^2") {
    const Run r = run("phi boundary --level 2 --order 20");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const ExactSeries s = ExactSeries::from_json(j.at("series"));
    CHECK(s.coeff(2) == GaussInt(256));
    CHECK(s.valuation() == 2);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("phi boundary --level 3").code == 2);
    CHECK(run("verify no-such-check").code == 2);
    CHECK(run("resultant --triple /nonexistent/file.json").code == 2);
    CHECK(run("").code == 2);
}

TEST_CASE("verify runs a single check and exits 0") {
    const Run r = run("verify mirror-vanishing");
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS mirror-vanishing") != std::string::npos);
}

TEST_CASE("repeated runs produce identical output") {
    const std::string a = temp_path("a.json"), b = temp_path("b.json");
    CHECK(run("verify c-stream resultant-axioms --json " + a).code == 0);
    CHECK(run("verify c-stream resultant-axioms --json " + b).code == 0);
    std::ifstream fa(a), fb(b);
    const std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
    CHECK_FALSE(sa.empty());
    CHECK(sa == sb);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}
