#include "eqih/cli.hpp"
#include "eqih/model_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace eqih;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

Run run(const std::vector<std::string>& args, const std::string& input = {}) {
    std::istringstream in(input);
    std::ostringstream out, err;
    Run r;
    r.code = cli::run(args, in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string fixture(const std::string& name) { return run({"fixture", name}).out; }

std::string temp_file(const std::string& name, const std::string& contents) {
    const std::string path = std::string(P_tmpdir) + "/eqih_test_" + name;
    std::ofstream(path) << contents;
    return path;
}

}  // namespace

TEST_CASE("fixture piped into cohomology") {
    const Run r = run({"cohomology", "-", "-p", ""}, fixture("HOPF"));
    REQUIRE(r.code == cli::kExitPass);
    const Json j = r.json();
    CHECK(j["schema"] == "eqih-report/1");
    CHECK(j["results"]["ih_base"] == Json::array({1, 0, 1}));
    CHECK(j["results"]["ih_total"] == Json::array({1, 0, 0, 1}));
}

TEST_CASE("localize on ROT gives zero ranks") {
    const Run r = run({"localize", "-", "-p", ""}, fixture("ROT"));
    REQUIRE(r.code == cli::kExitPass);
    CHECK(r.json()["results"]["localized"] == Json{{"even", 0}, {"odd", 0}});
}

TEST_CASE("cone check through the command line") {
    const Run r = run({"localize", "-", "-p", "apex=2", "--cone-check"}, fixture("CONE2"));
    REQUIRE(r.code == cli::kExitPass);
    CHECK(r.json()["results"]["cone"]["computed"] == Json{{"even", 1}, {"odd", 0}});
    CHECK(run({"localize", "-", "-p", "", "--cone-check"}, fixture("HOPF")).code == cli::kExitInputError);
}

TEST_CASE("input errors exit with 2") {
    CHECK(run({"validate", "-"}, "{\"name\": ").code == cli::kExitInputError);
    CHECK(run({"validate", "-"}, "[1, 2]").code == cli::kExitInputError);
    CHECK(run({"validate", "/nonexistent/model.json"}).code == cli::kExitInputError);
    CHECK(run({"cohomology", "-", "-p", ""}, fixture("CONE2")).code == cli::kExitInputError);
    CHECK(run({"cohomology", "-", "-p", "apex=x"}, fixture("CONE2")).code == cli::kExitInputError);
    CHECK(run({"cohomology", "-"}, fixture("HOPF")).code == cli::kExitInputError);
    CHECK(run({"fixture", "SPHERE"}).code == cli::kExitInputError);
    CHECK(run({"frobnicate"}).code == cli::kExitInputError);
    CHECK(run({"equivariant", "-", "-p", "", "--nu", "1"}, fixture("HOPF")).code == cli::kExitInputError);
    CHECK(run({"localize", "-", "-p", "apex=2", "--nu", "3"}, fixture("CONE2")).code == cli::kExitInputError);
}

TEST_CASE("syntax errors carry a line number") {
    const Run r = run({"validate", "-"}, "{\n  \"name\": \"x\",\n  oops\n}");
    CHECK(r.code == cli::kExitInputError);
    CHECK(r.json()["error"].get<std::string>().find("line 3") != std::string::npos);
}

TEST_CASE("validation failures are violations with counterexamples") {
    Json doc = Json::parse(fixture("CONE2"));
    doc["filtrations"]["apex"]["2"][2] = Json::array();  // top level no longer everything
    const Run r = run({"validate", "-"}, doc.dump());
    CHECK(r.code == cli::kExitViolation);
    const Json report = r.json();
    bool failed = false;
    for (const auto& c : report["checks"]) failed = failed || !c["passed"].get<bool>();
    CHECK(failed);
}

TEST_CASE("help exits cleanly") {
    const Run r = run({"--help"});
    CHECK(r.code == cli::kExitPass);
    CHECK(r.out.find("selftest") != std::string::npos);
}

TEST_CASE("reports are byte-for-byte deterministic") {
    const std::string cone = fixture("CONE2");
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"gysin", "-", "-p", "apex=1"},
             {"spectral", "-", "-p", "apex=2", "--d3-check"},
             {"equivariant", "-", "-p", "apex=0", "--nu", "7"},
             {"skjelbred", "-"},
             {"localize", "-", "-p", "apex=3", "--cone-check", "--human"}}) {
        const Run a = run(args, cone), b = run(args, cone);
        CHECK(a.code == cli::kExitPass);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("compare reads an isomorphism file") {
    const std::string hopf = temp_file("hopf.json", fixture("HOPF"));
    const std::string rot = temp_file("rot.json", fixture("ROT"));
    const std::string iso = temp_file("iso.json", R"({"f": [[["1"]], [], [["1"]]], "strata": {}})");

    Run r = run({"compare", hopf, hopf, "--iso", iso});
    REQUIRE(r.code == cli::kExitPass);
    CHECK(r.json()["results"]["related"] == true);
    CHECK(r.json()["results"]["consequences"].size() > 0);

    r = run({"compare", hopf, rot, "--iso", iso});
    REQUIRE(r.code == cli::kExitPass);
    CHECK(r.json()["results"]["related"] == false);

    const std::string singular = temp_file("singular.json", R"({"f": [[["0"]], [], [["1"]]], "strata": {}})");
    CHECK(run({"compare", hopf, hopf, "--iso", singular}).code == cli::kExitInputError);
    std::remove(hopf.c_str());
    std::remove(rot.c_str());
    std::remove(iso.c_str());
    std::remove(singular.c_str());
}

TEST_CASE("fixture output loads back") {
    const std::string path = std::string(P_tmpdir) + "/eqih_test_noperv.json";
    REQUIRE(run({"fixture", "NOPERV", "-o", path}).code == cli::kExitPass);
    CHECK(to_json(load_model_file(path)).dump(2) + "\n" == fixture("NOPERV"));
    std::remove(path.c_str());
}

TEST_CASE("a small selftest run") {
    const Run r = run({"selftest", "--seeds", "3"});
    CHECK(r.code == cli::kExitPass);
    CHECK(r.json()["checks"].size() == 9);
}
