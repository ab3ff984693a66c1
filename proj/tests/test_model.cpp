#include "eqih/fixtures.hpp"
#include "eqih/model_io.hpp"

#include <doctest.h>

#include <sstream>

using namespace eqih;

TEST_CASE("perversity syntax") {
    CHECK(parse_perversity("").empty());
    const Perversity p = parse_perversity("b=1, a=-2");
    CHECK(p["a"] == -2);
    CHECK(p["b"] == 1);
    CHECK(p.str() == "a=-2,b=1");
    CHECK_THROWS_AS(parse_perversity("a"), std::invalid_argument);
    CHECK_THROWS_AS(parse_perversity("a=x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_perversity("a=1,a=2"), std::invalid_argument);
}

TEST_CASE("perversity arithmetic clamps at -1") {
    const Perversity p = parse_perversity("s=0");
    const Perversity q = parse_perversity("s=3");
    CHECK((p - q)["s"] == -1);
    CHECK((p + q)["s"] == 3);
    CHECK(leq(p, q));
    CHECK_FALSE(leq(q, p));
}

TEST_CASE("perversities must name exactly the model strata") {
    const Model cone = make_cone2();
    CHECK_NOTHROW(check_perversity(cone, parse_perversity("apex=1")));
    CHECK_THROWS_AS(check_perversity(cone, Perversity()), StrataMismatch);
    CHECK_THROWS_AS(check_perversity(cone, parse_perversity("apex=1,other=0")), std::invalid_argument);
    CHECK_THROWS_AS(cone.stratum("other"), UnknownStratum);
}

TEST_CASE("standard perversities of the cone") {
    const Model cone = make_cone2();
    CHECK(characteristic_perversity(cone)["apex"] == 1);
    CHECK(euler_perversity(cone)["apex"] == 2);
    CHECK(has_perverse_strata(cone));
    CHECK_FALSE(has_perverse_strata(make_noperv()));
    const auto lattice = working_lattice(cone);
    CHECK(std::is_sorted(lattice.begin(), lattice.end()));
    CHECK(std::find(lattice.begin(), lattice.end(), zero_perversity(cone)) != lattice.end());
}

TEST_CASE("every fixture validates strictly and round-trips through JSON") {
    for (const std::string name : {"HOPF", "ROT", "CONE2", "NOPERV", "RANDOM:7:3"}) {
        CAPTURE(name);
        const Model m = make_fixture(name);
        CHECK(validate(m, true).ok());
        const Json doc = to_json(m);
        std::istringstream in(doc.dump());
        const Model back = load_model(in);
        CHECK(to_json(back) == doc);
    }
}

TEST_CASE("validation reports a counterexample") {
    Model m = make_cone2();
    m.filtrations["apex"][0][0] = SubspaceQ::full(1);  // level -1 must be zero
    const auto report = validate(m, false);
    CHECK_FALSE(report.ok());
    const auto* bounds = report.find("filtration_bounds");
    REQUIRE(bounds);
    CHECK_FALSE(bounds->passed);
    CHECK(bounds->counterexample == std::vector<std::string>{"1"});
}

TEST_CASE("malformed documents name the offending field") {
    const auto error_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            load_model(in);
        } catch (const ModelFormatError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(error_of("{").find("syntax") != std::string::npos);
    CHECK(error_of("[]").find("object") != std::string::npos);
    CHECK(error_of(R"({"name":"x","top_degree":1,"dims":[1]})").find("dims") != std::string::npos);
    CHECK(error_of(R"({"name":"x","top_degree":0,"dims":[1],"d":[[["1/0"]]]})") != "no error");
    CHECK_THROWS_AS(load_model_file("/nonexistent/model.json"), ModelFormatError);
}
