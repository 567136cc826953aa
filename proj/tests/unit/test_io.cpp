#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "switchgame/io.hpp"
#include "switchgame/qvi.hpp"
#include "support/genspec.hpp"

using namespace switchgame;
using namespace switchgame::testsupport;
using nlohmann::json;

TEST_CASE("spec JSON round-trips") {
    const GameSpec s = random_spec(OrderCase::RowGt, CostCondition::B4, 81);
    const GameSpec back = spec_from_json(spec_to_json(s));
    CHECK(back.drift == s.drift);
    CHECK(back.vol == s.vol);
    CHECK(back.discount == s.discount);
    CHECK(back.gamma == s.gamma);
    CHECK(back.c12 == s.c12);
    CHECK(back.chi21 == s.chi21);
    CHECK(back.x0 == s.x0);
}

TEST_CASE("unknown and missing keys are rejected by name") {
    json doc = spec_to_json(random_spec(OrderCase::Eq, CostCondition::B1, 82));
    SUBCASE("top-level typo") {
        doc["discuont"] = 1.0;
        CHECK_THROWS_WITH_AS(spec_from_json(doc), doctest::Contains("discuont"),
                             std::invalid_argument);
    }
    SUBCASE("cost-name typo") {
        doc["cost_max"]["c13"] = 1.0;
        CHECK_THROWS_WITH_AS(spec_from_json(doc), doctest::Contains("c13"),
                             std::invalid_argument);
    }
    SUBCASE("missing field") {
        doc.erase("gamma");
        CHECK_THROWS_WITH_AS(spec_from_json(doc), doctest::Contains("gamma"),
                             std::invalid_argument);
    }
    SUBCASE("wrong matrix shape") {
        doc["vol"] = {1.0, 1.0};
        CHECK_THROWS_AS(spec_from_json(doc), std::invalid_argument);
    }
}

TEST_CASE("solution JSON round-trips through the verifier") {
    const GameSpec s = random_spec(OrderCase::ColLt, CostCondition::B4, 83);
    const Solution sol = build(s);
    const Solution back = solution_from_json(solution_to_json(sol));
    CHECK(back.order == sol.order);
    CHECK(back.costs == sol.costs);
    CHECK(*back.thresholds.x_a == *sol.thresholds.x_a);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (double x : {0.3, 1.0, 4.0})
                CHECK(back.value[i][j](x) == sol.value[i][j](x));
    CHECK(verify(s, back).worst_residual < 1e-8);
}

TEST_CASE("CSV output is full precision with LF endings") {
    const std::string path = "/tmp/switchgame_io_test.csv";
    {
        CsvWriter csv(path, {"a", "b"});
        csv.row_values({1.0 / 3.0, 2.0});
    }
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    CHECK(content == "a,b\n3.3333333333333331e-01,2.0000000000000000e+00\n");
    std::remove(path.c_str());
}

TEST_CASE("format_full keeps 17 significant digits") {
    const double v = 0.1234567890123456789;
    CHECK(format_full(v) == "1.2345678901234568e-01");
}
