#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "qosheft/errors.hpp"
#include "qosheft/generator.hpp"
#include "qosheft/io.hpp"

using namespace qosheft;

namespace {

std::filesystem::path fixture(char const * name) { return std::filesystem::path(QOSHEFT_FIXTURES) / name; }

std::string error_of(auto && f) {
    try {
        f();
    } catch (Error const & e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("DAG round trip") {
    auto d = testing::diamond(12, Rational(5, 3));
    d.release = 4;
    d.tasks[0].versions[1].reward = Rational(7, 2);
    auto const j = io::to_json(d);
    CHECK(j["edges"][0]["data_volume"] == "5/3");
    CHECK(j["tasks"][0]["versions"][1]["reward"] == "7/2");
    CHECK(io::dag_from_json(j) == d);
    CHECK(io::dag_from_json(io::parse_json(io::dump(j), "mem")) == d);
}

TEST_CASE("generated data round trips") {
    GenParams g;
    g.n_tasks = 25;
    g.seed = 11;
    auto const d = generate_dag(g);
    CHECK(io::dag_from_json(io::to_json(d)) == d);
    OccupancyParams o;
    o.n_vms = 5;
    o.occupancy_fraction = Rational(3, 10);
    auto const p = generate_preoccupation(o);
    CHECK(io::platform_from_json(io::to_json(p)) == p);
}

TEST_CASE("schedule round trip with failures") {
    // The 4-tick copy cannot fit its critical path, so some instances fail.
    std::vector<DagSpec> dags{testing::diamond(8), testing::diamond(4)};
    dags[1].dag_id = "D2";
    auto const hs = schedule_periodic(dags, testing::platform(2, 8));
    REQUIRE_FALSE(hs.failures.empty());
    auto const text = io::dump(io::to_json(hs));
    CHECK(io::schedule_from_json(io::parse_json(text, "mem")) == hs);
    CHECK(text.back() == '\n');
    CHECK(io::dump(io::to_json(hs)) == text);
}

TEST_CASE("fixtures load") {
    auto const d = io::load_dag(fixture("diamond.json"));
    CHECK(d == testing::diamond(12));
    auto const p = io::load_platform(fixture("platform_2vm_30.json"));
    CHECK(p.background_period == 24);
    CHECK(check_platform(p).empty());
}

TEST_CASE("rationals accept integers, decimals and fraction strings") {
    auto j = io::to_json(testing::diamond());
    j["edges"][0]["data_volume"] = 0.25;
    j["edges"][1]["data_volume"] = "3/4";
    j["edges"][2]["data_volume"] = "1.5";
    j["edges"][3]["data_volume"] = 2;
    auto const d = io::dag_from_json(j);
    CHECK(d.edges[0].data_volume == Rational(1, 4));
    CHECK(d.edges[1].data_volume == Rational(3, 4));
    CHECK(d.edges[2].data_volume == Rational(3, 2));
    CHECK(d.edges[3].data_volume == 2);
    j["edges"][0]["data_volume"] = "abc";
    CHECK(error_of([&] { io::dag_from_json(j); }).find("edges[0].data_volume") != std::string::npos);
}

TEST_CASE("strict readers name the offending path") {
    auto j = io::to_json(testing::diamond());
    j["tasks"][2]["colour"] = "red";
    auto msg = error_of([&] { io::dag_from_json(j); });
    CHECK(msg.find("tasks[2]") != std::string::npos);
    CHECK(msg.find("colour") != std::string::npos);

    j = io::to_json(testing::diamond());
    j.erase("period");
    CHECK(error_of([&] { io::dag_from_json(j); }).find("period") != std::string::npos);

    j = io::to_json(testing::diamond());
    j["period"] = "twelve";
    CHECK_THROWS_AS(io::dag_from_json(j), ParseError);
}

TEST_CASE("syntax errors report line and column") {
    auto const msg = error_of([] { io::load_dag(fixture("malformed.json")); });
    CHECK(msg.find("malformed.json:5:") != std::string::npos);
    CHECK_THROWS_AS(io::parse_json("{", "x"), ParseError);
    CHECK_THROWS_AS(io::read_file("/nonexistent/file.json"), Error);
}

TEST_CASE("gantt rows cover background and scheduled work") {
    auto const p = testing::platform(2, 8, 1, {{{0, 6}}, {{2, 6}}});
    std::vector<DagSpec> const dags{testing::diamond(8)};
    auto const hs = schedule_periodic(dags, p);
    REQUIRE(hs.failures.empty());
    std::istringstream in(io::gantt_csv(hs, p));
    std::string line;
    std::getline(in, line);
    CHECK(line == "vm,start,finish,dag,task,level,origin");
    int background = 0;
    int scheduled = 0;
    Tick busy = 0;
    while (std::getline(in, line)) {
        if (line.ends_with(",background")) {
            ++background;
            auto const a = line.find(',');
            auto const b = line.find(',', a + 1);
            auto const c = line.find(',', b + 1);
            busy += std::stoll(line.substr(b + 1, c - b - 1)) - std::stoll(line.substr(a + 1, b - a - 1));
        } else {
            CHECK(line.ends_with(",scheduled"));
            ++scheduled;
        }
    }
    CHECK(background == 2);
    CHECK(busy == 4);
    CHECK(scheduled == 4);
}
