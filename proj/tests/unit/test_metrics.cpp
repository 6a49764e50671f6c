#include "doctest.h"
#include "helpers.hpp"
#include "qosheft/metrics.hpp"

using namespace qosheft;

namespace {

// Diamond at Q1 in both cycles of hyperperiod 24.
HyperSchedule all_base(std::vector<DagSpec> const & dags, Platform const & p) {
    return schedule_periodic(dags, p, PeriodicOptions{1, false});
}

} // namespace

TEST_CASE("normalized reward of base-level schedules") {
    std::vector<DagSpec> const dags{testing::diamond(12)};
    auto const p = testing::platform(2, 8);
    auto hs = all_base(dags, p);
    REQUIRE(hs.entries.size() == 8);
    auto r = normalized_reward(hs, dags);
    CHECK(r.r_act == 8);
    CHECK(r.r_max == 16);
    CHECK(r.nr_percent == 50);

    hs.failures.push_back({"D1", 1, "test"});
    r = normalized_reward(hs, dags);
    CHECK(r.r_act == 4);
    CHECK(r.nr_percent == 25);
    CHECK(r.nullified_instances == 1);
}

TEST_CASE("top-level schedules score 100") {
    std::vector<DagSpec> const dags{testing::diamond(12)};
    auto hs = all_base(dags, testing::platform(2, 8));
    for (auto & e : hs.entries) e.level = 2;
    CHECK(normalized_reward(hs, dags).nr_percent == 100);
    CHECK(normalized_reward(HyperSchedule{8, 1, {}, {}, {}, {}}, {}).nr_percent == 100);
}

TEST_CASE("schedule statistics") {
    auto const p = testing::platform(2, 8, 1, {{{0, 6}}, {{0, 8}}});
    HyperSchedule empty{24, 1, {}, {}, {}, {}};
    auto s = schedule_stats(empty, p);
    CHECK(s.vms[0].busy == 0);
    CHECK(s.vms[0].idle == 18);
    CHECK(s.vms[0].preoccupied == 6);
    CHECK(s.vms[1].idle == 24);

    HyperSchedule one = empty;
    one.entries.push_back(ScheduleEntry{TaskInstance{"x", "T1", "D1", 0}, "V2", 1, 0, 3});
    s = schedule_stats(one, p);
    CHECK(s.vms[1].busy == 3);
    CHECK(s.vms[1].idle == 21);

    std::vector<DagSpec> const dags{testing::diamond(12)};
    auto const hs = schedule_periodic(dags, p);
    s = schedule_stats(hs, p);
    Tick placed = 0;
    for (auto const & e : hs.entries) placed += e.finish - e.start;
    CHECK(s.vms[0].busy + s.vms[1].busy == placed);
    REQUIRE(s.instances.size() == 2);
    CHECK(s.instances[0].makespan > 0);
    CHECK(s.instances[0].makespan <= 12);
}
