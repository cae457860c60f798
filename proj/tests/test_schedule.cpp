#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "fleetsim/engine.hpp"
#include "fleetsim/generators.hpp"
#include "fleetsim/policies.hpp"
#include "fleetsim/schedule.hpp"
#include "test_util.hpp"

using namespace fleetsim;
using testutil::pdp;

namespace {

/// One SIR-style round on the unit 4-circuit: pick at the origin, drop one
/// station later, roll home empty.
Tour round_tour() {
    TourBuilder b(0, 0, 1);
    b.action(1, 0, {{1, 1}});
    b.hop(1, 0, 2, 1);
    b.action(2, 1, {{1, -1}});
    b.hop(2, 1, 3, 2);
    b.hop(3, 2, 4, 3);
    b.hop(4, 3, 1, 4);
    return b.finish();
}

Schedule round_schedule() {
    Schedule s;
    s.tours.push_back(round_tour());
    s.serviceMap[1] = {ActionRef{0, 0}, ActionRef{0, 1}};
    return s;
}

} // namespace

TEST_CASE("a hand-built round tour validates cleanly") {
    Instance inst = testutil::circuit_instance(4, 1, 3, {pdp(1, 0, 1, 2)});
    Schedule s = round_schedule();
    CHECK(validate_tour(s.tours[0], inst).empty());
    CHECK(validate_schedule(s, inst).empty());
    CHECK(total_length(s) == 4);
    CHECK(makespan(s) == 4);
}

TEST_CASE("departing before an action completes is a violation") {
    Instance inst = testutil::circuit_instance(4, 1, 3, {pdp(1, 0, 1, 2)});
    Schedule s = round_schedule();
    Tour& tour = s.tours[0];
    // move after the drop at t=1 now leaves at t=0
    tour.moves[2].depart = 0;
    tour.moves[2].arrive = 3;
    bool found = false;
    for (const auto& v : validate_tour(tour, inst))
        if (v.what == "dep(m+1) < t(a) + dur(a)") found = true;
    CHECK(found);
}

TEST_CASE("driving a circuit against its direction is a violation") {
    Instance inst = testutil::circuit_instance(4, 1, 3, {pdp(1, 0, 1, 2)});
    Tour tour;
    tour.vehicle = 0;
    Move out;
    out.vehicle = 0;
    out.subnetwork = 0;
    out.origin = 1;
    out.depart = 0;
    out.dest = 4;
    out.arrive = 1;
    out.path = {1, 4}; // backwards
    out.load = 0;
    Move back;
    back.vehicle = 0;
    back.subnetwork = 0;
    back.origin = 4;
    back.depart = 1;
    back.dest = 1;
    back.arrive = 2;
    back.path = {4, 1};
    back.load = 1;
    Action a;
    a.vehicle = 0;
    a.station = 4;
    a.time = 1;
    a.delta = 1;
    a.served = {{1, 1}};
    tour.moves = {out, back};
    tour.actions = {a};
    bool direction = false;
    for (const auto& v : validate_tour(tour, inst))
        if (v.what.find("direction") != std::string::npos) direction = true;
    CHECK(direction);
}

TEST_CASE("strict departure mode reports waiting slack") {
    Instance inst = testutil::circuit_instance(4, 1, 3, {pdp(1, 0, 1, 2)});
    Schedule s = round_schedule();
    // legal under ">=": slack between the drop (t=1) and the ride home (t=2)
    Tour& tour = s.tours[0];
    tour.moves[2].depart = 2;
    tour.moves[2].arrive = 5;
    CHECK(validate_tour(tour, inst).empty());
    bool flagged = false;
    for (const auto& v : validate_tour(tour, inst, /*strict_departures=*/true))
        if (v.what.find("waiting slack") != std::string::npos) flagged = true;
    CHECK(flagged);
}

TEST_CASE("schedule validation requires every request served once") {
    Instance inst = testutil::circuit_instance(4, 1, 3, {pdp(1, 0, 1, 2), pdp(2, 0, 1, 2)});
    Schedule s = round_schedule(); // only serves request 1
    bool unserved = false;
    for (const auto& v : validate_schedule(s, inst))
        if (v.what == "unserved request") unserved = true;
    CHECK(unserved);
}

TEST_CASE("pickup before release is a violation") {
    Instance inst = testutil::circuit_instance(4, 1, 3, {pdp(1, 2, 1, 2)});
    Schedule s = round_schedule(); // picks at t=0, release is t=2
    bool early = false;
    for (const auto& v : validate_schedule(s, inst))
        if (v.what == "picked up before release") early = true;
    CHECK(early);
}

TEST_CASE("empty schedules cost nothing") {
    Schedule s;
    s.tours.push_back(Tour{0, {}, {}});
    CHECK(total_length(s) == 0);
    CHECK(makespan(s) == 0);
}

TEST_CASE("load telescopes over every engine tour") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        GenParams p;
        p.seed = seed;
        Instance inst = gen_scenario(Scenario::Other, p);
        RunResult run = run_online(make_policy("sir"), inst);
        for (const auto& tour : run.schedule.tours) {
            if (tour.empty()) continue;
            int sum = 0;
            for (const auto& a : tour.actions) sum += a.delta;
            CHECK(tour.moves.back().load == tour.moves.front().load + sum);
        }
    }
}

TEST_CASE("a single served ride costs at least the direct route") {
    GenParams p;
    p.seed = 3;
    p.requests = 1;
    Instance inst = gen_scenario(Scenario::Other, p);
    RunResult run = run_online(make_policy("sir"), inst);
    const Request& r = inst.requests.front();
    Tick direct = inst.metric.dist(inst.network.depot, *r.x) + inst.metric.dist(*r.x, *r.y) +
                  inst.metric.dist(*r.y, inst.network.depot);
    CHECK(total_length(run.schedule) >= direct);
}

TEST_CASE("makespan is never below the last release when work exists") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GenParams p;
        p.seed = seed;
        Instance inst = gen_scenario(Scenario::Morning, p);
        RunResult run = run_online(make_policy("sif_m"), inst);
        CHECK(makespan(run.schedule) >= inst.last_release());
    }
}

TEST_CASE("valid schedule implies every tour is valid") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GenParams p;
        p.seed = seed;
        Instance inst = gen_scenario(Scenario::Morning, p);
        RunResult run = run_online(make_policy("sir"), inst);
        REQUIRE(validate_schedule(run.schedule, inst).empty());
        for (const auto& tour : run.schedule.tours) CHECK(validate_tour(tour, inst).empty());
    }
}

TEST_CASE("builder folds waiting into departures and keeps stay connectors") {
    Instance inst = testutil::circuit_instance(4, 1, 3, {});
    TourBuilder b(0, 0, 1);
    b.hop(1, 0, 2, 1);         // arrive v2 at t=1
    b.action(2, 5, {{1, 1}});  // act only at t=5: the move must leave at t=4
    b.action(2, 5, {{2, -1}}); // opposite sign at the same tick: stay connector
    b.hop(2, 5, 3, 6);
    b.hop(3, 6, 4, 7);
    b.hop(4, 7, 1, 8);
    Tour t = b.finish();
    REQUIRE(t.moves.size() == 3);
    REQUIRE(t.actions.size() == 2);
    CHECK(t.moves[0].depart == 4);
    CHECK(t.moves[0].arrive == 5);
    CHECK(t.moves[1].is_stay());
    CHECK(t.moves[1].depart == 5);
    CHECK(t.actions[0].delta == 1);
    CHECK(t.actions[1].delta == -1);
    CHECK(t.length() == 4);
    CHECK(t.final_arrival() == 8);
}

TEST_CASE("builder keeps a full circuit round as one real move") {
    Instance inst = testutil::circuit_instance(4, 1, 3, {});
    TourBuilder b(0, 0, 1);
    b.action(1, 0, {{1, 1}});
    b.hop(1, 0, 2, 1);
    b.hop(2, 1, 3, 2);
    b.hop(3, 2, 4, 3);
    b.hop(4, 3, 1, 4);
    b.action(1, 4, {{1, -1}});
    Tour t = b.finish();
    REQUIRE(t.moves.size() == 3);
    CHECK_FALSE(t.moves[1].is_stay());
    CHECK(t.moves[1].origin == 1);
    CHECK(t.moves[1].dest == 1);
    CHECK(t.moves[1].length() == 4);
    CHECK(validate_tour(t, inst).empty());
}

TEST_CASE("schedule dump lists moves and actions per vehicle") {
    Schedule s = round_schedule();
    std::ostringstream os;
    dump_schedule(os, s);
    std::string text = os.str();
    CHECK(text.find("# vehicle kind from to depart arrive load requests") == 0);
    CHECK(text.find("0 action - 1 0 - 1 r1:1") != std::string::npos);
    CHECK(text.find("0 move 2 1 1 4 0 -") != std::string::npos);
}
