#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "fleetsim/core.hpp"
#include "fleetsim/instance_io.hpp"
#include "oracle_reference.hpp"
#include "test_util.hpp"

using namespace fleetsim;
using testutil::Rng;

namespace {

Network path_network(int n, Tick len = 1) {
    Network net;
    for (int i = 1; i <= n; ++i) net.nodes.push_back({i, ""});
    for (int i = 1; i < n; ++i) net.edges.push_back({i, i + 1, len});
    net.depot = 1;
    return net;
}

Network ring_network(int n, Tick len = 1) {
    Network net = path_network(n, len);
    net.edges.push_back({n, 1, len});
    return net;
}

Subnetwork circuit_over(int n) {
    Subnetwork sub;
    sub.id = 0;
    sub.kind = SubnetKind::Circuit;
    for (int i = 1; i <= n; ++i) sub.stations.push_back(i);
    return sub;
}

} // namespace

TEST_CASE("metric closure on a 4-node path") {
    auto metric = build_metric(path_network(4));
    CHECK(metric.dist(1, 4) == 3);
    CHECK(metric.dist(1, 4) == testutil::enumerated_distance(path_network(4), 1, 4));
}

TEST_CASE("metric closure on a single node") {
    Network net;
    net.nodes.push_back({7, ""});
    net.depot = 7;
    auto metric = build_metric(net);
    CHECK(metric.dist(7, 7) == 0);
}

TEST_CASE("4-node ring as an undirected graph halves the long way") {
    auto metric = build_metric(ring_network(4));
    CHECK(metric.dist(1, 3) == 2);
    CHECK(metric.dist(1, 3) == testutil::enumerated_distance(ring_network(4), 1, 3));
}

TEST_CASE("disconnected network is rejected") {
    Network net;
    net.nodes = {{1, ""}, {2, ""}, {3, ""}};
    net.edges = {{1, 2, 1}};
    net.depot = 1;
    CHECK_THROWS_WITH_AS(build_metric(net), doctest::Contains("GraphNotConnected"), Error);
}

TEST_CASE("metric closure matches path enumeration on random connected networks") {
    Rng rng(2024);
    for (int round = 0; round < 60; ++round) {
        int n = rng.irange(2, 8);
        Network net = testutil::random_connected_network(rng, n);
        auto metric = build_metric(net);
        for (const auto& a : net.nodes)
            for (const auto& b : net.nodes)
                CHECK(metric.dist(a.id, b.id) == testutil::enumerated_distance(net, a.id, b.id));
    }
}

TEST_CASE("metric closure is a metric") {
    Rng rng(7);
    for (int round = 0; round < 40; ++round) {
        int n = rng.irange(2, 8);
        Network net = testutil::random_connected_network(rng, n);
        auto metric = build_metric(net);
        for (const auto& a : net.nodes) {
            CHECK(metric.dist(a.id, a.id) == 0);
            for (const auto& b : net.nodes) {
                CHECK(metric.dist(a.id, b.id) == metric.dist(b.id, a.id));
                for (const auto& c : net.nodes)
                    CHECK(metric.dist(a.id, c.id) <=
                          metric.dist(a.id, b.id) + metric.dist(b.id, c.id));
            }
        }
    }
}

TEST_CASE("circuit distances follow the fixed direction") {
    Network net = ring_network(4);
    Subnetwork sub = circuit_over(4);
    sub.bind(net);
    CHECK(circuit_distance(sub, 1, 2) == 1);
    CHECK(circuit_distance(sub, 2, 1) == 3);
    CHECK(circuit_distance(sub, 3, 3) == 0);
    CHECK_THROWS_AS(circuit_distance(sub, 1, 9), Error);
}

TEST_CASE("circuit distance properties against the metric") {
    Rng rng(99);
    for (int round = 0; round < 40; ++round) {
        int n = rng.irange(3, 8);
        Tick len = rng.irange(1, 3);
        Network net = ring_network(n, len);
        // a chord can only shorten the metric, never the circuit
        if (n >= 5 && rng.below(2)) net.edges.push_back({1, 3, 1});
        Subnetwork sub = circuit_over(n);
        sub.bind(net);
        auto metric = build_metric(net);
        for (StationId u = 1; u <= n; ++u)
            for (StationId v = 1; v <= n; ++v) {
                if (u != v)
                    CHECK(sub.circuit_distance(u, v) + sub.circuit_distance(v, u) == sub.totalLen);
                CHECK(sub.circuit_distance(u, v) >= metric.dist(u, v));
            }
    }
}

TEST_CASE("make_task copies a pdp request onto its circuit") {
    Instance inst = testutil::circuit_instance(4, 1, 2, {testutil::pdp(1, 0, 1, 2)});
    Task task = make_task(inst.requests[0], inst.subnetworks, inst.metric);
    CHECK(task.kind == TaskKind::PdpTask);
    CHECK(task.subnetwork == 0);
    CHECK(*task.x == 1);
    CHECK(*task.y == 2);
    CHECK(task.z == 1);
    CHECK_FALSE(task.pick.has_value());
}

TEST_CASE("make_task picks the earliest feasible window for a full request") {
    Instance inst = testutil::line_instance(5, 1, 2, {testutil::full(1, 0, 1, 5, 5, 20, 2)});
    // d(1,5) = 4: pick = max(p, t) = 5, drop = 9; 5 <= 5 <= 16 and 9 <= 9 <= 20
    Task task = make_task(inst.requests[0], inst.subnetworks, inst.metric);
    CHECK(task.kind == TaskKind::FullTask);
    CHECK(*task.pick == 5);
    CHECK(*task.drop == 9);
}

TEST_CASE("make_task rejects uncovered and infeasible requests") {
    // two disjoint lines: 1-2 and 3-4 (bridged in the network, not in overlays)
    Instance inst;
    for (int i = 1; i <= 4; ++i) inst.network.nodes.push_back({i, ""});
    inst.network.edges = {{1, 2, 1}, {2, 3, 1}, {3, 4, 1}};
    inst.network.depot = 1;
    Subnetwork a;
    a.id = 0;
    a.kind = SubnetKind::Line;
    a.stations = {1, 2};
    Subnetwork b;
    b.id = 1;
    b.kind = SubnetKind::Line;
    b.stations = {3, 4};
    inst.subnetworks = {a, b};
    inst.fleet = {1, 2};
    inst.scenario = Scenario::Other;
    inst.finalize();

    Request crossing = testutil::pdp(1, 0, 1, 4);
    CHECK_THROWS_WITH_AS(make_task(crossing, inst.subnetworks, inst.metric),
                         doctest::Contains("NoCoveringSubnetwork"), Error);

    Request late = testutil::full(2, 10, 1, 2, 0, 5, 1); // released after q - d
    CHECK_THROWS_WITH_AS(make_task(late, inst.subnetworks, inst.metric),
                         doctest::Contains("InfeasibleWindow"), Error);
}

TEST_CASE("make_task output always satisfies the task invariants") {
    Rng rng(4242);
    for (int round = 0; round < 200; ++round) {
        int n = rng.irange(3, 6);
        Instance inst = testutil::circuit_instance(n, rng.irange(1, 2), 3, {});
        StationId x = rng.irange(1, n);
        StationId y = rng.irange(1, n);
        if (x == y) continue;
        Tick t = rng.irange(0, 10);
        Request r;
        if (rng.below(2)) {
            r = testutil::pdp(1, t, x, y, rng.irange(1, 3));
        } else {
            Tick p = rng.irange(0, 10);
            Tick d = inst.metric.dist(x, y);
            Tick q = std::max(p, t) + d + rng.irange(0, 6);
            r = testutil::full(1, t, x, y, p, q, rng.irange(1, 3));
        }
        Task task = make_task(r, inst.subnetworks, inst.metric);
        const Subnetwork& sub = inst.subnetworks[task.subnetwork];
        CHECK(sub.contains(*task.x));
        CHECK(sub.contains(*task.y));
        if (task.kind == TaskKind::FullTask) {
            Tick d = inst.metric.dist(*task.x, *task.y);
            CHECK(*r.p <= *task.pick);
            CHECK(*task.pick <= *r.q - d);
            CHECK(*r.p + d <= *task.drop);
            CHECK(*task.drop <= *r.q);
        }
    }
}

TEST_CASE("lunch partition flags a line that misses the restaurant") {
    Network net = path_network(5);
    net.nodes[0].label = "building";
    net.nodes[1].label = "building";
    net.nodes[2].label = "restaurant";
    net.nodes[3].label = "building";
    net.nodes[4].label = "building";
    Subnetwork good;
    good.id = 0;
    good.kind = SubnetKind::Line;
    good.stations = {1, 2, 3};
    Subnetwork bad;
    bad.id = 1;
    bad.kind = SubnetKind::Line;
    bad.stations = {4, 5};
    good.bind(net);
    bad.bind(net);
    auto metric = build_metric(net);
    auto report = validate_partition(net, {good, bad}, Scenario::Lunch, metric);
    REQUIRE(report.size() == 1);
    CHECK(report[0].where == "subnetwork 1");
    CHECK(report[0].what == "line misses the restaurant");
}

TEST_CASE("emergency partition accepts exactly one full circuit") {
    Network net = ring_network(5);
    Subnetwork sub = circuit_over(5);
    sub.bind(net);
    auto metric = build_metric(net);
    CHECK(validate_partition(net, {sub}, Scenario::Emergency, metric).empty());

    Subnetwork partial;
    partial.id = 0;
    partial.kind = SubnetKind::Circuit;
    partial.stations = {1, 2, 3, 4};
    // close the partial ring so it binds
    net.edges.push_back({4, 1, 1});
    partial.bind(net);
    metric = build_metric(net);
    CHECK_FALSE(validate_partition(net, {partial}, Scenario::Emergency, metric).empty());
}

TEST_CASE("morning partition flags a building whose nearest parking is elsewhere") {
    // stations 1..5 on a path; parkings at 1 and 4
    Network net = path_network(5);
    net.nodes[0].label = "parking";
    net.nodes[1].label = "building";
    net.nodes[2].label = "building";
    net.nodes[3].label = "parking";
    net.nodes[4].label = "building";
    Subnetwork a;
    a.id = 0;
    a.kind = SubnetKind::Line;
    a.stations = {1, 2, 3};
    Subnetwork b;
    b.id = 1;
    b.kind = SubnetKind::Line;
    b.stations = {4, 5};
    a.bind(net);
    b.bind(net);
    auto metric = build_metric(net);
    auto report = validate_partition(net, {a, b}, Scenario::Morning, metric);
    // building 3 sits with parking 1 but parking 4 is strictly nearer
    REQUIRE(report.size() == 1);
    CHECK(report[0].where == "building 3");
}

TEST_CASE("unknown labels raise LabelError") {
    Network net = path_network(3);
    net.nodes[1].label = "cafeteria";
    auto metric = build_metric(net);
    CHECK_THROWS_WITH_AS(validate_partition(net, {}, Scenario::Other, metric),
                         doctest::Contains("LabelError"), Error);
}

TEST_CASE("instance json round trip") {
    Instance inst = testutil::circuit_instance(
        4, 2, 3, {testutil::pdp(1, 0, 1, 2), testutil::full(2, 1, 2, 4, 3, 30, 2)},
        Scenario::Morning, Objective::Makespan);
    std::stringstream buf;
    write_instance(buf, inst);
    Instance back = read_instance(buf);
    CHECK(back.network.depot == inst.network.depot);
    CHECK(back.network.nodes.size() == inst.network.nodes.size());
    CHECK(back.subnetworks.size() == 1);
    CHECK(back.subnetworks[0].kind == SubnetKind::Circuit);
    CHECK(back.fleet.capacity == 3);
    CHECK(back.requests == inst.requests);
    CHECK(back.scenario == Scenario::Morning);
    CHECK(back.objective == Objective::Makespan);
    CHECK(back.metric.dist(1, 3) == inst.metric.dist(1, 3));
}

TEST_CASE("instance validation catches bad requests") {
    Instance inst = testutil::circuit_instance(4, 1, 2, {testutil::pdp(1, 0, 1, 3)});
    CHECK(validate_instance(inst).empty());

    Instance heavy = testutil::circuit_instance(4, 1, 2, {testutil::pdp(1, 0, 1, 3, 5)});
    auto v = validate_instance(heavy);
    REQUIRE(v.size() == 1);
    CHECK(v[0].what == "passenger count exceeds vehicle capacity");

    Instance loop = testutil::circuit_instance(4, 1, 2, {testutil::pdp(1, 0, 2, 2)});
    CHECK_FALSE(validate_instance(loop).empty());
}

TEST_CASE("split pickup and delivery halves pair by shared id") {
    Request pick;
    pick.id = 9;
    pick.kind = RequestKind::Pickup;
    pick.t = 0;
    pick.x = 1;
    Request drop;
    drop.id = 9;
    drop.kind = RequestKind::Delivery;
    drop.t = 2;
    drop.y = 3;
    Instance inst = testutil::circuit_instance(4, 1, 2, {pick, drop});
    CHECK(validate_instance(inst).empty());

    Instance lonely = testutil::circuit_instance(4, 1, 2, {pick});
    auto v = validate_instance(lonely);
    REQUIRE(v.size() == 1);
    CHECK(v[0].what == "pickup half without delivery half");
}

TEST_CASE("bad json is a parse error") {
    std::stringstream buf("{not json");
    CHECK_THROWS_WITH_AS(read_instance(buf), doctest::Contains("ParseError"), Error);
}
