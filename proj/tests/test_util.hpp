#pragma once

#include <random>

#include "fleetsim/core.hpp"

namespace testutil {

using namespace fleetsim;

inline Request pdp(RequestId id, Tick t, StationId x, StationId y, int z = 1) {
    Request r;
    r.id = id;
    r.kind = RequestKind::Pdp;
    r.t = t;
    r.x = x;
    r.y = y;
    r.z = z;
    return r;
}

inline Request full(RequestId id, Tick t, StationId x, StationId y, Tick p, Tick q, int z = 1) {
    Request r = pdp(id, t, x, y, z);
    r.kind = RequestKind::Full;
    r.p = p;
    r.q = q;
    return r;
}

/// Circuit 1..n driven in ascending order, unit edges scaled by S, depot 1.
inline Instance circuit_instance(int n, Tick S, int cap, std::vector<Request> requests,
                                 Scenario scen = Scenario::Other,
                                 Objective obj = Objective::TotalTourLength, int k = 1) {
    Instance inst;
    for (int i = 1; i <= n; ++i)
        inst.network.nodes.push_back({i, i == 1 ? std::string("parking") : std::string("building")});
    for (int i = 1; i < n; ++i) inst.network.edges.push_back({i, i + 1, S});
    inst.network.edges.push_back({n, 1, S});
    inst.network.depot = 1;
    Subnetwork sub;
    sub.id = 0;
    sub.kind = SubnetKind::Circuit;
    for (int i = 1; i <= n; ++i) sub.stations.push_back(i);
    inst.subnetworks.push_back(sub);
    inst.fleet = {k, cap};
    inst.requests = std::move(requests);
    inst.scenario = scen;
    inst.objective = obj;
    inst.id = "test_circuit";
    inst.finalize();
    return inst;
}

/// Line 1..n with origin and depot at station 1, unit edges scaled by S.
inline Instance line_instance(int n, Tick S, int cap, std::vector<Request> requests,
                              Scenario scen = Scenario::Other,
                              Objective obj = Objective::TotalTourLength, int k = 1) {
    Instance inst;
    for (int i = 1; i <= n; ++i)
        inst.network.nodes.push_back({i, i == 1 ? std::string("parking") : std::string("building")});
    for (int i = 1; i < n; ++i) inst.network.edges.push_back({i, i + 1, S});
    inst.network.depot = 1;
    Subnetwork sub;
    sub.id = 0;
    sub.kind = SubnetKind::Line;
    for (int i = 1; i <= n; ++i) sub.stations.push_back(i);
    inst.subnetworks.push_back(sub);
    inst.fleet = {k, cap};
    inst.requests = std::move(requests);
    inst.scenario = scen;
    inst.objective = obj;
    inst.id = "test_line";
    inst.finalize();
    return inst;
}

/// Deterministic draws for property tests.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    std::uint64_t below(std::uint64_t n) { return n ? gen() % n : 0; }
    int irange(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); }
};

/// Random connected weighted network on n stations (spanning tree plus chords).
inline Network random_connected_network(Rng& rng, int n, Tick maxLen = 4) {
    Network net;
    for (int i = 1; i <= n; ++i) net.nodes.push_back({i, ""});
    for (int i = 2; i <= n; ++i) {
        int parent = rng.irange(1, i - 1);
        net.edges.push_back({parent, i, static_cast<Tick>(rng.irange(1, maxLen))});
    }
    int extra = rng.irange(0, n / 2);
    for (int e = 0; e < extra; ++e) {
        int u = rng.irange(1, n);
        int v = rng.irange(1, n);
        if (u == v) continue;
        if (net.edge_len(u, v) >= 0) continue;
        net.edges.push_back({u, v, static_cast<Tick>(rng.irange(1, maxLen))});
    }
    net.depot = 1;
    return net;
}

} // namespace testutil
