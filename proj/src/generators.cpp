#include "fleetsim/generators.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace fleetsim {

namespace {

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed ^ 0x9e3779b97f4a7c15ULL) {}
    // modulo draw: bit-exact across platforms, bias irrelevant at these ranges
    std::uint64_t below(std::uint64_t n) { return n ? gen() % n : 0; }
    Tick tick_below(Tick n) { return static_cast<Tick>(below(static_cast<std::uint64_t>(n))); }
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::BadParams, what);
}

/// Circuit 1..n (driving order 1,2,...,n,1) or line 1..n, unit edges scaled by S.
Network ring_or_path(int n, Tick S, SubnetKind kind, StationId parking, StationId restaurant) {
    Network net;
    for (int i = 1; i <= n; ++i) {
        std::string label = "building";
        if (i == parking) label = "parking";
        if (i == restaurant) label = "restaurant";
        net.nodes.push_back({i, label});
    }
    for (int i = 1; i < n; ++i) net.edges.push_back({i, i + 1, S});
    if (kind == SubnetKind::Circuit) net.edges.push_back({n, 1, S});
    net.depot = 1;
    return net;
}

Subnetwork whole_overlay(int n, SubnetKind kind) {
    Subnetwork sub;
    sub.id = 0;
    sub.kind = kind;
    for (int i = 1; i <= n; ++i) sub.stations.push_back(i);
    sub.originIndex = 0;
    return sub;
}

Instance base_instance(int n, Tick S, SubnetKind kind, int cap, int k, Scenario scen,
                       Objective obj, StationId parking = 1, StationId restaurant = 0) {
    Instance inst;
    inst.network = ring_or_path(n, S, kind, parking, restaurant);
    inst.subnetworks.push_back(whole_overlay(n, kind));
    inst.fleet = {k, cap};
    inst.scenario = scen;
    inst.objective = obj;
    return inst;
}

std::string tag(const std::string& name, const GenParams& p, int n, int cap, int reqs) {
    std::ostringstream os;
    os << name << "_n" << n << "_c" << cap;
    if (reqs >= 0) os << "_r" << reqs;
    if (p.scale > 1) os << "_x" << p.scale;
    os << "_s" << p.seed;
    return os.str();
}

Instance finish(Instance inst, std::string id) {
    inst.id = std::move(id);
    inst.finalize();
    return inst;
}

// --- paper fixtures ---------------------------------------------------------

Instance ex1_sir_length(const GenParams& p) {
    int n = p.n ? p.n : 4;
    int cap = p.cap ? p.cap : 3;
    Tick S = p.scale ? p.scale : 1;
    require(n >= 3 && cap >= 1 && S >= 1, "ex1_sir_length needs n >= 3, cap >= 1, S >= 1");
    Instance inst = base_instance(n, S, SubnetKind::Circuit, cap, 1, Scenario::Other,
                                  Objective::TotalTourLength);
    const Tick C = static_cast<Tick>(n) * S;
    for (int i = 1; i <= n * cap; ++i) {
        int g = (i - 1) / cap; // station group 0..n-1
        Request r;
        r.id = i;
        r.t = static_cast<Tick>(i - 1) * C;
        r.x = g + 1;
        r.y = g + 2 <= n ? g + 2 : 1;
        r.z = 1;
        inst.requests.push_back(r);
    }
    return finish(std::move(inst), tag("ex1_sir_length", p, n, cap, n * cap));
}

Instance ex2_sir_makespan(const GenParams& p) {
    int n = p.n ? p.n : 4;
    int cap = p.cap ? p.cap : 2;
    Tick S = p.scale ? p.scale : 2;
    require(n >= 3 && cap >= 2 && S >= 1, "ex2_sir_makespan needs n >= 3, cap >= 2, S >= 1");
    Instance inst =
        base_instance(n, S, SubnetKind::Circuit, cap, 1, Scenario::Morning, Objective::Makespan);
    inst.requests.push_back({1, RequestKind::Pdp, 0, 1, n, {}, {}, 1});
    inst.requests.push_back({2, RequestKind::Pdp, 1, 1, n, {}, {}, 1}); // eps = 1
    return finish(std::move(inst), tag("ex2_sir_makespan", p, n, cap, 2));
}

Instance ex3_sife_makespan(const GenParams& p) {
    int n = p.n ? p.n : 5;
    int cap = p.cap ? p.cap : 2;
    Tick S = p.scale ? p.scale : 1;
    require(n >= 3 && cap >= 1 && S >= 1, "ex3_sife_makespan needs n >= 3, cap >= 1, S >= 1");
    Instance inst =
        base_instance(n, S, SubnetKind::Circuit, cap, 1, Scenario::Evening, Objective::Makespan);
    inst.requests.push_back({1, RequestKind::Pdp, static_cast<Tick>(n - 1) * S, n, 1, {}, {}, cap});
    return finish(std::move(inst), tag("ex3_sife_makespan", p, n, cap, 1));
}

Instance ex4_sifm_makespan(const GenParams& p) {
    int n = p.n ? p.n : 4;
    int cap = p.cap ? p.cap : 2;
    Tick S = p.scale ? p.scale : 1;
    require(n >= 3 && cap >= 2 && S >= 1, "ex4_sifm_makespan needs n >= 3, cap >= 2, S >= 1");
    Instance inst =
        base_instance(n, S, SubnetKind::Circuit, cap, 1, Scenario::Morning, Objective::Makespan);
    const Tick tn = static_cast<Tick>(n) * S;
    inst.requests.push_back({1, RequestKind::Pdp, 0, 1, n, {}, {}, 1});
    inst.requests.push_back({2, RequestKind::Pdp, tn, 1, n, {}, {}, cap - 1});
    inst.requests.push_back({3, RequestKind::Pdp, tn, 1, n, {}, {}, 1});
    return finish(std::move(inst), tag("ex4_sifm_makespan", p, n, cap, 3));
}

Instance ex5_main_makespan(const GenParams& p) {
    int n = p.n ? p.n : 4;
    int cap = p.cap ? p.cap : 2;
    Tick S = p.scale ? p.scale : 2;
    require(n >= 2 && cap >= 2 && S >= 1, "ex5_main_makespan needs n >= 2, cap >= 2, S >= 1");
    // Line v0..vn: station ids 0..n, origin and depot at 0.
    Instance inst;
    for (int i = 0; i <= n; ++i)
        inst.network.nodes.push_back({i, i == 0 ? std::string("parking") : std::string("building")});
    for (int i = 0; i < n; ++i) inst.network.edges.push_back({i, i + 1, S});
    inst.network.depot = 0;
    Subnetwork sub;
    sub.id = 0;
    sub.kind = SubnetKind::Line;
    for (int i = 0; i <= n; ++i) sub.stations.push_back(i);
    sub.originIndex = 0;
    inst.subnetworks.push_back(sub);
    inst.fleet = {1, cap};
    inst.scenario = Scenario::Morning;
    inst.objective = Objective::Makespan;
    inst.requests.push_back({1, RequestKind::Pdp, 0, 0, n, {}, {}, 1});
    inst.requests.push_back({2, RequestKind::Pdp, 1, 0, n, {}, {}, 1}); // eps = 1
    return finish(std::move(inst), tag("ex5_main_makespan", p, n, cap, 2));
}

Instance main_length_lb(const GenParams& p) {
    int n = p.n ? p.n : 4;
    int cap = p.cap ? p.cap : 2;
    Tick S = p.scale ? p.scale : 1;
    require(n >= 2 && cap >= 1 && S >= 1, "main_length_lb needs n >= 2, cap >= 1, S >= 1");
    Instance inst = base_instance(n, S, SubnetKind::Line, cap, 1, Scenario::Morning,
                                  Objective::TotalTourLength);
    // Cap rides from the origin to each v_d. Each ride is released one tick
    // after the vehicle departs serving the previous one, so it is pending but
    // unreachable until the vehicle has oscillated out and back: every ride
    // costs a full round trip of 2(d-1)S.
    std::vector<int> dest;
    for (int d = 2; d <= n; ++d)
        for (int c = 0; c < cap; ++c) dest.push_back(d);
    Tick dep = 0; // departure tick of the oscillation serving request j
    for (std::size_t j = 0; j < dest.size(); ++j) {
        Request r;
        r.id = static_cast<RequestId>(j + 1);
        r.x = 1;
        r.y = dest[j];
        r.z = 1;
        if (j == 0) {
            r.t = 0;
        } else {
            r.t = dep + 1;
            dep += 2 * static_cast<Tick>(dest[j - 1] - 1) * S;
        }
        inst.requests.push_back(r);
    }
    return finish(std::move(inst), tag("main_length_lb", p, n, cap, (n - 1) * cap));
}

// --- seeded scenarios --------------------------------------------------------

Instance scenario_instance(Scenario scen, GenParams p) {
    Rng rng(p.seed);
    int n = p.n ? p.n : 3 + static_cast<int>(rng.below(4));      // 3..6
    int cap = p.cap ? p.cap : 1 + static_cast<int>(rng.below(3)); // 1..3
    int reqs = p.requests ? p.requests : 1 + static_cast<int>(rng.below(8)); // 1..8
    Tick S = p.scale ? p.scale : 1;
    int k = p.vehicles ? p.vehicles : 1;
    require(n >= 3, "scenario generators need n >= 3");
    require(S >= 1 && cap >= 1 && k >= 1 && reqs >= 0, "bad scenario parameters");

    SubnetKind kind = p.kind;
    if (scen == Scenario::Lunch) kind = SubnetKind::Line;
    Objective obj = Objective::TotalTourLength;
    StationId restaurant = scen == Scenario::Lunch ? (n + 1) / 2 : 0;
    if (restaurant == 1) restaurant = 2;

    Instance inst = base_instance(n, S, kind, cap, k, scen, obj, 1, restaurant);
    const Subnetwork& sub = inst.subnetworks.front();
    Tick subLen = (kind == SubnetKind::Circuit ? static_cast<Tick>(n) : static_cast<Tick>(n - 1)) * S;
    Tick horizon = p.horizon ? p.horizon : 10 * subLen;

    struct Draw {
        Tick t;
        StationId x, y;
        int z;
    };
    std::vector<Draw> draws;
    for (int i = 0; i < reqs; ++i) {
        Draw d;
        d.t = rng.tick_below(horizon + 1);
        d.z = 1;
        switch (scen) {
        case Scenario::Morning:
            d.x = 1;
            d.y = 2 + static_cast<StationId>(rng.below(n - 1));
            break;
        case Scenario::Evening:
            d.x = 2 + static_cast<StationId>(rng.below(n - 1));
            d.y = 1;
            break;
        case Scenario::Lunch: {
            StationId building = 1 + static_cast<StationId>(rng.below(n - 1));
            if (building >= restaurant) ++building;
            if (rng.below(2) == 0) {
                d.x = building;
                d.y = restaurant;
            } else {
                d.x = restaurant;
                d.y = building;
            }
            break;
        }
        case Scenario::Other: {
            // destination ahead of the origin on the round (or the origin itself)
            int i0, j0;
            do {
                i0 = static_cast<int>(rng.below(n));
                j0 = i0 + 1 + static_cast<int>(rng.below(n - i0));
            } while (i0 == 0 && j0 == n);
            d.x = sub.stations[i0];
            d.y = sub.stations[j0 % n];
            d.z = 1 + static_cast<int>(rng.below(cap));
            break;
        }
        default:
            throw Error(ErrorCode::BadParams, "no request generator for this scenario");
        }
        draws.push_back(d);
    }
    std::stable_sort(draws.begin(), draws.end(), [](const Draw& a, const Draw& b) { return a.t < b.t; });
    int id = 0;
    for (const Draw& d : draws)
        inst.requests.push_back({++id, RequestKind::Pdp, d.t, d.x, d.y, {}, {}, d.z});

    std::string name = std::string(scenario_name(scen)) + "_" + subnet_kind_name(kind);
    return finish(std::move(inst), tag(name, p, n, cap, reqs));
}

} // namespace

Instance gen_example(const std::string& name, GenParams params) {
    if (name == "ex1_sir_length") return ex1_sir_length(params);
    if (name == "ex2_sir_makespan") return ex2_sir_makespan(params);
    if (name == "ex3_sife_makespan") return ex3_sife_makespan(params);
    if (name == "ex4_sifm_makespan") return ex4_sifm_makespan(params);
    if (name == "ex5_main_makespan") return ex5_main_makespan(params);
    if (name == "main_length_lb") return main_length_lb(params);
    throw Error(ErrorCode::UnknownGenerator, "no fixture named '" + name + "'");
}

Instance gen_scenario(Scenario scenario, GenParams params) {
    switch (scenario) {
    case Scenario::Morning:
    case Scenario::Evening:
    case Scenario::Lunch:
    case Scenario::Other:
        return scenario_instance(scenario, params);
    default:
        throw Error(ErrorCode::BadParams, "no request generator for the emergency scenario");
    }
}

} // namespace fleetsim
