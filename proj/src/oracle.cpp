#include "fleetsim/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>
#include <queue>
#include <unordered_map>

#include "fleetsim/policies.hpp"

namespace fleetsim {

namespace {

constexpr Tick kInf = std::numeric_limits<Tick>::max() / 4;

/// One side of the clairvoyant search: a single vehicle on its subnetwork.
struct SideProblem {
    const Instance* inst;
    const Subnetwork* sub;
    Objective obj;
    VehicleId vehicle;
    std::vector<const Request*> reqs;

    int R = 0;
    int stationCount = 0;
    int depotPos = 0;
    std::vector<int> xPos, yPos, load;
    std::vector<Tick> rel, pMin, pickLatest, dropLatest;
    Tick timeBound = 0;

    void prepare() {
        R = static_cast<int>(reqs.size());
        stationCount = static_cast<int>(sub->stations.size());
        depotPos = sub->pos_of(inst->network.depot);
        for (const Request* r : reqs) {
            if (r->kind != RequestKind::Pdp && r->kind != RequestKind::Full)
                throw Error(ErrorCode::UnsupportedRequestKind,
                            "the oracle serves pdp and full requests");
            if (!sub->contains(*r->x) || !sub->contains(*r->y))
                throw Error(ErrorCode::Infeasible,
                            "request " + std::to_string(r->id) +
                                " is off the vehicle's subnetwork");
            xPos.push_back(sub->pos_of(*r->x));
            yPos.push_back(sub->pos_of(*r->y));
            load.push_back(r->z);
            rel.push_back(r->t);
            Tick d = inst->metric.dist(*r->x, *r->y);
            pMin.push_back(r->p ? *r->p : 0);
            pickLatest.push_back(r->q ? *r->q - d : kInf);
            dropLatest.push_back(r->q ? *r->q : kInf);
        }
        Tick horizon = 0;
        for (int i = 0; i < R; ++i) {
            horizon = std::max(horizon, rel[i]);
            horizon = std::max(horizon, pMin[i]);
            if (dropLatest[i] < kInf) horizon = std::max(horizon, dropLatest[i]);
        }
        Tick loop = sub->kind == SubnetKind::Circuit ? sub->totalLen : 2 * sub->totalLen;
        timeBound = horizon + (static_cast<Tick>(R) + 2) * loop + sub->totalLen;
    }
};

struct SearchNode {
    int pos;
    std::uint16_t pending, onboard;
    Tick time, cost;
    int parent;
    std::uint8_t step; // 0 root, 1 move, 2 wait, 3 pick, 4 drop
    int aux;           // move: source position, pick/drop: request index
};

struct SideSolution {
    Tick cost = 0;
    std::vector<SearchNode> path; // root first
    long long explored = 0;
};

/// Best-first exact search with dominance pruning: states keyed by
/// (position, pending, onboard) keep a Pareto frontier over (time, cost);
/// a state is pruned when another with the same key is no later and no
/// costlier, which is sound because the earlier state can reproduce anything
/// the later one does by waiting in place.
///
/// Waiting is therefore implicit: a pickup jumps the clock to
/// max(arrival, release, earliest start), so event times range exactly over
/// release dates and the arrival times reachable from them. Departing between
/// two such ticks can be exchanged for departing at the earlier one without
/// changing feasibility or either objective, so the restriction is lossless.
SideSolution solve_side(SideProblem& P) {
    P.prepare();

    std::vector<SearchNode> arena;
    using QItem = std::tuple<Tick, Tick, int>; // (cost, time, node) min-first
    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> queue;
    std::unordered_map<std::uint32_t, std::vector<std::pair<Tick, Tick>>> frontier;

    auto key_of = [&](int pos, std::uint16_t pending, std::uint16_t onboard) {
        return static_cast<std::uint32_t>(pos) | (static_cast<std::uint32_t>(pending) << 4) |
               (static_cast<std::uint32_t>(onboard) << 16);
    };
    auto dominated = [&](std::uint32_t key, Tick time, Tick cost) {
        auto it = frontier.find(key);
        if (it == frontier.end()) return false;
        for (auto [t, c] : it->second)
            if (t <= time && c <= cost) return true;
        return false;
    };

    auto push = [&](SearchNode n) {
        if (n.time > P.timeBound) return;
        std::uint32_t key = key_of(n.pos, n.pending, n.onboard);
        if (dominated(key, n.time, n.cost)) return;
        arena.push_back(n);
        queue.emplace(n.cost, n.time, static_cast<int>(arena.size()) - 1);
    };

    const std::uint16_t allPending = static_cast<std::uint16_t>((1u << P.R) - 1);
    push({P.depotPos, allPending, 0, 0, 0, -1, 0, 0});

    long long explored = 0;
    while (!queue.empty()) {
        auto [cost, time, idx] = queue.top();
        queue.pop();
        SearchNode cur = arena[idx];
        std::uint32_t key = key_of(cur.pos, cur.pending, cur.onboard);
        if (dominated(key, cur.time, cur.cost)) continue;
        frontier[key].emplace_back(cur.time, cur.cost);
        ++explored;

        if (cur.pending == 0 && cur.onboard == 0 && cur.pos == P.depotPos) {
            SideSolution out;
            out.cost = cur.cost;
            out.explored = explored;
            for (int i = idx; i >= 0; i = arena[i].parent) out.path.push_back(arena[i]);
            std::reverse(out.path.begin(), out.path.end());
            return out;
        }

        int curLoad = 0;
        for (int i = 0; i < P.R; ++i)
            if (cur.onboard & (1u << i)) curLoad += P.load[i];

        for (int i = 0; i < P.R; ++i) // drops happen on arrival
            if ((cur.onboard & (1u << i)) && P.yPos[i] == cur.pos && cur.time <= P.dropLatest[i])
                push({cur.pos, cur.pending, static_cast<std::uint16_t>(cur.onboard & ~(1u << i)),
                      cur.time, cur.cost, idx, 4, i});
        for (int i = 0; i < P.R; ++i) { // picks wait in place for release and p
            if (!(cur.pending & (1u << i)) || P.xPos[i] != cur.pos) continue;
            if (curLoad + P.load[i] > P.inst->fleet.capacity) continue;
            Tick at = std::max(cur.time, std::max(P.rel[i], P.pMin[i]));
            if (at > P.pickLatest[i]) continue;
            Tick ncost = P.obj == Objective::TotalTourLength ? cur.cost : at;
            push({cur.pos, static_cast<std::uint16_t>(cur.pending & ~(1u << i)),
                  static_cast<std::uint16_t>(cur.onboard | (1u << i)), at, ncost, idx, 3, i});
        }

        auto move_to = [&](int next, Tick len) {
            Tick ncost = P.obj == Objective::TotalTourLength ? cur.cost + len : cur.time + len;
            push({next, cur.pending, cur.onboard, cur.time + len, ncost, idx, 1, cur.pos});
        };
        if (P.sub->kind == SubnetKind::Circuit) {
            move_to((cur.pos + 1) % P.stationCount, P.sub->edgeLen[cur.pos]);
        } else {
            if (cur.pos + 1 < P.stationCount) move_to(cur.pos + 1, P.sub->edgeLen[cur.pos]);
            if (cur.pos - 1 >= 0) move_to(cur.pos - 1, P.sub->edgeLen[cur.pos - 1]);
        }
    }
    throw Error(ErrorCode::Infeasible, "no feasible clairvoyant schedule exists");
}

/// Builds the witness tour and service refs for one solved side.
void emit_side(const SideProblem& P, const SideSolution& sol, Schedule& out) {
    TourBuilder builder(P.vehicle, P.sub->id, P.inst->network.depot);
    for (std::size_t i = 1; i < sol.path.size(); ++i) {
        const SearchNode& n = sol.path[i];
        const SearchNode& prev = sol.path[i - 1];
        switch (n.step) {
        case 1:
            builder.hop(P.sub->stations[n.aux], prev.time, P.sub->stations[n.pos], n.time);
            break;
        case 3: {
            const Request* r = P.reqs[n.aux];
            int a = builder.action(*r->x, n.time, {{r->id, r->z}});
            out.serviceMap[r->id].pickup = ActionRef{P.vehicle, a};
            break;
        }
        case 4: {
            const Request* r = P.reqs[n.aux];
            int a = builder.action(*r->y, n.time, {{r->id, -r->z}});
            out.serviceMap[r->id].delivery = ActionRef{P.vehicle, a};
            break;
        }
        default:
            break;
        }
    }
    out.tours.push_back(builder.finish());
}

void check_guard(const Instance& inst) {
    const int R = static_cast<int>(inst.requests.size());
    const int k = inst.fleet.vehicles;
    if (k > 2)
        throw Error(ErrorCode::InstanceTooLarge, "the oracle handles at most 2 vehicles");
    if (R > 12 || (k == 2 && R > 10))
        throw Error(ErrorCode::InstanceTooLarge, "too many requests for the exact oracle");
    for (VehicleId v = 0; v < k; ++v)
        if (inst.assigned_subnetwork(v).stations.size() > 8)
            throw Error(ErrorCode::InstanceTooLarge, "subnetwork too large for the exact oracle");
    for (const auto& r : inst.requests)
        if (r.kind != RequestKind::Pdp && r.kind != RequestKind::Full)
            throw Error(ErrorCode::UnsupportedRequestKind,
                        "the oracle serves pdp and full requests");
}

} // namespace

OptResult opt_cost(const Instance& inst, Objective obj) {
    check_guard(inst);

    if (inst.fleet.vehicles == 1) {
        SideProblem P;
        P.inst = &inst;
        P.sub = &inst.assigned_subnetwork(0);
        P.obj = obj;
        P.vehicle = 0;
        for (const auto& r : inst.requests) P.reqs.push_back(&r);
        SideSolution sol = solve_side(P);
        OptResult out;
        out.cost = sol.cost;
        out.explored = sol.explored;
        emit_side(P, sol, out.witness);
        return out;
    }

    // k == 2: tours are independent, so enumerate request bipartitions and
    // solve each side alone; results combine by a pure min-reduction.
    const int R = static_cast<int>(inst.requests.size());
    const std::uint32_t masks = 1u << R;
    Tick bestCost = kInf;
    std::uint32_t bestMask = 0;
    bool feasible = false;
    long long explored = 0;

    auto side_cost = [&](VehicleId vehicle, std::uint32_t mask, long long& exp) -> Tick {
        SideProblem P;
        P.inst = &inst;
        P.sub = &inst.assigned_subnetwork(vehicle);
        P.obj = obj;
        P.vehicle = vehicle;
        for (int i = 0; i < R; ++i)
            if (mask & (1u << i)) P.reqs.push_back(&inst.requests[i]);
        SideSolution sol = solve_side(P);
        exp += sol.explored;
        return sol.cost;
    };

#pragma omp parallel for schedule(dynamic) reduction(+ : explored)
    for (std::int64_t mask = 0; mask < static_cast<std::int64_t>(masks); ++mask) {
        long long exp = 0;
        Tick total;
        try {
            Tick a = side_cost(0, static_cast<std::uint32_t>(mask), exp);
            Tick b = side_cost(1, static_cast<std::uint32_t>(mask) ^ (masks - 1), exp);
            total = obj == Objective::TotalTourLength ? a + b : std::max(a, b);
        } catch (const Error&) {
            explored += exp;
            continue; // this split is infeasible
        }
        explored += exp;
#pragma omp critical
        {
            if (!feasible || total < bestCost ||
                (total == bestCost && static_cast<std::uint32_t>(mask) < bestMask)) {
                feasible = true;
                bestCost = total;
                bestMask = static_cast<std::uint32_t>(mask);
            }
        }
    }
    if (!feasible)
        throw Error(ErrorCode::Infeasible, "no feasible clairvoyant schedule exists");

    OptResult out;
    out.cost = bestCost;
    out.explored = explored;
    for (VehicleId v = 0; v < 2; ++v) {
        SideProblem P;
        P.inst = &inst;
        P.sub = &inst.assigned_subnetwork(v);
        P.obj = obj;
        P.vehicle = v;
        std::uint32_t mask = v == 0 ? bestMask : bestMask ^ (masks - 1);
        for (int i = 0; i < R; ++i)
            if (mask & (1u << i)) P.reqs.push_back(&inst.requests[i]);
        SideSolution sol = solve_side(P);
        emit_side(P, sol, out.witness);
    }
    return out;
}

Rational competitive_ratio(const std::string& policy, const Instance& inst, Objective obj) {
    RunResult run = run_online(make_policy(policy), inst);
    Tick alg = cost_of(run.schedule, obj);
    OptResult opt = opt_cost(inst, obj);
    if (opt.cost == 0) {
        if (alg == 0) return {1, 1};
        throw Error(ErrorCode::ZeroOptimum,
                    "OPT = 0 while the policy cost is " + std::to_string(alg));
    }
    return {alg, opt.cost};
}

} // namespace fleetsim
