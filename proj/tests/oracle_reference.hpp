#pragma once

// Test-only reference oracles, deliberately independent of the search the
// library ships: shortest paths by exhaustive simple-path enumeration, and
// the clairvoyant optimum by brute force over all pickup/drop interleavings.

#include <algorithm>
#include <limits>

#include "fleetsim/core.hpp"

namespace testutil {

using namespace fleetsim;

constexpr Tick kHuge = std::numeric_limits<Tick>::max() / 4;

/// Shortest u-v distance by enumerating every simple path (networks <= ~8 nodes).
inline Tick enumerated_distance(const Network& net, StationId from, StationId to) {
    if (from == to) return 0;
    Tick best = kHuge;
    std::vector<StationId> visited{from};
    auto step = [&](auto&& self, StationId at, Tick len) -> void {
        if (len >= best) return;
        if (at == to) {
            best = len;
            return;
        }
        for (const auto& e : net.edges) {
            StationId next = -1;
            if (e.u == at) next = e.v;
            else if (e.v == at) next = e.u;
            else continue;
            if (std::find(visited.begin(), visited.end(), next) != visited.end()) continue;
            visited.push_back(next);
            self(self, next, len + e.len);
            visited.pop_back();
        }
    };
    step(step, from, 0);
    return best;
}

namespace detail {

/// Travel cost between stations under the subnetwork's mode constraints.
inline Tick mode_distance(const Subnetwork& sub, StationId from, StationId to) {
    if (from == to) return 0;
    if (sub.kind == SubnetKind::Circuit) return sub.circuit_distance(from, to);
    return sub.span(from, to);
}

struct BruteState {
    const Instance* inst;
    const Subnetwork* sub;
    std::vector<const Request*> reqs;
    Tick bestLength = kHuge;
    Tick bestMakespan = kHuge;
};

/// Enumerate every order of pickup and drop events; between events the vehicle
/// travels the direct mode path and waits as releases require. Length depends
/// only on the event order; the makespan uses earliest execution.
inline void brute_recurse(BruteState& st, unsigned pending, unsigned onboard, StationId pos,
                          Tick time, Tick length, int load) {
    if (length >= st.bestLength && time >= st.bestMakespan) return;
    if (pending == 0 && onboard == 0) {
        Tick back = mode_distance(*st.sub, pos, st.inst->network.depot);
        st.bestLength = std::min(st.bestLength, length + back);
        st.bestMakespan = std::min(st.bestMakespan, time + back);
        return;
    }
    const int R = static_cast<int>(st.reqs.size());
    for (int i = 0; i < R; ++i) {
        if (pending & (1u << i)) {
            const Request& r = *st.reqs[i];
            if (load + r.z > st.inst->fleet.capacity) continue;
            Tick d = mode_distance(*st.sub, pos, *r.x);
            Tick at = std::max(time + d, r.t);
            if (r.p) at = std::max(at, *r.p);
            if (r.q && at > *r.q - st.inst->metric.dist(*r.x, *r.y)) continue;
            brute_recurse(st, pending & ~(1u << i), onboard | (1u << i), *r.x, at, length + d,
                          load + r.z);
        } else if (onboard & (1u << i)) {
            const Request& r = *st.reqs[i];
            Tick d = mode_distance(*st.sub, pos, *r.y);
            Tick at = time + d;
            if (r.q && at > *r.q) continue;
            brute_recurse(st, pending, onboard & ~(1u << i), *r.y, at, length + d, load - r.z);
        }
    }
}

inline std::pair<Tick, Tick> brute_single(const Instance& inst,
                                          const std::vector<const Request*>& reqs,
                                          const Subnetwork& sub) {
    BruteState st{&inst, &sub, reqs};
    for (const Request* r : reqs)
        if (!sub.contains(*r->x) || !sub.contains(*r->y)) return {kHuge, kHuge};
    brute_recurse(st, (1u << reqs.size()) - 1, 0, inst.network.depot, 0, 0, 0);
    return {st.bestLength, st.bestMakespan};
}

} // namespace detail

/// Clairvoyant optimum by brute force; |R| <= 4 keeps it instant.
inline Tick brute_force_cost(const Instance& inst, Objective obj) {
    const int R = static_cast<int>(inst.requests.size());
    const int k = inst.fleet.vehicles;
    std::vector<const Request*> all;
    for (const auto& r : inst.requests) all.push_back(&r);

    if (k == 1) {
        auto [len, mk] = detail::brute_single(inst, all, inst.assigned_subnetwork(0));
        Tick cost = obj == Objective::TotalTourLength ? len : mk;
        if (cost >= kHuge) throw Error(ErrorCode::Infeasible, "brute force: no schedule");
        return cost;
    }

    Tick best = kHuge;
    for (unsigned mask = 0; mask < (1u << R); ++mask) {
        std::vector<const Request*> a, b;
        for (int i = 0; i < R; ++i) ((mask >> i) & 1u ? a : b).push_back(all[i]);
        auto [la, ma] = detail::brute_single(inst, a, inst.assigned_subnetwork(0));
        auto [lb, mb] = detail::brute_single(inst, b, inst.assigned_subnetwork(1));
        if (la >= kHuge || lb >= kHuge) continue;
        Tick cost = obj == Objective::TotalTourLength ? la + lb : std::max(ma, mb);
        best = std::min(best, cost);
    }
    if (best >= kHuge) throw Error(ErrorCode::Infeasible, "brute force: no schedule");
    return best;
}

} // namespace testutil
