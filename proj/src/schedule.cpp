#include "fleetsim/schedule.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <ostream>
#include <sstream>

namespace fleetsim {

Tick Move::length() const {
    if (is_stay()) return 0;
    return arrive - depart; // equals path length for a valid move
}

Tick Tour::length() const {
    Tick len = 0;
    for (const auto& m : moves) len += m.length();
    return len;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

std::string mtag(int i) { return "move " + std::to_string(i + 1); }
std::string atag(int i) { return "action " + std::to_string(i + 1); }

const Subnetwork* find_subnetwork(const Instance& inst, int id) {
    for (const auto& s : inst.subnetworks)
        if (s.id == id) return &s;
    return nullptr;
}

void validate_move(const Move& m, int idx, const Instance& inst, std::vector<Violation>& out) {
    const std::string tag = mtag(idx);
    if (m.load < 0 || m.load > inst.fleet.capacity)
        out.push_back({tag, "load outside [0, Cap]"});
    const Subnetwork* sub = find_subnetwork(inst, m.subnetwork);
    if (!sub) {
        out.push_back({tag, "unknown subnetwork"});
        return;
    }
    if (m.is_stay()) {
        if (m.origin != m.dest) out.push_back({tag, "stay move with distinct endpoints"});
        if (m.depart != m.arrive) out.push_back({tag, "stay move with depart != arrive"});
        if (m.path != std::vector<StationId>{m.origin})
            out.push_back({tag, "stay move path must be the single station"});
        if (!sub->contains(m.origin)) out.push_back({tag, "station not on subnetwork"});
        return;
    }
    if (m.path.size() < 2 || m.path.front() != m.origin || m.path.back() != m.dest) {
        out.push_back({tag, "path endpoints do not match origin/destination"});
        return;
    }
    Tick len = 0;
    for (std::size_t i = 0; i + 1 < m.path.size(); ++i) {
        StationId a = m.path[i];
        StationId b = m.path[i + 1];
        if (!sub->contains(a) || !sub->contains(b)) {
            out.push_back({tag, "path leaves the subnetwork"});
            return;
        }
        int pa = sub->pos_of(a);
        int pb = sub->pos_of(b);
        const int n = static_cast<int>(sub->stations.size());
        if (sub->kind == SubnetKind::Circuit) {
            if (pb != (pa + 1) % n) {
                out.push_back({tag, "direction: circuit traversed against its fixed direction"});
                return;
            }
            len += sub->edgeLen[pa];
        } else {
            if (pb == pa + 1) len += sub->edgeLen[pa];
            else if (pb == pa - 1) len += sub->edgeLen[pb];
            else {
                out.push_back({tag, "path stations are not adjacent on the line"});
                return;
            }
        }
    }
    if (m.arrive != m.depart + len)
        out.push_back({tag, "arrive != depart + path length"});
}

} // namespace

std::vector<Violation> validate_tour(const Tour& tour, const Instance& inst,
                                     bool strict_departures) {
    std::vector<Violation> out;
    if (tour.empty()) return out;
    if (tour.moves.size() != tour.actions.size() + 1) {
        out.push_back({"tour", "not an alternating move/action sequence"});
        return out;
    }
    for (std::size_t i = 0; i < tour.moves.size(); ++i) {
        const Move& m = tour.moves[i];
        if (m.vehicle != tour.vehicle) out.push_back({mtag(i), "vehicle differs from tour vehicle"});
        if (m.depart < 0) out.push_back({mtag(i), "negative departure tick"});
        validate_move(m, static_cast<int>(i), inst, out);
    }
    for (std::size_t i = 0; i < tour.actions.size(); ++i) {
        const Action& a = tour.actions[i];
        const std::string tag = atag(i);
        if (a.vehicle != tour.vehicle) out.push_back({tag, "vehicle differs from tour vehicle"});
        if (a.duration < 0) out.push_back({tag, "negative duration"});
        if (std::abs(a.delta) > inst.fleet.capacity) out.push_back({tag, "|delta| exceeds Cap"});
        int sum = 0;
        for (const auto& sc : a.served) sum += sc.count;
        if (sum != a.delta) out.push_back({tag, "delta != sum of served counts"});
        if (a.delta == 0) out.push_back({tag, "action moves no passengers"});

        const Move& before = tour.moves[i];
        const Move& after = tour.moves[i + 1];
        if (before.dest != a.station) out.push_back({tag, "dest(m) != loc(a)"});
        if (after.origin != a.station) out.push_back({tag, "loc(a) != orig(m+1)"});
        if (before.arrive != a.time) out.push_back({tag, "arr(m) != t(a)"});
        if (after.depart < a.time + a.duration)
            out.push_back({tag, "dep(m+1) < t(a) + dur(a)"});
        else if (strict_departures && after.depart != a.time + a.duration)
            out.push_back({tag, "waiting slack: dep(m+1) > t(a) + dur(a)"});
        int expected = before.load + a.delta;
        if (after.load != expected) out.push_back({tag, "load(m+1) != load(m) + delta(a)"});
    }
    if (tour.moves.front().origin != inst.network.depot)
        out.push_back({"tour", "first move does not depart the depot"});
    if (tour.moves.back().dest != inst.network.depot)
        out.push_back({"tour", "last move does not arrive at the depot"});
    if (tour.moves.front().load != 0) out.push_back({"tour", "tour departs loaded"});
    if (tour.moves.back().load != 0) out.push_back({"tour", "tour returns loaded"});
    return out;
}

std::vector<Violation> validate_schedule(const Schedule& s, const Instance& inst,
                                         bool strict_departures) {
    std::vector<Violation> out;
    if (static_cast<int>(s.tours.size()) != inst.fleet.vehicles)
        out.push_back({"schedule", "expected one tour per vehicle"});
    for (std::size_t i = 0; i < s.tours.size(); ++i) {
        if (s.tours[i].vehicle != static_cast<VehicleId>(i))
            out.push_back({"tour " + std::to_string(i), "vehicle id mismatch"});
        auto sub = validate_tour(s.tours[i], inst, strict_departures);
        for (auto& v : sub)
            out.push_back({"vehicle " + std::to_string(i) + " " + v.where, v.what});
    }

    auto action_at = [&](const ActionRef& ref) -> const Action* {
        if (ref.vehicle < 0 || ref.vehicle >= static_cast<VehicleId>(s.tours.size())) return nullptr;
        const auto& acts = s.tours[ref.vehicle].actions;
        if (ref.index < 0 || ref.index >= static_cast<int>(acts.size())) return nullptr;
        return &acts[ref.index];
    };
    auto served_count = [](const Action* a, RequestId id) {
        int total = 0;
        for (const auto& sc : a->served)
            if (sc.request == id) total += sc.count;
        return total;
    };

    for (const auto& r : inst.requests) {
        const std::string tag = "request " + std::to_string(r.id);
        auto it = s.serviceMap.find(r.id);
        if (it == s.serviceMap.end()) {
            out.push_back({tag, "unserved request"});
            continue;
        }
        const Service& svc = it->second;
        // For split Pickup/Delivery pairs the two halves supply one ref each,
        // so the checks below are driven by which fields the request carries.
        if (r.kind != RequestKind::Delivery) {
            if (!svc.pickup) {
                out.push_back({tag, "never picked up"});
            } else if (const Action* a = action_at(*svc.pickup)) {
                if (a->station != *r.x) out.push_back({tag, "picked up away from its origin"});
                if (a->time < r.t) out.push_back({tag, "picked up before release"});
                if (served_count(a, r.id) != r.z) out.push_back({tag, "pickup count != z"});
                if (r.kind == RequestKind::Full) {
                    Tick latest = *r.q - inst.metric.dist(*r.x, *r.y);
                    if (a->time < *r.p || a->time > latest)
                        out.push_back({tag, "pickup outside [p, q - d(x,y)]"});
                }
            } else {
                out.push_back({tag, "dangling pickup reference"});
            }
        }
        if (r.kind != RequestKind::Pickup) {
            if (!svc.delivery) {
                out.push_back({tag, "never delivered"});
            } else if (const Action* a = action_at(*svc.delivery)) {
                if (a->station != *r.y) out.push_back({tag, "delivered away from its destination"});
                if (served_count(a, r.id) != -r.z) out.push_back({tag, "delivery count != -z"});
                if (r.kind == RequestKind::Full && a->time > *r.q)
                    out.push_back({tag, "delivered after q"});
            } else {
                out.push_back({tag, "dangling delivery reference"});
            }
        }
        if (svc.pickup && svc.delivery) {
            if (svc.pickup->vehicle != svc.delivery->vehicle)
                out.push_back({tag, "picked up and delivered by different vehicles"});
            else if (svc.pickup->index >= svc.delivery->index)
                out.push_back({tag, "pickup does not precede delivery"});
        }
    }
    for (const auto& [id, svc] : s.serviceMap) {
        bool known = false;
        for (const auto& r : inst.requests)
            if (r.id == id) known = true;
        if (!known)
            out.push_back({"request " + std::to_string(id), "service entry for unknown request"});
    }
    return out;
}

Tick total_length(const Schedule& s) {
    Tick len = 0;
    for (const auto& t : s.tours) len += t.length();
    return len;
}

Tick makespan(const Schedule& s) {
    Tick m = 0;
    for (const auto& t : s.tours) m = std::max(m, t.final_arrival());
    return m;
}

Tick cost_of(const Schedule& s, Objective obj) {
    return obj == Objective::TotalTourLength ? total_length(s) : makespan(s);
}

void dump_schedule(std::ostream& os, const Schedule& s) {
    os << "# vehicle kind from to depart arrive load requests\n";
    for (const auto& tour : s.tours) {
        std::size_t mi = 0, ai = 0;
        bool moveNext = true;
        while (mi < tour.moves.size() || ai < tour.actions.size()) {
            if (moveNext && mi < tour.moves.size()) {
                const Move& m = tour.moves[mi++];
                os << m.vehicle << " move " << m.origin << " " << m.dest << " " << m.depart << " "
                   << m.arrive << " " << m.load << " -\n";
            } else if (ai < tour.actions.size()) {
                const Action& a = tour.actions[ai++];
                os << a.vehicle << " action - " << a.station << " " << a.time << " - " << a.delta
                   << " ";
                for (std::size_t i = 0; i < a.served.size(); ++i) {
                    if (i) os << ",";
                    os << "r" << a.served[i].request << ":" << a.served[i].count;
                }
                os << "\n";
            }
            moveNext = !moveNext;
        }
    }
}

// ---------------------------------------------------------------------------
// TourBuilder
// ---------------------------------------------------------------------------

TourBuilder::TourBuilder(VehicleId vehicle, int subnetwork, StationId depot)
    : vehicle_(vehicle), subnetwork_(subnetwork), depot_(depot), position_(depot) {
    tour_.vehicle = vehicle;
}

void TourBuilder::hop(StationId from, Tick depart, StationId to, Tick arrive) {
    assert(!finished_);
    if (from != position_)
        throw Error(ErrorCode::TraceMismatch, "hop does not start at the vehicle position");
    pendingHops_.push_back({from, to, depart, arrive});
    position_ = to;
}

void TourBuilder::flush_segment(Tick endTime, bool toAction) {
    Move m;
    m.vehicle = vehicle_;
    m.subnetwork = subnetwork_;
    m.load = load_;
    if (pendingHops_.empty()) {
        // stay move: connects two actions at the same station
        m.origin = m.dest = position_;
        m.depart = m.arrive = endTime;
        m.path = {position_};
    } else {
        Tick len = 0;
        m.origin = pendingHops_.front().from;
        m.path.push_back(m.origin);
        for (const auto& h : pendingHops_) {
            len += h.arrive - h.depart;
            m.path.push_back(h.to);
        }
        m.dest = pendingHops_.back().to;
        // Fold mid-route waiting into the departure; the physical arrival of
        // the last leg is kept so the depot-return time survives the merge.
        m.arrive = toAction ? endTime : pendingHops_.back().arrive;
        m.depart = m.arrive - len;
        pendingHops_.clear();
    }
    tour_.moves.push_back(std::move(m));
}

int TourBuilder::action(StationId station, Tick time, std::vector<ServedCount> served) {
    assert(!finished_);
    if (station != position_)
        throw Error(ErrorCode::TraceMismatch, "action away from the vehicle position");
    int delta = 0;
    for (const auto& sc : served) delta += sc.count;

    // Same station, same tick, same direction, no hop in between: one action.
    if (pendingHops_.empty() && !tour_.actions.empty()) {
        Action& last = tour_.actions.back();
        if (last.station == station && last.time == time &&
            ((last.delta > 0) == (delta > 0))) {
            last.served.insert(last.served.end(), served.begin(), served.end());
            last.delta += delta;
            load_ += delta;
            return static_cast<int>(tour_.actions.size()) - 1;
        }
    }

    flush_segment(time, /*toAction=*/true);
    Action a;
    a.vehicle = vehicle_;
    a.station = station;
    a.time = time;
    a.delta = delta;
    a.duration = 0;
    a.served = std::move(served);
    tour_.actions.push_back(std::move(a));
    load_ += delta;
    return static_cast<int>(tour_.actions.size()) - 1;
}

Tour TourBuilder::finish() {
    assert(!finished_);
    finished_ = true;
    if (tour_.actions.empty() && pendingHops_.empty()) return std::move(tour_); // never left
    if (position_ != depot_)
        throw Error(ErrorCode::TraceMismatch, "tour does not end at the depot");
    if (!pendingHops_.empty()) {
        flush_segment(0, /*toAction=*/false);
    } else {
        // tour may not end on an action
        flush_segment(tour_.actions.back().time, /*toAction=*/true);
    }
    return std::move(tour_);
}

} // namespace fleetsim
