#include "fleetsim/engine.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fleetsim {

namespace {

constexpr Tick kNever = std::numeric_limits<Tick>::max() / 2;

const char* event_kind_name(TraceEventKind k) {
    switch (k) {
    case TraceEventKind::Released: return "released";
    case TraceEventKind::Departed: return "departed";
    case TraceEventKind::Arrived: return "arrived";
    case TraceEventKind::Picked: return "picked";
    case TraceEventKind::Dropped: return "dropped";
    case TraceEventKind::EndOfSequence: return "eos";
    }
    return "?";
}

Tick eos_tick(const Instance& inst) {
    return inst.requests.empty() ? 0 : inst.last_release() + 1;
}

/// Lowest vehicle id whose assigned subnetwork covers the request's stations.
std::vector<VehicleId> assign_requests(const Instance& inst) {
    std::vector<VehicleId> owner(inst.requests.size(), -1);
    for (std::size_t i = 0; i < inst.requests.size(); ++i) {
        const Request& r = inst.requests[i];
        for (VehicleId v = 0; v < inst.fleet.vehicles; ++v) {
            const Subnetwork& sub = inst.assigned_subnetwork(v);
            if (r.x && !sub.contains(*r.x)) continue;
            if (r.y && !sub.contains(*r.y)) continue;
            owner[i] = v;
            break;
        }
        if (owner[i] < 0)
            throw Error(ErrorCode::NoCoveringSubnetwork,
                        "request " + std::to_string(r.id) + " reaches no vehicle's subnetwork");
    }
    return owner;
}

StationId line_hop_toward(const Subnetwork& sub, StationId from, StationId target, Tick& lenOut) {
    int pi = sub.pos_of(from);
    int ti = sub.pos_of(target);
    int next = ti > pi ? pi + 1 : pi - 1;
    lenOut = sub.edgeLen[std::min(pi, next)];
    return sub.stations[next];
}

struct Sim {
    const Instance& inst;
    std::vector<VehicleId> owner; // request index -> vehicle
    Trace trace;
    Tick eosAt;
    bool eosAnnounced = false;
    std::size_t nextRelease = 0;
    int servedCount = 0;
    Tick timeCap;

    enum class RState { Unreleased, Waiting, Onboard, Served };

    struct VehState {
        enum class Mode { Moving, WaitingUntil, WaitingForEvent };
        Mode mode = Mode::WaitingUntil; // wakes at tick 0 for the first query
        bool deciding = false;
        Tick busyUntil = 0;
        StationId pos;
        StationId hopFrom = -1, hopTo = -1;
        Tick hopDepart = 0;
        std::vector<std::size_t> waiting; // request indices, (t, id) order
        std::vector<std::size_t> onboard; // ascending request index
        int load = 0;
        std::unique_ptr<Policy> policy;
        TourBuilder builder;
        Tick guardTick = -1;
        int guardCount = 0;

        VehState(VehicleId v, int subId, StationId depot)
            : pos(depot), builder(v, subId, depot) {}
    };

    std::vector<RState> rstate;
    std::vector<VehState> veh;
    std::map<RequestId, Service> serviceMap;

    explicit Sim(const Instance& instance, const PolicyFactory& factory) : inst(instance) {
        for (const auto& r : inst.requests)
            if (r.kind != RequestKind::Pdp && r.kind != RequestKind::Full)
                throw Error(ErrorCode::UnsupportedRequestKind,
                            "the engine serves pdp and full requests; request " +
                                std::to_string(r.id) + " is a " + request_kind_name(r.kind) +
                                " request");
        owner = assign_requests(inst);
        rstate.assign(inst.requests.size(), RState::Unreleased);
        eosAt = eos_tick(inst);
        Tick loop = 1;
        for (const auto& s : inst.subnetworks)
            loop = std::max(loop, s.kind == SubnetKind::Circuit ? s.totalLen : 2 * s.totalLen);
        timeCap = eosAt + (2 * static_cast<Tick>(inst.requests.size()) + 8) * loop + 64;
        for (VehicleId v = 0; v < inst.fleet.vehicles; ++v) {
            veh.emplace_back(v, inst.assigned_subnetwork(v).id, inst.network.depot);
            veh.back().policy = factory(inst, v);
        }
    }

    WorldView make_view(VehicleId v) {
        VehState& s = veh[v];
        WorldView view;
        view.now = s.busyUntil; // == now when deciding
        view.vehicle = v;
        view.position = s.pos;
        view.subnet = &inst.assigned_subnetwork(v);
        view.capacity = inst.fleet.capacity;
        view.load = s.load;
        view.endOfSequence = eosAnnounced;
        for (std::size_t i : s.waiting) view.waiting.push_back(&inst.requests[i]);
        for (std::size_t i : s.onboard) view.onboard.push_back(&inst.requests[i]);
        return view;
    }

    std::size_t request_index(RequestId id, VehicleId v, const char* what) {
        for (std::size_t i = 0; i < inst.requests.size(); ++i)
            if (inst.requests[i].id == id && owner[i] == v) return i;
        throw Error(ErrorCode::IllegalCommand,
                    std::string(what) + ": request " + std::to_string(id) +
                        " is not assigned to vehicle " + std::to_string(v));
    }

    void emit(Tick tick, TraceEventKind kind, VehicleId v, StationId st, RequestId r, int count) {
        trace.push_back({tick, kind, v, st, r, count});
    }

    void execute(VehicleId v, Tick now, const Command& cmd) {
        VehState& s = veh[v];
        switch (cmd.kind) {
        case Command::Kind::WaitUntil:
            if (cmd.until <= now)
                throw Error(ErrorCode::IllegalCommand, "WaitUntil must name a future tick");
            s.mode = VehState::Mode::WaitingUntil;
            s.busyUntil = cmd.until;
            s.deciding = false;
            break;
        case Command::Kind::WaitForEvent:
            s.mode = VehState::Mode::WaitingForEvent;
            s.busyUntil = kNever;
            s.deciding = false;
            break;
        case Command::Kind::ReturnToDepot:
            if (s.pos == inst.network.depot) {
                s.mode = VehState::Mode::WaitingForEvent;
                s.busyUntil = kNever;
                s.deciding = false;
                break;
            }
            start_hop(v, now, inst.network.depot);
            break;
        case Command::Kind::MoveTo:
            if (cmd.target == s.pos)
                throw Error(ErrorCode::IllegalCommand, "MoveTo the current station");
            start_hop(v, now, cmd.target);
            break;
        case Command::Kind::PickUp: {
            if (cmd.requests.empty())
                throw Error(ErrorCode::IllegalCommand, "empty PickUp");
            auto ids = cmd.requests;
            std::sort(ids.begin(), ids.end());
            std::vector<ServedCount> served;
            for (RequestId id : ids) {
                std::size_t i = request_index(id, v, "PickUp");
                const Request& r = inst.requests[i];
                if (rstate[i] != RState::Waiting)
                    throw Error(ErrorCode::IllegalCommand,
                                "PickUp of a request that is not waiting");
                if (*r.x != s.pos)
                    throw Error(ErrorCode::IllegalCommand, "PickUp away from the request origin");
                if (s.load + r.z > inst.fleet.capacity)
                    throw Error(ErrorCode::IllegalCommand, "PickUp exceeds capacity");
                rstate[i] = RState::Onboard;
                s.waiting.erase(std::find(s.waiting.begin(), s.waiting.end(), i));
                s.onboard.insert(std::upper_bound(s.onboard.begin(), s.onboard.end(), i), i);
                s.load += r.z;
                served.push_back({id, r.z});
                emit(now, TraceEventKind::Picked, v, s.pos, id, r.z);
            }
            int idx = s.builder.action(s.pos, now, served);
            for (RequestId id : ids) serviceMap[id].pickup = ActionRef{v, idx};
            break;
        }
        case Command::Kind::DropOff: {
            if (cmd.requests.empty())
                throw Error(ErrorCode::IllegalCommand, "empty DropOff");
            auto ids = cmd.requests;
            std::sort(ids.begin(), ids.end());
            std::vector<ServedCount> served;
            for (RequestId id : ids) {
                std::size_t i = request_index(id, v, "DropOff");
                const Request& r = inst.requests[i];
                if (rstate[i] != RState::Onboard)
                    throw Error(ErrorCode::IllegalCommand, "DropOff of a request not onboard");
                if (*r.y != s.pos)
                    throw Error(ErrorCode::IllegalCommand,
                                "DropOff away from the request destination");
                rstate[i] = RState::Served;
                ++servedCount;
                s.onboard.erase(std::find(s.onboard.begin(), s.onboard.end(), i));
                s.load -= r.z;
                served.push_back({id, -r.z});
                emit(now, TraceEventKind::Dropped, v, s.pos, id, r.z);
            }
            int idx = s.builder.action(s.pos, now, served);
            for (RequestId id : ids) serviceMap[id].delivery = ActionRef{v, idx};
            break;
        }
        }
    }

    void start_hop(VehicleId v, Tick now, StationId target) {
        VehState& s = veh[v];
        const Subnetwork& sub = inst.assigned_subnetwork(v);
        if (!sub.contains(target))
            throw Error(ErrorCode::IllegalCommand, "MoveTo target off the assigned subnetwork");
        Tick len = 0;
        StationId next;
        if (sub.kind == SubnetKind::Circuit) {
            int pi = sub.pos_of(s.pos);
            next = sub.stations[(pi + 1) % sub.stations.size()];
            len = sub.edgeLen[pi];
        } else {
            next = line_hop_toward(sub, s.pos, target, len);
        }
        emit(now, TraceEventKind::Departed, v, s.pos, -1, 0);
        s.mode = VehState::Mode::Moving;
        s.deciding = false;
        s.hopFrom = s.pos;
        s.hopTo = next;
        s.hopDepart = now;
        s.busyUntil = now + len;
    }

    void wake_if_idle(VehState& s) {
        if (s.mode == VehState::Mode::WaitingForEvent) s.deciding = true;
    }

    RunResult run() {
        Tick now = 0;
        for (;;) {
            // next event time
            Tick next = kNever;
            if (nextRelease < inst.requests.size())
                next = std::min(next, inst.requests[nextRelease].t);
            if (!eosAnnounced) next = std::min(next, eosAt);
            for (auto& s : veh)
                if (s.mode != VehState::Mode::WaitingForEvent) next = std::min(next, s.busyUntil);

            if (next == kNever) {
                bool atDepot = true;
                for (auto& s : veh)
                    if (s.pos != inst.network.depot) atDepot = false;
                if (servedCount == static_cast<int>(inst.requests.size()) && eosAnnounced && atDepot)
                    break;
                throw Error(ErrorCode::PolicyStuck,
                            "all vehicles wait for events but work remains");
            }
            now = next;
            if (now > timeCap)
                throw Error(ErrorCode::PolicyStuck, "simulation exceeded its time bound");

            while (nextRelease < inst.requests.size() && inst.requests[nextRelease].t == now) {
                std::size_t i = nextRelease++;
                const Request& r = inst.requests[i];
                rstate[i] = RState::Waiting;
                StationId where = r.x ? *r.x : *r.y;
                emit(now, TraceEventKind::Released, -1, where, r.id, r.z);
                VehState& s = veh[owner[i]];
                s.waiting.push_back(i);
                wake_if_idle(s);
            }
            if (!eosAnnounced && eosAt == now) {
                eosAnnounced = true;
                emit(now, TraceEventKind::EndOfSequence, -1, -1, -1, 0);
                for (auto& s : veh) wake_if_idle(s);
            }
            for (auto& s : veh) {
                if (s.mode == VehState::Mode::Moving && s.busyUntil == now) {
                    s.pos = s.hopTo;
                    emit(now, TraceEventKind::Arrived, static_cast<VehicleId>(&s - veh.data()),
                         s.pos, -1, 0);
                    s.builder.hop(s.hopFrom, s.hopDepart, s.hopTo, now);
                    s.deciding = true;
                } else if (s.mode == VehState::Mode::WaitingUntil && s.busyUntil == now) {
                    s.deciding = true;
                }
            }

            for (VehicleId v = 0; v < inst.fleet.vehicles; ++v) {
                VehState& s = veh[v];
                while (s.deciding) {
                    if (s.guardTick != now) {
                        s.guardTick = now;
                        s.guardCount = 0;
                    }
                    if (++s.guardCount > 2000)
                        throw Error(ErrorCode::IllegalCommand,
                                    "policy issues unbounded zero-time commands");
                    s.busyUntil = now;
                    Command cmd = s.policy->decide(make_view(v));
                    execute(v, now, cmd);
                }
            }
        }

        RunResult out;
        out.trace = std::move(trace);
        out.schedule.tours.reserve(veh.size());
        for (auto& s : veh) out.schedule.tours.push_back(s.builder.finish());
        out.schedule.serviceMap = std::move(serviceMap);
        return out;
    }
};

} // namespace

RunResult run_online(const PolicyFactory& factory, const Instance& inst) {
    Sim sim(inst, factory);
    return sim.run();
}

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

Schedule replay(const Trace& trace, const Instance& inst) {
    auto owner = assign_requests(inst);
    const Tick eosAt = eos_tick(inst);

    struct VState {
        StationId pos;
        bool moving = false;
        StationId from = -1, to = -1;
        Tick depTick = 0;
        int load = 0;
        std::unique_ptr<TourBuilder> builder;
    };
    std::vector<VState> veh(inst.fleet.vehicles);
    for (VehicleId v = 0; v < inst.fleet.vehicles; ++v) {
        veh[v].pos = inst.network.depot;
        veh[v].builder = std::make_unique<TourBuilder>(v, inst.assigned_subnetwork(v).id,
                                                       inst.network.depot);
    }
    std::map<RequestId, Service> serviceMap;
    std::vector<int> picked(inst.requests.size(), 0), dropped(inst.requests.size(), 0);

    auto fail = [](const std::string& what) -> void { throw Error(ErrorCode::TraceMismatch, what); };
    auto req_index = [&](RequestId id) -> std::size_t {
        for (std::size_t i = 0; i < inst.requests.size(); ++i)
            if (inst.requests[i].id == id &&
                (inst.requests[i].kind == RequestKind::Pdp ||
                 inst.requests[i].kind == RequestKind::Full))
                return i;
        throw Error(ErrorCode::TraceMismatch, "unknown request in trace");
    };

    std::size_t nextRelease = 0;
    bool sawEos = false;
    Tick prevTick = 0;
    for (const auto& ev : trace) {
        if (ev.tick < prevTick) fail("trace ticks decrease");
        prevTick = ev.tick;
        switch (ev.kind) {
        case TraceEventKind::Released: {
            if (nextRelease >= inst.requests.size()) fail("more releases than requests");
            const Request& r = inst.requests[nextRelease++];
            if (r.id != ev.request || r.t != ev.tick) fail("release does not match the instance");
            break;
        }
        case TraceEventKind::EndOfSequence:
            if (sawEos || ev.tick != eosAt) fail("end-of-sequence at the wrong tick");
            sawEos = true;
            break;
        case TraceEventKind::Departed: {
            VState& s = veh.at(ev.vehicle);
            if (s.moving || ev.station != s.pos) fail("departure from the wrong station");
            s.moving = true;
            s.from = s.pos;
            s.depTick = ev.tick;
            break;
        }
        case TraceEventKind::Arrived: {
            VState& s = veh.at(ev.vehicle);
            if (!s.moving) fail("arrival without departure");
            const Subnetwork& sub = inst.assigned_subnetwork(ev.vehicle);
            int pa = sub.pos_of(s.from);
            int pb = sub.pos_of(ev.station);
            const int n = static_cast<int>(sub.stations.size());
            Tick len;
            if (sub.kind == SubnetKind::Circuit) {
                if (pb != (pa + 1) % n) fail("hop against the circuit direction");
                len = sub.edgeLen[pa];
            } else {
                if (pb != pa + 1 && pb != pa - 1) fail("hop between non-adjacent stations");
                len = sub.edgeLen[std::min(pa, pb)];
            }
            if (ev.tick != s.depTick + len) fail("hop duration does not match the edge length");
            s.builder->hop(s.from, s.depTick, ev.station, ev.tick);
            s.pos = ev.station;
            s.moving = false;
            break;
        }
        case TraceEventKind::Picked: {
            VState& s = veh.at(ev.vehicle);
            std::size_t i = req_index(ev.request);
            const Request& r = inst.requests[i];
            if (s.moving || ev.station != s.pos || *r.x != ev.station) fail("pickup mismatch");
            if (ev.tick < r.t) fail("pickup before release");
            if (owner[i] != ev.vehicle) fail("pickup by the wrong vehicle");
            if (picked[i]++ > 0) fail("request picked twice");
            if (ev.count != r.z) fail("pickup count mismatch");
            s.load += r.z;
            if (s.load > inst.fleet.capacity) fail("capacity exceeded");
            int idx = s.builder->action(s.pos, ev.tick, {{r.id, r.z}});
            serviceMap[r.id].pickup = ActionRef{ev.vehicle, idx};
            break;
        }
        case TraceEventKind::Dropped: {
            VState& s = veh.at(ev.vehicle);
            std::size_t i = req_index(ev.request);
            const Request& r = inst.requests[i];
            if (s.moving || ev.station != s.pos || *r.y != ev.station) fail("dropoff mismatch");
            if (!picked[i] || dropped[i]++ > 0) fail("dropoff without pickup");
            if (ev.count != r.z) fail("dropoff count mismatch");
            s.load -= r.z;
            int idx = s.builder->action(s.pos, ev.tick, {{r.id, -r.z}});
            serviceMap[r.id].delivery = ActionRef{ev.vehicle, idx};
            break;
        }
        }
    }
    if (nextRelease != inst.requests.size()) fail("trace misses releases");
    if (!sawEos && !trace.empty()) fail("trace misses the end-of-sequence mark");

    Schedule out;
    for (auto& s : veh) {
        if (s.moving) fail("trace ends mid-move");
        out.tours.push_back(s.builder->finish());
    }
    out.serviceMap = std::move(serviceMap);
    return out;
}

// ---------------------------------------------------------------------------
// Audit
// ---------------------------------------------------------------------------

std::vector<Violation> audit_trace(const Trace& trace, const Instance& inst) {
    std::vector<Violation> out;
    Tick prev = 0;
    std::map<RequestId, Tick> released, picked, dropped;
    std::map<VehicleId, int> load;
    int eosCount = 0;
    for (const auto& ev : trace) {
        if (ev.tick < prev) out.push_back({"trace", "event ticks decrease"});
        prev = ev.tick;
        switch (ev.kind) {
        case TraceEventKind::Released:
            released[ev.request] = ev.tick;
            break;
        case TraceEventKind::Picked: {
            if (!released.count(ev.request) || released[ev.request] > ev.tick)
                out.push_back({"request " + std::to_string(ev.request), "picked before release"});
            if (picked.count(ev.request))
                out.push_back({"request " + std::to_string(ev.request), "picked twice"});
            picked[ev.request] = ev.tick;
            load[ev.vehicle] += ev.count;
            if (load[ev.vehicle] > inst.fleet.capacity)
                out.push_back({"vehicle " + std::to_string(ev.vehicle), "onboard count exceeds Cap"});
            break;
        }
        case TraceEventKind::Dropped:
            if (!picked.count(ev.request) || picked[ev.request] > ev.tick)
                out.push_back({"request " + std::to_string(ev.request), "dropped before pickup"});
            if (dropped.count(ev.request))
                out.push_back({"request " + std::to_string(ev.request), "dropped twice"});
            dropped[ev.request] = ev.tick;
            load[ev.vehicle] -= ev.count;
            break;
        case TraceEventKind::EndOfSequence:
            ++eosCount;
            if (ev.tick != eos_tick(inst))
                out.push_back({"trace", "end-of-sequence not one tick after the last release"});
            break;
        default:
            break;
        }
    }
    for (const auto& r : inst.requests) {
        if (r.kind != RequestKind::Pdp && r.kind != RequestKind::Full) continue;
        if (!released.count(r.id) || released[r.id] != r.t)
            out.push_back({"request " + std::to_string(r.id), "release missing or mistimed"});
        if (!picked.count(r.id))
            out.push_back({"request " + std::to_string(r.id), "never picked"});
        if (!dropped.count(r.id))
            out.push_back({"request " + std::to_string(r.id), "never dropped"});
    }
    if (!trace.empty() && eosCount != 1)
        out.push_back({"trace", "expected exactly one end-of-sequence mark"});
    return out;
}

// ---------------------------------------------------------------------------
// Trace text form
// ---------------------------------------------------------------------------

void dump_trace(std::ostream& os, const Trace& trace) {
    for (const auto& ev : trace) {
        os << ev.tick << " " << event_kind_name(ev.kind) << " ";
        if (ev.vehicle >= 0) os << ev.vehicle;
        else os << "-";
        os << " ";
        if (ev.station >= 0) os << ev.station;
        else os << "-";
        os << " ";
        if (ev.request >= 0) os << "r" << ev.request << ":" << ev.count;
        else os << "-";
        os << "\n";
    }
}

Trace parse_trace(std::istream& is) {
    Trace out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind, vehicle, station, payload;
        TraceEvent ev;
        if (!(ls >> ev.tick >> kind >> vehicle >> station >> payload))
            throw Error(ErrorCode::ParseError, "bad trace line: " + line);
        if (kind == "released") ev.kind = TraceEventKind::Released;
        else if (kind == "departed") ev.kind = TraceEventKind::Departed;
        else if (kind == "arrived") ev.kind = TraceEventKind::Arrived;
        else if (kind == "picked") ev.kind = TraceEventKind::Picked;
        else if (kind == "dropped") ev.kind = TraceEventKind::Dropped;
        else if (kind == "eos") ev.kind = TraceEventKind::EndOfSequence;
        else throw Error(ErrorCode::ParseError, "unknown trace event: " + kind);
        ev.vehicle = vehicle == "-" ? -1 : std::stoi(vehicle);
        ev.station = station == "-" ? -1 : std::stoi(station);
        if (payload != "-") {
            auto colon = payload.find(':');
            if (payload.empty() || payload[0] != 'r' || colon == std::string::npos)
                throw Error(ErrorCode::ParseError, "bad trace payload: " + payload);
            ev.request = std::stoi(payload.substr(1, colon - 1));
            ev.count = std::stoi(payload.substr(colon + 1));
        }
        out.push_back(ev);
    }
    return out;
}

} // namespace fleetsim
