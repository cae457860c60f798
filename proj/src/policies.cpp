#include "fleetsim/policies.hpp"

#include <algorithm>
#include <deque>
#include <optional>

namespace fleetsim {

namespace {

/// Released requests the vehicle may board now. A full request only becomes
/// boardable at its earliest start p; `nextReady` carries the soonest such p
/// so a policy can sleep until it instead of waiting for an event that never
/// comes.
struct Pending {
    std::vector<const Request*> now; // (t, id) order, boardable
    std::optional<Tick> nextReady;
};

Pending pending_of(const WorldView& v) {
    Pending out;
    for (const Request* r : v.waiting) {
        if (r->p && v.now < *r->p) {
            if (!out.nextReady || *r->p < *out.nextReady) out.nextReady = *r->p;
        } else {
            out.now.push_back(r);
        }
    }
    return out;
}

std::vector<RequestId> drops_here(const WorldView& v) {
    std::vector<RequestId> ids;
    for (const Request* r : v.onboard)
        if (*r->y == v.position) ids.push_back(r->id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

// ---------------------------------------------------------------------------
// SIR — tram mode. Wait at the circuit origin; any pending request triggers a
// full round; stop wherever passengers leave or board. A boarding is accepted
// only if capacity allows and the destination still lies on this round.
// ---------------------------------------------------------------------------

class SirPolicy : public Policy {
public:
    SirPolicy(const Instance& inst, VehicleId veh) : inst_(inst) {
        if (inst.assigned_subnetwork(veh).kind != SubnetKind::Circuit)
            throw Error(ErrorCode::AssignedToLine, "sir drives circuits only");
    }

    Command decide(const WorldView& v) override {
        const Subnetwork& sub = *v.subnet;
        const StationId origin = sub.origin();
        const int n = static_cast<int>(sub.size());

        if (goingHome_)
            return v.position == inst_.network.depot ? Command::wait_for_event()
                                                     : Command::move_to(inst_.network.depot);

        auto drops = drops_here(v);
        if (!drops.empty()) return Command::drop_off(std::move(drops));

        if (hopsLeft_ == 0) {
            if (v.position != origin) return Command::move_to(origin);
            Pending p = pending_of(v);
            if (p.now.empty()) {
                if (p.nextReady) return Command::wait_until(*p.nextReady);
                if (v.endOfSequence && v.onboard.empty()) {
                    if (origin == inst_.network.depot) return Command::wait_for_event();
                    goingHome_ = true;
                    return Command::move_to(inst_.network.depot);
                }
                return Command::wait_for_event();
            }
            hopsLeft_ = n; // start a full round
        }

        const int hopsDone = n - hopsLeft_;
        auto round_index = [&](StationId st) {
            if (st == origin) return n;
            int d = sub.pos_of(st) - static_cast<int>(sub.originIndex);
            return d >= 0 ? d : d + n;
        };
        std::vector<RequestId> picks;
        int room = v.capacity - v.load;
        for (const Request* r : pending_of(v).now) {
            if (*r->x != v.position) continue;
            if (round_index(*r->y) <= hopsDone) continue; // destination behind this round
            if (r->z > room) continue;
            room -= r->z;
            picks.push_back(r->id);
        }
        if (!picks.empty()) return Command::pick_up(std::move(picks));

        --hopsLeft_;
        return Command::move_to(sub.next_station(v.position));
    }

private:
    const Instance& inst_;
    int hopsLeft_ = 0;
    bool goingHome_ = false;
};

// ---------------------------------------------------------------------------
// SIF_M — tram mode, morning. Passengers board at the parking as they arrive;
// the vehicle starts a round exactly when full. Once the sequence has ended,
// leftovers are flushed in final rounds with partial loads.
// ---------------------------------------------------------------------------

class SifMPolicy : public Policy {
public:
    SifMPolicy(const Instance& inst, VehicleId veh) : inst_(inst) {
        if (inst.assigned_subnetwork(veh).kind != SubnetKind::Circuit)
            throw Error(ErrorCode::AssignedToLine, "sif_m drives circuits only");
    }

    Command decide(const WorldView& v) override {
        const Subnetwork& sub = *v.subnet;
        const StationId origin = sub.origin();

        auto drops = drops_here(v);
        if (!drops.empty()) return Command::drop_off(std::move(drops));

        if (hopsLeft_ == 0) {
            if (v.position != origin) return Command::move_to(origin);
            for (const Request* r : v.waiting)
                if (*r->x != origin)
                    throw Error(ErrorCode::NonOriginPickup,
                                "request " + std::to_string(r->id) +
                                    " does not start at the parking");
            Pending p = pending_of(v);
            std::vector<RequestId> picks;
            int room = v.capacity - v.load;
            for (const Request* r : p.now) {
                if (r->z > room) break; // strict FIFO: a blocked head blocks the queue
                room -= r->z;
                picks.push_back(r->id);
            }
            if (!picks.empty()) return Command::pick_up(std::move(picks));

            if (v.load == v.capacity || (v.endOfSequence && v.load > 0)) {
                hopsLeft_ = static_cast<int>(sub.size());
            } else {
                if (p.nextReady) return Command::wait_until(*p.nextReady);
                if (v.endOfSequence && v.load == 0 && v.waiting.empty() &&
                    origin != inst_.network.depot)
                    return Command::move_to(inst_.network.depot);
                return Command::wait_for_event();
            }
        }

        --hopsLeft_;
        return Command::move_to(sub.next_station(v.position));
    }

private:
    const Instance& inst_;
    int hopsLeft_ = 0;
};

// ---------------------------------------------------------------------------
// SIF_E — tram mode, evening, evolved call-boxes. Wait at the parking until
// the released loads reach Cap, then run one round picking the first Cap
// passengers by release order and return fully loaded.
// ---------------------------------------------------------------------------

class SifEPolicy : public Policy {
public:
    SifEPolicy(const Instance& inst, VehicleId veh) : inst_(inst) {
        if (inst.assigned_subnetwork(veh).kind != SubnetKind::Circuit)
            throw Error(ErrorCode::AssignedToLine, "sif_e drives circuits only");
    }

    Command decide(const WorldView& v) override {
        const Subnetwork& sub = *v.subnet;
        const StationId origin = sub.origin();

        auto drops = drops_here(v);
        if (!drops.empty()) return Command::drop_off(std::move(drops));

        if (hopsLeft_ == 0) {
            if (v.position != origin) return Command::move_to(origin);
            for (const Request* r : v.waiting)
                if (*r->y != origin)
                    throw Error(ErrorCode::NonOriginDropoff,
                                "request " + std::to_string(r->id) +
                                    " does not end at the parking");
            Pending p = pending_of(v);
            int released = 0;
            for (const Request* r : p.now) released += r->z;
            if (released >= v.capacity || (v.endOfSequence && released > 0)) {
                selected_.clear();
                int room = v.capacity;
                for (const Request* r : p.now) {
                    if (r->z > room) break;
                    room -= r->z;
                    selected_.push_back(r->id);
                }
                hopsLeft_ = static_cast<int>(sub.size());
            } else {
                if (p.nextReady) return Command::wait_until(*p.nextReady);
                if (v.endOfSequence && v.waiting.empty() && v.onboard.empty() &&
                    origin != inst_.network.depot)
                    return Command::move_to(inst_.network.depot);
                return Command::wait_for_event();
            }
        }

        std::vector<RequestId> picks;
        for (const Request* r : pending_of(v).now)
            if (*r->x == v.position &&
                std::find(selected_.begin(), selected_.end(), r->id) != selected_.end())
                picks.push_back(r->id);
        if (!picks.empty()) return Command::pick_up(std::move(picks));

        --hopsLeft_;
        return Command::move_to(sub.next_station(v.position));
    }

private:
    const Instance& inst_;
    int hopsLeft_ = 0;
    std::vector<RequestId> selected_;
};

// ---------------------------------------------------------------------------
// MAIN — elevator mode on a line. Each iteration commits to one macro-action
// computed from the requests pending at its start: serve the away-direction
// requests at or beyond the current position, else fetch the toward-origin
// requests while returning, else head back to the origin empty-handed.
// ---------------------------------------------------------------------------

class MainPolicy : public Policy {
public:
    MainPolicy(const Instance& inst, VehicleId veh) : inst_(inst) {
        if (inst.assigned_subnetwork(veh).kind != SubnetKind::Line)
            throw Error(ErrorCode::AssignedToCircuit, "main drives lines only");
    }

    Command decide(const WorldView& v) override {
        if (plan_.empty()) {
            std::optional<Command> c = replan(v);
            if (c) return *c;
        }
        if (plan_.empty()) return Command::wait_for_event();
        Command c = plan_.front();
        plan_.pop_front();
        return c;
    }

private:
    const Instance& inst_;
    std::deque<Command> plan_;
    bool wrappedUp_ = false;

    /// Fills plan_, or returns an immediate wait command.
    std::optional<Command> replan(const WorldView& v) {
        const Subnetwork& sub = *v.subnet;
        auto coord = [&](StationId st) { return sub.offset_from_origin(st); };
        const int originIdx = static_cast<int>(sub.originIndex);
        const int dir = originIdx == 0 ? 1 : -1; // index step in the away direction
        const int posIdx = sub.pos_of(v.position);

        if (v.waiting.empty()) {
            if (!v.endOfSequence) return Command::wait_for_event(); // idle in place
            if (v.position != sub.origin() && !wrappedUp_) {
                for (int i = posIdx - dir;; i -= dir) {
                    plan_.push_back(Command::move_to(sub.stations[i]));
                    if (i == originIdx) break;
                }
                wrappedUp_ = true;
                return std::nullopt;
            }
            wrappedUp_ = true;
            if (v.position != inst_.network.depot)
                return Command::move_to(inst_.network.depot);
            return Command::wait_for_event();
        }

        Pending p = pending_of(v);
        if (p.now.empty()) return Command::wait_until(*p.nextReady);

        // away-direction requests at or beyond the server
        std::vector<const Request*> away;
        for (const Request* r : p.now)
            if (coord(*r->x) >= coord(v.position) && coord(*r->y) > coord(*r->x))
                away.push_back(r);
        if (!away.empty()) {
            auto sel = take_first_cap(away, v.capacity - v.load);
            Tick far = coord(v.position);
            for (const Request* r : sel) far = std::max(far, coord(*r->y));
            for (int i = posIdx;; i += dir) {
                StationId st = sub.stations[i];
                if (i != posIdx) plan_.push_back(Command::move_to(st));
                push_actions(sel, st);
                if (coord(st) == far) break;
            }
            return std::nullopt;
        }

        // toward-origin requests: fetch the furthest pickup, serve while returning
        std::vector<const Request*> toward;
        for (const Request* r : p.now)
            if (coord(*r->x) > coord(*r->y)) toward.push_back(r);
        auto sel = take_first_cap(toward, v.capacity - v.load);
        Tick turn = coord(v.position);
        for (const Request* r : sel) turn = std::max(turn, coord(*r->x));
        int turnIdx = posIdx;
        for (int i = 0; i < static_cast<int>(sub.size()); ++i)
            if (coord(sub.stations[i]) == turn) turnIdx = i;
        for (int i = posIdx + dir; dir > 0 ? i <= turnIdx : i >= turnIdx; i += dir)
            plan_.push_back(Command::move_to(sub.stations[i]));
        for (int i = turnIdx;; i -= dir) {
            StationId st = sub.stations[i];
            if (i != turnIdx) plan_.push_back(Command::move_to(st));
            push_actions(sel, st);
            if (i == originIdx) break;
        }
        return std::nullopt;
    }

    static std::vector<const Request*> take_first_cap(const std::vector<const Request*>& reqs,
                                                      int room) {
        std::vector<const Request*> sel;
        for (const Request* r : reqs) {
            if (r->z > room) break; // first Cap in release order
            room -= r->z;
            sel.push_back(r);
        }
        return sel;
    }

    void push_actions(const std::vector<const Request*>& sel, StationId st) {
        std::vector<RequestId> drops, picks;
        for (const Request* r : sel) {
            if (*r->y == st) drops.push_back(r->id);
            if (*r->x == st) picks.push_back(r->id);
        }
        std::sort(drops.begin(), drops.end());
        std::sort(picks.begin(), picks.end());
        if (!drops.empty()) plan_.push_back(Command::drop_off(std::move(drops)));
        if (!picks.empty()) plan_.push_back(Command::pick_up(std::move(picks)));
    }
};

} // namespace

PolicyFactory make_policy(const std::string& name) {
    if (name == "sir")
        return [](const Instance& i, VehicleId v) -> std::unique_ptr<Policy> {
            return std::make_unique<SirPolicy>(i, v);
        };
    if (name == "sif_m")
        return [](const Instance& i, VehicleId v) -> std::unique_ptr<Policy> {
            return std::make_unique<SifMPolicy>(i, v);
        };
    if (name == "sif_e")
        return [](const Instance& i, VehicleId v) -> std::unique_ptr<Policy> {
            return std::make_unique<SifEPolicy>(i, v);
        };
    if (name == "main")
        return [](const Instance& i, VehicleId v) -> std::unique_ptr<Policy> {
            return std::make_unique<MainPolicy>(i, v);
        };
    throw Error(ErrorCode::BadParams, "unknown policy '" + name + "'");
}

bool is_known_policy(const std::string& name) {
    return name == "sir" || name == "sif_m" || name == "sif_e" || name == "main";
}

} // namespace fleetsim
