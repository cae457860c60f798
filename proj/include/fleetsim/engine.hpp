#pragma once

#include <functional>
#include <iosfwd>
#include <memory>

#include "fleetsim/schedule.hpp"

namespace fleetsim {

/// What a policy is allowed to see when queried: the current tick, its own
/// vehicle, and only requests already released (non-clairvoyance by construction).
struct WorldView {
    Tick now = 0;
    VehicleId vehicle = 0;
    StationId position = 0;
    const Subnetwork* subnet = nullptr;
    int capacity = 0;
    int load = 0;
    std::vector<const Request*> waiting; // released, unserved, assigned here; (t, id) order
    std::vector<const Request*> onboard; // ascending id
    bool endOfSequence = false;
};

struct Command {
    enum class Kind { WaitUntil, WaitForEvent, MoveTo, PickUp, DropOff, ReturnToDepot };

    Kind kind = Kind::WaitForEvent;
    Tick until = 0;
    StationId target = -1;
    std::vector<RequestId> requests;

    static Command wait_until(Tick t) { return {Kind::WaitUntil, t, -1, {}}; }
    static Command wait_for_event() { return {Kind::WaitForEvent, 0, -1, {}}; }
    static Command move_to(StationId s) { return {Kind::MoveTo, 0, s, {}}; }
    static Command pick_up(std::vector<RequestId> ids) { return {Kind::PickUp, 0, -1, std::move(ids)}; }
    static Command drop_off(std::vector<RequestId> ids) { return {Kind::DropOff, 0, -1, std::move(ids)}; }
    static Command return_to_depot() { return {Kind::ReturnToDepot, 0, -1, {}}; }
};

class Policy {
public:
    virtual ~Policy() = default;
    virtual Command decide(const WorldView& view) = 0;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>(const Instance&, VehicleId)>;

enum class TraceEventKind { Released, Departed, Arrived, Picked, Dropped, EndOfSequence };

struct TraceEvent {
    Tick tick = 0;
    TraceEventKind kind = TraceEventKind::Released;
    VehicleId vehicle = -1;
    StationId station = -1;
    RequestId request = -1;
    int count = 0;

    bool operator==(const TraceEvent&) const = default;
};

using Trace = std::vector<TraceEvent>;

struct RunResult {
    Schedule schedule;
    Trace trace;
};

/// Runs the online game: requests appear at their release ticks only; the
/// policy of each vehicle is queried at decision epochs (command completion,
/// release while idle, end-of-sequence) and its commands are executed.
/// Throws PolicyStuck / IllegalCommand; see also UnsupportedRequestKind.
RunResult run_online(const PolicyFactory& factory, const Instance& inst);

/// Rebuilds the schedule a trace describes, re-checking travel times,
/// release gates and capacities; any inconsistency throws TraceMismatch.
Schedule replay(const Trace& trace, const Instance& inst);

/// Post-hoc audit: nondecreasing ticks, every request picked and dropped
/// exactly once after release, onboard load within capacity, end-of-sequence
/// placed one tick after the last release.
std::vector<Violation> audit_trace(const Trace& trace, const Instance& inst);

void dump_trace(std::ostream& os, const Trace& trace);
Trace parse_trace(std::istream& is);

} // namespace fleetsim
