#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "fleetsim/core.hpp"

namespace fleetsim {

/// Boarding (delta > 0) or alighting (delta < 0) of passengers at one station.
struct ServedCount {
    RequestId request;
    int count; // signed, matches the action's direction

    bool operator==(const ServedCount&) const = default;
};

struct Action {
    VehicleId vehicle = 0;
    StationId station = 0;
    Tick time = 0;
    int delta = 0;
    Tick duration = 0;
    std::vector<ServedCount> served;

    bool operator==(const Action&) const = default;
};

/// One driven segment. A zero-length stay (single-station path, depart ==
/// arrive) is the structural connector between two actions at one station;
/// a circuit round that ends where it began is a real move with a full path.
struct Move {
    VehicleId vehicle = 0;
    int subnetwork = 0;
    StationId origin = 0;
    Tick depart = 0;
    StationId dest = 0;
    Tick arrive = 0;
    std::vector<StationId> path; // endpoints included
    int load = 0;

    Tick length() const;
    bool is_stay() const { return path.size() <= 1; }
    bool operator==(const Move&) const = default;
};

/// Alternating sequence m1 a1 m2 ... a(n-1) mn for one vehicle;
/// moves.size() == actions.size() + 1, or both empty for a vehicle that never left.
struct Tour {
    VehicleId vehicle = 0;
    std::vector<Move> moves;
    std::vector<Action> actions;

    bool empty() const { return moves.empty() && actions.empty(); }
    Tick final_arrival() const { return moves.empty() ? 0 : moves.back().arrive; }
    Tick length() const;
    bool operator==(const Tour&) const = default;
};

struct ActionRef {
    VehicleId vehicle = 0;
    int index = 0; // into tour.actions

    bool operator==(const ActionRef&) const = default;
};

struct Service {
    std::optional<ActionRef> pickup;
    std::optional<ActionRef> delivery;

    bool operator==(const Service&) const = default;
};

struct Schedule {
    std::vector<Tour> tours; // exactly one per vehicle, indexed by vehicle id
    std::map<RequestId, Service> serviceMap;

    bool operator==(const Schedule&) const = default;
};

/// Empty result iff all tour and move invariants hold.
/// strict_departures additionally reports any waiting slack dep(m) > t(a) + dur(a).
std::vector<Violation> validate_tour(const Tour& tour, const Instance& inst,
                                     bool strict_departures = false);

std::vector<Violation> validate_schedule(const Schedule& s, const Instance& inst,
                                         bool strict_departures = false);

/// Sum of move lengths over all tours; waiting contributes nothing.
Tick total_length(const Schedule& s);

/// Latest depot-return tick over all tours; 0 when nothing moved.
Tick makespan(const Schedule& s);

Tick cost_of(const Schedule& s, Objective obj);

void dump_schedule(std::ostream& os, const Schedule& s);

/// Assembles one vehicle's tour from raw hop and action events (engine runs,
/// oracle witnesses, trace replays all feed the same builder).
///
/// Waiting is folded into departures: the move between two actions departs at
/// t(next action) - path length, which the tour conditions require; the final
/// leg to the depot keeps its physical arrival so the makespan is preserved.
class TourBuilder {
public:
    TourBuilder(VehicleId vehicle, int subnetwork, StationId depot);

    void hop(StationId from, Tick depart, StationId to, Tick arrive);
    /// Returns the index of the action recording these served counts; merges
    /// into the previous action when station, tick and direction all match.
    int action(StationId station, Tick time, std::vector<ServedCount> served);
    Tour finish();

private:
    struct HopRec {
        StationId from, to;
        Tick depart, arrive;
    };
    VehicleId vehicle_;
    int subnetwork_;
    StationId depot_;
    StationId position_;
    std::vector<HopRec> pendingHops_;
    Tour tour_;
    int load_ = 0;
    bool finished_ = false;

    void flush_segment(Tick endTime, bool toAction);
};

} // namespace fleetsim
