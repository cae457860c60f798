#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fleetsim/error.hpp"

namespace fleetsim {

using Tick = long long;
using StationId = int;
using RequestId = int;
using VehicleId = int;

// ---------------------------------------------------------------------------
// Static network
// ---------------------------------------------------------------------------

struct Network {
    struct Node {
        StationId id;
        std::string label; // "", "parking", "building", "restaurant"
    };
    struct Edge {
        StationId u;
        StationId v;
        Tick len;
    };

    std::vector<Node> nodes;
    std::vector<Edge> edges;
    StationId depot = 0;

    bool has_node(StationId id) const;
    const Node* find_node(StationId id) const;
    /// Length of the undirected edge {u,v}, or -1 if absent.
    Tick edge_len(StationId u, StationId v) const;

    std::vector<Violation> validate() const;
};

/// All-pairs shortest-path table over a Network; entries are integer ticks.
class MetricClosure {
public:
    MetricClosure() = default;

    Tick dist(StationId u, StationId v) const;
    const std::vector<StationId>& stations() const { return stations_; }

    friend MetricClosure build_metric(const Network& net);

private:
    std::vector<StationId> stations_;
    std::unordered_map<StationId, int> index_;
    std::vector<std::vector<Tick>> dist_;
};

/// Throws Error(GraphNotConnected) if some station pair is unreachable.
MetricClosure build_metric(const Network& net);

// ---------------------------------------------------------------------------
// Subnetworks
// ---------------------------------------------------------------------------

enum class SubnetKind { Circuit, Line };

const char* subnet_kind_name(SubnetKind k);

/// A circuit (one-way cycle) or line (two-way path) overlay on the network.
/// `stations` lists the traversal order; a circuit is driven in list order only.
struct Subnetwork {
    int id = 0;
    SubnetKind kind = SubnetKind::Circuit;
    std::vector<StationId> stations;
    std::size_t originIndex = 0;

    // Filled by bind():
    std::vector<Tick> edgeLen; // circuit: stations.size() entries (incl. closing edge); line: size-1
    std::vector<Tick> prefix;  // prefix[i] = distance from stations[0] to stations[i] along the list
    Tick totalLen = 0;
    bool bound = false;

    /// Resolves edge lengths against the parent network.
    /// Throws Error(BadParams) if consecutive stations are not network edges.
    void bind(const Network& net);

    bool contains(StationId v) const;
    /// Index of v in `stations`; throws Error(NotOnSubnetwork).
    int pos_of(StationId v) const;
    StationId origin() const { return stations.at(originIndex); }
    std::size_t size() const { return stations.size(); }

    /// Circuit only: next station in driving direction.
    StationId next_station(StationId v) const;
    /// Circuit only: travel cost from u to v in the fixed direction; 0 for u == v.
    Tick circuit_distance(StationId u, StationId v) const;
    /// Distance between two stations along the line/circuit list (undirected).
    Tick span(StationId u, StationId v) const;
    /// Line only: distance of v from the origin end.
    Tick offset_from_origin(StationId v) const;
};

/// Spec operation wrapper; requires sub.kind == Circuit.
Tick circuit_distance(const Subnetwork& sub, StationId u, StationId v);

// ---------------------------------------------------------------------------
// Requests, tasks, fleet
// ---------------------------------------------------------------------------

enum class RequestKind { Pickup, Delivery, Pdp, Full };

const char* request_kind_name(RequestKind k);

/// The 6-tuple (t, x, y, p, q, z); fields absent per kind.
/// A Pickup request and its Delivery twin share one id.
struct Request {
    RequestId id = 0;
    RequestKind kind = RequestKind::Pdp;
    Tick t = 0;
    std::optional<StationId> x;
    std::optional<StationId> y;
    std::optional<Tick> p;
    std::optional<Tick> q;
    int z = 1;

    bool operator==(const Request&) const = default;
};

enum class TaskKind { PickupTask, DeliveryTask, PdpTask, FullTask };

struct Task {
    int id = 0;
    TaskKind kind = TaskKind::PdpTask;
    RequestId request = 0;
    int subnetwork = 0;
    Tick t = 0;
    std::optional<StationId> x;
    std::optional<StationId> y;
    int z = 1;
    std::optional<Tick> pick; // FullTask only
    std::optional<Tick> drop; // FullTask only
};

struct FleetConfig {
    int vehicles = 1;
    int capacity = 1; // Cap; speed is fixed at 1 distance unit per tick
};

enum class Scenario { Morning, Evening, Lunch, Emergency, Other };
enum class Objective { TotalTourLength, Makespan };

const char* scenario_name(Scenario s);
const char* objective_name(Objective o);

// ---------------------------------------------------------------------------
// Instance
// ---------------------------------------------------------------------------

/// Immutable problem instance: world + fleet + time-ordered request sequence.
struct Instance {
    std::string id;
    Network network;
    MetricClosure metric;
    std::vector<Subnetwork> subnetworks;
    FleetConfig fleet;
    std::vector<Request> requests; // sorted by (t, id)
    Scenario scenario = Scenario::Other;
    Objective objective = Objective::TotalTourLength;

    /// Builds metric, binds subnetworks, sorts requests.
    /// Throws Error on structurally unusable input.
    void finalize();

    /// Static vehicle-to-subnetwork assignment: vehicle i drives subnetwork i mod #subs.
    const Subnetwork& assigned_subnetwork(VehicleId v) const;
    const Request* find_request(RequestId id, RequestKind kind) const;
    Tick last_release() const;
};

/// Semantic checks on a finalized instance (request fields, windows,
/// z <= Cap, coverage, depot membership). Empty result == valid.
std::vector<Violation> validate_instance(const Instance& inst);

/// Builds the operator task for a request: matching kind, covering subnetwork,
/// earliest-feasible pick/drop for Full requests.
/// Throws NoCoveringSubnetwork / InfeasibleWindow.
Task make_task(const Request& r, const std::vector<Subnetwork>& subs, const MetricClosure& metric);

/// Checks a subnetwork partition against a scenario's covering rules.
/// Unrecognized node labels throw Error(LabelError).
std::vector<Violation> validate_partition(const Network& net,
                                          const std::vector<Subnetwork>& subs,
                                          Scenario scenario,
                                          const MetricClosure& metric);

} // namespace fleetsim
