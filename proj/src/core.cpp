#include "fleetsim/core.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

namespace fleetsim {

namespace {
constexpr Tick kInf = std::numeric_limits<Tick>::max() / 4;
} // namespace

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::GraphNotConnected: return "GraphNotConnected";
    case ErrorCode::NotOnSubnetwork: return "NotOnSubnetwork";
    case ErrorCode::NoCoveringSubnetwork: return "NoCoveringSubnetwork";
    case ErrorCode::InfeasibleWindow: return "InfeasibleWindow";
    case ErrorCode::LabelError: return "LabelError";
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::PolicyStuck: return "PolicyStuck";
    case ErrorCode::IllegalCommand: return "IllegalCommand";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::ZeroOptimum: return "ZeroOptimum";
    case ErrorCode::AssignedToLine: return "AssignedToLine";
    case ErrorCode::AssignedToCircuit: return "AssignedToCircuit";
    case ErrorCode::NonOriginPickup: return "NonOriginPickup";
    case ErrorCode::NonOriginDropoff: return "NonOriginDropoff";
    case ErrorCode::UnsupportedRequestKind: return "UnsupportedRequestKind";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Error";
}

std::string violations_to_string(const std::vector<Violation>& v) {
    std::ostringstream os;
    for (const auto& item : v) os << item.where << ": " << item.what << "\n";
    return os.str();
}

const char* subnet_kind_name(SubnetKind k) {
    return k == SubnetKind::Circuit ? "circuit" : "line";
}

const char* request_kind_name(RequestKind k) {
    switch (k) {
    case RequestKind::Pickup: return "pickup";
    case RequestKind::Delivery: return "delivery";
    case RequestKind::Pdp: return "pdp";
    case RequestKind::Full: return "full";
    }
    return "?";
}

const char* scenario_name(Scenario s) {
    switch (s) {
    case Scenario::Morning: return "morning";
    case Scenario::Evening: return "evening";
    case Scenario::Lunch: return "lunch";
    case Scenario::Emergency: return "emergency";
    case Scenario::Other: return "other";
    }
    return "?";
}

const char* objective_name(Objective o) {
    return o == Objective::TotalTourLength ? "total_tour_length" : "makespan";
}

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

bool Network::has_node(StationId id) const { return find_node(id) != nullptr; }

const Network::Node* Network::find_node(StationId id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

Tick Network::edge_len(StationId u, StationId v) const {
    for (const auto& e : edges)
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return e.len;
    return -1;
}

std::vector<Violation> Network::validate() const {
    std::vector<Violation> out;
    if (nodes.empty()) out.push_back({"network", "no stations"});
    std::set<StationId> ids;
    for (const auto& n : nodes) {
        if (!ids.insert(n.id).second)
            out.push_back({"network", "duplicate station id " + std::to_string(n.id)});
    }
    if (!ids.count(depot)) out.push_back({"network", "depot is not a station"});
    std::set<std::pair<StationId, StationId>> seen;
    for (const auto& e : edges) {
        std::string tag = "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
        if (!ids.count(e.u) || !ids.count(e.v)) out.push_back({tag, "unknown endpoint"});
        if (e.u == e.v) out.push_back({tag, "self-loop"});
        if (e.len < 1) out.push_back({tag, "length must be >= 1"});
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second) out.push_back({tag, "duplicate undirected edge"});
    }
    if (out.empty()) {
        try {
            build_metric(*this);
        } catch (const Error&) {
            out.push_back({"network", "graph is not connected"});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// MetricClosure
// ---------------------------------------------------------------------------

MetricClosure build_metric(const Network& net) {
    MetricClosure m;
    for (const auto& n : net.nodes) {
        m.index_[n.id] = static_cast<int>(m.stations_.size());
        m.stations_.push_back(n.id);
    }
    const int n = static_cast<int>(m.stations_.size());
    m.dist_.assign(n, std::vector<Tick>(n, kInf));
    for (int i = 0; i < n; ++i) m.dist_[i][i] = 0;
    for (const auto& e : net.edges) {
        auto iu = m.index_.find(e.u);
        auto iv = m.index_.find(e.v);
        if (iu == m.index_.end() || iv == m.index_.end())
            throw Error(ErrorCode::BadParams, "edge references unknown station");
        m.dist_[iu->second][iv->second] = std::min(m.dist_[iu->second][iv->second], e.len);
        m.dist_[iv->second][iu->second] = m.dist_[iu->second][iv->second];
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (m.dist_[i][k] + m.dist_[k][j] < m.dist_[i][j])
                    m.dist_[i][j] = m.dist_[i][k] + m.dist_[k][j];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m.dist_[i][j] >= kInf)
                throw Error(ErrorCode::GraphNotConnected,
                            "no path between stations " + std::to_string(m.stations_[i]) + " and " +
                                std::to_string(m.stations_[j]));
    return m;
}

Tick MetricClosure::dist(StationId u, StationId v) const {
    auto iu = index_.find(u);
    auto iv = index_.find(v);
    if (iu == index_.end() || iv == index_.end())
        throw Error(ErrorCode::BadParams, "station not in metric closure");
    return dist_[iu->second][iv->second];
}

// ---------------------------------------------------------------------------
// Subnetwork
// ---------------------------------------------------------------------------

void Subnetwork::bind(const Network& net) {
    if (stations.size() < 2)
        throw Error(ErrorCode::BadParams, "subnetwork " + std::to_string(id) + " needs >= 2 stations");
    if (originIndex >= stations.size())
        throw Error(ErrorCode::BadParams, "subnetwork " + std::to_string(id) + " origin out of range");
    std::set<StationId> dedup(stations.begin(), stations.end());
    if (dedup.size() != stations.size())
        throw Error(ErrorCode::BadParams, "subnetwork " + std::to_string(id) + " repeats a station");

    edgeLen.clear();
    prefix.assign(stations.size(), 0);
    const std::size_t pairs = kind == SubnetKind::Circuit ? stations.size() : stations.size() - 1;
    for (std::size_t i = 0; i < pairs; ++i) {
        StationId a = stations[i];
        StationId b = stations[(i + 1) % stations.size()];
        Tick len = net.edge_len(a, b);
        if (len < 0)
            throw Error(ErrorCode::BadParams, "subnetwork " + std::to_string(id) + ": (" +
                                                  std::to_string(a) + "," + std::to_string(b) +
                                                  ") is not a network edge");
        edgeLen.push_back(len);
        if (i + 1 < stations.size()) prefix[i + 1] = prefix[i] + len;
    }
    totalLen = 0;
    for (Tick l : edgeLen) totalLen += l;
    bound = true;
}

bool Subnetwork::contains(StationId v) const {
    return std::find(stations.begin(), stations.end(), v) != stations.end();
}

int Subnetwork::pos_of(StationId v) const {
    auto it = std::find(stations.begin(), stations.end(), v);
    if (it == stations.end())
        throw Error(ErrorCode::NotOnSubnetwork, "station " + std::to_string(v) +
                                                    " not on subnetwork " + std::to_string(id));
    return static_cast<int>(it - stations.begin());
}

StationId Subnetwork::next_station(StationId v) const {
    if (kind != SubnetKind::Circuit)
        throw Error(ErrorCode::BadParams, "next_station is circuit-only");
    int i = pos_of(v);
    return stations[(i + 1) % stations.size()];
}

Tick Subnetwork::circuit_distance(StationId u, StationId v) const {
    if (kind != SubnetKind::Circuit)
        throw Error(ErrorCode::BadParams, "circuit_distance on a line");
    int iu = pos_of(u);
    int iv = pos_of(v);
    if (iu == iv) return 0;
    Tick d = 0;
    for (int i = iu; i != iv; i = (i + 1) % static_cast<int>(stations.size()))
        d += edgeLen[i];
    return d;
}

Tick Subnetwork::span(StationId u, StationId v) const {
    int iu = pos_of(u);
    int iv = pos_of(v);
    if (iu > iv) std::swap(iu, iv);
    return prefix[iv] - prefix[iu];
}

Tick Subnetwork::offset_from_origin(StationId v) const {
    int i = pos_of(v);
    Tick po = prefix[originIndex];
    Tick pv = prefix[i];
    return pv >= po ? pv - po : po - pv;
}

Tick circuit_distance(const Subnetwork& sub, StationId u, StationId v) {
    if (sub.kind != SubnetKind::Circuit)
        throw Error(ErrorCode::BadParams, "circuit_distance on a line subnetwork");
    return sub.circuit_distance(u, v);
}

// ---------------------------------------------------------------------------
// Instance
// ---------------------------------------------------------------------------

void Instance::finalize() {
    metric = build_metric(network);
    for (auto& s : subnetworks) s.bind(network);
    std::stable_sort(requests.begin(), requests.end(),
                     [](const Request& a, const Request& b) {
                         if (a.t != b.t) return a.t < b.t;
                         return a.id < b.id;
                     });
}

const Subnetwork& Instance::assigned_subnetwork(VehicleId v) const {
    if (subnetworks.empty())
        throw Error(ErrorCode::BadParams, "instance has no subnetworks");
    return subnetworks[static_cast<std::size_t>(v) % subnetworks.size()];
}

const Request* Instance::find_request(RequestId id, RequestKind kind) const {
    for (const auto& r : requests)
        if (r.id == id && r.kind == kind) return &r;
    return nullptr;
}

Tick Instance::last_release() const {
    Tick t = 0;
    for (const auto& r : requests) t = std::max(t, r.t);
    return t;
}

namespace {

bool kind_needs_x(RequestKind k) { return k != RequestKind::Delivery; }
bool kind_needs_y(RequestKind k) { return k != RequestKind::Pickup; }

} // namespace

std::vector<Violation> validate_instance(const Instance& inst) {
    std::vector<Violation> out = inst.network.validate();

    for (const auto& sub : inst.subnetworks) {
        std::string tag = "subnetwork " + std::to_string(sub.id);
        for (StationId v : sub.stations)
            if (!inst.network.has_node(v))
                out.push_back({tag, "station " + std::to_string(v) + " not in network"});
        if (!sub.bound) {
            out.push_back({tag, "not bound to network"});
            continue;
        }
        if (sub.kind == SubnetKind::Line && sub.originIndex != 0 &&
            sub.originIndex != sub.stations.size() - 1)
            out.push_back({tag, "line origin must be an end of the line"});
        if (!sub.contains(inst.network.depot))
            out.push_back({tag, "depot not on subnetwork"});
    }

    if (inst.fleet.vehicles < 1) out.push_back({"fleet", "k must be >= 1"});
    if (inst.fleet.capacity < 1) out.push_back({"fleet", "Cap must be >= 1"});

    std::map<RequestId, int> pickupIds, deliveryIds;
    std::set<RequestId> plainIds;
    const Request* prev = nullptr;
    for (const auto& r : inst.requests) {
        std::string tag = "request " + std::to_string(r.id);
        if (prev && (prev->t > r.t || (prev->t == r.t && prev->id > r.id)))
            out.push_back({tag, "requests not sorted by (release, id)"});
        prev = &r;
        if (r.t < 0) out.push_back({tag, "release tick < 0"});
        if (r.z < 1) out.push_back({tag, "passenger count < 1"});
        if (r.z > inst.fleet.capacity)
            out.push_back({tag, "passenger count exceeds vehicle capacity"});
        if (kind_needs_x(r.kind) && !r.x) out.push_back({tag, "missing origin"});
        if (!kind_needs_x(r.kind) && r.x) out.push_back({tag, "delivery request must not carry an origin"});
        if (kind_needs_y(r.kind) && !r.y) out.push_back({tag, "missing destination"});
        if (!kind_needs_y(r.kind) && r.y) out.push_back({tag, "pickup request must not carry a destination"});
        if (r.x && !inst.network.has_node(*r.x)) out.push_back({tag, "origin not a station"});
        if (r.y && !inst.network.has_node(*r.y)) out.push_back({tag, "destination not a station"});
        if (r.x && r.y && *r.x == *r.y) out.push_back({tag, "origin equals destination"});
        if (r.kind == RequestKind::Full) {
            if (!r.p || !r.q) {
                out.push_back({tag, "full request needs p and q"});
            } else if (r.x && r.y && inst.network.has_node(*r.x) && inst.network.has_node(*r.y)) {
                if (*r.p < 0) out.push_back({tag, "earliest start < 0"});
                if (*r.q < *r.p + inst.metric.dist(*r.x, *r.y))
                    out.push_back({tag, "time window shorter than the ride"});
            }
        } else if (r.p || r.q) {
            out.push_back({tag, "time window on a non-full request"});
        }
        if ((r.kind == RequestKind::Pickup || r.kind == RequestKind::Delivery) && r.z != 1)
            out.push_back({tag, "split requests carry one passenger"});
        if (r.kind == RequestKind::Pickup) pickupIds[r.id]++;
        else if (r.kind == RequestKind::Delivery) deliveryIds[r.id]++;
        else if (!plainIds.insert(r.id).second)
            out.push_back({tag, "duplicate request id"});

        // pdp/full rides must fit one subnetwork
        if ((r.kind == RequestKind::Pdp || r.kind == RequestKind::Full) && r.x && r.y) {
            bool covered = false;
            for (const auto& sub : inst.subnetworks)
                if (sub.contains(*r.x) && sub.contains(*r.y)) covered = true;
            if (!covered)
                out.push_back({tag, "origin and destination share no subnetwork"});
        }
    }
    // Pickup/Delivery halves pair up via a shared id.
    for (const auto& [id, n] : pickupIds) {
        std::string tag = "request " + std::to_string(id);
        if (n > 1) out.push_back({tag, "duplicate pickup half"});
        if (!deliveryIds.count(id)) out.push_back({tag, "pickup half without delivery half"});
        if (plainIds.count(id)) out.push_back({tag, "id shared with a pdp/full request"});
    }
    for (const auto& [id, n] : deliveryIds) {
        std::string tag = "request " + std::to_string(id);
        if (n > 1) out.push_back({tag, "duplicate delivery half"});
        if (!pickupIds.count(id)) out.push_back({tag, "delivery half without pickup half"});
        if (plainIds.count(id)) out.push_back({tag, "id shared with a pdp/full request"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// make_task
// ---------------------------------------------------------------------------

Task make_task(const Request& r, const std::vector<Subnetwork>& subs, const MetricClosure& metric) {
    const Subnetwork* home = nullptr;
    for (const auto& sub : subs) {
        bool ok = true;
        if (r.x && !sub.contains(*r.x)) ok = false;
        if (r.y && !sub.contains(*r.y)) ok = false;
        if (ok) {
            home = &sub;
            break;
        }
    }
    if (!home)
        throw Error(ErrorCode::NoCoveringSubnetwork,
                    "no subnetwork covers request " + std::to_string(r.id));

    Task task;
    task.id = r.id;
    task.request = r.id;
    task.subnetwork = home->id;
    task.t = r.t;
    task.x = r.x;
    task.y = r.y;
    task.z = r.z;
    switch (r.kind) {
    case RequestKind::Pickup: task.kind = TaskKind::PickupTask; break;
    case RequestKind::Delivery: task.kind = TaskKind::DeliveryTask; break;
    case RequestKind::Pdp: task.kind = TaskKind::PdpTask; break;
    case RequestKind::Full: {
        task.kind = TaskKind::FullTask;
        Tick d = metric.dist(*r.x, *r.y);
        Tick pick = std::max(*r.p, r.t);
        if (pick > *r.q - d)
            throw Error(ErrorCode::InfeasibleWindow,
                        "request " + std::to_string(r.id) + " cannot be picked in time");
        task.pick = pick;
        task.drop = pick + d;
        break;
    }
    }
    return task;
}

// ---------------------------------------------------------------------------
// validate_partition
// ---------------------------------------------------------------------------

namespace {

struct LabelSets {
    std::vector<StationId> parkings;
    std::vector<StationId> buildings;
    std::vector<StationId> restaurants;
};

LabelSets collect_labels(const Network& net) {
    LabelSets out;
    for (const auto& n : net.nodes) {
        if (n.label.empty()) continue;
        if (n.label == "parking") out.parkings.push_back(n.id);
        else if (n.label == "building") out.buildings.push_back(n.id);
        else if (n.label == "restaurant") out.restaurants.push_back(n.id);
        else
            throw Error(ErrorCode::LabelError,
                        "station " + std::to_string(n.id) + " has unknown label '" + n.label + "'");
    }
    return out;
}

bool covered(const std::vector<Subnetwork>& subs, StationId v) {
    for (const auto& s : subs)
        if (s.contains(v)) return true;
    return false;
}

bool is_hamilton_circuit(const Network& net, const Subnetwork& sub) {
    if (sub.kind != SubnetKind::Circuit) return false;
    if (sub.stations.size() != net.nodes.size()) return false;
    for (const auto& n : net.nodes)
        if (!sub.contains(n.id)) return false;
    return true;
}

} // namespace

std::vector<Violation> validate_partition(const Network& net,
                                          const std::vector<Subnetwork>& subs,
                                          Scenario scenario,
                                          const MetricClosure& metric) {
    std::vector<Violation> out;
    LabelSets labels = collect_labels(net);

    auto check_buildings_covered = [&]() {
        for (StationId b : labels.buildings)
            if (!covered(subs, b))
                out.push_back({"building " + std::to_string(b), "not covered by any subnetwork"});
    };

    switch (scenario) {
    case Scenario::Morning:
    case Scenario::Evening: {
        check_buildings_covered();
        for (const auto& sub : subs) {
            int parkings = 0;
            for (StationId v : sub.stations)
                if (std::find(labels.parkings.begin(), labels.parkings.end(), v) !=
                    labels.parkings.end())
                    ++parkings;
            if (parkings != 1)
                out.push_back({"subnetwork " + std::to_string(sub.id),
                               "contains " + std::to_string(parkings) + " parkings, expected 1"});
        }
        // Every building must share a subnetwork with one of its nearest parkings.
        for (StationId b : labels.buildings) {
            if (labels.parkings.empty()) break;
            Tick best = kInf;
            for (StationId p : labels.parkings) best = std::min(best, metric.dist(b, p));
            bool ok = false;
            for (const auto& sub : subs) {
                if (!sub.contains(b)) continue;
                for (StationId p : labels.parkings)
                    if (metric.dist(b, p) == best && sub.contains(p)) ok = true;
            }
            if (!ok)
                out.push_back({"building " + std::to_string(b),
                               "nearest parking lies in another subnetwork"});
        }
        break;
    }
    case Scenario::Lunch: {
        check_buildings_covered();
        if (labels.restaurants.size() != 1) {
            out.push_back({"network", "lunch scenario needs exactly one restaurant, found " +
                                          std::to_string(labels.restaurants.size())});
            break;
        }
        StationId rest = labels.restaurants.front();
        for (const auto& sub : subs) {
            std::string tag = "subnetwork " + std::to_string(sub.id);
            if (sub.kind != SubnetKind::Line) out.push_back({tag, "lunch partitions use lines only"});
            if (!sub.contains(rest))
                out.push_back({tag, "line misses the restaurant"});
        }
        break;
    }
    case Scenario::Emergency: {
        if (subs.size() != 1) {
            out.push_back({"partition", "emergency uses a single circuit, found " +
                                            std::to_string(subs.size()) + " subnetworks"});
            break;
        }
        if (!is_hamilton_circuit(net, subs.front()))
            out.push_back({"subnetwork " + std::to_string(subs.front().id),
                           "not a circuit visiting every station exactly once"});
        break;
    }
    case Scenario::Other: {
        for (const auto& n : net.nodes)
            if (!covered(subs, n.id))
                out.push_back({"station " + std::to_string(n.id), "not covered by any subnetwork"});
        bool hamilton = subs.size() == 1 && is_hamilton_circuit(net, subs.front());
        bool intersecting = true;
        for (std::size_t i = 0; i < subs.size() && intersecting; ++i)
            for (std::size_t j = i + 1; j < subs.size() && intersecting; ++j) {
                bool share = false;
                for (StationId v : subs[i].stations)
                    if (subs[j].contains(v)) share = true;
                if (!share) intersecting = false;
            }
        if (!hamilton && !intersecting)
            out.push_back({"partition", "subnetworks neither pairwise intersect nor form one"
                                        " circuit over all stations"});
        break;
    }
    }
    return out;
}

} // namespace fleetsim
