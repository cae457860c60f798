#include "fleetsim/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fleetsim {

using nlohmann::json;

Scenario parse_scenario(const std::string& name) {
    if (name == "morning") return Scenario::Morning;
    if (name == "evening") return Scenario::Evening;
    if (name == "lunch") return Scenario::Lunch;
    if (name == "emergency") return Scenario::Emergency;
    if (name == "other") return Scenario::Other;
    throw Error(ErrorCode::ParseError, "unknown scenario '" + name + "'");
}

Objective parse_objective(const std::string& name) {
    if (name == "total_tour_length" || name == "length") return Objective::TotalTourLength;
    if (name == "makespan") return Objective::Makespan;
    throw Error(ErrorCode::ParseError, "unknown objective '" + name + "'");
}

namespace {

RequestKind parse_request_kind(const std::string& name) {
    if (name == "pickup") return RequestKind::Pickup;
    if (name == "delivery") return RequestKind::Delivery;
    if (name == "pdp") return RequestKind::Pdp;
    if (name == "full") return RequestKind::Full;
    throw Error(ErrorCode::ParseError, "unknown request kind '" + name + "'");
}

Instance from_json(const json& j) {
    Instance inst;
    try {
        const json& net = j.at("network");
        for (const auto& n : net.at("nodes")) {
            Network::Node node;
            node.id = n.at("id").get<int>();
            if (n.contains("label")) node.label = n.at("label").get<std::string>();
            inst.network.nodes.push_back(node);
        }
        for (const auto& e : net.at("edges"))
            inst.network.edges.push_back(
                {e.at("u").get<int>(), e.at("v").get<int>(), e.at("len").get<Tick>()});
        inst.network.depot = net.at("depot").get<int>();

        for (const auto& s : j.at("subnetworks")) {
            Subnetwork sub;
            sub.id = s.at("id").get<int>();
            std::string kind = s.at("kind").get<std::string>();
            if (kind == "circuit") sub.kind = SubnetKind::Circuit;
            else if (kind == "line") sub.kind = SubnetKind::Line;
            else throw Error(ErrorCode::ParseError, "unknown subnetwork kind '" + kind + "'");
            for (const auto& st : s.at("stations")) sub.stations.push_back(st.get<int>());
            StationId origin = s.at("origin").get<int>();
            auto it = std::find(sub.stations.begin(), sub.stations.end(), origin);
            if (it == sub.stations.end())
                throw Error(ErrorCode::ParseError, "subnetwork origin not among its stations");
            sub.originIndex = static_cast<std::size_t>(it - sub.stations.begin());
            inst.subnetworks.push_back(std::move(sub));
        }

        inst.fleet.vehicles = j.at("fleet").at("k").get<int>();
        inst.fleet.capacity = j.at("fleet").at("cap").get<int>();

        for (const auto& r : j.at("requests")) {
            Request req;
            req.id = r.at("id").get<int>();
            req.kind = parse_request_kind(r.at("kind").get<std::string>());
            req.t = r.at("t").get<Tick>();
            if (r.contains("x")) req.x = r.at("x").get<int>();
            if (r.contains("y")) req.y = r.at("y").get<int>();
            if (r.contains("p")) req.p = r.at("p").get<Tick>();
            if (r.contains("q")) req.q = r.at("q").get<Tick>();
            if (r.contains("z")) req.z = r.at("z").get<int>();
            inst.requests.push_back(req);
        }

        inst.scenario = parse_scenario(j.at("scenario").get<std::string>());
        inst.objective = parse_objective(j.at("objective").get<std::string>());
        if (j.contains("id")) inst.id = j.at("id").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    inst.finalize();
    return inst;
}

} // namespace

Instance read_instance(std::istream& is) {
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return from_json(j);
}

Instance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    return read_instance(in);
}

void write_instance(std::ostream& os, const Instance& inst) {
    json j;
    j["id"] = inst.id;
    json nodes = json::array();
    for (const auto& n : inst.network.nodes) {
        json node{{"id", n.id}};
        if (!n.label.empty()) node["label"] = n.label;
        nodes.push_back(node);
    }
    json edges = json::array();
    for (const auto& e : inst.network.edges)
        edges.push_back({{"u", e.u}, {"v", e.v}, {"len", e.len}});
    j["network"] = {{"nodes", nodes}, {"edges", edges}, {"depot", inst.network.depot}};

    json subs = json::array();
    for (const auto& s : inst.subnetworks)
        subs.push_back({{"id", s.id},
                        {"kind", subnet_kind_name(s.kind)},
                        {"stations", s.stations},
                        {"origin", s.stations.at(s.originIndex)}});
    j["subnetworks"] = subs;

    j["fleet"] = {{"k", inst.fleet.vehicles}, {"cap", inst.fleet.capacity}};

    json reqs = json::array();
    for (const auto& r : inst.requests) {
        json req{{"id", r.id}, {"kind", request_kind_name(r.kind)}, {"t", r.t}, {"z", r.z}};
        if (r.x) req["x"] = *r.x;
        if (r.y) req["y"] = *r.y;
        if (r.p) req["p"] = *r.p;
        if (r.q) req["q"] = *r.q;
        reqs.push_back(req);
    }
    j["requests"] = reqs;

    j["scenario"] = scenario_name(inst.scenario);
    j["objective"] = objective_name(inst.objective);
    os << j.dump(2) << "\n";
}

void write_instance_file(const std::string& path, const Instance& inst) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    write_instance(out, inst);
}

} // namespace fleetsim
