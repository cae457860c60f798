#pragma once

#include <iosfwd>
#include <string>

#include "fleetsim/core.hpp"

namespace fleetsim {

/// Instance document format (integer fields only):
///   network:     {nodes: [{id, label?}], edges: [{u, v, len}], depot}
///   subnetworks: [{id, kind: "circuit"|"line", stations: [ids], origin}]
///   fleet:       {k, cap}
///   requests:    [{id, kind, t, x?, y?, p?, q?, z?}]
///   scenario:    "morning"|"evening"|"lunch"|"emergency"|"other"
///   objective:   "total_tour_length"|"makespan"
Instance read_instance(std::istream& is);
Instance read_instance_file(const std::string& path);
void write_instance(std::ostream& os, const Instance& inst);
void write_instance_file(const std::string& path, const Instance& inst);

Scenario parse_scenario(const std::string& name);
Objective parse_objective(const std::string& name);

} // namespace fleetsim
