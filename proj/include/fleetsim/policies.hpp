#pragma once

#include <string>

#include "fleetsim/engine.hpp"

namespace fleetsim {

/// Factory for one of the named online policies: "sir", "sif_m", "sif_e", "main".
/// The tram policies require a circuit assignment, main requires a line;
/// a mismatch throws AssignedToLine / AssignedToCircuit when the run starts.
PolicyFactory make_policy(const std::string& name);

bool is_known_policy(const std::string& name);

} // namespace fleetsim
