#pragma once

#include <cstdint>
#include <string>

#include "fleetsim/core.hpp"

namespace fleetsim {

/// Generator parameters. A zero means "use the generator's default", which for
/// seeded scenario generators is a deterministic draw from the seed
/// (n in [3,6], requests in [1,8], cap in [1,3]).
struct GenParams {
    int n = 0;
    int cap = 0;
    int vehicles = 1;
    Tick scale = 0; // integer edge-length factor S; adversarial eps stays 1
    std::uint64_t seed = 0;
    int requests = 0;
    SubnetKind kind = SubnetKind::Circuit;
    Tick horizon = 0; // release window; default 10 * subnetwork length
};

/// Adversarial fixtures, reproduced verbatim (scaled by S where stated):
///   ex1_sir_length      Cap*n hop rides released one full round apart
///   ex2_sir_makespan    two origin rides released eps apart
///   ex3_sife_makespan   one full-load evening ride released at (n-1)S
///   ex4_sifm_makespan   three origin rides with an announced final request
///   ex5_main_makespan   two line rides from the origin released eps apart
///   main_length_lb      origin rides timed to force a full oscillation each
/// Throws UnknownGenerator / BadParams.
Instance gen_example(const std::string& name, GenParams params);

/// Seeded random scenario instances; the same seed reproduces the instance
/// exactly. Morning: every ride starts at the parking. Evening: every ride
/// ends there. Lunch: rides to or from the restaurant on a line. Other:
/// general circuit rides (destination ahead of the origin on the round).
Instance gen_scenario(Scenario scenario, GenParams params);

} // namespace fleetsim
