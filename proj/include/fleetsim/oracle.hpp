#pragma once

#include <string>

#include "fleetsim/rational.hpp"
#include "fleetsim/schedule.hpp"

namespace fleetsim {

struct OptResult {
    Tick cost = 0;
    Schedule witness;
    long long explored = 0; // states expanded by the search
};

/// Exact clairvoyant optimum over all feasible schedules under the same mode
/// constraints the online vehicles face (circuits one-way, lines two-way),
/// release dates, capacity, time windows, and depot start/end.
///
/// Desk-scale guard: |R| <= 12, stations per assigned subnetwork <= 8, k <= 2
/// (k == 2 additionally |R| <= 10); beyond it throws InstanceTooLarge.
/// Throws Infeasible when no schedule can serve every request.
OptResult opt_cost(const Instance& inst, Objective obj);

/// ALG(sigma) / OPT(sigma) as an exact rational. Runs the named policy online,
/// then the oracle. OPT = 0 with nonzero ALG throws ZeroOptimum; 0/0 is 1/1.
Rational competitive_ratio(const std::string& policy, const Instance& inst, Objective obj);

} // namespace fleetsim
