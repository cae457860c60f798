#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fleetsim/generators.hpp"
#include "fleetsim/rational.hpp"

namespace fleetsim {

/// Per-instance bound a ratio row is checked against, exactly.
struct BoundSpec {
    enum class Kind { None, Value, Cap, CapTimesLen };
    Kind kind = Kind::None;
    Rational value{1, 1}; // for Kind::Value

    static BoundSpec none() { return {}; }
    static BoundSpec exact(long long num, long long den) { return {Kind::Value, {num, den}}; }
    static BoundSpec cap() { return {Kind::Cap, {1, 1}}; }
    static BoundSpec cap_times_len() { return {Kind::CapTimesLen, {1, 1}}; }
};

/// One batch: a generator, a policy, an objective, and how many seeds to run.
struct SuiteItem {
    std::string generator; // fixture name or scenario name ("morning", ...)
    GenParams params;
    int seeds = 1; // scenario generators run seeds 1..seeds; fixtures once
    std::string policy;
    Objective objective = Objective::TotalTourLength;
    BoundSpec bound;
};

struct SuiteConfig {
    std::vector<SuiteItem> items;
};

struct SuiteRow {
    std::string instance_id;
    std::string generator;
    std::uint64_t seed = 0;
    std::string policy;
    Objective objective = Objective::TotalTourLength;
    Tick alg = -1;
    Tick opt = -1;
    Rational ratio{0, 1};
    std::optional<Rational> bound;
    std::optional<bool> satisfied;
    std::string error; // empty on success

    bool operator==(const SuiteRow&) const = default;
};

struct RatioReport {
    std::vector<SuiteRow> rows;

    bool all_bounds_satisfied() const;
    bool any_error() const;
};

/// Evaluates every (item, seed) row: simulate the policy twice (determinism),
/// audit the trace, validate the schedule and the replay, run the oracle,
/// validate its witness, check oracle dominance, and compare the exact ratio
/// against the bound. Failures land in row.error; the suite never aborts.
///
/// Rows are independent; `parallel` fans them out over OpenMP threads and the
/// serial path is the reference the parallel one is tested against.
RatioReport run_suite(const SuiteConfig& config, bool parallel = true);

SuiteRow evaluate_row(const SuiteItem& item, std::uint64_t seed);

Instance instance_for(const SuiteItem& item, std::uint64_t seed);

SuiteConfig load_suite_config(std::istream& is);
void write_csv(std::ostream& os, const RatioReport& report);
void write_json_report(std::ostream& os, const RatioReport& report);

} // namespace fleetsim
