#include "fleetsim/suite.hpp"

#include <algorithm>
#include <ostream>

#include "json.hpp"

#include "fleetsim/engine.hpp"
#include "fleetsim/instance_io.hpp"
#include "fleetsim/oracle.hpp"
#include "fleetsim/policies.hpp"

namespace fleetsim {

using nlohmann::json;

namespace {

bool is_example_name(const std::string& name) {
    return name.rfind("ex", 0) == 0 || name == "main_length_lb";
}

Rational bound_value(const BoundSpec& spec, const Instance& inst) {
    switch (spec.kind) {
    case BoundSpec::Kind::Value: return spec.value;
    case BoundSpec::Kind::Cap: return {inst.fleet.capacity, 1};
    case BoundSpec::Kind::CapTimesLen:
        return {inst.fleet.capacity * inst.assigned_subnetwork(0).totalLen, 1};
    case BoundSpec::Kind::None: break;
    }
    return {0, 1};
}

} // namespace

Instance instance_for(const SuiteItem& item, std::uint64_t seed) {
    GenParams p = item.params;
    p.seed = seed;
    if (is_example_name(item.generator)) return gen_example(item.generator, p);
    return gen_scenario(parse_scenario(item.generator), p);
}

SuiteRow evaluate_row(const SuiteItem& item, std::uint64_t seed) {
    SuiteRow row;
    row.generator = item.generator;
    row.seed = seed;
    row.policy = item.policy;
    row.objective = item.objective;
    try {
        Instance inst = instance_for(item, seed);
        row.instance_id = inst.id;
        if (auto v = validate_instance(inst); !v.empty())
            throw Error(ErrorCode::BadParams, "invalid instance: " + v.front().what);

        RunResult first = run_online(make_policy(item.policy), inst);
        RunResult second = run_online(make_policy(item.policy), inst);
        if (!(first.trace == second.trace) || !(first.schedule == second.schedule))
            throw Error(ErrorCode::TraceMismatch, "policy run is not deterministic");
        if (auto v = audit_trace(first.trace, inst); !v.empty())
            throw Error(ErrorCode::TraceMismatch, "trace audit: " + v.front().what);
        if (auto v = validate_schedule(first.schedule, inst); !v.empty())
            throw Error(ErrorCode::TraceMismatch, "policy schedule: " + v.front().what);
        if (!(replay(first.trace, inst) == first.schedule))
            throw Error(ErrorCode::TraceMismatch, "replay differs from the live schedule");
        row.alg = cost_of(first.schedule, item.objective);

        OptResult opt = opt_cost(inst, item.objective);
        if (auto v = validate_schedule(opt.witness, inst); !v.empty())
            throw Error(ErrorCode::Infeasible, "oracle witness: " + v.front().what);
        if (cost_of(opt.witness, item.objective) != opt.cost)
            throw Error(ErrorCode::Infeasible, "oracle witness cost mismatch");
        row.opt = opt.cost;
        if (row.opt > row.alg)
            throw Error(ErrorCode::Infeasible, "oracle exceeds the policy cost");

        if (row.opt == 0) {
            if (row.alg != 0)
                throw Error(ErrorCode::ZeroOptimum, "OPT = 0 with nonzero policy cost");
            row.ratio = {1, 1};
        } else {
            row.ratio = {row.alg, row.opt};
        }
        if (item.bound.kind != BoundSpec::Kind::None) {
            row.bound = bound_value(item.bound, inst);
            row.satisfied = row.ratio <= *row.bound;
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

bool RatioReport::all_bounds_satisfied() const {
    for (const auto& r : rows)
        if (r.satisfied && !*r.satisfied) return false;
    return true;
}

bool RatioReport::any_error() const {
    for (const auto& r : rows)
        if (!r.error.empty()) return true;
    return false;
}

RatioReport run_suite(const SuiteConfig& config, bool parallel) {
    struct Job {
        const SuiteItem* item;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& item : config.items) {
        if (is_example_name(item.generator) || item.seeds <= 1) {
            jobs.push_back({&item, item.params.seed});
        } else {
            for (int s = 1; s <= item.seeds; ++s)
                jobs.push_back({&item, static_cast<std::uint64_t>(s)});
        }
    }

    RatioReport report;
    report.rows.resize(jobs.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(jobs.size()); ++i)
            report.rows[i] = evaluate_row(*jobs[i].item, jobs[i].seed);
    } else {
        for (std::size_t i = 0; i < jobs.size(); ++i)
            report.rows[i] = evaluate_row(*jobs[i].item, jobs[i].seed);
    }

    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const SuiteRow& a, const SuiteRow& b) {
                         if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
                         return a.policy < b.policy;
                     });
    return report;
}

// ---------------------------------------------------------------------------
// Config and report formats
// ---------------------------------------------------------------------------

SuiteConfig load_suite_config(std::istream& is) {
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    SuiteConfig cfg;
    try {
        for (const auto& it : j.at("items")) {
            SuiteItem item;
            item.generator = it.at("generator").get<std::string>();
            item.policy = it.at("policy").get<std::string>();
            item.objective = parse_objective(it.at("objective").get<std::string>());
            if (it.contains("seeds")) item.seeds = it.at("seeds").get<int>();
            if (it.contains("n")) item.params.n = it.at("n").get<int>();
            if (it.contains("cap")) item.params.cap = it.at("cap").get<int>();
            if (it.contains("k")) item.params.vehicles = it.at("k").get<int>();
            if (it.contains("scale")) item.params.scale = it.at("scale").get<Tick>();
            if (it.contains("requests")) item.params.requests = it.at("requests").get<int>();
            if (it.contains("seed")) item.params.seed = it.at("seed").get<std::uint64_t>();
            if (it.contains("horizon")) item.params.horizon = it.at("horizon").get<Tick>();
            if (it.contains("kind"))
                item.params.kind = it.at("kind").get<std::string>() == "line" ? SubnetKind::Line
                                                                              : SubnetKind::Circuit;
            if (it.contains("bound")) {
                const auto& b = it.at("bound");
                if (b.is_string()) {
                    std::string name = b.get<std::string>();
                    if (name == "one") item.bound = BoundSpec::exact(1, 1);
                    else if (name == "two") item.bound = BoundSpec::exact(2, 1);
                    else if (name == "cap") item.bound = BoundSpec::cap();
                    else if (name == "cap_times_len") item.bound = BoundSpec::cap_times_len();
                    else throw Error(ErrorCode::ParseError, "unknown bound '" + name + "'");
                } else {
                    item.bound =
                        BoundSpec::exact(b.at("num").get<long long>(), b.at("den").get<long long>());
                }
            }
            cfg.items.push_back(std::move(item));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return cfg;
}

namespace {

const char* objective_short(Objective o) {
    return o == Objective::TotalTourLength ? "length" : "makespan";
}

} // namespace

void write_csv(std::ostream& os, const RatioReport& report) {
    os << "instance_id,generator,seed,policy,objective,alg_cost,opt_cost,ratio_num,ratio_den,"
          "bound_num,bound_den,satisfied\n";
    for (const auto& r : report.rows) {
        os << r.instance_id << "," << r.generator << "," << r.seed << "," << r.policy << ","
           << objective_short(r.objective) << ",";
        if (!r.error.empty()) {
            os << ",,,,,,error\n";
            continue;
        }
        os << r.alg << "," << r.opt << "," << r.ratio.num << "," << r.ratio.den << ",";
        if (r.bound) os << r.bound->num << "," << r.bound->den << ","
                        << (*r.satisfied ? "true" : "false");
        else os << ",,";
        os << "\n";
    }
}

void write_json_report(std::ostream& os, const RatioReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json row{{"instance_id", r.instance_id}, {"generator", r.generator},
                 {"seed", r.seed},               {"policy", r.policy},
                 {"objective", objective_short(r.objective)}};
        if (!r.error.empty()) {
            row["error"] = r.error;
        } else {
            row["alg_cost"] = r.alg;
            row["opt_cost"] = r.opt;
            row["ratio"] = {{"num", r.ratio.num}, {"den", r.ratio.den}};
            if (r.bound) {
                row["bound"] = {{"num", r.bound->num}, {"den", r.bound->den}};
                row["satisfied"] = *r.satisfied;
            }
        }
        rows.push_back(row);
    }
    os << json{{"rows", rows}}.dump(2) << "\n";
}

} // namespace fleetsim
