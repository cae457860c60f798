#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "fleetsim/engine.hpp"
#include "fleetsim/generators.hpp"
#include "fleetsim/instance_io.hpp"
#include "fleetsim/oracle.hpp"
#include "fleetsim/policies.hpp"
#include "fleetsim/suite.hpp"

using namespace fleetsim;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kBoundViolation = 2;
constexpr int kIoFailure = 3;

int exit_code_for(const Error& e) {
    switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
        return kIoFailure;
    default:
        return kValidationFailure;
    }
}

Objective objective_opt(const std::string& s) { return parse_objective(s); }

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online fleet dispatch simulator on circuit and line networks"};
    app.require_subcommand(1);

    // gen
    std::string genName, genOut;
    GenParams params;
    std::string genKind = "circuit";
    auto* gen = app.add_subcommand("gen", "Generate an instance file");
    gen->add_option("name", genName,
                    "fixture (ex1_sir_length, ex2_sir_makespan, ex3_sife_makespan, "
                    "ex4_sifm_makespan, ex5_main_makespan, main_length_lb) or scenario "
                    "(morning, evening, lunch, other)")
        ->required();
    gen->add_option("--n", params.n, "stations");
    gen->add_option("--cap", params.cap, "vehicle capacity");
    gen->add_option("--k", params.vehicles, "fleet size");
    gen->add_option("--scale", params.scale, "integer edge-length factor");
    gen->add_option("--seed", params.seed, "scenario seed");
    gen->add_option("--requests", params.requests, "request count");
    gen->add_option("--horizon", params.horizon, "release window");
    gen->add_option("--kind", genKind, "subnetwork kind: circuit|line")
        ->check(CLI::IsMember({"circuit", "line"}));
    gen->add_option("-o,--out", genOut, "output file")->required();

    // validate
    std::string valFile;
    auto* val = app.add_subcommand("validate", "Check an instance and its partition");
    val->add_option("file", valFile, "instance file")->required();

    // simulate
    std::string simFile, simPolicy, simOut, simTrace;
    auto* sim = app.add_subcommand("simulate", "Run a policy online and dump the schedule");
    sim->add_option("file", simFile, "instance file")->required();
    sim->add_option("--policy", simPolicy, "sir|sif_m|sif_e|main")->required();
    sim->add_option("--out", simOut, "schedule dump file");
    sim->add_option("--trace", simTrace, "trace dump file");

    // opt
    std::string optFile, optObjective = "", optWitness;
    auto* opt = app.add_subcommand("opt", "Exact clairvoyant optimum");
    opt->add_option("file", optFile, "instance file")->required();
    opt->add_option("--objective", optObjective, "length|makespan");
    opt->add_option("--witness", optWitness, "write the witness schedule here");

    // ratio
    std::string ratFile, ratPolicy, ratObjective = "";
    auto* rat = app.add_subcommand("ratio", "Policy cost over oracle cost, exact");
    rat->add_option("file", ratFile, "instance file")->required();
    rat->add_option("--policy", ratPolicy, "sir|sif_m|sif_e|main")->required();
    rat->add_option("--objective", ratObjective, "length|makespan");

    // suite
    std::string suiteConfig, suiteCsv, suiteJson;
    bool suiteSerial = false;
    auto* sui = app.add_subcommand("suite", "Run a config of generator x policy batches");
    sui->add_option("--config", suiteConfig, "suite config (json)")->required();
    sui->add_option("--csv", suiteCsv, "write the report as CSV");
    sui->add_option("--json", suiteJson, "write the report as JSON");
    sui->add_flag("--serial", suiteSerial, "run rows on one thread");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            params.kind = genKind == "line" ? SubnetKind::Line : SubnetKind::Circuit;
            Instance inst;
            try {
                inst = gen_example(genName, params);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::UnknownGenerator) throw;
                inst = gen_scenario(parse_scenario(genName), params);
            }
            auto out = open_out(genOut);
            write_instance(out, inst);
            std::cout << "wrote " << inst.id << " to " << genOut << "\n";
            return kOk;
        }

        if (val->parsed()) {
            Instance inst = read_instance_file(valFile);
            auto v = validate_instance(inst);
            auto pv = validate_partition(inst.network, inst.subnetworks, inst.scenario, inst.metric);
            v.insert(v.end(), pv.begin(), pv.end());
            if (v.empty()) {
                std::cout << "ok: " << inst.id << " (" << inst.requests.size() << " requests, "
                          << inst.subnetworks.size() << " subnetworks)\n";
                return kOk;
            }
            std::cout << violations_to_string(v);
            return kValidationFailure;
        }

        if (sim->parsed()) {
            Instance inst = read_instance_file(simFile);
            RunResult run = run_online(make_policy(simPolicy), inst);
            auto v = validate_schedule(run.schedule, inst);
            if (!simOut.empty()) {
                auto out = open_out(simOut);
                dump_schedule(out, run.schedule);
            }
            if (!simTrace.empty()) {
                auto out = open_out(simTrace);
                dump_trace(out, run.trace);
            }
            std::cout << "policy " << simPolicy << ": total_tour_length "
                      << total_length(run.schedule) << ", makespan " << makespan(run.schedule)
                      << "\n";
            if (!v.empty()) {
                std::cout << violations_to_string(v);
                return kValidationFailure;
            }
            return kOk;
        }

        if (opt->parsed()) {
            Instance inst = read_instance_file(optFile);
            Objective obj = optObjective.empty() ? inst.objective : objective_opt(optObjective);
            OptResult res = opt_cost(inst, obj);
            if (!optWitness.empty()) {
                auto out = open_out(optWitness);
                dump_schedule(out, res.witness);
            }
            std::cout << "opt " << objective_name(obj) << " " << res.cost << " (explored "
                      << res.explored << " states)\n";
            return kOk;
        }

        if (rat->parsed()) {
            Instance inst = read_instance_file(ratFile);
            Objective obj = ratObjective.empty() ? inst.objective : objective_opt(ratObjective);
            Rational r = competitive_ratio(ratPolicy, inst, obj);
            std::cout << ratPolicy << " " << objective_name(obj) << " ratio " << r.str() << "\n";
            return kOk;
        }

        if (sui->parsed()) {
            std::ifstream in(suiteConfig);
            if (!in) throw Error(ErrorCode::IoError, "cannot open '" + suiteConfig + "'");
            SuiteConfig cfg = load_suite_config(in);
            RatioReport report = run_suite(cfg, !suiteSerial);
            if (!suiteCsv.empty()) {
                auto out = open_out(suiteCsv);
                write_csv(out, report);
            }
            if (!suiteJson.empty()) {
                auto out = open_out(suiteJson);
                write_json_report(out, report);
            }
            int bounded = 0, violated = 0, errors = 0;
            for (const auto& row : report.rows) {
                if (!row.error.empty()) ++errors;
                if (row.satisfied) {
                    ++bounded;
                    if (!*row.satisfied) ++violated;
                }
            }
            std::cout << report.rows.size() << " rows, " << bounded << " bounded, " << violated
                      << " bound violations, " << errors << " errors\n";
            if (violated > 0) return kBoundViolation;
            if (errors > 0) return kValidationFailure;
            return kOk;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kValidationFailure;
    }
    return kOk;
}
