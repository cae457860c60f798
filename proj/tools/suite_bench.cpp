// Benchmark: the OpenMP suite runner against its serial reference on the same
// workload, verifying that both produce identical reports.

#include <chrono>
#include <cstdlib>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fleetsim/suite.hpp"

using namespace fleetsim;

namespace {

SuiteConfig workload(int seeds) {
    SuiteConfig cfg;
    SuiteItem morningSir{"morning", {}, seeds, "sir", Objective::TotalTourLength, BoundSpec::cap()};
    SuiteItem morningSifm{"morning", {}, seeds, "sif_m", Objective::TotalTourLength,
                          BoundSpec::exact(1, 1)};
    SuiteItem eveningSife{"evening", {}, seeds, "sif_e", Objective::TotalTourLength,
                          BoundSpec::exact(1, 1)};
    SuiteItem otherSir{"other", {}, seeds, "sir", Objective::TotalTourLength,
                       BoundSpec::cap_times_len()};
    SuiteItem morningMain{"morning", {}, seeds, "main", Objective::Makespan, BoundSpec::exact(2, 1)};
    morningMain.params.kind = SubnetKind::Line;
    cfg.items = {morningSir, morningSifm, eveningSife, otherSir, morningMain};
    return cfg;
}

double run_timed(const SuiteConfig& cfg, bool parallel, RatioReport& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = run_suite(cfg, parallel);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int seeds = argc > 1 ? std::atoi(argv[1]) : 64;
    SuiteConfig cfg = workload(seeds);

#ifdef _OPENMP
    std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "threads: 1 (built without OpenMP)\n";
#endif
    std::cout << "workload: " << cfg.items.size() << " batches x " << seeds << " seeds\n";

    RatioReport serial, parallel;
    double ts = run_timed(cfg, false, serial);
    double tp = run_timed(cfg, true, parallel);

    if (!(serial.rows == parallel.rows)) {
        std::cerr << "FAIL: parallel report differs from the serial reference\n";
        return 1;
    }
    int violations = 0, errors = 0;
    for (const auto& r : serial.rows) {
        if (r.satisfied && !*r.satisfied) ++violations;
        if (!r.error.empty()) ++errors;
    }
    std::cout << "rows: " << serial.rows.size() << " (" << violations << " bound violations, "
              << errors << " errors)\n";
    std::printf("serial:   %8.3f s\n", ts);
    std::printf("parallel: %8.3f s\n", tp);
    std::printf("speedup:  %8.2fx\n", tp > 0 ? ts / tp : 0.0);
    std::cout << "reports identical: yes\n";
    return 0;
}
