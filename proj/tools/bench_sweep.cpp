// Benchmark: serial reference kernel vs the OpenMP sweep on the same range,
// verifying that both produce identical reports.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "unram2/sweep.hpp"

using namespace unram2;

static double run(const char* label, SweepReport (*fn)(const SweepConfig&),
                  const SweepConfig& cfg, std::string* digest) {
    auto t0 = std::chrono::steady_clock::now();
    auto rep = fn(cfg);
    auto t1 = std::chrono::steady_clock::now();
    double sec = std::chrono::duration<double>(t1 - t0).count();
    printf("%-22s %8lld discs  %7.3f s  (%.0f d/s)\n", label, rep.count, sec,
           rep.count / sec);
    *digest = rep.to_json().dump();
    return sec;
}

int main(int argc, char** argv) {
    i64 xmax = argc > 1 ? atoll(argv[1]) : 8000000;
    SweepConfig cfg;
    cfg.pair_names = {"D4:C4"};
    cfg.pairs = {*preset_pair("D4:C4")};
    cfg.ks = {1};
    cfg.sign = -1;
    cfg.xmax = xmax;
    printf("sweep benchmark, xmax = %lld, max threads = %d\n", xmax,
           omp_get_max_threads());
    std::string serial_digest, parallel_digest;
    double ts = run("serial reference", sweep_moments_serial, cfg, &serial_digest);
    double tp = run("openmp kernel", sweep_moments, cfg, &parallel_digest);
    printf("speedup: %.2fx, reports identical: %s\n", ts / tp,
           serial_digest == parallel_digest ? "yes" : "NO");
    return serial_digest == parallel_digest ? 0 : 1;
}
