#pragma once
// Discriminant sweeps: empirical moments, correlations, and value histograms
// of f/c^omega over sieved ranges, with exact rational accumulation. Work is
// distributed by sieve segment; each segment produces an exact partial and
// the reduction runs in segment order, so reports are identical for any
// worker count. An OpenMP kernel and a serial reference share the same
// per-segment code.

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "unram2/count.hpp"
#include "unram2/discs.hpp"
#include "unram2/predict.hpp"

namespace unram2 {

struct SweepConfig {
    std::vector<std::string> pair_names;
    std::vector<PairSpec> pairs;  // at T0
    std::vector<int> ks;          // one entry per pair (correlation), or the
                                  // list of moments for a single pair
    int sign = -1;
    i64 xmax = 0;
    int alpha = -1;  // 0, 2, 3 or -1 for all
    int workers = 0;  // 0 = library default
    bool distribution = false;
};

struct MomentLine {
    std::string label;
    std::vector<int> ks;
    Rat empirical = 0;
    Rat predicted = 0;
    double rel_gap = 0;
    std::vector<Rat> checkpoints;  // empirical means at xmax/4, xmax/2, xmax
};

struct SweepReport {
    SweepConfig cfg;
    long long count = 0;                       // discriminants swept
    std::vector<long long> checkpoint_counts;  // at xmax/4, xmax/2, xmax
    std::vector<MomentLine> moments;
    std::map<Rat, long long> histogram;        // distribution mode
    // bipartite support analysis (distribution mode)
    std::vector<Rat> support_points;
    std::vector<long long> support_counts;
    long long off_support = 0;

    nlohmann::ordered_json to_json() const;
};

SweepReport sweep_moments(const SweepConfig& cfg);         // OpenMP kernel
SweepReport sweep_moments_serial(const SweepConfig& cfg);  // reference
SweepReport sweep_distribution(const SweepConfig& cfg);
SweepReport sweep_distribution_serial(const SweepConfig& cfg);

}  // namespace unram2
