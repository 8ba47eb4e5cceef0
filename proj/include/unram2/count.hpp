#pragma once
// The counting function for unramified-away-from-infinity extensions:
//
//   f_T(d) = 1/(2^n |Aut_{H,T}|) * sum over tuples (d_1..d_r) of coprime
//            fundamental discriminants with product d and every d_i != 1 of
//            prod_i prod_{p | d_i} (1 + (prod_{j in S_i} d_j / p)^{ord_p d})
//
// with S_i = {j : the lifts of t_i and t_j do not commute}. Each tuple's
// product is 0 or 2^omega(d); the sum is evaluated from the cached symbol
// matrix of the factorization.

#include <vector>

#include "unram2/discs.hpp"
#include "unram2/group.hpp"
#include "unram2/rat.hpp"

namespace unram2 {

struct CountResult {
    Int raw_sum = 0;  // inner sum before dividing by 2^n |Aut_{H,T}|
    Rat value = 0;
};

// per-subset precomputation for the hot loop
struct TupleCounter {
    std::vector<Word> t;
    std::vector<uint32_t> link;  // link[i] = bitmask of S_i over slot indices
    int r = 0;
    int n = 0;
    Int denom = 1;  // 2^n |Aut_{H,T}(G, Phi(G))|

    static TupleCounter make(const PairSpec& spec);
};

// indicator of one slot assignment (assign[b] = slot of prime b); 0 or 2^omega
unsigned long long tuple_indicator(const DiscFactorization& fact,
                                   const std::vector<int>& assign,
                                   const TupleCounter& tc);

CountResult f_t(const TupleCounter& tc, const DiscFactorization& fact);

// f = sum of f_T over spanning subsets T of T0
struct PairCounter {
    PairSpec spec;              // with t = T0
    std::vector<TupleCounter> subsets;
    std::vector<uint32_t> subset_masks;  // which T0 members each subset keeps
    int c = 0;                  // c_{T0}

    static PairCounter make(const PairSpec& spec_at_t0);
};

CountResult f_total(const PairCounter& pc, const DiscFactorization& fact);
// per-subset breakdown, aligned with pc.subsets
std::vector<CountResult> f_breakdown(const PairCounter& pc, const DiscFactorization& fact);

}  // namespace unram2
