#pragma once
// Class-group side checks, independent of the counting formula: the Redei
// matrix of quadratic symbols among the prime discriminant factors of d,
// whose corank gives the 4-rank of the (narrow, for d > 0) class group, and
// |Cl[2]| = 2^(omega-1).

#include "unram2/count.hpp"
#include "unram2/discs.hpp"
#include "unram2/gf2.hpp"
#include "unram2/rat.hpp"

namespace unram2 {

struct RedeiReport {
    i64 d = 0;
    Mat matrix;     // omega x omega over GF(2); rows sum to zero
    int rk4 = 0;    // omega - 1 - rank
    Int cl42 = 1;   // |Cl[4]/Cl[2]| = 2^rk4
};

// entry (i,j), i != j, is 1 iff (q_j / p_i) = -1; the diagonal makes each row
// sum to zero, i.e. (i,i) records (d/q_i-part complement / p_i)
RedeiReport redei_4rank(const DiscFactorization& fact);

inline Int two_torsion_order(const DiscFactorization& fact) {
    return pow2(fact.omega - 1);
}

// the (D4, C4) identity: f(d)/2^omega = (|Cl[4]/Cl[2]| - 1)/4 for d < 0
bool cross_check_d4(const PairCounter& d4, const DiscFactorization& fact);

}  // namespace unram2
