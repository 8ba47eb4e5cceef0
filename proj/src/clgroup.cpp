#include "unram2/clgroup.hpp"

#include <stdexcept>

namespace unram2 {

RedeiReport redei_4rank(const DiscFactorization& fact) {
    RedeiReport rep;
    rep.d = fact.d;
    int w = fact.omega;
    Mat m(w);
    for (int i = 0; i < w; i++) {
        Word row = 0;
        for (int j = 0; j < w; j++) {
            if (j == i) continue;
            if (fact.symbol(j, i) < 0) row |= Word(1) << j;
        }
        // diagonal completes the row to parity zero
        row |= Word(parity(row)) << i;
        m.rows.push_back(row);
    }
    rep.matrix = m;
    rep.rk4 = w - 1 - m.rank();
    rep.cl42 = pow2(rep.rk4);
    return rep;
}

bool cross_check_d4(const PairCounter& d4, const DiscFactorization& fact) {
    if (fact.d >= 0) throw std::invalid_argument("cross_check_d4: needs d < 0");
    CountResult f = f_total(d4, fact);
    RedeiReport r = redei_4rank(fact);
    return f.value / pow2(fact.omega) == Rat(r.cl42 - 1) / 4;
}

}  // namespace unram2
