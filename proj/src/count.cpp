#include "unram2/count.hpp"

#include <stdexcept>

namespace unram2 {

TupleCounter TupleCounter::make(const PairSpec& spec) {
    if (!is_admissible(spec)) throw std::invalid_argument("f_T: pair not admissible");
    TupleCounter tc;
    tc.t = spec.t;
    tc.r = int(spec.t.size());
    tc.n = spec.n();
    tc.link.assign(tc.r, 0);
    for (int i = 0; i < tc.r; i++)
        for (int j = 0; j < tc.r; j++)
            if (j != i && spec.ext.form.b(spec.t[i], spec.t[j]))
                tc.link[i] |= uint32_t(1) << j;
    tc.denom = pow2(tc.n) * Int((unsigned long long)aut_ht(spec).size());
    return tc;
}

namespace {

// Factor of prime position b under assignment m: 1 + s where
// s = prod over positions b' assigned into S_{m(b)} of sym(b', b).
// At p = 2 the even prime discriminant is -4 or +-8; its square part is a
// 2-adic square, so the symbol survives to the first power for both
// ord_2(d) = 2 and 3 (the class-group identity pins this down).
// Returns 0 or 2; the full indicator is the product, 0 or 2^omega.
inline int position_factor(const DiscFactorization& fact, const std::vector<int>& assign,
                           const TupleCounter& tc, int b) {
    uint32_t in_top = tc.link[assign[b]];
    int s = 1;
    for (int b2 = 0; b2 < fact.omega; b2++)
        if ((in_top >> assign[b2]) & 1) s *= fact.symbol(b2, b);
    return 1 + s;
}

}  // namespace

unsigned long long tuple_indicator(const DiscFactorization& fact,
                                   const std::vector<int>& assign,
                                   const TupleCounter& tc) {
    unsigned long long prod = 1;
    for (int b = 0; b < fact.omega; b++) {
        int f = position_factor(fact, assign, tc, b);
        if (f == 0) return 0;
        prod *= (unsigned long long)f;
    }
    return prod;
}

namespace {

// enumerate surjective assignments of the omega prime positions onto r slots,
// accumulating indicators; prunes branches that cannot reach surjectivity
struct Enumerator {
    const DiscFactorization& fact;
    const TupleCounter& tc;
    std::vector<int> assign;
    unsigned long long total = 0;

    Enumerator(const DiscFactorization& f, const TupleCounter& t)
        : fact(f), tc(t), assign(f.omega, 0) {}

    void rec(int pos, uint32_t used) {
        int missing = std::popcount(~used & ((uint32_t(1) << tc.r) - 1));
        if (fact.omega - pos < missing) return;
        if (pos == fact.omega) {
            total += tuple_indicator(fact, assign, tc);
            return;
        }
        for (int s = 0; s < tc.r; s++) {
            assign[pos] = s;
            rec(pos + 1, used | (uint32_t(1) << s));
        }
    }
};

}  // namespace

CountResult f_t(const TupleCounter& tc, const DiscFactorization& fact) {
    Enumerator e(fact, tc);
    e.rec(0, 0);
    CountResult res;
    res.raw_sum = e.total;
    res.value = Rat(res.raw_sum) / tc.denom;
    return res;
}

PairCounter PairCounter::make(const PairSpec& spec_at_t0) {
    if (!is_admissible(spec_at_t0))
        throw std::invalid_argument("f: pair not admissible");
    PairCounter pc;
    pc.spec = spec_at_t0;
    pc.c = conjugacy_count(spec_at_t0);
    int m = int(spec_at_t0.t.size());
    for (uint32_t mask = 1; mask < (uint32_t(1) << m); mask++) {
        PairSpec sub = spec_at_t0;
        sub.t.clear();
        for (uint32_t w = mask; w; w &= w - 1)
            sub.t.push_back(spec_at_t0.t[std::countr_zero(w)]);
        if (!is_admissible(sub)) continue;  // keep spanning subsets only
        pc.subsets.push_back(TupleCounter::make(sub));
        pc.subset_masks.push_back(mask);
    }
    return pc;
}

CountResult f_total(const PairCounter& pc, const DiscFactorization& fact) {
    CountResult out;
    Rat acc = 0;
    for (const auto& tc : pc.subsets) {
        CountResult r = f_t(tc, fact);
        out.raw_sum += r.raw_sum;
        acc += r.value;
    }
    out.value = acc;
    return out;
}

std::vector<CountResult> f_breakdown(const PairCounter& pc, const DiscFactorization& fact) {
    std::vector<CountResult> out;
    out.reserve(pc.subsets.size());
    for (const auto& tc : pc.subsets) out.push_back(f_t(tc, fact));
    return out;
}

}  // namespace unram2
