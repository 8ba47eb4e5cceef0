#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "unram2/clgroup.hpp"
#include "unram2/count.hpp"

using namespace unram2;

static PairCounter PC(const char* name) { return PairCounter::make(*preset_pair(name)); }

TEST_CASE("tuple indicator examples for (D4, C4)") {
    auto pc = PC("D4:C4");
    const auto& tc = pc.subsets[0];
    auto f39 = factor_prime_discriminants(-39);
    // assignment (-3, 13) -> slots (0, 1)
    CHECK(tuple_indicator(f39, {0, 1}, tc) == 4);
    CHECK(tuple_indicator(f39, {1, 0}, tc) == 4);
    auto f15 = factor_prime_discriminants(-15);
    CHECK(tuple_indicator(f15, {0, 1}, tc) == 0);  // (5/3) = -1
    CHECK(tuple_indicator(f15, {1, 0}, tc) == 0);
}

TEST_CASE("indicator dichotomy: always 0 or 2^omega") {
    auto pc = PC("D4oC4:Q8");
    const auto& tc = pc.subsets[0];
    FundamentalSieve sv(3000);
    sv.run({-1, 3000, -1}, [&](const DiscFactorization& f) {
        if (f.omega < tc.r) return;
        std::vector<int> assign(f.omega, 0);
        // a few deterministic assignments per d
        for (int shift = 0; shift < tc.r; shift++) {
            for (int b = 0; b < f.omega; b++) assign[b] = (b + shift) % tc.r;
            auto v = tuple_indicator(f, assign, tc);
            CHECK((v == 0 || v == (1ull << f.omega)));
        }
    });
}

TEST_CASE("indicator is invariant under Aut_{H,T} relabelings of slots") {
    auto spec = *preset_pair("D4oC4:Q8");
    auto tc = TupleCounter::make(spec);
    auto auts = aut_ht(spec);
    FundamentalSieve sv(2000);
    sv.run({-1, 2000, -1}, [&](const DiscFactorization& f) {
        if (f.omega < 3 || f.omega > 5) return;
        std::vector<int> assign(f.omega);
        for (int b = 0; b < f.omega; b++) assign[b] = b % 3;
        auto base = tuple_indicator(f, assign, tc);
        for (const auto& phi : auts) {
            // slot permutation induced by phi on the t-elements
            std::vector<int> perm(3);
            for (int i = 0; i < 3; i++) {
                Word im = phi.apply(Vec{spec.t[i], 3}).bits;
                for (int j = 0; j < 3; j++)
                    if (spec.t[j] == im) perm[i] = j;
            }
            std::vector<int> relabeled(f.omega);
            for (int b = 0; b < f.omega; b++) relabeled[b] = perm[assign[b]];
            CHECK(tuple_indicator(f, relabeled, tc) == base);
        }
    });
}

TEST_CASE("f for (D4, C4) at the worked examples") {
    auto pc = PC("D4:C4");
    CHECK(pc.subsets.size() == 1);  // T0 is the only spanning subset
    CHECK(f_total(pc, factor_prime_discriminants(-39)).value == 1);
    CHECK(f_total(pc, factor_prime_discriminants(-3)).value == 0);
    CHECK(f_total(pc, factor_prime_discriminants(-15)).value == 0);
}

TEST_CASE("omega below n forces f = 0") {
    for (const char* name : {"D4:C4", "D4oC4:Q8", "D4oC4:C4xC2", "D4xC2:D4"}) {
        auto pc = PC(name);
        auto f = factor_prime_discriminants(-3);
        CHECK(f_total(pc, f).value == 0);
    }
}

TEST_CASE("spanning subset counts") {
    CHECK(PC("D4:C4").subsets.size() == 1);
    CHECK(PC("D4oC4:Q8").subsets.size() == 1);
    CHECK(PC("D4oC4:C4xC2").subsets.size() == 5);  // four bases + T0
    CHECK(PC("D4xC2:D4").subsets.size() == 1);
}

TEST_CASE("integrality of f_T on a sample range, all presets, both signs") {
    std::vector<PairCounter> pcs;
    for (const char* name : {"D4:C4", "D4oC4:Q8", "D4oC4:C4xC2", "D4xC2:D4"})
        pcs.push_back(PC(name));
    FundamentalSieve sv(4000);
    for (int sign : {-1, 1}) {
        sv.run({sign, 4000, -1}, [&](const DiscFactorization& f) {
            for (const auto& pc : pcs) {
                for (const auto& r : f_breakdown(pc, f)) {
                    CHECK(boost::multiprecision::denominator(r.value) == 1);
                    CHECK(r.value >= 0);
                }
            }
        });
    }
}

TEST_CASE("integrality holds for every admissible pair class, n <= 3") {
    std::vector<PairCounter> pcs;
    for (int n = 2; n <= 3; n++)
        for (const auto& cls : enumerate_pair_classes(n))
            pcs.push_back(PairCounter::make(cls.rep));
    FundamentalSieve sv(2000);
    for (int sign : {-1, 1}) {
        sv.run({sign, 2000, -1}, [&](const DiscFactorization& f) {
            for (const auto& pc : pcs) {
                auto r = f_total(pc, f);
                CHECK(boost::multiprecision::denominator(r.value) == 1);
                CHECK(r.value >= 0);
            }
        });
    }
}

TEST_CASE("Redei reports at the worked discriminants") {
    auto r39 = redei_4rank(factor_prime_discriminants(-39));
    CHECK(r39.matrix.rank() == 0);
    CHECK(r39.rk4 == 1);
    CHECK(r39.cl42 == 2);
    auto r3 = redei_4rank(factor_prime_discriminants(-3));
    CHECK(r3.rk4 == 0);
    auto r15 = redei_4rank(factor_prime_discriminants(-15));
    CHECK(r15.rk4 == 0);
    CHECK(r15.cl42 == 1);
    // real discriminant: narrow class group of Q(sqrt(15)) has 4-rank 0
    auto r60 = redei_4rank(factor_prime_discriminants(60));
    CHECK(r60.rk4 == 0);
}

TEST_CASE("two-torsion order is 2^(omega-1)") {
    CHECK(two_torsion_order(factor_prime_discriminants(-39)) == 2);
    CHECK(two_torsion_order(factor_prime_discriminants(-3)) == 1);
    CHECK(two_torsion_order(factor_prime_discriminants(-420)) == 8);
}

// unnormalized subset sum: tuples onto the slots of t (every slot nonempty, no
// spanning requirement), indicator summed as is
static unsigned long long g_subset_sum(const CentralExtension& g,
                                       const std::vector<Word>& t,
                                       const DiscFactorization& fact) {
    int r = int(t.size());
    TupleCounter tc;
    tc.t = t;
    tc.r = r;
    tc.n = g.n;
    tc.link.assign(r, 0);
    for (int i = 0; i < r; i++)
        for (int j = 0; j < r; j++)
            if (j != i && g.form.b(t[i], t[j])) tc.link[i] |= uint32_t(1) << j;
    unsigned long long total = 0;
    std::vector<int> assign(fact.omega, 0);
    auto rec = [&](auto&& self, int pos, uint32_t used) -> void {
        if (fact.omega - pos < std::popcount(~used & ((uint32_t(1) << r) - 1))) return;
        if (pos == fact.omega) {
            total += tuple_indicator(fact, assign, tc);
            return;
        }
        for (int s = 0; s < r; s++) {
            assign[pos] = s;
            self(self, pos + 1, used | (uint32_t(1) << s));
        }
    };
    rec(rec, 0, 0);
    return total;
}

TEST_CASE("genus decomposition: sum of subset sums = 2 * 2^rk4 * c^omega") {
    // the full tuple sum over a complete bipartite T0 factors through the
    // two-part splitting of d and collapses to the 4-rank; holds for both
    // signs (narrow class group on the real side)
    for (const char* name : {"D4:C4", "D4oC4:C4xC2"}) {
        auto s = *preset_pair(name);
        int c = conjugacy_count(s);
        int m = int(s.t.size());
        FundamentalSieve sv(8000);
        for (int sign : {-1, +1}) {
            sv.run({sign, 8000, -1}, [&](const DiscFactorization& f) {
                Int total = 0;
                for (uint32_t mask = 1; mask < (uint32_t(1) << m); mask++) {
                    std::vector<Word> t;
                    for (uint32_t w = mask; w; w &= w - 1)
                        t.push_back(s.t[std::countr_zero(w)]);
                    total += g_subset_sum(s.ext, t, f);
                }
                Int cpow = 1;
                for (int i = 0; i < f.omega; i++) cpow *= c;
                CHECK(total == 2 * redei_4rank(f).cl42 * cpow);
            });
        }
    }
}

// class number of an imaginary quadratic field by counting reduced primitive
// forms (a, b, c), b^2 - 4ac = d, |b| <= a <= c, b >= 0 when |b| = a or a = c
static long long class_number(long long d) {
    long long h = 0;
    for (long long b = (d % 2 + 2) % 2; b * b <= -d / 3; b += 2) {
        long long n4 = (b * b - d);
        if (n4 % 4) continue;
        long long n = n4 / 4;
        for (long long a = std::max<long long>(b, 1); a * a <= n; a++) {
            if (n % a) continue;
            long long c = n / a;
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            h++;                                          // (a, b, c)
            if (b > 0 && b != a && a != c) h++;           // (a, -b, c)
        }
    }
    return h;
}

TEST_CASE("Redei rank 0 iff the class number has minimal 2-part (form oracle)") {
    // |Cl[2]| = 2^(omega - 1), so rk4 = 0 exactly when h / 2^(omega-1) is odd
    FundamentalSieve sv(5000);
    long long checked = 0;
    sv.run({-1, 5000, -1}, [&](const DiscFactorization& f) {
        long long h = class_number(f.d);
        CHECK(h % (1LL << (f.omega - 1)) == 0);  // genus theory
        CHECK(redei_4rank(f).rk4 >= 0);
        CHECK(redei_4rank(f).rk4 <= f.omega - 1);
        bool odd_quotient = ((h >> (f.omega - 1)) & 1) == 1;
        CHECK((redei_4rank(f).rk4 == 0) == odd_quotient);
        checked++;
    });
    CHECK(checked > 1500);
}

TEST_CASE("(D4,C4) class-group identity on |d| <= 20000") {
    auto pc = PC("D4:C4");
    FundamentalSieve sv(20000);
    long long checked = 0;
    sv.run({-1, 20000, -1}, [&](const DiscFactorization& f) {
        checked++;
        CHECK(cross_check_d4(pc, f));
    });
    CHECK(checked > 5000);
}
