#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "unram2/predict.hpp"

using namespace unram2;

static PairPredict PP(const char* name) { return pair_predict(*preset_pair(name)); }

// oracle: enumerate all subsets of GF(2)^k and count the subspaces
static long long subspace_count_oracle(int k) {
    int n = 1 << k;
    long long count = 0;
    for (uint64_t sub = 0; sub < (uint64_t(1) << n); sub++) {
        if (!(sub & 1)) continue;  // must contain 0
        bool closed = true;
        for (int a = 0; a < n && closed; a++)
            for (int b = 0; b < n && closed; b++)
                if ((sub >> a & 1) && (sub >> b & 1) && !(sub >> (a ^ b) & 1))
                    closed = false;
        if (closed) count++;
    }
    return count;
}

TEST_CASE("subspace counts") {
    CHECK(subspace_count(0) == 1);
    CHECK(subspace_count(1) == 2);
    CHECK(subspace_count(2) == 5);
    CHECK(subspace_count(3) == 16);
    for (int k = 0; k <= 3; k++)
        CHECK(subspace_count(k) == subspace_count_oracle(k));
}

TEST_CASE("moments of |Cl[4]/Cl[2]|") {
    CHECK(m_moment(0, -1) == 1);
    CHECK(m_moment(0, +1) == 1);
    CHECK(m_moment(1, -1) == 2);
    CHECK(m_moment(1, +1) == Rat(3) / 2);
    CHECK(m_moment(2, -1) == 5);
}

TEST_CASE("Q constants by enumeration") {
    CHECK(q_pm({3}, -1) == 3);      // triangle: m = 1 only
    CHECK(q_pm({3}, +1) == 1);      // m = 0 only
    CHECK(q_pm({2, 1}, -1) == 3);   // edge + fixed point
    CHECK(q_pm({2, 1}, +1) == 3);
    CHECK(q_pm({2}, -1) == 2);
    CHECK(q_pm({2}, +1) == 1);
    CHECK(q_pm({2, 2}, -1) == 4);   // complete bipartite T0 on 4 vertices
    CHECK(q_pm(std::vector<int>{}, +1) == 1);  // degenerate empty sum
    CHECK(q_pm(std::vector<int>{}, -1) == 0);
    CHECK(q_pm(*preset_pair("D4oC4:Q8"), -1) == 3);
    CHECK(q_pm(*preset_pair("D4xC2:D4"), -1) == 3);
}

TEST_CASE("pair constants") {
    auto q8 = PP("D4oC4:Q8");
    CHECK(q8.c == 3);
    CHECK(q8.s == 1);
    CHECK(q8.aut_h == 6);
    CHECK(q8.t0_size == 3);
    CHECK(!q8.bipartite);
    auto d4 = PP("D4:C4");
    CHECK(d4.c == 2);
    CHECK(d4.aut_h == 2);
    CHECK(d4.bipartite);
    CHECK(d4.q_norm() == 4);
    auto dx = PP("D4xC2:D4");
    CHECK(dx.c == 4);
    CHECK(dx.s == 2);
    CHECK(!dx.bipartite);
}

TEST_CASE("point mass values and the dual route") {
    auto q8 = PP("D4oC4:Q8");
    CHECK(point_mass(q8, -1) == Rat(3) / 32);
    CHECK(point_mass(q8, +1) == Rat(1) / 32);
    auto dx = PP("D4xC2:D4");
    CHECK(point_mass(dx, -1) == Rat(9) / 32);
    for (const auto& p : {q8, dx})
        for (int sign : {-1, +1})
            for (int k = 1; k <= 3; k++) {
                Rat pk = 1;
                for (int i = 0; i < k; i++) pk *= point_mass(p, sign);
                CHECK(kth_moment_t_route(p, sign, k) == pk);
            }
    CHECK_THROWS(point_mass(PP("D4:C4"), -1));
}

TEST_CASE("correlation predictions") {
    auto d4 = PP("D4:C4");
    CHECK(correlation_prediction({d4}, -1) == Rat(1) / 4);
    CHECK(correlation_prediction({d4, d4}, -1) == Rat(1) / 8);
    auto q8 = PP("D4oC4:Q8");
    CHECK(correlation_prediction({q8}, -1) == Rat(3) / 32);  // matches point mass
    CHECK(correlation_prediction({q8}, +1) == point_mass(q8, +1));
    // positive-sign single D4: (M+(1) - 1)/4 = 1/8
    CHECK(correlation_prediction({d4}, +1) == Rat(1) / 8);
}

TEST_CASE("Cohen-Lenstra rank probabilities: closed products") {
    auto p0m = cohen_lenstra_rank_prob(0, -1, 60);
    CHECK(std::abs(rat_to_double(p0m.value) - 0.2887880951) < 1e-8);
    auto p0p = cohen_lenstra_rank_prob(0, +1, 60);
    CHECK(std::abs(rat_to_double(p0p.value) - 0.5775761902) < 1e-8);
    CHECK(p0m.error_bound > 0);
}

TEST_CASE("Cohen-Lenstra rank probabilities: partition-sum route agrees") {
    for (int sign : {-1, +1})
        for (int i = 0; i <= 3; i++) {
            double closed = rat_to_double(cohen_lenstra_rank_prob(i, sign, 60).value);
            double part = rat_to_double(cohen_lenstra_rank_prob_partition(i, sign, 22));
            CHECK(std::abs(closed - part) < 2e-6);
        }
}

TEST_CASE("moment identity fixes the measure convention") {
    // sum_i P^sign(i) 2^(ik) = M^sign(k) for k = 1..4 within 1e-6 at I = 40
    for (int sign : {-1, +1})
        for (int k = 1; k <= 4; k++) {
            Rat total = 0;
            for (int i = 0; i <= 40; i++)
                total += cohen_lenstra_rank_prob(i, sign, 80).value * pow2(i * k);
            Rat diff = total - m_moment(k, sign);
            if (diff < 0) diff = -diff;
            CHECK(diff < Rat(1, 1000000));
        }
}

TEST_CASE("bipartite distribution support and mass") {
    auto d4 = PP("D4:C4");
    auto bd = bipartite_distribution(d4, -1, 10);
    CHECK(bd.q == 4);
    CHECK(bd.support[0] == 0);
    CHECK(bd.support[1] == Rat(1) / 4);
    CHECK(bd.support[2] == Rat(3) / 4);
    CHECK(bd.support[3] == Rat(7) / 4);
    CHECK(bd.mass[0] == cohen_lenstra_rank_prob(0, -1, 60).value);
    CHECK(std::abs(rat_to_double(bd.mass_total) - 1.0) < 1e-6);
    auto c4c2 = PP("D4oC4:C4xC2");
    auto bd2 = bipartite_distribution(c4c2, -1, 10);
    CHECK(bd2.q == pow2(2) * c4c2.aut_h);
    CHECK(std::abs(rat_to_double(bd2.mass_total) - 1.0) < 1e-6);
    CHECK_THROWS(bipartite_distribution(PP("D4oC4:Q8"), -1, 5));
}

TEST_CASE("compositum density") {
    auto q8 = PP("D4oC4:Q8");
    auto dx = PP("D4xC2:D4");
    auto d4 = PP("D4:C4");
    CHECK(compositum_density({q8, dx}, -1) == 1);
    CHECK(std::abs(rat_to_double(compositum_density({q8, d4}, -1)) -
                   (1 - 0.2887880951)) < 1e-6);
    CHECK(std::abs(rat_to_double(compositum_density({d4}, +1)) -
                   (1 - 0.5775761902)) < 1e-6);
}

TEST_CASE("local masses at the worked examples") {
    CHECK(local_mass(*preset_pair("D4:C4"), 3) == Rat(5) / 3);
    CHECK(local_mass(*preset_pair("D4oC4:Q8"), 5) == Rat(8) / 5);
    // enumeration equals 1 + c_T/p for every preset and small odd prime
    for (const char* name : {"D4:C4", "D4oC4:Q8", "D4oC4:C4xC2", "D4xC2:D4"}) {
        auto s = *preset_pair(name);
        int c = conjugacy_count(s);
        for (long long p : {3, 5, 7, 11, 13})
            CHECK(local_mass(s, p) == Rat(1) + Rat(c) / p);
        // large p: mass tends to 1
        CHECK(local_mass(s, 10007) == Rat(1) + Rat(c) / 10007);
    }
}

TEST_CASE("gamma brute force equals the closed form (non-bipartite, k = 1)") {
    for (const char* name : {"D4oC4:Q8", "D4xC2:D4"})
        for (int sign : {-1, +1})
            for (int alpha : {0, 2, 3}) {
                auto rep = gamma_bruteforce({*preset_pair(name)}, sign, alpha);
                CAPTURE(name);
                CAPTURE(sign);
                CAPTURE(alpha);
                CHECK(rep.match);
            }
    // worked value: triangle, sign -, any alpha: 2^4 * 3 * 3 = 144
    auto rep = gamma_bruteforce({*preset_pair("D4oC4:Q8")}, -1, 0);
    CHECK(rep.brute == 144);
    // budget guard
    auto q8 = *preset_pair("D4oC4:Q8");
    CHECK_THROWS(gamma_bruteforce({q8, q8}, -1, 0));
}
