#pragma once
// Closed-form predicted constants: subspace counts N(k), moments M+-(k),
// the component-sum constants Q+-, point masses, correlations, Cohen-Lenstra
// rank probabilities, Malle-Bhargava local masses, and a small-scale brute
// force of the character-sum constant Gamma checked against its closed form.

#include <vector>

#include "unram2/count.hpp"
#include "unram2/group.hpp"
#include "unram2/rat.hpp"
#include "unram2/unlinked.hpp"

namespace unram2 {

// number of subspaces of GF(2)^k (sum of Gaussian binomials)
Int subspace_count(int k);

// M-(j) = N(j); M+(j) = (N(j+1) - N(j)) / 2^j.  sign: +1 or -1.
Rat m_moment(int k, int sign);

// Q^sign = sum over m == a (mod 2), a = [sign < 0], of products of binomials
// C(|component|, m_i) with every m_i == 0,1 (mod 4) and sum m_i = m
Int q_pm(const std::vector<int>& component_sizes, int sign);
// components taken from the commutation graph on spec.t
Int q_pm(const PairSpec& spec, int sign);

// constants attached to a pair at its maximal generating set
struct PairPredict {
    int n = 0, c = 0, s = 0;
    Int aut_h = 1;
    Int t0_size = 0;
    bool bipartite = false;
    std::vector<int> component_sizes;
    Int q_minus = 0, q_plus = 0;

    Int q(int sign) const { return sign < 0 ? q_minus : q_plus; }
    Int q_norm() const { return pow2(n - 1) * aut_h; }  // 2^(n-1)|Aut_H|
};

PairPredict pair_predict(const PairSpec& spec_at_t0);

// point mass of f/c^omega for non-bipartite T0:
// P = |T0| Q^sign / (2^(c-s+n-1) |Aut_H|)
Rat point_mass(const PairPredict& p, int sign);

// k-th moment of f/c^omega via the product-of-generating-sets route
// (all factors at T0): must agree with point_mass(p, sign)^k
Rat kth_moment_t_route(const PairPredict& p, int sign, int k);

// mixed correlation over a list of pairs
Rat correlation_prediction(const std::vector<PairPredict>& pairs, int sign);

// Cohen-Lenstra probability that a random finite abelian 2-group has rank i,
// measure proportional to 1/(|Aut A| |A|^u) with u = 0 for sign < 0 and
// u = 1 for sign > 0. Closed-product route; truncation bounds the relative
// error of the truncated products by 2^-truncation.
struct CLProb {
    Rat value;
    Rat error_bound;
};
CLProb cohen_lenstra_rank_prob(int i, int sign, int truncation);

// oracle route: direct sum over abelian 2-groups of size up to 2^max_log
Rat cohen_lenstra_rank_prob_partition(int i, int sign, int max_log);

struct BipartiteDist {
    Int q;                      // 2^(n-1) |Aut_H|
    std::vector<Rat> support;   // (2^i - 1)/q
    std::vector<Rat> mass;      // P_CL^sign(i)
    Rat mass_total;
};
BipartiteDist bipartite_distribution(const PairPredict& p, int sign, int imax,
                                     int truncation = 60);

// density of quadratic fields whose maximal unramified extension contains a
// (G_i, H_i)-extension for every i
Rat compositum_density(const std::vector<PairPredict>& pairs, int sign,
                       int truncation = 60);

// Malle-Bhargava local mass at an odd prime p, evaluated by enumerating the
// conjugacy classes of lifts of T and the decomposition groups C2 x C_{2^m}
// through centralizer torsion counts; asserts the closed form 1 + c_T/p.
Rat local_mass(const PairSpec& spec, long long p);

// brute force of the main-term constant for a product of generating sets,
// enumerating sign patterns N, the 2-part slot Upsilon, maximal unlinked sets,
// and congruence tuples mod 8; compared against the closed form
// 2^omega |T| prod Q_j with omega = 2 c_T - sum c_j + sum s_j + (k-1).
struct GammaReport {
    Int brute = 0;
    Int closed = 0;
    bool match = false;
    int alpha = 0;
    int sign = 0;
};
GammaReport gamma_bruteforce(const std::vector<PairSpec>& specs, int sign, int alpha);

}  // namespace unram2
