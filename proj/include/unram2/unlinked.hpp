#pragma once
// Linkage graphs on products of generating sets. One factor T = {t_1..t_r}
// contributes 2r vertices: local index 2i is the "off" half of slot i and
// 2i+1 the "on" half (the bottom of a symbol). Expanding the counting
// formula's product of (1 + symbol) factors over a factorization
// d_i = D_off D_on puts a symbol (D_u / D_v) in the expansion exactly when
// v is an on-vertex and the support of u is linked to the support of v:
//
//   Phi(u, v) = [v on] * [supp(u) in S_{supp(v)}],   Delta = Phi(u,v)+Phi(v,u).
//
// Vertex sets with Delta = 0 on all pairs ("unlinked", i.e. disconnected
// subgraphs) and full support carry the main term.

#include <cstdint>
#include <vector>

#include "unram2/group.hpp"
#include "unram2/quadform.hpp"

namespace unram2 {

struct FactorT {
    std::vector<Word> t;
    std::vector<uint32_t> link;  // link[i] = S_i as an index mask
    int r = 0;
    std::vector<std::vector<int>> comps;  // connected components, singletons included
    std::vector<int> part;                // bipartite part per element, or -1
    bool bipartite = false;
    int c = 0;  // c_T
};

FactorT make_factor(const CentralExtension& g, const std::vector<Word>& t);

class LinkageGraph {
  public:
    static constexpr int kMaxVertices = 64;

    explicit LinkageGraph(std::vector<FactorT> factors);

    int k() const { return int(fac_.size()); }
    int num_vertices() const { return nv_; }
    const std::vector<FactorT>& factors() const { return fac_; }

    int local(int v, int j) const { return (v / stride_[j]) % (2 * fac_[j].r); }

    static int phi_local(const FactorT& f, int a, int b) {
        return (b & 1) && ((f.link[b >> 1] >> (a >> 1)) & 1);
    }

    int phi(int u, int v) const {
        int acc = 0;
        for (int j = 0; j < k(); j++) acc ^= phi_local(fac_[j], local(u, j), local(v, j));
        return acc;
    }
    int delta(int u, int v) const { return phi(u, v) ^ phi(v, u); }

    uint64_t adjacency(int v) const { return adj_[v]; }
    // vertices supported on slot i of factor j
    uint64_t slot_mask(int j, int i) const { return slot_[j][i]; }
    bool full_support(uint64_t set) const;

  private:
    std::vector<FactorT> fac_;
    std::vector<int> stride_;
    int nv_ = 0;
    std::vector<uint64_t> adj_;
    std::vector<std::vector<uint64_t>> slot_;
};

struct MaxDisconnected {
    int size = 0;
    std::vector<uint64_t> sets;  // every maximizer, as vertex masks, sorted
};

// exact maximum-cardinality unlinked sets (optionally with full support),
// with the complete list of maximizers
MaxDisconnected max_disconnected(const LinkageGraph& g, bool full_support);

struct UnlinkedFamily {
    enum Kind { kType1, kType2, kMixed };
    Kind kind = kType2;
    std::vector<uint64_t> sets;  // sorted vertex masks
};

// the closed-form family: component choices (A or B per component, plus the
// fixed points) on non-bipartite factors, crossed with box unions indexed by
// maximal singular subspaces/cosets of the quotient form on bipartite factors
UnlinkedFamily construct_m(const LinkageGraph& g);

// quotient quadratic form P on GF(2)^(2r) for r complete-bipartite factors
// with equal part sizes; Delta(u,v) = P(class(u) + class(v)) is verified on
// every vertex pair before returning
QuadForm fk_form_p(const LinkageGraph& g);

struct ClassificationReport {
    int max_size = 0;
    long long c_product = 1;     // prod c_{T_i}
    long long c_t0_power = 1;    // c^k for the parent pairs
    bool all_factors_maximal = false;
    bool size_iff_maximal = false;  // max == c^k exactly when all T_i = T_i0
    bool families_match = true;     // maximizers == construct_m (when maximal)
    int family_count = 0;
};

// factors given as PairSpecs whose t may be any admissible generating subset
ClassificationReport verify_classification(const std::vector<PairSpec>& specs);

}  // namespace unram2
