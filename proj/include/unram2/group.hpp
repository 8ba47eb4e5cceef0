#pragma once
// Central extensions G of GF(2)^n by GF(2), realized concretely through the
// 2-cocycle beta(u,v) = sum_{i>j} a_ij u_i v_j + sum_i a_ii u_i v_i attached
// to a symmetric coefficient matrix a. Then beta(u,u) = Q(u) and
// beta(u,v) + beta(v,u) = B(u,v), so squares and commutators in G match the
// quadratic form: ord(x_u) = 4 iff Q(u) = 1, [x_u, x_v] != 1 iff B(u,v) = 1.

#include <optional>
#include <string>
#include <vector>

#include "unram2/quadform.hpp"

namespace unram2 {

struct CentralExtension {
    QuadForm form;
    int n = 0;

    CentralExtension() = default;
    explicit CentralExtension(QuadForm f);

    int beta(Word u, Word v) const {
        int acc = parity(form.diag & u & v);
        Word b = u;
        while (b) {
            int i = std::countr_zero(b);
            b &= b - 1;
            acc ^= parity(form.a[i] & ~(Word(1) << i) & v & lowbits(i));
        }
        return acc;
    }
};

struct GroupElement {
    Word u = 0;
    int eps = 0;
    bool operator==(const GroupElement&) const = default;
};

inline GroupElement multiply(const CentralExtension& g, GroupElement x, GroupElement y) {
    return {x.u ^ y.u, x.eps ^ y.eps ^ g.beta(x.u, y.u)};
}

inline GroupElement square(const CentralExtension& g, GroupElement x) {
    return {0, g.form.q(x.u)};
}

int element_order(const CentralExtension& g, GroupElement x);

inline GroupElement commutator(const CentralExtension& g, GroupElement x, GroupElement y) {
    // [x,y] = x^-1 y^-1 x y is central here: (0, B(u,v))
    return {0, g.form.b(x.u, y.u)};
}

// (G, H, T): H = index-2 subgroup given by the nonzero functional h
// (Hbar = ker h in G/Phi(G)), T a subset of GF(2)^n.
struct PairSpec {
    CentralExtension ext;
    Word h = 0;
    std::vector<Word> t;  // kept sorted

    int n() const { return ext.n; }
};

// T0 = {u : Q(u) = 0 and h.u = 1}, sorted ascending.
std::vector<Word> maximal_admissible_set(const CentralExtension& g, Word h);

bool is_admissible(const PairSpec& s);
// admissible (G,H): T0 spans GF(2)^n (the form is nonzero by construction)
bool pair_admissible(const CentralExtension& g, Word h);

// c_T = r1 + 2 r2: elements of t with an edge in t count once, isolated
// (central-lift) elements twice.
int conjugacy_count(const PairSpec& s);

// connected components of the commutation graph on t; singletons included
std::vector<std::vector<int>> graph_components(const PairSpec& s);

// H abelian iff the graph on T0 is complete bipartite; also verified against
// direct commutation of all lifts of ker h.
bool is_h_abelian(const CentralExtension& g, Word h);
bool graph_complete_bipartite(const CentralExtension& g, const std::vector<Word>& t,
                              std::vector<Word>* parts = nullptr);

// Aut_{H,T}(G, Phi(G)) = {phi in GL_n : phi(T) = T, h.phi = h, Q.phi = Q};
// the last condition is exactly the lifting criterion to Aut(G).
std::vector<Mat> aut_ht(const PairSpec& s);
// Aut_H(G, Phi(G)); equals aut_ht at T = T0 since T0 is defined from Q and h.
std::vector<Mat> aut_h(const CentralExtension& g, Word h);

// #{g in C_G(x) : g^(2^m) = 1} by enumerating all 2^(n+1) elements.
long long centralizer_torsion(const CentralExtension& g, GroupElement x, int m);

// ---- text format & presets ------------------------------------------------
// "n; a=<hex>; h=<bits>" where <hex> packs the upper triangle of a row-major
// including the diagonal (bit 0 = a_11, bit 1 = a_12, ...) and <bits> is
// h_1 h_2 ... h_n.
PairSpec parse_group_spec(const std::string& text);  // throws on bad input
std::string format_group_spec(const PairSpec& s);
std::optional<PairSpec> preset_pair(const std::string& name);
std::vector<std::string> preset_names();

// Admissible pairs (G,H) for dimension n, one representative per orbit of the
// simultaneous GL_n action on (form, hyperplane).
struct PairClass {
    PairSpec rep;          // with t = T0
    std::string name;      // preset name when the orbit contains one
    int c = 0;             // c_{T0}
    int components = 0;    // s
    bool bipartite = false;
    long long orbit_size = 0;
    long long aut_h_size = 0;
};
std::vector<PairClass> enumerate_pair_classes(int n);

}  // namespace unram2
