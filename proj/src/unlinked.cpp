#include "unram2/unlinked.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace unram2 {

FactorT make_factor(const CentralExtension& g, const std::vector<Word>& t) {
    FactorT f;
    f.t = t;
    f.r = int(t.size());
    f.link.assign(f.r, 0);
    for (int i = 0; i < f.r; i++)
        for (int j = 0; j < f.r; j++)
            if (j != i && g.form.b(t[i], t[j])) f.link[i] |= uint32_t(1) << j;
    PairSpec tmp{g, 0, t};
    f.comps = graph_components(tmp);
    f.c = conjugacy_count(tmp);
    std::vector<Word> parts;
    f.bipartite = graph_complete_bipartite(g, t, &parts);
    f.part.assign(f.r, -1);
    if (f.bipartite) {
        int side = 0;
        for (Word w : parts) {
            if (w == 0) { side = 1; continue; }
            for (int i = 0; i < f.r; i++)
                if (t[i] == w) f.part[i] = side;
        }
    }
    return f;
}

LinkageGraph::LinkageGraph(std::vector<FactorT> factors) : fac_(std::move(factors)) {
    nv_ = 1;
    stride_.resize(fac_.size());
    for (size_t j = 0; j < fac_.size(); j++) {
        stride_[j] = nv_;
        nv_ *= 2 * fac_[j].r;
    }
    if (nv_ > kMaxVertices)
        throw std::invalid_argument("linkage graph exceeds the 64-vertex budget");
    adj_.assign(nv_, 0);
    for (int u = 0; u < nv_; u++)
        for (int v = 0; v < nv_; v++)
            if (u != v && delta(u, v)) adj_[u] |= uint64_t(1) << v;
    slot_.resize(fac_.size());
    for (size_t j = 0; j < fac_.size(); j++) {
        slot_[j].assign(fac_[j].r, 0);
        for (int v = 0; v < nv_; v++) slot_[j][local(v, int(j)) >> 1] |= uint64_t(1) << v;
    }
}

bool LinkageGraph::full_support(uint64_t set) const {
    for (size_t j = 0; j < fac_.size(); j++)
        for (int i = 0; i < fac_[j].r; i++)
            if (!(set & slot_[j][i])) return false;
    return true;
}

namespace {

struct Search {
    const LinkageGraph& g;
    bool full_support;
    int nv;
    int best = -1;
    std::vector<uint64_t> sets;

    Search(const LinkageGraph& gg, bool fs) : g(gg), full_support(fs), nv(gg.num_vertices()) {}

    // candidates must still be able to cover every empty slot
    bool support_feasible(uint64_t chosen, uint64_t cand) const {
        if (!full_support) return true;
        uint64_t reach = chosen | cand;
        return g.full_support(reach);
    }

    void rec(uint64_t chosen, int size, uint64_t cand) {
        if (size + std::popcount(cand) < best) return;
        if (!support_feasible(chosen, cand)) return;
        if (cand == 0) {
            if (full_support && !g.full_support(chosen)) return;
            if (size > best) {
                best = size;
                sets.clear();
            }
            if (size == best) sets.push_back(chosen);
            return;
        }
        int v = std::countr_zero(cand);
        uint64_t bit = uint64_t(1) << v;
        rec(chosen | bit, size + 1, cand & ~bit & ~g.adjacency(v));
        rec(chosen, size, cand & ~bit);
    }
};

}  // namespace

MaxDisconnected max_disconnected(const LinkageGraph& g, bool full_support) {
    Search s(g, full_support);
    uint64_t all = g.num_vertices() == 64 ? ~uint64_t(0)
                                          : ((uint64_t(1) << g.num_vertices()) - 1);
    s.best = 0;
    s.rec(0, 0, all);
    MaxDisconnected out;
    out.size = s.best;
    out.sets = std::move(s.sets);
    // drop non-maximum leftovers from before the last best-update
    std::sort(out.sets.begin(), out.sets.end());
    out.sets.erase(std::remove_if(out.sets.begin(), out.sets.end(),
                                  [&](uint64_t m) { return std::popcount(m) != out.size; }),
                   out.sets.end());
    return out;
}

namespace {

// vertex class within a bipartite factor: bit1 = part, bit0 = on-type xor part,
// chosen so Delta descends to a quadratic form on the classes
int bip_class(const FactorT& f, int lv) {
    int i = lv >> 1, on = lv & 1;
    int part = f.part[i];
    return (part << 1) | (on ^ part);
}

// enumerate all totally singular subspaces of dimension `dim` of P
void singular_subspaces_rec(const QuadForm& P, Mat cur, Word start, int dim,
                            std::vector<Mat>& out) {
    if (cur.nrows() == dim) {
        out.push_back(cur.rref());
        return;
    }
    for (Word v = start; v <= lowbits(P.n); v++) {
        if (P.q(v)) continue;
        if (cur.in_rowspace(Vec{v, P.n})) continue;
        bool ok = true;
        for (Word w : span_elements(cur))
            if (P.q(w ^ v)) { ok = false; break; }
        if (!ok) continue;
        Mat ext = cur;
        ext.append(Vec{v, P.n});
        singular_subspaces_rec(P, ext, v + 1, dim, out);
    }
}

}  // namespace

QuadForm fk_form_p(const LinkageGraph& g) {
    int k = g.k();
    for (const auto& f : g.factors()) {
        if (!f.bipartite)
            throw std::invalid_argument("fk_form_p: factor is not complete bipartite");
        int p0 = 0, p1 = 0;
        for (int x : f.part) (x == 0 ? p0 : p1)++;
        if (p0 != p1)
            throw std::invalid_argument("fk_form_p: bipartite parts have different sizes");
    }
    int dim = 2 * k;
    // representatives of each class vector
    std::vector<int> rep(size_t(1) << dim, -1);
    std::vector<int> cls(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); v++) {
        Word q = 0;
        for (int j = 0; j < k; j++)
            q |= Word(bip_class(g.factors()[j], g.local(v, j))) << (2 * j);
        cls[v] = int(q);
        if (rep[q] < 0) rep[q] = v;
    }
    for (Word q = 0; q < (Word(1) << dim); q++)
        if (rep[q] < 0) throw std::logic_error("fk_form_p: missing class representative");

    // P from values on the point table; quadratic coefficients by polarization
    auto pval = [&](Word w) { return g.delta(rep[w], rep[0]); };
    Word bits = 0;
    int idx = 0;
    for (int i = 0; i < dim; i++)
        for (int j = i; j < dim; j++, idx++) {
            int v = (i == j) ? pval(Word(1) << i)
                             : (pval((Word(1) << i) ^ (Word(1) << j)) ^
                                pval(Word(1) << i) ^ pval(Word(1) << j));
            bits |= Word(v) << idx;
        }
    QuadForm P = QuadForm::from_upper_bits(dim, bits);
    for (Word w = 0; w <= lowbits(dim); w++)
        if (P.q(w) != pval(w))
            throw std::logic_error("fk_form_p: Delta is not quadratic on the classes");
    // Delta(u,v) = P(cls u + cls v) on every vertex pair
    for (int u = 0; u < g.num_vertices(); u++)
        for (int v = 0; v < g.num_vertices(); v++)
            if (g.delta(u, v) != P.q(Word(cls[u] ^ cls[v])))
                throw std::logic_error("fk_form_p: quotient identity fails");
    return P;
}

UnlinkedFamily construct_m(const LinkageGraph& g) {
    int k = g.k();
    std::vector<int> bip, nonbip;
    for (int j = 0; j < k; j++)
        (g.factors()[j].bipartite ? bip : nonbip).push_back(j);

    // per non-bipartite factor: local-vertex masks of each family member
    std::vector<std::vector<uint64_t>> type2(k);
    for (int j : nonbip) {
        const FactorT& f = g.factors()[j];
        std::vector<std::vector<int>> big;  // components of size >= 2
        uint64_t fixed = 0;                 // both halves of every fixed point
        for (const auto& comp : f.comps) {
            if (comp.size() == 1 && f.link[comp[0]] == 0) {
                fixed |= uint64_t(0b11) << (2 * comp[0]);
            } else {
                big.push_back(comp);
            }
        }
        for (uint64_t choice = 0; choice < (uint64_t(1) << big.size()); choice++) {
            uint64_t m = fixed;
            for (size_t ci = 0; ci < big.size(); ci++) {
                int on = int((choice >> ci) & 1);  // A (off halves) or B (on halves)
                for (int i : big[ci]) m |= uint64_t(1) << (2 * i + on);
            }
            type2[j].push_back(m);
        }
    }

    // bipartite block: maximal singular subspaces/cosets of the quotient form
    std::vector<std::vector<Word>> boxes;  // each member = list of class vectors
    if (!bip.empty()) {
        std::vector<FactorT> subfac;
        for (int j : bip) subfac.push_back(g.factors()[j]);
        LinkageGraph sub(subfac);
        QuadForm P = fk_form_p(sub);
        int r = int(bip.size());
        std::vector<Mat> spaces;
        singular_subspaces_rec(P, Mat(P.n), 1, r, spaces);
        std::set<std::vector<Word>> seen;
        for (const Mat& V : spaces) {
            auto base = span_elements(V);
            for (Word c = 0; c <= lowbits(P.n); c++) {
                std::vector<Word> coset;
                for (Word v : base) coset.push_back(v ^ c);
                std::sort(coset.begin(), coset.end());
                if (!seen.insert(coset).second) continue;
                // full support within the bipartite block: both parts hit per factor
                bool ok = true;
                for (int jj = 0; jj < r && ok; jj++) {
                    bool lo = false, hi = false;
                    for (Word q : coset)
                        (((q >> (2 * jj + 1)) & 1) ? hi : lo) = true;
                    ok = lo && hi;
                }
                if (ok) boxes.push_back(coset);
            }
        }
    }

    // assemble product sets over all vertices
    UnlinkedFamily fam;
    fam.kind = bip.empty() ? UnlinkedFamily::kType2
                           : (nonbip.empty() ? UnlinkedFamily::kType1 : UnlinkedFamily::kMixed);
    // cartesian product over non-bipartite choices
    std::vector<size_t> idx(k, 0);
    std::vector<std::vector<uint64_t>*> lists;
    for (int j : nonbip) lists.push_back(&type2[j]);
    size_t combos = 1;
    for (auto* l : lists) combos *= l->size();
    size_t bchoices = bip.empty() ? 1 : boxes.size();

    for (size_t bc = 0; bc < bchoices; bc++) {
        for (size_t t2 = 0; t2 < combos; t2++) {
            // decode the per-factor local masks
            std::vector<uint64_t> local_mask(k, 0);
            size_t rem = t2;
            for (size_t li = 0; li < lists.size(); li++) {
                local_mask[nonbip[li]] = (*lists[li])[rem % lists[li]->size()];
                rem /= lists[li]->size();
            }
            uint64_t m = 0;
            for (int v = 0; v < g.num_vertices(); v++) {
                bool in = true;
                for (int j : nonbip)
                    if (!((local_mask[j] >> g.local(v, j)) & 1)) in = false;
                if (in && !bip.empty()) {
                    Word q = 0;
                    for (size_t jj = 0; jj < bip.size(); jj++)
                        q |= Word(bip_class(g.factors()[bip[jj]], g.local(v, int(bip[jj]))))
                             << (2 * jj);
                    in = std::binary_search(boxes[bc].begin(), boxes[bc].end(), q);
                }
                if (in) m |= uint64_t(1) << v;
            }
            fam.sets.push_back(m);
        }
    }
    std::sort(fam.sets.begin(), fam.sets.end());
    fam.sets.erase(std::unique(fam.sets.begin(), fam.sets.end()), fam.sets.end());
    return fam;
}

ClassificationReport verify_classification(const std::vector<PairSpec>& specs) {
    ClassificationReport rep;
    std::vector<FactorT> factors;
    bool all_max = true;
    for (const auto& s : specs) {
        if (!is_admissible(s))
            throw std::invalid_argument("verify_classification: non-admissible factor");
        factors.push_back(make_factor(s.ext, s.t));
        rep.c_product *= factors.back().c;
        auto t0 = maximal_admissible_set(s.ext, s.h);
        PairSpec s0{s.ext, s.h, t0};
        rep.c_t0_power *= conjugacy_count(s0);
        if (s.t != t0) all_max = false;
    }
    rep.all_factors_maximal = all_max;
    LinkageGraph g(factors);
    auto mx = max_disconnected(g, true);
    rep.max_size = mx.size;
    rep.size_iff_maximal = (mx.size == rep.c_t0_power) == all_max;
    if (all_max) {
        auto fam = construct_m(g);
        rep.family_count = int(fam.sets.size());
        rep.families_match = (fam.sets == mx.sets);
    }
    return rep;
}

}  // namespace unram2
