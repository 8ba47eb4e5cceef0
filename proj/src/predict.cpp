#include "unram2/predict.hpp"

#include <map>
#include <stdexcept>

namespace unram2 {

namespace {

Int gaussian_binom2(int n, int k) {
    // [n choose k]_2 = prod (2^(n-i) - 1)/(2^(k-i) - 1)
    if (k < 0 || k > n) return 0;
    Int num = 1, den = 1;
    for (int i = 0; i < k; i++) {
        num *= pow2(n - i) - 1;
        den *= pow2(k - i) - 1;
    }
    return num / den;
}

Int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    Int r = 1;
    for (int i = 1; i <= k; i++) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

Int subspace_count(int k) {
    Int total = 0;
    for (int j = 0; j <= k; j++) total += gaussian_binom2(k, j);
    return total;
}

Rat m_moment(int k, int sign) {
    if (sign < 0) return Rat(subspace_count(k));
    return Rat(subspace_count(k + 1) - subspace_count(k)) / pow2(k);
}

Int q_pm(const std::vector<int>& component_sizes, int sign) {
    int a = sign < 0 ? 1 : 0;
    int s = int(component_sizes.size());
    // distribute m_i == 0,1 (mod 4), m_i <= |C_i|, with sum == a (mod 2)
    Int total = 0;
    std::vector<int> m(s, 0);
    auto rec = [&](auto&& self, int idx, int sum, Int prod) -> void {
        if (idx == s) {
            if ((sum & 1) == a) total += prod;
            return;
        }
        for (int mi = 0; mi <= component_sizes[idx]; mi++) {
            if (mi % 4 != 0 && mi % 4 != 1) continue;
            self(self, idx + 1, sum + mi, prod * binom(component_sizes[idx], mi));
        }
    };
    rec(rec, 0, 0, 1);
    return total;
}

Int q_pm(const PairSpec& spec, int sign) {
    std::vector<int> sizes;
    for (const auto& comp : graph_components(spec)) sizes.push_back(int(comp.size()));
    return q_pm(sizes, sign);
}

PairPredict pair_predict(const PairSpec& spec_at_t0) {
    if (!is_admissible(spec_at_t0))
        throw std::invalid_argument("pair_predict: non-admissible pair");
    auto t0 = maximal_admissible_set(spec_at_t0.ext, spec_at_t0.h);
    if (spec_at_t0.t != t0)
        throw std::invalid_argument("pair_predict: expects T = T0");
    PairPredict p;
    p.n = spec_at_t0.n();
    p.c = conjugacy_count(spec_at_t0);
    auto comps = graph_components(spec_at_t0);
    p.s = int(comps.size());
    for (const auto& comp : comps) p.component_sizes.push_back(int(comp.size()));
    p.aut_h = Int((unsigned long long)aut_h(spec_at_t0.ext, spec_at_t0.h).size());
    p.t0_size = Int((unsigned long long)t0.size());
    p.bipartite = graph_complete_bipartite(spec_at_t0.ext, t0);
    p.q_minus = q_pm(p.component_sizes, -1);
    p.q_plus = q_pm(p.component_sizes, +1);
    return p;
}

Rat point_mass(const PairPredict& p, int sign) {
    if (p.bipartite)
        throw std::invalid_argument("point_mass: T0 is complete bipartite");
    return Rat(p.t0_size * p.q(sign)) / (pow2(p.c - p.s + p.n - 1) * p.aut_h);
}

Rat kth_moment_t_route(const PairPredict& p, int sign, int k) {
    // 2^(k + k(s - c) - k n) |T|^k (prod Q)^k / |Aut_{H,T0}|^k
    Rat num = 1;
    for (int i = 0; i < k; i++) num *= Rat(p.t0_size * p.q(sign)) / p.aut_h;
    int e = k + k * (p.s - p.c) - k * p.n;
    if (e >= 0) num *= pow2(e);
    else num /= pow2(-e);
    return num;
}

Rat correlation_prediction(const std::vector<PairPredict>& pairs, int sign) {
    Rat qinv = 1;
    Rat pprod = 1;
    int abelian = 0;
    for (const auto& p : pairs) {
        qinv /= Rat(p.q_norm());
        if (p.bipartite) {
            abelian++;
        } else {
            // P_j = |T0| Q / 2^(c-s); then P_j / q_j is the point mass
            pprod *= Rat(p.t0_size * p.q(sign)) / pow2(p.c - p.s);
        }
    }
    Rat alt = 0;
    for (int i = 0; i <= abelian; i++) {
        Rat term = Rat(binom(abelian, i)) * m_moment(abelian - i, sign);
        alt += (i % 2 == 0) ? term : -term;
    }
    return qinv * pprod * alt;
}

namespace {

// prod_{k=a}^{b} (1 - 2^-k) as an exact rational
Rat euler_partial(int a, int b) {
    Rat r = 1;
    for (int k = a; k <= b; k++) r *= Rat(pow2(k) - 1) / pow2(k);
    return r;
}

}  // namespace

CLProb cohen_lenstra_rank_prob(int i, int sign, int truncation) {
    int u = sign < 0 ? 0 : 1;
    // 2^{-i(i+u)} prod_{k>u}(1-2^-k) / (prod_{k=1}^{i}(1-2^-k) prod_{k=u+1}^{u+i}(1-2^-k))
    int top = u + truncation;
    Rat value = euler_partial(u + 1, top);
    value /= pow2(i * (i + u));
    value /= euler_partial(1, i);
    value /= euler_partial(u + 1, u + i);
    CLProb out;
    out.value = value;
    out.error_bound = Rat(1) / pow2(truncation - 1);  // tail of the product
    return out;
}

Rat cohen_lenstra_rank_prob_partition(int i, int sign, int max_log) {
    int u = sign < 0 ? 0 : 1;
    // enumerate abelian 2-groups as partitions e_1 >= e_2 >= ... (types), with
    // |A| = 2^(sum e), weight 1/(|A|^u |Aut A|); |Aut| per the standard
    // formula for abelian p-groups.
    struct Acc {
        Rat num = 0, den = 0;
    } acc;
    std::vector<int> parts;
    auto aut_order = [&](const std::vector<int>& e) {
        // e ascending; d_k = max index with e_l = e_k, c_k = min index (1-based)
        int n = int(e.size());
        std::vector<int> c(n), d(n);
        for (int k = 0; k < n; k++) {
            c[k] = k;
            while (c[k] > 0 && e[c[k] - 1] == e[k]) c[k]--;
            d[k] = k;
            while (d[k] + 1 < n && e[d[k] + 1] == e[k]) d[k]++;
        }
        Int aut = 1;
        for (int k = 0; k < n; k++) aut *= pow2(d[k] + 1) - pow2(k);
        for (int j = 0; j < n; j++) aut *= pow2(e[j] * (n - 1 - d[j]));
        for (int k = 0; k < n; k++) aut *= pow2((e[k] - 1) * (n - c[k]));
        return aut;
    };
    auto rec = [&](auto&& self, int remaining, int maxpart) -> void {
        {
            std::vector<int> e(parts.rbegin(), parts.rend());  // ascending
            int size = 0;
            for (int x : e) size += x;
            Rat w = Rat(1) / (pow2(size * u) * aut_order(e));
            acc.den += w;
            if (int(e.size()) == i) acc.num += w;
        }
        for (int p = 1; p <= std::min(remaining, maxpart); p++) {
            parts.push_back(p);
            self(self, remaining - p, p);
            parts.pop_back();
        }
    };
    rec(rec, max_log, max_log);
    return acc.num / acc.den;
}

BipartiteDist bipartite_distribution(const PairPredict& p, int sign, int imax,
                                     int truncation) {
    if (!p.bipartite)
        throw std::invalid_argument("bipartite_distribution: T0 not complete bipartite");
    BipartiteDist out;
    out.q = p.q_norm();
    out.mass_total = 0;
    for (int i = 0; i <= imax; i++) {
        out.support.push_back(Rat(pow2(i) - 1) / out.q);
        auto pr = cohen_lenstra_rank_prob(i, sign, truncation);
        out.mass.push_back(pr.value);
        out.mass_total += pr.value;
    }
    return out;
}

Rat compositum_density(const std::vector<PairPredict>& pairs, int sign, int truncation) {
    bool any_abelian = false;
    for (const auto& p : pairs)
        if (p.bipartite) any_abelian = true;
    if (!any_abelian) return 1;
    return Rat(1) - cohen_lenstra_rank_prob(0, sign, truncation).value;
}

Rat local_mass(const PairSpec& spec, long long p) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("local_mass: p must be odd");
    const auto& g = spec.ext;
    Int order_g = pow2(g.n + 1);

    // conjugacy classes of lifts of T: a noncentral u gives one class of size
    // 2, a central u two classes of size 1
    struct Cls {
        GroupElement rep;
        int size;
    };
    std::vector<Cls> classes;
    for (Word u : spec.t) {
        bool central = true;
        for (Word v = 0; v <= lowbits(g.n) && central; v++)
            if (g.form.b(u, v)) central = false;
        if (central) {
            classes.push_back({{u, 0}, 1});
            classes.push_back({{u, 1}, 1});
        } else {
            classes.push_back({{u, 0}, 2});
        }
    }

    // ramified term: sum over classes and decomposition groups C2 x C_{2^m}
    Int ram = 0;
    for (const auto& cls : classes) {
        // m = 0: D = <x>, two ramified quadratic extensions
        Int per_x = 2;
        long long prev = centralizer_torsion(g, cls.rep, 0);
        for (int m = 1; m <= g.n + 1; m++) {
            long long cur = centralizer_torsion(g, cls.rep, m);
            long long fresh = cur - prev - (m == 1 ? 1 : 0);
            prev = cur;
            // fresh / |Aut_<x>(D)| subgroups, each with |Aut| = 2^m and one
            // ramified extension
            per_x += fresh;
        }
        ram += Int(cls.size) * per_x;
    }

    // unramified term: over cyclic subgroups D, |Aut(D)| counts generators,
    // so the sum is just |G|
    Int unram = 0;
    {
        std::map<std::vector<std::pair<Word, int>>, int> seen;
        for (Word u = 0; u <= lowbits(g.n); u++)
            for (int eps = 0; eps <= 1; eps++) {
                GroupElement x{u, eps};
                std::vector<std::pair<Word, int>> sub;
                GroupElement cur{0, 0};
                do {
                    sub.push_back({cur.u, cur.eps});
                    cur = multiply(g, cur, x);
                } while (!(cur.u == 0 && cur.eps == 0));
                std::sort(sub.begin(), sub.end());
                int gens = element_order(g, x) <= 2 ? (element_order(g, x) == 1 ? 1 : 1)
                                                    : 2;
                // number of generators of <x>: phi(ord x)
                gens = element_order(g, x) == 4 ? 2 : 1;
                auto [it, inserted] = seen.insert({sub, gens});
                (void)it;
                if (inserted) unram += gens;
            }
    }
    if (unram != order_g) throw std::logic_error("local_mass: cyclic subgroup census");

    Rat total = Rat(ram) / (order_g * p) + Rat(unram) / order_g;
    int c_t = conjugacy_count(spec);
    Rat closed = Rat(1) + Rat(c_t) / p;
    if (total != closed) throw std::logic_error("local_mass: enumeration != 1 + c_T/p");
    return total;
}

// ---- Gamma brute force ------------------------------------------------------

namespace {

struct GammaCtx {
    LinkageGraph graph;
    std::vector<FactorT> fac;
    int k;
    std::vector<uint64_t> maximizers;
    int csize;  // |U| for maximizers

    explicit GammaCtx(const std::vector<PairSpec>& specs)
        : graph([&] {
              std::vector<FactorT> fs;
              for (const auto& s : specs) fs.push_back(make_factor(s.ext, s.t));
              return fs;
          }()) {
        fac = graph.factors();
        k = graph.k();
        auto mx = max_disconnected(graph, true);
        maximizers = mx.sets;
        csize = mx.size;
    }
};

}  // namespace

GammaReport gamma_bruteforce(const std::vector<PairSpec>& specs, int sign, int alpha) {
    if (alpha != 0 && alpha != 2 && alpha != 3)
        throw std::invalid_argument("gamma: alpha must be 0, 2 or 3");
    GammaCtx ctx(specs);
    const int k = ctx.k;

    long long ctotal = 1, csum = 0, ssum = 0;
    Int tprod = 1;
    for (const auto& f : ctx.fac) {
        ctotal *= f.c;
        csum += f.c;
        ssum += int(f.comps.size());
        tprod *= f.r;
    }
    if (ctotal > 6) throw std::invalid_argument("gamma: c exceeds the brute-force budget");

    // closed form
    GammaReport rep;
    rep.alpha = alpha;
    rep.sign = sign;
    long long omega = 2 * ctotal - csum + ssum + (k - 1);
    Int qprod = 1;
    for (const auto& f : ctx.fac) {
        std::vector<int> sizes;
        for (const auto& c : f.comps) sizes.push_back(int(c.size()));
        qprod *= q_pm(sizes, sign);
    }
    rep.closed = pow2(omega) * tprod * qprod;

    // enumerate N (per-factor parity matching the sign), Upsilon, maximal U,
    // solutions of the mod-4 system, and mod-8 lifts
    Int total = 0;
    int want_parity = sign < 0 ? 1 : 0;

    // per-factor subsets of the right parity
    std::vector<std::vector<uint32_t>> nchoices(k);
    for (int j = 0; j < k; j++)
        for (uint32_t m = 0; m < (uint32_t(1) << ctx.fac[j].r); m++)
            if ((std::popcount(m) & 1) == want_parity) nchoices[j].push_back(m);

    std::vector<uint32_t> N(k);
    std::vector<int> ups(k);

    auto run_case = [&]() {
        for (uint64_t uset : ctx.maximizers) {
            // variables = vertices of uset, in ascending order
            std::vector<int> verts;
            for (uint64_t m = uset; m; m &= m - 1) verts.push_back(std::countr_zero(m));
            int nvars = int(verts.size());
            // linear system: one equation per (factor, slot)
            Mat sys(nvars);
            Vec rhs = Vec::zero(64);
            int neq = 0;
            for (int j = 0; j < k; j++)
                for (int i = 0; i < ctx.fac[j].r; i++) {
                    int target = (N[j] >> i) & 1;
                    // the slot carrying the 2-part: -4 flips the residue class
                    // of the odd part; +-8 leaves one representative per sign
                    // pair, kept at the unflipped class
                    if (alpha == 2 && ups[j] == i) target ^= 1;
                    Word row = 0;
                    for (int vi = 0; vi < nvars; vi++)
                        if ((ctx.graph.local(verts[vi], j) >> 1) == i) row |= Word(1) << vi;
                    sys.rows.push_back(row);
                    rhs.set(neq++, target);
                }
            rhs.n = neq;
            auto part = sys.solve(rhs);
            if (!part) continue;
            Mat null = sys.nullspace();

            // phi on unordered pairs within an unlinked set is symmetric
            std::vector<Word> pairphi(nvars, 0);
            for (int a = 0; a < nvars; a++)
                for (int b = a + 1; b < nvars; b++)
                    if (ctx.graph.phi(verts[a], verts[b]))
                        pairphi[a] |= Word(1) << b;
            // chi2 coefficients
            Word lambda = 0;
            for (int vi = 0; vi < nvars; vi++) {
                int acc = 0;
                for (int j = 0; j < k; j++) {
                    int lv = ctx.graph.local(verts[vi], j);
                    if (lv & 1) acc ^= parity(N[j] & ctx.fac[j].link[lv >> 1]);
                }
                if (acc) lambda |= Word(1) << vi;
            }
            // chi3 coefficients e(u) = gamma_{Ups,Gamma}(u) + psi_Ups(u) * alpha,
            // summed over the mod-8 lifts of each variable: a variable whose
            // coefficient is even contributes a factor of 2, an odd one kills
            // the term. alpha = 2 squares every 2-part symbol away, so only
            // the empty Gamma remains. A qualifying Gamma makes chi3 = +1, so
            // all qualifying subsets carry the same monomial; it is counted
            // once (a 2-part in a fixed-point slot would otherwise repeat it).
            Word sel_count = (alpha == 3) ? (Word(1) << k) : 1;
            bool counted = false;
            for (Word sel = 0; sel < sel_count && !counted; sel++) {
                Int liftfactor = 1;
                bool alive = true;
                for (int vi = 0; vi < nvars && alive; vi++) {
                    int e = 0;
                    if (alpha == 3) {
                        for (int j = 0; j < k; j++) {
                            int lv = ctx.graph.local(verts[vi], j);
                            int onv = 2 * ups[j] + 1;
                            if ((sel >> j) & 1)
                                e ^= LinkageGraph::phi_local(ctx.fac[j], lv, onv);
                            e ^= LinkageGraph::phi_local(ctx.fac[j], onv, lv);
                        }
                    }
                    if (e & 1) alive = false;
                    else liftfactor *= 2;
                }
                if (!alive) continue;
                counted = true;

                // sum chi1 chi2 over the solution coset
                long long cosum = 0;
                int dim = null.nrows();
                for (Word sub = 0; sub < (Word(1) << dim); sub++) {
                    Word x = part->bits;
                    for (Word mm = sub; mm; mm &= mm - 1)
                        x ^= null.rows[std::countr_zero(mm)];
                    int expo = 0;
                    for (Word m1 = x; m1; m1 &= m1 - 1) {
                        int a = std::countr_zero(m1);
                        expo ^= parity(pairphi[a] & x);
                    }
                    expo ^= parity(lambda & x);
                    cosum += expo ? -1 : 1;
                }
                total += liftfactor * cosum;
            }
        }
    };

    // iterate N and Upsilon
    auto iter_ups = [&]() {
        if (alpha == 0) {
            // no 2-part; the formal Upsilon sum contributes once per slot tuple
            std::fill(ups.begin(), ups.end(), -1);
            Int reps = 1;
            for (int j = 0; j < k; j++) reps *= ctx.fac[j].r;
            Int before = total;
            run_case();
            total = before + (total - before) * reps;
            return;
        }
        std::fill(ups.begin(), ups.end(), 0);
        while (true) {
            run_case();
            int j = k - 1;
            while (j >= 0 && ups[j] == ctx.fac[j].r - 1) ups[j--] = 0;
            if (j < 0) break;
            ups[j]++;
        }
    };

    std::vector<size_t> ni(k, 0);
    while (true) {
        for (int j = 0; j < k; j++) N[j] = nchoices[j][ni[j]];
        iter_ups();
        int j = k - 1;
        while (j >= 0 && ni[j] + 1 == nchoices[j].size()) ni[j--] = 0;
        if (j < 0) break;
        ni[j]++;
    }

    rep.brute = total;
    rep.match = (rep.brute == rep.closed);
    return rep;
}

}  // namespace unram2
