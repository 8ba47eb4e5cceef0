#include "unram2/group.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace unram2 {

CentralExtension::CentralExtension(QuadForm f) : form(std::move(f)), n(form.n) {
    if (form.is_zero())
        throw std::invalid_argument("central extension: coefficient matrix is zero");
}

int element_order(const CentralExtension& g, GroupElement x) {
    if (x.u == 0) return x.eps ? 2 : 1;
    return g.form.q(x.u) ? 4 : 2;
}

std::vector<Word> maximal_admissible_set(const CentralExtension& g, Word h) {
    std::vector<Word> t0;
    for (Word u = 1; u <= lowbits(g.n); u++)
        if (g.form.q(u) == 0 && parity(h & u)) t0.push_back(u);
    return t0;
}

bool is_admissible(const PairSpec& s) {
    if (s.h == 0 || s.t.empty()) return false;
    Mat span(s.n());
    for (Word u : s.t) {
        if (s.ext.form.q(u) != 0 || parity(s.h & u) != 1) return false;
        span.append(Vec{u, s.n()});
    }
    return span.rank() == s.n();
}

bool pair_admissible(const CentralExtension& g, Word h) {
    if (h == 0) return false;
    PairSpec s{g, h, maximal_admissible_set(g, h)};
    return is_admissible(s);
}

namespace {

// index mask of elements of t linked to t[i] by the commutation pairing
std::vector<Word> link_masks(const PairSpec& s) {
    int r = int(s.t.size());
    std::vector<Word> m(r, 0);
    for (int i = 0; i < r; i++)
        for (int j = 0; j < r; j++)
            if (j != i && s.ext.form.b(s.t[i], s.t[j])) m[i] |= Word(1) << j;
    return m;
}

}  // namespace

int conjugacy_count(const PairSpec& s) {
    auto m = link_masks(s);
    int r1 = 0;
    for (Word w : m)
        if (w) r1++;
    int r2 = int(s.t.size()) - r1;
    return r1 + 2 * r2;
}

std::vector<std::vector<int>> graph_components(const PairSpec& s) {
    auto m = link_masks(s);
    int r = int(s.t.size());
    std::vector<int> comp(r, -1);
    std::vector<std::vector<int>> out;
    for (int i = 0; i < r; i++) {
        if (comp[i] >= 0) continue;
        std::vector<int> stack{i}, members;
        comp[i] = int(out.size());
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (Word w = m[v]; w; w &= w - 1) {
                int j = std::countr_zero(w);
                if (comp[j] < 0) {
                    comp[j] = comp[i];
                    stack.push_back(j);
                }
            }
        }
        std::sort(members.begin(), members.end());
        out.push_back(members);
    }
    return out;
}

bool graph_complete_bipartite(const CentralExtension& g, const std::vector<Word>& t,
                              std::vector<Word>* parts) {
    int r = int(t.size());
    PairSpec tmp{g, 0, t};
    auto m = link_masks(tmp);
    // 2-color by BFS; every vertex must be reachable (no isolated vertices)
    std::vector<int> color(r, -1);
    int start = -1;
    for (int i = 0; i < r && start < 0; i++)
        if (m[i]) start = i;
    if (start < 0) return false;
    std::vector<int> stack{start};
    color[start] = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (Word w = m[v]; w; w &= w - 1) {
            int j = std::countr_zero(w);
            if (color[j] < 0) {
                color[j] = 1 - color[v];
                stack.push_back(j);
            } else if (color[j] == color[v]) {
                return false;
            }
        }
    }
    Word part0 = 0, part1 = 0;
    for (int i = 0; i < r; i++) {
        if (color[i] < 0) return false;  // disconnected or isolated
        (color[i] == 0 ? part0 : part1) |= Word(1) << i;
    }
    // completeness: every cross pair is an edge
    for (int i = 0; i < r; i++) {
        Word expect = (color[i] == 0) ? part1 : part0;
        if (m[i] != expect) return false;
    }
    if (parts) {
        parts->clear();
        for (int i = 0; i < r; i++)
            if (color[i] == 0) parts->push_back(t[i]);
        parts->push_back(0);  // separator between the two parts
        for (int i = 0; i < r; i++)
            if (color[i] == 1) parts->push_back(t[i]);
    }
    return true;
}

bool is_h_abelian(const CentralExtension& g, Word h) {
    auto t0 = maximal_admissible_set(g, h);
    bool graph = graph_complete_bipartite(g, t0);
    // direct check over all lifts of ker h
    bool direct = true;
    for (Word u = 0; u <= lowbits(g.n) && direct; u++) {
        if (parity(h & u)) continue;
        for (Word v = u + 1; v <= lowbits(g.n) && direct; v++) {
            if (parity(h & v)) continue;
            if (g.form.b(u, v)) direct = false;
        }
    }
    if (graph != direct)
        throw std::logic_error("is_h_abelian: graph criterion disagrees with commutation");
    return graph;
}

std::vector<Mat> aut_ht(const PairSpec& s) {
    if (!is_admissible(s)) throw std::invalid_argument("aut_ht: pair not admissible");
    int n = s.n();
    // choose a basis inside t
    Mat basis(n);
    std::vector<int> bidx;
    for (int i = 0; i < int(s.t.size()) && basis.nrows() < n; i++) {
        if (!basis.in_rowspace(Vec{s.t[i], n})) {
            basis.append(Vec{s.t[i], n});
            bidx.push_back(i);
        }
    }
    std::set<Word> tset(s.t.begin(), s.t.end());
    std::vector<Mat> out;
    // phi is determined by the images of the basis elements, which must land
    // in t for phi(T) = T to hold
    int r = int(s.t.size());
    std::vector<int> choice(n, 0);
    auto emit = [&]() {
        // images basis[k] -> t[choice[k]]; build matrix rows = images of e_i
        Mat on_basis(n);
        for (int k = 0; k < n; k++) on_basis.append(Vec{s.t[choice[k]], n});
        // solve for the action on unit vectors: e_i = sum coords over basis
        Mat phi(n);
        for (int i = 0; i < n; i++) {
            Mat sys(basis.nrows());
            for (int c = 0; c < n; c++) {
                Word col = 0;
                for (int k = 0; k < basis.nrows(); k++)
                    col |= ((basis.rows[k] >> c) & 1) << k;
                sys.rows.push_back(col);
            }
            Vec coords = *sys.solve(Vec::unit(n, i));
            phi.append(on_basis.apply(coords));
        }
        if (phi.rank() != n) return;
        // setwise T, h, and Q preservation
        for (Word u : s.t)
            if (!tset.count(phi.apply(Vec{u, n}).bits)) return;
        for (Word u = 0; u <= lowbits(n); u++) {
            Word im = phi.apply(Vec{u, n}).bits;
            if (s.ext.form.q(im) != s.ext.form.q(u)) return;
            if (parity(s.h & im) != parity(s.h & u)) return;
        }
        out.push_back(phi);
    };
    // iterate over all n-tuples of t-elements as basis images
    while (true) {
        emit();
        int k = n - 1;
        while (k >= 0 && choice[k] == r - 1) choice[k--] = 0;
        if (k < 0) break;
        choice[k]++;
    }
    return out;
}

std::vector<Mat> aut_h(const CentralExtension& g, Word h) {
    PairSpec s{g, h, maximal_admissible_set(g, h)};
    return aut_ht(s);
}

long long centralizer_torsion(const CentralExtension& g, GroupElement x, int m) {
    long long count = 0;
    for (Word u = 0; u <= lowbits(g.n); u++) {
        for (int eps = 0; eps <= 1; eps++) {
            GroupElement y{u, eps};
            if (commutator(g, x, y).eps) continue;
            int ord = element_order(g, y);
            // ord divides 2^m?
            long long pow = 1;
            for (int i = 0; i < m && pow < ord; i++) pow *= 2;
            if (pow >= ord) count++;
        }
    }
    return count;
}

// ---- text format & presets ------------------------------------------------

PairSpec parse_group_spec(const std::string& text) {
    // "n; a=<hex>; h=<bits>"
    std::string s;
    for (char c : text)
        if (!isspace((unsigned char)c)) s += c;
    auto p1 = s.find(';');
    auto p2 = s.find(';', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw std::invalid_argument("group spec: expected 'n; a=<hex>; h=<bits>'");
    int n = std::stoi(s.substr(0, p1));
    if (n < 1 || n > 16) throw std::invalid_argument("group spec: bad dimension");
    std::string apart = s.substr(p1 + 1, p2 - p1 - 1);
    std::string hpart = s.substr(p2 + 1);
    if (apart.rfind("a=", 0) != 0 || hpart.rfind("h=", 0) != 0)
        throw std::invalid_argument("group spec: expected a= and h= fields");
    Word abits = std::stoull(apart.substr(2), nullptr, 16);
    std::string hbits = hpart.substr(2);
    if (int(hbits.size()) != n) throw std::invalid_argument("group spec: h length != n");
    Word h = 0;
    for (int i = 0; i < n; i++) {
        if (hbits[i] != '0' && hbits[i] != '1')
            throw std::invalid_argument("group spec: h must be a bit string");
        if (hbits[i] == '1') h |= Word(1) << i;
    }
    CentralExtension g(QuadForm::from_upper_bits(n, abits));
    PairSpec spec{g, h, maximal_admissible_set(g, h)};
    return spec;
}

std::string format_group_spec(const PairSpec& s) {
    std::ostringstream os;
    os << s.n() << "; a=" << std::hex << s.ext.form.upper_bits() << std::dec << "; h=";
    for (int i = 0; i < s.n(); i++) os << ((s.h >> i) & 1);
    return os.str();
}

namespace {
struct Preset {
    const char* name;
    int n;
    Word abits;
    Word h;
};
// forms: upper-triangle bit k order a11,a12,...,a1n,a22,...
const Preset kPresets[] = {
    {"D4:C4", 2, 0x2, 0b11},           // a12
    {"D4oC4:Q8", 3, 0x16, 0b111},      // a12,a13,a23
    {"D4oC4:C4xC2", 3, 0x14, 0b111},   // a13,a23
    {"D4xC2:D4", 3, 0x02, 0b111},      // a12
};
}  // namespace

std::optional<PairSpec> preset_pair(const std::string& name) {
    for (const auto& p : kPresets) {
        if (name == p.name) {
            CentralExtension g(QuadForm::from_upper_bits(p.n, p.abits));
            return PairSpec{g, p.h, maximal_admissible_set(g, p.h)};
        }
    }
    return std::nullopt;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : kPresets) out.push_back(p.name);
    return out;
}

std::vector<PairClass> enumerate_pair_classes(int n) {
    // orbits of the GL_n substitution action on admissible (form, hyperplane)
    // pairs, explored with transvection generators e_i -> e_i + e_j
    std::vector<Mat> gens;
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            if (i == j) continue;
            Mat t = Mat::identity(n);
            t.rows[i] ^= Word(1) << j;
            gens.push_back(t);
        }

    auto transform = [&](Word abits, Word h, const Mat& phi) -> std::pair<Word, Word> {
        QuadForm f = QuadForm::from_upper_bits(n, abits);
        // Q'(u) = Q(phi u): a'_ii = Q(phi e_i), a'_ij = B(phi e_i, phi e_j); h' = h . phi
        Word newbits = 0;
        int k = 0;
        for (int i = 0; i < n; i++)
            for (int j = i; j < n; j++, k++) {
                int v = (i == j) ? f.q(phi.rows[i]) : f.b(phi.rows[i], phi.rows[j]);
                newbits |= Word(v) << k;
            }
        Word newh = 0;
        for (int i = 0; i < n; i++) newh |= Word(parity(h & phi.rows[i])) << i;
        return {newbits, newh};
    };

    int tri = n * (n + 1) / 2;
    std::map<std::pair<Word, Word>, int> orbit_of;
    std::vector<PairClass> classes;
    for (Word abits = 1; abits < (Word(1) << tri); abits++) {
        for (Word h = 1; h <= lowbits(n); h++) {
            if (orbit_of.count({abits, h})) continue;
            CentralExtension g(QuadForm::from_upper_bits(n, abits));
            if (!pair_admissible(g, h)) continue;
            // BFS the orbit
            std::vector<std::pair<Word, Word>> frontier{{abits, h}};
            std::pair<Word, Word> canon{abits, h};
            int id = int(classes.size());
            orbit_of[{abits, h}] = id;
            long long size = 1;
            while (!frontier.empty()) {
                auto [ab, hh] = frontier.back();
                frontier.pop_back();
                for (const Mat& t : gens) {
                    auto img = transform(ab, hh, t);
                    if (!orbit_of.count(img)) {
                        orbit_of[img] = id;
                        frontier.push_back(img);
                        size++;
                        canon = std::min(canon, img);
                    }
                }
            }
            PairClass pc;
            CentralExtension gc(QuadForm::from_upper_bits(n, canon.first));
            pc.rep = PairSpec{gc, canon.second, maximal_admissible_set(gc, canon.second)};
            pc.c = conjugacy_count(pc.rep);
            pc.components = int(graph_components(pc.rep).size());
            pc.bipartite = graph_complete_bipartite(gc, pc.rep.t);
            pc.orbit_size = size;
            pc.aut_h_size = (long long)aut_h(gc, canon.second).size();
            for (const auto& p : kPresets) {
                if (p.n != n) continue;
                if (orbit_of.count({p.abits, p.h}) && orbit_of[{p.abits, p.h}] == id)
                    pc.name = p.name;
            }
            if (pc.name.empty()) pc.name = format_group_spec(pc.rep);
            classes.push_back(std::move(pc));
        }
    }
    return classes;
}

}  // namespace unram2
