#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "unram2/group.hpp"

using namespace unram2;

static PairSpec P(const char* name) { return *preset_pair(name); }

TEST_CASE("multiplication in D4") {
    auto s = P("D4:C4");
    const auto& g = s.ext;
    GroupElement x1{0b01, 0}, x2{0b10, 0};
    CHECK(multiply(g, x1, x1) == GroupElement{0, 0});  // generator has order 2
    // commutator [x1,x2] via the four-fold product
    GroupElement inv1{x1.u, x1.eps ^ g.form.q(x1.u)};
    GroupElement inv2{x2.u, x2.eps ^ g.form.q(x2.u)};
    GroupElement c = multiply(g, multiply(g, inv1, inv2), multiply(g, x1, x2));
    CHECK(c == GroupElement{0, 1});  // the central element a
    // x1 x2 has order 4
    GroupElement y = multiply(g, x1, x2);
    CHECK(multiply(g, y, y) == GroupElement{0, 1});
    CHECK(element_order(g, y) == 4);
}

TEST_CASE("multiplication is associative and (0,0) is the identity (n<=4)") {
    for (const char* name : {"D4:C4", "D4oC4:Q8", "D4xC2:D4"}) {
        auto s = P(name);
        const auto& g = s.ext;
        Word all = lowbits(g.n);
        for (Word u = 0; u <= all; u++)
            for (Word v = 0; v <= all; v++) {
                CHECK(g.beta(u, u) == g.form.q(u));
                CHECK((g.beta(u, v) ^ g.beta(v, u)) == g.form.b(u, v));
                for (Word w = 0; w <= all; w++) {
                    GroupElement a{u, 0}, b{v, 1}, c{w, 0};
                    CHECK(multiply(g, multiply(g, a, b), c) ==
                          multiply(g, a, multiply(g, b, c)));
                }
            }
    }
}

TEST_CASE("cocycle identities over random forms up to n = 6") {
    std::mt19937_64 rng(777);
    for (int n = 2; n <= 6; n++) {
        int tri = n * (n + 1) / 2;
        for (int rep = 0; rep < 30; rep++) {
            Word bits = rng() & lowbits(tri);
            if (!bits) continue;
            CentralExtension g(QuadForm::from_upper_bits(n, bits));
            for (int t = 0; t < 200; t++) {
                Word u = rng() & lowbits(n), v = rng() & lowbits(n);
                CHECK(g.beta(u, u) == g.form.q(u));
                CHECK((g.beta(u, v) ^ g.beta(v, u)) == g.form.b(u, v));
            }
        }
    }
}

TEST_CASE("associativity holds for every n = 4 form (sampled triples)") {
    std::mt19937_64 rng(4242);
    for (int rep = 0; rep < 40; rep++) {
        Word bits = 1 + (rng() % (lowbits(10)));
        CentralExtension g(QuadForm::from_upper_bits(4, bits));
        for (int t = 0; t < 500; t++) {
            GroupElement a{rng() & lowbits(4), int(rng() & 1)};
            GroupElement b{rng() & lowbits(4), int(rng() & 1)};
            GroupElement c{rng() & lowbits(4), int(rng() & 1)};
            CHECK(multiply(g, multiply(g, a, b), c) == multiply(g, a, multiply(g, b, c)));
        }
    }
}

TEST_CASE("element orders: ord(x) = ord(xa); order 4 iff Q = 1") {
    auto s = P("D4oC4:Q8");
    for (Word u = 1; u <= lowbits(3); u++) {
        CHECK(element_order(s.ext, {u, 0}) == element_order(s.ext, {u, 1}));
        CHECK((element_order(s.ext, {u, 0}) == 4) == (s.ext.form.q(u) == 1));
    }
}

TEST_CASE("T0 for the presets") {
    CHECK(P("D4:C4").t == std::vector<Word>{0b01, 0b10});
    CHECK(P("D4oC4:Q8").t == std::vector<Word>{0b001, 0b010, 0b100});
    CHECK(P("D4oC4:C4xC2").t == std::vector<Word>{0b001, 0b010, 0b100, 0b111});
    CHECK(P("D4xC2:D4").t == std::vector<Word>{0b001, 0b010, 0b100});
}

TEST_CASE("T0 equals the order-2 lifts outside H (oracle via element orders)") {
    for (const char* name : {"D4:C4", "D4oC4:Q8", "D4oC4:C4xC2", "D4xC2:D4"}) {
        auto s = P(name);
        std::vector<Word> oracle;
        for (Word u = 1; u <= lowbits(s.n()); u++)
            if (element_order(s.ext, {u, 0}) == 2 && parity(s.h & u)) oracle.push_back(u);
        CHECK(s.t == oracle);
    }
}

TEST_CASE("admissibility") {
    auto s = P("D4:C4");
    CHECK(is_admissible(s));
    PairSpec bad = s;
    bad.t = {0b01};
    CHECK(!is_admissible(bad));  // does not span
    CHECK_THROWS(CentralExtension(QuadForm(2, {0, 0})));  // elementary abelian excluded
}

TEST_CASE("conjugacy counts match the examples") {
    CHECK(conjugacy_count(P("D4:C4")) == 2);
    CHECK(conjugacy_count(P("D4oC4:Q8")) == 3);
    CHECK(conjugacy_count(P("D4oC4:C4xC2")) == 4);
    CHECK(conjugacy_count(P("D4xC2:D4")) == 4);
}

TEST_CASE("H abelian iff complete bipartite graph") {
    CHECK(!is_h_abelian(P("D4oC4:Q8").ext, P("D4oC4:Q8").h));
    CHECK(is_h_abelian(P("D4oC4:C4xC2").ext, P("D4oC4:C4xC2").h));
    CHECK(is_h_abelian(P("D4:C4").ext, P("D4:C4").h));
    CHECK(!is_h_abelian(P("D4xC2:D4").ext, P("D4xC2:D4").h));
    // bipartition of the C4xC2 case: {001,010} | {100,111}
    std::vector<Word> parts;
    auto s = P("D4oC4:C4xC2");
    REQUIRE(graph_complete_bipartite(s.ext, s.t, &parts));
    std::set<Word> a(parts.begin(), std::find(parts.begin(), parts.end(), Word(0)));
    CHECK((a == std::set<Word>{0b001, 0b010} || a == std::set<Word>{0b100, 0b111}));
}

TEST_CASE("graph criterion agrees with direct commutation, n <= 3 exhaustive") {
    for (int n = 2; n <= 3; n++) {
        int tri = n * (n + 1) / 2;
        for (Word bits = 1; bits < (Word(1) << tri); bits++) {
            CentralExtension g(QuadForm::from_upper_bits(n, bits));
            for (Word h = 1; h <= lowbits(n); h++) {
                if (!pair_admissible(g, h)) continue;
                CHECK_NOTHROW(is_h_abelian(g, h));  // throws on disagreement
            }
        }
    }
}

// brute-force oracle: all of GL_n preserving T, h, Q
static int aut_oracle(const PairSpec& s) {
    int n = s.n();
    std::set<Word> tset(s.t.begin(), s.t.end());
    int count = 0;
    // iterate all n-tuples of images of unit vectors
    std::vector<Word> img(n, 0);
    long long total = 1;
    for (int i = 0; i < n; i++) total *= (lowbits(n) + 1);
    for (long long code = 0; code < total; code++) {
        long long c = code;
        Mat phi(n);
        for (int i = 0; i < n; i++) {
            phi.rows.push_back(Word(c % (lowbits(n) + 1)));
            c /= (lowbits(n) + 1);
        }
        if (phi.rank() != n) continue;
        bool ok = true;
        for (Word u : s.t)
            if (!tset.count(phi.apply(Vec{u, n}).bits)) ok = false;
        for (Word u = 0; u <= lowbits(n) && ok; u++) {
            Word im = phi.apply(Vec{u, n}).bits;
            if (s.ext.form.q(im) != s.ext.form.q(u)) ok = false;
            if (parity(s.h & im) != parity(s.h & u)) ok = false;
        }
        if (ok) count++;
    }
    return count;
}

TEST_CASE("automorphism groups of the presets") {
    CHECK(aut_ht(P("D4:C4")).size() == 2);
    CHECK(aut_oracle(P("D4:C4")) == 2);
    CHECK(aut_ht(P("D4oC4:Q8")).size() == 6);
    CHECK(aut_oracle(P("D4oC4:Q8")) == 6);
    for (const char* name : {"D4oC4:C4xC2", "D4xC2:D4"}) {
        auto s = P(name);
        CHECK(aut_ht(s).size() == aut_oracle(s));
    }
}

// oracle for the lifting criterion: enumerate genuine automorphisms of G from
// generator images y_i satisfying the presentation relations
// y_i^2 = a^Q(e_i), [y_i, y_j] = a^B(e_i,e_j), and spanning images in G/Phi(G);
// collect the induced maps on G/Phi(G) that preserve T and the hyperplane
static std::set<std::vector<Word>> lifted_auts_oracle(const PairSpec& s) {
    int n = s.n();
    const auto& g = s.ext;
    std::set<Word> tset(s.t.begin(), s.t.end());
    std::set<std::vector<Word>> out;
    long long total = 1;
    for (int i = 0; i < n; i++) total *= (2LL << n);
    for (long long code = 0; code < total; code++) {
        long long c = code;
        std::vector<GroupElement> y(n);
        for (int i = 0; i < n; i++) {
            y[i] = {Word(c % (1LL << n)), int((c >> n) & 1)};
            c /= (2LL << n);
        }
        bool ok = true;
        Mat bar(n);
        for (int i = 0; i < n && ok; i++) {
            if (square(g, y[i]).eps != g.form.q(Word(1) << i)) ok = false;
            for (int j = 0; j < n && ok; j++)
                if (commutator(g, y[i], y[j]).eps != g.form.b(Word(1) << i, Word(1) << j))
                    ok = false;
            bar.rows.push_back(y[i].u);
        }
        if (!ok || bar.rank() != n) continue;
        for (Word u : s.t)
            if (!tset.count(bar.apply(Vec{u, n}).bits)) ok = false;
        for (Word u = 0; u <= lowbits(n) && ok; u++)
            if (parity(s.h & bar.apply(Vec{u, n}).bits) != parity(s.h & u)) ok = false;
        if (ok) out.insert(bar.rows);
    }
    return out;
}

TEST_CASE("lifting criterion: Q-preserving maps are exactly the lifted automorphisms") {
    for (const char* name : {"D4:C4", "D4oC4:Q8", "D4oC4:C4xC2", "D4xC2:D4"}) {
        auto s = *preset_pair(name);
        auto lifted = lifted_auts_oracle(s);
        std::set<std::vector<Word>> computed;
        for (const auto& m : aut_ht(s)) computed.insert(m.rows);
        CHECK(computed == lifted);
    }
}

TEST_CASE("aut_ht returns a group of Q-preserving maps; Aut_H = Aut_{H,T0}") {
    for (const char* name : {"D4:C4", "D4oC4:Q8", "D4oC4:C4xC2", "D4xC2:D4"}) {
        auto s = P(name);
        auto auts = aut_ht(s);
        CHECK(!auts.empty());
        auto key = [](const Mat& m) { return m.rows; };
        std::set<std::vector<Word>> all;
        for (const auto& m : auts) all.insert(key(m));
        CHECK(all.count(Mat::identity(s.n()).rows));
        for (const auto& x : auts) {
            CHECK(all.count(key(*x.inverse())));
            for (const auto& y : auts) CHECK(all.count(key(x.then(y))));
        }
        // Aut_H equals Aut_{H,T0}
        auto ah = aut_h(s.ext, s.h);
        std::set<std::vector<Word>> hs;
        for (const auto& m : ah) hs.insert(key(m));
        CHECK(hs == all);
    }
}

TEST_CASE("centralizer torsion in D4") {
    auto s = P("D4:C4");
    GroupElement x{0b01, 0};
    CHECK(centralizer_torsion(s.ext, x, 0) == 1);
    CHECK(centralizer_torsion(s.ext, x, 1) == 4);  // {1, a, x, xa}
    CHECK(centralizer_torsion(s.ext, x, 5) == 4);  // saturates at |C_G(x)|
}

TEST_CASE("c_T <= c with equality for spanning T iff T = T0 (n <= 4 exhaustive)") {
    for (int n = 2; n <= 4; n++) {
        int tri = n * (n + 1) / 2;
        for (Word bits = 1; bits < (Word(1) << tri); bits++) {
            CentralExtension g(QuadForm::from_upper_bits(n, bits));
            for (Word h = 1; h <= lowbits(n); h++) {
                if (!pair_admissible(g, h)) continue;
                auto t0 = maximal_admissible_set(g, h);
                PairSpec s0{g, h, t0};
                int c = conjugacy_count(s0);
                for (Word mask = 1; mask < (Word(1) << t0.size()); mask++) {
                    std::vector<Word> t;
                    for (Word m = mask; m; m &= m - 1) t.push_back(t0[std::countr_zero(m)]);
                    PairSpec s{g, h, t};
                    int ct = conjugacy_count(s);
                    CHECK(ct <= c);
                    if (is_admissible(s))
                        CHECK((ct == c) == (t.size() == t0.size()));
                }
            }
        }
    }
}

TEST_CASE("spec text format round-trips and matches presets") {
    auto s = parse_group_spec("2; a=2; h=11");
    CHECK(s.t == P("D4:C4").t);
    CHECK(s.h == P("D4:C4").h);
    CHECK(parse_group_spec(format_group_spec(P("D4oC4:Q8"))).t == P("D4oC4:Q8").t);
    CHECK_THROWS(parse_group_spec("2; a=0; h=11"));   // zero form
    CHECK_THROWS(parse_group_spec("garbage"));
}

TEST_CASE("pair classes for n = 2 and n = 3 reproduce the table") {
    auto c2 = enumerate_pair_classes(2);
    REQUIRE(c2.size() == 1);
    CHECK(c2[0].name == "D4:C4");
    CHECK(c2[0].c == 2);

    auto c3 = enumerate_pair_classes(3);
    REQUIRE(c3.size() == 3);
    std::map<std::string, int> cvals;
    for (const auto& pc : c3) cvals[pc.name] = pc.c;
    CHECK(cvals["D4oC4:Q8"] == 3);
    CHECK(cvals["D4oC4:C4xC2"] == 4);
    CHECK(cvals["D4xC2:D4"] == 4);
}
