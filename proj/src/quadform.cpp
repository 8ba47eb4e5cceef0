#include "unram2/quadform.hpp"

#include <algorithm>

namespace unram2 {

QuadForm::QuadForm(int n, std::vector<Word> rows) : n(n), a(std::move(rows)) {
    if (int(a.size()) != n) throw std::invalid_argument("quadform: row count");
    for (int i = 0; i < n; i++)
        for (int j = i + 1; j < n; j++)
            if (((a[i] >> j) & 1) != ((a[j] >> i) & 1))
                throw std::invalid_argument("quadform: matrix not symmetric");
    for (int i = 0; i < n; i++) diag |= ((a[i] >> i) & 1) << i;
}

QuadForm QuadForm::from_upper_bits(int n, Word bits) {
    std::vector<Word> rows(n, 0);
    int k = 0;
    for (int i = 0; i < n; i++)
        for (int j = i; j < n; j++, k++)
            if ((bits >> k) & 1) {
                rows[i] |= Word(1) << j;
                rows[j] |= Word(1) << i;
            }
    return QuadForm(n, rows);
}

Word QuadForm::upper_bits() const {
    Word bits = 0;
    int k = 0;
    for (int i = 0; i < n; i++)
        for (int j = i; j < n; j++, k++) bits |= ((a[i] >> j) & 1) << k;
    return bits;
}

bool QuadForm::is_zero() const {
    for (Word r : a)
        if (r) return false;
    return true;
}

RadicalDecomposition radical_decompose(const QuadForm& f) {
    // rad = kernel of the off-diagonal Gram matrix
    Mat gram(f.n);
    for (int i = 0; i < f.n; i++)
        gram.rows.push_back(f.a[i] & ~(Word(1) << i));
    Mat rad = gram.nullspace().rref();

    // Q is linear on rad (B vanishes there); R0 = its kernel inside rad
    Mat R0(f.n), R(f.n);
    std::optional<Vec> qone;  // a radical vector with Q = 1, if any
    for (Word v : span_elements(rad)) {
        if (v && f.q(v) == 1) { qone = Vec{v, f.n}; break; }
    }
    if (qone) {
        R.append(*qone);
        // kernel of the functional v -> Q(v) on rad
        for (int i = 0; i < rad.nrows(); i++) {
            Vec r = rad.row(i);
            if (f.q(r.bits)) r = r ^ *qone;
            if (!r.is_zero()) R0.append(r);
        }
        R0 = R0.rref();
    } else {
        R0 = rad;
    }

    // V = any complement of rad, greedily extended from unit vectors
    Mat acc = rad;
    Mat V(f.n);
    for (int i = 0; i < f.n && acc.nrows() < f.n; i++) {
        Vec e = Vec::unit(f.n, i);
        if (!acc.in_rowspace(e)) {
            acc.append(e);
            V.append(e);
        }
    }
    return {V.rref(), R, R0};
}

namespace {

// Complete the totally singular W0 (inside V, where Q is nondegenerate) to
// hyperbolic pairs (u_i, v_i): B(u_i,v_j) = delta_ij, Q(v_i) = 0,
// B(v_i,v_j) = 0. Works inside the subspace spanned by Vbasis.
Mat hyperbolic_partners(const QuadForm& f, const Mat& W0, const Mat& Vbasis) {
    Mat vs(f.n);
    for (int i = 0; i < W0.nrows(); i++) {
        // B(u_j, x) = delta_ij over x in span(Vbasis): solve in coordinates
        Mat sys(Vbasis.nrows());
        Vec rhs = Vec::zero(W0.nrows());
        for (int j = 0; j < W0.nrows(); j++) {
            Word func = f.brow(W0.rows[j]);
            Word coeff = 0;
            for (int k = 0; k < Vbasis.nrows(); k++)
                coeff |= Word(parity(func & Vbasis.rows[k])) << k;
            sys.rows.push_back(coeff);
        }
        rhs.set(i, 1);
        auto sol = sys.solve(rhs);
        if (!sol) throw std::logic_error("hyperbolic completion failed");
        Vec v = Vbasis.apply(*sol);
        // normalize: kill Q(v) with u_i, then cross terms with earlier pairs
        if (f.q(v.bits)) v = v ^ W0.row(i);
        for (int j = 0; j < vs.nrows(); j++)
            if (f.b(v.bits, vs.rows[j])) v = v ^ W0.row(j);
        vs.append(v);
    }
    return vs;
}

}  // namespace

Mat disjoint_totally_singular(const QuadForm& f, const Mat& W) {
    auto dec = radical_decompose(f);
    if (dec.R0.nrows() != 0)
        throw std::invalid_argument("disjoint_totally_singular: ker(Q|rad) != 0");
    for (Word w : span_elements(W))
        if (f.q(w)) throw std::invalid_argument("disjoint_totally_singular: W not totally singular");

    Mat Wr = W.rref();
    if (Wr.nrows() == 0) return Wr;

    // W0 = W meet V, the kernel of the radical-component functional on W.
    Mat W0(f.n);
    std::optional<Vec> outside;  // representative of W \ W0
    for (int i = 0; i < Wr.nrows(); i++) {
        Vec w = Wr.row(i);
        bool uses_z = !dec.V.in_rowspace(w);
        if (uses_z && !outside) {
            outside = w;
        } else if (uses_z) {
            W0.append(w ^ *outside);
        } else {
            W0.append(w);
        }
    }
    W0 = W0.rref();

    Mat W1 = hyperbolic_partners(f, W0, dec.V);
    if (!outside) return W1.rref();

    // Transpose the W0-coordinates of `outside` onto W1 and keep the rest.
    // With W = W0 + <u>, total singularity forces u's W1-component to vanish,
    // so u = w0 + w2 + r and the swapped vector v = T(w0) + w2 + r is singular.
    Vec u = *outside;
    Vec v = u;
    for (int i = 0; i < W0.nrows(); i++) {
        // subtract the W0/W1 pair components of u
        if (f.b(u.bits, W1.rows[i])) {  // coefficient of u_i in u
            v = v ^ W0.row(i) ^ W1.row(i);
        }
    }
    Mat out = W1;
    out.append(v);
    out = out.rref();
    return out;
}

IsotropicReport isotropic_bound_report(const QuadForm& f,
                                       const std::vector<Word>& h_functionals) {
    IsotropicReport rep;
    const Word all = lowbits(f.n);

    auto in_H = [&](Word v) {
        for (Word h : h_functionals)
            if (parity(h & v)) return false;
        return true;
    };

    Mat span(f.n);
    for (Word v = 1; v <= all; v++)
        if (f.q(v) == 0 && !in_H(v)) {
            rep.S.push_back(v);
            span.append(Vec{v, f.n});
        }
    if (span.rank() != f.n) return rep;  // not applicable
    rep.applicable = true;

    // radical kernel to exclude from T
    auto dec = radical_decompose(f);
    std::vector<Word> r0 = span_elements(dec.R0);

    int m = int(rep.S.size());
    std::vector<int> eligible;
    std::vector<Word> bfun(m);
    for (int i = 0; i < m; i++) {
        bfun[i] = f.brow(rep.S[i]);
        bool in_r0 = std::find(r0.begin(), r0.end(), rep.S[i]) != r0.end();
        if (!in_r0) eligible.push_back(i);
    }

    int e = int(eligible.size());
    for (Word mask = 0; mask < (Word(1) << e); mask++) {
        int tsize = std::popcount(mask);
        int inperp = 0;
        for (Word mm = mask; mm; mm &= mm - 1) {
            int i = eligible[std::countr_zero(mm)];
            bool perp = true;
            for (Word m2 = mask; m2 && perp; m2 &= m2 - 1) {
                int j = eligible[std::countr_zero(m2)];
                if (parity(bfun[i] & rep.S[j])) perp = false;
            }
            if (perp) inperp++;
        }
        rep.checked++;
        int slack = (m - tsize) - inperp;
        if (slack < 0) rep.holds = false;
        if (rep.worst_slack < 0 || slack < rep.worst_slack) {
            rep.worst_slack = slack;
            rep.worst_T.clear();
            for (Word mm = mask; mm; mm &= mm - 1)
                rep.worst_T.push_back(rep.S[eligible[std::countr_zero(mm)]]);
        }
    }
    return rep;
}

}  // namespace unram2
