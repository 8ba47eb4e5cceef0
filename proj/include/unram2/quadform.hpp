#pragma once
// Quadratic forms Q(u) = sum_{i<=j} a_ij u_i u_j over GF(2)^n with symmetric
// coefficient matrix a. The polar form B(u,v) = Q(u+v)+Q(u)+Q(v) is bilinear,
// alternating, and depends only on the off-diagonal part of a.

#include <stdexcept>
#include <vector>

#include "unram2/gf2.hpp"

namespace unram2 {

struct QuadForm {
    int n = 0;
    std::vector<Word> a;  // symmetric n x n, row i in a[i]
    Word diag = 0;        // cached a_ii mask

    QuadForm() = default;
    QuadForm(int n, std::vector<Word> rows);

    // coefficients packed row-major over the upper triangle including the
    // diagonal: bit 0 = a_11, bit 1 = a_12, ..., bit n-1 = a_1n, bit n = a_22, ...
    static QuadForm from_upper_bits(int n, Word bits);
    Word upper_bits() const;

    int q(Word u) const {
        int acc = 0;
        Word b = u;
        while (b) {
            int i = std::countr_zero(b);
            b &= b - 1;
            acc ^= int((a[i] >> i) & 1);
            acc ^= parity(a[i] & u & ~lowbits(i + 1));
        }
        return acc;
    }

    int b(Word u, Word v) const {
        int acc = 0;
        Word bm = u;
        while (bm) {
            int i = std::countr_zero(bm);
            bm &= bm - 1;
            acc ^= parity(a[i] & ~(Word(1) << i) & v);
        }
        return acc;
    }

    // the functional B(u, .) as a bitmask
    Word brow(Word u) const {
        Word acc = 0, bm = u;
        while (bm) {
            int i = std::countr_zero(bm);
            bm &= bm - 1;
            acc ^= a[i] & ~(Word(1) << i);
        }
        return acc;
    }

    bool is_zero() const;
    bool operator==(const QuadForm&) const = default;
};

// GF(2)^n = V + R + R0 with R + R0 = rad = kernel of B, Q(R0) = 0,
// Q nonzero on R \ {0} (so dim R <= 1), and Q nondegenerate on V.
struct RadicalDecomposition {
    Mat V, R, R0;
};

RadicalDecomposition radical_decompose(const QuadForm& f);

// Given a totally singular subspace W (basis rows), produce another totally
// singular W' of the same dimension with W meet W' contained in <u> for some
// u with nonzero radical component ({0} when the form is nondegenerate).
// Requires ker(Q restricted to rad) = 0, i.e. R0 = 0.
Mat disjoint_totally_singular(const QuadForm& f, const Mat& W);

// Checks |T^perp meet T| <= |S| - |T| for S = (ker Q) \ H over every subset
// T of S avoiding ker(Q|rad), where H is the common kernel of `h_functionals`
// (one functional = hyperplane, two = codimension-2 subspace).
struct IsotropicReport {
    bool applicable = false;  // S must span GF(2)^n
    bool holds = true;
    std::vector<Word> S;
    std::vector<Word> worst_T;  // witness minimizing |S|-|T|-|T^perp meet T|
    int worst_slack = -1;
    long long checked = 0;
};

IsotropicReport isotropic_bound_report(const QuadForm& f,
                                       const std::vector<Word>& h_functionals);

inline IsotropicReport isotropic_bound_report(const QuadForm& f, Word h) {
    return isotropic_bound_report(f, std::vector<Word>{h});
}

}  // namespace unram2
