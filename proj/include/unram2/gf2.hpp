#pragma once
// Bit-packed linear algebra over GF(2). Dimensions in this project stay well
// below 64, so a vector is a single machine word and a matrix is a short list
// of row words. Vectors compose with matrices in the row convention:
// apply(M, v) = sum_{i : v_i = 1} row_i(M).

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

namespace unram2 {

using Word = std::uint64_t;

inline int parity(Word w) { return std::popcount(w) & 1; }

inline Word lowbits(int k) {
    return k >= 64 ? ~Word(0) : ((Word(1) << k) - 1);
}

struct Vec {
    Word bits = 0;
    int n = 0;

    static Vec zero(int n) { return {0, n}; }
    static Vec unit(int n, int i) { return {Word(1) << i, n}; }

    int get(int i) const { return int((bits >> i) & 1); }
    void set(int i, int v) {
        bits = (bits & ~(Word(1) << i)) | (Word(v ? 1 : 0) << i);
    }
    bool is_zero() const { return bits == 0; }
    int weight() const { return std::popcount(bits); }
    int dot(Vec o) const { return parity(bits & o.bits); }

    Vec operator^(Vec o) const { return {bits ^ o.bits, n}; }
    bool operator==(const Vec&) const = default;
    auto operator<=>(const Vec&) const = default;
};

struct Mat {
    std::vector<Word> rows;
    int cols = 0;

    Mat() = default;
    explicit Mat(int cols) : cols(cols) {}
    Mat(std::vector<Word> r, int cols) : rows(std::move(r)), cols(cols) {}

    static Mat identity(int n) {
        Mat m(n);
        for (int i = 0; i < n; i++) m.rows.push_back(Word(1) << i);
        return m;
    }

    int nrows() const { return int(rows.size()); }
    Vec row(int i) const { return {rows[i], cols}; }
    void append(Vec v) { rows.push_back(v.bits); }
    bool operator==(const Mat&) const = default;

    // Gaussian elimination; returns reduced row echelon form with zero rows
    // dropped. Idempotent: m.rref().rref() == m.rref().
    Mat rref() const {
        std::vector<Word> work = rows;
        Mat out(cols);
        int r = 0;
        for (int c = 0; c < cols && r < int(work.size()); c++) {
            int piv = -1;
            for (int i = r; i < int(work.size()); i++)
                if ((work[i] >> c) & 1) { piv = i; break; }
            if (piv < 0) continue;
            std::swap(work[r], work[piv]);
            for (int i = 0; i < int(work.size()); i++)
                if (i != r && ((work[i] >> c) & 1)) work[i] ^= work[r];
            r++;
        }
        for (int i = 0; i < r; i++) out.rows.push_back(work[i]);
        return out;
    }

    int rank() const { return rref().nrows(); }

    bool in_rowspace(Vec v) const {
        Word w = v.bits;
        Mat e = rref();
        for (Word row : e.rows) {
            int lead = std::countr_zero(row);
            if ((w >> lead) & 1) w ^= row;
        }
        return w == 0;
    }

    // Basis for {x : row_i . x = 0 for all i}.
    Mat nullspace() const {
        Mat e = rref();
        std::vector<int> lead(e.nrows());
        std::vector<bool> is_lead(cols, false);
        for (int i = 0; i < e.nrows(); i++) {
            lead[i] = std::countr_zero(e.rows[i]);
            is_lead[lead[i]] = true;
        }
        Mat out(cols);
        for (int c = 0; c < cols; c++) {
            if (is_lead[c]) continue;
            Word v = Word(1) << c;
            for (int i = 0; i < e.nrows(); i++)
                if ((e.rows[i] >> c) & 1) v ^= Word(1) << lead[i];
            out.rows.push_back(v);
        }
        return out;
    }

    // One solution of row_i . x = rhs_i, if consistent.
    std::optional<Vec> solve(Vec rhs) const {
        int m = nrows();
        std::vector<Word> work = rows;
        Word b = rhs.bits;
        int r = 0;
        std::vector<int> leadcol;
        for (int c = 0; c < cols && r < m; c++) {
            int piv = -1;
            for (int i = r; i < m; i++)
                if ((work[i] >> c) & 1) { piv = i; break; }
            if (piv < 0) continue;
            std::swap(work[r], work[piv]);
            Word br = (b >> r) & 1, bp = (b >> piv) & 1;
            b = (b & ~(Word(1) << r) & ~(Word(1) << piv)) | (bp << r) | (br << piv);
            for (int i = 0; i < m; i++)
                if (i != r && ((work[i] >> c) & 1)) {
                    work[i] ^= work[r];
                    b ^= ((b >> r) & 1) << i;
                }
            leadcol.push_back(c);
            r++;
        }
        for (int i = r; i < m; i++)
            if ((b >> i) & 1) return std::nullopt;
        Vec x = Vec::zero(cols);
        for (int i = 0; i < r; i++)
            if ((b >> i) & 1) x.set(leadcol[i], 1);
        return x;
    }

    // Row-combination action: apply(v) = sum_{i in v} row_i. With rows viewed
    // as images of basis vectors this is the linear map itself.
    Vec apply(Vec v) const {
        Word acc = 0, b = v.bits;
        while (b) {
            int i = std::countr_zero(b);
            acc ^= rows[i];
            b &= b - 1;
        }
        return {acc, cols};
    }

    // this . inner in the apply() convention: composed(v) = inner.apply(this->apply(v))
    Mat then(const Mat& next) const {
        Mat out(next.cols);
        for (int i = 0; i < nrows(); i++) out.append(next.apply(row(i)));
        return out;
    }

    std::optional<Mat> inverse() const {
        // invert the apply() map: find rows' preimages of unit vectors
        if (nrows() != cols) return std::nullopt;
        std::vector<Word> work = rows;
        std::vector<Word> inv;
        for (int i = 0; i < cols; i++) inv.push_back(Word(1) << i);
        int r = 0;
        for (int c = 0; c < cols; c++) {
            int piv = -1;
            for (int i = r; i < cols; i++)
                if ((work[i] >> c) & 1) { piv = i; break; }
            if (piv < 0) return std::nullopt;
            std::swap(work[r], work[piv]);
            std::swap(inv[r], inv[piv]);
            for (int i = 0; i < cols; i++)
                if (i != r && ((work[i] >> c) & 1)) {
                    work[i] ^= work[r];
                    inv[i] ^= inv[r];
                }
            r++;
        }
        // work is now a permutation-free identity; rows of inv are ordered by pivot
        Mat out(cols);
        out.rows.resize(cols);
        for (int i = 0; i < cols; i++) {
            int lead = std::countr_zero(work[i]);
            out.rows[lead] = inv[i];
        }
        return out;
    }
};

// All 2^rank elements spanned by the rows. Intended for small spaces only.
inline std::vector<Word> span_elements(const Mat& basis) {
    Mat e = basis.rref();
    std::vector<Word> out{0};
    out.reserve(size_t(1) << e.nrows());
    for (Word row : e.rows) {
        size_t sz = out.size();
        for (size_t i = 0; i < sz; i++) out.push_back(out[i] ^ row);
    }
    return out;
}

}  // namespace unram2
