#include "unram2/discs.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace unram2 {

int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    int k = 1;
    // strip 2s from n; each costs (a/2) = (-1)^((a^2-1)/8)
    int v = 0;
    while ((n & 1) == 0) { n >>= 1; v++; }
    if (v & 1) {
        i64 a8 = ((a % 8) + 8) % 8;
        if (a8 == 3 || a8 == 5) k = -k;
    }
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    // now n odd positive; reciprocity loop
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        v = 0;
        while ((a & 1) == 0) { a >>= 1; v++; }
        if (v & 1) {
            i64 n8 = n % 8;
            if (n8 == 3 || n8 == 5) k = -k;
        }
        if ((a % 4 == 3) && (n % 4 == 3)) k = -k;
        i64 t = a;
        a = n % t;
        n = t;
    }
    return n == 1 ? k : 0;
}

bool is_fundamental(i64 d) {
    if (d == 1 || d == 0) return false;
    auto squarefree_odd = [](i64 m) {
        m = std::llabs(m);
        for (i64 p = 3; p * p <= m; p += 2)
            if (m % (p * p) == 0) return false;
        return true;
    };
    i64 m4 = ((d % 4) + 4) % 4;
    if (m4 == 1) return (d & 1) && squarefree_odd(d);
    if (m4 != 0) return false;
    i64 m = d / 4;
    i64 r = ((m % 4) + 4) % 4;
    if (r != 2 && r != 3) return false;
    if (r == 3) return squarefree_odd(m);
    return (m / 2) % 2 != 0 && squarefree_odd(m / 2);
}

void DiscFactorization::fill_symbols() {
    for (int a = 0; a < omega; a++)
        for (int b = 0; b < omega; b++)
            sym[a * omega + b] = (a == b) ? 0 : int8_t(kronecker(q[a], p[b]));
}

namespace {

// assemble a factorization from the odd primes of |d| and the 2-part
DiscFactorization assemble(i64 d, const i64* odd_primes, int nodd) {
    DiscFactorization f;
    f.d = d;
    i64 ad = std::llabs(d);
    int alpha = 0;
    while ((ad & 1) == 0) { ad >>= 1; alpha++; }
    f.alpha = alpha;
    int k = 0;
    if (alpha == 2) {
        f.q[k] = -4;
        f.p[k++] = 2;
    } else if (alpha == 3) {
        // sign chosen so the odd prime discriminants multiply to d
        i64 rest = d / 8;  // odd, sign carries
        // product of odd prime discriminants is == 1 mod 4
        i64 r4 = ((rest % 4) + 4) % 4;
        f.q[k] = (r4 == 1) ? 8 : -8;
        f.p[k++] = 2;
    }
    for (int i = 0; i < nodd; i++) {
        i64 p = odd_primes[i];
        f.q[k] = (p % 4 == 1) ? p : -p;
        f.p[k++] = p;
    }
    f.omega = k;
    f.fill_symbols();
    return f;
}

}  // namespace

DiscFactorization factor_prime_discriminants(i64 d) {
    if (!is_fundamental(d))
        throw std::invalid_argument("factor_prime_discriminants: not a fundamental discriminant");
    i64 m = std::llabs(d);
    while ((m & 1) == 0) m >>= 1;
    i64 odd[kMaxOmega];
    int nodd = 0;
    for (i64 p = 3; p * p <= m; p += 2)
        if (m % p == 0) {
            odd[nodd++] = p;
            while (m % p == 0) m /= p;
        }
    if (m > 1) odd[nodd++] = m;
    auto f = assemble(d, odd, nodd);
    i64 prod = 1;
    for (int i = 0; i < f.omega; i++) prod *= f.q[i];
    if (prod != d) throw std::logic_error("prime discriminant product mismatch");
    return f;
}

FundamentalSieve::FundamentalSieve(i64 xmax) : xmax_(xmax) {
    i64 lim = i64(std::sqrt(double(xmax))) + 2;
    std::vector<bool> comp(lim + 1, false);
    for (i64 p = 3; p <= lim; p += 2) {
        if (comp[p]) continue;
        primes_.push_back(int32_t(p));
        for (i64 q = p * p; q <= lim; q += 2 * p) comp[q] = true;
    }
}

void FundamentalSieve::run_segment(int index, const SieveRange& range,
                                   const std::function<void(const DiscFactorization&)>& fn) const {
    i64 lo = i64(index) * kSegment;
    i64 hi = std::min(lo + kSegment, xmax_);
    if (hi <= lo) return;
    int len = int(hi - lo);

    // odd prime factors and squarefree flags for |d| in [lo, hi); 12 slots
    // cover every |d| below the product of the 13 smallest odd primes (~2e15)
    std::vector<uint8_t> bad(len, 0);  // odd square divisor found
    std::vector<uint8_t> nfac(len, 0);
    std::vector<std::array<int32_t, 12>> fac(len);

    for (int32_t p : primes_) {
        i64 p2 = i64(p) * p;
        i64 start = ((lo + p - 1) / p) * p;
        if (start == 0) start = p;  // position 0 is not a discriminant
        for (i64 v = start; v < hi; v += p) {
            int i = int(v - lo);
            fac[i][nfac[i]++] = p;
        }
        i64 start2 = ((lo + p2 - 1) / p2) * p2;
        if (start2 == 0) start2 = p2;
        for (i64 v = start2; v < hi; v += p2) bad[v - lo] = 1;
    }

    for (int i = (lo == 0 ? 1 : 0); i < len; i++) {
        i64 ad = lo + i;
        if (ad < 3) continue;
        if (bad[i]) continue;
        int alpha = std::countr_zero(uint64_t(ad));
        if (alpha != 0 && alpha != 2 && alpha != 3) continue;
        if (range.alpha >= 0 && alpha != range.alpha) continue;
        i64 d = range.sign < 0 ? -ad : ad;
        // congruence class check
        i64 odd = ad >> alpha;
        i64 o4 = odd % 4;
        if (alpha == 0) {
            // d == 1 mod 4
            if (range.sign < 0 ? (o4 != 3) : (o4 != 1)) continue;
        } else if (alpha == 2) {
            // d/4 == 3 mod 4
            if (range.sign < 0 ? (o4 != 1) : (o4 != 3)) continue;
        }
        // remaining large prime factor, if any
        i64 r = ad >> alpha;
        for (int j = 0; j < nfac[i]; j++)
            while (r % fac[i][j] == 0) r /= fac[i][j];

        i64 odd_primes[kMaxOmega];
        int nodd = 0;
        for (int j = 0; j < nfac[i]; j++) odd_primes[nodd++] = fac[i][j];
        if (r > 1) {
            // r is prime (all factors <= sqrt(xmax) removed); square-freeness
            // of the large factor is automatic
            odd_primes[nodd++] = r;
        }
        fn(assemble(d, odd_primes, nodd));
    }
}

void FundamentalSieve::run(const SieveRange& range,
                           const std::function<void(const DiscFactorization&)>& fn) const {
    for (int s = 0; s < num_segments(); s++) run_segment(s, range, fn);
}

}  // namespace unram2
