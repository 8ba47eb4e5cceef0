#pragma once
// Fundamental discriminants, their unique factorizations into pairwise coprime
// prime discriminants ({-4, 8, -8} and (-1)^((p-1)/2) p for odd p), Kronecker
// symbols, and a segmented sieve enumerating all fundamental discriminants in
// a range with factorizations attached.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace unram2 {

using i64 = long long;

// full Kronecker symbol (a/n), with (a/2) given by a mod 8 and (a/-1) by sign
int kronecker(i64 a, i64 n);

bool is_fundamental(i64 d);

constexpr int kMaxOmega = 15;

struct DiscFactorization {
    i64 d = 0;
    int omega = 0;  // number of prime discriminant factors
    int alpha = 0;  // ord_2(d), one of 0, 2, 3
    std::array<i64, kMaxOmega> q{};       // prime discriminants, product = d
    std::array<i64, kMaxOmega> p{};       // underlying primes (2 for the even one)
    std::array<int8_t, kMaxOmega * kMaxOmega> sym{};  // sym[a*omega+b] = (q_a / p_b), a != b

    int8_t symbol(int a, int b) const { return sym[a * omega + b]; }
    void fill_symbols();  // computes sym from q, p
};

// throws std::invalid_argument unless d is a fundamental discriminant != 1
DiscFactorization factor_prime_discriminants(i64 d);

struct SieveRange {
    int sign = -1;   // -1: negative discriminants, +1: positive
    i64 xmax = 0;    // |d| < xmax, strict
    int alpha = -1;  // 0, 2, 3, or -1 for all
};

// Segmented enumeration. Segments cover |d| in [lo, hi) windows of fixed size;
// within a segment discriminants are visited in ascending |d|. run_segment can
// be called for different segments concurrently.
class FundamentalSieve {
  public:
    static constexpr i64 kSegment = 1 << 20;

    explicit FundamentalSieve(i64 xmax);
    int num_segments() const { return int((xmax_ + kSegment - 1) / kSegment); }
    i64 xmax() const { return xmax_; }

    void run_segment(int index, const SieveRange& range,
                     const std::function<void(const DiscFactorization&)>& fn) const;

    // convenience serial driver over all segments in order
    void run(const SieveRange& range,
             const std::function<void(const DiscFactorization&)>& fn) const;

  private:
    i64 xmax_;
    std::vector<int32_t> primes_;  // odd primes <= sqrt(xmax)
};

}  // namespace unram2
