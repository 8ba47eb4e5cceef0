#pragma once
// Exact arithmetic used by accumulators and predictions.

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace unram2 {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string rat_str(const Rat& r) {
    Int num = boost::multiprecision::numerator(r);
    Int den = boost::multiprecision::denominator(r);
    std::string s = num.str();
    if (den != 1) s += "/" + den.str();
    return s;
}

inline Int pow2(long long e) {
    Int x = 1;
    return x << e;
}

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace unram2
