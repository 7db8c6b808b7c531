#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace limvote {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// H(j) = 1 + 1/2 + ... + 1/j, H(0) = 0. Exact. The memo table is
// thread-local: sweep workers call this concurrently.
inline const Rat& harmonic(int j) {
    thread_local std::vector<Rat> table{Rat(0)};
    while (static_cast<int>(table.size()) <= j) {
        int next = static_cast<int>(table.size());
        table.push_back(table.back() + Rat(1, next));
    }
    return table[j];
}

// Decimal rendering with a fixed number of significant digits (round half up).
inline std::string to_decimal(const Rat& r, int sig_digits = 12) {
    if (r == 0) return "0";
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;
    // scale so that num/den has sig_digits digits before the implied point
    int exp10 = 0;
    BigInt lo = 1;
    for (int i = 1; i < sig_digits; ++i) lo *= 10;
    BigInt hi = lo * 10;
    BigInt n = num, d = den;
    while (n / d < lo) { n *= 10; --exp10; }
    while (n / d >= hi) { d *= 10; ++exp10; }
    BigInt digits = (2 * n + d) / (2 * d);  // rounded
    if (digits >= hi) { digits /= 10; ++exp10; }
    std::string ds = digits.str();
    // place decimal point: value = ds * 10^exp10
    int point = static_cast<int>(ds.size()) + exp10;  // digits before the point
    std::string out;
    if (point <= 0) {
        out = "0." + std::string(-point, '0') + ds;
    } else if (point >= static_cast<int>(ds.size())) {
        out = ds + std::string(point - ds.size(), '0');
    } else {
        out = ds.substr(0, point) + "." + ds.substr(point);
    }
    // trim trailing zeros after a point
    if (out.find('.') != std::string::npos) {
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    return (neg ? "-" : "") + out;
}

inline std::string to_fraction(const Rat& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1)
        os << "/" << boost::multiprecision::denominator(r);
    return os.str();
}

}  // namespace limvote
