#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

namespace cakediv {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Exact entitlement p/q with 0 < p/q <= 1. Arbitrary precision so common
// denominators never overflow.
struct RationalEntitlement {
    BigRat value;

    RationalEntitlement() = default;
    RationalEntitlement(BigInt num, BigInt den);

    BigInt num() const { return boost::multiprecision::numerator(value); }
    BigInt den() const { return boost::multiprecision::denominator(value); }
    double to_double() const { return static_cast<double>(value); }
    std::string str() const;
};

// Exact value of a double as a rational (doubles are binary rationals).
BigRat exact_rational(double x);

// True iff the entitlements sum to exactly 1 under a common denominator.
bool rational_sum_is_one(const std::vector<RationalEntitlement>& ts);

} // namespace cakediv
