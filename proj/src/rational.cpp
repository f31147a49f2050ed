#include "cakediv/rational.hpp"

#include "cakediv/errors.hpp"

namespace cakediv {

RationalEntitlement::RationalEntitlement(BigInt num, BigInt den) {
    if (den <= 0)
        fail(ErrorKind::malformed_instance, "rational entitlement needs a positive denominator");
    value = BigRat(num, den);
    if (value <= 0 || value > 1)
        fail(ErrorKind::malformed_instance, "rational entitlement must lie in (0, 1]");
}

std::string RationalEntitlement::str() const {
    return num().str() + "/" + den().str();
}

BigRat exact_rational(double x) {
    return BigRat(x); // exact: decomposes mantissa * 2^exp
}

bool rational_sum_is_one(const std::vector<RationalEntitlement>& ts) {
    BigRat sum = 0;
    for (const auto& t : ts) sum += t.value;
    return sum == 1;
}

} // namespace cakediv
