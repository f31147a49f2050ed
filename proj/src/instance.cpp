#include "cakediv/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cakediv/errors.hpp"

namespace cakediv {

bool Instance::all_rational() const {
    if (exact.size() != size()) return false;
    return std::all_of(exact.begin(), exact.end(), [](const auto& r) { return r.has_value(); });
}

void Instance::validate() const {
    const std::size_t n = size();
    if (n == 0)
        fail(ErrorKind::malformed_instance, "instance has no players");
    if (entitlements.size() != n)
        fail(ErrorKind::malformed_instance, "entitlement count does not match valuation count");
    if (!exact.empty() && exact.size() != n)
        fail(ErrorKind::malformed_instance, "exact entitlement list has wrong length");
    if (!labels.empty() && labels.size() != n)
        fail(ErrorKind::malformed_instance, "label list has wrong length");
    tol.validate();

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(entitlements[i] > 0.0))
            fail(ErrorKind::malformed_instance,
                 "entitlement of player " + std::to_string(i) + " is not positive");
        sum += entitlements[i];
    }
    if (std::abs(sum - 1.0) > tol.eps_norm)
        fail(ErrorKind::malformed_instance, "entitlements sum to " + std::to_string(sum) +
                                                ", expected 1 within tolerance");
}

double Allocation::min_slack() const {
    double m = std::numeric_limits<double>::infinity();
    for (const PlayerReport& r : report) m = std::min(m, r.slack);
    return m;
}

Allocation make_allocation(const Instance& inst, std::vector<Piece> pieces) {
    Allocation out;
    out.pieces = std::move(pieces);
    out.report.resize(inst.size());
    for (std::size_t i = 0; i < inst.size(); ++i) {
        double v = inst.valuations[i].eval(out.pieces[i]);
        out.report[i] = {v, inst.entitlements[i], v - inst.entitlements[i]};
    }
    return out;
}

} // namespace cakediv
