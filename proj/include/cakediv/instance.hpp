#pragma once

#include <optional>
#include <vector>

#include "cakediv/rational.hpp"
#include "cakediv/tolerances.hpp"
#include "cakediv/valuation.hpp"

namespace cakediv {

// A fair-division problem: n unit-mass valuations with positive
// entitlements summing to 1. Entitlements that originate from exact "p/q"
// input carry their rational form so the cloning reduction can work
// without floating conversion. `labels` are the query-ledger rows the
// players charge to; they default to 0..n-1.
struct Instance {
    std::vector<Valuation> valuations;
    std::vector<double> entitlements;
    std::vector<std::optional<RationalEntitlement>> exact; // empty or size n
    std::vector<std::size_t> labels;                       // empty or size n
    Tolerances tol{};

    std::size_t size() const { return valuations.size(); }
    std::size_t label(std::size_t i) const { return labels.empty() ? i : labels[i]; }
    bool all_rational() const;

    // Shape and sum checks; throws ErrorKind::malformed_instance.
    void validate() const;
};

struct PlayerReport {
    double value = 0.0;
    double entitlement = 0.0;
    double slack = 0.0; // value - entitlement
};

// Result of any solver: one disjoint piece per player, in instance order.
struct Allocation {
    std::vector<Piece> pieces;
    std::vector<PlayerReport> report;

    double min_slack() const;
};

// Fills the per-player report from fresh evaluations.
Allocation make_allocation(const Instance& inst, std::vector<Piece> pieces);

} // namespace cakediv
