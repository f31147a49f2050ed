#pragma once

#include <cstdint>
#include <vector>

#include "cakediv/piece.hpp"
#include "cakediv/valuation.hpp"

namespace cakediv {

// Robertson-Webb query accounting: one row per player, counting eval and
// cut queries separately. Arithmetic and comparisons on reals are free.
// A ledger is confined to a single protocol run.
struct QueryLedger {
    std::vector<std::int64_t> evals;
    std::vector<std::int64_t> cuts;

    QueryLedger() = default;
    explicit QueryLedger(std::size_t n) : evals(n, 0), cuts(n, 0) {}

    std::size_t players() const { return evals.size(); }
    std::int64_t total_evals() const;
    std::int64_t total_cuts() const;

    void charge_evals(std::size_t player, std::int64_t n = 1);
    void charge_cuts(std::size_t player, std::int64_t n = 1);
};

// The two Robertson-Webb queries, charged to `player`'s ledger row.
double counted_eval(QueryLedger& ledger, std::size_t player, const Valuation& v, const Piece& s);
Piece counted_cut(QueryLedger& ledger, std::size_t player, const Valuation& v, const Piece& s,
                  double alpha, const Tolerances& tol = default_tolerances());

} // namespace cakediv
