#pragma once

#include <cstdint>
#include <vector>

#include "cakediv/instance.hpp"
#include "cakediv/query.hpp"

namespace cakediv {

// State at the beginning of a round: portions allocated so far, the rest
// of the cake, the improved entitlements, and the unsatisfied set
// I_m = { i : t_i > mu_i(S_i^m) + eps_eq } (t_i are the original
// entitlements). alloc_value and rem_value cache the players' own
// measurements; rem_value is refreshed whenever the remainder changes.
struct RoundState {
    std::size_t m = 0;
    std::vector<Piece> allocated;         // S_i^m
    Piece remainder;                      // C_m
    std::vector<double> improved;         // t_i^m
    std::vector<double> alloc_value;      // mu_i(S_i^m)
    std::vector<double> rem_value;        // mu_i(C_m), valid for unsatisfied players
    std::vector<std::size_t> unsatisfied; // I_m, ascending
};

struct TrimResult {
    Piece slice;              // R_m
    std::size_t receiver = 0; // j_m
    double ratio = 0.0;       // (t^m_{i_m} - mu_{i_m}(S^m_{i_m})) / mu_{i_m}(C_m)
};

// Everything recorded about one executed round, for invariant audits and
// trace output.
struct RoundRecord {
    std::size_t m = 0;
    std::vector<std::size_t> unsatisfied;
    std::vector<double> improved;        // aligned with unsatisfied
    std::vector<double> alloc_value;     // aligned with unsatisfied
    std::vector<double> remainder_value; // aligned with unsatisfied
    std::vector<Piece> pieces;           // S_i^m, all players
    Piece remainder;                     // C_m
    std::size_t cutter = 0;
    std::size_t receiver = 0;
    double ratio = 0.0;
    Piece slice; // R_m
    std::int64_t evals = 0, cuts = 0; // cumulative ledger totals at round end
};

struct Algo2Trace {
    std::vector<RoundRecord> rounds;
    std::size_t final_player = 0; // receiver of the final remainder
    Piece final_remainder;
    QueryLedger ledger;
};

struct Algo2Result {
    Allocation allocation;
    Algo2Trace trace;
};

// Smallest unsatisfied index minimizing the deficit ratio
// (t_i^m - mu_i(S_i^m)) / mu_i(C_m); ties within eps_eq go to the smaller
// index. Requires at least two unsatisfied players.
std::size_t select_cutter(const RoundState& st, const Tolerances& tol = default_tolerances());

// The cutter takes a slice of the remainder worth its deficit, the other
// unsatisfied players trim in increasing index order down to the round
// ratio under their own normed measures, and the receiver is the cutter if
// its inequality stayed tight, otherwise the smallest index with a tight
// inequality. Physical trims count as tight by construction.
TrimResult trim_round(const RoundState& st, std::size_t cutter,
                      const std::vector<Valuation>& vals, const std::vector<std::size_t>& labels,
                      QueryLedger& ledger, const Tolerances& tol = default_tolerances());

// Hands the slice to the receiver, recomputes the unsatisfied set, and
// lifts the improved entitlements so the deficit-ratio sum returns to 1.
// Advances st from round m to m+1.
void update_entitlements(RoundState& st, const TrimResult& trim,
                         const std::vector<double>& entitlements,
                         const std::vector<Valuation>& vals,
                         const std::vector<std::size_t>& labels, QueryLedger& ledger,
                         const Tolerances& tol = default_tolerances());

// Iterated Last-Diminisher rounds with improved entitlements; no rational
// rounding anywhere. max_rounds == 0 means the default guard 10*n^2;
// hitting the guard raises ErrorKind::non_termination. Valuations must
// have unit mass on `cake`.
Algo2Result algorithm_two(const Instance& inst, const Piece& cake, QueryLedger& ledger,
                          std::size_t max_rounds = 0);

} // namespace cakediv
