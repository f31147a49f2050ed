#pragma once

#include <vector>

#include "cakediv/instance.hpp"
#include "cakediv/query.hpp"

namespace cakediv {

// Per-run audit data for algorithm_one: round count, branch taken per
// round, and the query volume of the trimming phase (excluding the
// delegated cloning subroutine).
struct Algo1Audit {
    std::size_t rounds = 0;
    bool delegated = false;                       // rational-rounding branch taken
    std::size_t delegation_clones = 0;            // common denominator q when delegated
    std::int64_t queries_before_delegation = 0;   // evals + cuts of the trimming rounds
    std::vector<char> branches;                   // 'b' cutter exits, 'k' diminisher exits,
                                                  // 'c' rational rounding, '1' single player
};

// Rounds a vector of positive reals with sum < 1 up to rationals t''_i
// with t''_i > t'_i strictly and sum exactly 1: q is the smallest power of
// ten with n/q below the slack, a_i = floor(t'_i q) + 1, and the leftover
// deficit goes to the last entry. Strictness and the exact sum are checked
// in exact rational arithmetic. Throws ErrorKind::no_slack when the slack
// is not strictly positive.
std::vector<RationalEntitlement> round_up_to_rationals(
    const std::vector<double>& t_prime, const Tolerances& tol = default_tolerances());

// One Last-Diminisher round at value t_1 per recursion level: if the slice
// still has value t_1 for the cutter, the cutter exits with it and the
// rest recurse on the remainder; otherwise the largest-index diminisher
// takes it, exiting immediately when entitlements tie, and the remainder
// is split among all players by rational rounding plus cloning otherwise.
// Valuations must have unit mass on `cake`.
Allocation algorithm_one(const Instance& inst, const Piece& cake, QueryLedger& ledger,
                         Algo1Audit* audit = nullptr);

} // namespace cakediv
