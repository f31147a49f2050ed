#pragma once

#include <vector>

#include "cakediv/instance.hpp"
#include "cakediv/query.hpp"

namespace cakediv {

// Steinhaus/Banach-Knaster Last Diminisher for equal shares: each round
// the first remaining player cuts a 1/r slice of the remaining cake (r =
// players left), the others trim whenever the slice exceeds 1/r of their
// own remaining-cake value, and the last trimmer (or the cutter) exits
// with the slice. Returns one piece per player, in input order, with
// eval(v_i, S_i) >= eval(v_i, cake)/n - eps_fair.
std::vector<Piece> last_diminisher(const std::vector<Valuation>& valuations, const Piece& cake,
                                   QueryLedger& ledger, const std::vector<std::size_t>& labels = {},
                                   const Tolerances& tol = default_tolerances());

// Fair division for exactly rational entitlements via player cloning:
// entitlements are brought to the common denominator q, player i is cloned
// p_i times, Last Diminisher runs on the q clones, and clone pieces are
// merged per owner. Entitlements must sum to exactly 1; q is capped at
// 10^6 clones (resource_limit error beyond that, Algorithm II needs no
// cloning and handles those instances).
std::vector<Piece> rational_fair_division(const std::vector<Valuation>& valuations,
                                          const std::vector<RationalEntitlement>& entitlements,
                                          const Piece& cake, QueryLedger& ledger,
                                          const std::vector<std::size_t>& labels = {},
                                          const Tolerances& tol = default_tolerances());

// Instance-level wrapper used by the CLI; requires every entitlement to
// carry an exact rational form.
Allocation cloning_solve(const Instance& inst, const Piece& cake, QueryLedger& ledger);

inline constexpr std::size_t kMaxClones = 1000000;

} // namespace cakediv
