#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cakediv/instance.hpp"
#include "cakediv/query.hpp"

namespace cakediv {

struct Separation {
    std::size_t j = 0; // mu_j(c_prime) < mu_k(c_prime)
    std::size_t k = 0;
    Piece c_prime;
};

// Scans the merged breakpoint grid for a prefix [0,x) whose CDFs separate
// two valuations, returning the pair with the widest gap. For
// piecewise-constant densities, agreement at every merged breakpoint
// means the measures are identical, so nullopt certifies that.
std::optional<Separation> find_separating_piece(const std::vector<Valuation>& valuations,
                                                const Tolerances& tol = default_tolerances());

// Entitlement split across a separating partition: s-values keep
// s'_i mu_i(C') + s''_i mu_i(C'') = t_i exact while both s-sums drop below
// 1, so the normalized t', t'' overshoot t_i on recombination.
struct SplitPlan {
    Piece c_prime, c_dprime;
    std::size_t j = 0, k = 0;
    double epsilon = 0.0, delta = 0.0;
    std::vector<double> s_prime, s_dprime; // pre-normalization
    std::vector<double> t_prime, t_dprime; // each sums to 1
};

// Feasible (epsilon, delta) for the four-inequality system of the split;
// exposed separately so the truncated infinite recursion can reuse it with
// analytically summed entitlement tails.
std::pair<double, double> choose_eps_delta(double t_j, double t_k, double a_j, double b_j,
                                           double a_k, double b_k,
                                           const Tolerances& tol = default_tolerances());

SplitPlan derive_split_entitlements(const std::vector<double>& entitlements, std::size_t j,
                                    std::size_t k, const Piece& c_prime,
                                    const std::vector<Valuation>& valuations,
                                    const Tolerances& tol = default_tolerances());

// Any solver satisfying the fair-division contract.
using FairDivider = std::function<Allocation(const Instance&, const Piece&, QueryLedger&)>;

FairDivider algo1_divider();
FairDivider algo2_divider(std::size_t max_rounds = 0);

// Splits the cake along a separating piece, solves the two restricted fair
// subproblems with `inner`, and merges; every player ends strictly above
// its entitlement. Throws ErrorKind::all_identical when no separating
// piece exists.
Allocation strong_fair_division(const Instance& inst, const Piece& cake, const FairDivider& inner,
                                QueryLedger& ledger, SplitPlan* plan_out = nullptr);

} // namespace cakediv
