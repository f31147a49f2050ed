#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cakediv/instance.hpp"
#include "cakediv/query.hpp"

namespace cakediv {

// Countable family of (valuation, entitlement) pairs whose entitlements
// sum to 1 by an analytic tail rule, so scaled prefixes are trustworthy at
// any depth. Valuations are generated on demand and cached.
class PlayerStream {
public:
    PlayerStream(std::function<double(std::size_t)> entitlement,
                 std::function<double(std::size_t)> partial_sum,
                 std::function<Valuation(std::size_t)> valuation, std::string description);

    // t_i = r (1-r)^i with partial sums 1 - (1-r)^{n+1}
    static PlayerStream geometric(double r);
    // t_i proportional to (i+1)^{-s}, normalized by riemann_zeta(s)
    static PlayerStream zeta(double s);
    // explicit prefix entitlements, then a geometric tail on the leftover
    static PlayerStream custom(std::vector<double> prefix, double r);

    // replaces the default uniform valuations
    PlayerStream with_valuations(std::function<Valuation(std::size_t)> gen) const;
    // seeded random piecewise-constant valuations, deterministic per index
    PlayerStream with_random_valuations(std::uint64_t seed, std::size_t max_breakpoints = 8) const;

    double entitlement(std::size_t i) const { return entitlement_(i); }
    double partial_sum(std::size_t n) const { return partial_(n); } // sum of t_0..t_n
    const Valuation& valuation(std::size_t i) const;
    const std::string& description() const { return description_; }

private:
    std::function<double(std::size_t)> entitlement_;
    std::function<double(std::size_t)> partial_;
    std::function<Valuation(std::size_t)> valuation_;
    std::string description_;
    mutable std::vector<Valuation> cache_;
};

// t_i^n = t_i / sum_{j<=n} t_j; throws ErrorKind::bounds for i > n.
double scaled_entitlement(const PlayerStream& stream, std::size_t i, std::size_t n);

// Depth-n stage of the recursion: pieces S_0^n..S_n^n partition the cake,
// each worth at least the scaled entitlement to its owner, and shrink as n
// grows.
struct RefinementState {
    std::size_t depth = 0;
    std::vector<Piece> pieces;
};

// One recursion step: each incumbent splits its piece with the newcomer in
// a two-player division at entitlements (1 - t_{n+1}^{n+1}, t_{n+1}^{n+1}),
// keeping its own share; pieces the newcomer values at zero pass through
// untouched. The newcomer collects the trimmings.
RefinementState refine_step(const RefinementState& state, const PlayerStream& stream,
                            QueryLedger& ledger, const Tolerances& tol = default_tolerances());

struct CertificateRow {
    std::size_t player = 0;
    double entitlement = 0.0;  // t_i, the true target
    double scaled = 0.0;       // t_i^N, the depth-N target
    double value = 0.0;        // mu_i(S_i^N)
    double slack = 0.0;        // value - scaled
    double scale_margin = 0.0; // scaled - entitlement, >= 0: depth-N targets dominate
    bool strict_ok = false;    // value > entitlement + eps_norm (strict mode)
};

struct InfiniteResult {
    RefinementState state;                 // depth-N pieces
    std::vector<RefinementState> history;  // depths 0..N (merged across halves in strict mode)
    std::vector<CertificateRow> certificate;
    bool strict = false;
    QueryLedger ledger;
};

// Runs the recursion to depth N. The depth-N output is a genuine fair
// division for the scaled entitlements t_i^N, which dominate the true
// entitlements; the infinite limit itself is not computed. In strict mode
// the cake is first split along a separating piece and two truncated
// recursions run on the halves, making every certified value strictly
// exceed the true entitlement.
InfiniteResult truncated_infinite_division(const PlayerStream& stream, std::size_t depth,
                                           bool strict, QueryLedger& ledger,
                                           const Tolerances& tol = default_tolerances());

} // namespace cakediv
