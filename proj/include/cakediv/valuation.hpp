#pragma once

#include <vector>

#include "cakediv/piece.hpp"
#include "cakediv/tolerances.hpp"

namespace cakediv {

// Atomless probability measure on [0,1) given by a piecewise-constant
// density: breakpoints 0 = x_0 < ... < x_k = 1 and k nonnegative cell
// densities integrating to 1. Immutable after construction; all queries
// are pure functions.
class Valuation {
public:
    // Validates shape, nonnegativity, and unit mass (within eps_norm);
    // throws ErrorKind::malformed_valuation otherwise. Adjacent cells with
    // equal density are merged so the representation is canonical.
    Valuation(std::vector<double> breakpoints, std::vector<double> densities,
              const Tolerances& tol = default_tolerances());

    static Valuation uniform();

    const std::vector<double>& breakpoints() const { return xs_; }
    const std::vector<double>& densities() const { return ds_; }

    // Mass of [0, x).
    double cdf(double x) const;

    // Mass of a slice; additive over the disjoint intervals of s.
    double eval(const Piece& s) const;

    double density_at(double x) const;

    // Leftmost sub-piece s' of s with eval(s') = alpha, found by sweeping s
    // left to right and stopping at the inverse-CDF point. Deterministic.
    // Throws malformed_query for alpha < 0 and insufficient_measure for
    // alpha > eval(s) + eps_eq.
    Piece cut_prefix(const Piece& s, double alpha,
                     const Tolerances& tol = default_tolerances()) const;

    // Measures coincide iff the canonical representations match.
    friend bool operator==(const Valuation&, const Valuation&) = default;

private:
    std::vector<double> xs_;  // size k+1
    std::vector<double> ds_;  // size k
    std::vector<double> cum_; // cum_[j] = mass of [0, xs_[j]); size k+1

    Valuation() = default;
    std::size_t cell_index(double x) const;

    friend Valuation restrict_normalize(const Valuation&, const Piece&, const Valuation&,
                                        const Tolerances&);
};

// Conditional measure of v on s: density v/eval(v,s) on s and zero
// elsewhere. When s carries no v-mass the fallback is renormalized onto s
// instead; if that also fails, the Lebesgue-uniform density on s is used.
// Throws ErrorKind::empty_support when s is empty as a point set.
Valuation restrict_normalize(const Valuation& v, const Piece& s, const Valuation& fallback,
                             const Tolerances& tol = default_tolerances());

} // namespace cakediv
