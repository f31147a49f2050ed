#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

namespace cakediv {

// Half-open subinterval [lo, hi) of the unit cake [0,1).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    friend auto operator<=>(const Interval&, const Interval&) = default;
};

// A slice of the cake: canonical finite union of disjoint half-open
// intervals of [0,1). Canonical form — sorted, merged at touching
// endpoints, no interval narrower than the sliver width — is unique, so
// equal point sets compare equal field-wise.
class Piece {
public:
    // Intervals narrower than this are dropped during canonicalization;
    // their measure under any stored valuation is below tolerance.
    static constexpr double kSliverWidth = 1e-12;

    Piece() = default;

    // Canonicalizes an arbitrary soup of intervals. Throws
    // ErrorKind::malformed_interval on endpoints outside [0,1] or lo > hi.
    static Piece normalized(std::vector<Interval> raw);

    static Piece full() { return unit_prefix(1.0); }
    static Piece unit_prefix(double hi); // [0, hi), already canonical

    const std::vector<Interval>& intervals() const { return ivs_; }
    bool empty() const { return ivs_.empty(); }
    std::size_t size() const { return ivs_.size(); }

    // Lebesgue length of the union.
    double length() const;

    bool contains(double x) const;

    // Exact cover test: every interval of *this lies inside one interval
    // of `other` (endpoint comparisons exact).
    bool subset_of(const Piece& other) const;

    friend bool operator==(const Piece&, const Piece&) = default;

private:
    std::vector<Interval> ivs_; // canonical

    friend Piece piece_union(const Piece&, const Piece&);
    friend Piece piece_intersect(const Piece&, const Piece&);
    friend Piece piece_diff(const Piece&, const Piece&);
    friend class Valuation;

    // Sorted, non-overlapping input; merges adjacencies, drops slivers.
    static Piece from_sorted(std::vector<Interval> sorted);
};

Piece piece_union(const Piece& a, const Piece& b);
Piece piece_intersect(const Piece& a, const Piece& b);
Piece piece_diff(const Piece& a, const Piece& b);

std::ostream& operator<<(std::ostream& os, const Piece& p);

} // namespace cakediv
