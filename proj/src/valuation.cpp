#include "cakediv/valuation.hpp"

#include <algorithm>
#include <cmath>

#include "cakediv/errors.hpp"

namespace cakediv {

namespace {
// Snap width for inverse-CDF points that land within a few ulps of a cell
// or slice boundary; keeps remainders free of one-ulp slivers while moving
// mass by at most density * 1e-14.
constexpr double kBoundarySnap = 1e-14;
} // namespace

Valuation::Valuation(std::vector<double> breakpoints, std::vector<double> densities,
                     const Tolerances& tol) {
    if (breakpoints.size() < 2 || densities.size() + 1 != breakpoints.size())
        fail(ErrorKind::malformed_valuation, "need k+1 breakpoints for k densities, k >= 1");
    if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
        fail(ErrorKind::malformed_valuation, "breakpoints must start at 0 and end at 1");
    for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j)
        if (!(breakpoints[j] < breakpoints[j + 1]))
            fail(ErrorKind::malformed_valuation, "breakpoints must be strictly increasing");
    for (double d : densities) {
        if (!(d >= 0.0) || !std::isfinite(d))
            fail(ErrorKind::malformed_valuation, "densities must be finite and nonnegative");
    }

    // canonical form: merge adjacent cells with identical density
    xs_.push_back(breakpoints.front());
    for (std::size_t j = 0; j < densities.size(); ++j) {
        if (!ds_.empty() && ds_.back() == densities[j]) {
            xs_.back() = breakpoints[j + 1];
        } else {
            ds_.push_back(densities[j]);
            xs_.push_back(breakpoints[j + 1]);
        }
    }

    cum_.resize(xs_.size());
    cum_[0] = 0.0;
    for (std::size_t j = 0; j < ds_.size(); ++j)
        cum_[j + 1] = cum_[j] + ds_[j] * (xs_[j + 1] - xs_[j]);
    if (std::abs(cum_.back() - 1.0) > tol.eps_norm)
        fail(ErrorKind::malformed_valuation, "density mass differs from 1 beyond tolerance");
}

Valuation Valuation::uniform() { return Valuation({0.0, 1.0}, {1.0}); }

std::size_t Valuation::cell_index(double x) const {
    // last cell j with xs_[j] <= x
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    if (it == xs_.begin()) return 0;
    std::size_t j = static_cast<std::size_t>(it - xs_.begin()) - 1;
    return std::min(j, ds_.size() - 1);
}

double Valuation::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return cum_.back();
    std::size_t j = cell_index(x);
    return cum_[j] + ds_[j] * (x - xs_[j]);
}

double Valuation::density_at(double x) const {
    if (x < 0.0 || x >= 1.0) return 0.0;
    return ds_[cell_index(x)];
}

double Valuation::eval(const Piece& s) const {
    double mass = 0.0;
    for (const Interval& iv : s.intervals()) mass += cdf(iv.hi) - cdf(iv.lo);
    return mass;
}

Piece Valuation::cut_prefix(const Piece& s, double alpha, const Tolerances& tol) const {
    if (alpha < 0.0)
        fail(ErrorKind::malformed_query, "cut value is negative");
    Piece out;
    if (alpha == 0.0) return out;

    double remaining = alpha;
    for (const Interval& iv : s.intervals()) {
        double lo = iv.lo;
        std::size_t j = cell_index(lo);
        while (lo < iv.hi) {
            double hi = std::min(iv.hi, xs_[j + 1]);
            double seg = ds_[j] * (hi - lo);
            if (ds_[j] > 0.0 && seg >= remaining) {
                double x = lo + remaining / ds_[j];
                if (x > hi - kBoundarySnap) x = hi;
                if (x < lo + kBoundarySnap) x = lo;
                if (x > iv.lo)
                    out.ivs_.push_back({iv.lo, x});
                return Piece::from_sorted(std::move(out.ivs_));
            }
            remaining -= seg;
            lo = hi;
            ++j;
        }
        out.ivs_.push_back(iv);
    }
    if (remaining > tol.eps_eq)
        fail(ErrorKind::insufficient_measure, "cut value exceeds the measure of the slice");
    return Piece::from_sorted(std::move(out.ivs_)); // whole slice, alpha == eval(s) up to eps
}

Valuation restrict_normalize(const Valuation& v, const Piece& s, const Valuation& fallback,
                             const Tolerances& tol) {
    if (s.empty())
        fail(ErrorKind::empty_support, "cannot restrict a measure onto an empty piece");

    auto build = [&](const Valuation& src, double mass) {
        // merged grid: src breakpoints plus the endpoints of s
        std::vector<double> grid(src.breakpoints());
        for (const Interval& iv : s.intervals()) {
            grid.push_back(iv.lo);
            grid.push_back(iv.hi);
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        if (grid.front() != 0.0) grid.insert(grid.begin(), 0.0);
        if (grid.back() != 1.0) grid.push_back(1.0);

        std::vector<double> dens(grid.size() - 1, 0.0);
        double total = 0.0;
        for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
            double mid = 0.5 * (grid[j] + grid[j + 1]);
            if (s.contains(mid)) {
                dens[j] = src.density_at(mid) / mass;
                total += dens[j] * (grid[j + 1] - grid[j]);
            }
        }
        // squeeze out residual rounding so the result is a unit measure
        for (double& d : dens) d /= total;
        return Valuation(std::move(grid), std::move(dens), tol);
    };

    double mass = v.eval(s);
    if (mass > tol.eps_eq) return build(v, mass);
    double fmass = fallback.eval(s);
    if (fmass > tol.eps_eq) return build(fallback, fmass);
    return build(Valuation::uniform(), s.length()); // Lebesgue-uniform on s
}

} // namespace cakediv
