#include "cakediv/strong.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cakediv/algo1.hpp"
#include "cakediv/algo2.hpp"
#include "cakediv/errors.hpp"

namespace cakediv {

std::optional<Separation> find_separating_piece(const std::vector<Valuation>& valuations,
                                                const Tolerances& tol) {
    if (valuations.size() < 2)
        fail(ErrorKind::malformed_instance, "separation needs at least two valuations");

    std::vector<double> grid;
    for (const Valuation& v : valuations)
        for (double x : v.breakpoints())
            if (x > 0.0 && x < 1.0) grid.push_back(x);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    Separation best;
    double best_gap = tol.eps_eq; // require a separation beyond tolerance
    bool found = false;
    for (double x : grid) {
        for (std::size_t a = 0; a + 1 < valuations.size(); ++a) {
            double ca = valuations[a].cdf(x);
            for (std::size_t b = a + 1; b < valuations.size(); ++b) {
                double gap = std::abs(valuations[b].cdf(x) - ca);
                if (gap > best_gap) {
                    best_gap = gap;
                    found = true;
                    bool a_low = ca < valuations[b].cdf(x);
                    best.j = a_low ? a : b;
                    best.k = a_low ? b : a;
                    best.c_prime = Piece::normalized({{0.0, x}});
                }
            }
        }
    }
    if (!found) return std::nullopt;
    return best;
}

std::pair<double, double> choose_eps_delta(double t_j, double t_k, double a_j, double b_j,
                                           double a_k, double b_k, const Tolerances& tol) {
    double eps = 0.0, delta = 0.0;
    if (a_j <= tol.eps_norm) {
        // C' carries no j-mass: the delta > eps*a_j/b_j constraint is moot
        if (b_k <= tol.eps_norm) {
            delta = 0.5 * t_k;
            eps = 0.5 * t_j;
        } else {
            delta = 0.5 * std::min(t_k, t_j * a_k / b_k);
            eps = 0.5 * (delta * b_k / a_k + t_j); // interior of (delta*b_k/a_k, t_j)
        }
    } else {
        double lo = b_k / a_k, hi = b_j / a_j; // open interval for eps/delta
        if (!(lo < hi))
            fail(ErrorKind::separation_too_weak, "eps/delta ratio interval is empty");
        double rho = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
        delta = 0.5 * std::min(t_k, t_j / rho);
        eps = rho * delta;
    }

    bool ok = eps > 0.0 && eps < t_j && delta > 0.0 && delta < t_k &&
              (a_k <= tol.eps_norm || eps * a_k > delta * b_k) &&
              (a_j <= tol.eps_norm || delta * b_j > eps * a_j);
    if (!ok)
        fail(ErrorKind::separation_too_weak,
             "no usable interior point for the eps/delta system at this breakpoint");
    return {eps, delta};
}

SplitPlan derive_split_entitlements(const std::vector<double>& entitlements, std::size_t j,
                                    std::size_t k, const Piece& c_prime,
                                    const std::vector<Valuation>& valuations,
                                    const Tolerances& tol) {
    const std::size_t n = valuations.size();
    if (j >= n || k >= n || j == k)
        fail(ErrorKind::bounds, "separating indices out of range");

    SplitPlan plan;
    plan.j = j;
    plan.k = k;
    plan.c_prime = c_prime;
    plan.c_dprime = piece_diff(Piece::full(), c_prime);

    const double a_j = valuations[j].eval(plan.c_prime);
    const double b_j = valuations[j].eval(plan.c_dprime);
    const double a_k = valuations[k].eval(plan.c_prime);
    const double b_k = valuations[k].eval(plan.c_dprime);
    if (!(a_j < a_k - tol.eps_eq))
        fail(ErrorKind::malformed_instance,
             "separating piece does not satisfy mu_j(C') < mu_k(C')");

    auto [eps, delta] = choose_eps_delta(entitlements[j], entitlements[k], a_j, b_j, a_k, b_k, tol);
    plan.epsilon = eps;
    plan.delta = delta;

    plan.s_prime = entitlements;
    plan.s_dprime = entitlements;
    plan.s_prime[j] = entitlements[j] - eps;
    plan.s_dprime[j] = entitlements[j] + eps * a_j / b_j;
    plan.s_prime[k] = entitlements[k] + delta * b_k / a_k;
    plan.s_dprime[k] = entitlements[k] - delta;

    double sum_p = 0.0, sum_q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(plan.s_prime[i] > 0.0 && plan.s_dprime[i] > 0.0))
            fail(ErrorKind::separation_too_weak, "split produced a non-positive share");
        sum_p += plan.s_prime[i];
        sum_q += plan.s_dprime[i];
    }
    if (!(sum_p < 1.0 && sum_q < 1.0))
        fail(ErrorKind::separation_too_weak, "split sums did not drop below 1");

    plan.t_prime.resize(n);
    plan.t_dprime.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        plan.t_prime[i] = plan.s_prime[i] / sum_p;
        plan.t_dprime[i] = plan.s_dprime[i] / sum_q;
    }

    for (std::size_t i = 0; i < n; ++i) {
        double ai = valuations[i].eval(plan.c_prime);
        double bi = valuations[i].eval(plan.c_dprime);
        if (std::abs(plan.s_prime[i] * ai + plan.s_dprime[i] * bi - entitlements[i]) >
            tol.eps_norm)
            fail(ErrorKind::invariant_breach, "s-value recombination identity failed");
        if (!(plan.t_prime[i] * ai + plan.t_dprime[i] * bi > entitlements[i] + tol.eps_norm))
            fail(ErrorKind::separation_too_weak, "normalized split is not strictly dominant");
    }
    return plan;
}

FairDivider algo1_divider() {
    return [](const Instance& inst, const Piece& cake, QueryLedger& ledger) {
        return algorithm_one(inst, cake, ledger);
    };
}

FairDivider algo2_divider(std::size_t max_rounds) {
    return [max_rounds](const Instance& inst, const Piece& cake, QueryLedger& ledger) {
        return algorithm_two(inst, cake, ledger, max_rounds).allocation;
    };
}

Allocation strong_fair_division(const Instance& inst, const Piece& cake, const FairDivider& inner,
                                QueryLedger& ledger, SplitPlan* plan_out) {
    inst.validate();
    if (inst.size() < 2)
        fail(ErrorKind::all_identical,
             "strict fairness is impossible for a single player owed the whole cake");

    auto sep = find_separating_piece(inst.valuations, inst.tol);
    if (!sep)
        fail(ErrorKind::all_identical,
             "all valuations are identical; no strongly fair division exists");

    // the split is derived on the full cake; restrict it to the working cake
    SplitPlan plan = derive_split_entitlements(inst.entitlements, sep->j, sep->k, sep->c_prime,
                                               inst.valuations, inst.tol);
    Piece part_one = piece_intersect(cake, plan.c_prime);
    Piece part_two = piece_diff(cake, plan.c_prime);
    if (plan_out) *plan_out = plan;

    const Valuation uni = Valuation::uniform();
    auto solve_part = [&](const Piece& part, const std::vector<double>& ents) {
        Instance sub;
        sub.entitlements = ents;
        sub.labels = inst.labels;
        sub.tol = inst.tol;
        sub.valuations.reserve(inst.size());
        for (const Valuation& v : inst.valuations)
            sub.valuations.push_back(restrict_normalize(v, part, uni, inst.tol));
        return inner(sub, part, ledger);
    };

    Allocation left = solve_part(part_one, plan.t_prime);
    Allocation right = solve_part(part_two, plan.t_dprime);

    std::vector<Piece> merged(inst.size());
    for (std::size_t i = 0; i < inst.size(); ++i)
        merged[i] = piece_union(left.pieces[i], right.pieces[i]);
    Allocation out = make_allocation(inst, std::move(merged));

    for (std::size_t i = 0; i < inst.size(); ++i)
        if (!(out.report[i].slack > inst.tol.eps_norm))
            fail(ErrorKind::invariant_breach,
                 "merged division is not strictly fair for player " + std::to_string(i));
    return out;
}

} // namespace cakediv
