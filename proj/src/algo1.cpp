#include "cakediv/algo1.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cakediv/errors.hpp"
#include "cakediv/proportional.hpp"

namespace cakediv {

std::vector<RationalEntitlement> round_up_to_rationals(const std::vector<double>& t_prime,
                                                       const Tolerances& tol) {
    const std::size_t n = t_prime.size();
    if (n == 0)
        fail(ErrorKind::malformed_instance, "nothing to round");
    double sum = 0.0;
    for (double t : t_prime) {
        if (!(t > 0.0))
            fail(ErrorKind::malformed_instance, "targets must be strictly positive");
        sum += t;
    }
    const double sigma = 1.0 - sum;
    if (sigma <= tol.eps_eq)
        fail(ErrorKind::no_slack, "no strict slack left for rounding up; upstream logic bug");

    double q_d = 10.0;
    while (static_cast<double>(n) / q_d >= sigma) q_d *= 10.0;
    const BigInt q(q_d);

    std::vector<BigInt> a(n);
    BigInt total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = BigInt(std::floor(t_prime[i] * q_d)) + 1;
        // the multiply can round down across an integer; re-check exactly
        if (!(BigRat(a[i]) > exact_rational(t_prime[i]) * q)) a[i] += 1;
        total += a[i];
    }
    if (total > q)
        fail(ErrorKind::invariant_breach, "rounding overshot the denominator");
    a[n - 1] += q - total;

    std::vector<RationalEntitlement> out;
    out.reserve(n);
    BigRat check = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(a[i], q);
        if (!(out[i].value > exact_rational(t_prime[i])))
            fail(ErrorKind::invariant_breach, "rounded entitlement is not strictly dominant");
        check += out[i].value;
    }
    if (check != 1)
        fail(ErrorKind::invariant_breach, "rounded entitlements do not sum to exactly 1");
    return out;
}

namespace {

struct Part {
    std::size_t orig; // instance index
    std::size_t row;  // ledger row
    Valuation val;    // unit mass on the current cake
    double t;         // entitlement, current-level sum is 1
};

struct Ctx {
    QueryLedger& ledger;
    std::vector<Piece>& out;
    const Tolerances& tol;
    Algo1Audit* audit;
    std::int64_t start_queries;
};

std::int64_t ledger_total(const QueryLedger& l) { return l.total_evals() + l.total_cuts(); }

void note_branch(Ctx& ctx, char b) {
    if (ctx.audit) ctx.audit->branches.push_back(b);
}

// Removes players[idx] (already holding its piece) and recurses over the
// remainder with rescaled entitlements and renormalized measures.
void recurse_without(std::vector<Part> players, std::size_t idx, const Piece& rest, Ctx& ctx);

void divide(std::vector<Part> players, const Piece& cake, Ctx& ctx) {
    // the round assumes entitlements sorted ascending; ties keep input order
    std::stable_sort(players.begin(), players.end(),
                     [](const Part& a, const Part& b) { return a.t < b.t; });
    const std::size_t n = players.size();
    if (n == 1) {
        note_branch(ctx, '1');
        ctx.out[players[0].orig] = cake;
        return;
    }

    if (ctx.audit) ++ctx.audit->rounds;
    const double t1 = players[0].t;
    Piece slice = counted_cut(ctx.ledger, players[0].row, players[0].val, cake, t1, ctx.tol);
    std::vector<std::size_t> trimmers;
    for (std::size_t i = 1; i < n; ++i) {
        double w = counted_eval(ctx.ledger, players[i].row, players[i].val, slice);
        if (w > t1 + ctx.tol.eps_eq) {
            slice = counted_cut(ctx.ledger, players[i].row, players[i].val, slice, t1, ctx.tol);
            trimmers.push_back(i);
        }
    }

    double w1 = counted_eval(ctx.ledger, players[0].row, players[0].val, slice);
    if (w1 >= t1 - ctx.tol.eps_eq) {
        // nobody cut below the cutter's value: the cutter exits
        note_branch(ctx, 'b');
        ctx.out[players[0].orig] = slice;
        recurse_without(std::move(players), 0, piece_diff(cake, slice), ctx);
        return;
    }

    if (trimmers.empty())
        fail(ErrorKind::invariant_breach, "slice lost value without any diminisher");
    const std::size_t k = trimmers.back();

    if (std::abs(players[k].t - t1) <= ctx.tol.eps_eq) {
        // the diminisher's entitlement matches the slice value: exits now
        note_branch(ctx, 'k');
        ctx.out[players[k].orig] = slice;
        recurse_without(std::move(players), k, piece_diff(cake, slice), ctx);
        return;
    }

    // rational rounding over the remainder, all n players stay in
    note_branch(ctx, 'c');
    const Piece rest = piece_diff(cake, slice);
    std::vector<double> targets(n);
    double target_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double rest_value = counted_eval(ctx.ledger, players[i].row, players[i].val, rest);
        double owed = (i == k) ? players[i].t - t1 : players[i].t;
        targets[i] = owed / rest_value;
        target_sum += targets[i];
    }
    if (!(target_sum < 1.0 - ctx.tol.eps_eq))
        fail(ErrorKind::invariant_breach,
             "reduced targets sum to " + std::to_string(target_sum) + ", expected < 1");

    auto rounded = round_up_to_rationals(targets, ctx.tol);
    if (ctx.audit) {
        ctx.audit->delegated = true;
        BigInt q = 1;
        for (const auto& r : rounded) q = boost::multiprecision::lcm(q, r.den());
        ctx.audit->delegation_clones = static_cast<std::size_t>(q);
        ctx.audit->queries_before_delegation = ledger_total(ctx.ledger) - ctx.start_queries;
    }

    std::vector<Valuation> vals;
    std::vector<std::size_t> rows;
    vals.reserve(n);
    rows.reserve(n);
    for (const Part& p : players) {
        vals.push_back(p.val);
        rows.push_back(p.row);
    }
    auto pieces = rational_fair_division(vals, rounded, rest, ctx.ledger, rows, ctx.tol);
    for (std::size_t i = 0; i < n; ++i)
        ctx.out[players[i].orig] = (i == k) ? piece_union(slice, pieces[i]) : pieces[i];
}

void recurse_without(std::vector<Part> players, std::size_t idx, const Piece& rest, Ctx& ctx) {
    players.erase(players.begin() + static_cast<std::ptrdiff_t>(idx));
    if (players.empty()) return;
    double tsum = 0.0;
    for (const Part& p : players) tsum += p.t;
    const Valuation uni = Valuation::uniform();
    for (Part& p : players) {
        p.t /= tsum;
        p.val = restrict_normalize(p.val, rest, uni, ctx.tol);
    }
    divide(std::move(players), rest, ctx);
}

} // namespace

Allocation algorithm_one(const Instance& inst, const Piece& cake, QueryLedger& ledger,
                         Algo1Audit* audit) {
    inst.validate();
    if (cake.empty())
        fail(ErrorKind::infeasible_instance, "cannot divide an empty cake");

    std::vector<Piece> pieces(inst.size());
    Ctx ctx{ledger, pieces, inst.tol, audit, ledger_total(ledger)};
    std::vector<Part> players;
    players.reserve(inst.size());
    for (std::size_t i = 0; i < inst.size(); ++i)
        players.push_back({i, inst.label(i), inst.valuations[i], inst.entitlements[i]});
    divide(std::move(players), cake, ctx);
    if (audit && !audit->delegated)
        audit->queries_before_delegation = ledger_total(ledger) - ctx.start_queries;
    return make_allocation(inst, std::move(pieces));
}

} // namespace cakediv
