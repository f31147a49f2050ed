#include "cakediv/algo2.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cakediv/errors.hpp"

namespace cakediv {

namespace {

std::size_t row_of(const std::vector<std::size_t>& labels, std::size_t i) {
    return labels.empty() ? i : labels[i];
}

void refresh_unsatisfied(RoundState& st, const std::vector<double>& entitlements,
                         const Tolerances& tol) {
    st.unsatisfied.clear();
    for (std::size_t i = 0; i < entitlements.size(); ++i)
        if (entitlements[i] > st.alloc_value[i] + tol.eps_eq) st.unsatisfied.push_back(i);
}

void refresh_remainder_values(RoundState& st, const std::vector<Valuation>& vals,
                              const std::vector<std::size_t>& labels, QueryLedger& ledger,
                              const Tolerances& tol) {
    for (std::size_t i : st.unsatisfied) {
        st.rem_value[i] = counted_eval(ledger, row_of(labels, i), vals[i], st.remainder);
        if (st.rem_value[i] <= tol.eps_norm)
            fail(ErrorKind::infeasible_state,
                 "unsatisfied player " + std::to_string(i) + " values the remainder at zero");
    }
}

} // namespace

std::size_t select_cutter(const RoundState& st, const Tolerances& tol) {
    if (st.unsatisfied.size() < 2)
        fail(ErrorKind::invariant_breach, "cutter selection needs at least two unsatisfied players");
    double best = 0.0;
    bool have = false;
    for (std::size_t i : st.unsatisfied) {
        double ratio = (st.improved[i] - st.alloc_value[i]) / st.rem_value[i];
        if (!have || ratio < best) {
            best = ratio;
            have = true;
        }
    }
    for (std::size_t i : st.unsatisfied) {
        double ratio = (st.improved[i] - st.alloc_value[i]) / st.rem_value[i];
        if (ratio <= best + tol.eps_eq) return i;
    }
    fail(ErrorKind::invariant_breach, "no ratio minimizer found");
}

TrimResult trim_round(const RoundState& st, std::size_t cutter,
                      const std::vector<Valuation>& vals, const std::vector<std::size_t>& labels,
                      QueryLedger& ledger, const Tolerances& tol) {
    const double deficit = st.improved[cutter] - st.alloc_value[cutter];
    if (deficit > st.rem_value[cutter] + tol.eps_eq)
        fail(ErrorKind::invariant_breach,
             "cutter deficit exceeds its remainder value; round invariant broken");
    const double ratio = deficit / st.rem_value[cutter];

    Piece slice =
        counted_cut(ledger, row_of(labels, cutter), vals[cutter], st.remainder, deficit, tol);

    // trims in increasing index order; only evaluations made after the last
    // physical trim are measurements of the final slice
    const std::size_t n = vals.size();
    std::vector<double> final_value(n, -1.0);
    bool trimmed_any = false;
    std::size_t last_trimmer = cutter;
    for (std::size_t i : st.unsatisfied) {
        if (i == cutter) continue;
        double bound = ratio * st.rem_value[i];
        double w = counted_eval(ledger, row_of(labels, i), vals[i], slice);
        if (w > bound + tol.eps_eq) {
            slice = counted_cut(ledger, row_of(labels, i), vals[i], slice, bound, tol);
            trimmed_any = true;
            last_trimmer = i;
            final_value[i] = bound; // tight by construction
        } else {
            final_value[i] = w; // stale if someone trims later
        }
    }

    TrimResult out;
    out.slice = std::move(slice);
    out.ratio = ratio;
    if (!trimmed_any) {
        out.receiver = cutter; // untouched slice is worth exactly the deficit
        return out;
    }

    // receiver: the cutter if still tight, else the smallest tight index
    double cutter_now = counted_eval(ledger, row_of(labels, cutter), vals[cutter], out.slice);
    if (cutter_now >= deficit - tol.eps_eq) {
        out.receiver = cutter;
        return out;
    }
    for (std::size_t i : st.unsatisfied) {
        if (i == cutter) continue;
        if (i == last_trimmer) {
            out.receiver = i;
            return out;
        }
        double bound = ratio * st.rem_value[i];
        double w = (i > last_trimmer) ? final_value[i]
                                      : counted_eval(ledger, row_of(labels, i), vals[i], out.slice);
        if (w >= bound - tol.eps_eq) {
            out.receiver = i;
            return out;
        }
    }
    fail(ErrorKind::invariant_breach, "no player is tight on the trimmed slice");
}

void update_entitlements(RoundState& st, const TrimResult& trim,
                         const std::vector<double>& entitlements,
                         const std::vector<Valuation>& vals,
                         const std::vector<std::size_t>& labels, QueryLedger& ledger,
                         const Tolerances& tol) {
    const std::size_t j = trim.receiver;
    st.allocated[j] = piece_union(st.allocated[j], trim.slice);
    st.remainder = piece_diff(st.remainder, trim.slice);
    st.alloc_value[j] = counted_eval(ledger, row_of(labels, j), vals[j], st.allocated[j]);

    refresh_unsatisfied(st, entitlements, tol);
    ++st.m;
    if (st.unsatisfied.size() < 2) return; // termination round, no lift needed

    refresh_remainder_values(st, vals, labels, ledger, tol);
    double denom = 0.0;
    for (std::size_t i : st.unsatisfied)
        denom += (st.improved[i] - st.alloc_value[i]) / st.rem_value[i];
    if (denom <= tol.eps_norm)
        fail(ErrorKind::infeasible_state, "deficit-ratio sum collapsed to zero");
    for (std::size_t i : st.unsatisfied)
        st.improved[i] = st.alloc_value[i] + (st.improved[i] - st.alloc_value[i]) / denom;
}

Algo2Result algorithm_two(const Instance& inst, const Piece& cake, QueryLedger& ledger,
                          std::size_t max_rounds) {
    inst.validate();
    if (cake.empty())
        fail(ErrorKind::infeasible_instance, "cannot divide an empty cake");
    const std::size_t n = inst.size();
    if (max_rounds == 0) {
        // legitimate runs are not polynomial in n alone: a near-exact hit
        // leaves some player with a tiny deficit ratio that pins every
        // later round's slice size, so rounds scale with the inverse gap
        // (562 rounds observed on a natural 5-player instance); the guard
        // only needs to catch truly stuck floating-point states
        max_rounds = std::max(10 * n * n, 2000 * n);
    }

    RoundState st;
    st.allocated.assign(n, Piece{});
    st.remainder = cake;
    st.improved = inst.entitlements;
    st.alloc_value.assign(n, 0.0);
    st.rem_value.assign(n, 0.0);
    refresh_unsatisfied(st, inst.entitlements, inst.tol);
    if (st.unsatisfied.size() > 1)
        refresh_remainder_values(st, inst.valuations, inst.labels, ledger, inst.tol);

    Algo2Trace trace;
    while (st.unsatisfied.size() > 1) {
        if (st.m >= max_rounds)
            fail(ErrorKind::non_termination,
                 "round guard of " + std::to_string(max_rounds) +
                     " hit; numerical degeneracy suspected");

        RoundRecord rec;
        rec.m = st.m;
        rec.unsatisfied = st.unsatisfied;
        for (std::size_t i : st.unsatisfied) {
            rec.improved.push_back(st.improved[i]);
            rec.alloc_value.push_back(st.alloc_value[i]);
            rec.remainder_value.push_back(st.rem_value[i]);
        }
        rec.pieces = st.allocated;
        rec.remainder = st.remainder;

        rec.cutter = select_cutter(st, inst.tol);
        TrimResult trim =
            trim_round(st, rec.cutter, inst.valuations, inst.labels, ledger, inst.tol);
        rec.receiver = trim.receiver;
        rec.ratio = trim.ratio;
        rec.slice = trim.slice;
        update_entitlements(st, trim, inst.entitlements, inst.valuations, inst.labels, ledger,
                            inst.tol);
        rec.evals = ledger.total_evals();
        rec.cuts = ledger.total_cuts();
        trace.rounds.push_back(std::move(rec));
    }

    if (st.unsatisfied.empty())
        fail(ErrorKind::invariant_breach, "no unsatisfied player left before final allocation");
    const std::size_t last = st.unsatisfied.front();
    st.allocated[last] = piece_union(st.allocated[last], st.remainder);
    trace.final_player = last;
    trace.final_remainder = st.remainder;
    trace.ledger = ledger;

    Algo2Result out;
    out.allocation = make_allocation(inst, std::move(st.allocated));
    out.trace = std::move(trace);
    return out;
}

} // namespace cakediv
