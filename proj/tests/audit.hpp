#pragma once

// Trace auditors shared by the unit and acceptance suites. Everything here
// recomputes measures fresh from the recorded pieces instead of trusting
// the solver's cached numbers.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cakediv/algo2.hpp"
#include "cakediv/infinite.hpp"
#include "cakediv/instance.hpp"

namespace audit {

using namespace cakediv;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void expect(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

// Round-by-round invariants of an Algorithm II trace:
//  - the remainder is exactly the cake minus the allocated pieces
//  - the unsatisfied set matches its definition
//  - the deficit-ratio sum returns to 1 every round
//  - the trimming bound holds for every unsatisfied player, with equality
//    for the receiver
//  - improved entitlements never decrease, and strictly increase for the
//    whole next unsatisfied set when the receiver is not the cutter
//  - the remainder shrinks by a slice of positive receiver value, and the
//    remainder-ratio bound holds
inline void audit_algo2_trace(const Instance& inst, const Piece& cake, const Algo2Trace& trace) {
    const Tolerances& tol = inst.tol;
    const std::size_t n = inst.size();

    for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
        const RoundRecord& rec = trace.rounds[r];
        const std::string where = "round " + std::to_string(rec.m) + ": ";

        Piece allocated;
        for (const Piece& p : rec.pieces) allocated = piece_union(allocated, p);
        expect(piece_diff(cake, allocated) == rec.remainder,
               where + "remainder is not cake minus allocations");

        std::vector<bool> in_set(n, false);
        for (std::size_t idx = 0; idx < rec.unsatisfied.size(); ++idx)
            in_set[rec.unsatisfied[idx]] = true;
        for (std::size_t i = 0; i < n; ++i) {
            double own = inst.valuations[i].eval(rec.pieces[i]);
            expect(in_set[i] == (inst.entitlements[i] > own + tol.eps_eq),
                   where + "unsatisfied set mismatch at player " + std::to_string(i));
        }

        double eq2 = 0.0;
        for (std::size_t idx = 0; idx < rec.unsatisfied.size(); ++idx) {
            std::size_t i = rec.unsatisfied[idx];
            double own = inst.valuations[i].eval(rec.pieces[i]);
            double rem = inst.valuations[i].eval(rec.remainder);
            expect(std::abs(own - rec.alloc_value[idx]) <= tol.eps_eq,
                   where + "cached allocation value drifted");
            expect(std::abs(rem - rec.remainder_value[idx]) <= tol.eps_eq,
                   where + "cached remainder value drifted");
            eq2 += (rec.improved[idx] - own) / rem;
        }
        expect(std::abs(eq2 - 1.0) <= static_cast<double>(n) * tol.eps_eq,
               where + "deficit-ratio sum is " + std::to_string(eq2));

        bool receiver_tight = false;
        for (std::size_t idx = 0; idx < rec.unsatisfied.size(); ++idx) {
            std::size_t i = rec.unsatisfied[idx];
            double slice_value = inst.valuations[i].eval(rec.slice);
            double bound = rec.ratio * rec.remainder_value[idx];
            expect(slice_value <= bound + tol.eps_eq,
                   where + "trimming bound broken for player " + std::to_string(i));
            if (i == rec.receiver) {
                receiver_tight = std::abs(slice_value - bound) <= tol.eps_eq;
                expect(slice_value > tol.eps_norm,
                       where + "receiver gained nothing from the slice");
            }
        }
        expect(receiver_tight, where + "receiver is not tight on the slice");

        Piece next_remainder = piece_diff(rec.remainder, rec.slice);
        expect(next_remainder.subset_of(rec.remainder) && !(next_remainder == rec.remainder),
               where + "remainder did not shrink strictly");

        if (r + 1 < trace.rounds.size()) {
            const RoundRecord& next = trace.rounds[r + 1];
            expect(next.remainder == next_remainder, where + "recorded remainders disagree");
            // entitlement lift: monotone always, strict when receiver != cutter
            for (std::size_t idx = 0; idx < next.unsatisfied.size(); ++idx) {
                std::size_t i = next.unsatisfied[idx];
                for (std::size_t pdx = 0; pdx < rec.unsatisfied.size(); ++pdx) {
                    if (rec.unsatisfied[pdx] != i) continue;
                    expect(next.improved[idx] >= rec.improved[pdx] - tol.eps_eq,
                           where + "improved entitlement decreased for player " +
                               std::to_string(i));
                    if (rec.receiver != rec.cutter)
                        expect(next.improved[idx] > rec.improved[pdx],
                               where + "expected a strict lift for player " + std::to_string(i));
                }
            }
            // remainder-ratio bound, round m to m+1
            for (std::size_t idx = 0; idx < rec.unsatisfied.size(); ++idx) {
                std::size_t i = rec.unsatisfied[idx];
                double before = rec.remainder_value[idx];
                double after = inst.valuations[i].eval(next_remainder);
                if (after > tol.eps_norm)
                    expect(before / after <= 1.0 / (1.0 - rec.ratio) + 1e-9,
                           where + "remainder-ratio bound broken for player " +
                               std::to_string(i));
            }
        }
    }
}

// Stage invariants of the truncated infinite recursion: exact partitions,
// scaled-entitlement fairness, shrinking pieces, and the newcomer's
// per-piece take.
inline void audit_infinite_history(const PlayerStream& stream,
                                   const std::vector<RefinementState>& history, const Piece& cake,
                                   const Tolerances& tol) {
    expect(!history.empty(), "empty history");
    for (std::size_t d = 0; d < history.size(); ++d) {
        const RefinementState& st = history[d];
        const std::string where = "depth " + std::to_string(d) + ": ";
        expect(st.depth == d && st.pieces.size() == d + 1, where + "malformed state");

        Piece covered;
        for (const Piece& p : st.pieces) {
            expect(piece_intersect(covered, p).empty(), where + "pieces overlap");
            covered = piece_union(covered, p);
        }
        expect(covered == cake, where + "pieces do not partition the cake");

        for (std::size_t i = 0; i <= d; ++i) {
            double value = stream.valuation(i).eval(st.pieces[i]);
            expect(value >= scaled_entitlement(stream, i, d) - tol.eps_fair,
                   where + "player " + std::to_string(i) + " is below its scaled entitlement");
        }

        if (d + 1 < history.size()) {
            const RefinementState& next = history[d + 1];
            const Valuation& newcomer = stream.valuation(d + 1);
            double t_new = scaled_entitlement(stream, d + 1, d + 1);
            for (std::size_t i = 0; i <= d; ++i) {
                expect(next.pieces[i].subset_of(st.pieces[i]),
                       where + "piece of player " + std::to_string(i) + " is not shrinking");
                double ceded = newcomer.eval(piece_diff(st.pieces[i], next.pieces[i]));
                expect(ceded >= newcomer.eval(st.pieces[i]) * t_new - tol.eps_fair,
                       where + "newcomer take from piece " + std::to_string(i) + " too small");
            }
        }
    }
}

} // namespace audit
