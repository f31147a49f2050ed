#include "cakediv/proportional.hpp"

#include <optional>
#include <string>

#include "cakediv/errors.hpp"

namespace cakediv {

namespace {

struct Block {
    std::size_t owner;  // index into the valuation list
    std::size_t row;    // ledger row
    std::size_t clones; // remaining clones of this owner
};

// Clone-aware Last Diminisher. Clones of one owner are consecutive and
// share a valuation, so only the first clone of a block can trim in a
// round; the rest see a slice worth exactly their threshold. Their queries
// are still charged, just not recomputed.
std::vector<Piece> run_last_diminisher(const std::vector<Valuation>& vals,
                                       std::vector<Block> blocks, const Piece& cake,
                                       QueryLedger& ledger, const Tolerances& tol) {
    if (cake.empty())
        fail(ErrorKind::infeasible_instance, "cannot divide an empty cake");

    std::vector<Piece> out(vals.size());
    Piece remaining = cake;
    std::size_t total = 0;
    for (const Block& b : blocks) total += b.clones;

    while (total > 1) {
        // remaining-cake value per owner, evaluated once per round
        std::vector<std::optional<double>> rem_value(vals.size());
        auto remaining_value = [&](std::size_t owner) {
            if (!rem_value[owner]) rem_value[owner] = vals[owner].eval(remaining);
            return *rem_value[owner];
        };

        const Block& cutter = blocks.front();
        ledger.charge_evals(cutter.row);
        double target = remaining_value(cutter.owner) / static_cast<double>(total);
        Piece slice = counted_cut(ledger, cutter.row, vals[cutter.owner], remaining, target, tol);

        std::size_t exiting = 0; // block index of the last diminisher, cutter by default
        bool first_clone = true;
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            Block& b = blocks[bi];
            std::size_t participating = b.clones - (first_clone ? 1 : 0);
            if (participating > 0) {
                // every clone checks the slice against its own threshold
                ledger.charge_evals(b.row, 2 * static_cast<std::int64_t>(participating));
                double threshold = remaining_value(b.owner) / static_cast<double>(total);
                if (vals[b.owner].eval(slice) > threshold + tol.eps_eq) {
                    slice = counted_cut(ledger, b.row, vals[b.owner], slice, threshold, tol);
                    exiting = bi;
                }
            }
            first_clone = false;
        }

        Block& winner = blocks[exiting];
        out[winner.owner] = piece_union(out[winner.owner], slice);
        remaining = piece_diff(remaining, slice);
        if (--winner.clones == 0) blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(exiting));
        --total;
    }

    const Block& last = blocks.front();
    out[last.owner] = piece_union(out[last.owner], remaining);
    return out;
}

std::vector<Block> unit_blocks(std::size_t n, const std::vector<std::size_t>& labels) {
    std::vector<Block> blocks(n);
    for (std::size_t i = 0; i < n; ++i) blocks[i] = {i, labels.empty() ? i : labels[i], 1};
    return blocks;
}

} // namespace

std::vector<Piece> last_diminisher(const std::vector<Valuation>& valuations, const Piece& cake,
                                   QueryLedger& ledger, const std::vector<std::size_t>& labels,
                                   const Tolerances& tol) {
    if (valuations.empty())
        fail(ErrorKind::malformed_instance, "no players");
    return run_last_diminisher(valuations, unit_blocks(valuations.size(), labels), cake, ledger,
                               tol);
}

std::vector<Piece> rational_fair_division(const std::vector<Valuation>& valuations,
                                          const std::vector<RationalEntitlement>& entitlements,
                                          const Piece& cake, QueryLedger& ledger,
                                          const std::vector<std::size_t>& labels,
                                          const Tolerances& tol) {
    const std::size_t n = valuations.size();
    if (n == 0 || entitlements.size() != n)
        fail(ErrorKind::malformed_instance, "entitlement count does not match valuation count");
    if (!rational_sum_is_one(entitlements))
        fail(ErrorKind::malformed_instance, "rational entitlements do not sum to exactly 1");

    BigInt q = 1;
    for (const auto& t : entitlements) q = boost::multiprecision::lcm(q, t.den());
    if (q > kMaxClones)
        fail(ErrorKind::resource_limit,
             "common denominator " + q.str() + " exceeds the clone cap; use Algorithm II");

    std::vector<Block> blocks;
    blocks.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        BigInt p = entitlements[i].num() * (q / entitlements[i].den());
        blocks.push_back({i, labels.empty() ? i : labels[i], static_cast<std::size_t>(p)});
    }
    return run_last_diminisher(valuations, std::move(blocks), cake, ledger, tol);
}

Allocation cloning_solve(const Instance& inst, const Piece& cake, QueryLedger& ledger) {
    inst.validate();
    if (!inst.all_rational())
        fail(ErrorKind::malformed_instance,
             "cloning requires an exact rational form for every entitlement");
    std::vector<RationalEntitlement> ents;
    ents.reserve(inst.size());
    for (const auto& e : inst.exact) ents.push_back(*e);
    auto pieces =
        rational_fair_division(inst.valuations, ents, cake, ledger, inst.labels, inst.tol);
    return make_allocation(inst, std::move(pieces));
}

} // namespace cakediv
