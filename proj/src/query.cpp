#include "cakediv/query.hpp"

#include <numeric>

#include "cakediv/errors.hpp"

namespace cakediv {

std::int64_t QueryLedger::total_evals() const {
    return std::accumulate(evals.begin(), evals.end(), std::int64_t{0});
}

std::int64_t QueryLedger::total_cuts() const {
    return std::accumulate(cuts.begin(), cuts.end(), std::int64_t{0});
}

void QueryLedger::charge_evals(std::size_t player, std::int64_t n) {
    if (player >= evals.size())
        fail(ErrorKind::bounds, "player index out of range in query ledger");
    evals[player] += n;
}

void QueryLedger::charge_cuts(std::size_t player, std::int64_t n) {
    if (player >= cuts.size())
        fail(ErrorKind::bounds, "player index out of range in query ledger");
    cuts[player] += n;
}

double counted_eval(QueryLedger& ledger, std::size_t player, const Valuation& v, const Piece& s) {
    ledger.charge_evals(player);
    return v.eval(s);
}

Piece counted_cut(QueryLedger& ledger, std::size_t player, const Valuation& v, const Piece& s,
                  double alpha, const Tolerances& tol) {
    ledger.charge_cuts(player);
    return v.cut_prefix(s, alpha, tol);
}

} // namespace cakediv
