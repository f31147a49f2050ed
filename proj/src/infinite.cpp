#include "cakediv/infinite.hpp"

#include <cmath>
#include <string>

#include "cakediv/algo2.hpp"
#include "cakediv/errors.hpp"
#include "cakediv/instance_io.hpp"
#include "cakediv/strong.hpp"

namespace cakediv {

PlayerStream::PlayerStream(std::function<double(std::size_t)> entitlement,
                           std::function<double(std::size_t)> partial_sum,
                           std::function<Valuation(std::size_t)> valuation,
                           std::string description)
    : entitlement_(std::move(entitlement)),
      partial_(std::move(partial_sum)),
      valuation_(std::move(valuation)),
      description_(std::move(description)) {}

PlayerStream PlayerStream::geometric(double r) {
    if (!(r > 0.0 && r < 1.0))
        fail(ErrorKind::malformed_instance, "geometric ratio must lie in (0,1)");
    return PlayerStream(
        [r](std::size_t i) { return r * std::pow(1.0 - r, static_cast<double>(i)); },
        [r](std::size_t n) { return 1.0 - std::pow(1.0 - r, static_cast<double>(n) + 1.0); },
        [](std::size_t) { return Valuation::uniform(); },
        "geometric:r=" + std::to_string(r));
}

PlayerStream PlayerStream::zeta(double s) {
    if (!(s > 1.0))
        fail(ErrorKind::malformed_instance, "zeta exponent must exceed 1");
    const double z = std::riemann_zeta(s);
    return PlayerStream(
        [s, z](std::size_t i) { return std::pow(static_cast<double>(i) + 1.0, -s) / z; },
        [s, z](std::size_t n) {
            double acc = 0.0;
            for (std::size_t i = 0; i <= n; ++i)
                acc += std::pow(static_cast<double>(i) + 1.0, -s);
            return acc / z;
        },
        [](std::size_t) { return Valuation::uniform(); }, "zeta:s=" + std::to_string(s));
}

PlayerStream PlayerStream::custom(std::vector<double> prefix, double r) {
    if (!(r > 0.0 && r < 1.0))
        fail(ErrorKind::malformed_instance, "tail ratio must lie in (0,1)");
    double head = 0.0;
    for (double t : prefix) {
        if (!(t > 0.0)) fail(ErrorKind::malformed_instance, "prefix entitlements must be positive");
        head += t;
    }
    if (!(head < 1.0))
        fail(ErrorKind::malformed_instance, "prefix entitlements must sum below 1");
    const double tail = 1.0 - head;
    const std::size_t k = prefix.size();
    auto ent = [prefix, tail, r, k](std::size_t i) {
        if (i < k) return prefix[i];
        return tail * r * std::pow(1.0 - r, static_cast<double>(i - k));
    };
    auto partial = [prefix, tail, r, k](std::size_t n) {
        if (n + 1 <= k) {
            double acc = 0.0;
            for (std::size_t i = 0; i <= n; ++i) acc += prefix[i];
            return acc;
        }
        double head_sum = 0.0;
        for (double t : prefix) head_sum += t;
        return head_sum + tail * (1.0 - std::pow(1.0 - r, static_cast<double>(n - k) + 1.0));
    };
    return PlayerStream(ent, partial, [](std::size_t) { return Valuation::uniform(); },
                        "custom:k=" + std::to_string(k) + ",r=" + std::to_string(r));
}

PlayerStream PlayerStream::with_valuations(std::function<Valuation(std::size_t)> gen) const {
    PlayerStream out(entitlement_, partial_, std::move(gen), description_);
    return out;
}

PlayerStream PlayerStream::with_random_valuations(std::uint64_t seed,
                                                  std::size_t max_breakpoints) const {
    auto gen = [seed, max_breakpoints](std::size_t i) {
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL * (i + 1));
        return random_valuation(rng, max_breakpoints);
    };
    PlayerStream out(entitlement_, partial_, gen,
                     description_ + ",vals=random:seed=" + std::to_string(seed));
    return out;
}

const Valuation& PlayerStream::valuation(std::size_t i) const {
    while (cache_.size() <= i) cache_.push_back(valuation_(cache_.size()));
    return cache_[i];
}

double scaled_entitlement(const PlayerStream& stream, std::size_t i, std::size_t n) {
    if (i > n)
        fail(ErrorKind::bounds, "scaled entitlement requested for a player beyond the depth");
    return stream.entitlement(i) / stream.partial_sum(n);
}

namespace {

Piece state_cake(const RefinementState& st) {
    Piece cake;
    for (const Piece& p : st.pieces) cake = piece_union(cake, p);
    return cake;
}

void ensure_rows(QueryLedger& ledger, std::size_t n) {
    if (ledger.players() < n) {
        ledger.evals.resize(n, 0);
        ledger.cuts.resize(n, 0);
    }
}

} // namespace

RefinementState refine_step(const RefinementState& state, const PlayerStream& stream,
                            QueryLedger& ledger, const Tolerances& tol) {
    const std::size_t n = state.depth;
    const std::size_t newcomer = n + 1;
    ensure_rows(ledger, newcomer + 1);
    const double t_new = scaled_entitlement(stream, newcomer, newcomer);
    const Valuation& v_new = stream.valuation(newcomer);
    const Valuation uni = Valuation::uniform();
    const Piece cake = state_cake(state);

    RefinementState next;
    next.depth = newcomer;
    next.pieces.resize(newcomer + 1);

    for (std::size_t i = 0; i <= n; ++i) {
        const Piece& held = state.pieces[i];
        double newcomer_stake = counted_eval(ledger, newcomer, v_new, held);
        if (newcomer_stake <= tol.eps_norm || held.empty()) {
            next.pieces[i] = held; // nothing here for the newcomer
            continue;
        }

        Instance duo;
        duo.valuations = {restrict_normalize(stream.valuation(i), held, uni, tol),
                          restrict_normalize(v_new, held, uni, tol)};
        duo.entitlements = {1.0 - t_new, t_new};
        duo.labels = {i, newcomer};
        duo.tol = tol;
        // the newcomer's share shrinks with depth and the split needs about
        // 1/t_new rounds in the worst case, so size the guard accordingly
        std::size_t guard = 4000 + static_cast<std::size_t>(std::ceil(6.0 / t_new));
        Allocation split;
        try {
            split = algorithm_two(duo, held, ledger, guard).allocation;
        } catch (const Error& e) {
            fail(e.kind(), "two-player split of piece " + std::to_string(i) + " at depth " +
                               std::to_string(n) + ": " + e.what());
        }
        next.pieces[i] = split.pieces[0];
    }

    Piece taken;
    for (std::size_t i = 0; i <= n; ++i) taken = piece_union(taken, next.pieces[i]);
    next.pieces[newcomer] = piece_diff(cake, taken);

    // stage invariants: shrink, partition, both target inequalities
    for (std::size_t i = 0; i <= n; ++i) {
        if (!next.pieces[i].subset_of(state.pieces[i]))
            fail(ErrorKind::invariant_breach, "piece of player " + std::to_string(i) + " grew");
        double kept = stream.valuation(i).eval(next.pieces[i]);
        if (kept < scaled_entitlement(stream, i, newcomer) - tol.eps_fair)
            fail(ErrorKind::invariant_breach,
                 "player " + std::to_string(i) + " fell below its scaled entitlement");
        double ceded = v_new.eval(piece_diff(state.pieces[i], next.pieces[i]));
        if (ceded < v_new.eval(state.pieces[i]) * t_new - tol.eps_fair)
            fail(ErrorKind::invariant_breach,
                 "newcomer received too little from piece " + std::to_string(i));
    }
    if (!(state_cake(next) == cake))
        fail(ErrorKind::invariant_breach, "refinement stage is not an exact partition");
    return next;
}

namespace {

std::vector<CertificateRow> build_certificate(const PlayerStream& stream,
                                              const RefinementState& st, bool strict,
                                              const Tolerances& tol) {
    std::vector<CertificateRow> rows;
    for (std::size_t i = 0; i <= st.depth; ++i) {
        CertificateRow row;
        row.player = i;
        row.entitlement = stream.entitlement(i);
        row.scaled = scaled_entitlement(stream, i, st.depth);
        row.value = stream.valuation(i).eval(st.pieces[i]);
        row.slack = row.value - row.scaled;
        row.scale_margin = row.scaled - row.entitlement;
        row.strict_ok = row.value > row.entitlement + tol.eps_norm;
        rows.push_back(row);
        if (!strict && row.slack < -tol.eps_fair)
            fail(ErrorKind::invariant_breach,
                 "depth guarantee failed for player " + std::to_string(i));
        if (strict && !row.strict_ok)
            fail(ErrorKind::invariant_breach,
                 "strict mode did not clear the true entitlement of player " + std::to_string(i));
    }
    return rows;
}

InfiniteResult run_plain(const PlayerStream& stream, std::size_t depth, const Piece& cake,
                         QueryLedger& ledger, const Tolerances& tol) {
    InfiniteResult out;
    RefinementState st;
    st.depth = 0;
    st.pieces = {cake};
    out.history.push_back(st);
    for (std::size_t n = 0; n < depth; ++n) {
        st = refine_step(st, stream, ledger, tol);
        out.history.push_back(st);
    }
    out.state = std::move(st);
    return out;
}

// decorates a stream with two index overrides and a global rescale, which
// is how the split entitlements differ from the originals
PlayerStream overridden_stream(const PlayerStream& base, std::size_t j, double tj, std::size_t k,
                               double tk, double norm, const Piece& part, const Tolerances& tol) {
    auto ent = [&base, j, tj, k, tk, norm](std::size_t i) {
        double t = (i == j) ? tj : (i == k) ? tk : base.entitlement(i);
        return t / norm;
    };
    auto partial = [&base, j, tj, k, tk, norm](std::size_t n) {
        double p = base.partial_sum(n);
        if (j <= n) p += tj - base.entitlement(j);
        if (k <= n) p += tk - base.entitlement(k);
        return p / norm;
    };
    auto vals = [&base, part, tol](std::size_t i) {
        return restrict_normalize(base.valuation(i), part, Valuation::uniform(), tol);
    };
    return PlayerStream(ent, partial, vals, base.description());
}

} // namespace

InfiniteResult truncated_infinite_division(const PlayerStream& stream, std::size_t depth,
                                           bool strict, QueryLedger& ledger,
                                           const Tolerances& tol) {
    ensure_rows(ledger, depth + 1);
    if (!strict) {
        InfiniteResult out = run_plain(stream, depth, Piece::full(), ledger, tol);
        out.certificate = build_certificate(stream, out.state, false, tol);
        out.ledger = ledger;
        return out;
    }

    std::vector<Valuation> prefix;
    prefix.reserve(depth + 1);
    for (std::size_t i = 0; i <= depth; ++i) prefix.push_back(stream.valuation(i));
    auto sep = find_separating_piece(prefix, tol);
    if (!sep)
        fail(ErrorKind::all_identical,
             "all valuations in the truncated prefix are identical; strict mode impossible");

    const std::size_t j = sep->j, k = sep->k;
    const Piece c1 = sep->c_prime;
    const Piece c2 = piece_diff(Piece::full(), c1);
    const double tj = stream.entitlement(j), tk = stream.entitlement(k);
    const double aj = prefix[j].eval(c1), bj = prefix[j].eval(c2);
    const double ak = prefix[k].eval(c1), bk = prefix[k].eval(c2);
    auto [eps, delta] = choose_eps_delta(tj, tk, aj, bj, ak, bk, tol);

    // the s-value sums over all of N differ from 1 by finitely many terms
    const double norm1 = 1.0 - eps + delta * bk / ak;
    const double norm2 = 1.0 + eps * aj / bj - delta;
    PlayerStream left =
        overridden_stream(stream, j, tj - eps, k, tk + delta * bk / ak, norm1, c1, tol);
    PlayerStream right =
        overridden_stream(stream, j, tj + eps * aj / bj, k, tk - delta, norm2, c2, tol);

    InfiniteResult lres = run_plain(left, depth, c1, ledger, tol);
    InfiniteResult rres = run_plain(right, depth, c2, ledger, tol);

    InfiniteResult out;
    out.strict = true;
    for (std::size_t d = 0; d <= depth; ++d) {
        RefinementState merged;
        merged.depth = d;
        merged.pieces.resize(d + 1);
        for (std::size_t i = 0; i <= d; ++i)
            merged.pieces[i] =
                piece_union(lres.history[d].pieces[i], rres.history[d].pieces[i]);
        out.history.push_back(std::move(merged));
    }
    out.state = out.history.back();
    out.certificate = build_certificate(stream, out.state, true, tol);
    out.ledger = ledger;
    return out;
}

} // namespace cakediv
