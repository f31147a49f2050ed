#include "cakediv/instance_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "cakediv/errors.hpp"

namespace cakediv {

namespace {

[[noreturn]] void bad_expr(const std::string& text, const std::string& why) {
    fail(ErrorKind::io_error, "entitlement expression '" + text + "': " + why);
}

struct ExprCursor {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool eat_word(const std::string& w) {
        skip_ws();
        if (s.compare(pos, w.size(), w) == 0) {
            pos += w.size();
            return true;
        }
        return false;
    }
    std::string number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) {
            ++pos;
        }
        if (start == pos) bad_expr(s, "expected a number at position " + std::to_string(start));
        return s.substr(start, pos - start);
    }
    bool done() {
        skip_ws();
        return pos == s.size();
    }
};

bool is_integer_literal(const std::string& num) {
    return !num.empty() && num.find('.') == std::string::npos;
}

// atom := decimal | int '/' int | 'sqrt' '(' int ')' [ '/' int ]
EntitlementValue parse_atom(ExprCursor& cur) {
    EntitlementValue out;
    if (cur.eat_word("sqrt")) {
        if (!cur.eat('(')) bad_expr(cur.s, "expected '(' after sqrt");
        std::string arg = cur.number();
        if (!cur.eat(')')) bad_expr(cur.s, "expected ')'");
        double k = std::stod(arg);
        double m = 1.0;
        if (cur.eat('/')) m = std::stod(cur.number());
        if (m == 0.0) bad_expr(cur.s, "division by zero");
        out.value = std::sqrt(k) / m;
        return out;
    }
    std::string first = cur.number();
    if (cur.eat('/')) {
        std::string second = cur.number();
        double den = std::stod(second);
        if (den == 0.0) bad_expr(cur.s, "division by zero");
        out.value = std::stod(first) / den;
        if (is_integer_literal(first) && is_integer_literal(second))
            out.exact = RationalEntitlement(BigInt(first), BigInt(second));
        return out;
    }
    out.value = std::stod(first);
    return out;
}

} // namespace

EntitlementValue parse_entitlement_expr(const std::string& text) {
    ExprCursor cur{text};
    EntitlementValue left = parse_atom(cur);
    if (cur.eat('-')) {
        EntitlementValue right = parse_atom(cur);
        left.value -= right.value;
        left.exact.reset(); // exactness is reserved for plain p/q
    }
    if (!cur.done()) bad_expr(text, "trailing characters");
    if (!(left.value > 0.0))
        fail(ErrorKind::malformed_instance, "entitlement '" + text + "' is not positive");
    return left;
}

namespace {
InstanceFile parse_instance_impl(const nlohmann::json& j);
} // namespace

InstanceFile parse_instance_json(const nlohmann::json& j) {
    try {
        return parse_instance_impl(j);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::io_error, std::string("schema violation: ") + e.what());
    }
}

namespace {
InstanceFile parse_instance_impl(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("players") || !j["players"].is_array())
        fail(ErrorKind::io_error, "instance file must be an object with a 'players' array");

    InstanceFile out;
    if (j.contains("seed")) out.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (t.contains("eq")) out.instance.tol.eps_eq = t["eq"].get<double>();
        if (t.contains("fair")) out.instance.tol.eps_fair = t["fair"].get<double>();
        if (t.contains("norm")) out.instance.tol.eps_norm = t["norm"].get<double>();
        out.instance.tol.validate();
    }

    const auto& players = j["players"];
    for (std::size_t i = 0; i < players.size(); ++i) {
        const std::string where = "players[" + std::to_string(i) + "]";
        const auto& p = players[i];
        if (!p.is_object() || !p.contains("entitlement") || !p.contains("valuation"))
            fail(ErrorKind::io_error, where + " needs 'entitlement' and 'valuation'");

        EntitlementValue ent;
        if (p["entitlement"].is_string()) {
            out.entitlement_text.push_back(p["entitlement"].get<std::string>());
            ent = parse_entitlement_expr(out.entitlement_text.back());
        } else if (p["entitlement"].is_number()) {
            out.entitlement_text.emplace_back();
            ent.value = p["entitlement"].get<double>();
            if (!(ent.value > 0.0))
                fail(ErrorKind::malformed_instance, where + ".entitlement is not positive");
        } else {
            fail(ErrorKind::io_error, where + ".entitlement must be a number or string");
        }

        const auto& v = p["valuation"];
        if (!v.is_object() || !v.contains("breakpoints") || !v.contains("densities"))
            fail(ErrorKind::io_error, where + ".valuation needs 'breakpoints' and 'densities'");
        std::vector<double> xs, ds;
        try {
            xs = v["breakpoints"].get<std::vector<double>>();
            ds = v["densities"].get<std::vector<double>>();
        } catch (const nlohmann::json::exception&) {
            fail(ErrorKind::io_error, where + ".valuation arrays must be numeric");
        }
        try {
            out.instance.valuations.emplace_back(std::move(xs), std::move(ds),
                                                 out.instance.tol);
        } catch (const Error& e) {
            fail(e.kind(), where + ".valuation: " + e.what());
        }
        out.instance.entitlements.push_back(ent.value);
        out.instance.exact.push_back(std::move(ent.exact));
    }

    out.instance.validate();
    return out;
}
} // namespace

InstanceFile parse_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io_error, "cannot open instance file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::io_error, std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return parse_instance_json(j);
}

nlohmann::json emit_instance(const InstanceFile& file) {
    nlohmann::json j;
    j["format"] = 1;
    if (file.seed) j["seed"] = *file.seed;
    j["players"] = nlohmann::json::array();
    for (std::size_t i = 0; i < file.instance.size(); ++i) {
        nlohmann::json p;
        if (i < file.entitlement_text.size() && !file.entitlement_text[i].empty())
            p["entitlement"] = file.entitlement_text[i];
        else
            p["entitlement"] = file.instance.entitlements[i];
        p["valuation"] = {{"breakpoints", file.instance.valuations[i].breakpoints()},
                          {"densities", file.instance.valuations[i].densities()}};
        j["players"].push_back(std::move(p));
    }
    return j;
}

nlohmann::json piece_to_json(const Piece& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Interval& iv : p.intervals()) arr.push_back({iv.lo, iv.hi});
    return arr;
}

Piece piece_from_json(const nlohmann::json& j) {
    if (!j.is_array()) fail(ErrorKind::io_error, "piece must be an array of [lo,hi] pairs");
    std::vector<Interval> raw;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2)
            fail(ErrorKind::io_error, "piece entries must be [lo,hi] pairs");
        raw.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return Piece::normalized(std::move(raw));
}

std::string Verdict::label() const {
    switch (kind) {
    case Kind::fair: return "fair";
    case Kind::strongly_fair: return "strongly-fair";
    default: return "violation";
    }
}

Verdict verify_allocation(const Instance& inst, const std::vector<Piece>& pieces, bool strict,
                          const Piece& cake) {
    Verdict v;
    if (pieces.size() != inst.size()) {
        v.violations.push_back("piece count does not match player count");
        return v;
    }

    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (!pieces[i].subset_of(cake))
            v.violations.push_back("piece of player " + std::to_string(i) + " leaves the cake");

    Piece covered;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!piece_intersect(covered, pieces[i]).empty()) {
            v.violations.push_back("piece of player " + std::to_string(i) +
                                   " overlaps an earlier piece");
        }
        covered = piece_union(covered, pieces[i]);
    }
    if (!(covered == cake))
        v.violations.push_back("pieces do not partition the cake exactly");

    v.min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        double value = inst.valuations[i].eval(pieces[i]);
        double slack = value - inst.entitlements[i];
        v.min_slack = std::min(v.min_slack, slack);
        if (strict ? !(slack > inst.tol.eps_norm) : !(slack >= -inst.tol.eps_fair)) {
            std::ostringstream os;
            os << "player " << i << " got " << value << " against entitlement "
               << inst.entitlements[i] << (strict ? " (not strictly above)" : "");
            v.violations.push_back(os.str());
        }
    }

    if (!v.violations.empty()) {
        v.kind = Verdict::Kind::violation;
    } else if (v.min_slack > inst.tol.eps_norm) {
        v.kind = Verdict::Kind::strongly_fair;
    } else {
        v.kind = Verdict::Kind::fair;
    }
    return v;
}

nlohmann::json make_report(const Instance& inst, const Allocation& alloc, const Verdict& verdict,
                           const std::string& algorithm, const QueryLedger& ledger,
                           nlohmann::json parameters, nlohmann::json trace) {
    nlohmann::json j;
    j["format"] = 1;
    j["algorithm"] = algorithm;
    if (!parameters.is_null() && !parameters.empty()) j["parameters"] = std::move(parameters);
    j["players"] = nlohmann::json::array();
    for (std::size_t i = 0; i < inst.size(); ++i) {
        j["players"].push_back({{"piece", piece_to_json(alloc.pieces[i])},
                                {"value", alloc.report[i].value},
                                {"entitlement", alloc.report[i].entitlement},
                                {"slack", alloc.report[i].slack}});
    }
    j["queries"] = {{"evals", ledger.evals}, {"cuts", ledger.cuts}};
    if (verdict.kind == Verdict::Kind::violation)
        j["verdict"] = {{"violation", verdict.violations}};
    else
        j["verdict"] = verdict.label();
    j["min_slack"] = verdict.min_slack;
    if (!trace.is_null()) j["trace"] = std::move(trace);
    return j;
}

std::vector<Piece> pieces_from_report(const nlohmann::json& report) {
    if (!report.contains("players") || !report["players"].is_array())
        fail(ErrorKind::io_error, "report file has no 'players' array");
    std::vector<Piece> pieces;
    for (const auto& p : report["players"]) {
        if (!p.contains("piece")) fail(ErrorKind::io_error, "report player entry has no 'piece'");
        pieces.push_back(piece_from_json(p["piece"]));
    }
    return pieces;
}

EntitlementMode entitlement_mode_from_string(const std::string& s) {
    if (s == "rational") return EntitlementMode::rational;
    if (s == "irrational") return EntitlementMode::irrational;
    if (s == "mixed") return EntitlementMode::mixed;
    fail(ErrorKind::io_error, "unknown entitlement mode: " + s);
}

Valuation random_valuation(std::mt19937_64& rng, std::size_t max_interior_breakpoints) {
    std::uniform_int_distribution<std::size_t> count_dist(0, max_interior_breakpoints);
    std::size_t interior = count_dist(rng);

    // centesimal grid keeps cells at least 0.01 wide
    std::vector<int> ticks;
    std::uniform_int_distribution<int> tick_dist(1, 99);
    while (ticks.size() < interior) {
        int t = tick_dist(rng);
        if (std::find(ticks.begin(), ticks.end(), t) == ticks.end()) ticks.push_back(t);
    }
    std::sort(ticks.begin(), ticks.end());

    std::vector<double> xs{0.0};
    for (int t : ticks) xs.push_back(t / 100.0);
    xs.push_back(1.0);

    std::uniform_real_distribution<double> weight(0.2, 2.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<double> ds(xs.size() - 1, 0.0);
    double mass = 0.0;
    for (std::size_t j = 0; j < ds.size(); ++j) {
        ds[j] = coin(rng) < 0.15 ? 0.0 : weight(rng);
        mass += ds[j] * (xs[j + 1] - xs[j]);
    }
    if (mass == 0.0) {
        ds[0] = 1.0;
        mass = xs[1] - xs[0];
    }
    for (double& d : ds) d /= mass;
    return Valuation(std::move(xs), std::move(ds));
}

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

InstanceFile generate_instance(std::size_t n, std::uint64_t seed, EntitlementMode mode,
                               std::size_t breakpoint_budget, std::uint64_t max_denominator) {
    if (n == 0) fail(ErrorKind::malformed_instance, "need at least one player");
    std::mt19937_64 rng(seed);

    InstanceFile out;
    out.seed = seed;
    for (std::size_t i = 0; i < n; ++i)
        out.instance.valuations.push_back(random_valuation(rng, breakpoint_budget));

    auto push_text = [&](const std::string& text) {
        EntitlementValue ent = parse_entitlement_expr(text);
        out.entitlement_text.push_back(text);
        out.instance.entitlements.push_back(ent.value);
        out.instance.exact.push_back(std::move(ent.exact));
    };
    auto push_number = [&](double v) {
        // round-trip through the decimal spelling the file will carry
        double stored = std::stod(format_double(v));
        out.entitlement_text.emplace_back();
        out.instance.entitlements.push_back(stored);
        out.instance.exact.emplace_back();
    };

    if (n == 1) {
        if (mode == EntitlementMode::rational) push_text("1/1");
        else push_number(1.0);
        out.instance.validate();
        return out;
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    switch (mode) {
    case EntitlementMode::rational: {
        std::uniform_int_distribution<std::uint64_t> qd(std::max<std::uint64_t>(n, 2),
                                                        std::max<std::uint64_t>(n, max_denominator));
        std::uint64_t q = qd(rng);
        // composition of q into n positive parts
        std::vector<std::uint64_t> cuts{0, q};
        std::uniform_int_distribution<std::uint64_t> cd(1, q - 1);
        while (cuts.size() < n + 1) {
            std::uint64_t c = cd(rng);
            if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t p = cuts[i + 1] - cuts[i];
            push_text(std::to_string(p) + "/" + std::to_string(q));
        }
        break;
    }
    case EntitlementMode::irrational: {
        // quadratic surds for all but the last player, remainder as decimal
        std::vector<double> raw(n);
        double rsum = 0.0;
        for (double& w : raw) {
            w = 0.5 + unit(rng);
            rsum += w;
        }
        static constexpr int nonsquares[] = {2, 3, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15};
        std::uniform_int_distribution<std::size_t> si(0, std::size(nonsquares) - 1);
        double used = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double target = 0.9 * raw[i] / rsum;
            int k = nonsquares[si(rng)];
            auto m = static_cast<std::uint64_t>(std::ceil(std::sqrt(double(k)) / target));
            push_text("sqrt(" + std::to_string(k) + ")/" + std::to_string(m));
            used += out.instance.entitlements.back();
        }
        push_number(1.0 - used);
        break;
    }
    case EntitlementMode::mixed: {
        // a rational block over a common denominator, decimals for the rest
        std::size_t rational_count = std::max<std::size_t>(1, n / 2);
        std::uniform_int_distribution<std::uint64_t> qd(20, std::max<std::uint64_t>(21, max_denominator));
        std::uint64_t q = qd(rng);
        std::uint64_t budget = 0;
        std::uniform_int_distribution<std::uint64_t> pd(1, std::max<std::uint64_t>(1, q / (2 * n)));
        for (std::size_t i = 0; i < rational_count; ++i) {
            std::uint64_t p = pd(rng);
            push_text(std::to_string(p) + "/" + std::to_string(q));
            budget += p;
        }
        double leftover = 1.0 - static_cast<double>(budget) / static_cast<double>(q);
        std::size_t rest = n - rational_count;
        std::vector<double> raw(rest);
        double rsum = 0.0;
        for (double& w : raw) {
            w = 0.5 + unit(rng);
            rsum += w;
        }
        double used = 0.0;
        for (std::size_t i = 0; i + 1 < rest; ++i) {
            double v = leftover * raw[i] / rsum;
            push_number(v);
            used += out.instance.entitlements.back();
        }
        push_number(leftover - used);
        break;
    }
    }

    out.instance.validate();
    return out;
}

} // namespace cakediv
