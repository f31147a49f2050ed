#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cakediv/instance.hpp"
#include "cakediv/query.hpp"

namespace cakediv {

// Parsed value of an entitlement entry. The grammar is
//   expr := atom | atom '-' atom
//   atom := decimal | int '/' int | 'sqrt' '(' int ')' [ '/' int ]
// evaluated in double precision; the exact rational form survives only for
// plain "p/q" spellings.
struct EntitlementValue {
    double value = 0.0;
    std::optional<RationalEntitlement> exact;
};

EntitlementValue parse_entitlement_expr(const std::string& text);

// On-disk instance: the problem plus its original entitlement spellings,
// kept so emit(parse(file)) reproduces the file.
struct InstanceFile {
    Instance instance;
    std::vector<std::string> entitlement_text; // "" for plain numbers
    std::optional<std::uint64_t> seed;
};

InstanceFile parse_instance_json(const nlohmann::json& j);
InstanceFile parse_instance(const std::string& path);
nlohmann::json emit_instance(const InstanceFile& file);

nlohmann::json piece_to_json(const Piece& p);
Piece piece_from_json(const nlohmann::json& j);

// Allocation verdicts are data, never exceptions; the verifier recomputes
// every value itself and never trusts solver-reported numbers.
struct Verdict {
    enum class Kind { fair, strongly_fair, violation };
    Kind kind = Kind::violation;
    double min_slack = 0.0;
    std::vector<std::string> violations;

    bool ok() const { return kind != Kind::violation; }
    std::string label() const;
};

Verdict verify_allocation(const Instance& inst, const std::vector<Piece>& pieces, bool strict,
                          const Piece& cake = Piece::full());

// Report file assembly; `trace` and `parameters` may be null.
nlohmann::json make_report(const Instance& inst, const Allocation& alloc, const Verdict& verdict,
                           const std::string& algorithm, const QueryLedger& ledger,
                           nlohmann::json parameters = nlohmann::json::object(),
                           nlohmann::json trace = nlohmann::json());

// Pieces as stored in a report, for re-verification.
std::vector<Piece> pieces_from_report(const nlohmann::json& report);

enum class EntitlementMode { rational, irrational, mixed };
EntitlementMode entitlement_mode_from_string(const std::string& s);

// Deterministic random instance: step-function densities of unit mass and
// entitlements in the requested style, normalized to sum 1.
InstanceFile generate_instance(std::size_t n, std::uint64_t seed, EntitlementMode mode,
                               std::size_t breakpoint_budget = 12,
                               std::uint64_t max_denominator = 50);

// Random unit-mass step density; breakpoints land on a centesimal grid so
// densities stay moderate.
Valuation random_valuation(std::mt19937_64& rng, std::size_t max_interior_breakpoints);

} // namespace cakediv
