#include <doctest.h>

#include <cmath>
#include <random>

#include "cakediv/errors.hpp"
#include "cakediv/instance_io.hpp"

using namespace cakediv;

TEST_CASE("entitlement grammar: exact rationals") {
    EntitlementValue e = parse_entitlement_expr("1/3");
    CHECK(e.value == doctest::Approx(1.0 / 3));
    REQUIRE(e.exact.has_value());
    CHECK(e.exact->num() == 1);
    CHECK(e.exact->den() == 3);
    CHECK(parse_entitlement_expr("4/12").exact->den() == 3); // reduced
}

TEST_CASE("entitlement grammar: surds and differences") {
    CHECK(parse_entitlement_expr("sqrt(2)/2").value ==
          doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
    CHECK(!parse_entitlement_expr("sqrt(2)/2").exact.has_value());
    CHECK(parse_entitlement_expr("1 - sqrt(2)/2").value ==
          doctest::Approx(1.0 - std::sqrt(2.0) / 2).epsilon(1e-15));
    CHECK(parse_entitlement_expr("0.25").value == 0.25);
    CHECK(!parse_entitlement_expr("0.25").exact.has_value());
    CHECK(parse_entitlement_expr("sqrt(9)").value == doctest::Approx(3.0));
}

TEST_CASE("entitlement grammar: rejects") {
    CHECK_THROWS_AS(parse_entitlement_expr("abc"), Error);
    CHECK_THROWS_AS(parse_entitlement_expr("1/0"), Error);
    CHECK_THROWS_AS(parse_entitlement_expr(""), Error);
    CHECK_THROWS_AS(parse_entitlement_expr("1/3 extra"), Error);
    CHECK_THROWS_AS(parse_entitlement_expr("0.5 - 0.5"), Error); // not positive
}

TEST_CASE("instance parsing happy path with exact flags") {
    nlohmann::json j = {
        {"players",
         {{{"entitlement", "1/3"},
           {"valuation", {{"breakpoints", {0.0, 1.0}}, {"densities", {1.0}}}}},
          {{"entitlement", "2/3"},
           {"valuation", {{"breakpoints", {0.0, 1.0}}, {"densities", {1.0}}}}}}}};
    InstanceFile file = parse_instance_json(j);
    CHECK(file.instance.size() == 2);
    CHECK(file.instance.all_rational());
    CHECK(file.instance.entitlements[0] == doctest::Approx(1.0 / 3));
}

TEST_CASE("irrational expressions sum to one within tolerance") {
    nlohmann::json j = {
        {"players",
         {{{"entitlement", "sqrt(2)/2"},
           {"valuation", {{"breakpoints", {0.0, 1.0}}, {"densities", {1.0}}}}},
          {{"entitlement", "1 - sqrt(2)/2"},
           {"valuation", {{"breakpoints", {0.0, 1.0}}, {"densities", {1.0}}}}}}}};
    InstanceFile file = parse_instance_json(j);
    CHECK(!file.instance.all_rational());
    double sum = file.instance.entitlements[0] + file.instance.entitlements[1];
    CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("bad densities are rejected with the player named") {
    nlohmann::json j = {
        {"players",
         {{{"entitlement", 1.0},
           {"valuation", {{"breakpoints", {0.0, 1.0}}, {"densities", {0.9}}}}}}}};
    try {
        parse_instance_json(j);
        FAIL("expected a valuation error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("players[0]") != std::string::npos);
    }
}

TEST_CASE("emit then parse is the identity on generated files") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        InstanceFile file = generate_instance(4, seed, EntitlementMode::mixed);
        nlohmann::json a = emit_instance(file);
        InstanceFile reparsed = parse_instance_json(a);
        nlohmann::json b = emit_instance(reparsed);
        CHECK(a.dump() == b.dump());
    }
}

TEST_CASE("generator is deterministic in the seed") {
    nlohmann::json a = emit_instance(generate_instance(3, 7, EntitlementMode::rational));
    nlohmann::json b = emit_instance(generate_instance(3, 7, EntitlementMode::rational));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("rational mode carries exact forms everywhere") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        InstanceFile file = generate_instance(1 + seed % 6, seed, EntitlementMode::rational);
        CHECK(file.instance.all_rational());
    }
}

TEST_CASE("generated instances always validate") {
    std::mt19937_64 rng(246);
    for (int trial = 0; trial < 1000; ++trial) {
        auto mode = static_cast<EntitlementMode>(trial % 3);
        InstanceFile file = generate_instance(1 + rng() % 6, rng(), mode);
        CHECK_NOTHROW(file.instance.validate());
        // and the emitted file parses back to a valid instance
        CHECK_NOTHROW(parse_instance_json(emit_instance(file)));
    }
}

TEST_CASE("verifier flags unfair and malformed allocations") {
    InstanceFile file = generate_instance(2, 9, EntitlementMode::mixed);
    const Instance& inst = file.instance;

    // empty piece for a positive entitlement
    Verdict v = verify_allocation(inst, {Piece{}, Piece::full()}, false);
    CHECK(v.kind == Verdict::Kind::violation);
    CHECK(!v.violations.empty());

    // overlapping pieces
    v = verify_allocation(inst, {Piece::full(), Piece::full()}, false);
    CHECK(v.kind == Verdict::Kind::violation);

    // coverage gap
    v = verify_allocation(
        inst, {Piece::normalized({{0.0, 0.4}}), Piece::normalized({{0.5, 1.0}})}, false);
    CHECK(v.kind == Verdict::Kind::violation);
}

TEST_CASE("verifier accepts a hand-built fair split") {
    nlohmann::json j = {
        {"players",
         {{{"entitlement", 0.5},
           {"valuation", {{"breakpoints", {0.0, 1.0}}, {"densities", {1.0}}}}},
          {{"entitlement", 0.5},
           {"valuation", {{"breakpoints", {0.0, 0.5, 1.0}}, {"densities", {0.5, 1.5}}}}}}}};
    InstanceFile file = parse_instance_json(j);
    std::vector<Piece> pieces{Piece::normalized({{0.0, 0.5}}), Piece::normalized({{0.5, 1.0}})};
    Verdict v = verify_allocation(file.instance, pieces, false);
    CHECK(v.kind == Verdict::Kind::fair); // player 0 sits exactly at its entitlement
    CHECK(v.min_slack == doctest::Approx(0.0));
    CHECK(verify_allocation(file.instance, pieces, true).kind == Verdict::Kind::violation);
}

TEST_CASE("piece json round trip") {
    Piece p = Piece::normalized({{0.0, 0.25}, {0.5, 0.75}});
    CHECK(piece_from_json(piece_to_json(p)) == p);
}
