#include <doctest.h>

#include <cmath>
#include <random>

#include "cakediv/algo1.hpp"
#include "cakediv/errors.hpp"
#include "cakediv/instance_io.hpp"
#include "oracles.hpp"

using namespace cakediv;

namespace {

Instance make_instance(std::vector<Valuation> vals, std::vector<double> ents) {
    Instance inst;
    inst.valuations = std::move(vals);
    inst.entitlements = std::move(ents);
    return inst;
}

void check_partition(const std::vector<Piece>& pieces, const Piece& cake) {
    Piece covered;
    for (const Piece& p : pieces) {
        CHECK(piece_intersect(covered, p).empty());
        covered = piece_union(covered, p);
    }
    CHECK(covered == cake);
}

} // namespace

TEST_CASE("round_up_to_rationals follows the floor construction") {
    auto out = round_up_to_rationals({0.3, 0.45});
    REQUIRE(out.size() == 2);
    CHECK(out[0].value == BigRat(2, 5));
    CHECK(out[1].value == BigRat(3, 5));
}

TEST_CASE("round_up_to_rationals single entry may return 1") {
    auto out = round_up_to_rationals({0.1});
    REQUIRE(out.size() == 1);
    CHECK(out[0].value == 1);
}

TEST_CASE("round_up_to_rationals with thin slack") {
    auto out = round_up_to_rationals({0.49, 0.49});
    REQUIRE(out.size() == 2);
    CHECK(out[0].value == BigRat(1, 2));
    CHECK(out[1].value == BigRat(1, 2));
    CHECK(out[0].to_double() > 0.49);
}

TEST_CASE("round_up_to_rationals rejects missing slack") {
    CHECK_THROWS_AS(round_up_to_rationals({0.6, 0.4}), Error);
    CHECK_THROWS_AS(round_up_to_rationals({0.7, 0.5}), Error);
    CHECK_THROWS_AS(round_up_to_rationals({0.5, -0.1}), Error);
}

TEST_CASE("round_up_to_rationals: strict dominance and exact sum on random inputs") {
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<std::size_t> nd(1, 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = nd(rng);
        std::vector<double> t(n);
        double sum = 0.0;
        for (double& x : t) {
            x = 0.01 + unit(rng);
            sum += x;
        }
        double target = 0.02 + 0.96 * unit(rng); // total strictly below 1
        for (double& x : t) x *= target / sum;
        auto out = round_up_to_rationals(t);
        BigRat total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(out[i].value > exact_rational(t[i]));
            total += out[i].value;
        }
        CHECK(total == 1);
    }
}

TEST_CASE("two players with irrational entitlements: elimination branch") {
    const double s = std::sqrt(2.0);
    Instance inst =
        make_instance({Valuation::uniform(), Valuation::uniform()}, {s - 1.0, 2.0 - s});
    QueryLedger ledger(2);
    Algo1Audit audit;
    Allocation alloc = algorithm_one(inst, Piece::full(), ledger, &audit);
    CHECK(alloc.pieces[0] == Piece::normalized({{0.0, s - 1.0}}));
    CHECK(alloc.pieces[1] == Piece::normalized({{s - 1.0, 1.0}}));
    CHECK(alloc.report[1].value == doctest::Approx(2.0 - s).epsilon(1e-12));
    CHECK(audit.branches == std::vector<char>{'b', '1'});
    CHECK(!audit.delegated);
}

TEST_CASE("single player gets the whole cake") {
    Instance inst = make_instance({Valuation::uniform()}, {1.0});
    QueryLedger ledger(1);
    Allocation alloc = algorithm_one(inst, Piece::full(), ledger);
    CHECK(alloc.pieces[0] == Piece::full());
}

TEST_CASE("three players reach the rational-rounding branch") {
    Instance inst = make_instance(
        {Valuation::uniform(), Valuation({0.0, 1.0 / 3.0, 1.0}, {3.0, 0.0}), Valuation::uniform()},
        {0.2, 0.3, 0.5});
    QueryLedger ledger(3);
    Algo1Audit audit;
    Allocation alloc = algorithm_one(inst, Piece::full(), ledger, &audit);
    CHECK(audit.delegated);
    REQUIRE(!audit.branches.empty());
    CHECK(audit.branches.front() == 'c');
    // the diminisher keeps the trimmed slice [0, 1/15) and tops up from the rest
    CHECK(alloc.pieces[1].contains(0.01));
    CHECK(inst.valuations[1].eval(piece_intersect(
              alloc.pieces[1], Piece::normalized({{0.0, 1.0 / 15.0}}))) ==
          doctest::Approx(0.2).epsilon(1e-9));
    check_partition(alloc.pieces, Piece::full());
    // rounding strictly dominates the targets, so the division is strongly
    // fair when this branch runs at the top level
    for (std::size_t i = 0; i < 3; ++i) CHECK(alloc.report[i].slack > 1e-12);
}

TEST_CASE("diminisher with a matching entitlement exits immediately") {
    Instance inst = make_instance(
        {Valuation::uniform(), Valuation({0.0, 0.5, 1.0}, {2.0, 0.0}), Valuation::uniform()},
        {0.2, 0.2, 0.6});
    QueryLedger ledger(3);
    Algo1Audit audit;
    Allocation alloc = algorithm_one(inst, Piece::full(), ledger, &audit);
    REQUIRE(!audit.branches.empty());
    CHECK(audit.branches.front() == 'k');
    CHECK(alloc.pieces[1] == Piece::normalized({{0.0, 0.1}}));
    CHECK(alloc.report[1].value == doctest::Approx(0.2).epsilon(1e-12));
    check_partition(alloc.pieces, Piece::full());
    for (std::size_t i = 0; i < 3; ++i) CHECK(alloc.report[i].slack >= -1e-9);
}

TEST_CASE("a full chain of diminishers charges one cut each") {
    Instance inst = make_instance({Valuation::uniform(), Valuation({0.0, 0.5, 1.0}, {2.0, 0.0}),
                                   Valuation({0.0, 0.25, 1.0}, {4.0, 0.0})},
                                  {0.3, 0.3, 0.4});
    QueryLedger ledger(3);
    Allocation alloc = algorithm_one(inst, Piece::full(), ledger);
    CHECK(ledger.cuts[1] >= 1);
    CHECK(ledger.cuts[2] >= 1);
    for (std::size_t i = 0; i < 3; ++i) CHECK(alloc.report[i].slack >= -1e-9);
}

TEST_CASE("fairness, partition and query audit on randomized instances") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<std::size_t> nd(1, 6);
    std::uniform_int_distribution<int> md(0, 2);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t n = nd(rng);
        auto mode = static_cast<EntitlementMode>(md(rng));
        InstanceFile file = generate_instance(n, rng(), mode, 8, 30);
        const Instance& inst = file.instance;
        QueryLedger ledger(n);
        Algo1Audit audit;
        Allocation alloc = algorithm_one(inst, Piece::full(), ledger, &audit);
        check_partition(alloc.pieces, Piece::full());
        for (std::size_t i = 0; i < n; ++i) CHECK(alloc.report[i].slack >= -1e-9);
        // trimming rounds stay quadratic; the cloning subroutine is excluded
        CHECK(audit.rounds <= n);
        CHECK(audit.queries_before_delegation <= 4 * static_cast<std::int64_t>(n * n) + 4);
    }
}

TEST_CASE("malformed instances are rejected") {
    Instance bad = make_instance({Valuation::uniform(), Valuation::uniform()}, {0.5, 0.6});
    QueryLedger ledger(2);
    CHECK_THROWS_AS(algorithm_one(bad, Piece::full(), ledger), Error);
    Instance ok = make_instance({Valuation::uniform()}, {1.0});
    CHECK_THROWS_AS(algorithm_one(ok, Piece{}, ledger), Error);
}
