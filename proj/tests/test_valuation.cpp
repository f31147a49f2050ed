#include <doctest.h>

#include <cmath>
#include <random>

#include "cakediv/errors.hpp"
#include "cakediv/valuation.hpp"
#include "oracles.hpp"

using namespace cakediv;

namespace {
const Valuation kLeftHeavy({0.0, 0.5, 1.0}, {2.0, 0.0}); // all mass on [0, 0.5)
}

TEST_CASE("construction validates shape, sign and mass") {
    CHECK_THROWS_AS(Valuation({0.0, 1.0}, {0.9}), Error);          // mass != 1
    CHECK_THROWS_AS(Valuation({0.0, 0.5, 1.0}, {2.0, -0.1}), Error);
    CHECK_THROWS_AS(Valuation({0.0, 0.5}, {2.0}), Error);          // does not end at 1
    CHECK_THROWS_AS(Valuation({0.0, 0.5, 0.5, 1.0}, {1.0, 1.0, 1.0}), Error);
}

TEST_CASE("eval on intervals") {
    CHECK(Valuation::uniform().eval(Piece::normalized({{0.0, 0.5}})) == doctest::Approx(0.5));
    CHECK(kLeftHeavy.eval(Piece::normalized({{0.0, 0.25}})) == doctest::Approx(0.5));
    CHECK(Valuation::uniform().eval(Piece::full()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eval straddling a density step matches the Riemann oracle") {
    Piece s = Piece::normalized({{0.25, 0.75}});
    double direct = kLeftHeavy.eval(s);
    CHECK(direct == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(direct - oracles::riemann_eval(kLeftHeavy, s)) < 1e-6);
}

TEST_CASE("cut_prefix basics") {
    CHECK(Valuation::uniform().cut_prefix(Piece::full(), 0.25) ==
          Piece::normalized({{0.0, 0.25}}));
    CHECK(kLeftHeavy.cut_prefix(Piece::full(), 0.0).empty());
    // solve 2 (x - 0.25) = 0.3 inside [0.25, 1)
    Piece s = Piece::normalized({{0.25, 1.0}});
    Piece cut = kLeftHeavy.cut_prefix(s, 0.3);
    REQUIRE(cut.size() == 1);
    CHECK(cut.intervals()[0].lo == doctest::Approx(0.25));
    CHECK(cut.intervals()[0].hi == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(kLeftHeavy.eval(cut) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("cut_prefix stays leftmost across zero-density spans") {
    // mass exhausted at 0.5; the zero-density tail must not be included
    Piece cut = kLeftHeavy.cut_prefix(Piece::full(), 1.0);
    CHECK(cut == Piece::normalized({{0.0, 0.5}}));
}

TEST_CASE("cut_prefix error paths") {
    CHECK_THROWS_AS(Valuation::uniform().cut_prefix(Piece::full(), -0.1), Error);
    CHECK_THROWS_AS(Valuation::uniform().cut_prefix(Piece::normalized({{0.0, 0.5}}), 0.7), Error);
    // within eps of the total is clamped, not an error
    Piece s = Piece::normalized({{0.0, 0.5}});
    CHECK(Valuation::uniform().cut_prefix(s, 0.5 + 1e-12) == s);
}

TEST_CASE("cut/eval round trip, subset and monotonicity on random inputs") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        Valuation v = oracles::random_valuation(rng);
        Piece s = oracles::random_piece(rng);
        double total = v.eval(s);
        double a1 = unit(rng) * total;
        double a2 = unit(rng) * total;
        if (a1 > a2) std::swap(a1, a2);
        Piece c1 = v.cut_prefix(s, a1);
        Piece c2 = v.cut_prefix(s, a2);
        CHECK(std::abs(v.eval(c1) - a1) < 1e-10);
        CHECK(std::abs(v.eval(c2) - a2) < 1e-10);
        CHECK(c1.subset_of(s));
        CHECK(c1.subset_of(c2));
    }
}

TEST_CASE("measure additivity over disjoint pieces") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Valuation v = oracles::random_valuation(rng);
        Piece a = oracles::random_piece(rng);
        Piece b = piece_diff(oracles::random_piece(rng), a);
        double lhs = v.eval(piece_union(a, b));
        CHECK(std::abs(lhs - (v.eval(a) + v.eval(b))) < 2e-12);
    }
}

TEST_CASE("restrict_normalize conditions the measure") {
    Piece half = Piece::normalized({{0.0, 0.5}});
    Valuation r = restrict_normalize(Valuation::uniform(), half, Valuation::uniform());
    CHECK(r.eval(half) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.eval(piece_diff(Piece::full(), half)) == doctest::Approx(0.0));
    CHECK(r.density_at(0.25) == doctest::Approx(2.0));

    // restriction across a density step: 2 on [0,0.5) scaled by mass 0.5
    Piece window = Piece::normalized({{0.25, 0.75}});
    Valuation r2 = restrict_normalize(kLeftHeavy, window, Valuation::uniform());
    CHECK(r2.density_at(0.3) == doctest::Approx(4.0));
    CHECK(r2.density_at(0.6) == doctest::Approx(0.0));
    CHECK(r2.eval(window) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("restrict_normalize falls back when the piece carries no mass") {
    Valuation right_heavy({0.0, 0.5, 1.0}, {0.0, 2.0});
    Piece half = Piece::normalized({{0.0, 0.5}});
    Valuation r = restrict_normalize(right_heavy, half, Valuation::uniform());
    CHECK(r.eval(half) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.density_at(0.25) == doctest::Approx(2.0)); // uniform-on-half
    CHECK_THROWS_AS(restrict_normalize(right_heavy, Piece{}, Valuation::uniform()), Error);
}

TEST_CASE("restriction properties on random inputs") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        Valuation v = oracles::random_valuation(rng);
        Piece s = oracles::random_piece(rng);
        if (s.empty()) continue;
        Valuation r = restrict_normalize(v, s, Valuation::uniform());
        CHECK(std::abs(r.eval(s) - 1.0) < 1e-12);
        CHECK(std::abs(r.eval(piece_diff(Piece::full(), s))) < 1e-12);
    }
}
