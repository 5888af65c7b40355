#include <doctest.h>

#include "tunnelcert/criteria.hpp"
#include "tunnelcert/oracle.hpp"

using namespace tunnelcert;

TEST_SUITE("oracle") {

TEST_CASE("numeric geodesic length") {
    SUBCASE("tangent balls") {
        CHECK(numeric_geodesic_length(Horoball::finite({0, 0}, 0.5),
                                      Horoball::finite({1, 0}, 0.5), 1000) == 0.0);
    }
    SUBCASE("quarter-radius pair gives ln 4") {
        const double len = numeric_geodesic_length(Horoball::finite({0, 0}, 0.25),
                                                   Horoball::finite({1, 0}, 0.25),
                                                   1000000);
        CHECK(std::abs(len - std::log(4.0)) < 1e-9);
    }
    SUBCASE("vertical ray to infinity") {
        const double len = numeric_geodesic_length(Horoball::finite({0, 0}, 0.25),
                                                   Horoball::infinity(), 100000);
        CHECK(std::abs(len - std::log(2.0)) < 1e-9);
    }
    SUBCASE("guards") {
        CHECK_THROWS_AS(numeric_geodesic_length(Horoball::finite({0, 0}, 0.25),
                                                Horoball::finite({0.1, 0}, 0.25), 1000),
                        OverlappingBalls);
        CHECK_THROWS_AS(numeric_geodesic_length(Horoball::finite({0, 0}, 0.25),
                                                Horoball::finite({2, 0}, 0.25), 10),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            numeric_geodesic_length(Horoball::infinity(), Horoball::infinity(), 1000),
            std::invalid_argument);
    }
    SUBCASE("convergence toward the closed form") {
        const Horoball a = Horoball::finite({0, 0}, 0.3);
        const Horoball b = Horoball::finite({2, 0}, 0.15);
        const double exact = beam_length(a, b);
        const double coarse = std::abs(numeric_geodesic_length(a, b, 1000) - exact);
        const double fine = std::abs(numeric_geodesic_length(a, b, 100000) - exact);
        CHECK(fine < coarse);
        CHECK(fine < 1e-10);
    }
}

TEST_CASE("hexagon orientation classes") {
    const HexClasses rot = hexagon_orientation_classes(HexSymmetry::RotationOnly);
    CHECK(rot.count == 14);
    const HexClasses dih = hexagon_orientation_classes(HexSymmetry::Dihedral);
    CHECK(dih.count == 13);
    // the variant whose reflections also reverse the edge orientations is
    // the one matching the count of nine
    const HexClasses rev =
        hexagon_orientation_classes(HexSymmetry::RotationPlusReversingReflection);
    CHECK(rev.count == 9);
    const HexClasses both =
        hexagon_orientation_classes(HexSymmetry::DihedralPlusGlobalReversal);
    CHECK(both.count == 8);

    for (const HexClasses* h : {&rot, &dih, &rev, &both}) {
        CHECK(h->representatives.size() == static_cast<size_t>(h->count));
        for (size_t i = 1; i < h->representatives.size(); ++i)
            CHECK(h->representatives[i - 1] < h->representatives[i]);
        for (unsigned r : h->representatives) CHECK(r < 64);
    }
    // the all-equal orientation is always its own class representative
    CHECK(rot.representatives.front() == 0u);
}

TEST_CASE("extremal 4-bracelet configuration") {
    const double t4 = 0.5 * std::log(2.0);
    SUBCASE("below the threshold the blocking balls cannot fit") {
        CHECK_FALSE(extremal_four_bracelet(0.3).feasible);
    }
    SUBCASE("above the threshold there is strict slack") {
        const ExtremalFourBracelet x = extremal_four_bracelet(0.4);
        CHECK(x.feasible);
        CHECK(x.slack > 1e-6);
    }
    SUBCASE("at the threshold the constraint is tight") {
        const ExtremalFourBracelet x = extremal_four_bracelet(t4);
        CHECK(x.feasible);
        CHECK(std::abs(x.slack) < 1e-12);
        CHECK(x.d_ae == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-12));
        CHECK(x.d_ce == doctest::Approx(std::pow(2.0, 0.25) / 2.0).epsilon(1e-12));
        CHECK(x.d_ac == doctest::Approx(std::pow(2.0, 0.25) / 2.0).epsilon(1e-12));
        // distances round-trip through the separation formula
        CHECK(beam_length(x.a, x.c) == doctest::Approx(t4).epsilon(1e-12));
        CHECK(beam_length(x.e, x.f) == doctest::Approx(t4).epsilon(1e-12));
        CHECK(balls_disjoint(x.c, x.e) == Disjointness::Tangent);
        CHECK(balls_disjoint(x.a, x.e) == Disjointness::Tangent);
    }
    SUBCASE("feasibility boundary sits at ln sqrt(2)") {
        double lo = 0.0, hi = std::log(2.0);
        REQUIRE_FALSE(extremal_four_bracelet(lo).feasible);
        REQUIRE(extremal_four_bracelet(hi).feasible);
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            (extremal_four_bracelet(mid).feasible ? hi : lo) = mid;
        }
        CHECK(std::abs(0.5 * (lo + hi) - t4) < 1e-9);
    }
    SUBCASE("domain guard") {
        CHECK_THROWS_AS(extremal_four_bracelet(-0.1), std::domain_error);
        CHECK_THROWS_AS(extremal_four_bracelet(1.0), std::domain_error);
    }
}

TEST_CASE("extremal configuration as a valid pattern") {
    for (double g : {0.5 * std::log(2.0), 0.4, 0.5, std::log(2.0)}) {
        const BallBeamPattern p = extremal_pattern(g);
        CHECK(validate_pattern(p).clean());
    }
}

}  // TEST_SUITE
