#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tunnelcert/blocking.hpp"
#include "tunnelcert/oracle.hpp"

using namespace tunnelcert;

namespace {

BallBeamPattern load_fixture(const char* name) {
    std::ifstream in(std::string(FIXTURE_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pattern(ss.str());
}

// wall over three small balls in a wide V, for hand-made crossing tests
Wall v_wall() {
    Wall w;
    w.verts = {{-1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}};
    w.radii = {0.1, 0.1, 0.1};
    for (int i = 0; i < 2; ++i)
        w.seg_arcs.push_back(beam_arc(Horoball::finite(w.verts[i], 0.1),
                                      Horoball::finite(w.verts[i + 1], 0.1)));
    return w;
}

}  // namespace

TEST_SUITE("blocking") {

TEST_CASE("wall envelope heights") {
    SUBCASE("hemisphere apex at a vertex") {
        // small well-separated balls: the apex 2r of the vertex ball is the
        // only contribution at a vertex
        const Wall w = v_wall();
        for (size_t i = 0; i < w.verts.size(); ++i) {
            const size_t seg = i == 0 ? 0 : i - 1;
            CHECK(wall_envelope_height(w, seg, w.verts[i]) ==
                  doctest::Approx(2.0 * w.radii[i]).epsilon(1e-12));
        }
        // when a neighbor's hemisphere reaches over a vertex the envelope is
        // the pointwise maximum, never below the vertex ball's own apex
        const BallBeamPattern p = load_fixture("five_bracelet.json");
        const std::vector<Bracelet> bl = enumerate_bracelets(p, 6, 2);
        REQUIRE(bl.size() == 1);
        const Wall fw = build_wall(bl[0], p);
        for (size_t i = 0; i < fw.verts.size(); ++i) {
            const size_t seg = i == 0 ? 0 : i - 1;
            CHECK(wall_envelope_height(fw, seg, fw.verts[i]) >=
                  2.0 * fw.radii[i] - 1e-12);
        }
    }
    SUBCASE("tangency point between equal half-radius balls") {
        Wall w;
        w.verts = {{0.0, 0.0}, {1.0, 0.0}};
        w.radii = {0.5, 0.5};
        w.seg_arcs.push_back(beam_arc(Horoball::finite({0, 0}, 0.5),
                                      Horoball::finite({1, 0}, 0.5)));
        CHECK(wall_envelope_height(w, 0, {0.5, 0.0}) ==
              doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("semicircle apex dominates between quarter-radius balls") {
        Wall w;
        w.verts = {{0.0, 0.0}, {1.0, 0.0}};
        w.radii = {0.25, 0.25};
        w.seg_arcs.push_back(beam_arc(Horoball::finite({0, 0}, 0.25),
                                      Horoball::finite({1, 0}, 0.25)));
        CHECK(wall_envelope_height(w, 0, {0.5, 0.0}) ==
              doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("puncture counting") {
    const Wall w = v_wall();
    SUBCASE("projection disjoint from the polyline") {
        const GeodesicArc arc = beam_arc(Horoball::finite({-1.0, 3.0}, 0.2),
                                         Horoball::finite({1.0, 3.0}, 0.2));
        const PunctureResult r = beam_punctures_wall(arc, w);
        CHECK_FALSE(r.indeterminate);
        CHECK(r.count == 0);
    }
    SUBCASE("double crossing with both endpoints on one side is even") {
        const GeodesicArc arc = beam_arc(Horoball::finite({-1.0, 0.9}, 0.1),
                                         Horoball::finite({1.0, 0.9}, 0.1));
        const PunctureResult r = beam_punctures_wall(arc, w);
        REQUIRE_FALSE(r.indeterminate);
        CHECK(r.count == 2);
    }
    SUBCASE("single transversal crossing is odd") {
        const GeodesicArc arc = beam_arc(Horoball::finite({0.2, -0.5}, 0.1),
                                         Horoball::finite({0.8, 1.0}, 0.1));
        const PunctureResult r = beam_punctures_wall(arc, w);
        REQUIRE_FALSE(r.indeterminate);
        CHECK(r.count == 1);
    }
    SUBCASE("tangency-point beam straddling a small wall ball") {
        // two tangent half-radius balls on either side of the wall, meeting
        // at height 1/2 directly over a small wall ball whose envelope tops
        // out at 0.2
        Wall low;
        low.verts = {{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}};
        low.radii = {0.1, 0.1, 0.1};
        for (int i = 0; i < 2; ++i)
            low.seg_arcs.push_back(beam_arc(Horoball::finite(low.verts[i], 0.1),
                                            Horoball::finite(low.verts[i + 1], 0.1)));
        const GeodesicArc arc = beam_arc(Horoball::finite({0.5, -0.5}, 0.5),
                                         Horoball::finite({0.5, 0.5}, 0.5));
        REQUIRE(arc.degenerate);
        const PunctureResult r = beam_punctures_wall(arc, low);
        REQUIRE_FALSE(r.indeterminate);
        CHECK(r.count == 1);
        REQUIRE(r.crossings.size() == 1);
        CHECK(r.crossings[0].height == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("span endpoint resting on the wall is indeterminate") {
        // right span endpoint of this beam projects onto the polyline
        const GeodesicArc arc = beam_arc(Horoball::finite({-2.5, 0.5}, 0.1),
                                         Horoball::finite({-0.4, 0.5}, 0.1));
        Wall flat;
        flat.verts = {{-0.5, 0.5}, {1.0, 0.5}};
        flat.radii = {0.1, 0.1};
        flat.seg_arcs.push_back(beam_arc(Horoball::finite(flat.verts[0], 0.1),
                                         Horoball::finite(flat.verts[1], 0.1)));
        const PunctureResult r = beam_punctures_wall(arc, flat);
        CHECK(r.indeterminate);
    }
    SUBCASE("vertical beam in the wall plane is indeterminate") {
        const GeodesicArc arc =
            beam_arc(Horoball::finite({0.5, 0.5}, 0.25), Horoball::infinity());
        const PunctureResult r = beam_punctures_wall(arc, v_wall());
        CHECK(r.indeterminate);
        const GeodesicArc off =
            beam_arc(Horoball::finite({0.5, 2.5}, 0.25), Horoball::infinity());
        CHECK_FALSE(beam_punctures_wall(off, v_wall()).indeterminate);
    }
}

TEST_CASE("extremal configuration is blocked through the middle vertex") {
    const double g = 0.5 * std::log(2.0);
    const BallBeamPattern p = extremal_pattern(g);
    REQUIRE(validate_pattern(p).clean());
    const std::vector<Bracelet> bl = enumerate_bracelets(p, 4, 2);
    REQUIRE(bl.size() == 1);
    REQUIRE(bl[0].n == 4);
    const BlockingResult r = find_blocking(bl[0], p, 2);
    REQUIRE(r.verdict == BlockVerdict::Blocked);
    REQUIRE(r.pair.has_value());
    CHECK(r.pair->larger_radius == 0.5);
    CHECK(r.pair->crossings.size() == 1);
    // the crossing happens over the small middle ball at semicircle height
    CHECK(r.pair->crossings[0].height ==
          doctest::Approx(std::exp(g / 2.0) / 2.0).epsilon(1e-12));
    CHECK(r.pair->crossings[0].envelope ==
          doctest::Approx(std::exp(g) / 4.0).epsilon(1e-12));
    CHECK(check_lemma34(bl[0], *r.pair, g));
}

TEST_CASE("square lattice bracelets are not blocked") {
    const BallBeamPattern p = load_fixture("square_lattice.json");
    const std::vector<Bracelet> bl = enumerate_bracelets(p, 4, 2);
    REQUIRE_FALSE(bl.empty());
    for (const Bracelet& b : bl) {
        const BlockingResult r = find_blocking(b, p, 2);
        CHECK(r.verdict == BlockVerdict::NotBlocked);
        CHECK(r.required_radius ==
              doctest::Approx((2.0 + std::sqrt(3.0)) * 0.5).epsilon(1e-12));
        CHECK(r.unconditional);
    }
}

TEST_CASE("a beamless ball near the wall does not block") {
    BallBeamPattern p = load_fixture("square_lattice.json");
    p.balls.push_back({"stray", Horoball::finite({0.5, 0.35}, 0.1), 0});
    REQUIRE(validate_pattern(p).clean());
    const std::vector<Bracelet> bl = enumerate_bracelets(p, 4, 2);
    bool checked = false;
    for (const Bracelet& b : bl) {
        if (b.chain.size() != 3) continue;
        if (b.chain[2].second != Offset{2, 0}) continue;
        const BlockingResult r = find_blocking(b, p, 2);
        CHECK(r.verdict == BlockVerdict::NotBlocked);
        checked = true;
    }
    CHECK(checked);
}

TEST_CASE("verdict invariant under lattice translation of the bracelet") {
    const BallBeamPattern p = extremal_pattern(0.5 * std::log(2.0));
    std::vector<Bracelet> bl = enumerate_bracelets(p, 4, 2);
    REQUIRE(bl.size() == 1);
    Bracelet moved = bl[0];
    for (auto& [bi, off] : moved.chain) {
        off[0] += 1;
        off[1] -= 1;
    }
    const BlockingResult a = find_blocking(bl[0], p, 2);
    const BlockingResult b = find_blocking(moved, p, 2);
    CHECK(a.verdict == b.verdict);
    REQUIRE(b.pair.has_value());
    CHECK(b.pair->larger_radius == a.pair->larger_radius);
}

TEST_CASE("minimum radius bound for blocking pairs") {
    Bracelet br;
    br.min_radius = std::sqrt(2.0) / 8.0;
    BlockingPair pair;
    SUBCASE("extremal radius satisfies the bound") {
        pair.larger_radius = 0.5;
        CHECK(check_lemma34(br, pair, 0.5 * std::log(2.0)));
    }
    SUBCASE("too small a radius fails the bound") {
        pair.larger_radius = 0.3;
        CHECK_FALSE(check_lemma34(br, pair, 0.5 * std::log(2.0)));
    }
    SUBCASE("at g = ln 2 the bound is just the smallest radius") {
        br.min_radius = 0.2;
        pair.larger_radius = 0.2;
        CHECK(check_lemma34(br, pair, std::log(2.0)));
        pair.larger_radius = 0.19;
        CHECK_FALSE(check_lemma34(br, pair, std::log(2.0)));
    }
}

}  // TEST_SUITE
