#pragma once

// Independent brute-force and numeric oracles used to validate the closed
// forms, thresholds, and combinatorial counts of the main library.

#include <array>
#include <set>
#include <vector>

#include "tunnelcert/geom.hpp"
#include "tunnelcert/pattern.hpp"

namespace tunnelcert {

// Numerically integrates hyperbolic arclength ds = (Euclidean speed) / z
// along the geodesic between the two ball-boundary intersection points.
// On the semicircular arc parameterized by angle phi the integrand reduces
// to 1 / sin(phi); composite Simpson over `steps` intervals.
inline double numeric_geodesic_length(const Horoball& h1, const Horoball& h2,
                                      int steps) {
    if (steps < 1000)
        throw std::invalid_argument("numeric_geodesic_length: steps >= 1000");
    if (h1.at_infinity && h2.at_infinity)
        throw std::invalid_argument("numeric_geodesic_length: both at infinity");

    auto simpson = [steps](auto f, double lo, double hi) {
        const int n = steps % 2 ? steps + 1 : steps;
        const double h = (hi - lo) / n;
        double acc = f(lo) + f(hi);
        for (int i = 1; i < n; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
        return acc * h / 3.0;
    };

    if (h1.at_infinity || h2.at_infinity) {
        const Horoball& f = h1.at_infinity ? h2 : h1;
        const double top = 2.0 * f.radius;
        if (top > 1.0 + 1e-15)
            throw OverlappingBalls("numeric_geodesic_length: ball reaches past z=1");
        if (top >= 1.0) return 0.0;
        return simpson([](double z) { return 1.0 / z; }, top, 1.0);
    }

    const double r1 = h1.radius, r2 = h2.radius;
    const double sep = dist(h1.center, h2.center);
    const double tang = 2.0 * std::sqrt(r1 * r2);
    if (sep < tang - 1e-15)
        throw OverlappingBalls("numeric_geodesic_length: interiors overlap");
    if (sep <= tang) return 0.0;
    const double b = sep / 2.0;
    // boundary angles measured from the e2 side of the semicircle
    const double a1 = std::acos((b * b - r1 * r1) / (b * b + r1 * r1));
    const double a2 = std::acos((b * b - r2 * r2) / (b * b + r2 * r2));
    const double pi = std::acos(-1.0);
    return simpson([](double phi) { return 1.0 / std::sin(phi); }, a2, pi - a1);
}

enum class HexSymmetry {
    RotationOnly,
    Dihedral,                         // reflections keep edge orientations
    RotationPlusReversingReflection,  // reflections reverse edge orientations
    DihedralPlusGlobalReversal        // dihedral x global orientation flip
};

struct HexClasses {
    int count = 0;
    std::vector<unsigned> representatives;  // lexicographic-minimum bit masks
};

// Brute force over all 2^6 edge-orientation assignments of a hexagonal
// bracelet; orbits under the chosen symmetry group, with the minimum mask as
// each orbit's representative. Bit i of a mask is the orientation of edge i.
inline HexClasses hexagon_orientation_classes(HexSymmetry sym) {
    auto rotate = [](unsigned x, int k) {
        unsigned y = 0;
        for (int i = 0; i < 6; ++i)
            if (x >> ((i + k) % 6) & 1u) y |= 1u << i;
        return y;
    };
    auto reflect = [](unsigned x, int j) {
        unsigned y = 0;
        for (int i = 0; i < 6; ++i)
            if (x >> (((j - i) % 6 + 6) % 6) & 1u) y |= 1u << i;
        return y;
    };

    auto orbit_images = [&](unsigned x) {
        std::vector<unsigned> im;
        for (int k = 0; k < 6; ++k) im.push_back(rotate(x, k));
        switch (sym) {
            case HexSymmetry::RotationOnly:
                break;
            case HexSymmetry::Dihedral:
                for (int j = 0; j < 6; ++j) im.push_back(reflect(x, j));
                break;
            case HexSymmetry::RotationPlusReversingReflection:
                for (int j = 0; j < 6; ++j) im.push_back(reflect(x, j) ^ 0x3Fu);
                break;
            case HexSymmetry::DihedralPlusGlobalReversal: {
                for (int j = 0; j < 6; ++j) im.push_back(reflect(x, j));
                const size_t base = im.size();
                for (size_t t = 0; t < base; ++t) im.push_back(im[t] ^ 0x3Fu);
                break;
            }
        }
        return im;
    };

    HexClasses out;
    std::set<unsigned> reps;
    for (unsigned x = 0; x < 64; ++x) {
        unsigned rep = x;
        for (unsigned y : orbit_images(x)) rep = std::min(rep, y);
        reps.insert(rep);
    }
    out.representatives.assign(reps.begin(), reps.end());
    out.count = static_cast<int>(out.representatives.size());
    return out;
}

// The extremal blocked-4-bracelet configuration at geodesic length g:
// H_a, H_b of radius e^{-g}/2 carry the vertical beams; H_c of radius e^g/8
// sits between them; blocking balls H_e, H_f of radius 1/2 are tangent to
// H_c from either side. Feasible exactly when the balls H_a and H_e can be
// disjoint, which by the right angle at c requires g >= ln sqrt(2).
struct ExtremalFourBracelet {
    bool feasible = false;
    double slack = 0.0;  // d(a,e) minus the tangency distance of a and e
    Horoball a, b, c, e, f;
    double d_ac = 0.0, d_ce = 0.0, d_ae = 0.0;
};

inline ExtremalFourBracelet extremal_four_bracelet(double g) {
    if (g < 0.0 || g > std::log(2.0) + 1e-12)
        throw std::domain_error("extremal_four_bracelet: g must lie in [0, ln 2]");
    ExtremalFourBracelet x;
    const double s = std::exp(g / 2.0) / 2.0;
    const double r_ab = std::exp(-g) / 2.0;
    const double r_c = std::exp(g) / 8.0;
    x.a = Horoball::finite({-s, 0.0}, r_ab);
    x.b = Horoball::finite({s, 0.0}, r_ab);
    x.c = Horoball::finite({0.0, 0.0}, r_c);
    x.e = Horoball::finite({0.0, s}, 0.5);
    x.f = Horoball::finite({0.0, -s}, 0.5);
    x.d_ac = dist(x.a.center, x.c.center);
    x.d_ce = dist(x.c.center, x.e.center);
    x.d_ae = dist(x.a.center, x.e.center);
    x.slack = x.d_ae - 2.0 * std::sqrt(r_ab * 0.5);
    x.feasible = x.slack >= -1e-12;
    return x;
}

// The same configuration packaged as a ball-and-beam pattern on a large
// lattice, shifted into the fundamental domain, with the bracelet beams
// INF-a, a-c, c-b, INF-b and the blocking beam e-f.
inline BallBeamPattern extremal_pattern(double g) {
    const ExtremalFourBracelet x = extremal_four_bracelet(g);
    BallBeamPattern p;
    p.cusp_count = 1;
    p.orientable = true;
    p.lattice.t1 = {100.0, 0.0};
    p.lattice.t2 = {0.0, 100.0};
    p.g = g;
    p.epsilon = 1e-3;
    p.completeness_radius = std::exp(g) / 8.0;
    const Point2 shift{50.0, 50.0};
    auto add = [&p, shift](const char* id, const Horoball& h) {
        p.balls.push_back({id, Horoball::finite(h.center + shift, h.radius), 0});
    };
    add("a", x.a);
    add("b", x.b);
    add("c", x.c);
    add("e", x.e);
    add("f", x.f);
    auto vertical = [&p](const char* id) {
        BeamRef br;
        br.a.inf = true;
        br.b.ball = p.ball_index(id);
        p.beams.push_back(br);
    };
    auto finite = [&p](const char* u, const char* v) {
        BeamRef br;
        br.a.ball = p.ball_index(u);
        br.b.ball = p.ball_index(v);
        p.beams.push_back(br);
    };
    vertical("a");
    vertical("b");
    finite("a", "c");
    finite("c", "b");
    finite("e", "f");
    return p;
}

}  // namespace tunnelcert
