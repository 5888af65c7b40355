#pragma once

// Closed-form hyperbolic geometry of horoballs and geodesic arcs in the
// upper half-space model, normalized so the ball at infinity is the
// half-space above the Euclidean plane z = 1.

#include <cmath>
#include <stdexcept>
#include <string>

namespace tunnelcert {

inline constexpr double kDefaultTol = 1e-9;

struct OverlappingBalls : std::domain_error {
    using std::domain_error::domain_error;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

// A horoball: either a Euclidean ball tangent to the boundary plane, or the
// half-space above z = 1 (the ball at infinity).
struct Horoball {
    bool at_infinity = false;
    Point2 center{};
    double radius = 0.0;  // Euclidean radius; meaningful only when finite

    static Horoball infinity() {
        Horoball h;
        h.at_infinity = true;
        return h;
    }

    static Horoball finite(Point2 c, double r) {
        if (!(r > 0.0) || r > 0.5 + 1e-12)
            throw std::invalid_argument("horoball radius must lie in (0, 1/2], got " +
                                        std::to_string(r));
        Horoball h;
        h.center = c;
        h.radius = r;
        return h;
    }
};

// Hyperbolic length of a vertical segment between heights z1 >= z2 > 0.
inline double vertical_distance(double z1, double z2) {
    if (!(z2 > 0.0) || !(z1 > 0.0))
        throw std::domain_error("vertical_distance: heights must be positive");
    if (z1 < z2)
        throw std::domain_error("vertical_distance: requires z1 >= z2");
    return std::log(z1 / z2);
}

// Length of the geodesic segment between the boundaries of two disjoint
// horoballs: g = ln(b^2 / (r1 r2)) with b half the center separation, or
// g = -ln(2r) against the ball at infinity. Values within tol of zero are
// collapsed to exact tangency.
inline double beam_length(const Horoball& h1, const Horoball& h2, double tol = kDefaultTol) {
    if (h1.at_infinity && h2.at_infinity)
        throw std::invalid_argument("beam_length: both horoballs at infinity");
    double g;
    if (h1.at_infinity || h2.at_infinity) {
        const Horoball& f = h1.at_infinity ? h2 : h1;
        g = -std::log(2.0 * f.radius);
    } else {
        const double b = dist(h1.center, h2.center) / 2.0;
        if (b == 0.0) throw OverlappingBalls("beam_length: coincident centers");
        g = std::log(b * b / (h1.radius * h2.radius));
    }
    if (g < -tol) throw OverlappingBalls("beam_length: horoball interiors overlap");
    return g < tol ? 0.0 : g;
}

// Center separation of two horoballs joined by a beam of length g (inverse
// of beam_length): 2 sqrt(r1 r2 e^g).
inline double center_separation(double r1, double r2, double g) {
    if (!(r1 > 0.0) || !(r2 > 0.0))
        throw std::domain_error("center_separation: radii must be positive");
    if (g < 0.0) throw std::domain_error("center_separation: negative length");
    return 2.0 * std::sqrt(r1 * r2 * std::exp(g));
}

enum class Disjointness { Disjoint, Tangent, Overlap };

// Classifies the pair by comparing the center distance against the tangency
// distance 2 sqrt(r1 r2) (or 2r against 1 for the ball at infinity).
inline Disjointness balls_disjoint(const Horoball& h1, const Horoball& h2,
                                   double tol = kDefaultTol) {
    if (h1.at_infinity && h2.at_infinity)
        throw std::invalid_argument("balls_disjoint: both horoballs at infinity");
    double gap;
    if (h1.at_infinity || h2.at_infinity) {
        const Horoball& f = h1.at_infinity ? h2 : h1;
        gap = 1.0 - 2.0 * f.radius;
    } else {
        gap = dist(h1.center, h2.center) - 2.0 * std::sqrt(h1.radius * h2.radius);
    }
    if (gap > tol) return Disjointness::Disjoint;
    if (gap < -tol) return Disjointness::Overlap;
    return Disjointness::Tangent;
}

// The geodesic arc realizing a beam, with the clipped span between the two
// ball-boundary intersection points.
//
// Finite-finite: the semicircle over the chord between the centers, clipped
// to chord parameters t in [span_lo, span_hi] measured from the midpoint
// toward e2; height at parameter t is sqrt(b^2 - t^2). At tangency the span
// degenerates to the single tangency point at height 2 r1 r2 / (r1 + r2).
//
// Finite-infinity: the vertical ray above the center, from the top of the
// ball (z = 2r) up to the plane z = 1.
struct GeodesicArc {
    bool vertical = false;

    // finite-finite data
    Point2 e1{}, e2{};       // ball centers
    double b = 0.0;          // Euclidean semicircle radius
    Point2 mid{}, dir{};     // chord midpoint and unit direction e1 -> e2
    double span_lo = 0.0;    // chord parameter at the e1-side boundary point
    double span_hi = 0.0;    // chord parameter at the e2-side boundary point
    bool degenerate = false; // tangency: span collapsed to a point
    double tangency_height = 0.0;

    // vertical data
    Point2 base{};
    double z_lo = 0.0, z_hi = 1.0;

    double height_at(double t) const {
        const double h2 = b * b - t * t;
        return h2 > 0.0 ? std::sqrt(h2) : 0.0;
    }
    Point2 point_at(double t) const { return mid + t * dir; }
};

inline GeodesicArc beam_arc(const Horoball& h1, const Horoball& h2,
                            double tol = kDefaultTol) {
    if (h1.at_infinity && h2.at_infinity)
        throw std::invalid_argument("beam_arc: both horoballs at infinity");
    GeodesicArc arc;
    if (h1.at_infinity || h2.at_infinity) {
        const Horoball& f = h1.at_infinity ? h2 : h1;
        if (2.0 * f.radius > 1.0 + tol)
            throw OverlappingBalls("beam_arc: ball overlaps the ball at infinity");
        arc.vertical = true;
        arc.base = f.center;
        arc.z_lo = 2.0 * f.radius;
        arc.z_hi = 1.0;
        arc.degenerate = std::abs(arc.z_hi - arc.z_lo) <= tol;
        arc.tangency_height = 1.0;
        return arc;
    }
    const double r1 = h1.radius, r2 = h2.radius;
    const double sep = dist(h1.center, h2.center);
    if (sep < 2.0 * std::sqrt(r1 * r2) - tol)
        throw OverlappingBalls("beam_arc: horoball interiors overlap");
    arc.e1 = h1.center;
    arc.e2 = h2.center;
    arc.b = sep / 2.0;
    arc.mid = 0.5 * (h1.center + h2.center);
    arc.dir = (1.0 / sep) * (h2.center - h1.center);
    const double b = arc.b;
    // boundary intersection angles: cos(a_i) = (b^2 - r_i^2) / (b^2 + r_i^2)
    const double c1 = (b * b - r1 * r1) / (b * b + r1 * r1);
    const double c2 = (b * b - r2 * r2) / (b * b + r2 * r2);
    arc.span_lo = -b * c1;
    arc.span_hi = b * c2;
    if (arc.span_hi - arc.span_lo <= tol * b || beam_length(h1, h2, tol) == 0.0) {
        arc.degenerate = true;
        const double t = 0.5 * (arc.span_lo + arc.span_hi);
        arc.span_lo = arc.span_hi = t;
        arc.tangency_height = 2.0 * r1 * r2 / (r1 + r2);
    }
    return arc;
}

// Lower bound, from the beam-height argument, on the ratio between a
// blocking ball's radius and the smallest ball of the bracelet it reaches
// over: (2 + sqrt(4 - e^{2g})) / e^g. Defined for 0 <= g <= ln 2; equals 1
// at g = ln 2 and decreases strictly to 2 + sqrt(3) at g = 0.
inline double min_blocking_ratio(double g, double tol = kDefaultTol) {
    if (g < -tol) throw std::domain_error("min_blocking_ratio: negative length");
    const double e2g = std::exp(2.0 * g);
    double disc = 4.0 - e2g;
    if (disc < 0.0) {
        if (disc < -4.0 * tol)
            throw std::domain_error("min_blocking_ratio: g > ln 2, bound vacuous");
        disc = 0.0;
    }
    return (2.0 + std::sqrt(disc)) / std::exp(g);
}

}  // namespace tunnelcert
