#pragma once

// Blocked-bracelet test: builds the vertical wall over a bracelet's
// projected polyline and scans candidate beams for odd-parity punctures.

#include <optional>
#include <vector>

#include "tunnelcert/geom.hpp"
#include "tunnelcert/graph.hpp"
#include "tunnelcert/pattern.hpp"

namespace tunnelcert {

// The spanning disk tested for a bracelet: the vertical wall over the chord
// polyline between consecutive finite-ball centers, bounded below by the
// envelope of beam semicircles and adjacent upper hemispheres and above by
// the plane z = 1. Polyline endpoints are the two balls carrying the
// bracelet's vertical beams.
struct Wall {
    std::vector<Point2> verts;   // concrete finite-ball centers, cycle order
    std::vector<double> radii;   // matching ball radii
    std::vector<GeodesicArc> seg_arcs;  // arc of the beam joining verts[i], verts[i+1]
};

inline Wall build_wall(const Bracelet& br, const BallBeamPattern& p,
                       double tol = kDefaultTol) {
    Wall w;
    std::vector<Horoball> balls;
    for (const auto& [bi, off] : br.chain) {
        const Horoball cb = concrete_ball(p, bi, off);
        balls.push_back(cb);
        w.verts.push_back(cb.center);
        w.radii.push_back(cb.radius);
    }
    for (size_t i = 0; i + 1 < balls.size(); ++i)
        w.seg_arcs.push_back(beam_arc(balls[i], balls[i + 1], tol));
    return w;
}

// Upper hemisphere height of a ball of radius r at horizontal distance rho
// from its center; zero outside the ball's shadow.
namespace detail {
inline double hemisphere_height(double r, double rho) {
    const double d = r * r - rho * rho;
    return d > 0.0 ? r + std::sqrt(d) : (rho <= r ? r : 0.0);
}
}  // namespace detail

// Envelope height at boundary point q attributed to wall segment seg:
// pointwise max of the connecting beam's semicircle and the two adjacent
// balls' upper hemispheres.
inline double wall_envelope_height(const Wall& w, size_t seg, Point2 q) {
    const GeodesicArc& a = w.seg_arcs[seg];
    double env = 0.0;
    if (!a.vertical) {
        const double t = dot(q - a.mid, a.dir);
        env = a.height_at(t);
    }
    env = std::max(env, detail::hemisphere_height(w.radii[seg], dist(q, w.verts[seg])));
    env = std::max(env,
                   detail::hemisphere_height(w.radii[seg + 1], dist(q, w.verts[seg + 1])));
    return env;
}

struct Crossing {
    Point2 at{};
    double height = 0.0;
    double envelope = 0.0;
    int segment = -1;
};

struct PunctureResult {
    int count = 0;
    bool indeterminate = false;
    std::vector<Crossing> crossings;
};

namespace detail {

// Height filter shared by all crossing kinds: a candidate crossing counts
// only when the arc height lies strictly inside (envelope, 1). Grazing the
// envelope within tol is degenerate; touching z = 1 is a boundary point of
// the wall and does not count.
inline int classify_height(double h, double env, double tol, bool& indet) {
    if (h >= 1.0 - tol) return 0;
    if (std::abs(h - env) <= tol) {
        indet = true;
        return 0;
    }
    return h > env ? 1 : 0;
}

}  // namespace detail

// Transversal crossing count of a beam's clipped span with the wall.
// Vertex-grazing crossings are resolved by the sidedness of the adjacent
// polyline vertices; tangential or unresolvable contacts set indeterminate.
inline PunctureResult beam_punctures_wall(const GeodesicArc& arc, const Wall& w,
                                          double tol = kDefaultTol) {
    PunctureResult res;
    const size_t nseg = w.seg_arcs.size();

    // side of point p relative to the span chord, as a signed distance
    auto chord_side = [&](Point2 q0, Point2 q1, Point2 p) {
        const Point2 d = q1 - q0;
        const double len = norm(d);
        return cross(d, p - q0) / len;
    };

    if (arc.vertical) {
        // a vertical arc is parallel to the wall plane: no transversal
        // crossing unless it lies in the wall itself
        for (size_t i = 0; i < nseg; ++i) {
            const Point2 a = w.verts[i], b = w.verts[i + 1];
            const Point2 d = b - a;
            const double len = norm(d);
            if (len <= tol) continue;
            const double s = dot(arc.base - a, d) / (len * len);
            if (s < -tol || s > 1.0 + tol) continue;
            const Point2 foot = a + s * d;
            if (dist(arc.base, foot) <= tol) {
                res.indeterminate = true;
                return res;
            }
        }
        return res;
    }

    if (arc.degenerate) {
        // tangency-point beam: the span is a single point; it punctures when
        // the point lies on the wall with the two endpoint balls strictly on
        // opposite sides
        const Point2 pt = arc.point_at(arc.span_lo);
        const double h = arc.tangency_height;
        for (size_t i = 0; i < nseg; ++i) {
            const Point2 a = w.verts[i], b = w.verts[i + 1];
            const Point2 d = b - a;
            const double len = norm(d);
            if (len <= tol) continue;
            const double s = dot(pt - a, d) / (len * len);
            if (s < -tol || s > 1.0 + tol) continue;
            if (dist(pt, a + s * d) > tol) continue;
            const double side1 = cross(d, arc.e1 - a) / len;
            const double side2 = cross(d, arc.e2 - a) / len;
            if (std::abs(side1) <= tol || std::abs(side2) <= tol) {
                res.indeterminate = true;
                return res;
            }
            if (side1 * side2 < 0.0) {
                const double env = wall_envelope_height(w, i, pt);
                const int c = detail::classify_height(h, env, tol, res.indeterminate);
                if (res.indeterminate) return res;
                if (c) {
                    res.count += 1;
                    res.crossings.push_back({pt, h, env, static_cast<int>(i)});
                }
            }
            return res;  // a point meets the polyline at most once transversally
        }
        return res;
    }

    const Point2 q0 = arc.point_at(arc.span_lo);
    const Point2 q1 = arc.point_at(arc.span_hi);
    const Point2 qd = q1 - q0;
    const double qlen = norm(qd);

    // interior crossings, segment by segment
    for (size_t i = 0; i < nseg; ++i) {
        const Point2 a = w.verts[i], b = w.verts[i + 1];
        const Point2 d = b - a;
        const double len = norm(d);
        if (len <= tol) continue;
        const double d0 = cross(d, q0 - a) / len;  // span endpoints vs wall line
        const double d1 = cross(d, q1 - a) / len;
        const double e0 = cross(qd, a - q0) / qlen;  // wall endpoints vs span line
        const double e1 = cross(qd, b - q0) / qlen;

        const bool v0_on = std::abs(e0) <= tol;
        const bool v1_on = std::abs(e1) <= tol;
        if (v0_on || v1_on) continue;  // vertex contacts handled below
        if (e0 * e1 > 0.0) continue;   // both wall endpoints on one side

        if (std::abs(d0) <= tol || std::abs(d1) <= tol) {
            // a span endpoint sits on the wall line; degenerate if it is
            // actually within this wall segment's strip
            const double s_at = e0 / (e0 - e1);
            if (s_at > -tol && s_at < 1.0 + tol) {
                res.indeterminate = true;
                return res;
            }
            continue;
        }
        if (d0 * d1 > 0.0) continue;  // span does not reach across the line

        const double s = e0 / (e0 - e1);
        const double tpar = d0 / (d0 - d1);
        const Point2 pt = q0 + tpar * qd;
        const double tarc = arc.span_lo + tpar * (arc.span_hi - arc.span_lo);
        const double h = arc.height_at(tarc);
        const double env = wall_envelope_height(w, i, pt);
        const int c = detail::classify_height(h, env, tol, res.indeterminate);
        if (res.indeterminate) return res;
        if (c) {
            res.count += 1;
            res.crossings.push_back({pt, h, env, static_cast<int>(i)});
        }
        (void)s;
    }

    // vertex contacts: a polyline vertex lying on the span chord
    const size_t nv = w.verts.size();
    for (size_t j = 0; j < nv; ++j) {
        const Point2 v = w.verts[j];
        const double e = cross(qd, v - q0) / qlen;
        if (std::abs(e) > tol) continue;
        const double t = dot(v - q0, qd) / (qlen * qlen);
        if (t < -tol || t > 1.0 + tol) continue;  // contact beyond the span
        if (t <= tol || t >= 1.0 - tol) {
            // span endpoint touches a wall vertex
            res.indeterminate = true;
            return res;
        }
        if (j == 0 || j + 1 == nv) {
            // chord passes through a wall endpoint: the wall boundary there
            // is the vertical beam to infinity, not a transversal interior
            res.indeterminate = true;
            return res;
        }
        const double sp = chord_side(q0, q1, w.verts[j - 1]);
        const double sn = chord_side(q0, q1, w.verts[j + 1]);
        if (std::abs(sp) <= tol || std::abs(sn) <= tol) {
            res.indeterminate = true;
            return res;
        }
        if (sp * sn > 0.0) continue;  // polyline touches and retreats: even contact

        const double tarc = arc.span_lo + t * (arc.span_hi - arc.span_lo);
        const double h = arc.height_at(tarc);
        const double env = std::max(wall_envelope_height(w, j - 1, v),
                                    wall_envelope_height(w, j, v));
        const int c = detail::classify_height(h, env, tol, res.indeterminate);
        if (res.indeterminate) return res;
        if (c) {
            res.count += 1;
            res.crossings.push_back({v, h, env, static_cast<int>(j)});
        }
    }

    return res;
}

enum class BlockVerdict { Blocked, NotBlocked, Indeterminate };

struct BlockingPair {
    int beam = -1;  // beam orbit index
    Offset offset{0, 0};
    double larger_radius = 0.0;
    std::vector<Crossing> crossings;
};

struct BlockingResult {
    BlockVerdict verdict = BlockVerdict::NotBlocked;
    std::optional<BlockingPair> pair;
    double inflate = 0.0;  // bounding-box inflation used for the beam scan
    int candidates = 0;
    // for NotBlocked with g < ln 2: any absent blocker would need a ball of
    // at least required_radius; the verdict is unconditional only when that
    // exceeds the pattern's completeness radius
    double required_radius = 0.0;
    bool unconditional = false;
};

// True iff the pair's larger ball meets the minimum blocking radius bound
// relative to the bracelet's smallest ball.
inline bool check_lemma34(const Bracelet& br, const BlockingPair& pair, double g,
                          double tol = kDefaultTol) {
    return pair.larger_radius >= min_blocking_ratio(g, tol) * br.min_radius - tol;
}

// Scans all concrete beams whose projection can reach the wall and returns
// the first odd-parity puncturing beam in canonical order (orbit index, then
// lexicographic offset), else NotBlocked with the completeness condition.
// Any degenerate crossing makes the whole verdict Indeterminate.
inline BlockingResult find_blocking(const Bracelet& br, const BallBeamPattern& p,
                                    int window, double tol = kDefaultTol) {
    (void)window;
    BlockingResult out;
    const Wall w = build_wall(br, p, tol);

    // search bound: polyline bounding box inflated past the maximal
    // half-span of any beam projection plus a ball diameter
    double lox = w.verts[0].x, hix = lox, loy = w.verts[0].y, hiy = loy;
    for (const Point2& v : w.verts) {
        lox = std::min(lox, v.x);
        hix = std::max(hix, v.x);
        loy = std::min(loy, v.y);
        hiy = std::max(hiy, v.y);
    }
    const double inflate = std::exp(p.g / 2.0) + 1.0;
    out.inflate = inflate;
    lox -= inflate;
    hix += inflate;
    loy -= inflate;
    hiy += inflate;

    // chain membership, for excluding beams incident to bracelet balls
    auto in_chain = [&](int ball, Offset off) {
        for (const auto& [bi, o] : br.chain)
            if (bi == ball && o == off) return true;
        return false;
    };

    auto corner_range = [&](Point2 ref, int& mlo, int& mhi, int& nlo, int& nhi) {
        // integer offsets whose translate of ref can land inside the box
        const Point2 corners[4] = {{lox, loy}, {lox, hiy}, {hix, loy}, {hix, hiy}};
        double ulo = 0, uhi = 0, vlo = 0, vhi = 0;
        for (int k = 0; k < 4; ++k) {
            const auto [u, v] = p.lattice.coords(corners[k] - ref);
            if (k == 0) {
                ulo = uhi = u;
                vlo = vhi = v;
            } else {
                ulo = std::min(ulo, u);
                uhi = std::max(uhi, u);
                vlo = std::min(vlo, v);
                vhi = std::max(vhi, v);
            }
        }
        mlo = static_cast<int>(std::floor(ulo)) - 1;
        mhi = static_cast<int>(std::ceil(uhi)) + 1;
        nlo = static_cast<int>(std::floor(vlo)) - 1;
        nhi = static_cast<int>(std::ceil(vhi)) + 1;
    };

    std::optional<BlockingPair> indet_free_pair;
    bool saw_indeterminate = false;

    for (size_t k = 0; k < p.beams.size() && !indet_free_pair; ++k) {
        const BeamRef& bref = p.beams[k];
        Point2 ref{};
        if (bref.a.inf)
            ref = p.balls[bref.b.ball].ball.center;
        else if (bref.b.inf)
            ref = p.balls[bref.a.ball].ball.center;
        else
            ref = 0.5 * (p.balls[bref.a.ball].ball.center +
                         p.lattice.translate(p.balls[bref.b.ball].ball.center,
                                             bref.b.offset[0], bref.b.offset[1]));
        int mlo, mhi, nlo, nhi;
        corner_range(ref, mlo, mhi, nlo, nhi);
        for (int m = mlo; m <= mhi && !indet_free_pair; ++m)
            for (int n = nlo; n <= nhi; ++n) {
                const Offset shift{m, n};
                Horoball ha, hb;
                double ra = 0.0, rb = 0.0;
                bool skip = false;
                auto resolve = [&](const BeamEnd& end, Horoball& h, double& r) {
                    if (end.inf) {
                        h = Horoball::infinity();
                        return;
                    }
                    const Offset off{end.offset[0] + m, end.offset[1] + n};
                    if (in_chain(end.ball, off)) {
                        skip = true;
                        return;
                    }
                    h = concrete_ball(p, end.ball, off);
                    r = h.radius;
                };
                resolve(bref.a, ha, ra);
                resolve(bref.b, hb, rb);
                if (skip) continue;
                GeodesicArc arc;
                try {
                    arc = beam_arc(ha, hb, tol);
                } catch (const OverlappingBalls&) {
                    continue;  // invalid placement; validation reports it
                }
                out.candidates += 1;
                const PunctureResult pr = beam_punctures_wall(arc, w, tol);
                if (pr.indeterminate) {
                    saw_indeterminate = true;
                    continue;
                }
                if (pr.count % 2 == 1) {
                    BlockingPair bp;
                    bp.beam = static_cast<int>(k);
                    bp.offset = shift;
                    bp.larger_radius = std::max(ra, rb);
                    bp.crossings = pr.crossings;
                    indet_free_pair = bp;
                    break;
                }
            }
    }

    if (indet_free_pair) {
        out.verdict = BlockVerdict::Blocked;
        out.pair = indet_free_pair;
        if (p.g <= std::log(2.0) + tol && !check_lemma34(br, *out.pair, p.g, tol))
            throw std::logic_error(
                "find_blocking: blocking pair violates the minimum radius bound");
        return out;
    }
    if (saw_indeterminate) {
        out.verdict = BlockVerdict::Indeterminate;
        return out;
    }
    out.verdict = BlockVerdict::NotBlocked;
    if (p.g < std::log(2.0) - tol) {
        out.required_radius = min_blocking_ratio(p.g, tol) * br.min_radius;
        out.unconditional = out.required_radius >= p.completeness_radius - tol;
    }
    return out;
}

}  // namespace tunnelcert
