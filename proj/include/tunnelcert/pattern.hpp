#pragma once

// Data model, JSON file format, and validation for ball-and-beam patterns
// given as finite presentations: orbit representatives under the peripheral
// lattice, truncated below a stated radius.

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tunnelcert/geom.hpp"

namespace tunnelcert {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rank-2 group of parabolic translations fixing infinity.
struct Lattice {
    Point2 t1{}, t2{};

    Point2 translate(Point2 p, int m, int n) const {
        return {p.x + m * t1.x + n * t2.x, p.y + m * t1.y + n * t2.y};
    }
    // coordinates of p in the (t1, t2) basis
    Point2 coords(Point2 p) const {
        const double det = cross(t1, t2);
        return {cross(p, t2) / det, cross(t1, p) / det};
    }
};

using Offset = std::array<int, 2>;

struct BallEntry {
    std::string id;
    Horoball ball;  // always finite
    int cusp = 0;
};

struct BeamEnd {
    bool inf = false;
    int ball = -1;  // index into BallBeamPattern::balls
    Offset offset{0, 0};
};

// One lattice orbit of beams, canonicalized so the first finite end has
// offset (0, 0).
struct BeamRef {
    BeamEnd a, b;
};

struct BallBeamPattern {
    int cusp_count = 1;
    bool orientable = true;
    Lattice lattice;
    double g = 0.0;
    bool g_snapped = false;  // parse clamped a small positive g to exactly 0
    double epsilon = 0.0;
    double completeness_radius = 0.0;
    std::vector<BallEntry> balls;
    std::vector<BeamRef> beams;

    int ball_index(const std::string& id) const {
        for (size_t i = 0; i < balls.size(); ++i)
            if (balls[i].id == id) return static_cast<int>(i);
        return -1;
    }
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
    return *it;
}

inline Point2 parse_point(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(std::string(what) + " must be an array of two numbers");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline BeamEnd parse_beam_end(const nlohmann::json& j, const BallBeamPattern& p,
                              const char* what) {
    BeamEnd e;
    const auto& id = field(j, "id");
    if (!id.is_string()) throw ParseError(std::string(what) + ": 'id' must be a string");
    if (id.get<std::string>() == "INF") {
        e.inf = true;
        return e;
    }
    e.ball = p.ball_index(id.get<std::string>());
    if (e.ball < 0)
        throw ParseError(std::string(what) + ": unknown ball id '" +
                         id.get<std::string>() + "'");
    const auto& off = field(j, "offset");
    if (!off.is_array() || off.size() != 2 || !off[0].is_number_integer() ||
        !off[1].is_number_integer())
        throw ParseError(std::string(what) + ": 'offset' must be two integers");
    e.offset = {off[0].get<int>(), off[1].get<int>()};
    return e;
}

}  // namespace detail

inline BallBeamPattern parse_pattern(const std::string& bytes, double tol = kDefaultTol) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("syntax error: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("top level must be an object");

    BallBeamPattern p;
    if (detail::field(j, "version").get<int>() != 1)
        throw ParseError("unsupported version");
    p.cusp_count = detail::field(j, "cusp_count").get<int>();
    if (p.cusp_count != 1 && p.cusp_count != 2)
        throw ParseError("cusp_count must be 1 or 2");
    p.orientable = detail::field(j, "orientable").get<bool>();
    const auto& lat = detail::field(j, "lattice");
    p.lattice.t1 = detail::parse_point(detail::field(lat, "t1"), "lattice.t1");
    p.lattice.t2 = detail::parse_point(detail::field(lat, "t2"), "lattice.t2");
    if (std::abs(cross(p.lattice.t1, p.lattice.t2)) <= tol)
        throw ParseError("lattice generators are linearly dependent");
    p.g = detail::field(j, "g").get<double>();
    if (p.g < -tol) throw ParseError("g must be nonnegative");
    if (p.g < tol) {
        p.g_snapped = p.g != 0.0;
        p.g = 0.0;
    }
    p.epsilon = detail::field(j, "epsilon").get<double>();
    p.completeness_radius = detail::field(j, "completeness_radius").get<double>();

    std::set<std::string> ids;
    for (const auto& jb : detail::field(j, "balls")) {
        BallEntry be;
        be.id = detail::field(jb, "id").get<std::string>();
        if (be.id.empty() || be.id == "INF") throw ParseError("invalid ball id");
        if (!ids.insert(be.id).second)
            throw ParseError("duplicate ball id '" + be.id + "'");
        const Point2 c = detail::parse_point(detail::field(jb, "center"), "ball center");
        const double r = detail::field(jb, "radius").get<double>();
        if (!(r > 0.0) || r > 0.5 + tol)
            throw ParseError("ball '" + be.id + "': radius out of (0, 1/2]");
        be.ball = Horoball::finite(c, std::min(r, 0.5));
        be.cusp = detail::field(jb, "cusp").get<int>();
        if (be.cusp < 0 || be.cusp >= p.cusp_count)
            throw ParseError("ball '" + be.id + "': cusp tag out of range");
        const Point2 uv = p.lattice.coords(c);
        if (uv.x < -tol || uv.x >= 1.0 + tol || uv.y < -tol || uv.y >= 1.0 + tol)
            throw ParseError("ball '" + be.id +
                             "': center not a canonical representative");
        p.balls.push_back(be);
    }

    for (const auto& jb : detail::field(j, "beams")) {
        BeamRef br;
        br.a = detail::parse_beam_end(detail::field(jb, "a"), p, "beam end a");
        br.b = detail::parse_beam_end(detail::field(jb, "b"), p, "beam end b");
        if (br.a.inf && br.b.inf) throw ParseError("beam with both ends at infinity");
        if (!br.a.inf && (br.a.offset != Offset{0, 0}))
            throw ParseError("beam end a: offset not canonical (must be [0,0])");
        if (br.a.inf && (br.b.offset != Offset{0, 0}))
            throw ParseError("beam end b: offset not canonical (must be [0,0])");
        const int cusp_a = br.a.inf ? 0 : p.balls[br.a.ball].cusp;
        const int cusp_b = br.b.inf ? 0 : p.balls[br.b.ball].cusp;
        if (p.cusp_count == 2 && cusp_a + cusp_b != 1)
            throw ParseError("beam must connect cusp 0 to cusp 1");
        p.beams.push_back(br);
    }
    return p;
}

// Canonical serialization: fixed key order, 17 significant digits, LF line
// endings. parse_pattern of the output reproduces the pattern bit-exactly.
inline std::string serialize_pattern(const BallBeamPattern& p) {
    using detail::fmt17;
    std::ostringstream o;
    o << "{\n";
    o << "  \"version\": 1,\n";
    o << "  \"cusp_count\": " << p.cusp_count << ",\n";
    o << "  \"orientable\": " << (p.orientable ? "true" : "false") << ",\n";
    o << "  \"lattice\": {\"t1\": [" << fmt17(p.lattice.t1.x) << ", "
      << fmt17(p.lattice.t1.y) << "], \"t2\": [" << fmt17(p.lattice.t2.x) << ", "
      << fmt17(p.lattice.t2.y) << "]},\n";
    o << "  \"g\": " << fmt17(p.g) << ",\n";
    o << "  \"epsilon\": " << fmt17(p.epsilon) << ",\n";
    o << "  \"completeness_radius\": " << fmt17(p.completeness_radius) << ",\n";
    o << "  \"balls\": [";
    for (size_t i = 0; i < p.balls.size(); ++i) {
        const auto& b = p.balls[i];
        o << (i ? ",\n    " : "\n    ");
        o << "{\"id\": \"" << b.id << "\", \"center\": [" << fmt17(b.ball.center.x)
          << ", " << fmt17(b.ball.center.y) << "], \"radius\": "
          << fmt17(b.ball.radius) << ", \"cusp\": " << b.cusp << "}";
    }
    o << (p.balls.empty() ? "],\n" : "\n  ],\n");
    auto end_str = [&](const BeamEnd& e) {
        std::ostringstream s;
        if (e.inf)
            s << "{\"id\": \"INF\", \"offset\": [0, 0]}";
        else
            s << "{\"id\": \"" << p.balls[e.ball].id << "\", \"offset\": ["
              << e.offset[0] << ", " << e.offset[1] << "]}";
        return s.str();
    };
    o << "  \"beams\": [";
    for (size_t i = 0; i < p.beams.size(); ++i) {
        o << (i ? ",\n    " : "\n    ");
        o << "{\"a\": " << end_str(p.beams[i].a) << ", \"b\": "
          << end_str(p.beams[i].b) << "}";
    }
    o << (p.beams.empty() ? "]\n" : "\n  ]\n");
    o << "}\n";
    return o.str();
}

struct Violation {
    enum Kind { Overlap, BeamLength, InfinityRadius } kind;
    std::string message;
};

struct ValidationReport {
    int window = 0;
    std::vector<Violation> violations;
    bool clean() const { return violations.empty(); }
};

inline Horoball concrete_ball(const BallBeamPattern& p, int ball, Offset off) {
    const Horoball& h = p.balls[ball].ball;
    return Horoball::finite(p.lattice.translate(h.center, off[0], off[1]), h.radius);
}

// Checks, over all translates with offsets in [-window, window]^2: pairwise
// ball disjointness, realized beam lengths against g, and the forced radius
// e^{-g}/2 of every ball with a beam to infinity. Violations are report
// entries, never exceptions.
inline ValidationReport validate_pattern(const BallBeamPattern& p, int window = 2,
                                         double tol = kDefaultTol) {
    ValidationReport rep;
    rep.window = window;
    const int w = window;
    const size_t nb = p.balls.size();
    for (size_t i = 0; i < nb; ++i) {
        for (size_t jj = i; jj < nb; ++jj) {
            for (int m = -w; m <= w; ++m) {
                for (int n = -w; n <= w; ++n) {
                    if (i == jj && std::make_pair(m, n) <= std::make_pair(0, 0))
                        continue;  // each unordered self-pair once
                    const Horoball h1 = p.balls[i].ball;
                    const Horoball h2 = concrete_ball(p, static_cast<int>(jj), {m, n});
                    if (balls_disjoint(h1, h2, tol) == Disjointness::Overlap) {
                        rep.violations.push_back(
                            {Violation::Overlap,
                             "balls '" + p.balls[i].id + "' and '" + p.balls[jj].id +
                                 "'+(" + std::to_string(m) + "," + std::to_string(n) +
                                 ") overlap"});
                    }
                }
            }
        }
    }
    for (size_t k = 0; k < p.beams.size(); ++k) {
        const BeamRef& br = p.beams[k];
        const BeamEnd fe = br.a.inf ? br.b : br.a;
        const BeamEnd oe = br.a.inf ? br.a : br.b;
        try {
            const Horoball h1 = concrete_ball(p, fe.ball, fe.offset);
            const Horoball h2 = oe.inf ? Horoball::infinity()
                                       : concrete_ball(p, oe.ball, oe.offset);
            const double len = beam_length(h1, h2, tol);
            if (std::abs(len - p.g) > tol)
                rep.violations.push_back(
                    {Violation::BeamLength,
                     "beam " + std::to_string(k) + ": realized length " +
                         detail::fmt17(len) + " != g"});
        } catch (const OverlappingBalls&) {
            rep.violations.push_back(
                {Violation::BeamLength,
                 "beam " + std::to_string(k) + ": endpoint balls overlap"});
        }
        if (oe.inf) {
            const double want = std::exp(-p.g) / 2.0;
            if (std::abs(p.balls[fe.ball].ball.radius - want) > tol)
                rep.violations.push_back(
                    {Violation::InfinityRadius,
                     "ball '" + p.balls[fe.ball].id +
                         "': beam to infinity forces radius " + detail::fmt17(want)});
        }
    }
    return rep;
}

struct ConcreteBall {
    int ball = -1;
    Offset offset{0, 0};
    Horoball hb;
    int cusp = 0;
};

struct ConcreteBeam {
    int beam = -1;
    Offset offset{0, 0};  // translation applied to the canonical beam
    bool a_inf = false, b_inf = false;
    int a_ball = -1, b_ball = -1;
    Offset a_off{0, 0}, b_off{0, 0};
};

struct Expansion {
    std::vector<ConcreteBall> balls;
    std::vector<ConcreteBeam> beams;
};

// Develops the lattice orbit over offsets in [-window, window]^2, with a
// deterministic ordering: balls by id then lexicographic offset, beams by
// orbit index then offset.
inline Expansion expand_window(const BallBeamPattern& p, int window) {
    Expansion ex;
    std::vector<int> order(p.balls.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return p.balls[a].id < p.balls[b].id;
    });
    for (int bi : order)
        for (int m = -window; m <= window; ++m)
            for (int n = -window; n <= window; ++n)
                ex.balls.push_back({bi, {m, n}, concrete_ball(p, bi, {m, n}),
                                    p.balls[bi].cusp});
    for (size_t k = 0; k < p.beams.size(); ++k) {
        for (int m = -window; m <= window; ++m) {
            for (int n = -window; n <= window; ++n) {
                const BeamRef& br = p.beams[k];
                ConcreteBeam cb;
                cb.beam = static_cast<int>(k);
                cb.offset = {m, n};
                cb.a_inf = br.a.inf;
                cb.b_inf = br.b.inf;
                if (!br.a.inf) {
                    cb.a_ball = br.a.ball;
                    cb.a_off = {br.a.offset[0] + m, br.a.offset[1] + n};
                }
                if (!br.b.inf) {
                    cb.b_ball = br.b.ball;
                    cb.b_off = {br.b.offset[0] + m, br.b.offset[1] + n};
                }
                ex.beams.push_back(cb);
            }
        }
    }
    return ex;
}

// For a pattern with g = 0, finds one beam orbit per orbit of tangent ball
// pairs (including tangencies with the ball at infinity), deduplicated under
// the lattice action.
inline std::vector<BeamRef> infer_tangency_beams(const BallBeamPattern& p,
                                                 int window = 2,
                                                 double tol = kDefaultTol) {
    if (p.g > tol)
        throw std::domain_error("infer_tangency_beams: requires g = 0");
    std::vector<BeamRef> out;
    const int nb = static_cast<int>(p.balls.size());
    for (int i = 0; i < nb; ++i) {
        if (std::abs(2.0 * p.balls[i].ball.radius - 1.0) <= tol) {
            BeamRef br;
            br.a.inf = true;
            br.b.ball = i;
            out.push_back(br);
        }
    }
    for (int i = 0; i < nb; ++i) {
        for (int j = i; j < nb; ++j) {
            for (int m = -window; m <= window; ++m) {
                for (int n = -window; n <= window; ++n) {
                    if (i == j && std::make_pair(m, n) <= std::make_pair(0, 0))
                        continue;
                    const Horoball h1 = p.balls[i].ball;
                    const Horoball h2 = concrete_ball(p, j, {m, n});
                    if (balls_disjoint(h1, h2, tol) == Disjointness::Tangent) {
                        BeamRef br;
                        br.a.ball = i;
                        br.b.ball = j;
                        br.b.offset = {m, n};
                        out.push_back(br);
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace tunnelcert
