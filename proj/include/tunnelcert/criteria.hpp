#pragma once

// Certification pipeline: thresholds, the elder sibling check, and the
// decision procedure combining the bracelet-length criteria, the elder
// sibling theorem, and direct unblocked-disk witnesses.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tunnelcert/blocking.hpp"
#include "tunnelcert/geom.hpp"
#include "tunnelcert/graph.hpp"
#include "tunnelcert/pattern.hpp"

namespace tunnelcert {

inline constexpr const char* kToolVersion = "tunnelcert 1.0.0";

struct Thresholds {
    double t4 = 0.0;   // 4-bracelet length bound, ln sqrt(2)
    double t5 = 0.0;   // 5-bracelet length bound, root of the feasibility equation
    double t_es = 0.0; // elder sibling length bound, ln 2
};

// Smallest geodesic length at which a blocked 5-bracelet through a ball of
// radius r_e becomes geometrically feasible. The feasibility margin, with
// r_c at its maximum r_e e^g / (2 + sqrt(4 - e^{2g})) and the chain
// a-c-x collinear, is
//   F(g) = (sqrt(2 r_c) + r_c e^{g/2})^2 + (r_e e^{g/2})^2 - 2 r_e e^{-g},
// negative when every placement of the blocking ball pair overlaps.
// F(0) < 0 and F(ln 2) > 0 on (0, 1/2], so the root is found by bisection.
inline double five_bracelet_min_g(double r_e) {
    if (!(r_e > 0.0) || r_e > 0.5)
        throw std::domain_error("five_bracelet_min_g: r_e must lie in (0, 1/2]");
    auto margin = [r_e](double g) {
        const double eg = std::exp(g);
        const double r_c = r_e * eg / (2.0 + std::sqrt(4.0 - eg * eg));
        const double dax = std::sqrt(2.0 * r_c) + r_c * std::exp(g / 2.0);
        const double dex = r_e * std::exp(g / 2.0);
        return dax * dax + dex * dex - 2.0 * r_e * std::exp(-g);
    };
    double lo = 0.0, hi = std::log(2.0);
    if (!(margin(lo) < 0.0) || !(margin(hi) > 0.0))
        throw std::logic_error("five_bracelet_min_g: root bracket failure");
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline Thresholds compute_thresholds() {
    Thresholds t;
    t.t4 = 0.5 * std::log(2.0);
    t.t5 = five_bracelet_min_g(0.5);
    t.t_es = std::log(2.0);
    return t;
}

// Result of the elder sibling check: for each verified ball orbit, a chain
// of orbit indices with strictly increasing radii whose last member has a
// beam to the ball at infinity.
struct ElderReport {
    bool verified = false;
    std::map<int, std::vector<int>> chains;  // orbit -> chain starting at orbit
    std::vector<int> failures;               // orbits with no chain
};

// Processes orbits in decreasing radius order: an orbit is verified iff it
// has a vertical beam, or a beam to an already verified orbit of strictly
// larger radius. Recorded chains are shortest by hop count, ties broken by
// the smaller ball id at the first divergence.
inline ElderReport elder_sibling_check(const BallBeamPattern& p,
                                       double tol = kDefaultTol) {
    const int nb = static_cast<int>(p.balls.size());
    std::vector<std::vector<int>> nbrs(nb);
    std::vector<char> has_vertical(nb, 0);
    for (const BeamRef& br : p.beams) {
        if (br.a.inf || br.b.inf) {
            has_vertical[br.a.inf ? br.b.ball : br.a.ball] = 1;
        } else {
            nbrs[br.a.ball].push_back(br.b.ball);
            nbrs[br.b.ball].push_back(br.a.ball);
        }
    }

    std::vector<int> order(nb);
    for (int i = 0; i < nb; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ra = p.balls[a].ball.radius, rb = p.balls[b].ball.radius;
        return ra != rb ? ra > rb : p.balls[a].id < p.balls[b].id;
    });

    ElderReport rep;
    std::vector<char> ok(nb, 0);
    std::map<int, std::vector<int>> chains;
    for (int i : order) {
        if (has_vertical[i]) {
            ok[i] = 1;
            chains[i] = {i};
            continue;
        }
        const double ri = p.balls[i].ball.radius;
        int best = -1;
        for (int j : nbrs[i]) {
            if (!ok[j]) continue;
            if (!(p.balls[j].ball.radius > ri + tol)) continue;
            if (best < 0 || chains[j].size() < chains[best].size() ||
                (chains[j].size() == chains[best].size() &&
                 p.balls[j].id < p.balls[best].id))
                best = j;
        }
        if (best >= 0) {
            ok[i] = 1;
            chains[i] = {i};
            chains[i].insert(chains[i].end(), chains[best].begin(), chains[best].end());
        }
    }
    for (int i = 0; i < nb; ++i) {
        if (ok[i])
            rep.chains[i] = chains[i];
        else
            rep.failures.push_back(i);
    }
    rep.verified = rep.failures.empty();
    return rep;
}

enum class Rule { Prop4, Prop5, Prop6, ElderSibling, DirectDisk };

inline const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Prop4: return "four_bracelet";
        case Rule::Prop5: return "five_bracelet";
        case Rule::Prop6: return "zero_length";
        case Rule::ElderSibling: return "elder_sibling";
        case Rule::DirectDisk: return "direct_disk";
    }
    return "?";
}

struct CertifyOptions {
    int n_max = 6;
    int window = 2;
    double tol = kDefaultTol;
};

struct Certificate {
    bool tunnel = false;
    std::optional<Rule> rule;
    std::optional<Bracelet> bracelet;   // witness bracelet for bracelet rules
    ElderReport elder;                  // witness chains for the elder rule
    std::optional<BlockingResult> blocking;  // witness for the direct-disk rule
    double g = 0.0;
    Thresholds thresholds;
    CertifyOptions options;
    std::vector<Rule> applicable;       // every rule whose conditions hold
    std::vector<std::string> reasons;   // per-rule failure reasons when inconclusive
    bool g_snapped_to_zero = false;
    bool indeterminate_seen = false;
    double completeness_radius = 0.0;
    std::string digest;                 // FNV-1a of the canonical pattern bytes
};

namespace detail {

inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace detail

// Applies the certification rules in fixed order and returns the first
// success; otherwise an inconclusive certificate listing, per rule, why it
// did not apply. All rules whose conditions hold are listed in `applicable`
// even when an earlier rule fired.
inline Certificate certify(const BallBeamPattern& p, CertifyOptions opt = {}) {
    if (opt.n_max < 3) throw std::invalid_argument("certify: n_max >= 3");
    if (opt.window < 0) throw std::invalid_argument("certify: window >= 0");
    Certificate c;
    c.options = opt;
    c.g = p.g;
    c.thresholds = compute_thresholds();
    c.g_snapped_to_zero = p.g_snapped;
    c.completeness_radius = p.completeness_radius;
    c.digest = detail::fnv1a_hex(serialize_pattern(p));
    const double tol = opt.tol;

    const std::vector<Bracelet> bracelets = enumerate_bracelets(p, opt.n_max, opt.window);
    auto first_with = [&](auto pred) -> const Bracelet* {
        for (const Bracelet& b : bracelets)
            if (pred(b)) return &b;
        return nullptr;
    };

    const Bracelet* b4 = first_with([](const Bracelet& b) { return b.n == 4; });
    const Bracelet* b45 =
        first_with([](const Bracelet& b) { return b.n == 4 || b.n == 5; });
    const Bracelet* b46 =
        first_with([](const Bracelet& b) { return b.n >= 4 && b.n <= 6; });

    // rule 1: a 4-bracelet with g below the 4-bracelet blocking threshold
    const bool r1 = b4 != nullptr && p.g < c.thresholds.t4 - tol;
    // rule 2: one cusp, a 4- or 5-bracelet, g below the 5-bracelet threshold
    const bool r2 =
        p.cusp_count == 1 && b45 != nullptr && p.g < c.thresholds.t5 - tol;
    // rule 3: orientable, g = 0, and a short bracelet
    const bool r3 = p.orientable && p.g <= tol && b46 != nullptr;
    // rule 4: g below ln 2 and the elder sibling property holds
    const bool r4_len = p.g < c.thresholds.t_es - tol;
    ElderReport elder;
    if (r4_len) elder = elder_sibling_check(p, tol);
    const bool r4 = r4_len && elder.verified;

    // rule 5: some bracelet is unconditionally unblocked
    const Bracelet* b5w = nullptr;
    std::optional<BlockingResult> b5res;
    bool any_conditional = false;
    for (const Bracelet& b : bracelets) {
        const BlockingResult br = find_blocking(b, p, opt.window, tol);
        if (br.verdict == BlockVerdict::Indeterminate) {
            c.indeterminate_seen = true;
            continue;
        }
        if (br.verdict == BlockVerdict::NotBlocked) {
            if (br.unconditional) {
                b5w = &b;
                b5res = br;
                break;
            }
            any_conditional = true;
        }
    }
    const bool r5 = b5w != nullptr;

    if (r1) c.applicable.push_back(Rule::Prop4);
    if (r2) c.applicable.push_back(Rule::Prop5);
    if (r3) c.applicable.push_back(Rule::Prop6);
    if (r4) c.applicable.push_back(Rule::ElderSibling);
    if (r5) c.applicable.push_back(Rule::DirectDisk);

    if (r1) {
        c.tunnel = true;
        c.rule = Rule::Prop4;
        c.bracelet = *b4;
        return c;
    }
    if (r2) {
        c.tunnel = true;
        c.rule = Rule::Prop5;
        c.bracelet = *b45;
        return c;
    }
    if (r3) {
        c.tunnel = true;
        c.rule = Rule::Prop6;
        c.bracelet = *b46;
        return c;
    }
    if (r4) {
        c.tunnel = true;
        c.rule = Rule::ElderSibling;
        c.elder = elder;
        return c;
    }
    if (r5) {
        c.tunnel = true;
        c.rule = Rule::DirectDisk;
        c.bracelet = *b5w;
        c.blocking = b5res;
        return c;
    }

    auto why = [&](Rule r, const std::string& msg) {
        c.reasons.push_back(std::string(rule_name(r)) + ": " + msg);
    };
    if (b4 == nullptr)
        why(Rule::Prop4, "no 4-bracelet found");
    else
        why(Rule::Prop4, "g not below the 4-bracelet threshold");
    if (p.cusp_count != 1)
        why(Rule::Prop5, "requires a one-cusped pattern");
    else if (b45 == nullptr)
        why(Rule::Prop5, "no 4- or 5-bracelet found");
    else
        why(Rule::Prop5, "g not below the 5-bracelet threshold");
    if (!p.orientable)
        why(Rule::Prop6, "pattern not marked orientable");
    else if (p.g > tol)
        why(Rule::Prop6, "g is nonzero");
    else
        why(Rule::Prop6, "no bracelet of length 4 to 6 found");
    if (!r4_len)
        why(Rule::ElderSibling, "g not below ln 2");
    else {
        std::string ids;
        for (int i : elder.failures) {
            if (!ids.empty()) ids += ", ";
            ids += p.balls[i].id;
        }
        why(Rule::ElderSibling, "no increasing chain for: " + ids);
    }
    if (bracelets.empty())
        why(Rule::DirectDisk, "no bracelet found");
    else if (any_conditional)
        why(Rule::DirectDisk,
            "unblocked bracelets found, but completeness radius too small for an "
            "unconditional verdict");
    else if (c.indeterminate_seen)
        why(Rule::DirectDisk, "blocking test indeterminate on every unblocked candidate");
    else
        why(Rule::DirectDisk, "every bracelet is blocked");
    return c;
}

// Deterministic certificate report: fixed key order, 17 significant digits,
// LF line endings; byte-identical across runs for identical input/options.
inline std::string serialize_certificate(const Certificate& c,
                                         const BallBeamPattern& p) {
    using detail::fmt17;
    std::string s;
    s += "{\n";
    s += std::string("  \"verdict\": \"") + (c.tunnel ? "tunnel" : "inconclusive") +
         "\",\n";
    s += std::string("  \"rule\": ") +
         (c.rule ? "\"" + std::string(rule_name(*c.rule)) + "\"" : "null") + ",\n";

    s += "  \"witness\": {\n";
    s += "    \"g\": " + fmt17(c.g) + ",\n";
    if (c.bracelet) {
        const Bracelet& b = *c.bracelet;
        s += "    \"bracelet\": {\"n\": " + std::to_string(b.n) + ", \"cycle\": [";
        for (size_t i = 0; i < b.chain.size(); ++i) {
            if (i) s += ", ";
            s += "{\"id\": \"" + p.balls[b.chain[i].first].id + "\", \"offset\": [" +
                 std::to_string(b.chain[i].second[0]) + ", " +
                 std::to_string(b.chain[i].second[1]) + "]}";
        }
        s += "], \"min_radius\": " + fmt17(b.min_radius) + "},\n";
    } else {
        s += "    \"bracelet\": null,\n";
    }
    if (c.rule && *c.rule == Rule::ElderSibling) {
        s += "    \"chains\": {";
        bool first = true;
        for (const auto& [orbit, chain] : c.elder.chains) {
            if (!first) s += ", ";
            first = false;
            s += "\"" + p.balls[orbit].id + "\": [";
            for (size_t i = 0; i < chain.size(); ++i) {
                if (i) s += ", ";
                s += "\"" + p.balls[chain[i]].id + "\"";
            }
            s += "]";
        }
        s += "},\n";
    }
    if (c.blocking) {
        s += "    \"not_blocked\": {\"candidates\": " +
             std::to_string(c.blocking->candidates) +
             ", \"required_radius\": " + fmt17(c.blocking->required_radius) + "},\n";
    }
    s += "    \"thresholds\": {\"four_bracelet\": " + fmt17(c.thresholds.t4) +
         ", \"five_bracelet\": " + fmt17(c.thresholds.t5) +
         ", \"elder_sibling\": " + fmt17(c.thresholds.t_es) + "}\n";
    s += "  },\n";

    s += "  \"conditions\": {\n";
    s += "    \"pattern_from_manifold\": \"assumed: the pattern arises from a "
         "maximal cusp and vertical geodesic of a hyperbolic 3-manifold\",\n";
    s += "    \"completeness_radius\": " + fmt17(c.completeness_radius) + ",\n";
    s += std::string("    \"g_snapped_to_zero\": ") +
         (c.g_snapped_to_zero ? "true" : "false") + ",\n";
    s += std::string("    \"indeterminate_crossings\": ") +
         (c.indeterminate_seen ? "true" : "false") + "\n";
    s += "  },\n";

    s += "  \"metadata\": {\n";
    s += std::string("    \"tool\": \"") + kToolVersion + "\",\n";
    s += "    \"tolerance\": " + fmt17(c.options.tol) + ",\n";
    s += "    \"window\": " + std::to_string(c.options.window) + ",\n";
    s += "    \"n_max\": " + std::to_string(c.options.n_max) + ",\n";
    s += "    \"input_digest\": \"" + c.digest + "\",\n";
    s += "    \"applicable_rules\": [";
    for (size_t i = 0; i < c.applicable.size(); ++i) {
        if (i) s += ", ";
        s += "\"" + std::string(rule_name(c.applicable[i])) + "\"";
    }
    s += "],\n";
    s += "    \"reasons\": [";
    for (size_t i = 0; i < c.reasons.size(); ++i) {
        if (i) s += ", ";
        s += "\"" + c.reasons[i] + "\"";
    }
    s += "]\n";
    s += "  }\n";
    s += "}\n";
    return s;
}

}  // namespace tunnelcert
