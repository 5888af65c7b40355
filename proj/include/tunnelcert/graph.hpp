#pragma once

// Quotient ball-and-beam graph and enumeration of n-bracelets through the
// ball at infinity in the developed cover.

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tunnelcert/pattern.hpp"

namespace tunnelcert {

// One vertex per ball orbit plus the Infinity vertex; one edge per beam
// orbit, labeled with the lattice offset of its second end. Infinity-incident
// edges carry no offset.
struct QuotientGraph {
    struct Edge {
        int beam = -1;   // index into pattern.beams
        bool to_inf = false;
        int u = -1, v = -1;  // ball orbit indices; for vertical edges v == -1
        Offset offset{0, 0};
    };
    int ball_count = 0;
    std::vector<Edge> edges;
};

inline QuotientGraph build_quotient_graph(const BallBeamPattern& p) {
    QuotientGraph gr;
    gr.ball_count = static_cast<int>(p.balls.size());
    for (size_t k = 0; k < p.beams.size(); ++k) {
        const BeamRef& br = p.beams[k];
        QuotientGraph::Edge e;
        e.beam = static_cast<int>(k);
        if (br.a.inf || br.b.inf) {
            e.to_inf = true;
            e.u = br.a.inf ? br.b.ball : br.a.ball;
        } else {
            e.u = br.a.ball;
            e.v = br.b.ball;
            e.offset = br.b.offset;
        }
        gr.edges.push_back(e);
    }
    return gr;
}

// True iff every vertex reaches the Infinity vertex in the quotient graph.
inline bool is_connected(const QuotientGraph& gr) {
    const int n = gr.ball_count;
    if (n == 0) return true;
    std::vector<std::vector<int>> adj(n + 1);  // vertex n = Infinity
    for (const auto& e : gr.edges) {
        const int a = e.u;
        const int b = e.to_inf ? n : e.v;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<char> seen(n + 1, 0);
    std::queue<int> q;
    q.push(n);
    seen[n] = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                q.push(v);
            }
    }
    for (int v = 0; v <= n; ++v)
        if (!seen[v]) return false;
    return true;
}

// A concrete cycle of n horoballs through the ball at infinity: the finite
// chain in cyclic order (first entry anchored at offset (0,0)) together with
// the n beam orbits traversed, opening and closing with vertical beams.
struct Bracelet {
    int n = 0;
    std::vector<std::pair<int, Offset>> chain;  // finite balls, cycle order
    std::vector<int> beam_orbits;               // size n: vertical, ..., vertical
    double min_radius = 0.0;
    std::string key;
};

namespace detail {

inline std::string bracelet_key_dir(const std::vector<std::pair<int, Offset>>& chain,
                                    const std::vector<int>& beams) {
    // translation-normalize so the first finite ball sits at offset (0,0)
    const Offset base = chain.front().second;
    std::ostringstream o;
    o << "v" << beams.front();
    for (size_t i = 0; i < chain.size(); ++i) {
        o << "|" << chain[i].first << "@" << chain[i].second[0] - base[0] << ","
          << chain[i].second[1] - base[1];
        o << ";e" << beams[i + 1];
    }
    return o.str();
}

inline std::string bracelet_key(const Bracelet& b) {
    const std::string fwd = bracelet_key_dir(b.chain, b.beam_orbits);
    std::vector<std::pair<int, Offset>> rchain(b.chain.rbegin(), b.chain.rend());
    std::vector<int> rbeams(b.beam_orbits.rbegin(), b.beam_orbits.rend());
    const std::string rev = bracelet_key_dir(rchain, rbeams);
    return std::min(fwd, rev);
}

}  // namespace detail

// All cycles through Infinity of length 3 <= n <= n_max whose finite portion
// stays within [-window, window]^2, developed in the cover and deduplicated
// up to lattice translation, cyclic rotation, and reversal. Ordered by
// (n, canonical key).
inline std::vector<Bracelet> enumerate_bracelets(const BallBeamPattern& p, int n_max,
                                                 int window) {
    if (n_max < 3) throw std::invalid_argument("enumerate_bracelets: n_max >= 3");
    const QuotientGraph gr = build_quotient_graph(p);

    struct Step {
        int edge;  // edge index in gr.edges
        int to;    // target ball
        Offset delta;
    };
    std::vector<std::vector<Step>> finite_adj(gr.ball_count);
    std::vector<std::vector<int>> vertical(gr.ball_count);
    for (size_t ei = 0; ei < gr.edges.size(); ++ei) {
        const auto& e = gr.edges[ei];
        if (e.to_inf) {
            vertical[e.u].push_back(static_cast<int>(ei));
        } else {
            finite_adj[e.u].push_back({static_cast<int>(ei), e.v, e.offset});
            finite_adj[e.v].push_back(
                {static_cast<int>(ei), e.u, {-e.offset[0], -e.offset[1]}});
        }
    }

    std::set<std::string> seen;
    std::vector<Bracelet> out;
    std::vector<std::pair<int, Offset>> chain;
    std::vector<int> beams;

    auto record = [&](int closing_vertical) {
        Bracelet b;
        b.chain = chain;
        b.beam_orbits = beams;
        b.beam_orbits.push_back(closing_vertical);
        b.n = static_cast<int>(chain.size()) + 1;
        b.min_radius = p.balls[chain[0].first].ball.radius;
        for (const auto& [bi, off] : chain)
            b.min_radius = std::min(b.min_radius, p.balls[bi].ball.radius);
        b.key = detail::bracelet_key(b);
        if (seen.insert(b.key).second) out.push_back(std::move(b));
    };

    auto on_chain = [&](int ball, Offset off) {
        for (const auto& [bi, o] : chain)
            if (bi == ball && o == off) return true;
        return false;
    };

    std::function<void()> dfs = [&]() {
        const auto [u, uo] = chain.back();
        if (chain.size() >= 2)
            for (int vk : vertical[u]) record(vk);
        if (static_cast<int>(chain.size()) >= n_max - 1) return;
        for (const Step& s : finite_adj[u]) {
            const Offset no{uo[0] + s.delta[0], uo[1] + s.delta[1]};
            if (std::abs(no[0]) > window || std::abs(no[1]) > window) continue;
            if (on_chain(s.to, no)) continue;
            chain.push_back({s.to, no});
            beams.push_back(s.edge);
            dfs();
            chain.pop_back();
            beams.pop_back();
        }
    };

    for (int v0 = 0; v0 < gr.ball_count; ++v0) {
        for (int vk : vertical[v0]) {
            chain = {{v0, Offset{0, 0}}};
            beams = {vk};
            dfs();
        }
    }

    std::sort(out.begin(), out.end(), [](const Bracelet& a, const Bracelet& b) {
        return a.n != b.n ? a.n < b.n : a.key < b.key;
    });
    return out;
}

}  // namespace tunnelcert
