#include "chab/rooted_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <tuple>

namespace chab {

namespace {

// Undirected incidence lists with edge ids; orientation is ignored for
// distances (an oriented edge is crossable both ways at its weight).
struct Adjacency {
    int n = 0;
    std::vector<int> offset;
    std::vector<std::pair<int, int>> inc;  // (neighbor, edge id)

    explicit Adjacency(const RootedGraph& g) : n(g.n), offset(g.n + 1, 0) {
        for (const Edge& e : g.edges) {
            offset[e.src + 1]++;
            if (e.dst != e.src) offset[e.dst + 1]++;
        }
        for (int v = 0; v < n; ++v) offset[v + 1] += offset[v];
        inc.resize(offset[n]);
        std::vector<int> cursor(offset.begin(), offset.end() - 1);
        for (size_t id = 0; id < g.edges.size(); ++id) {
            const Edge& e = g.edges[id];
            inc[cursor[e.src]++] = {e.dst, static_cast<int>(id)};
            if (e.dst != e.src) inc[cursor[e.dst]++] = {e.src, static_cast<int>(id)};
        }
    }
};

// Bounded Dijkstra; returns members sorted by (quantized distance, id).
void ball_members(const RootedGraph& g, const Adjacency& adj, int center, double r,
                  std::vector<int>& members, std::vector<double>& dist) {
    dist.assign(g.n, -1.0);
    members.clear();
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, center});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (dist[v] >= 0.0) continue;
        dist[v] = d;
        members.push_back(v);
        for (int i = adj.offset[v]; i < adj.offset[v + 1]; ++i) {
            auto [w, id] = adj.inc[i];
            double nd = d + g.edges[id].weight;
            if (dist[w] < 0.0 && nd <= r + kDistanceTol) heap.push({nd, w});
        }
    }
    std::sort(members.begin(), members.end(), [&](int a, int b) {
        long long qa = llround(dist[a] * 1e9), qb = llround(dist[b] * 1e9);
        return qa != qb ? qa < qb : a < b;
    });
}

// --- canonical code engine -------------------------------------------------

// Arc kinds: an unoriented edge yields symmetric arcs, an oriented edge a
// forward/backward pair, loops their own kinds.
enum ArcKind : uint8_t { kBoth = 0, kOut = 1, kIn = 2, kSelf = 3, kSelfOriented = 4 };

struct ArcKey {
    int label = 0;
    uint8_t kind = kBoth;
    long long wq = 0;  // weight on a 1e-6 grid

    friend bool operator<(const ArcKey& a, const ArcKey& b) {
        return std::tie(a.label, a.kind, a.wq) < std::tie(b.label, b.kind, b.wq);
    }
    friend bool operator==(const ArcKey& a, const ArcKey& b) {
        return a.label == b.label && a.kind == b.kind && a.wq == b.wq;
    }
};

struct CodeProblem {
    int n = 0;
    int root = 0;
    int marked = -1;
    std::vector<ArcKey> keys;                            // sorted unique key table
    std::vector<std::vector<std::pair<int, int>>> arcs;  // per vertex: (key id, neighbor)
    std::vector<int> init_color;                         // 0 plain, 1 root, 2 mark, 3 root+mark
};

CodeProblem build_problem(const RootedGraph& g, int marked) {
    CodeProblem p;
    p.n = g.n;
    p.root = g.root;
    p.marked = marked;
    std::vector<std::tuple<int, int, ArcKey>> raw;  // (vertex, neighbor, key)
    raw.reserve(g.edges.size() * 2);
    for (const Edge& e : g.edges) {
        long long wq = llround(e.weight * 1e6);
        if (e.src == e.dst) {
            raw.emplace_back(e.src, e.src,
                             ArcKey{e.label, e.oriented ? kSelfOriented : kSelf, wq});
        } else if (e.oriented) {
            raw.emplace_back(e.src, e.dst, ArcKey{e.label, kOut, wq});
            raw.emplace_back(e.dst, e.src, ArcKey{e.label, kIn, wq});
        } else {
            raw.emplace_back(e.src, e.dst, ArcKey{e.label, kBoth, wq});
            raw.emplace_back(e.dst, e.src, ArcKey{e.label, kBoth, wq});
        }
    }
    for (auto& [v, w, k] : raw) p.keys.push_back(k);
    std::sort(p.keys.begin(), p.keys.end());
    p.keys.erase(std::unique(p.keys.begin(), p.keys.end()), p.keys.end());
    p.arcs.assign(p.n, {});
    for (auto& [v, w, k] : raw) {
        int id = static_cast<int>(std::lower_bound(p.keys.begin(), p.keys.end(), k) -
                                  p.keys.begin());
        p.arcs[v].push_back({id, w});
    }
    p.init_color.assign(p.n, 0);
    p.init_color[g.root] |= 1;
    if (marked >= 0) p.init_color[marked] |= 2;
    return p;
}

// One-dimensional refinement to a stable partition; colors are ranks of
// sorted signatures, hence assigned isomorphism-invariantly.
void refine(const CodeProblem& p, std::vector<int>& color) {
    using Sig = std::pair<int, std::vector<std::pair<int, int>>>;
    std::vector<Sig> sig(p.n);
    int classes = 0;
    {
        std::set<int> distinct(color.begin(), color.end());
        classes = static_cast<int>(distinct.size());
    }
    while (true) {
        for (int v = 0; v < p.n; ++v) {
            sig[v].first = color[v];
            sig[v].second.clear();
            for (auto [key, w] : p.arcs[v]) sig[v].second.push_back({key, color[w]});
            std::sort(sig[v].second.begin(), sig[v].second.end());
        }
        std::vector<Sig> sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (int v = 0; v < p.n; ++v) {
            color[v] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
        }
        int nc = static_cast<int>(sorted.size());
        if (nc == classes) return;
        classes = nc;
    }
}

void append_u32(std::string& s, uint32_t x) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}
void append_i64(std::string& s, int64_t x) {
    for (int i = 0; i < 8; ++i)
        s.push_back(static_cast<char>((static_cast<uint64_t>(x) >> (8 * i)) & 0xff));
}

std::string certificate(const CodeProblem& p, const std::vector<int>& color) {
    // discrete partition: color is a permutation rank
    std::vector<int> order(p.n);
    for (int v = 0; v < p.n; ++v) order[color[v]] = v;
    std::string out;
    append_u32(out, static_cast<uint32_t>(p.n));
    // canonical positions of the distinguished vertices
    append_u32(out, static_cast<uint32_t>(color[p.root]));
    append_u32(out, p.marked >= 0 ? static_cast<uint32_t>(color[p.marked]) : 0xffffffffu);
    append_u32(out, static_cast<uint32_t>(p.keys.size()));
    for (const ArcKey& k : p.keys) {
        append_u32(out, static_cast<uint32_t>(k.label));
        out.push_back(static_cast<char>(k.kind));
        append_i64(out, k.wq);
    }
    for (int rank = 0; rank < p.n; ++rank) {
        int v = order[rank];
        std::vector<std::pair<int, int>> arcs;
        arcs.reserve(p.arcs[v].size());
        for (auto [key, w] : p.arcs[v]) arcs.push_back({key, color[w]});
        std::sort(arcs.begin(), arcs.end());
        append_u32(out, static_cast<uint32_t>(arcs.size()));
        for (auto [key, cw] : arcs) {
            append_u32(out, static_cast<uint32_t>(key));
            append_u32(out, static_cast<uint32_t>(cw));
        }
    }
    return out;
}

void search_min(const CodeProblem& p, std::vector<int> color, std::string& best,
                bool& have_best) {
    refine(p, color);
    int cell_color = -1;
    int classes = 0;
    {
        std::vector<int> count(p.n, 0);
        for (int v = 0; v < p.n; ++v) count[color[v]]++;
        for (int c = 0; c < p.n; ++c) {
            if (count[c] > 0) classes++;
            if (count[c] > 1 && cell_color < 0) cell_color = c;
        }
    }
    if (cell_color < 0) {
        std::string cert = certificate(p, color);
        if (!have_best || cert < best) {
            best = std::move(cert);
            have_best = true;
        }
        return;
    }
    // individualize every vertex of the first non-singleton cell
    for (int v = 0; v < p.n; ++v) {
        if (color[v] != cell_color) continue;
        std::vector<int> next = color;
        next[v] = p.n + 1;  // unique high color; refine re-ranks canonically
        search_min(p, std::move(next), best, have_best);
    }
}

std::string canonical_bytes(const RootedGraph& g, int marked, int max_vertices) {
    if (g.n > max_vertices)
        throw capacity_error("canonical_code: ball has " + std::to_string(g.n) +
                             " vertices, cap is " + std::to_string(max_vertices));
    CodeProblem p = build_problem(g, marked);
    std::string best;
    bool have = false;
    search_min(p, p.init_color, best, have);
    return best;
}

int edge_count_induced(const Adjacency& adj, const std::vector<int>& members,
                       std::vector<int>& stamp, std::vector<int>& estamp, int tick) {
    for (int v : members) stamp[v] = tick;
    int count = 0;
    for (int v : members) {
        for (int i = adj.offset[v]; i < adj.offset[v + 1]; ++i) {
            auto [w, id] = adj.inc[i];
            if (estamp[id] == tick) continue;
            if (stamp[w] == tick) {
                estamp[id] = tick;
                count++;
            }
        }
    }
    return count;
}

}  // namespace

void RootedGraph::validate() const {
    if (n <= 0) throw domain_error("graph: vertex_count must be positive");
    if (root < 0 || root >= n) throw domain_error("graph: root out of range");
    std::set<std::tuple<int, int, int, bool>> seen;
    for (const Edge& e : edges) {
        if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
            throw domain_error("graph: edge endpoint out of range");
        if (e.label < 0) throw domain_error("graph: negative edge label");
        if (!(e.weight > 0.0)) throw domain_error("graph: edge weight must be positive");
        if (!seen.insert({e.src, e.dst, e.label, e.oriented}).second)
            throw domain_error("graph: duplicate (src, dst, label, orientation) edge");
    }
}

Ball extract_ball_ex(const RootedGraph& g, int center, double r) {
    if (center < 0 || center >= g.n) throw domain_error("extract_ball: invalid center id");
    if (r < 0.0) throw domain_error("extract_ball: negative radius");
    Adjacency adj(g);
    std::vector<int> members;
    std::vector<double> dist;
    ball_members(g, adj, center, r, members, dist);

    Ball out;
    out.graph.n = static_cast<int>(members.size());
    out.graph.root = 0;  // center has the unique zero distance
    out.original_id = members;
    out.distance.reserve(members.size());
    std::vector<int> new_id(g.n, -1);
    for (size_t i = 0; i < members.size(); ++i) {
        new_id[members[i]] = static_cast<int>(i);
        out.distance.push_back(dist[members[i]]);
    }
    if (r > 0.0) {
        for (const Edge& e : g.edges) {
            if (new_id[e.src] >= 0 && new_id[e.dst] >= 0) {
                Edge c = e;
                c.src = new_id[e.src];
                c.dst = new_id[e.dst];
                out.graph.edges.push_back(c);
            }
        }
        std::sort(out.graph.edges.begin(), out.graph.edges.end(),
                  [](const Edge& a, const Edge& b) {
                      return std::tie(a.src, a.dst, a.label, a.oriented, a.weight) <
                             std::tie(b.src, b.dst, b.label, b.oriented, b.weight);
                  });
    }
    return out;
}

RootedGraph extract_ball(const RootedGraph& g, int center, double r) {
    return extract_ball_ex(g, center, r).graph;
}

std::string canonical_code(const RootedGraph& ball, int max_vertices) {
    return to_hex(canonical_bytes(ball, -1, max_vertices));
}

std::string canonical_code_marked(const RootedGraph& ball, int marked, int max_vertices) {
    if (marked < 0 || marked >= ball.n)
        throw domain_error("canonical_code_marked: mark out of range");
    return to_hex(canonical_bytes(ball, marked, max_vertices));
}

BallCode ball_code(const RootedGraph& g, int center, int radius, int max_vertices) {
    return BallCode{radius,
                    canonical_code(extract_ball(g, center, static_cast<double>(radius)),
                                   max_vertices)};
}

Fraction tree_ball_fraction(const RootedGraph& g, double r) {
    if (!(r > 0.0)) throw domain_error("tree_ball_fraction: radius must be positive");
    Adjacency adj(g);
    std::vector<int> members, stamp(g.n, -1), estamp(g.edges.size(), -1);
    std::vector<double> dist;
    long long trees = 0;
    for (int v = 0; v < g.n; ++v) {
        ball_members(g, adj, v, r, members, dist);
        int edges = edge_count_induced(adj, members, stamp, estamp, v);
        // balls are connected, so acyclic iff |E| = |V| - 1
        if (edges == static_cast<int>(members.size()) - 1) trees++;
    }
    return Fraction(trees, g.n);
}

bool is_connected(const RootedGraph& g) {
    Adjacency adj(g);
    std::vector<int> members;
    std::vector<double> dist;
    ball_members(g, adj, g.root, std::numeric_limits<double>::infinity(), members, dist);
    return static_cast<int>(members.size()) == g.n;
}

CheegerResult cheeger_constant(const RootedGraph& g, CheegerMode mode) {
    if (!is_connected(g)) throw domain_error("cheeger_constant: graph is disconnected");
    if (g.n < 2) throw domain_error("cheeger_constant: need at least 2 vertices");

    if (mode == CheegerMode::exact) {
        if (g.n > 20)
            throw capacity_error("cheeger_constant: exact mode capped at 20 vertices");
        Fraction best(0, 1);
        bool have = false;
        const uint32_t full = (1u << g.n) - 1;
        for (uint32_t mask = 1; mask < full; ++mask) {
            int size = __builtin_popcount(mask);
            if (2 * size > g.n) continue;
            long long cut = 0;
            for (const Edge& e : g.edges) {
                bool a = (mask >> e.src) & 1, b = (mask >> e.dst) & 1;
                if (a != b) cut++;
            }
            Fraction h(cut, size);
            if (!have || h < best) {
                best = h;
                have = true;
            }
        }
        return {best, true};
    }

    // degree-ordered sweep: prefixes of the vertex order sorted by degree
    std::vector<int> degree(g.n, 0);
    for (const Edge& e : g.edges) {
        if (e.src == e.dst) continue;
        degree[e.src]++;
        degree[e.dst]++;
    }
    std::vector<int> order(g.n);
    for (int v = 0; v < g.n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return degree[a] != degree[b] ? degree[a] < degree[b] : a < b;
    });
    Adjacency adj(g);
    std::vector<char> in(g.n, 0);
    long long cut = 0;
    Fraction best(0, 1);
    bool have = false;
    for (int k = 1; 2 * k <= g.n; ++k) {
        int v = order[k - 1];
        for (int i = adj.offset[v]; i < adj.offset[v + 1]; ++i) {
            auto [w, id] = adj.inc[i];
            if (w == v) continue;
            cut += in[w] ? -1 : +1;
        }
        in[v] = 1;
        Fraction h(cut, k);
        if (!have || h < best) {
            best = h;
            have = true;
        }
    }
    return {best, false};
}

RootedGraph cycle_graph(int n, int label) {
    if (n < 2) throw domain_error("cycle_graph: need n >= 2");
    RootedGraph g;
    g.n = n;
    g.root = 0;
    for (int v = 0; v < n; ++v) g.edges.push_back({v, (v + 1) % n, label, false, 1.0});
    return g;
}

RootedGraph path_graph(int n, int root, int label) {
    RootedGraph g;
    g.n = n;
    g.root = root;
    for (int v = 0; v + 1 < n; ++v) g.edges.push_back({v, v + 1, label, false, 1.0});
    return g;
}

}  // namespace chab
