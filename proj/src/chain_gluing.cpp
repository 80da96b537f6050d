#include "chab/chain_gluing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace chab {

namespace {

// shortest path between two vertices with one edge instance removed
double dijkstra_avoiding(const RootedGraph& g, int src, int dst, int avoid_edge) {
    std::vector<double> dist(g.n, -1.0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, src});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (dist[v] >= 0.0) continue;
        dist[v] = d;
        if (v == dst) return d;
        for (size_t id = 0; id < g.edges.size(); ++id) {
            if (static_cast<int>(id) == avoid_edge) continue;
            const Edge& e = g.edges[id];
            int w = -1;
            if (e.src == v)
                w = e.dst;
            else if (e.dst == v)
                w = e.src;
            else
                continue;
            if (dist[w] < 0.0) heap.push({d + e.weight, w});
        }
    }
    return -1.0;
}

double template_cross_distance(const BlockTemplate& t) {
    double d = dijkstra_avoiding(t.graph, t.left, t.right, -1);
    if (d < 0.0) throw domain_error("block: left and right attachments disconnected");
    return d;
}

}  // namespace

std::optional<double> graph_girth(const RootedGraph& g) {
    std::optional<double> best;
    auto update = [&](double c) {
        if (!best || c < *best) best = c;
    };
    for (size_t id = 0; id < g.edges.size(); ++id) {
        const Edge& e = g.edges[id];
        if (e.src == e.dst) {
            update(e.weight);  // self-loop is a cycle of its own length
            continue;
        }
        double back = dijkstra_avoiding(g, e.src, e.dst, static_cast<int>(id));
        if (back >= 0.0) update(back + e.weight);
    }
    return best;
}

BlockTemplate make_block(std::string name, RootedGraph graph, int left, int right) {
    graph.validate();
    if (left < 0 || left >= graph.n || right < 0 || right >= graph.n)
        throw domain_error("block: attachment vertex out of range");
    if (left == right) throw domain_error("block: left and right attachments coincide");
    if (!is_connected(graph)) throw domain_error("block: graph must be connected");
    BlockTemplate b;
    b.name = std::move(name);
    b.graph = std::move(graph);
    b.left = left;
    b.right = right;
    auto girth = graph_girth(b.graph);
    b.systole = girth ? *girth : std::numeric_limits<double>::infinity();
    return b;
}

void validate_block_pair(const BlockTemplate& a, const BlockTemplate& b) {
    auto girth_b = graph_girth(b.graph);
    double gb = girth_b ? *girth_b : std::numeric_limits<double>::infinity();
    if (!(a.systole < gb))
        throw domain_error("blocks: systole(A) must be smaller than girth(B)");
}

std::pair<BlockTemplate, BlockTemplate> default_block_templates() {
    auto shape = [](double loop1, double loop2) {
        RootedGraph g;
        g.n = 5;  // 0 = left, 1, 2 = center, 3, 4 = right
        g.root = 2;
        g.edges.push_back({0, 1, 0, false, 1.0});
        g.edges.push_back({1, 2, 0, false, 1.0});
        g.edges.push_back({2, 3, 0, false, 1.0});
        g.edges.push_back({3, 4, 0, false, 1.0});
        g.edges.push_back({2, 2, 1, false, loop1});
        g.edges.push_back({2, 2, 2, false, loop2});
        return g;
    };
    BlockTemplate a = make_block("A", shape(1.0, 0.25), 0, 4);
    BlockTemplate b = make_block("B", shape(4.0, 4.0), 0, 4);
    validate_block_pair(a, b);
    return {a, b};
}

GluedChain build_chain(const std::vector<char>& labels, const BlockTemplate& a,
                       const BlockTemplate& b) {
    if (labels.empty() || labels.size() % 2 == 0)
        throw domain_error("chain: need an odd number of blocks (window -W..W)");
    for (char c : labels)
        if (c != 'A' && c != 'B') throw domain_error("chain: labels must be A or B");
    validate_block_pair(a, b);

    GluedChain chain;
    chain.window = (static_cast<int>(labels.size()) - 1) / 2;
    chain.labels = labels;
    chain.graph.n = 0;
    chain.graph.root = 0;

    int prev_right = -1;
    for (size_t j = 0; j < labels.size(); ++j) {
        const BlockTemplate& t = (labels[j] == 'A') ? a : b;
        std::vector<int> map(t.graph.n, -1);
        for (int v = 0; v < t.graph.n; ++v) {
            if (v == t.left && prev_right >= 0)
                map[v] = prev_right;  // identify right(i) with left(i+1)
            else
                map[v] = chain.graph.n++;
        }
        for (const Edge& e : t.graph.edges) {
            Edge c = e;
            c.src = map[e.src];
            c.dst = map[e.dst];
            chain.graph.edges.push_back(c);
        }
        std::vector<int> with_left, all;
        for (int v = 0; v < t.graph.n; ++v) {
            all.push_back(map[v]);
            if (v != t.right) with_left.push_back(map[v]);
        }
        chain.block_vertices.push_back(std::move(with_left));
        chain.block_all_vertices.push_back(std::move(all));
        prev_right = map[t.right];
        if (j == labels.size() / 2) chain.graph.root = map[t.graph.root];
    }
    chain.graph.validate();
    return chain;
}

GluedChain sample_chain(uint64_t seed, int window, double p_a, const BlockTemplate& a,
                        const BlockTemplate& b) {
    if (window < 1) throw domain_error("sample_chain: window must be >= 1");
    if (!(p_a >= 0.0 && p_a <= 1.0)) throw domain_error("sample_chain: p must be in [0,1]");
    std::vector<char> labels;
    labels.reserve(2 * window + 1);
    // one sub-stream per block index: widening the window keeps shared labels
    for (int i = -window; i <= window; ++i) {
        Rng rng(derive_seed(seed, "block-label", static_cast<uint64_t>(i + (1 << 20))));
        labels.push_back(rng.u01() < p_a ? 'A' : 'B');
    }
    return build_chain(labels, a, b);
}

PointedSample sample_pointed(const GluedChain& chain, uint64_t seed, int root_block_offset) {
    int j = chain.window + root_block_offset;
    if (j < 0 || j >= static_cast<int>(chain.block_vertices.size()))
        throw domain_error("sample_pointed: root block outside the window");
    const std::vector<int>& candidates = chain.block_vertices[j];
    Rng rng(derive_seed(seed, "root-vertex"));
    int root = candidates[rng.below(candidates.size())];
    PointedSample out;
    out.graph = chain.graph;
    out.graph.root = root;
    out.origin_label = chain.labels[j];
    out.root = root;
    return out;
}

std::optional<double> local_systole(const RootedGraph& g, int v, double r) {
    if (!(r > 0.0)) throw domain_error("local_systole: radius must be positive");
    RootedGraph ball = extract_ball(g, v, r);
    return graph_girth(ball);
}

Fraction thick_fraction(const GluedChain& chain, double r, double threshold) {
    if (!(r > 0.0) || !(threshold > 0.0))
        throw domain_error("thick_fraction: radius and threshold must be positive");
    long long thick = 0;
    for (int v = 0; v < chain.graph.n; ++v) {
        auto sys = local_systole(chain.graph, v, r);
        if (!sys || *sys >= threshold - kDistanceTol) thick++;
    }
    return Fraction(thick, chain.graph.n);
}

double boundary_safe_radius(int window, const BlockTemplate& a, const BlockTemplate& b) {
    double cross = std::min(template_cross_distance(a), template_cross_distance(b));
    return cross * static_cast<double>(window - 1);
}

LocalStatistics chain_statistics(double p_a, int window, int r_max, uint64_t samples,
                                 uint64_t seed, const BlockTemplate& a,
                                 const BlockTemplate& b, int root_block_offset) {
    if (samples < 1) throw domain_error("chain_statistics: need at least one sample");
    if (r_max < 1) throw domain_error("chain_statistics: r_max must be positive");

    LocalStatistics out;
    out.r_max = r_max;
    out.per_radius.assign(r_max, {});
    std::vector<std::map<std::string, uint64_t>> counts(r_max);
    for (uint64_t s = 0; s < samples; ++s) {
        GluedChain chain = sample_chain(derive_seed(seed, "chain", s), window, p_a, a, b);
        PointedSample pt =
            sample_pointed(chain, derive_seed(seed, "root", s), root_block_offset);
        for (int r = 1; r <= r_max; ++r) {
            RootedGraph ball = extract_ball(pt.graph, pt.root, static_cast<double>(r));
            counts[r - 1][canonical_code(ball)]++;
        }
    }
    out.sample_count = samples;
    out.exact = false;
    for (int r = 1; r <= r_max; ++r)
        for (const auto& [code, c] : counts[r - 1])
            out.per_radius[r - 1][code] =
                static_cast<double>(c) / static_cast<double>(samples);
    return out;
}

}  // namespace chab
