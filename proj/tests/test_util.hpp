#pragma once

// Shared generators and independent oracles for the test suites. Oracles here
// deliberately avoid the library's own algorithms: isomorphism by permutation
// search, balls by edge relaxation, integrals by exact step-function sums.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "chab/chabauty_rn.hpp"
#include "chab/common.hpp"
#include "chab/free_group.hpp"
#include "chab/gh_metric.hpp"
#include "chab/rooted_graph.hpp"

namespace chab::testutil {

// --- random instances -------------------------------------------------------

inline RootedGraph random_connected_graph(int n, int extra_edges, uint64_t seed) {
    Rng rng(seed);
    RootedGraph g;
    g.n = n;
    g.root = 0;
    std::set<std::pair<int, int>> used;
    for (int v = 1; v < n; ++v) {
        int parent = static_cast<int>(rng.below(v));
        g.edges.push_back({parent, v, 0, false, 1.0});
        used.insert({parent, v});
    }
    for (int t = 0; t < extra_edges; ++t) {
        int a = static_cast<int>(rng.below(n));
        int b = static_cast<int>(rng.below(n));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (!used.insert({a, b}).second) continue;
        g.edges.push_back({a, b, 0, false, 1.0});
    }
    return g;
}

// configuration model, restarted until simple
inline RootedGraph random_regular_graph(int n, int degree, uint64_t seed) {
    for (uint64_t attempt = 0;; ++attempt) {
        Rng rng(derive_seed(seed, "config-model", attempt));
        std::vector<int> stubs(static_cast<size_t>(n) * degree);
        for (size_t i = 0; i < stubs.size(); ++i) stubs[i] = static_cast<int>(i / degree);
        for (size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng.below(i)]);
        std::set<std::pair<int, int>> seen;
        bool simple = true;
        RootedGraph g;
        g.n = n;
        g.root = 0;
        for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int a = stubs[i], b = stubs[i + 1];
            if (a == b) {
                simple = false;
                break;
            }
            if (a > b) std::swap(a, b);
            if (!seen.insert({a, b}).second) {
                simple = false;
                break;
            }
            g.edges.push_back({a, b, 0, false, 1.0});
        }
        if (simple && is_connected(g)) return g;
    }
}

inline Word random_reduced_word(Rng& rng, int rank, int length) {
    Word w;
    while (static_cast<int>(w.size()) < length) {
        int letter = static_cast<int>(rng.below(rank)) + 1;
        if (rng.below(2)) letter = -letter;
        if (!w.empty() && w.back() == -letter) continue;
        w.push_back(letter);
    }
    return w;
}

inline std::vector<std::vector<int>> random_transitive_permutations(int m, int count,
                                                                    uint64_t seed) {
    for (uint64_t attempt = 0;; ++attempt) {
        Rng rng(derive_seed(seed, "perms", attempt));
        std::vector<std::vector<int>> perms(count, std::vector<int>(m));
        for (auto& p : perms) {
            std::iota(p.begin(), p.end(), 0);
            for (size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
        }
        // transitivity of the joint action
        std::vector<char> seen(m, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int reached = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const auto& p : perms) {
                for (int w : {p[v], static_cast<int>(std::find(p.begin(), p.end(), v) -
                                                     p.begin())}) {
                    if (!seen[w]) {
                        seen[w] = 1;
                        reached++;
                        stack.push_back(w);
                    }
                }
            }
        }
        if (reached == m) return perms;
    }
}

// random points in R^3 give an exactly symmetric metric with valid triangles
inline FiniteMetricSpace random_metric_space(int m, uint64_t seed) {
    Rng rng(seed);
    std::vector<std::array<double, 3>> pts(m);
    for (auto& p : pts)
        for (double& c : p) c = rng.u01() * 4.0 - 2.0;
    FiniteMetricSpace x;
    x.m = m;
    x.basepoint = 0;
    x.d.assign(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c) s += (pts[i][c] - pts[j][c]) * (pts[i][c] - pts[j][c]);
            double dij = std::sqrt(s);
            x.d[static_cast<size_t>(i) * m + j] = dij;
            x.d[static_cast<size_t>(j) * m + i] = dij;
        }
    for (int i = 0; i < m; ++i) x.d[static_cast<size_t>(i) * m + i] = 0.0;
    return x;
}

// random closed subgroup of R^2 with basis vectors of norm in [0.5, 2], so
// distinct subgroups differ inside a radius-4 ball
inline ClosedSubgroupRn random_subgroup_r2(uint64_t seed) {
    Rng rng(seed);
    auto unit = [&](double angle) { return std::vector<double>{std::cos(angle), std::sin(angle)}; };
    auto scaled = [&](double lo, double hi) {
        double angle = rng.u01() * 6.283185307179586;
        double len = lo + rng.u01() * (hi - lo);
        auto v = unit(angle);
        v[0] *= len;
        v[1] *= len;
        return v;
    };
    switch (rng.below(6)) {
        case 0: return make_subgroup(2, {}, {});                            // trivial
        case 1: return make_subgroup(2, {}, {scaled(0.5, 2.0)});            // rank-1 lattice
        case 2: {                                                           // rank-2 lattice
            while (true) {
                auto v1 = scaled(0.5, 2.0), v2 = scaled(0.5, 2.0);
                double cross = v1[0] * v2[1] - v1[1] * v2[0];
                if (std::abs(cross) < 0.3) continue;
                return make_subgroup(2, {}, {v1, v2});
            }
        }
        case 3: return make_subgroup(2, {scaled(0.5, 2.0)}, {});            // line
        case 4: {                                                           // line + lattice
            while (true) {
                auto s = scaled(0.5, 2.0), l = scaled(0.5, 2.0);
                double cross = s[0] * l[1] - s[1] * l[0];
                if (std::abs(cross) < 0.3) continue;
                return make_subgroup(2, {s}, {l});
            }
        }
        default: return make_subgroup(2, {{1.0, 0.0}, {0.0, 1.0}}, {});     // whole plane
    }
}

// same subgroup, different presentation: unimodular lattice transform and a
// rescaled subspace basis
inline ClosedSubgroupRn repackaged(const ClosedSubgroupRn& h, uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> sub, lat;
    for (const Vec4& v : h.subspace) {
        double f = 0.5 + rng.u01() * 3.0;
        sub.push_back({v[0] * f, v[1] * f});
    }
    if (h.lattice.size() == 1) {
        const Vec4& v = h.lattice[0];
        double sign = rng.below(2) ? 1.0 : -1.0;
        lat.push_back({v[0] * sign, v[1] * sign});
    } else if (h.lattice.size() == 2) {
        // [[1, k], [0, 1]]-type unimodular mix
        long long k = static_cast<long long>(rng.below(5)) - 2;
        const Vec4& v1 = h.lattice[0];
        const Vec4& v2 = h.lattice[1];
        lat.push_back({v1[0] + k * v2[0], v1[1] + k * v2[1]});
        lat.push_back({v2[0], v2[1]});
    }
    return make_subgroup(h.dim, sub, lat);
}

// --- oracles ----------------------------------------------------------------

// ball membership by plain edge relaxation (no priority queue)
inline std::vector<int> bf_ball_members(const RootedGraph& g, int center, double r) {
    std::vector<double> dist(g.n, std::numeric_limits<double>::infinity());
    dist[center] = 0.0;
    for (int pass = 0; pass < g.n; ++pass) {
        bool changed = false;
        for (const Edge& e : g.edges) {
            if (dist[e.src] + e.weight < dist[e.dst]) {
                dist[e.dst] = dist[e.src] + e.weight;
                changed = true;
            }
            if (dist[e.dst] + e.weight < dist[e.src]) {
                dist[e.src] = dist[e.dst] + e.weight;
                changed = true;
            }
        }
        if (!changed) break;
    }
    std::vector<int> members;
    for (int v = 0; v < g.n; ++v)
        if (dist[v] <= r + 1e-9) members.push_back(v);
    return members;
}

// root-, mark-, label-, orientation- and weight-preserving isomorphism by
// permutation search (instances <= 8 vertices)
inline bool bf_isomorphic(const RootedGraph& a, const RootedGraph& b, int mark_a = -1,
                          int mark_b = -1) {
    if (a.n != b.n || a.edges.size() != b.edges.size()) return false;
    auto edge_key = [](const Edge& e, const std::vector<int>& perm) {
        long long wq = llround(e.weight * 1e6);
        int s = perm[e.src], d = perm[e.dst];
        if (!e.oriented && s > d) std::swap(s, d);
        return std::tuple<int, int, int, bool, long long>{s, d, e.label, e.oriented, wq};
    };
    std::vector<int> id(a.n);
    std::iota(id.begin(), id.end(), 0);
    std::multiset<std::tuple<int, int, int, bool, long long>> bkeys;
    for (const Edge& e : b.edges) bkeys.insert(edge_key(e, id));

    std::vector<int> perm(a.n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (perm[a.root] != b.root) continue;
        if (mark_a >= 0 && perm[mark_a] != mark_b) continue;
        std::multiset<std::tuple<int, int, int, bool, long long>> akeys;
        for (const Edge& e : a.edges) akeys.insert(edge_key(e, perm));
        if (akeys == bkeys) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// relabel vertices of a graph by a random permutation (root follows)
inline RootedGraph shuffled(const RootedGraph& g, uint64_t seed) {
    Rng rng(seed);
    std::vector<int> perm(g.n);
    std::iota(perm.begin(), perm.end(), 0);
    for (size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    RootedGraph out;
    out.n = g.n;
    out.root = perm[g.root];
    for (Edge e : g.edges) {
        e.src = perm[e.src];
        e.dst = perm[e.dst];
        out.edges.push_back(e);
    }
    return out;
}

// exact Hausdorff distance of small point sets in R^1
inline double bf_hd_1d(const std::vector<double>& a, const std::vector<double>& b) {
    auto one = [](const std::vector<double>& s, const std::vector<double>& t) {
        double sup = 0.0;
        for (double x : s) {
            double best = std::numeric_limits<double>::infinity();
            for (double y : t) best = std::min(best, std::abs(x - y));
            sup = std::max(sup, best);
        }
        return sup;
    };
    return std::max(one(a, b), one(b, a));
}

// exact step-function integral of rho(alpha Z, beta Z) over [0, r_cut]:
// the integrand is constant between entry radii, so the integral is a finite
// sum of Hd * (e^-a - e^-b) terms
inline double exact_rho_1d_lattices(double alpha, double beta, double r_cut) {
    std::vector<double> breaks{0.0, r_cut};
    for (double m = alpha; m <= r_cut + 1e-12; m += alpha) breaks.push_back(m);
    for (double m = beta; m <= r_cut + 1e-12; m += beta) breaks.push_back(m);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    auto points_in = [](double spacing, double r) {
        std::vector<double> pts{0.0};
        for (double m = spacing; m <= r + 1e-12; m += spacing) {
            pts.push_back(m);
            pts.push_back(-m);
        }
        return pts;
    };
    double total = 0.0;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        double lo = breaks[i], hi = breaks[i + 1];
        if (hi - lo < 1e-14) continue;
        double mid = 0.5 * (lo + hi);
        double hd = bf_hd_1d(points_in(alpha, mid), points_in(beta, mid));
        total += hd * (std::exp(-lo) - std::exp(-hi));
    }
    return total;
}

}  // namespace chab::testutil
