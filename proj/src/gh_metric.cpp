#include "chab/gh_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chab {

namespace {

std::vector<double> eccentricities(const FiniteMetricSpace& x) {
    std::vector<double> ecc(x.m, 0.0);
    for (int i = 0; i < x.m; ++i)
        for (int j = 0; j < x.m; ++j) ecc[i] = std::max(ecc[i], x.at(i, j));
    return ecc;
}

double diameter(const FiniteMetricSpace& x) {
    double d = 0.0;
    for (double v : x.d) d = std::max(d, v);
    return d;
}

// Hausdorff distance between two finite subsets of the line.
double hd_1d(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    auto one_sided = [](const std::vector<double>& s, const std::vector<double>& t) {
        double sup = 0.0;
        for (double v : s) {
            auto it = std::lower_bound(t.begin(), t.end(), v);
            double best = std::numeric_limits<double>::infinity();
            if (it != t.end()) best = std::min(best, *it - v);
            if (it != t.begin()) best = std::min(best, v - *(it - 1));
            sup = std::max(sup, best);
        }
        return sup;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

struct Pair {
    int x, y;
};

double pair_distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                       const std::vector<Pair>& chosen, const Pair& p) {
    double dis = 0.0;
    for (const Pair& q : chosen)
        dis = std::max(dis, std::abs(x.at(p.x, q.x) - y.at(p.y, q.y)));
    return dis;
}

// order of points by descending eccentricity, ties by index
std::vector<int> ecc_order(const FiniteMetricSpace& x) {
    std::vector<double> ecc = eccentricities(x);
    std::vector<int> order(x.m);
    for (int i = 0; i < x.m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return ecc[a] != ecc[b] ? ecc[a] > ecc[b] : a < b;
    });
    return order;
}

// greedy correspondence containing `seed` pairs; returns its distortion
double greedy_distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                         std::vector<Pair> chosen) {
    double dis = 0.0;
    for (const Pair& p : chosen)
        for (const Pair& q : chosen)
            dis = std::max(dis, std::abs(x.at(p.x, q.x) - y.at(p.y, q.y)));
    std::vector<char> x_done(x.m, 0), y_done(y.m, 0);
    for (const Pair& p : chosen) {
        x_done[p.x] = 1;
        y_done[p.y] = 1;
    }
    for (int xi : ecc_order(x)) {
        if (x_done[xi]) continue;
        int best_y = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int yi = 0; yi < y.m; ++yi) {
            double d = pair_distortion(x, y, chosen, {xi, yi});
            if (d < best) {
                best = d;
                best_y = yi;
            }
        }
        chosen.push_back({xi, best_y});
        y_done[best_y] = 1;
        dis = std::max(dis, best);
    }
    for (int yi : ecc_order(y)) {
        if (y_done[yi]) continue;
        int best_x = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int xi = 0; xi < x.m; ++xi) {
            double d = pair_distortion(x, y, chosen, {xi, yi});
            if (d < best) {
                best = d;
                best_x = xi;
            }
        }
        chosen.push_back({best_x, yi});
        dis = std::max(dis, best);
    }
    return dis;
}

struct BnB {
    const FiniteMetricSpace& x;
    const FiniteMetricSpace& y;
    std::vector<int> xs, ys;  // eccentricity orders
    std::vector<Pair> chosen;
    std::vector<char> y_covered;
    double best;

    BnB(const FiniteMetricSpace& x_, const FiniteMetricSpace& y_, double init)
        : x(x_), y(y_), xs(ecc_order(x_)), ys(ecc_order(y_)), y_covered(y_.m, 0), best(init) {}

    void phase_x(size_t i, double dis) {
        if (dis >= best) return;
        if (i == xs.size()) {
            phase_y(0, dis);
            return;
        }
        int xi = xs[i];
        for (int yi = 0; yi < y.m; ++yi) {
            double d = std::max(dis, pair_distortion(x, y, chosen, {xi, yi}));
            if (d >= best) continue;
            chosen.push_back({xi, yi});
            bool fresh = !y_covered[yi];
            if (fresh) y_covered[yi] = 1;
            phase_x(i + 1, d);
            if (fresh) y_covered[yi] = 0;
            chosen.pop_back();
        }
    }

    void phase_y(size_t j, double dis) {
        if (dis >= best) return;
        if (j == ys.size()) {
            best = dis;
            return;
        }
        int yi = ys[j];
        if (y_covered[yi]) {
            phase_y(j + 1, dis);
            return;
        }
        for (int xi = 0; xi < x.m; ++xi) {
            double d = std::max(dis, pair_distortion(x, y, chosen, {xi, yi}));
            if (d >= best) continue;
            chosen.push_back({xi, yi});
            phase_y(j + 1, d);
            chosen.pop_back();
        }
    }
};

double min_distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                      const std::vector<Pair>& seed) {
    if (x.m + y.m > kGhExactCap)
        throw capacity_error("gh_distance: exact mode capped at 10 total points");
    double init = greedy_distortion(x, y, seed) + 1e-12;
    BnB bnb(x, y, init);
    bnb.chosen = seed;
    for (const Pair& p : seed) bnb.y_covered[p.y] = 1;
    // seed pairs participate in all distortion checks; remaining xs keep
    // their full choice (an x may appear twice, which is still a valid
    // correspondence and does not change the minimum)
    double seed_dis = 0.0;
    for (const Pair& p : seed)
        for (const Pair& q : seed)
            seed_dis = std::max(seed_dis, std::abs(x.at(p.x, q.x) - y.at(p.y, q.y)));
    bnb.phase_x(0, seed_dis);
    return bnb.best;
}

GhBound bound_impl(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                   const std::vector<Pair>& seed) {
    std::vector<double> ex = eccentricities(x), ey = eccentricities(y);
    double lower = std::abs(diameter(x) - diameter(y));
    lower = std::max(lower, hd_1d(ex, ey));
    if (!seed.empty()) {
        // basepoint-distance spectra also transport along a pointed
        // correspondence
        std::vector<double> px(x.m), py(y.m);
        for (int i = 0; i < x.m; ++i) px[i] = x.at(seed[0].x, i);
        for (int i = 0; i < y.m; ++i) py[i] = y.at(seed[0].y, i);
        lower = std::max(lower, hd_1d(px, py));
    }
    double upper = greedy_distortion(x, y, seed);
    return {0.5 * lower, 0.5 * upper};
}

}  // namespace

void FiniteMetricSpace::validate() const {
    if (m < 1) throw domain_error("metric space: need at least one point");
    if (static_cast<int>(d.size()) != m * m)
        throw domain_error("metric space: matrix size mismatch");
    if (basepoint < 0 || basepoint >= m)
        throw domain_error("metric space: basepoint out of range");
    for (int i = 0; i < m; ++i) {
        if (at(i, i) != 0.0) throw domain_error("metric space: nonzero diagonal");
        for (int j = 0; j < m; ++j) {
            if (!(at(i, j) >= 0.0)) throw domain_error("metric space: negative distance");
            if (at(i, j) != at(j, i)) throw domain_error("metric space: not symmetric");
            if (i != j && at(i, j) == 0.0)
                throw domain_error("metric space: distinct points at distance 0");
        }
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                if (at(i, j) > at(i, k) + at(k, j) + 1e-9)
                    throw domain_error("metric space: triangle inequality violated");
}

double gh_distance_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    x.validate();
    y.validate();
    return 0.5 * min_distortion(x, y, {});
}

GhBound gh_distance_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    x.validate();
    y.validate();
    return bound_impl(x, y, {});
}

double pointed_gh_distance(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    x.validate();
    y.validate();
    return 0.5 * min_distortion(x, y, {{x.basepoint, y.basepoint}});
}

GhBound pointed_gh_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    x.validate();
    y.validate();
    return bound_impl(x, y, {{x.basepoint, y.basepoint}});
}

FiniteMetricSpace ball_subspace(const FiniteMetricSpace& x, double radius) {
    std::vector<int> keep;
    for (int i = 0; i < x.m; ++i)
        if (x.at(x.basepoint, i) <= radius + 1e-12) keep.push_back(i);
    FiniteMetricSpace out;
    out.m = static_cast<int>(keep.size());
    out.d.assign(static_cast<size_t>(out.m) * out.m, 0.0);
    for (int i = 0; i < out.m; ++i) {
        for (int j = 0; j < out.m; ++j)
            out.d[static_cast<size_t>(i) * out.m + j] = x.at(keep[i], keep[j]);
        if (keep[i] == x.basepoint) out.basepoint = i;
    }
    return out;
}

GhdSeries ghd_series(const FiniteMetricSpace& x, const FiniteMetricSpace& y, int n_max) {
    x.validate();
    y.validate();
    if (n_max < 1 || n_max > 8) throw domain_error("ghd_series: n_max must be in 1..8");
    if (x.m == y.m && x.basepoint == y.basepoint && x.d == y.d)
        return {0.0, 0.0, 0.0};  // identity correspondence at every n

    GhdSeries out;
    for (int n = 1; n <= n_max; ++n) {
        FiniteMetricSpace bx = ball_subspace(x, n);
        FiniteMetricSpace by = ball_subspace(y, n);
        double scale = std::ldexp(1.0, -n);
        if (bx.m + by.m <= kGhExactCap) {
            double v = 0.5 * min_distortion(bx, by, {{bx.basepoint, by.basepoint}});
            out.lower += scale * v;
            out.upper += scale * v;
        } else {
            GhBound b = bound_impl(bx, by, {{bx.basepoint, by.basepoint}});
            out.lower += scale * b.lower;
            out.upper += scale * b.upper;
        }
    }
    // every term (any n) is at most half the larger diameter: the total
    // correspondence on the balls contains the basepoint pair and its
    // distortion is bounded by max(diam B_x, diam B_y) <= max(diam x, diam y)
    out.tail_bound = std::ldexp(1.0, -n_max) * 0.5 * std::max(diameter(x), diameter(y));
    return out;
}

}  // namespace chab
