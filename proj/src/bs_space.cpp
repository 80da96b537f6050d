#include "chab/bs_space.hpp"

#include <algorithm>
#include <cmath>

namespace chab {

const std::map<std::string, double>& LocalStatistics::at_radius(int r) const {
    if (r < 1 || r > r_max) throw domain_error("LocalStatistics: radius out of range");
    return per_radius[r - 1];
}

void LocalStatistics::validate() const {
    if (r_max < 1 || static_cast<int>(per_radius.size()) != r_max)
        throw domain_error("LocalStatistics: bad radius structure");
    for (const auto& level : per_radius) {
        double sum = 0.0;
        for (const auto& [code, p] : level) {
            if (p < 0.0) throw domain_error("LocalStatistics: negative probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw domain_error("LocalStatistics: probabilities do not sum to 1");
    }
}

LocalStatistics local_statistics(const RootedGraph& g, int r_max, const Sampling& sampling) {
    if (r_max < 1) throw domain_error("local_statistics: r_max must be positive");
    LocalStatistics out;
    out.r_max = r_max;
    out.per_radius.assign(r_max, {});

    std::vector<std::map<std::string, uint64_t>> counts(r_max);
    auto accumulate_root = [&](int v) {
        for (int r = 1; r <= r_max; ++r) {
            RootedGraph ball = extract_ball(g, v, static_cast<double>(r));
            counts[r - 1][canonical_code(ball)]++;
        }
    };

    uint64_t total = 0;
    if (sampling.mode == Sampling::Mode::exhaustive) {
        for (int v = 0; v < g.n; ++v) accumulate_root(v);
        total = static_cast<uint64_t>(g.n);
        out.exact = true;
    } else {
        if (sampling.count == 0) throw domain_error("local_statistics: zero sample count");
        Rng rng(derive_seed(sampling.seed, "ball-stats-roots"));
        for (uint64_t s = 0; s < sampling.count; ++s)
            accumulate_root(static_cast<int>(rng.below(static_cast<uint64_t>(g.n))));
        total = sampling.count;
        out.exact = false;
    }
    out.sample_count = total;
    for (int r = 1; r <= r_max; ++r)
        for (const auto& [code, c] : counts[r - 1])
            out.per_radius[r - 1][code] = static_cast<double>(c) / static_cast<double>(total);
    return out;
}

double tv_distance(const LocalStatistics& a, const LocalStatistics& b, int r) {
    const auto& pa = a.at_radius(r);
    const auto& pb = b.at_radius(r);
    double sum = 0.0;
    auto ia = pa.begin();
    auto ib = pb.begin();
    while (ia != pa.end() || ib != pb.end()) {
        if (ib == pb.end() || (ia != pa.end() && ia->first < ib->first)) {
            sum += ia->second;
            ++ia;
        } else if (ia == pa.end() || ib->first < ia->first) {
            sum += ib->second;
            ++ib;
        } else {
            sum += std::abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return 0.5 * sum;
}

BsDistance bs_distance(const LocalStatistics& a, const LocalStatistics& b) {
    if (a.r_max != b.r_max) throw domain_error("bs_distance: mismatched radii");
    BsDistance out;
    for (int r = 1; r <= a.r_max; ++r) out.value += std::ldexp(tv_distance(a, b, r), -r);
    out.tail_bound = std::ldexp(1.0, -a.r_max);
    return out;
}

MtpReport mtp_defect(const RootedGraph& g, int r,
                     const std::optional<std::vector<double>>& root_weights) {
    if (r < 1) throw domain_error("mtp_defect: radius must be positive");

    std::vector<double> w;
    if (root_weights) {
        w = *root_weights;
        if (static_cast<int>(w.size()) != g.n)
            throw domain_error("mtp_defect: weight vector size mismatch");
        double sum = 0.0;
        for (double x : w) {
            if (!(x >= 0.0)) throw domain_error("mtp_defect: weights must be non-negative");
            sum += x;
        }
        if (!(sum > 0.0)) throw domain_error("mtp_defect: weight vector not normalizable");
        for (double& x : w) x /= sum;
    }

    // sent[c] = E sum_v f_c(o, v), recv[c] = E sum_v f_c(v, o); under the
    // uniform rooting both reduce to the same pair count, so we keep exact
    // integer counts in that case.
    std::map<std::string, std::pair<double, double>> weighted;
    std::map<std::string, std::pair<long long, long long>> counted;
    for (int x = 0; x < g.n; ++x) {
        Ball ball = extract_ball_ex(g, x, static_cast<double>(r));
        for (int yi = 0; yi < ball.graph.n; ++yi) {
            std::string code = canonical_code_marked(ball.graph, yi);
            int y = ball.original_id[yi];
            if (root_weights) {
                auto& cell = weighted[code];
                cell.first += w[x];
                cell.second += w[y];
            } else {
                auto& cell = counted[code];
                cell.first += 1;
                cell.second += 1;
            }
        }
    }

    MtpReport report;
    report.radius = r;
    report.defect = 0.0;
    if (root_weights) {
        for (const auto& [code, cell] : weighted) {
            double d = std::abs(cell.first - cell.second);
            if (d > report.defect) {
                report.defect = d;
                report.witness = code;
            }
        }
    } else {
        for (const auto& [code, cell] : counted) {
            double d = std::abs(static_cast<double>(cell.first - cell.second)) /
                       static_cast<double>(g.n);
            if (d > report.defect) {
                report.defect = d;
                report.witness = code;
            }
        }
        if (report.witness.empty() && !counted.empty()) report.witness = counted.begin()->first;
    }
    return report;
}

}  // namespace chab
