#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chab/rooted_graph.hpp"

namespace chab {

// Finite-radius marginals of a point in the Benjamini-Schramm space: for
// each r <= r_max, the distribution of canonical r-ball codes around the
// root. sample_count is the number of root draws; exact means every vertex
// was used once.
struct LocalStatistics {
    int r_max = 1;
    std::vector<std::map<std::string, double>> per_radius;  // [r-1]: code -> prob
    uint64_t sample_count = 0;
    bool exact = false;

    const std::map<std::string, double>& at_radius(int r) const;
    void validate() const;  // per-radius sums within 1e-12 of 1
};

struct Sampling {
    enum class Mode { exhaustive, monte_carlo };
    Mode mode = Mode::exhaustive;
    uint64_t count = 0;
    uint64_t seed = 0;

    static Sampling exhaustive() { return {}; }
    static Sampling monte_carlo(uint64_t count, uint64_t seed) {
        return {Mode::monte_carlo, count, seed};
    }
};

LocalStatistics local_statistics(const RootedGraph& g, int r_max, const Sampling& sampling);

// 1/2 sum over codes |a_r - b_r|.
double tv_distance(const LocalStatistics& a, const LocalStatistics& b, int r);

struct BsDistance {
    double value = 0.0;
    double tail_bound = 0.0;
};

// sum_{r=1..r_max} 2^-r tv(a,b,r); tail bound 2^-r_max for the dropped
// radii. Requires equal r_max.
BsDistance bs_distance(const LocalStatistics& a, const LocalStatistics& b);

struct MtpReport {
    int radius = 0;
    double defect = 0.0;
    std::string witness;  // doubly rooted class achieving the defect
};

// Mass-transport defect over indicator test functions of doubly rooted
// r-ball classes. Uniform rooting (no weight vector) gives an exactly zero
// defect; a biased rooting can break the balance.
MtpReport mtp_defect(const RootedGraph& g, int r,
                     const std::optional<std::vector<double>>& root_weights = {});

}  // namespace chab
