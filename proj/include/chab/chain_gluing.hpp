#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chab/bs_space.hpp"
#include "chab/rooted_graph.hpp"

namespace chab {

// Metric-graph block for the Bernoulli gluing construction: a connected
// edge-weighted graph with left/right attachment vertices. The defining
// asymmetry of the (A, B) pair is systole(A) < girth(B).
struct BlockTemplate {
    std::string name;
    RootedGraph graph;
    int left = 0;
    int right = 0;
    double systole = 0.0;  // shortest cycle length, computed on construction
};

BlockTemplate make_block(std::string name, RootedGraph graph, int left, int right);
void validate_block_pair(const BlockTemplate& a, const BlockTemplate& b);

// Default blocks: a path L-x-c-y-R (unit edges) with two loops at c.
// A carries loops of length 1 and 1/4 (systole 1/4); B the same shape with
// both loops of length 4 (girth 4).
std::pair<BlockTemplate, BlockTemplate> default_block_templates();

// Shortest cycle length of a weighted graph; nullopt when acyclic.
std::optional<double> graph_girth(const RootedGraph& g);

// A realized window of the gluing: blocks indexed -W..W with right(i)
// identified to left(i+1). block_vertices lists, per block, its left
// attachment and interior vertices (the shared boundary belongs to the block
// on its right), which keeps the pointed root law translation-invariant.
struct GluedChain {
    int window = 1;
    std::vector<char> labels;  // size 2W+1, labels[W + i] for block i
    RootedGraph graph;
    std::vector<std::vector<int>> block_vertices;
    std::vector<std::vector<int>> block_all_vertices;  // including both attachments
};

GluedChain build_chain(const std::vector<char>& labels, const BlockTemplate& a,
                       const BlockTemplate& b);

// Bernoulli labels P(A) = p, drawn per block index from named sub-streams of
// the seed (widening the window preserves the shared labels).
GluedChain sample_chain(uint64_t seed, int window, double p_a, const BlockTemplate& a,
                        const BlockTemplate& b);

struct PointedSample {
    RootedGraph graph;  // the window graph re-rooted at the sample
    char origin_label = 'A';
    int root = 0;
};

PointedSample sample_pointed(const GluedChain& chain, uint64_t seed,
                             int root_block_offset = 0);

// Shortest cycle contained in the r-ball around v; nullopt when the ball is
// a tree (the combinatorial injectivity-radius surrogate).
std::optional<double> local_systole(const RootedGraph& g, int v, double r);

// Fraction of window vertices whose local systole at radius r is >= t.
Fraction thick_fraction(const GluedChain& chain, double r, double threshold);

// Radii below this bound cannot see the window truncation.
double boundary_safe_radius(int window, const BlockTemplate& a, const BlockTemplate& b);

// Monte-Carlo ball statistics of the random pointed chain; deterministic per
// seed, independent (chain, root) draws.
LocalStatistics chain_statistics(double p_a, int window, int r_max, uint64_t samples,
                                 uint64_t seed, const BlockTemplate& a,
                                 const BlockTemplate& b, int root_block_offset = 0);

}  // namespace chab
