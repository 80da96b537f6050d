#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chab/common.hpp"

namespace chab {

// One edge of a finite rooted graph. Labels are small integer colors.
// Oriented edges keep their direction for isomorphism purposes; distances
// always treat edges as walkable both ways (word-metric convention).
struct Edge {
    int src = 0;
    int dst = 0;
    int label = 0;
    bool oriented = false;
    double weight = 1.0;
};

struct RootedGraph {
    int n = 1;
    int root = 0;
    std::vector<Edge> edges;

    // Throws domain_error on bad ids, non-positive weights or duplicate
    // (src, dst, label, oriented) tuples.
    void validate() const;
};

// extract_ball with bookkeeping: new id -> original id and distance from
// the center. Vertices are renumbered by (distance, original id) so the
// extraction is a pure function of (g, center, r).
struct Ball {
    RootedGraph graph;
    std::vector<int> original_id;
    std::vector<double> distance;
};

inline constexpr int kMaxCodeVertices = 512;
inline constexpr double kDistanceTol = 1e-9;

Ball extract_ball_ex(const RootedGraph& g, int center, double r);
RootedGraph extract_ball(const RootedGraph& g, int center, double r);

// Canonical byte code (lowercase hex) of the labeled-rooted isomorphism
// class: iterated color refinement plus backtracking over the remaining
// symmetry, minimum certificate over all branches. Equal codes iff there is
// a root-, label-, orientation- and weight-preserving isomorphism (weights
// compared on a 1e-6 grid).
std::string canonical_code(const RootedGraph& ball, int max_vertices = kMaxCodeVertices);

// Same, with a second distinguished vertex (doubly rooted classes for the
// mass-transport test).
std::string canonical_code_marked(const RootedGraph& ball, int marked,
                                  int max_vertices = kMaxCodeVertices);

struct BallCode {
    int radius = 0;
    std::string code;  // lowercase hex
};

BallCode ball_code(const RootedGraph& g, int center, int radius,
                   int max_vertices = kMaxCodeVertices);

// Fraction of vertices whose r-ball is a tree (combinatorial thick part).
Fraction tree_ball_fraction(const RootedGraph& g, double r);

enum class CheegerMode { exact, bound };

struct CheegerResult {
    Fraction value;
    bool exact = false;
};

// h(g) = min over S, 0 < |S| <= |V|/2, of e(S, S^c)/|S|. Exact mode
// enumerates every subset (vertex_count <= 20); bound mode is a
// degree-ordered sweep cut and is an upper bound.
CheegerResult cheeger_constant(const RootedGraph& g, CheegerMode mode);

bool is_connected(const RootedGraph& g);

// Convenience constructors used by tests and the CLI docs.
RootedGraph cycle_graph(int n, int label = 0);
RootedGraph path_graph(int n, int root = 0, int label = 0);

}  // namespace chab
