#pragma once

#include <string>
#include <vector>

#include "chab/bs_space.hpp"
#include "chab/rooted_graph.hpp"

namespace chab {

// Elements of F_k as freely reduced words; letters are +-(1..k).
using Word = std::vector<int>;

Word reduce_word(Word w);
Word parse_word(std::string_view text, int rank);  // a..z generators, A..Z inverses
std::string word_to_string(const Word& w);
Word inverse_word(const Word& w);

// Folded labeled graph presenting a finitely generated subgroup: at most one
// outgoing and one incoming edge per generator at every vertex. A complete
// graph (all transitions present) is a Schreier coset graph.
struct CoreGraph {
    int rank = 1;
    int basepoint = 0;
    std::vector<std::vector<int>> out;  // [v][g-1] = target, -1 absent
    std::vector<std::vector<int>> in;   // [v][g-1] = source, -1 absent

    int size() const { return static_cast<int>(out.size()); }
    bool complete() const;
    // follow one letter from v; -1 when the edge is absent
    int step(int v, int letter) const;
};

// Wedge of generator loops, folded to determinism and trimmed to the core.
// Empty generator list gives the one-vertex graph (trivial subgroup).
CoreGraph stallings_core(const std::vector<Word>& generators, int rank);

// Membership: a reduced word lies in the subgroup iff it traces a closed
// path at the basepoint of the folded core.
bool contains(const CoreGraph& h, const Word& w);

// Words reading the non-tree edges of a spanning tree: a free basis of the
// subgroup presented by the core graph.
std::vector<Word> loop_generators(const CoreGraph& h);

struct SchreierGraph {
    CoreGraph g;
};

// Validates a complete transitive core graph as a Schreier coset graph.
SchreierGraph as_schreier(CoreGraph g);

// Coset graph of the joint action: vertex i, edge i ->_g perms[g][i]. Throws
// domain_error when the action is not transitive.
SchreierGraph schreier_from_permutations(const std::vector<std::vector<int>>& perms, int root);

// Schreier generators t_v g t_{vg}^-1 of the basepoint stabilizer.
std::vector<Word> schreier_generators(const SchreierGraph& s);

RootedGraph to_rooted_graph(const CoreGraph& g);
CoreGraph core_from_rooted(const RootedGraph& g);

struct FkDistance {
    double value = 0.0;
    bool upper_bound = false;  // true when the graphs agree up to n_max
    int separating_length = 0; // n* when exact, n_max otherwise
};

// d(H1,H2) = 2^-n*, n* the least word length where memberships differ;
// reported as an upper bound 2^-n_max when all lengths <= n_max agree.
FkDistance chabauty_distance_fk(const CoreGraph& h1, const CoreGraph& h2, int n_max);

// Uniform-root exhaustive ball statistics of a Schreier graph: the IRS of a
// uniformly random conjugate of the stabilizer, through its ball statistics.
LocalStatistics sample_cosofic_irs(const SchreierGraph& s, int r_max);

// Fraction of vertices supporting a nontrivial closed reduced word of length
// <= n (word-metric analog of weak uniform discreteness).
Fraction short_relation_probability(const SchreierGraph& s, int n);

}  // namespace chab
