#include "chab/free_group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

namespace chab {

namespace {

constexpr int kMaxWordLength = 12;
constexpr long long kWordBudget = 4'000'000;

long long words_up_to(int rank, int n) {
    // number of freely reduced nonempty words of length <= n over F_rank
    long long total = 0, level = 2LL * rank;
    for (int len = 1; len <= n; ++len) {
        total += level;
        if (total > kWordBudget) return total;
        level *= 2LL * rank - 1;
    }
    return total;
}

// union-find over wedge vertices
struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);  // keep the smaller id as representative
        parent[b] = a;
        return true;
    }
};

// deterministic renumbering: BFS from the basepoint, labels in order
// (out 1..k, in 1..k)
CoreGraph renumber(const CoreGraph& g) {
    int n = g.size();
    std::vector<int> order, id(n, -1);
    order.reserve(n);
    std::queue<int> q;
    q.push(g.basepoint);
    id[g.basepoint] = 0;
    order.push_back(g.basepoint);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int gi = 0; gi < g.rank; ++gi) {
            for (int w : {g.out[v][gi], g.in[v][gi]}) {
                if (w >= 0 && id[w] < 0) {
                    id[w] = static_cast<int>(order.size());
                    order.push_back(w);
                    q.push(w);
                }
            }
        }
    }
    CoreGraph out;
    out.rank = g.rank;
    out.basepoint = 0;
    int m = static_cast<int>(order.size());
    out.out.assign(m, std::vector<int>(g.rank, -1));
    out.in.assign(m, std::vector<int>(g.rank, -1));
    for (int v = 0; v < n; ++v) {
        if (id[v] < 0) continue;  // unreachable pieces are dropped
        for (int gi = 0; gi < g.rank; ++gi) {
            int w = g.out[v][gi];
            if (w >= 0 && id[w] >= 0) {
                out.out[id[v]][gi] = id[w];
                out.in[id[w]][gi] = id[v];
            }
        }
    }
    return out;
}

}  // namespace

Word reduce_word(Word w) {
    Word out;
    out.reserve(w.size());
    for (int letter : w) {
        if (letter == 0) throw domain_error("word: zero letter");
        if (!out.empty() && out.back() == -letter)
            out.pop_back();
        else
            out.push_back(letter);
    }
    return out;
}

Word parse_word(std::string_view text, int rank) {
    Word w;
    for (char c : text) {
        if (c == ' ' || c == '\t') continue;
        int letter;
        if (c >= 'a' && c <= 'z')
            letter = c - 'a' + 1;
        else if (c >= 'A' && c <= 'Z')
            letter = -(c - 'A' + 1);
        else
            throw parse_error(std::string("word: bad character '") + c + "'");
        if (std::abs(letter) > rank)
            throw parse_error(std::string("word: letter '") + c + "' exceeds rank " +
                              std::to_string(rank));
        w.push_back(letter);
    }
    return reduce_word(std::move(w));
}

std::string word_to_string(const Word& w) {
    std::string s;
    for (int letter : w)
        s.push_back(letter > 0 ? static_cast<char>('a' + letter - 1)
                               : static_cast<char>('A' - letter - 1));
    return s;
}

Word inverse_word(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (int& letter : out) letter = -letter;
    return out;
}

bool CoreGraph::complete() const {
    for (int v = 0; v < size(); ++v)
        for (int gi = 0; gi < rank; ++gi)
            if (out[v][gi] < 0 || in[v][gi] < 0) return false;
    return true;
}

int CoreGraph::step(int v, int letter) const {
    return letter > 0 ? out[v][letter - 1] : in[v][-letter - 1];
}

CoreGraph stallings_core(const std::vector<Word>& generators, int rank) {
    if (rank < 1) throw domain_error("stallings_core: rank must be >= 1");
    for (const Word& w : generators)
        for (int letter : w)
            if (letter == 0 || std::abs(letter) > rank)
                throw domain_error("stallings_core: letter out of rank");

    // wedge of loops at vertex 0
    int n = 1;
    struct Arc {
        int src, dst, gen;  // positive generator index
    };
    std::vector<Arc> arcs;
    for (const Word& raw : generators) {
        Word w = reduce_word(raw);
        if (w.empty()) continue;
        int prev = 0;
        for (size_t i = 0; i < w.size(); ++i) {
            int next = (i + 1 == w.size()) ? 0 : n++;
            int letter = w[i];
            if (letter > 0)
                arcs.push_back({prev, next, letter});
            else
                arcs.push_back({next, prev, -letter});
            prev = next;
        }
    }

    // fold: merge targets of equal-labeled edges until deterministic
    Dsu dsu(n);
    std::vector<std::vector<int>> out(n, std::vector<int>(rank, -1));
    std::vector<std::vector<int>> in(n, std::vector<int>(rank, -1));
    std::queue<std::pair<int, int>> pending;
    auto set_arc = [&](int src, int dst, int gi) {
        if (out[src][gi] >= 0 && dsu.find(out[src][gi]) != dst)
            pending.push({dsu.find(out[src][gi]), dst});
        out[src][gi] = dst;
        if (in[dst][gi] >= 0 && dsu.find(in[dst][gi]) != src)
            pending.push({dsu.find(in[dst][gi]), src});
        in[dst][gi] = src;
    };
    for (const Arc& a : arcs) set_arc(a.src, a.dst, a.gen - 1);
    while (!pending.empty()) {
        auto [a, b] = pending.front();
        pending.pop();
        a = dsu.find(a);
        b = dsu.find(b);
        if (a == b) continue;
        dsu.unite(a, b);
        int rep = dsu.find(a);
        int other = (rep == a) ? b : a;
        for (int gi = 0; gi < rank; ++gi) {
            if (out[other][gi] >= 0) {
                int dst = dsu.find(out[other][gi]);
                if (out[rep][gi] >= 0 && dsu.find(out[rep][gi]) != dst)
                    pending.push({dsu.find(out[rep][gi]), dst});
                out[rep][gi] = dst;
                if (in[dst][gi] >= 0 && dsu.find(in[dst][gi]) != rep)
                    pending.push({dsu.find(in[dst][gi]), rep});
                in[dst][gi] = rep;
            }
            if (in[other][gi] >= 0) {
                int src = dsu.find(in[other][gi]);
                if (in[rep][gi] >= 0 && dsu.find(in[rep][gi]) != src)
                    pending.push({dsu.find(in[rep][gi]), src});
                in[rep][gi] = src;
                if (out[src][gi] >= 0 && dsu.find(out[src][gi]) != rep)
                    pending.push({dsu.find(out[src][gi]), rep});
                out[src][gi] = rep;
            }
        }
    }

    // compress to representatives
    std::vector<int> rep_id(n, -1);
    int m = 0;
    for (int v = 0; v < n; ++v)
        if (dsu.find(v) == v) rep_id[v] = m++;
    CoreGraph folded;
    folded.rank = rank;
    folded.basepoint = rep_id[dsu.find(0)];
    folded.out.assign(m, std::vector<int>(rank, -1));
    folded.in.assign(m, std::vector<int>(rank, -1));
    for (int v = 0; v < n; ++v) {
        if (dsu.find(v) != v) continue;
        for (int gi = 0; gi < rank; ++gi) {
            if (out[v][gi] >= 0) {
                int dst = rep_id[dsu.find(out[v][gi])];
                folded.out[rep_id[v]][gi] = dst;
                folded.in[dst][gi] = rep_id[v];
            }
        }
    }

    // trim to the core: drop non-basepoint vertices of degree <= 1
    std::vector<int> degree(m, 0);
    for (int v = 0; v < m; ++v)
        for (int gi = 0; gi < rank; ++gi) {
            if (folded.out[v][gi] >= 0) degree[v]++;
            if (folded.in[v][gi] >= 0) degree[v]++;
        }
    std::queue<int> leaves;
    std::vector<char> removed(m, 0);
    for (int v = 0; v < m; ++v)
        if (v != folded.basepoint && degree[v] <= 1) leaves.push(v);
    while (!leaves.empty()) {
        int v = leaves.front();
        leaves.pop();
        if (removed[v] || v == folded.basepoint || degree[v] > 1) continue;
        removed[v] = 1;
        for (int gi = 0; gi < rank; ++gi) {
            int w = folded.out[v][gi];
            if (w >= 0 && !removed[w]) {
                folded.in[w][gi] = -1;
                folded.out[v][gi] = -1;
                if (--degree[w] <= 1 && w != folded.basepoint) leaves.push(w);
            }
            w = folded.in[v][gi];
            if (w >= 0 && !removed[w]) {
                folded.out[w][gi] = -1;
                folded.in[v][gi] = -1;
                if (--degree[w] <= 1 && w != folded.basepoint) leaves.push(w);
            }
        }
    }
    for (int v = 0; v < m; ++v) {
        if (!removed[v]) continue;
        for (int gi = 0; gi < rank; ++gi) folded.out[v][gi] = folded.in[v][gi] = -1;
    }
    return renumber(folded);
}

bool contains(const CoreGraph& h, const Word& w) {
    int v = h.basepoint;
    for (int letter : w) {
        v = h.step(v, letter);
        if (v < 0) return false;
    }
    return v == h.basepoint;
}

std::vector<Word> loop_generators(const CoreGraph& h) {
    // In a folded graph the pair (source vertex, label) identifies an arc, so
    // a per-(v, g) flag marks spanning-tree arcs regardless of the direction
    // BFS crossed them.
    int n = h.size();
    std::vector<Word> to_vertex(n);  // reduced path word basepoint -> v
    std::vector<char> seen(n, 0);
    std::vector<std::vector<char>> is_tree(n, std::vector<char>(h.rank, 0));
    std::queue<int> q;
    q.push(h.basepoint);
    seen[h.basepoint] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int gi = 0; gi < h.rank; ++gi) {
            int w = h.out[v][gi];
            if (w >= 0 && !seen[w]) {
                seen[w] = 1;
                is_tree[v][gi] = 1;
                to_vertex[w] = to_vertex[v];
                to_vertex[w].push_back(gi + 1);
                q.push(w);
            }
            w = h.in[v][gi];  // arc w --g--> v crossed backwards
            if (w >= 0 && !seen[w]) {
                seen[w] = 1;
                is_tree[w][gi] = 1;
                to_vertex[w] = to_vertex[v];
                to_vertex[w].push_back(-(gi + 1));
                q.push(w);
            }
        }
    }
    std::vector<Word> gens;
    for (int v = 0; v < n; ++v) {
        for (int gi = 0; gi < h.rank; ++gi) {
            int w = h.out[v][gi];
            if (w < 0 || is_tree[v][gi]) continue;
            Word word = to_vertex[v];
            word.push_back(gi + 1);
            Word back = inverse_word(to_vertex[w]);
            word.insert(word.end(), back.begin(), back.end());
            Word red = reduce_word(word);
            if (!red.empty()) gens.push_back(std::move(red));
        }
    }
    return gens;
}

SchreierGraph as_schreier(CoreGraph g) {
    if (!g.complete()) throw domain_error("schreier: graph is not complete");
    // transitivity: every vertex reachable from the basepoint
    int n = g.size();
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(g.basepoint);
    seen[g.basepoint] = 1;
    int reached = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int gi = 0; gi < g.rank; ++gi) {
            for (int w : {g.out[v][gi], g.in[v][gi]}) {
                if (w >= 0 && !seen[w]) {
                    seen[w] = 1;
                    reached++;
                    q.push(w);
                }
            }
        }
    }
    if (reached != n) throw domain_error("schreier: action is not transitive");
    return SchreierGraph{std::move(g)};
}

SchreierGraph schreier_from_permutations(const std::vector<std::vector<int>>& perms, int root) {
    if (perms.empty()) throw domain_error("schreier: need at least one permutation");
    int m = static_cast<int>(perms[0].size());
    if (m < 1) throw domain_error("schreier: empty point set");
    if (root < 0 || root >= m) throw domain_error("schreier: root out of range");
    CoreGraph g;
    g.rank = static_cast<int>(perms.size());
    g.basepoint = root;
    g.out.assign(m, std::vector<int>(g.rank, -1));
    g.in.assign(m, std::vector<int>(g.rank, -1));
    for (int gi = 0; gi < g.rank; ++gi) {
        const auto& p = perms[gi];
        if (static_cast<int>(p.size()) != m)
            throw domain_error("schreier: permutations act on different sets");
        std::vector<char> hit(m, 0);
        for (int i = 0; i < m; ++i) {
            if (p[i] < 0 || p[i] >= m || hit[p[i]])
                throw domain_error("schreier: not a bijection");
            hit[p[i]] = 1;
            g.out[i][gi] = p[i];
            g.in[p[i]][gi] = i;
        }
    }
    return as_schreier(std::move(g));
}

std::vector<Word> schreier_generators(const SchreierGraph& s) {
    // the loop basis of the coset graph is exactly the Schreier generating
    // set t_v g t_{vg}^-1 over non-tree arcs
    return loop_generators(s.g);
}

RootedGraph to_rooted_graph(const CoreGraph& g) {
    RootedGraph out;
    out.n = g.size();
    out.root = g.basepoint;
    for (int v = 0; v < g.size(); ++v)
        for (int gi = 0; gi < g.rank; ++gi)
            if (g.out[v][gi] >= 0)
                out.edges.push_back({v, g.out[v][gi], gi + 1, true, 1.0});
    return out;
}

CoreGraph core_from_rooted(const RootedGraph& g) {
    g.validate();
    int rank = 0;
    for (const Edge& e : g.edges) {
        if (!e.oriented) throw domain_error("core_from_rooted: edges must be oriented");
        if (e.label < 1) throw domain_error("core_from_rooted: labels must be 1..k");
        rank = std::max(rank, e.label);
    }
    if (rank == 0) rank = 1;  // single-vertex graph: any rank works
    CoreGraph out;
    out.rank = rank;
    out.basepoint = g.root;
    out.out.assign(g.n, std::vector<int>(rank, -1));
    out.in.assign(g.n, std::vector<int>(rank, -1));
    for (const Edge& e : g.edges) {
        int gi = e.label - 1;
        if (out.out[e.src][gi] >= 0 || out.in[e.dst][gi] >= 0)
            throw domain_error("core_from_rooted: graph is not folded");
        out.out[e.src][gi] = e.dst;
        out.in[e.dst][gi] = e.src;
    }
    return out;
}

FkDistance chabauty_distance_fk(const CoreGraph& h1, const CoreGraph& h2, int n_max) {
    if (h1.rank != h2.rank) throw domain_error("chabauty_distance_fk: rank mismatch");
    if (n_max < 1 || n_max > kMaxWordLength)
        throw domain_error("chabauty_distance_fk: n_max must be in 1..12");
    if (words_up_to(h1.rank, n_max) > kWordBudget)
        throw capacity_error("chabauty_distance_fk: word enumeration budget exceeded");

    // iterative deepening: find the least length with a membership difference.
    // Trace states: current vertex in each graph, -1 once the path dies (all
    // extensions are then non-members on that side).
    for (int n = 1; n <= n_max; ++n) {
        bool differ = false;
        std::vector<int> letters;
        auto dfs = [&](auto&& self, int v1, int v2, int last, int depth) -> void {
            if (differ) return;
            if (depth == n) {
                bool m1 = (v1 == h1.basepoint), m2 = (v2 == h2.basepoint);
                if (m1 != m2) differ = true;
                return;
            }
            for (int gi = 1; gi <= h1.rank; ++gi) {
                for (int letter : {gi, -gi}) {
                    if (last == -letter) continue;
                    int w1 = v1 < 0 ? -1 : h1.step(v1, letter);
                    int w2 = v2 < 0 ? -1 : h2.step(v2, letter);
                    if (w1 < 0 && w2 < 0) continue;  // both sides dead: memberships agree
                    self(self, w1, w2, letter, depth + 1);
                    if (differ) return;
                }
            }
        };
        dfs(dfs, h1.basepoint, h2.basepoint, 0, 0);
        if (differ) return {std::ldexp(1.0, -n), false, n};
    }
    return {std::ldexp(1.0, -n_max), true, n_max};
}

LocalStatistics sample_cosofic_irs(const SchreierGraph& s, int r_max) {
    return local_statistics(to_rooted_graph(s.g), r_max, Sampling::exhaustive());
}

Fraction short_relation_probability(const SchreierGraph& s, int n) {
    const CoreGraph& g = s.g;
    if (n < 1 || n > kMaxWordLength)
        throw domain_error("short_relation_probability: n must be in 1..12");
    if (words_up_to(g.rank, n) * g.size() > 100'000'000LL)
        throw capacity_error("short_relation_probability: word tracing budget exceeded");
    long long hits = 0;
    for (int v = 0; v < g.size(); ++v) {
        bool found = false;
        auto dfs = [&](auto&& self, int cur, int last, int depth) -> void {
            if (found) return;
            if (depth >= 1 && cur == v) {
                found = true;
                return;
            }
            if (depth == n) return;
            for (int gi = 1; gi <= g.rank && !found; ++gi) {
                for (int letter : {gi, -gi}) {
                    if (last == -letter) continue;
                    int w = g.step(cur, letter);
                    if (w < 0) continue;
                    self(self, w, letter, depth + 1);
                    if (found) return;
                }
            }
        };
        dfs(dfs, v, 0, 0);
        if (found) hits++;
    }
    return Fraction(hits, g.size());
}

}  // namespace chab
