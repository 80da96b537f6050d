#include "chab/json_io.hpp"

#include <fstream>
#include <sstream>

namespace chab {

using nlohmann::json;

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw parse_error(msg);
}

std::vector<int> parse_cycles(const std::string& text, int m) {
    std::vector<int> img(m);
    for (int i = 0; i < m; ++i) img[i] = i;
    size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == ',')) pos++;
        if (pos >= text.size()) break;
        require(text[pos] == '(', "permutation: expected '(' in cycle notation");
        size_t close = text.find(')', pos);
        require(close != std::string::npos, "permutation: unbalanced cycle");
        std::istringstream cycle(text.substr(pos + 1, close - pos - 1));
        std::vector<int> pts;
        int v;
        while (cycle >> v) {
            require(v >= 0 && v < m, "permutation: point out of range");
            pts.push_back(v);
        }
        for (size_t i = 0; i < pts.size(); ++i) img[pts[i]] = pts[(i + 1) % pts.size()];
        pos = close + 1;
    }
    return img;
}

}  // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw parse_error("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

json graph_to_json(const RootedGraph& g) {
    bool any_oriented = false, all_oriented = true;
    for (const Edge& e : g.edges) {
        any_oriented = any_oriented || e.oriented;
        all_oriented = all_oriented && e.oriented;
    }
    if (any_oriented && !all_oriented)
        throw domain_error("graph_to_json: mixed edge orientation is not representable");
    json edges = json::array();
    for (const Edge& e : g.edges) {
        if (e.weight == 1.0)
            edges.push_back({e.src, e.dst, e.label});
        else
            edges.push_back({e.src, e.dst, e.label, e.weight});
    }
    json j{{"n", g.n}, {"root", g.root}, {"edges", edges}};
    if (any_oriented) j["oriented"] = true;
    return j;
}

RootedGraph graph_from_json(const json& j) {
    try {
        RootedGraph g;
        g.n = j.at("n").get<int>();
        g.root = j.at("root").get<int>();
        bool oriented = j.value("oriented", false);
        for (const auto& e : j.at("edges")) {
            require(e.is_array() && (e.size() == 3 || e.size() == 4),
                    "graph: edge must be [src, dst, label, weight?]");
            Edge edge;
            edge.src = e[0].get<int>();
            edge.dst = e[1].get<int>();
            edge.label = e[2].get<int>();
            edge.weight = e.size() == 4 ? e[3].get<double>() : 1.0;
            edge.oriented = oriented;
            g.edges.push_back(edge);
        }
        g.validate();
        return g;
    } catch (const json::exception& e) {
        throw parse_error(std::string("graph: ") + e.what());
    }
}

json statistics_to_json(const LocalStatistics& s) {
    json levels = json::array();
    for (int r = 1; r <= s.r_max; ++r) {
        json atoms = json::array();
        for (const auto& [code, prob] : s.per_radius[r - 1])
            atoms.push_back({{"code", code}, {"prob", prob}});
        levels.push_back({{"r", r}, {"atoms", atoms}});
    }
    json j{{"radius", s.r_max}, {"per_radius", levels}};
    if (s.exact)
        j["sample_count"] = "exact";
    else
        j["sample_count"] = s.sample_count;
    return j;
}

LocalStatistics statistics_from_json(const json& j) {
    try {
        LocalStatistics s;
        s.r_max = j.at("radius").get<int>();
        s.per_radius.assign(s.r_max, {});
        for (const auto& level : j.at("per_radius")) {
            int r = level.at("r").get<int>();
            require(r >= 1 && r <= s.r_max, "statistics: radius out of range");
            for (const auto& atom : level.at("atoms"))
                s.per_radius[r - 1][atom.at("code").get<std::string>()] =
                    atom.at("prob").get<double>();
        }
        const auto& sc = j.at("sample_count");
        if (sc.is_string()) {
            require(sc.get<std::string>() == "exact", "statistics: bad sample_count");
            s.exact = true;
            s.sample_count = 0;
        } else {
            s.exact = false;
            s.sample_count = sc.get<uint64_t>();
        }
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw parse_error(std::string("statistics: ") + e.what());
    }
}

std::string statistics_to_csv(const LocalStatistics& s) {
    std::ostringstream os;
    os << "radius,code,probability\n";
    for (int r = 1; r <= s.r_max; ++r)
        for (const auto& [code, prob] : s.per_radius[r - 1])
            os << r << "," << code << "," << json(prob).dump() << "\n";
    return os.str();
}

json subgroup_to_json(const ClosedSubgroupRn& h) {
    json sub = json::array(), lat = json::array();
    for (const Vec4& v : h.subspace) {
        json row = json::array();
        for (int i = 0; i < h.dim; ++i) row.push_back(v[i]);
        sub.push_back(row);
    }
    for (const Vec4& v : h.lattice) {
        json row = json::array();
        for (int i = 0; i < h.dim; ++i) row.push_back(v[i]);
        lat.push_back(row);
    }
    return json{{"dim", h.dim}, {"subspace", sub}, {"lattice", lat}};
}

ClosedSubgroupRn subgroup_from_json(const json& j) {
    try {
        int dim = j.at("dim").get<int>();
        auto rows = [&](const char* key) {
            std::vector<std::vector<double>> out;
            if (!j.contains(key)) return out;
            for (const auto& row : j.at(key)) out.push_back(row.get<std::vector<double>>());
            return out;
        };
        return make_subgroup(dim, rows("subspace"), rows("lattice"));
    } catch (const json::exception& e) {
        throw parse_error(std::string("subgroup: ") + e.what());
    }
}

json metric_space_to_json(const FiniteMetricSpace& x) {
    json rows = json::array();
    for (int i = 0; i < x.m; ++i) {
        json row = json::array();
        for (int k = 0; k < x.m; ++k) row.push_back(x.at(i, k));
        rows.push_back(row);
    }
    return json{{"d", rows}, {"basepoint", x.basepoint}};
}

FiniteMetricSpace metric_space_from_json(const json& j) {
    try {
        FiniteMetricSpace x;
        const auto& rows = j.at("d");
        x.m = static_cast<int>(rows.size());
        x.d.reserve(static_cast<size_t>(x.m) * x.m);
        for (const auto& row : rows) {
            require(static_cast<int>(row.size()) == x.m, "metric: matrix must be square");
            for (const auto& v : row) x.d.push_back(v.get<double>());
        }
        x.basepoint = j.value("basepoint", 0);
        x.validate();
        return x;
    } catch (const json::exception& e) {
        throw parse_error(std::string("metric: ") + e.what());
    }
}

std::vector<std::vector<int>> permutations_from_json(const json& j) {
    try {
        int m = j.at("m").get<int>();
        require(m >= 1, "permutations: need m >= 1");
        std::vector<std::vector<int>> perms;
        for (const auto& p : j.at("perms")) {
            if (p.is_string())
                perms.push_back(parse_cycles(p.get<std::string>(), m));
            else
                perms.push_back(p.get<std::vector<int>>());
            require(static_cast<int>(perms.back().size()) == m,
                    "permutations: image array has wrong length");
        }
        require(!perms.empty(), "permutations: need at least one permutation");
        return perms;
    } catch (const json::exception& e) {
        throw parse_error(std::string("permutations: ") + e.what());
    }
}

BlockTemplate block_from_json(const json& j, const std::string& fallback_name) {
    RootedGraph g = graph_from_json(j);
    try {
        int left = j.at("left").get<int>();
        int right = j.at("right").get<int>();
        return make_block(j.value("name", fallback_name), std::move(g), left, right);
    } catch (const json::exception& e) {
        throw parse_error(std::string("block: ") + e.what());
    }
}

}  // namespace chab
