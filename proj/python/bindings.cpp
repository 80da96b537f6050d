#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chab/json_io.hpp"

namespace py = pybind11;
using namespace chab;

namespace {

RootedGraph graph_from_json_str(const std::string& text) {
    return graph_from_json(nlohmann::json::parse(text));
}

RootedGraph make_graph(int n, int root,
                       const std::vector<std::tuple<int, int, int, double>>& edges,
                       bool oriented) {
    RootedGraph g;
    g.n = n;
    g.root = root;
    for (const auto& [src, dst, label, weight] : edges)
        g.edges.push_back({src, dst, label, oriented, weight});
    g.validate();
    return g;
}

py::dict fraction_dict(const Fraction& f) {
    py::dict d;
    d["num"] = f.num;
    d["den"] = f.den;
    d["value"] = f.value();
    return d;
}

}  // namespace

PYBIND11_MODULE(_chabauty, m) {
    m.doc() = "subgroup spaces, local graph limits and metric diagnostics";

    py::register_exception<domain_error>(m, "DomainError", PyExc_ValueError);
    py::register_exception<capacity_error>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);

    py::class_<RootedGraph>(m, "RootedGraph")
        .def_readonly("n", &RootedGraph::n)
        .def_readonly("root", &RootedGraph::root)
        .def("edge_count", [](const RootedGraph& g) { return g.edges.size(); })
        .def("to_json", [](const RootedGraph& g) { return graph_to_json(g).dump(); });

    m.def("graph", &make_graph, py::arg("n"), py::arg("root"), py::arg("edges"),
          py::arg("oriented") = false);
    m.def("graph_from_json", &graph_from_json_str);
    m.def("cycle_graph", &cycle_graph, py::arg("n"), py::arg("label") = 0);
    m.def("path_graph", &path_graph, py::arg("n"), py::arg("root") = 0, py::arg("label") = 0);
    m.def("extract_ball", &extract_ball);
    m.def("canonical_code",
          [](const RootedGraph& g) { return canonical_code(g, kMaxCodeVertices); });
    m.def("tree_ball_fraction",
          [](const RootedGraph& g, double r) { return fraction_dict(tree_ball_fraction(g, r)); });
    m.def("cheeger_constant", [](const RootedGraph& g, const std::string& mode) {
        CheegerResult res = cheeger_constant(
            g, mode == "exact" ? CheegerMode::exact : CheegerMode::bound);
        py::dict d = fraction_dict(res.value);
        d["exact"] = res.exact;
        return d;
    });

    py::class_<LocalStatistics>(m, "LocalStatistics")
        .def_readonly("r_max", &LocalStatistics::r_max)
        .def_readonly("sample_count", &LocalStatistics::sample_count)
        .def_readonly("exact", &LocalStatistics::exact)
        .def("at_radius", &LocalStatistics::at_radius)
        .def("to_json", [](const LocalStatistics& s) { return statistics_to_json(s).dump(); })
        .def("to_csv", &statistics_to_csv);

    m.def(
        "local_statistics",
        [](const RootedGraph& g, int r_max, uint64_t samples, uint64_t seed) {
            Sampling s = samples > 0 ? Sampling::monte_carlo(samples, seed)
                                     : Sampling::exhaustive();
            return local_statistics(g, r_max, s);
        },
        py::arg("g"), py::arg("r_max"), py::arg("samples") = 0, py::arg("seed") = 0);
    m.def("tv_distance", &tv_distance);
    m.def("bs_distance", [](const LocalStatistics& a, const LocalStatistics& b) {
        BsDistance d = bs_distance(a, b);
        return py::make_tuple(d.value, d.tail_bound);
    });
    m.def(
        "mtp_defect",
        [](const RootedGraph& g, int r, const std::optional<std::vector<double>>& w) {
            MtpReport rep = mtp_defect(g, r, w);
            py::dict d;
            d["radius"] = rep.radius;
            d["defect"] = rep.defect;
            d["witness"] = rep.witness;
            return d;
        },
        py::arg("g"), py::arg("r"), py::arg("root_weights") = py::none());

    py::class_<CoreGraph>(m, "CoreGraph")
        .def_property_readonly("size", &CoreGraph::size)
        .def_readonly("rank", &CoreGraph::rank)
        .def("complete", &CoreGraph::complete)
        .def("to_rooted", [](const CoreGraph& g) { return to_rooted_graph(g); });

    m.def("fold", [](const std::vector<std::string>& gens, int rank) {
        std::vector<Word> words;
        for (const auto& g : gens) words.push_back(parse_word(g, rank));
        return stallings_core(words, rank);
    });
    m.def("contains", [](const CoreGraph& h, const std::string& w) {
        return contains(h, parse_word(w, h.rank));
    });
    m.def("schreier_from_permutations",
          [](const std::vector<std::vector<int>>& perms, int root) {
              return schreier_from_permutations(perms, root).g;
          });
    m.def("chabauty_distance_fk",
          [](const CoreGraph& a, const CoreGraph& b, int n_max) {
              FkDistance d = chabauty_distance_fk(a, b, n_max);
              return py::make_tuple(d.value, d.upper_bound);
          });
    m.def("sample_cosofic_irs", [](const CoreGraph& g, int r_max) {
        return sample_cosofic_irs(as_schreier(g), r_max);
    });
    m.def("short_relation_probability", [](const CoreGraph& g, int n) {
        return fraction_dict(short_relation_probability(as_schreier(g), n));
    });

    py::class_<ClosedSubgroupRn>(m, "ClosedSubgroupRn")
        .def_readonly("dim", &ClosedSubgroupRn::dim)
        .def_readonly("canonical", &ClosedSubgroupRn::canonical)
        .def("to_json", [](const ClosedSubgroupRn& h) { return subgroup_to_json(h).dump(); });

    m.def("subgroup", &make_subgroup, py::arg("dim"),
          py::arg("subspace") = std::vector<std::vector<double>>{},
          py::arg("lattice") = std::vector<std::vector<double>>{});
    m.def("same_subgroup", &same_subgroup);
    m.def(
        "enumerate_in_ball",
        [](const ClosedSubgroupRn& h, double r, double net_step) {
            PointSet s = enumerate_in_ball(h, r, net_step);
            std::vector<std::vector<double>> out;
            for (const Vec4& p : s.pts)
                out.push_back(std::vector<double>(p.begin(), p.begin() + s.dim));
            return out;
        },
        py::arg("h"), py::arg("r"), py::arg("net_step") = 1.0 / 64.0);
    m.def(
        "chabauty_distance",
        [](const ClosedSubgroupRn& a, const ClosedSubgroupRn& b, double r_cut, double step,
           double net_step) {
            RhoResult r = chabauty_distance(a, b, {r_cut, step, net_step});
            return py::make_tuple(r.value, r.error_bound);
        },
        py::arg("a"), py::arg("b"), py::arg("r_cut") = 12.0, py::arg("step") = 1.0 / 64.0,
        py::arg("net_step") = 1.0 / 64.0);

    py::class_<FiniteMetricSpace>(m, "FiniteMetricSpace")
        .def_readonly("m", &FiniteMetricSpace::m)
        .def_readonly("basepoint", &FiniteMetricSpace::basepoint);

    m.def("metric_space", [](const std::vector<std::vector<double>>& rows, int basepoint) {
        FiniteMetricSpace x;
        x.m = static_cast<int>(rows.size());
        for (const auto& row : rows)
            for (double v : row) x.d.push_back(v);
        x.basepoint = basepoint;
        x.validate();
        return x;
    });
    m.def("gh_distance_exact", &gh_distance_exact);
    m.def("gh_distance_bound", [](const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
        GhBound b = gh_distance_bound(x, y);
        return py::make_tuple(b.lower, b.upper);
    });
    m.def("pointed_gh_distance", &pointed_gh_distance);
    m.def("ghd_series", [](const FiniteMetricSpace& x, const FiniteMetricSpace& y, int n_max) {
        GhdSeries s = ghd_series(x, y, n_max);
        return py::make_tuple(s.lower, s.upper, s.tail_bound);
    });

    m.def("chain_statistics",
          [](double p, int window, int r_max, uint64_t samples, uint64_t seed) {
              auto [a, b] = default_block_templates();
              return chain_statistics(p, window, r_max, samples, seed, a, b);
          });
    m.def("thick_fraction", [](double p, int window, uint64_t seed, double r, double t) {
        auto [a, b] = default_block_templates();
        GluedChain chain = sample_chain(seed, window, p, a, b);
        return fraction_dict(thick_fraction(chain, r, t));
    });
    m.def("boundary_safe_radius", [](int window) {
        auto [a, b] = default_block_templates();
        return boundary_safe_radius(window, a, b);
    });
}
