#include "chab/cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chab/json_io.hpp"

namespace chab {

using nlohmann::json;

namespace {

std::string csv_of_record(const json& j) {
    std::ostringstream head, row;
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
            head << ",";
            row << ",";
        }
        first = false;
        head << it.key();
        if (it.value().is_string())
            row << it.value().get<std::string>();
        else
            row << it.value().dump();
    }
    return head.str() + "\n" + row.str() + "\n";
}

struct Options {
    std::string format = "json";
    uint64_t seed = kDefaultSeed;
};

void emit(std::ostream& out, const Options& opt, const json& record) {
    if (opt.format == "csv")
        out << csv_of_record(record);
    else
        out << record.dump(2) << "\n";
}

void emit_stats(std::ostream& out, const Options& opt, const LocalStatistics& stats) {
    if (opt.format == "csv")
        out << statistics_to_csv(stats);
    else
        out << statistics_to_json(stats).dump(2) << "\n";
}

std::vector<Word> parse_generators(const std::string& gens, int rank) {
    std::vector<Word> words;
    std::string cur;
    std::istringstream in(gens);
    while (std::getline(in, cur, ',')) {
        if (cur.empty()) continue;
        words.push_back(parse_word(cur, rank));
    }
    return words;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"desk-scale computations on subgroup spaces and graph limits"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--seed", opt.seed, "master seed for all randomness")
        ->capture_default_str();

    // chabauty-dist
    std::string in_a, in_b;
    double r_cut = 12.0, step = 1.0 / 64.0, net_step = 1.0 / 64.0;
    auto* chd = app.add_subcommand("chabauty-dist",
                                   "Chabauty metric between closed subgroups of R^n");
    chd->add_option("--a", in_a, "subgroup JSON file")->required();
    chd->add_option("--b", in_b, "subgroup JSON file")->required();
    chd->add_option("--r-cut", r_cut, "quadrature cutoff radius")->capture_default_str();
    chd->add_option("--step", step, "quadrature step")->capture_default_str();
    chd->add_option("--net-step", net_step, "subspace net covering radius")
        ->capture_default_str();

    // fold
    int rank = 2;
    std::string gens;
    auto* fold = app.add_subcommand("fold", "Stallings core of a f.g. subgroup of F_k");
    fold->add_option("--rank", rank, "ambient free group rank")->capture_default_str();
    fold->add_option("--gens", gens, "comma-separated generator words (a..z, A..Z)")
        ->required();

    // member
    std::string graph_path, word_text, member_gens;
    int member_rank = 0;
    auto* member = app.add_subcommand("member", "membership in a subgroup of F_k");
    member->add_option("--graph", graph_path, "core graph JSON (as emitted by fold)");
    member->add_option("--gens", member_gens, "generators (alternative to --graph)");
    member->add_option("--rank", member_rank, "rank when using --gens (default: inferred)");
    member->add_option("--word", word_text, "word to test")->required();

    // schreier
    std::string perms_path;
    int schreier_root = 0;
    auto* schreier =
        app.add_subcommand("schreier", "Schreier coset graph of a permutation action");
    schreier->add_option("--perms", perms_path, "permutations JSON file")->required();
    schreier->add_option("--root", schreier_root, "base coset")->capture_default_str();

    // ball-stats
    std::string stats_graph;
    int r_max = 3;
    uint64_t samples = 0;
    auto* ball_stats =
        app.add_subcommand("ball-stats", "local statistics of canonical r-ball codes");
    ball_stats->add_option("--graph", stats_graph, "graph JSON file")->required();
    ball_stats->add_option("--r-max", r_max, "maximum ball radius")->capture_default_str();
    ball_stats->add_option("--samples", samples,
                           "Monte-Carlo root draws (default: exhaustive)");

    // bs-dist
    std::string stats_a, stats_b;
    auto* bs = app.add_subcommand("bs-dist", "distance between local statistics");
    bs->add_option("--a", stats_a, "statistics JSON file")->required();
    bs->add_option("--b", stats_b, "statistics JSON file")->required();

    // mtp-check
    std::string mtp_graph, weights_path;
    int mtp_r = 2;
    auto* mtp = app.add_subcommand("mtp-check", "mass-transport defect of a rooted graph");
    mtp->add_option("--graph", mtp_graph, "graph JSON file")->required();
    mtp->add_option("--r", mtp_r, "test-function radius")->capture_default_str();
    mtp->add_option("--root-weights", weights_path,
                    "JSON array of root weights (default: uniform)");

    // gh-dist
    std::string gh_x, gh_y, gh_mode = "exact";
    auto* gh = app.add_subcommand("gh-dist",
                                  "Gromov-Hausdorff distance of finite metric spaces");
    gh->add_option("--x", gh_x, "metric space JSON file")->required();
    gh->add_option("--y", gh_y, "metric space JSON file")->required();
    gh->add_option("--mode", gh_mode, "exact | bound | pointed")
        ->check(CLI::IsMember({"exact", "bound", "pointed"}))
        ->capture_default_str();

    // ghd-series
    std::string ghd_x, ghd_y;
    int n_max = 6;
    auto* ghd = app.add_subcommand("ghd-series", "truncated pointed ball series");
    ghd->add_option("--x", ghd_x, "metric space JSON file")->required();
    ghd->add_option("--y", ghd_y, "metric space JSON file")->required();
    ghd->add_option("--n-max", n_max, "series truncation")->capture_default_str();

    // glue-stats
    double p = 0.5;
    int window = 12, glue_r_max = 3;
    uint64_t glue_samples = 1000;
    bool allow_boundary = false;
    std::string block_a_path, block_b_path;
    auto* glue = app.add_subcommand("glue-stats",
                                    "ball statistics of the Bernoulli block gluing");
    glue->add_option("--p", p, "probability of block A")->capture_default_str();
    glue->add_option("--window", window, "window half-width")->capture_default_str();
    glue->add_option("--samples", glue_samples, "sample count")->capture_default_str();
    glue->add_option("--r-max", glue_r_max, "maximum ball radius")->capture_default_str();
    glue->add_flag("--allow-boundary", allow_boundary,
                   "permit radii that can see the window truncation");
    glue->add_option("--block-a", block_a_path, "custom block A JSON");
    glue->add_option("--block-b", block_b_path, "custom block B JSON");

    // cheeger
    std::string cheeger_graph, cheeger_mode = "exact";
    auto* cheeger = app.add_subcommand("cheeger", "isoperimetric constant of a graph");
    cheeger->add_option("--graph", cheeger_graph, "graph JSON file")->required();
    cheeger->add_option("--mode", cheeger_mode, "exact | bound")
        ->check(CLI::IsMember({"exact", "bound"}))
        ->capture_default_str();

    // thick
    std::string thick_graph;
    double thick_r = 2.0, threshold = 0.0;
    double thick_p = 0.5;
    int thick_window = 12;
    auto* thick = app.add_subcommand(
        "thick", "tree-ball fraction of a graph, or thick part of a glued chain");
    thick->add_option("--graph", thick_graph, "graph JSON file (tree-ball fraction)");
    thick->add_option("--r", thick_r, "ball radius")->capture_default_str();
    thick->add_option("--threshold", threshold, "systole threshold (chain mode)");
    thick->add_option("--p", thick_p, "probability of block A (chain mode)");
    thick->add_option("--window", thick_window, "window half-width (chain mode)")
        ->capture_default_str();

    // short-rel
    std::string rel_graph;
    int rel_n = 4;
    auto* rel = app.add_subcommand("short-rel",
                                   "probability of a short relation at a uniform root");
    rel->add_option("--graph", rel_graph, "Schreier graph JSON file")->required();
    rel->add_option("--n", rel_n, "maximum relation length")->capture_default_str();

    try {
        std::vector<std::string> argv_rev(args.rbegin(), args.rend());
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help() << std::flush;
        return 0;
    } catch (const CLI::ParseError& e) {
        err << json{{"error", e.what()}, {"kind", "parse"}}.dump() << "\n";
        return 2;
    }

    try {
        if (chd->parsed()) {
            ClosedSubgroupRn a = subgroup_from_json(load_json_file(in_a));
            ClosedSubgroupRn b = subgroup_from_json(load_json_file(in_b));
            RhoResult rho = chabauty_distance(a, b, {r_cut, step, net_step});
            emit(out, opt, json{{"rho", rho.value}, {"error_bound", rho.error_bound}});
        } else if (fold->parsed()) {
            CoreGraph core = stallings_core(parse_generators(gens, rank), rank);
            emit(out, opt, graph_to_json(to_rooted_graph(core)));
        } else if (member->parsed()) {
            CoreGraph core;
            if (!graph_path.empty()) {
                core = core_from_rooted(graph_from_json(load_json_file(graph_path)));
            } else if (!member_gens.empty()) {
                int k = member_rank;
                if (k == 0)
                    for (char c : member_gens)
                        if (std::isalpha(static_cast<unsigned char>(c)))
                            k = std::max(k, (std::tolower(c) - 'a') + 1);
                core = stallings_core(parse_generators(member_gens, k), std::max(k, 1));
            } else {
                throw parse_error("member: need --graph or --gens");
            }
            Word w = parse_word(word_text, core.rank);
            emit(out, opt, json{{"contains", contains(core, w)}});
        } else if (schreier->parsed()) {
            auto perms = permutations_from_json(load_json_file(perms_path));
            SchreierGraph s = schreier_from_permutations(perms, schreier_root);
            emit(out, opt, graph_to_json(to_rooted_graph(s.g)));
        } else if (ball_stats->parsed()) {
            RootedGraph g = graph_from_json(load_json_file(stats_graph));
            Sampling sampling = samples > 0
                                    ? Sampling::monte_carlo(samples, opt.seed)
                                    : Sampling::exhaustive();
            emit_stats(out, opt, local_statistics(g, r_max, sampling));
        } else if (bs->parsed()) {
            LocalStatistics a = statistics_from_json(load_json_file(stats_a));
            LocalStatistics b = statistics_from_json(load_json_file(stats_b));
            BsDistance d = bs_distance(a, b);
            emit(out, opt, json{{"value", d.value}, {"tail_bound", d.tail_bound}});
        } else if (mtp->parsed()) {
            RootedGraph g = graph_from_json(load_json_file(mtp_graph));
            std::optional<std::vector<double>> weights;
            if (!weights_path.empty())
                weights = load_json_file(weights_path).get<std::vector<double>>();
            MtpReport report = mtp_defect(g, mtp_r, weights);
            emit(out, opt,
                 json{{"radius", report.radius},
                      {"defect", report.defect},
                      {"witness", report.witness}});
        } else if (gh->parsed()) {
            FiniteMetricSpace x = metric_space_from_json(load_json_file(gh_x));
            FiniteMetricSpace y = metric_space_from_json(load_json_file(gh_y));
            if (gh_mode == "exact") {
                emit(out, opt, json{{"value", gh_distance_exact(x, y)}});
            } else if (gh_mode == "pointed") {
                emit(out, opt, json{{"value", pointed_gh_distance(x, y)}});
            } else {
                GhBound b = gh_distance_bound(x, y);
                emit(out, opt, json{{"lower", b.lower}, {"upper", b.upper}});
            }
        } else if (ghd->parsed()) {
            FiniteMetricSpace x = metric_space_from_json(load_json_file(ghd_x));
            FiniteMetricSpace y = metric_space_from_json(load_json_file(ghd_y));
            GhdSeries s = ghd_series(x, y, n_max);
            emit(out, opt,
                 json{{"lower", s.lower}, {"upper", s.upper}, {"tail_bound", s.tail_bound}});
        } else if (glue->parsed()) {
            auto [a, b] = default_block_templates();
            if (!block_a_path.empty())
                a = block_from_json(load_json_file(block_a_path), "A");
            if (!block_b_path.empty())
                b = block_from_json(load_json_file(block_b_path), "B");
            double safe = boundary_safe_radius(window, a, b);
            if (static_cast<double>(glue_r_max) >= safe && !allow_boundary)
                throw domain_error(
                    "glue-stats: r-max " + std::to_string(glue_r_max) +
                    " can see the window truncation (safe below " + std::to_string(safe) +
                    "); pass --allow-boundary to override");
            emit_stats(out, opt,
                       chain_statistics(p, window, glue_r_max, glue_samples, opt.seed, a, b));
        } else if (cheeger->parsed()) {
            RootedGraph g = graph_from_json(load_json_file(cheeger_graph));
            CheegerResult res = cheeger_constant(
                g, cheeger_mode == "exact" ? CheegerMode::exact : CheegerMode::bound);
            emit(out, opt,
                 json{{"value", res.value.value()},
                      {"num", res.value.num},
                      {"den", res.value.den},
                      {"exact", res.exact}});
        } else if (thick->parsed()) {
            if (!thick_graph.empty()) {
                RootedGraph g = graph_from_json(load_json_file(thick_graph));
                Fraction f = tree_ball_fraction(g, thick_r);
                emit(out, opt,
                     json{{"fraction", f.value()}, {"num", f.num}, {"den", f.den}});
            } else if (thick->count("--p") > 0 || threshold > 0.0) {
                if (!(threshold > 0.0))
                    throw parse_error("thick: chain mode needs --threshold");
                auto [a, b] = default_block_templates();
                GluedChain chain = sample_chain(derive_seed(opt.seed, "thick-chain"),
                                                thick_window, thick_p, a, b);
                Fraction f = thick_fraction(chain, thick_r, threshold);
                emit(out, opt,
                     json{{"fraction", f.value()},
                          {"num", f.num},
                          {"den", f.den},
                          {"labels", std::string(chain.labels.begin(), chain.labels.end())}});
            } else {
                throw parse_error("thick: need --graph, or --p/--threshold for chain mode");
            }
        } else if (rel->parsed()) {
            SchreierGraph s =
                as_schreier(core_from_rooted(graph_from_json(load_json_file(rel_graph))));
            Fraction f = short_relation_probability(s, rel_n);
            emit(out, opt, json{{"probability", f.value()}, {"num", f.num}, {"den", f.den}});
        }
        return 0;
    } catch (const capacity_error& e) {
        err << json{{"error", e.what()}, {"kind", "capacity"}}.dump() << "\n";
        return 3;
    } catch (const parse_error& e) {
        err << json{{"error", e.what()}, {"kind", "parse"}}.dump() << "\n";
        return 2;
    } catch (const domain_error& e) {
        err << json{{"error", e.what()}, {"kind", "domain"}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << json{{"error", e.what()}, {"kind", "internal"}}.dump() << "\n";
        return 1;
    }
}

}  // namespace chab
