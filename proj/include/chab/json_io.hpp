#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "chab/bs_space.hpp"
#include "chab/chabauty_rn.hpp"
#include "chab/chain_gluing.hpp"
#include "chab/free_group.hpp"
#include "chab/gh_metric.hpp"
#include "chab/rooted_graph.hpp"

namespace chab {

// Graph file format: {"n": int, "root": int, "edges": [[src, dst, label,
// weight?], ...], "oriented": bool?}. Orientation applies to all edges;
// weight defaults to 1.
nlohmann::json graph_to_json(const RootedGraph& g);
RootedGraph graph_from_json(const nlohmann::json& j);

// {"radius": r_max, "per_radius": [{"r": r, "atoms": [{"code", "prob"}...]}],
//  "sample_count": int | "exact"}
nlohmann::json statistics_to_json(const LocalStatistics& s);
LocalStatistics statistics_from_json(const nlohmann::json& j);
std::string statistics_to_csv(const LocalStatistics& s);

// {"dim": n, "subspace": [[...]...], "lattice": [[...]...]}
nlohmann::json subgroup_to_json(const ClosedSubgroupRn& h);
ClosedSubgroupRn subgroup_from_json(const nlohmann::json& j);

// {"d": [[...]...], "basepoint": i}
nlohmann::json metric_space_to_json(const FiniteMetricSpace& x);
FiniteMetricSpace metric_space_from_json(const nlohmann::json& j);

// {"m": int, "perms": [[images...] | "cycle notation", ...]}
std::vector<std::vector<int>> permutations_from_json(const nlohmann::json& j);

// Block template: graph format plus {"left": id, "right": id}, name optional.
BlockTemplate block_from_json(const nlohmann::json& j, const std::string& fallback_name);

nlohmann::json load_json_file(const std::string& path);

}  // namespace chab
