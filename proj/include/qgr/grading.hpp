#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qgr/topology.hpp"

namespace qgr {

/// Thresholds for the level-1 predicate chain, plus the priority-to-grade map.
struct GradingConfig {
  double nl_threshold = 0.1;     // alive when network_lifetime > this
  int nd_limit = 5;              // node passes when in_degree < this
  double tc_threshold = 0.7;     // uncongested when congestion_score < this
  double ra_threshold = 0.3;     // resourced when resource_allocated > this
  double delay_threshold_s = 0.05;  // low-delay when mm1 delay < this
  // grade for priority P is grade_map[P-1]; endpoints fixed by the scale
  // (P=1 -> 0 most optimal, lifetime failure -> -3)
  std::array<int, 6> grade_map = {0, 1, 2, 3, 3, -3};
  double grade_window_lo = 0.0;  // survivors keep grade in [lo, hi]
  double grade_window_hi = 2.0;
};

/// Names of the five chained predicates, in evaluation order.
inline constexpr std::array<const char*, 5> kPredicateNames = {
    "NL", "ND", "TC", "RA", "DELAY"};

struct GradeReport {
  int priority = 1;  // 1..6
  int grade = 0;     // -3..+3
  std::array<bool, 5> checks{};  // pass flag per predicate, chain order

  std::string reasons() const;
};

/// Evaluate the nested predicate chain: lifetime, density, congestion,
/// resources, queueing delay. The first failed predicate fixes the priority
/// (all pass -> 1, delay -> 2, RA -> 3, TC -> 4, ND -> 5, NL -> 6).
/// An unstable queue counts as a delay failure, not an error.
GradeReport priority_of(const NodeAttributes& attrs, int in_degree,
                        const GradingConfig& config);

struct RegionSummary {
  int region = 0;
  int kept = 0;
  int dropped = 0;
  double mean_grade = 0;  // over kept nodes of the region
};

/// Vertex-induced subgraph on the level-1 survivors.
struct SurvivorGraph {
  std::vector<int> kept_nodes;  // sorted
  std::vector<Edge> kept_edges;
  std::map<int, GradeReport> grades;  // every graded node, kept or not
  // pinned nodes kept despite failing selection; excluded from grade stats
  std::set<int> pinned_extras;
  std::vector<RegionSummary> region_summaries;
  // kept-node adjacency: id -> (neighbor id, link bandwidth), sorted by id
  std::map<int, std::vector<std::pair<int, double>>> adjacency;

  bool contains(int id) const;
  double link_bandwidth(int from, int to) const;  // throws on missing edge
};

/// Level-1 selection, region by region: grade every node, keep the nodes in
/// the top three priority classes present whose grade falls inside the
/// selection window, then induce the connectivity graph on the survivors.
/// Nodes in `pinned` (route endpoints) are always kept but excluded from the
/// region summaries' grade statistics. A region with no survivor throws
/// RegionStarvationError.
SurvivorGraph level1_select(const Topology& topology,
                            const GradingConfig& config,
                            const std::set<int>& pinned = {});

/// The whole topology as a survivor graph (non-graded pipeline input).
SurvivorGraph full_graph(const Topology& topology);

/// Arithmetic mean of kept-node grades; throws on an empty survivor set.
double mean_grade(const SurvivorGraph& survivors);

}  // namespace qgr
