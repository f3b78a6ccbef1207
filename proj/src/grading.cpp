#include "qgr/grading.hpp"

#include <algorithm>

#include "qgr/errors.hpp"
#include "qgr/queueing.hpp"

namespace qgr {

std::string GradeReport::reasons() const {
  std::string out;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (i) out += ';';
    out += kPredicateNames[i];
    out += checks[i] ? "=pass" : "=fail";
  }
  return out;
}

GradeReport priority_of(const NodeAttributes& attrs, int in_degree,
                        const GradingConfig& config) {
  GradeReport r;
  r.checks[0] = attrs.network_lifetime > config.nl_threshold;
  r.checks[1] = in_degree < config.nd_limit;
  r.checks[2] = congestion_score(attrs) < config.tc_threshold;
  r.checks[3] = attrs.resource_allocated > config.ra_threshold;
  double mu_c = attrs.service_rate_mu * attrs.capacity;
  if (attrs.arrival_rate_lambda >= mu_c) {
    r.checks[4] = false;  // unstable queue: worst possible delay
  } else {
    r.checks[4] =
        mm1_state(attrs.arrival_rate_lambda, attrs.service_rate_mu,
                  attrs.capacity)
            .mean_delay_s < config.delay_threshold_s;
  }
  // First failure in chain order fixes P; chain order is the reverse of
  // check order (the innermost predicate fails to the smallest penalty).
  if (!r.checks[0]) {
    r.priority = 6;
  } else if (!r.checks[1]) {
    r.priority = 5;
  } else if (!r.checks[2]) {
    r.priority = 4;
  } else if (!r.checks[3]) {
    r.priority = 3;
  } else if (!r.checks[4]) {
    r.priority = 2;
  } else {
    r.priority = 1;
  }
  r.grade = config.grade_map[static_cast<std::size_t>(r.priority - 1)];
  return r;
}

bool SurvivorGraph::contains(int id) const {
  return std::binary_search(kept_nodes.begin(), kept_nodes.end(), id);
}

double SurvivorGraph::link_bandwidth(int from, int to) const {
  auto it = adjacency.find(from);
  if (it != adjacency.end()) {
    for (const auto& [nbr, bw] : it->second) {
      if (nbr == to) return bw;
    }
  }
  throw Error("no surviving link " + std::to_string(from) + "->" +
              std::to_string(to));
}

namespace {

void build_adjacency(SurvivorGraph& g) {
  for (int id : g.kept_nodes) g.adjacency[id];  // isolated nodes included
  for (const Edge& e : g.kept_edges) {
    g.adjacency[e.from].push_back({e.to, e.link_bandwidth_mbps});
  }
  for (auto& [id, nbrs] : g.adjacency) {
    std::sort(nbrs.begin(), nbrs.end());
  }
}

}  // namespace

SurvivorGraph level1_select(const Topology& topology,
                            const GradingConfig& config,
                            const std::set<int>& pinned) {
  SurvivorGraph g;
  for (const Node& n : topology.nodes) {
    g.grades[n.id] = priority_of(n.attrs, topology.in_degree(n.id), config);
  }

  std::set<int> kept;
  for (int region : topology.region_labels()) {
    std::vector<int> members = topology.region_members(region);
    std::set<int> classes;
    for (int id : members) classes.insert(g.grades[id].priority);
    std::vector<int> top(classes.begin(), classes.end());
    if (top.size() > 3) top.resize(3);

    RegionSummary summary;
    summary.region = region;
    double grade_sum = 0;
    for (int id : members) {
      const GradeReport& gr = g.grades[id];
      bool in_top = std::find(top.begin(), top.end(), gr.priority) != top.end();
      bool in_window = gr.grade >= config.grade_window_lo &&
                       gr.grade <= config.grade_window_hi;
      if (in_top && in_window) {
        kept.insert(id);
        ++summary.kept;
        grade_sum += gr.grade;
      } else if (pinned.count(id)) {
        kept.insert(id);
        g.pinned_extras.insert(id);
        ++summary.kept;
      } else {
        ++summary.dropped;
      }
    }
    if (summary.kept == 0) throw RegionStarvationError(region);
    int graded_kept = summary.kept - static_cast<int>(std::count_if(
                                         members.begin(), members.end(),
                                         [&](int id) {
                                           return g.pinned_extras.count(id) > 0;
                                         }));
    summary.mean_grade = graded_kept > 0 ? grade_sum / graded_kept : 0.0;
    g.region_summaries.push_back(summary);
  }

  g.kept_nodes.assign(kept.begin(), kept.end());
  for (const Edge& e : topology.edges) {
    if (kept.count(e.from) && kept.count(e.to)) g.kept_edges.push_back(e);
  }
  build_adjacency(g);
  return g;
}

SurvivorGraph full_graph(const Topology& topology) {
  SurvivorGraph g;
  g.kept_nodes.reserve(topology.nodes.size());
  for (const Node& n : topology.nodes) g.kept_nodes.push_back(n.id);
  g.kept_edges = topology.edges;
  build_adjacency(g);
  return g;
}

double mean_grade(const SurvivorGraph& survivors) {
  double sum = 0;
  int count = 0;
  for (int id : survivors.kept_nodes) {
    if (survivors.pinned_extras.count(id)) continue;
    auto it = survivors.grades.find(id);
    if (it == survivors.grades.end()) continue;
    sum += it->second.grade;
    ++count;
  }
  if (count == 0) throw Error("mean grade of an empty survivor set");
  return sum / count;
}

}  // namespace qgr
