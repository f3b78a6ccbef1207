#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qgr {

/// Per-node quality vector.
struct NodeAttributes {
  double bandwidth_mbps = 0;      // strictly positive
  double network_lifetime = 0;    // [0,1], 0 = dead
  double resource_allocated = 0;  // [0,1]
  double arrival_rate_lambda = 0; // messages/s
  double service_rate_mu = 0;     // messages/s, strictly positive
  double capacity = 0;            // bits/s scale factor, strictly positive
  double current_traffic = 0;     // same units as bandwidth

  bool operator==(const NodeAttributes&) const = default;
};

struct Node {
  int id = 0;
  int region = 0;
  NodeAttributes attrs;

  bool operator==(const Node&) const = default;
};

struct Edge {
  int from = 0;
  int to = 0;
  double link_bandwidth_mbps = 0;

  bool operator==(const Edge&) const = default;
};

/// Value ranges for generated node attributes and external traffic.
struct GenParams {
  double bandwidth_min = 10.0;
  double bandwidth_max = 100.0;
  double mu_min = 50.0;
  double mu_max = 150.0;
  double capacity_min = 1.0;
  double capacity_max = 10.0;
  double lambda_fraction = 0.9;  // lambda ~ U[0, fraction * mu * C]
  double traffic_fraction = 1.0; // traffic ~ U[0, fraction * bandwidth]
  double gamma_max = 5.0;        // external traffic rate cap, messages/s
};

/// Region-partitioned directed graph with per-node attributes, per-link
/// bandwidths and an external traffic matrix. Immutable by convention after
/// construction; safe to share read-only.
struct Topology {
  std::vector<Node> nodes;  // sorted by id, ids unique
  std::vector<Edge> edges;
  // gamma_jk, messages/s; omitted pairs are 0, diagonal is always 0
  std::map<std::pair<int, int>, double> external_traffic;

  bool operator==(const Topology&) const = default;

  bool has_node(int id) const;
  const Node& node(int id) const;  // throws Error on unknown id
  int in_degree(int id) const;
  int region_count() const;
  std::vector<int> region_members(int region) const;
  std::vector<int> region_labels() const;  // sorted, distinct
  bool connected_undirected() const;
  double gamma_total() const;

  /// Canonical text form, identical to the save-file contents.
  std::string serialize() const;
};

/// Generate a connected region-based topology from a single seeded stream.
/// Regions are near-equal contiguous id blocks arranged on a ring; bridge
/// links between the lowest-id nodes of ring-adjacent regions guarantee
/// inter-region connectivity, and extra bridge links are added until the
/// undirected graph is connected. Same arguments => bit-identical result.
Topology generate_topology(int node_count, int region_count,
                           double edge_density, std::uint64_t seed,
                           const GenParams& params = {});

/// In-degree of a node in the directed edge set.
int node_density(const Topology& topology, int node_id);

Topology parse_topology(std::istream& in);
Topology load_topology(const std::string& path);
void save_topology(const Topology& topology, const std::string& path);

/// Shortest-precision decimal form that round-trips the double exactly.
std::string format_double(double v);

}  // namespace qgr
