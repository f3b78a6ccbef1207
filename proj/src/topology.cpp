#include "qgr/topology.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "qgr/errors.hpp"
#include "qgr/rng.hpp"

namespace qgr {

bool Topology::has_node(int id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                             [](const Node& n, int v) { return n.id < v; });
  return it != nodes.end() && it->id == id;
}

const Node& Topology::node(int id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                             [](const Node& n, int v) { return n.id < v; });
  if (it == nodes.end() || it->id != id) {
    throw Error("unknown node id " + std::to_string(id));
  }
  return *it;
}

int Topology::in_degree(int id) const {
  node(id);  // existence check
  int d = 0;
  for (const Edge& e : edges) {
    if (e.to == id) ++d;
  }
  return d;
}

int Topology::region_count() const {
  return static_cast<int>(region_labels().size());
}

std::vector<int> Topology::region_labels() const {
  std::set<int> labels;
  for (const Node& n : nodes) labels.insert(n.region);
  return {labels.begin(), labels.end()};
}

std::vector<int> Topology::region_members(int region) const {
  std::vector<int> out;
  for (const Node& n : nodes) {
    if (n.region == region) out.push_back(n.id);
  }
  return out;
}

bool Topology::connected_undirected() const {
  if (nodes.empty()) return true;
  std::map<int, std::vector<int>> adj;
  for (const Edge& e : edges) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  std::set<int> seen{nodes.front().id};
  std::deque<int> queue{nodes.front().id};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (seen.insert(v).second) queue.push_back(v);
    }
  }
  return seen.size() == nodes.size();
}

double Topology::gamma_total() const {
  double total = 0;
  for (const auto& [key, rate] : external_traffic) total += rate;
  return total;
}

std::string format_double(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string Topology::serialize() const {
  std::ostringstream out;
  for (const Node& n : nodes) {
    out << "node " << n.id << ' ' << n.region << ' '
        << format_double(n.attrs.bandwidth_mbps) << ' '
        << format_double(n.attrs.network_lifetime) << ' '
        << format_double(n.attrs.resource_allocated) << ' '
        << format_double(n.attrs.arrival_rate_lambda) << ' '
        << format_double(n.attrs.service_rate_mu) << ' '
        << format_double(n.attrs.capacity) << ' '
        << format_double(n.attrs.current_traffic) << '\n';
  }
  for (const Edge& e : edges) {
    out << "edge " << e.from << ' ' << e.to << ' '
        << format_double(e.link_bandwidth_mbps) << '\n';
  }
  for (const auto& [key, rate] : external_traffic) {
    out << "gamma " << key.first << ' ' << key.second << ' '
        << format_double(rate) << '\n';
  }
  return out.str();
}

namespace {

void validate_attrs(const NodeAttributes& a, int line) {
  if (!(a.bandwidth_mbps > 0)) throw ParseError("bandwidth must be > 0", line);
  if (a.network_lifetime < 0 || a.network_lifetime > 1) {
    throw ParseError("network lifetime must lie in [0,1]", line);
  }
  if (a.resource_allocated < 0 || a.resource_allocated > 1) {
    throw ParseError("resource allocated must lie in [0,1]", line);
  }
  if (a.arrival_rate_lambda < 0) {
    throw ParseError("arrival rate must be >= 0", line);
  }
  if (!(a.service_rate_mu > 0)) {
    throw ParseError("service rate must be > 0", line);
  }
  if (!(a.capacity > 0)) throw ParseError("capacity must be > 0", line);
  if (a.current_traffic < 0) {
    throw ParseError("current traffic must be >= 0", line);
  }
}

}  // namespace

Topology generate_topology(int node_count, int region_count,
                           double edge_density, std::uint64_t seed,
                           const GenParams& params) {
  if (node_count < 2) throw Error("node_count must be >= 2");
  if (region_count < 1) throw Error("region_count must be >= 1");
  if (region_count > node_count) {
    throw Error("region_count must not exceed node_count");
  }
  if (!(edge_density > 0.0) || edge_density > 1.0) {
    throw Error("edge_density must lie in (0,1]");
  }

  Rng rng(seed);
  Topology topo;
  topo.nodes.reserve(static_cast<std::size_t>(node_count));

  // Near-equal contiguous regions: the first (node_count % region_count)
  // regions get one extra node.
  int base = node_count / region_count;
  int rem = node_count % region_count;
  std::vector<int> region_start(static_cast<std::size_t>(region_count) + 1, 0);
  for (int r = 0; r < region_count; ++r) {
    region_start[static_cast<std::size_t>(r) + 1] =
        region_start[static_cast<std::size_t>(r)] + base + (r < rem ? 1 : 0);
  }

  int region = 0;
  for (int id = 0; id < node_count; ++id) {
    while (id >= region_start[static_cast<std::size_t>(region) + 1]) ++region;
    NodeAttributes a;
    a.bandwidth_mbps = rng.uniform(params.bandwidth_min, params.bandwidth_max);
    a.network_lifetime = rng.uniform(0.0, 1.0);
    a.resource_allocated = rng.uniform(0.0, 1.0);
    a.service_rate_mu = rng.uniform(params.mu_min, params.mu_max);
    a.capacity = rng.uniform(params.capacity_min, params.capacity_max);
    a.arrival_rate_lambda =
        rng.uniform(0.0, params.lambda_fraction * a.service_rate_mu * a.capacity);
    a.current_traffic =
        rng.uniform(0.0, params.traffic_fraction * a.bandwidth_mbps);
    topo.nodes.push_back(Node{id, region, a});
  }

  auto link_bw = [&](int i, int j) {
    return std::min(topo.nodes[static_cast<std::size_t>(i)].attrs.bandwidth_mbps,
                    topo.nodes[static_cast<std::size_t>(j)].attrs.bandwidth_mbps);
  };

  std::set<std::pair<int, int>> present;
  auto add_edge = [&](int i, int j) {
    if (present.insert({i, j}).second) {
      topo.edges.push_back(Edge{i, j, link_bw(i, j)});
    }
  };

  for (int i = 0; i < node_count; ++i) {
    for (int j = 0; j < node_count; ++j) {
      if (i == j) continue;
      if (rng.uniform(0.0, 1.0) < edge_density) add_edge(i, j);
    }
  }

  // Ring bridges between the lowest-id nodes of adjacent regions.
  if (region_count >= 2) {
    for (int r = 0; r < region_count; ++r) {
      int a = region_start[static_cast<std::size_t>(r)];
      int b = region_start[static_cast<std::size_t>((r + 1) % region_count)];
      add_edge(a, b);
      add_edge(b, a);
    }
  }

  // Bridge remaining undirected components until connected.
  for (;;) {
    std::vector<char> seen(static_cast<std::size_t>(node_count), 0);
    std::map<int, std::vector<int>> adj;
    for (const Edge& e : topo.edges) {
      adj[e.from].push_back(e.to);
      adj[e.to].push_back(e.from);
    }
    std::deque<int> queue{0};
    seen[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[u]) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++reached;
          queue.push_back(v);
        }
      }
    }
    if (reached == node_count) break;
    int orphan = 0;
    while (seen[static_cast<std::size_t>(orphan)]) ++orphan;
    std::vector<int> anchors;
    for (int i = 0; i < node_count; ++i) {
      if (seen[static_cast<std::size_t>(i)]) anchors.push_back(i);
    }
    int anchor = anchors[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(anchors.size()) - 1))];
    add_edge(orphan, anchor);
    add_edge(anchor, orphan);
  }

  for (int j = 0; j < node_count; ++j) {
    for (int k = 0; k < node_count; ++k) {
      if (j == k) continue;
      topo.external_traffic[{j, k}] = rng.uniform(0.0, params.gamma_max);
    }
  }
  return topo;
}

int node_density(const Topology& topology, int node_id) {
  return topology.in_degree(node_id);
}

Topology parse_topology(std::istream& in) {
  Topology topo;
  std::set<int> ids;
  std::string line;
  int line_no = 0;
  struct PendingEdge {
    Edge edge;
    int line;
  };
  std::vector<PendingEdge> pending_edges;
  struct PendingGamma {
    int j, k;
    double rate;
    int line;
  };
  std::vector<PendingGamma> pending_gammas;

  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;  // blank / comment line
    if (kind == "node") {
      Node n;
      NodeAttributes& a = n.attrs;
      if (!(ls >> n.id >> n.region >> a.bandwidth_mbps >> a.network_lifetime >>
            a.resource_allocated >> a.arrival_rate_lambda >>
            a.service_rate_mu >> a.capacity >> a.current_traffic)) {
        throw ParseError("malformed node record (expected 9 fields)", line_no);
      }
      if (!ids.insert(n.id).second) {
        throw ParseError("duplicate node id " + std::to_string(n.id), line_no);
      }
      validate_attrs(a, line_no);
      topo.nodes.push_back(n);
    } else if (kind == "edge") {
      Edge e;
      if (!(ls >> e.from >> e.to >> e.link_bandwidth_mbps)) {
        throw ParseError("malformed edge record (expected 3 fields)", line_no);
      }
      if (e.from == e.to) throw ParseError("self-loop edge", line_no);
      if (!(e.link_bandwidth_mbps > 0)) {
        throw ParseError("link bandwidth must be > 0", line_no);
      }
      pending_edges.push_back({e, line_no});
    } else if (kind == "gamma") {
      PendingGamma g;
      g.line = line_no;
      if (!(ls >> g.j >> g.k >> g.rate)) {
        throw ParseError("malformed gamma record (expected 3 fields)", line_no);
      }
      if (g.j == g.k) throw ParseError("gamma diagonal must be 0", line_no);
      if (g.rate < 0) throw ParseError("gamma rate must be >= 0", line_no);
      pending_gammas.push_back(g);
    } else {
      throw ParseError("unknown record kind '" + kind + "'", line_no);
    }
  }

  std::sort(topo.nodes.begin(), topo.nodes.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });

  for (const PendingEdge& pe : pending_edges) {
    if (!ids.count(pe.edge.from)) {
      throw ParseError("edge references unknown node " +
                           std::to_string(pe.edge.from),
                       pe.line);
    }
    if (!ids.count(pe.edge.to)) {
      throw ParseError(
          "edge references unknown node " + std::to_string(pe.edge.to),
          pe.line);
    }
    topo.edges.push_back(pe.edge);
  }
  for (const PendingGamma& pg : pending_gammas) {
    if (!ids.count(pg.j) || !ids.count(pg.k)) {
      throw ParseError("gamma references unknown node", pg.line);
    }
    topo.external_traffic[{pg.j, pg.k}] = pg.rate;
  }
  return topo;
}

Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open topology file", path);
  return parse_topology(in);
}

void save_topology(const Topology& topology, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write topology file", path);
  out << topology.serialize();
  if (!out) throw IoError("write failed", path);
}

}  // namespace qgr
