#include "qgr/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qgr/errors.hpp"
#include "qgr/knowledge_base.hpp"

namespace qgr {

namespace {

double to_double(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("bad numeric value for key '" + key + "'", line);
  }
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

HarnessConfig parse_config(std::istream& in) {
  HarnessConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key=value", line_no);
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto num = [&] { return to_double(value, key, line_no); };

    if (key == "population_size") {
      cfg.ga.population_size = static_cast<int>(num());
    } else if (key == "generations") {
      cfg.ga.generations = static_cast<int>(num());
    } else if (key == "crossover_rate") {
      cfg.ga.crossover_rate = num();
    } else if (key == "mutation_rate") {
      cfg.ga.mutation_rate = num();
    } else if (key == "acceptance_threshold") {
      cfg.ga.acceptance_threshold = num();
    } else if (key == "seed") {
      cfg.ga.seed = static_cast<std::uint64_t>(num());
    } else if (key == "nl_threshold") {
      cfg.grading.nl_threshold = num();
    } else if (key == "nd_limit") {
      cfg.grading.nd_limit = static_cast<int>(num());
    } else if (key == "tc_threshold") {
      cfg.grading.tc_threshold = num();
    } else if (key == "ra_threshold") {
      cfg.grading.ra_threshold = num();
    } else if (key == "delay_threshold") {
      cfg.grading.delay_threshold_s = num();
    } else if (key == "edge_density") {
      cfg.edge_density = num();
    } else if (key == "region_count") {
      cfg.region_count = static_cast<int>(num());
    } else if (key == "bandwidth_min") {
      cfg.gen.bandwidth_min = num();
    } else if (key == "bandwidth_max") {
      cfg.gen.bandwidth_max = num();
    } else if (key == "mu_min") {
      cfg.gen.mu_min = num();
    } else if (key == "mu_max") {
      cfg.gen.mu_max = num();
    } else if (key == "capacity_min") {
      cfg.gen.capacity_min = num();
    } else if (key == "capacity_max") {
      cfg.gen.capacity_max = num();
    } else if (key == "lambda_fraction") {
      cfg.gen.lambda_fraction = num();
    } else if (key == "traffic_fraction") {
      cfg.gen.traffic_fraction = num();
    } else if (key == "gamma_max") {
      cfg.gen.gamma_max = num();
    } else if (key == "constant_D") {
      cfg.constant_D = num();
    } else if (key == "channel_cost_d") {
      cfg.channel_cost_d = num();
    } else {
      throw ParseError("unknown config key '" + key + "'", line_no);
    }
  }
  return cfg;
}

HarnessConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file", path);
  return parse_config(in);
}

int default_region_count(int node_count) {
  return std::clamp(node_count / 8, 2, 8);
}

double default_edge_density(int node_count) {
  return std::min(1.0, 4.8 / node_count);
}

std::pair<int, int> default_endpoints(const Topology& topology) {
  std::vector<int> labels = topology.region_labels();
  std::vector<int> first = topology.region_members(labels.front());
  std::vector<int> last = topology.region_members(labels.back());
  int source = first.front();
  int dest = last.front();
  if (dest == source) dest = last.back();
  if (dest == source) throw Error("topology too small for distinct endpoints");
  return {source, dest};
}

namespace {

std::string error_tag(const Error& e) {
  if (dynamic_cast<const RegionStarvationError*>(&e)) {
    return "region-starvation";
  }
  if (dynamic_cast<const NoPathError*>(&e)) return "no-path";
  return "error";
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::vector<ExperimentRecord> run_comparison(const std::vector<int>& sizes,
                                             const std::vector<int>& seeds,
                                             const HarnessConfig& config,
                                             const std::string& kb_path,
                                             const std::string& topology_dir) {
  std::vector<ExperimentRecord> records;
  for (int size : sizes) {
    if (size < 4) throw Error("comparison sizes must be >= 4");
    int regions =
        config.region_count > 0 ? config.region_count : default_region_count(size);
    double density =
        config.edge_density > 0 ? config.edge_density : default_edge_density(size);

    for (int seed : seeds) {
      Topology topo = generate_topology(size, regions, density,
                                        static_cast<std::uint64_t>(seed),
                                        config.gen);
      std::uint64_t fp = topology_fingerprint(topo);
      auto [source, dest] = default_endpoints(topo);
      if (!topology_dir.empty()) {
        save_topology(topo, topology_dir + "/topo_" + std::to_string(size) +
                                "_" + std::to_string(seed) + ".txt");
      }

      // Both modes share the topology and the GA seed.
      std::uint64_t mix = static_cast<std::uint64_t>(seed) ^
                          (config.ga.seed * 0x9e3779b97f4a7c15ULL) ^
                          (static_cast<std::uint64_t>(size) << 32);
      GaConfig ga = config.ga;
      ga.seed = splitmix64(mix);

      {  // graded pipeline
        ExperimentRecord rec;
        rec.total_nodes = size;
        rec.seed = seed;
        rec.mode = "graded";
        rec.fingerprint = fp;
        auto start = std::chrono::steady_clock::now();
        try {
          SurvivorGraph surv =
              level1_select(topo, config.grading, {source, dest});
          GaResult result = evolve(surv, source, dest, ga);
          rec.nodes_selected = static_cast<int>(surv.kept_nodes.size());
          rec.route_length = result.best_path.hops();
          rec.generations_used = result.generations_used;
          rec.converged = result.converged;
          rec.best_bandwidth = result.best_path.raw_bandwidth;
          try {
            rec.mean_grade = mean_grade(surv);
          } catch (const Error&) {
            rec.mean_grade = std::nullopt;  // only pinned endpoints survived
          }
          if (!kb_path.empty()) {
            KnowledgeEntry entry;
            entry.topology_fingerprint = fp;
            entry.source = source;
            entry.dest = dest;
            entry.best_path = result.best_path.path;
            entry.raw_bandwidth = result.best_path.raw_bandwidth;
            entry.mean_grade = rec.mean_grade.value_or(0.0);
            kb_record(entry, kb_path);
          }
        } catch (const Error& e) {
          rec.error = error_tag(e);
        }
        rec.wall_time_ms = elapsed_ms(start);
        records.push_back(std::move(rec));
      }

      {  // non-graded pipeline
        ExperimentRecord rec;
        rec.total_nodes = size;
        rec.seed = seed;
        rec.mode = "nongraded";
        rec.fingerprint = fp;
        auto start = std::chrono::steady_clock::now();
        try {
          SurvivorGraph whole = full_graph(topo);
          std::set<int> touched;
          auto observer = [&touched](int, const std::vector<Chromosome>& pop) {
            touched.clear();  // only the final generation counts
            for (const Chromosome& c : pop) {
              touched.insert(c.path.begin(), c.path.end());
            }
          };
          GaResult result = evolve(whole, source, dest, ga, observer);
          rec.nodes_selected = static_cast<int>(touched.size());
          rec.route_length = result.best_path.hops();
          rec.generations_used = result.generations_used;
          rec.converged = result.converged;
          rec.best_bandwidth = result.best_path.raw_bandwidth;
        } catch (const Error& e) {
          rec.error = error_tag(e);
        }
        rec.wall_time_ms = elapsed_ms(start);
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

void emit_report(const std::vector<ExperimentRecord>& records,
                 const std::string& out_path, bool include_timing) {
  if (records.empty()) throw Error("cannot emit a report with no records");
  std::vector<ExperimentRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ExperimentRecord& a, const ExperimentRecord& b) {
                     if (a.total_nodes != b.total_nodes) {
                       return a.total_nodes < b.total_nodes;
                     }
                     return a.mode < b.mode;
                   });
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write report", out_path);
  out << "total_nodes,mode,nodes_selected,route_length,generations_used,"
         "converged,best_bandwidth,mean_grade,wall_time_ms,error\n";
  for (const ExperimentRecord& r : sorted) {
    char wall[32];
    std::snprintf(wall, sizeof(wall), "%.3f",
                  include_timing ? r.wall_time_ms : 0.0);
    out << r.total_nodes << ',' << r.mode << ',' << r.nodes_selected << ','
        << r.route_length << ',' << r.generations_used << ','
        << (r.converged ? "true" : "false") << ','
        << format_double(r.best_bandwidth) << ','
        << (r.mean_grade ? format_double(*r.mean_grade) : std::string()) << ','
        << wall << ',' << r.error << '\n';
  }
  if (!out) throw IoError("write failed", out_path);
}

std::vector<ExperimentRecord> parse_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report", path);
  std::vector<ExperimentRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;  // header
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    while (fields.size() < 10) fields.emplace_back();
    if (fields.size() != 10) throw ParseError("expected 10 fields", line_no);
    ExperimentRecord r;
    r.total_nodes = std::stoi(fields[0]);
    r.mode = fields[1];
    r.nodes_selected = std::stoi(fields[2]);
    r.route_length = std::stoi(fields[3]);
    r.generations_used = std::stoi(fields[4]);
    r.converged = fields[5] == "true";
    r.best_bandwidth = std::stod(fields[6]);
    if (!fields[7].empty()) r.mean_grade = std::stod(fields[7]);
    r.wall_time_ms = std::stod(fields[8]);
    r.error = fields[9];
    records.push_back(std::move(r));
  }
  return records;
}

void write_grade_csv(const Topology& topology, const GradingConfig& config,
                     const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write grade report", out_path);
  out << "node,region,priority,grade,reasons\n";
  for (const Node& n : topology.nodes) {
    GradeReport r = priority_of(n.attrs, topology.in_degree(n.id), config);
    out << n.id << ',' << n.region << ',' << r.priority << ',' << r.grade
        << ',' << r.reasons() << '\n';
  }
  if (!out) throw IoError("write failed", out_path);
}

void write_history_csv(const GaResult& result, const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write GA history", out_path);
  out << "generation,best_fitness,mean_fitness,distinct_paths\n";
  for (const GenerationStats& s : result.history) {
    out << s.generation << ',' << format_double(s.best_fitness) << ','
        << format_double(s.mean_fitness) << ',' << s.distinct_paths << '\n';
  }
  if (!out) throw IoError("write failed", out_path);
}

}  // namespace qgr
