// Acceptance suite: one pass/fail line per criterion. The first argument is
// the path to the CLI binary (used by the determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "qgr/errors.hpp"
#include "qgr/ga_router.hpp"
#include "qgr/grading.hpp"
#include "qgr/harness.hpp"
#include "qgr/knowledge_base.hpp"
#include "qgr/queueing.hpp"
#include "qgr/rng.hpp"
#include "qgr/topology.hpp"

using namespace qgr;
namespace fs = std::filesystem;

namespace {

std::string g_cli_path;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

bool rel_close(double a, double b, double tol) {
  double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / scale <= tol;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 1. mean_jobs = rho/(1-rho) and mean_jobs = lambda * delay, 1e-12, < 1 s
bool criterion_mm1_correctness() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(1001);
  for (int i = 0; i < 1000; ++i) {
    double mu = rng.uniform(0.5, 200);
    double c = rng.uniform(0.1, 20);
    double lambda = rng.uniform(0, 0.999 * mu * c);
    QueueState s = mm1_state(lambda, mu, c);
    double rho = lambda / (mu * c);
    if (!rel_close(s.mean_jobs, rho / (1 - rho), 1e-12)) return false;
    if (!rel_close(s.mean_jobs, lambda * s.mean_delay_s, 1e-12)) return false;
  }
  return seconds_since(start) < 1.0;
}

// 2. network_delay vs an independent term-by-term sum, 1e-12, < 1 s
bool criterion_delay_oracle() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(1002);
  for (int i = 0; i < 100; ++i) {
    Topology t;
    NodeAttributes a;
    a.bandwidth_mbps = 50;
    a.network_lifetime = 1;
    a.resource_allocated = 1;
    for (int n = 0; n < 11; ++n) {
      a.service_rate_mu = rng.uniform(10, 100);
      a.capacity = rng.uniform(0.5, 5);
      t.nodes.push_back(Node{n, 0, a});
    }
    std::vector<double> flows;
    for (int e = 0; e < 10; ++e) {
      t.edges.push_back(Edge{e, e + 1, 50});
      const NodeAttributes& sink = t.nodes[static_cast<std::size_t>(e) + 1].attrs;
      flows.push_back(
          rng.uniform(0, 0.95 * sink.service_rate_mu * sink.capacity));
    }
    t.external_traffic[{0, 10}] = rng.uniform(0.5, 10);
    DelayBreakdown d = network_delay(t, flows);

    // independent route: evaluate each term of the sum directly
    double gamma = t.external_traffic[{0, 10}];
    double expected = 0;
    for (int e = 0; e < 10; ++e) {
      const NodeAttributes& sink = t.nodes[static_cast<std::size_t>(e) + 1].attrs;
      double mu_c = sink.service_rate_mu * sink.capacity;
      expected += (flows[static_cast<std::size_t>(e)] / gamma) *
                  (1.0 / (mu_c - flows[static_cast<std::size_t>(e)]));
    }
    if (!rel_close(d.total_delay_s, expected, 1e-12)) return false;
    double term_sum = 0;
    for (const ChannelTerm& ct : d.per_channel) term_sum += ct.term;
    if (!rel_close(d.total_delay_s, term_sum, 1e-12)) return false;
  }
  return seconds_since(start) < 1.0;
}

// 3. exhaustive 2^5 truth table of the priority chain, grade endpoints
bool criterion_priority_truth_table() {
  GradingConfig cfg;
  for (int mask = 0; mask < 32; ++mask) {
    bool nl = mask & 1, nd = mask & 2, tc = mask & 4, ra = mask & 8,
         delay = mask & 16;
    NodeAttributes a;
    a.bandwidth_mbps = 100;
    a.network_lifetime = nl ? 0.9 : 0.0;
    a.current_traffic = tc ? 0.0 : 100.0;  // saturated when TC fails
    a.resource_allocated = ra ? 0.9 : 0.0;
    a.service_rate_mu = 100;
    a.capacity = 5;
    a.arrival_rate_lambda = delay ? 1.0 : 499.5;  // delay 2 s when failing
    int in_degree = nd ? 2 : 7;

    int expected;
    if (!nl) expected = 6;
    else if (!nd) expected = 5;
    else if (!tc) expected = 4;
    else if (!ra) expected = 3;
    else if (!delay) expected = 2;
    else expected = 1;

    GradeReport r = priority_of(a, in_degree, cfg);
    if (r.priority != expected) return false;
    if (r.checks[0] != nl || r.checks[1] != nd || r.checks[2] != tc ||
        r.checks[3] != ra || r.checks[4] != delay) {
      return false;
    }
    if (expected == 1 && r.grade != 0) return false;
    if (!nl && r.grade != -3) return false;
  }
  return true;
}

// 4. level-1 soundness on 100 seeded 16-64-node topologies, < 5 s
bool criterion_level1_soundness() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(1004);
  GradingConfig cfg;
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    int size = rng.uniform_int(16, 64);
    Topology t = generate_topology(size, 2, std::min(1.0, 4.8 / size),
                                   static_cast<std::uint64_t>(2000 + i));
    SurvivorGraph g;
    try {
      g = level1_select(t, cfg);
    } catch (const RegionStarvationError&) {
      continue;  // legitimately empty region; nothing to check
    }
    ++checked;
    std::set<int> kept(g.kept_nodes.begin(), g.kept_nodes.end());
    for (int id : g.kept_nodes) {
      int grade = g.grades.at(id).grade;
      if (grade < 0 || grade > 2) return false;
    }
    for (const Edge& e : g.kept_edges) {
      if (!kept.count(e.from) || !kept.count(e.to)) return false;
    }
    double mean = mean_grade(g);
    if (mean < 0 || mean > 2) return false;
  }
  if (checked < 90) return false;
  return seconds_since(start) < 5.0;
}

// 5. population fitness sums to 1 +- 1e-12 on 1000 random populations
bool criterion_fitness_normalization() {
  Rng rng(1005);
  for (int i = 0; i < 1000; ++i) {
    int n = rng.uniform_int(1, 50);
    std::vector<Chromosome> pop(static_cast<std::size_t>(n));
    for (Chromosome& c : pop) {
      c.path = {0, 1};
      c.raw_bandwidth = rng.uniform(0.1, 500);
    }
    fitness_assign(pop);
    double sum = 0;
    for (const Chromosome& c : pop) sum += c.fitness;
    if (std::fabs(sum - 1.0) > 1e-12) return false;
  }
  return true;
}

// 6. GA reaches the widest-path oracle on >= 95 of 100 small graphs, < 30 s
bool criterion_ga_vs_oracle() {
  auto start = std::chrono::steady_clock::now();
  int hits = 0;
  bool all_valid = true;
  for (int seed = 0; seed < 100; ++seed) {
    Topology t = generate_topology(12, 2, 0.35,
                                   static_cast<std::uint64_t>(3000 + seed));
    SurvivorGraph g = full_graph(t);
    Chromosome best = widest_path_oracle(g, 0, 11);
    GaConfig cfg;
    cfg.population_size = 20;
    cfg.generations = 50;
    cfg.seed = static_cast<std::uint64_t>(seed);
    auto observer = [&](int, const std::vector<Chromosome>& pop) {
      for (const Chromosome& c : pop) {
        std::set<int> seen(c.path.begin(), c.path.end());
        if (seen.size() != c.path.size() || c.path.size() < 2) {
          all_valid = false;
          return;
        }
        for (std::size_t i = 0; i + 1 < c.path.size(); ++i) {
          try {
            g.link_bandwidth(c.path[i], c.path[i + 1]);
          } catch (const Error&) {
            all_valid = false;
            return;
          }
        }
      }
    };
    GaResult r = evolve(g, 0, 11, cfg, observer);
    if (r.best_path.raw_bandwidth >= best.raw_bandwidth * (1 - 1e-12)) ++hits;
  }
  std::printf("    (GA reached the oracle bandwidth in %d/100 runs)\n", hits);
  if (!all_valid) return false;
  if (hits < 95) return false;
  return seconds_since(start) < 30.0;
}

// 7. comparison over {4..256} x 10 seeds: >= 90% non-failed rows, graded
//    selects a strict subset for sizes >= 8, graded converges in no more
//    generations on average, < 5 min
bool criterion_comparison_shape() {
  auto start = std::chrono::steady_clock::now();
  HarnessConfig cfg;
  std::vector<int> sizes = {4, 8, 16, 32, 64, 128, 256};
  std::vector<int> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto records = run_comparison(sizes, seeds, cfg);

  int failed = 0;
  for (const ExperimentRecord& r : records) {
    if (!r.error.empty()) ++failed;
  }
  double failed_frac = static_cast<double>(failed) /
                       static_cast<double>(records.size());
  std::printf("    (%d/%zu rows failed)\n", failed, records.size());
  if (failed_frac > 0.10) return false;

  double graded_gen_sum = 0, plain_gen_sum = 0;
  int pairs = 0;
  for (std::size_t i = 0; i + 1 < records.size(); i += 2) {
    const ExperimentRecord& graded = records[i];
    const ExperimentRecord& plain = records[i + 1];
    if (graded.fingerprint != plain.fingerprint) return false;
    if (!graded.error.empty() || !plain.error.empty()) continue;
    if (graded.total_nodes >= 8 &&
        graded.nodes_selected >= graded.total_nodes) {
      return false;
    }
    if (graded.nodes_selected > graded.total_nodes) return false;
    graded_gen_sum += graded.generations_used;
    plain_gen_sum += plain.generations_used;
    ++pairs;
  }
  if (pairs == 0) return false;
  std::printf("    (mean generations: graded %.2f vs non-graded %.2f over %d pairs)\n",
              graded_gen_sum / pairs, plain_gen_sum / pairs, pairs);
  if (graded_gen_sum / pairs > plain_gen_sum / pairs) return false;
  double elapsed = seconds_since(start);
  std::printf("    (comparison took %.1f s)\n", elapsed);
  return elapsed < 300.0;
}

// 8. two identical CLI invocations produce byte-identical CSVs
bool criterion_cli_determinism() {
  if (g_cli_path.empty()) return false;
  fs::path out1 = fs::temp_directory_path() / "qgr_accept_run1.csv";
  fs::path out2 = fs::temp_directory_path() / "qgr_accept_run2.csv";
  std::string args = " run --sizes 4,8,16,32 --seeds 1..3 --out ";
  for (const fs::path& out : {out1, out2}) {
    std::string cmd = "\"" + g_cli_path + "\"" + args + "\"" +
                      out.string() + "\" > /dev/null";
    int rc = std::system(cmd.c_str());
    int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    if (code != 0 && code != 2) return false;  // 2 = failed rows in the CSV
  }
  std::string b1 = read_bytes(out1.string());
  std::string b2 = read_bytes(out2.string());
  fs::remove(out1);
  fs::remove(out2);
  return !b1.empty() && b1 == b2;
}

// 9. topology save/load and KB record/lookup round-trips, 200 instances
bool criterion_persistence_roundtrips() {
  Rng rng(1009);
  fs::path topo_path = fs::temp_directory_path() / "qgr_accept_topo.txt";
  fs::path kb_path = fs::temp_directory_path() / "qgr_accept_store.kb";
  fs::remove(kb_path);
  bool ok = true;
  for (int i = 0; i < 200 && ok; ++i) {
    int size = rng.uniform_int(4, 20);
    int regions = rng.uniform_int(1, 3);
    Topology t = generate_topology(size, regions, rng.uniform(0.2, 1.0),
                                   static_cast<std::uint64_t>(5000 + i));
    save_topology(t, topo_path.string());
    if (!(load_topology(topo_path.string()) == t)) ok = false;

    KnowledgeEntry e;
    e.topology_fingerprint = topology_fingerprint(t);
    e.source = 0;
    e.dest = size - 1;
    e.best_path = {0, rng.uniform_int(1, size - 2), size - 1};
    e.raw_bandwidth = rng.uniform(1, 100);
    e.mean_grade = rng.uniform(0, 2);
    kb_record(e, kb_path.string());
    auto hit = kb_lookup(e.topology_fingerprint, e.source, e.dest,
                         kb_path.string());
    if (!hit || hit->best_path != e.best_path ||
        hit->raw_bandwidth != e.raw_bandwidth ||
        hit->mean_grade != e.mean_grade) {
      ok = false;
    }
  }
  fs::remove(topo_path);
  fs::remove(kb_path);
  return ok;
}

struct Criterion {
  const char* name;
  bool (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];

  const Criterion criteria[] = {
      {"criterion 1: M/M/1 mean jobs and Little consistency (1e-12)",
       criterion_mm1_correctness},
      {"criterion 2: network delay equals independent term sum (1e-12)",
       criterion_delay_oracle},
      {"criterion 3: priority chain truth table and grade endpoints",
       criterion_priority_truth_table},
      {"criterion 4: level-1 filter soundness on 100 topologies",
       criterion_level1_soundness},
      {"criterion 5: fitness normalization over 1000 populations",
       criterion_fitness_normalization},
      {"criterion 6: GA reaches the widest-path oracle on >=95/100 graphs",
       criterion_ga_vs_oracle},
      {"criterion 7: graded vs non-graded comparison shape (7 sizes x 10 seeds)",
       criterion_comparison_shape},
      {"criterion 8: CLI output is byte-identical across runs",
       criterion_cli_determinism},
      {"criterion 9: topology and knowledge-base persistence round-trips",
       criterion_persistence_roundtrips},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      std::printf("    (unexpected exception: %s)\n", e.what());
    }
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", c.name);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
