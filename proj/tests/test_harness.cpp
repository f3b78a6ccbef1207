#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgr/errors.hpp"
#include "qgr/harness.hpp"

using namespace qgr;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config file round-trips known keys") {
  std::istringstream in(
      "# GA settings\n"
      "population_size = 30\n"
      "generations = 40\n"
      "crossover_rate = 0.85\n"
      "mutation_rate = 0.15\n"
      "acceptance_threshold = 0.8\n"
      "seed = 99\n"
      "nl_threshold = 0.2\n"
      "tc_threshold = 0.6\n"
      "ra_threshold = 0.4\n"
      "delay_threshold = 0.1\n"
      "edge_density = 0.5\n"
      "region_count = 3\n"
      "gamma_max = 2\n"
      "constant_D = 7\n"
      "channel_cost_d = 1.5\n");
  HarnessConfig cfg = parse_config(in);
  CHECK(cfg.ga.population_size == 30);
  CHECK(cfg.ga.generations == 40);
  CHECK(cfg.ga.crossover_rate == 0.85);
  CHECK(cfg.ga.acceptance_threshold == 0.8);
  CHECK(cfg.ga.seed == 99);
  CHECK(cfg.grading.nl_threshold == 0.2);
  CHECK(cfg.grading.delay_threshold_s == 0.1);
  CHECK(cfg.edge_density == 0.5);
  CHECK(cfg.region_count == 3);
  CHECK(cfg.gen.gamma_max == 2.0);
  CHECK(cfg.constant_D == 7.0);  // accepted but unused
}

TEST_CASE("unknown config keys are rejected with a line number") {
  std::istringstream in("population_size = 30\ntypo_key = 1\n");
  try {
    parse_config(in);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("default endpoints span first and last regions") {
  Topology t = generate_topology(16, 4, 0.3, 7);
  auto [src, dst] = default_endpoints(t);
  CHECK(src == 0);
  CHECK(dst == 12);  // lowest id of the last 4-node region
  Topology single = generate_topology(6, 1, 0.8, 7);
  auto [s2, d2] = default_endpoints(single);
  CHECK(s2 == 0);
  CHECK(d2 == 5);
}

TEST_CASE("comparison on a dense 4-node topology") {
  HarnessConfig cfg;
  auto records = run_comparison({4}, {1}, cfg);
  REQUIRE(records.size() == 2);
  const ExperimentRecord& graded = records[0];
  const ExperimentRecord& plain = records[1];
  CHECK(graded.mode == "graded");
  CHECK(plain.mode == "nongraded");
  CHECK(graded.error.empty());
  CHECK(plain.error.empty());
  CHECK(graded.nodes_selected <= 4);
  CHECK(graded.fingerprint == plain.fingerprint);
  CHECK(graded.route_length >= 1);
}

TEST_CASE("graded and non-graded rows share the topology fingerprint") {
  HarnessConfig cfg;
  auto records = run_comparison({8, 16}, {1, 2}, cfg);
  REQUIRE(records.size() == 8);
  for (std::size_t i = 0; i < records.size(); i += 2) {
    CHECK(records[i].mode == "graded");
    CHECK(records[i + 1].mode == "nongraded");
    CHECK(records[i].fingerprint == records[i + 1].fingerprint);
    CHECK(records[i].seed == records[i + 1].seed);
  }
}

TEST_CASE("comparison rejects undersized topologies") {
  CHECK_THROWS_AS(run_comparison({2}, {1}, HarnessConfig{}), Error);
}

TEST_CASE("report emission and reparse") {
  HarnessConfig cfg;
  auto records = run_comparison({4, 8}, {1}, cfg);
  std::string path = temp_path("qgr_report_test.csv");
  emit_report(records, path);
  auto back = parse_report(path);
  REQUIRE(back.size() == records.size());
  for (const ExperimentRecord& r : back) {
    CHECK((r.mode == "graded" || r.mode == "nongraded"));
  }
  // rows sorted by (total_nodes, mode)
  for (std::size_t i = 1; i < back.size(); ++i) {
    bool ordered = back[i - 1].total_nodes < back[i].total_nodes ||
                   (back[i - 1].total_nodes == back[i].total_nodes &&
                    back[i - 1].mode <= back[i].mode);
    CHECK(ordered);
  }
  // reparse preserves every numeric field exactly
  std::string again = temp_path("qgr_report_test2.csv");
  emit_report(back, again);
  CHECK(file_bytes(path) == file_bytes(again));
  std::filesystem::remove(path);
  std::filesystem::remove(again);
}

TEST_CASE("empty record list is rejected") {
  CHECK_THROWS_AS(emit_report({}, temp_path("unused.csv")), Error);
}

TEST_CASE("report is byte-identical across repeated runs") {
  HarnessConfig cfg;
  std::string p1 = temp_path("qgr_det1.csv");
  std::string p2 = temp_path("qgr_det2.csv");
  emit_report(run_comparison({8}, {1, 2, 3}, cfg), p1);
  emit_report(run_comparison({8}, {1, 2, 3}, cfg), p2);
  CHECK(file_bytes(p1) == file_bytes(p2));
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("grade csv lists one row per node") {
  Topology t = generate_topology(8, 2, 0.5, 3);
  std::string path = temp_path("qgr_grades.csv");
  write_grade_csv(t, GradingConfig{}, path);
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  CHECK(line == "node,region,priority,grade,reasons");
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 8);
  std::filesystem::remove(path);
}
