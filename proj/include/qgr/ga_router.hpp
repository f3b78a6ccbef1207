#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qgr/grading.hpp"
#include "qgr/rng.hpp"

namespace qgr {

/// A loop-free source->destination path with its bandwidth measure.
struct Chromosome {
  std::vector<int> path;       // simple; consecutive pairs are graph edges
  double raw_bandwidth = 0;    // bottleneck link bandwidth along the path
  double fitness = 0;          // population-relative share, [0,1]

  int hops() const { return static_cast<int>(path.size()) - 1; }
};

struct GaConfig {
  int population_size = 20;
  int generations = 50;
  double crossover_rate = 0.9;
  double mutation_rate = 0.1;        // crossover_rate + mutation_rate == 1
  double acceptance_threshold = 0.9; // on bandwidth normalized to the best
  std::uint64_t seed = 0;
};

struct GenerationStats {
  int generation = 0;
  double best_fitness = 0;
  double mean_fitness = 0;
  int distinct_paths = 0;
  double best_bandwidth = 0;
};

struct GaResult {
  Chromosome best_path;      // maximum raw_bandwidth ever observed
  int generations_used = 0;
  bool converged = false;    // population collapsed before K was exhausted
  std::vector<GenerationStats> history;
};

using PopulationObserver =
    std::function<void(int generation, const std::vector<Chromosome>&)>;

/// Bottleneck bandwidth of a path; throws if any hop is not a surviving edge
/// or a node repeats.
double path_bottleneck(const SurvivorGraph& graph,
                       const std::vector<int>& path);

/// All simple paths when there are at most `population_size` of them,
/// otherwise that many distinct paths sampled by seeded randomized
/// depth-first walks. Throws NoPathError when dest is unreachable.
std::vector<Chromosome> enumerate_initial_population(
    const SurvivorGraph& graph, int source, int dest, const GaConfig& config);

/// Eq-style population-relative fitness: f(i) = B(i) / sum_j B(j).
void fitness_assign(std::vector<Chromosome>& population);

/// Splice the parents at a uniformly chosen shared interior node, then
/// shortcut any loop. Parents with disjoint interiors yield a copy of the
/// fitter parent.
Chromosome crossover_paths(const Chromosome& parent1, const Chromosome& parent2,
                           const SurvivorGraph& graph, Rng& rng);

/// Cut at a random interior node and regrow the suffix to the destination by
/// a random walk that avoids the kept prefix. Bounded attempts; on failure
/// the parent is returned unchanged.
Chromosome mutate_path(const Chromosome& parent, const SurvivorGraph& graph,
                       Rng& rng);

/// Generational GA with one elite, roulette parent selection and
/// crossover/mutation reproduction. Fully determined by its arguments.
GaResult evolve(const SurvivorGraph& graph, int source, int dest,
                const GaConfig& config,
                const PopulationObserver& observer = {});

/// Exact maximum-bottleneck simple path (maximin best-first search). Ties
/// break toward fewer hops, then smaller predecessor ids.
Chromosome widest_path_oracle(const SurvivorGraph& graph, int source,
                              int dest);

}  // namespace qgr
