#include "qgr/ga_router.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

#include "qgr/errors.hpp"

namespace qgr {

namespace {

constexpr int kMutationAttempts = 10;

bool better_chromosome(const Chromosome& a, const Chromosome& b) {
  if (a.raw_bandwidth != b.raw_bandwidth) {
    return a.raw_bandwidth > b.raw_bandwidth;
  }
  if (a.hops() != b.hops()) return a.hops() < b.hops();
  return a.path < b.path;
}

Chromosome make_chromosome(const SurvivorGraph& graph, std::vector<int> path) {
  Chromosome c;
  c.raw_bandwidth = path_bottleneck(graph, path);
  c.path = std::move(path);
  return c;
}

/// Exhaustive simple-path DFS, stopping once `cap` paths are collected or the
/// expansion budget runs out. Returns whether the enumeration was complete.
bool enumerate_paths(const SurvivorGraph& graph, int source, int dest,
                     std::size_t cap, std::vector<std::vector<int>>& out) {
  constexpr long kExpansionBudget = 500000;
  long expansions = 0;
  std::vector<int> path{source};
  std::set<int> on_path{source};
  bool complete = true;

  std::function<bool(int)> dfs = [&](int u) -> bool {  // false = stop early
    if (u == dest) {
      out.push_back(path);
      return out.size() < cap;
    }
    auto it = graph.adjacency.find(u);
    if (it == graph.adjacency.end()) return true;
    for (const auto& [v, bw] : it->second) {
      (void)bw;
      if (on_path.count(v)) continue;
      if (++expansions > kExpansionBudget) {
        complete = false;
        return false;
      }
      path.push_back(v);
      on_path.insert(v);
      bool keep_going = dfs(v);
      on_path.erase(v);
      path.pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  if (!dfs(source)) complete = false;
  return complete;
}

/// One random simple path via randomized depth-first search with
/// backtracking; succeeds whenever dest is reachable.
std::vector<int> random_path(const SurvivorGraph& graph, int source, int dest,
                             Rng& rng) {
  std::vector<int> path{source};
  std::set<int> visited{source};
  // frontier of untried neighbors per stack level
  std::vector<std::vector<int>> options;
  auto push_options = [&](int u) {
    std::vector<int> nbrs;
    auto it = graph.adjacency.find(u);
    if (it != graph.adjacency.end()) {
      for (const auto& [v, bw] : it->second) {
        (void)bw;
        if (!visited.count(v)) nbrs.push_back(v);
      }
    }
    rng.shuffle(nbrs);
    options.push_back(std::move(nbrs));
  };
  push_options(source);
  while (!path.empty()) {
    if (path.back() == dest) return path;
    if (options.back().empty()) {
      options.pop_back();
      path.pop_back();
      continue;
    }
    int v = options.back().back();
    options.back().pop_back();
    if (visited.count(v)) continue;
    visited.insert(v);
    path.push_back(v);
    push_options(v);
  }
  return {};
}

std::vector<Chromosome> initial_population(const SurvivorGraph& graph,
                                           int source, int dest,
                                           const GaConfig& config, Rng& rng) {
  if (source == dest) throw Error("source and destination must differ");
  if (!graph.contains(source) || !graph.contains(dest)) {
    throw Error("source and destination must be surviving nodes");
  }
  std::size_t n = static_cast<std::size_t>(config.population_size);

  std::vector<std::vector<int>> paths;
  bool complete = enumerate_paths(graph, source, dest, n + 1, paths);
  if (complete && paths.empty()) throw NoPathError(source, dest);
  if (complete && paths.size() <= n) {
    std::vector<Chromosome> pop;
    pop.reserve(paths.size());
    for (auto& p : paths) pop.push_back(make_chromosome(graph, std::move(p)));
    return pop;
  }

  // More simple paths than population slots: sample distinct ones.
  std::set<std::vector<int>> distinct;
  std::vector<Chromosome> pop;
  int attempts = config.population_size * 10;
  while (pop.size() < n && attempts-- > 0) {
    std::vector<int> p = random_path(graph, source, dest, rng);
    if (p.empty()) throw NoPathError(source, dest);
    if (distinct.insert(p).second) {
      pop.push_back(make_chromosome(graph, std::move(p)));
    }
  }
  if (pop.empty()) throw NoPathError(source, dest);
  // Shortfall: top up with mutants of existing members (duplicates allowed).
  std::size_t i = 0;
  while (pop.size() < n) {
    pop.push_back(mutate_path(pop[i % pop.size()], graph, rng));
    ++i;
  }
  return pop;
}

const Chromosome& roulette(const std::vector<Chromosome>& population,
                           Rng& rng) {
  double spin = rng.uniform(0.0, 1.0);
  double cum = 0;
  for (const Chromosome& c : population) {
    cum += c.fitness;
    if (spin < cum) return c;
  }
  return population.back();
}

}  // namespace

double path_bottleneck(const SurvivorGraph& graph,
                       const std::vector<int>& path) {
  if (path.size() < 2) throw Error("path must have at least two nodes");
  std::set<int> seen(path.begin(), path.end());
  if (seen.size() != path.size()) throw Error("path repeats a node");
  double bottleneck = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    bottleneck = std::min(bottleneck, graph.link_bandwidth(path[i], path[i + 1]));
  }
  return bottleneck;
}

std::vector<Chromosome> enumerate_initial_population(
    const SurvivorGraph& graph, int source, int dest, const GaConfig& config) {
  Rng rng(config.seed);
  return initial_population(graph, source, dest, config, rng);
}

void fitness_assign(std::vector<Chromosome>& population) {
  if (population.empty()) throw Error("cannot assign fitness to an empty population");
  double total = 0;
  for (const Chromosome& c : population) total += c.raw_bandwidth;
  for (Chromosome& c : population) c.fitness = c.raw_bandwidth / total;
}

Chromosome crossover_paths(const Chromosome& parent1, const Chromosome& parent2,
                           const SurvivorGraph& graph, Rng& rng) {
  if (parent1.path.front() != parent2.path.front() ||
      parent1.path.back() != parent2.path.back()) {
    throw Error("crossover parents must share source and destination");
  }
  std::set<int> interior2(parent2.path.begin() + 1, parent2.path.end() - 1);
  std::vector<int> shared;
  for (std::size_t i = 1; i + 1 < parent1.path.size(); ++i) {
    if (interior2.count(parent1.path[i])) shared.push_back(parent1.path[i]);
  }
  if (shared.empty()) {
    return better_chromosome(parent1, parent2) ? parent1 : parent2;
  }
  int cut = shared[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<int>(shared.size()) - 1))];

  std::vector<int> spliced;
  for (int v : parent1.path) {
    spliced.push_back(v);
    if (v == cut) break;
  }
  bool copying = false;
  for (int v : parent2.path) {
    if (copying) spliced.push_back(v);
    if (v == cut) copying = true;
  }

  // Shortcut loops: on a repeat, drop everything after its first occurrence.
  std::vector<int> simple;
  std::map<int, std::size_t> pos;
  for (int v : spliced) {
    auto it = pos.find(v);
    if (it != pos.end()) {
      for (std::size_t i = it->second + 1; i < simple.size(); ++i) {
        pos.erase(simple[i]);
      }
      simple.resize(it->second + 1);
    } else {
      pos[v] = simple.size();
      simple.push_back(v);
    }
  }
  return make_chromosome(graph, std::move(simple));
}

Chromosome mutate_path(const Chromosome& parent, const SurvivorGraph& graph,
                       Rng& rng) {
  if (parent.path.size() < 3) return parent;
  int cut = rng.uniform_int(1, static_cast<int>(parent.path.size()) - 2);
  std::vector<int> prefix(parent.path.begin(), parent.path.begin() + cut + 1);
  int dest = parent.path.back();
  std::size_t max_steps = graph.kept_nodes.size();

  for (int attempt = 0; attempt < kMutationAttempts; ++attempt) {
    std::vector<int> path = prefix;
    std::set<int> visited(prefix.begin(), prefix.end());
    bool done = false;
    for (std::size_t step = 0; step < max_steps; ++step) {
      if (path.back() == dest) {
        done = true;
        break;
      }
      auto it = graph.adjacency.find(path.back());
      std::vector<int> nbrs;
      if (it != graph.adjacency.end()) {
        for (const auto& [v, bw] : it->second) {
          (void)bw;
          if (!visited.count(v)) nbrs.push_back(v);
        }
      }
      if (nbrs.empty()) break;
      int v = nbrs[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<int>(nbrs.size()) - 1))];
      visited.insert(v);
      path.push_back(v);
    }
    if (done || path.back() == dest) {
      return make_chromosome(graph, std::move(path));
    }
  }
  return parent;
}

GaResult evolve(const SurvivorGraph& graph, int source, int dest,
                const GaConfig& config, const PopulationObserver& observer) {
  if (config.population_size < 1) throw Error("population size must be >= 1");
  if (config.generations < 1) throw Error("generation count must be >= 1");
  if (std::abs(config.crossover_rate + config.mutation_rate - 1.0) > 1e-9) {
    throw Error("crossover and mutation rates must sum to 1");
  }
  if (!(config.acceptance_threshold > 0) || config.acceptance_threshold > 1) {
    throw Error("acceptance threshold must lie in (0,1]");
  }

  Rng rng(config.seed);
  std::vector<Chromosome> pop =
      initial_population(graph, source, dest, config, rng);
  fitness_assign(pop);

  GaResult result;
  result.best_path =
      *std::min_element(pop.begin(), pop.end(), better_chromosome);
  std::size_t n = static_cast<std::size_t>(config.population_size);

  for (int gen = 1; gen <= config.generations; ++gen) {
    const Chromosome elite =
        *std::min_element(pop.begin(), pop.end(), better_chromosome);

    std::vector<Chromosome> next{elite};
    std::set<std::vector<int>> carried{elite.path};
    // Chromosomes near the best (bandwidth relative to it above the
    // acceptance threshold) are carried forward unchanged.
    for (const Chromosome& c : pop) {
      if (next.size() >= n) break;
      if (c.raw_bandwidth / elite.raw_bandwidth > config.acceptance_threshold &&
          carried.insert(c.path).second) {
        next.push_back(c);
      }
    }
    while (next.size() < n) {
      if (rng.bernoulli(config.crossover_rate)) {
        const Chromosome& p1 = roulette(pop, rng);
        const Chromosome& p2 = roulette(pop, rng);
        next.push_back(crossover_paths(p1, p2, graph, rng));
      } else {
        next.push_back(mutate_path(roulette(pop, rng), graph, rng));
      }
    }
    fitness_assign(next);
    pop = std::move(next);

    const Chromosome& gen_best =
        *std::min_element(pop.begin(), pop.end(), better_chromosome);
    if (better_chromosome(gen_best, result.best_path)) {
      result.best_path = gen_best;
    }

    GenerationStats stats;
    stats.generation = gen;
    stats.best_bandwidth = gen_best.raw_bandwidth;
    std::set<std::vector<int>> distinct;
    double fitness_sum = 0;
    for (const Chromosome& c : pop) {
      distinct.insert(c.path);
      fitness_sum += c.fitness;
      stats.best_fitness = std::max(stats.best_fitness, c.fitness);
    }
    stats.mean_fitness = fitness_sum / static_cast<double>(pop.size());
    stats.distinct_paths = static_cast<int>(distinct.size());
    result.history.push_back(stats);
    result.generations_used = gen;
    if (observer) observer(gen, pop);

    if (stats.distinct_paths == 1) {
      result.converged = true;
      break;
    }
  }
  result.best_path.fitness = 1.0;  // bandwidth normalized to the best found
  return result;
}

Chromosome widest_path_oracle(const SurvivorGraph& graph, int source,
                              int dest) {
  if (source == dest) throw Error("source and destination must differ");
  if (!graph.contains(source) || !graph.contains(dest)) {
    throw NoPathError(source, dest);
  }

  struct Label {
    double bandwidth = -1;
    int hops = std::numeric_limits<int>::max();
    int parent = -1;
  };
  std::map<int, Label> labels;
  labels[source] = {std::numeric_limits<double>::infinity(), 0, -1};

  // max bandwidth, then min hops, then min node id
  using Item = std::tuple<double, int, int>;  // (-bw, hops, node)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({-labels[source].bandwidth, 0, source});

  while (!pq.empty()) {
    auto [neg_bw, hops, u] = pq.top();
    pq.pop();
    const Label& lu = labels[u];
    if (-neg_bw != lu.bandwidth || hops != lu.hops) continue;  // stale
    auto it = graph.adjacency.find(u);
    if (it == graph.adjacency.end()) continue;
    for (const auto& [v, bw] : it->second) {
      double nb = std::min(lu.bandwidth, bw);
      int nh = lu.hops + 1;
      Label& lv = labels[v];
      bool better = nb > lv.bandwidth ||
                    (nb == lv.bandwidth && nh < lv.hops) ||
                    (nb == lv.bandwidth && nh == lv.hops && u < lv.parent);
      if (better) {
        lv = {nb, nh, u};
        pq.push({-nb, nh, v});
      }
    }
  }

  if (labels.find(dest) == labels.end() || labels[dest].bandwidth < 0) {
    throw NoPathError(source, dest);
  }
  std::vector<int> path;
  for (int v = dest; v != -1; v = labels[v].parent) path.push_back(v);
  std::reverse(path.begin(), path.end());
  Chromosome c;
  c.path = std::move(path);
  c.raw_bandwidth = labels[dest].bandwidth;
  c.fitness = 1.0;
  return c;
}

}  // namespace qgr
