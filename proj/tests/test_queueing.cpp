#include <doctest.h>

#include <cmath>

#include "qgr/errors.hpp"
#include "qgr/queueing.hpp"
#include "qgr/rng.hpp"
#include "qgr/topology.hpp"

using namespace qgr;

namespace {

Topology two_node_topology(double mu, double capacity, double gamma) {
  Topology t;
  NodeAttributes a;
  a.bandwidth_mbps = 50;
  a.network_lifetime = 1;
  a.resource_allocated = 1;
  a.service_rate_mu = mu;
  a.capacity = capacity;
  t.nodes = {Node{0, 0, a}, Node{1, 0, a}};
  t.edges = {Edge{0, 1, 50}};
  t.external_traffic[{0, 1}] = gamma;
  return t;
}

}  // namespace

TEST_CASE("mm1_state empty system") {
  QueueState s = mm1_state(0, 1, 1);
  CHECK(s.rho == 0.0);
  CHECK(s.mean_jobs == 0.0);
  CHECK(s.mean_delay_s == 1.0);
}

TEST_CASE("mm1_state at rho one half") {
  QueueState s = mm1_state(0.5, 1, 1);
  CHECK(s.rho == doctest::Approx(0.5));
  CHECK(s.mean_jobs == doctest::Approx(1.0));
}

TEST_CASE("mm1_state hand-evaluated point") {
  QueueState s = mm1_state(60, 100, 1);
  CHECK(s.mean_jobs == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(s.mean_delay_s == doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("mm1_state rejects unstable queue") {
  CHECK_THROWS_AS(mm1_state(2, 1, 1), UnstableQueueError);
  CHECK_THROWS_AS(mm1_state(1, 1, 1), UnstableQueueError);
  try {
    mm1_state(5, 2, 2);
  } catch (const UnstableQueueError& e) {
    CHECK(e.lambda == 5.0);
    CHECK(e.mu_c == 4.0);
  }
}

TEST_CASE("mm1 delay strictly increases in lambda") {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    double mu = rng.uniform(1, 100);
    double c = rng.uniform(0.5, 10);
    double l1 = rng.uniform(0, 0.9 * mu * c);
    double l2 = l1 + rng.uniform(1e-6, 0.05 * mu * c);
    CHECK(mm1_state(l2, mu, c).mean_delay_s > mm1_state(l1, mu, c).mean_delay_s);
  }
}

TEST_CASE("little consistency E(n) = lambda * delay") {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    double mu = rng.uniform(1, 200);
    double c = rng.uniform(0.1, 10);
    double lambda = rng.uniform(0, 0.99 * mu * c);
    QueueState s = mm1_state(lambda, mu, c);
    CHECK(s.mean_jobs ==
          doctest::Approx(lambda * s.mean_delay_s).epsilon(1e-12));
  }
}

TEST_CASE("network_delay single channel") {
  Topology t = two_node_topology(2, 1, 1);
  DelayBreakdown d = network_delay(t, {1.0});
  CHECK(d.total_delay_s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.gamma_total == doctest::Approx(1.0));
  REQUIRE(d.per_channel.size() == 1);
  CHECK(d.per_channel[0].mu_c == doctest::Approx(2.0));
}

TEST_CASE("network_delay two identical channels") {
  Topology t = two_node_topology(3, 1, 1);
  t.edges.push_back(Edge{1, 0, 50});
  t.external_traffic[{1, 0}] = 1;  // gamma total 2
  DelayBreakdown d = network_delay(t, {1.0, 1.0});
  CHECK(d.total_delay_s == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("network_delay rejects unstable channel") {
  Topology t = two_node_topology(2, 1, 1);
  CHECK_THROWS_AS(network_delay(t, {2.0}), UnstableQueueError);
}

TEST_CASE("network_delay rejects zero gamma") {
  Topology t = two_node_topology(2, 1, 1);
  t.external_traffic.clear();
  CHECK_THROWS_AS(network_delay(t, {1.0}), Error);
}

TEST_CASE("network_delay additivity: dropping a channel removes its term") {
  Rng rng(4);
  Topology t = two_node_topology(100, 2, 3);
  t.edges.push_back(Edge{1, 0, 50});
  std::vector<double> flows = {rng.uniform(0, 100), rng.uniform(0, 100)};
  DelayBreakdown both = network_delay(t, flows);
  Topology one = t;
  one.edges.pop_back();
  DelayBreakdown first = network_delay(one, {flows[0]});
  CHECK(both.total_delay_s - both.per_channel[1].term ==
        doctest::Approx(first.total_delay_s).epsilon(1e-12));
}

TEST_CASE("congestion_score") {
  NodeAttributes a;
  a.bandwidth_mbps = 100;
  a.current_traffic = 0;
  CHECK(congestion_score(a) == 0.0);
  a.current_traffic = 100;
  CHECK(congestion_score(a) == 1.0);
  a.current_traffic = 30;
  CHECK(congestion_score(a) == doctest::Approx(0.3));
  a.current_traffic = 250;  // over-saturated clamps
  CHECK(congestion_score(a) == 1.0);
}
