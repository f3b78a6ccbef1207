#include "qgr/queueing.hpp"

#include <algorithm>
#include <string>

#include "qgr/errors.hpp"

namespace qgr {

QueueState mm1_state(double lambda, double mu, double capacity) {
  if (lambda < 0) throw Error("arrival rate must be >= 0");
  if (!(mu > 0) || !(capacity > 0)) {
    throw Error("service rate and capacity must be > 0");
  }
  double mu_c = mu * capacity;
  if (lambda >= mu_c) throw UnstableQueueError(lambda, mu_c);
  QueueState s;
  s.rho = lambda / mu_c;
  s.mean_jobs = s.rho / (1.0 - s.rho);
  s.mean_delay_s = 1.0 / (mu_c - lambda);
  return s;
}

DelayBreakdown network_delay(const Topology& topology,
                             const std::vector<double>& flows) {
  if (flows.size() != topology.edges.size()) {
    throw Error("flows list must have one entry per directed edge");
  }
  DelayBreakdown out;
  out.gamma_total = topology.gamma_total();
  if (!(out.gamma_total > 0)) {
    throw Error("total external traffic gamma must be > 0");
  }
  out.per_channel.reserve(flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const Edge& e = topology.edges[i];
    const NodeAttributes& sink = topology.node(e.to).attrs;
    ChannelTerm t;
    t.channel = static_cast<int>(i);
    t.lambda = flows[i];
    t.mu_c = sink.service_rate_mu * sink.capacity;
    if (t.lambda >= t.mu_c) {
      throw UnstableQueueError(t.lambda, t.mu_c,
                               "channel " + std::to_string(i) + " (" +
                                   std::to_string(e.from) + "->" +
                                   std::to_string(e.to) + ")");
    }
    t.term = (t.lambda / out.gamma_total) * (1.0 / (t.mu_c - t.lambda));
    out.total_delay_s += t.term;
    out.per_channel.push_back(t);
  }
  return out;
}

double congestion_score(const NodeAttributes& attrs) {
  if (!(attrs.bandwidth_mbps > 0)) throw Error("bandwidth must be > 0");
  double score = attrs.current_traffic / attrs.bandwidth_mbps;
  return std::clamp(score, 0.0, 1.0);
}

}  // namespace qgr
