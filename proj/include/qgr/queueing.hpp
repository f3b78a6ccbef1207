#pragma once

#include <vector>

#include "qgr/topology.hpp"

namespace qgr {

/// M/M/1 steady state of a single node channel.
struct QueueState {
  double rho = 0;           // traffic intensity lambda / (mu * C), < 1
  double mean_jobs = 0;     // rho / (1 - rho)
  double mean_delay_s = 0;  // 1 / (mu * C - lambda)
};

struct ChannelTerm {
  int channel = 0;   // index into Topology::edges
  double lambda = 0; // flow on this channel
  double mu_c = 0;   // effective service rate mu * C
  double term = 0;   // (lambda / gamma) * 1 / (mu_c - lambda)
};

struct DelayBreakdown {
  double total_delay_s = 0;
  std::vector<ChannelTerm> per_channel;
  double gamma_total = 0;
};

/// Throws UnstableQueueError when lambda >= mu * capacity.
QueueState mm1_state(double lambda, double mu, double capacity);

/// Mean network delay as the traffic-weighted sum over directed channels.
/// flows[i] is the message rate on edge i (sum of path flows crossing it);
/// the channel's effective service rate is taken from its receiving node.
DelayBreakdown network_delay(const Topology& topology,
                             const std::vector<double>& flows);

/// current_traffic / bandwidth, clamped to [0,1]; 1 means saturated.
double congestion_score(const NodeAttributes& attrs);

}  // namespace qgr
