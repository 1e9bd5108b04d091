#include "mblp/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace mblp {

namespace {

std::string node_label(const FlowNetwork& net, int v) {
  if (v == net.source()) return "s";
  if (v == net.sink()) return "t";
  if (v <= net.num_slots) return fmt::format("v{}", v - 1);
  return fmt::format("w{}", v - 1 - net.num_slots + net.min_band);
}

}  // namespace

MinCostFlowResult min_cost_flow(const FlowNetwork& net) {
  MinCostFlowResult res;
  const int V = net.num_nodes();
  const int E = static_cast<int>(net.arcs.size());

  for (int e = 0; e < E; ++e) {
    const FlowArc& a = net.arcs[e];
    if (a.from < 0 || a.from >= V || a.to < 0 || a.to >= V || a.from >= a.to) {
      res.infeasibility = fmt::format("arc {} is not forward in node order", e);
      return res;
    }
    if (a.lower < 0 || a.lower > a.upper) {
      res.infeasibility = fmt::format("arc {} has bounds l={} > u={}", e, a.lower, a.upper);
      return res;
    }
  }

  // Start from f = lower; the leftover imbalance per node must be routed.
  std::vector<int> f(E);
  std::vector<long> imbalance(V, 0);  // positive: node must push more net outflow
  imbalance[net.source()] += net.required_flow;
  imbalance[net.sink()] -= net.required_flow;
  for (int e = 0; e < E; ++e) {
    f[e] = net.arcs[e].lower;
    imbalance[net.arcs[e].from] -= net.arcs[e].lower;
    imbalance[net.arcs[e].to] += net.arcs[e].lower;
  }

  std::vector<std::vector<std::pair<int, bool>>> adj(V);  // (arc, forward?)
  for (int e = 0; e < E; ++e) {
    adj[net.arcs[e].from].emplace_back(e, true);
    adj[net.arcs[e].to].emplace_back(e, false);
  }

  // Node ids are already topological; one sweep absorbs the negative costs.
  std::vector<double> pi(V, 0.0);
  for (int v = 0; v < V; ++v)
    for (const auto& [e, fwd] : adj[v]) {
      if (!fwd) continue;
      const FlowArc& a = net.arcs[e];
      if (a.upper - f[e] > 0) pi[a.to] = std::min(pi[a.to], pi[v] + a.cost);
    }

  const double kUnreached = std::numeric_limits<double>::infinity();
  std::vector<double> dist(V);
  std::vector<int> parent_arc(V);
  std::vector<char> parent_fwd(V), done(V);

  auto remaining_excess = [&]() {
    long s = 0;
    for (int v = 0; v < V; ++v)
      if (imbalance[v] > 0) s += imbalance[v];
    return s;
  };

  while (true) {
    int src = -1;
    for (int v = 0; v < V; ++v)
      if (imbalance[v] > 0) {
        src = v;
        break;
      }
    if (src < 0) break;

    // Dijkstra over reduced costs; O(V^2) selection keeps ties deterministic.
    std::fill(dist.begin(), dist.end(), kUnreached);
    std::fill(done.begin(), done.end(), 0);
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    dist[src] = 0.0;
    for (int step = 0; step < V; ++step) {
      int u = -1;
      for (int v = 0; v < V; ++v)
        if (!done[v] && dist[v] < kUnreached && (u < 0 || dist[v] < dist[u])) u = v;
      if (u < 0) break;
      done[u] = 1;
      for (const auto& [e, fwd] : adj[u]) {
        const FlowArc& a = net.arcs[e];
        const int cap = fwd ? a.upper - f[e] : f[e] - a.lower;
        if (cap <= 0) continue;
        const int to = fwd ? a.to : a.from;
        const double rc = std::max(0.0, (fwd ? a.cost : -a.cost) + pi[u] - pi[to]);
        if (dist[u] + rc < dist[to]) {
          dist[to] = dist[u] + rc;
          parent_arc[to] = e;
          parent_fwd[to] = fwd;
        }
      }
    }

    int target = -1;
    for (int v = 0; v < V; ++v)
      if (imbalance[v] < 0 && dist[v] < kUnreached && (target < 0 || dist[v] < dist[target]))
        target = v;
    if (target < 0) {
      std::string reach, deficits;
      for (int v = 0; v < V; ++v) {
        if (dist[v] < kUnreached) reach += (reach.empty() ? "" : ",") + node_label(net, v);
        if (imbalance[v] < 0) deficits += (deficits.empty() ? "" : ",") + node_label(net, v);
      }
      res.infeasibility = fmt::format(
          "no feasible flow of value {}: saturated cut around {{{}}} separates the source from "
          "deficit nodes {{{}}} (short by {} units)",
          net.required_flow, reach, deficits, remaining_excess());
      return res;
    }

    long amount = std::min(imbalance[src], -imbalance[target]);
    for (int v = target; v != src;) {
      const int e = parent_arc[v];
      const FlowArc& a = net.arcs[e];
      amount = std::min<long>(amount, parent_fwd[v] ? a.upper - f[e] : f[e] - a.lower);
      v = parent_fwd[v] ? a.from : a.to;
    }
    for (int v = target; v != src;) {
      const int e = parent_arc[v];
      f[e] += parent_fwd[v] ? amount : -amount;
      v = parent_fwd[v] ? net.arcs[e].from : net.arcs[e].to;
    }
    imbalance[src] -= amount;
    imbalance[target] += amount;

    const double dmax = dist[target];
    for (int v = 0; v < V; ++v) pi[v] += std::min(dist[v], dmax);
  }

  res.feasible = true;
  res.flow = std::move(f);
  res.cost = 0.0;
  for (int e = 0; e < E; ++e) res.cost += net.arcs[e].cost * res.flow[e];
  return res;
}

}  // namespace mblp
