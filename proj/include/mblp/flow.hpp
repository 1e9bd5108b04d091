#pragma once

#include <string>
#include <vector>

#include "mblp/model.hpp"

namespace mblp {

struct FlowArc {
  int from = 0;
  int to = 0;
  int lower = 0;
  int upper = 0;
  double cost = 0.0;

  friend bool operator==(const FlowArc&, const FlowArc&) = default;
};

/// Three-layer DAG for the per-row worst-case deviation problem:
/// source -> one node per coefficient slot -> one node per band -> sink.
/// Node ids: source 0, slot j at 1+j, band (indexed from the lowest band)
/// at 1+num_slots+idx, sink last. Arcs are stored in the fixed order
/// A1 (by slot), A2 (by slot, then band), A3 (by band); ties in the flow
/// computation are broken by this order, which makes results reproducible.
struct FlowNetwork {
  int num_slots = 0;
  int num_bands = 0;
  int min_band = 0;
  std::vector<FlowArc> arcs;
  int required_flow = 0;

  int num_nodes() const { return num_slots + num_bands + 2; }
  int source() const { return 0; }
  int sink() const { return num_nodes() - 1; }
  int slot_node(int j) const { return 1 + j; }
  int band_node(int band) const { return 1 + num_slots + (band - min_band); }
};

struct MinCostFlowResult {
  bool feasible = false;
  std::string infeasibility;  // names the cut that blocks a feasible flow
  std::vector<int> flow;      // aligned with FlowNetwork::arcs
  double cost = 0.0;
};

/// Integral min-cost flow of value `required_flow`. Lower bounds are
/// removed by the usual imbalance transformation; negative arc costs are
/// absorbed into initial node potentials computed by one topological-order
/// pass, after which Dijkstra on reduced costs drives successive shortest
/// path augmentations.
MinCostFlowResult min_cost_flow(const FlowNetwork& net);

}  // namespace mblp
