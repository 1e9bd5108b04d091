#include "mblp/separation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace mblp {

FlowNetwork build_flow_instance(int row, const LinearProgram& lp,
                                const MultiBandUncertaintySet& u, const Eigen::VectorXd& x) {
  const int n = lp.num_vars();
  if (x.size() != n) throw std::invalid_argument("build_flow_instance: x has wrong dimension");
  for (int j = 0; j < n; ++j)
    if (x(j) < -1e-9)
      throw std::invalid_argument(
          fmt::format("build_flow_instance: x({}) = {} is negative; costs assume x >= 0", j, x(j)));

  const BandProfile& prof = u.profile_for(row);
  FlowNetwork net;
  net.num_slots = n;
  net.num_bands = prof.num_bands();
  net.min_band = prof.min_band();
  net.required_flow = n;

  for (int j = 0; j < n; ++j) net.arcs.push_back({net.source(), net.slot_node(j), 0, 1, 0.0});
  for (int j = 0; j < n; ++j) {
    auto it = u.deviations.find(CoeffKey{row, j});
    const double xj = std::max(0.0, x(j));
    if (it == u.deviations.end()) {
      net.arcs.push_back({net.slot_node(j), net.band_node(0), 0, 1, 0.0});
    } else {
      for (int k = prof.min_band(); k <= prof.max_band(); ++k)
        net.arcs.push_back(
            {net.slot_node(j), net.band_node(k), 0, 1, -it->second(prof.index(k)) * xj});
    }
  }
  for (int k = prof.min_band(); k <= prof.max_band(); ++k)
    net.arcs.push_back({net.band_node(k), net.sink(), prof.lower(k), prof.upper(k), 0.0});
  return net;
}

std::vector<int> decode_assignment(const FlowNetwork& net, const std::vector<int>& flow) {
  std::vector<int> assignment(net.num_slots, 0);
  for (size_t e = 0; e < net.arcs.size(); ++e) {
    const FlowArc& a = net.arcs[e];
    if (flow[e] == 1 && a.from >= 1 && a.from <= net.num_slots && a.to > net.num_slots &&
        a.to < net.sink())
      assignment[a.from - 1] = a.to - 1 - net.num_slots + net.min_band;
  }
  return assignment;
}

RobustnessCertificate separate_row(int row, const LinearProgram& lp,
                                   const MultiBandUncertaintySet& u, const Eigen::VectorXd& x,
                                   double tol) {
  const FlowNetwork net = build_flow_instance(row, lp, u, x);
  const MinCostFlowResult flow = min_cost_flow(net);
  if (!flow.feasible)
    throw std::runtime_error(fmt::format("row {}: {}", row, flow.infeasibility));

  RobustnessCertificate cert;
  cert.row = row;
  cert.worst_case_deviation = -flow.cost;
  cert.assignment = decode_assignment(net, flow.flow);
  cert.lhs_nominal = lp.row_value(row, x);
  const double b = lp.rhs(row);
  const double excess = cert.lhs_nominal + cert.worst_case_deviation - b;
  cert.violated = excess > tol * std::max(1.0, std::abs(b));
  cert.violation_amount = std::max(0.0, excess);
  return cert;
}

std::vector<RobustnessCertificate> check_robust(const LinearProgram& lp,
                                                const MultiBandUncertaintySet& u,
                                                const Eigen::VectorXd& x, double tol) {
  std::vector<RobustnessCertificate> certs;
  certs.reserve(lp.num_rows());
  for (int i = 0; i < lp.num_rows(); ++i) certs.push_back(separate_row(i, lp, u, x, tol));
  return certs;
}

CutRow emit_cut(const RobustnessCertificate& cert, const LinearProgram& lp,
                const MultiBandUncertaintySet& u) {
  if (!cert.violated)
    throw std::invalid_argument("emit_cut: certificate does not witness a violation");

  std::map<int, double> coeff;
  for (const RowEntry& e : lp.rows[cert.row]) coeff[e.col] += e.value;
  const BandProfile& prof = u.profile_for(cert.row);
  for (auto it = u.deviations.lower_bound(CoeffKey{cert.row, 0});
       it != u.deviations.end() && it->first.row == cert.row; ++it)
    coeff[it->first.col] += it->second(prof.index(cert.assignment[it->first.col]));

  CutRow cut;
  cut.rhs = lp.rhs(cert.row);
  for (const auto& [col, v] : coeff)
    if (v != 0.0) cut.coefficients.push_back({col, v});
  return cut;
}

DevResult dev_bruteforce(int row, const LinearProgram& lp, const MultiBandUncertaintySet& u,
                         const Eigen::VectorXd& x) {
  const int n = lp.num_vars();
  const BandProfile& prof = u.profile_for(row);
  const int nb = prof.num_bands();
  if (n > 12 || nb > 6)
    throw std::invalid_argument(
        fmt::format("dev_bruteforce: size guard exceeded (n={} bands={})", n, nb));
  if (x.size() != n) throw std::invalid_argument("dev_bruteforce: x has wrong dimension");

  const auto uncertain = u.row_uncertain(row);
  const int nu = static_cast<int>(uncertain.size());

  // Certain slots always sit in band 0: it costs nothing and only helps l_0.
  std::vector<int> counts(nb, 0);
  counts[prof.index(0)] = n - nu;

  // Per uncertain slot: deviation value of each band scaled by x_j.
  std::vector<std::vector<double>> gain(nu, std::vector<double>(nb, 0.0));
  std::vector<double> suffix_best(nu + 1, 0.0);
  for (int t = 0; t < nu; ++t)
    for (int k = 0; k < nb; ++k) gain[t][k] = (*uncertain[t].second)(k) * std::max(0.0, x(uncertain[t].first));
  for (int t = nu - 1; t >= 0; --t)
    suffix_best[t] = suffix_best[t + 1] + std::max(0.0, *std::max_element(gain[t].begin(), gain[t].end()));

  double best = -kInf;
  std::vector<int> best_choice;
  std::vector<int> choice(nu, -1);  // band index, or -1 for unassigned

  auto feasible_completion = [&](int depth) {
    long deficit_all = 0, deficit_nonzero = 0;
    for (int k = 0; k < nb; ++k) {
      const long d = std::max(0, prof.lower_counts(k) - counts[k]);
      deficit_all += d;
      if (k != prof.index(0)) deficit_nonzero += d;
    }
    // Only uncertain slots can land in nonzero bands, and only the remaining
    // slots can cover any deficit at all.
    return deficit_nonzero <= nu - depth && deficit_all <= nu - depth;
  };

  auto rec = [&](auto&& self, int depth, double acc) -> void {
    if (best > -kInf && acc + suffix_best[depth] <= best) return;
    if (!feasible_completion(depth)) return;
    if (depth == nu) {
      for (int k = 0; k < nb; ++k)
        if (counts[k] < prof.lower_counts(k)) return;
      if (acc > best) {
        best = acc;
        best_choice = choice;
      }
      return;
    }
    for (int k = 0; k < nb; ++k) {
      if (counts[k] >= prof.upper_counts(k)) continue;
      counts[k] += 1;
      choice[depth] = k;
      self(self, depth + 1, acc + gain[depth][k]);
      counts[k] -= 1;
    }
    choice[depth] = -1;
    self(self, depth + 1, acc);
  };
  rec(rec, 0, 0.0);

  if (best == -kInf)
    throw std::runtime_error(
        fmt::format("dev_bruteforce: band bounds admit no realization for row {}", row));

  DevResult res;
  res.dev = best;
  res.assignment.assign(n, 0);  // unassigned and certain slots normalize to band 0
  for (int t = 0; t < nu; ++t)
    if (best_choice[t] >= 0) res.assignment[uncertain[t].first] = best_choice[t] - prof.negative_bands;
  return res;
}

BsSeparationResult bs_separation(int row, const LinearProgram& lp, const BsRowUncertainty& bs,
                                 const Eigen::VectorXd& x) {
  (void)row;
  const int n = lp.num_vars();
  if (bs.gamma < 0 || bs.gamma > n)
    throw std::invalid_argument(fmt::format("bs_separation: gamma {} outside [0, {}]", bs.gamma, n));
  for (int j = 0; j < n; ++j)
    if (x(j) < -1e-9)
      throw std::invalid_argument("bs_separation: x must be nonnegative");

  std::vector<std::pair<double, int>> terms;  // (d+ * x, column)
  for (const auto& [col, dplus] : bs.d_plus) {
    const double v = dplus * std::max(0.0, x(col));
    if (v > 0.0) terms.emplace_back(v, col);
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  BsSeparationResult res;
  for (int t = 0; t < std::min<int>(bs.gamma, static_cast<int>(terms.size())); ++t) {
    res.dev += terms[t].first;
    res.chosen.push_back(terms[t].second);
  }
  return res;
}

}  // namespace mblp
