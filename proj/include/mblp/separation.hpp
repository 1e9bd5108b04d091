#pragma once

#include <vector>

#include "mblp/flow.hpp"
#include "mblp/model.hpp"

namespace mblp {

/// Worst-case deviation evidence for one canonical (<=) row at a point x.
struct RobustnessCertificate {
  int row = 0;
  double worst_case_deviation = 0.0;
  std::vector<int> assignment;  // band per coefficient slot; certain slots sit in band 0
  double lhs_nominal = 0.0;
  bool violated = false;
  double violation_amount = 0.0;
};

/// Default violation tolerance: a row is violated iff
/// lhs + dev - b > tol * max(1, |b|).
inline constexpr double kViolationTol = 1e-6;

/// Min-cost flow instance whose optimum is -DEV_i(x). One slot node per
/// variable; certain slots connect to band 0 only, so the required flow
/// stays at n. Throws std::invalid_argument when some x_j < 0.
FlowNetwork build_flow_instance(int row, const LinearProgram& lp,
                                const MultiBandUncertaintySet& u, const Eigen::VectorXd& x);

/// Band assignment encoded by an integral flow of build_flow_instance.
std::vector<int> decode_assignment(const FlowNetwork& net, const std::vector<int>& flow);

/// Certificate for one row via the flow oracle. Throws std::runtime_error
/// when the band bounds admit no realization for the row.
RobustnessCertificate separate_row(int row, const LinearProgram& lp,
                                   const MultiBandUncertaintySet& u, const Eigen::VectorXd& x,
                                   double tol = kViolationTol);

/// One certificate per row; x is robust feasible iff none is violated.
std::vector<RobustnessCertificate> check_robust(const LinearProgram& lp,
                                                const MultiBandUncertaintySet& u,
                                                const Eigen::VectorXd& x,
                                                double tol = kViolationTol);

struct CutRow {
  SparseRow coefficients;
  double rhs = 0.0;
};

/// Robustness cut induced by a violated certificate: the coefficient on x_j
/// is the nominal value plus the deviation of the band the certificate
/// assigns to j. Valid for every robust-feasible point and violated by the
/// x that produced the certificate. Throws std::invalid_argument when the
/// certificate is not violated.
CutRow emit_cut(const RobustnessCertificate& cert, const LinearProgram& lp,
                const MultiBandUncertaintySet& u);

struct DevResult {
  double dev = 0.0;
  std::vector<int> assignment;
};

/// Exhaustive maximization of the per-row deviation over all feasible band
/// assignments; the independent test oracle for the flow route. Guarded to
/// n <= 12 slots and at most 6 bands.
DevResult dev_bruteforce(int row, const LinearProgram& lp, const MultiBandUncertaintySet& u,
                         const Eigen::VectorXd& x);

/// Single-band (budget) uncertainty for one row.
struct BsRowUncertainty {
  int gamma = 0;
  std::vector<std::pair<int, double>> d_plus;  // (column, max positive deviation)
};

struct BsSeparationResult {
  double dev = 0.0;
  std::vector<int> chosen;  // columns of the gamma largest positive deviations
};

/// Sort-based budget separation: the gamma largest positive d+_j x_j.
BsSeparationResult bs_separation(int row, const LinearProgram& lp, const BsRowUncertainty& bs,
                                 const Eigen::VectorXd& x);

}  // namespace mblp
