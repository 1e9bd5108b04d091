#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mblp/model.hpp"
#include "mblp/reformulate.hpp"
#include "mblp/separation.hpp"
#include "mblp/simplex.hpp"

namespace mblp {

enum class SolveStatus { Optimal, Infeasible, Unbounded, Limit, InternalMismatch };

std::string to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::Limit;
  std::string method;
  double objective_nominal = 0.0;
  double objective_robust = 0.0;
  double por_pct = 0.0;  // deterioration required to guarantee robustness
  Eigen::VectorXd x;     // robust solution
  long cut_count = 0;
  long iterations = 0;      // LP solves in the cut loop, 1 for the compact route
  long lp_iterations = 0;   // simplex pivots, summed
  int added_vars = 0;
  int added_rows = 0;
  double time_solve = 0.0;     // seconds in the LP solver
  double time_separate = 0.0;  // seconds in separation
  std::string message;
};

struct SolveLimits {
  long max_iterations = 0;  // 0: 10 * m * n default
  double time_limit = kInf;
  double tol = kViolationTol;
};

/// Deterioration of the optimal value required by robustness, in percent;
/// nonnegative for a correct robust optimum up to solver tolerance.
double price_of_robustness_pct(ObjSense sense, double nominal, double robust);

/// Route A: solve the compact counterpart of Theorem-1 shape directly.
/// Requires a valid canonical pair (throws std::invalid_argument otherwise).
SolveReport solve_compact(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                          LpSolverInterface& solver, const SolveLimits& limits = {});

/// Route B: cutting planes. Solve the nominal problem, separate with the
/// flow oracle, add every violated row's cut, repeat. Never reports a
/// non-robust point as optimal.
SolveReport solve_cutting_planes(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                                 LpSolverInterface& solver, const SolveLimits& limits = {});

}  // namespace mblp
