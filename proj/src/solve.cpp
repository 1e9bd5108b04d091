#include "mblp/solve.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace mblp {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Limit: return "limit";
    case SolveStatus::InternalMismatch: return "internal-mismatch";
  }
  return "unknown";
}

double price_of_robustness_pct(ObjSense sense, double nominal, double robust) {
  if (nominal == 0.0) return 0.0;
  const double deterioration = sense == ObjSense::Maximize ? nominal - robust : robust - nominal;
  return 100.0 * deterioration / std::abs(nominal);
}

namespace {

SolveStatus from_lp_status(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return SolveStatus::Optimal;
    case LpStatus::Infeasible: return SolveStatus::Infeasible;
    case LpStatus::Unbounded: return SolveStatus::Unbounded;
    case LpStatus::Limit: return SolveStatus::Limit;
  }
  return SolveStatus::Limit;
}

void require_canonical_valid(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                             const char* who) {
  if (!is_canonical(lp))
    throw std::invalid_argument(fmt::format("{}: input has a >= or = row; canonicalize first", who));
  const ValidationReport rep = validate(lp, u);
  if (!rep.ok())
    throw std::invalid_argument(fmt::format("{}: invalid pair: {}", who, rep.violations.front()));
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SolveReport solve_compact(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                          LpSolverInterface& solver, const SolveLimits& limits) {
  require_canonical_valid(lp, u, "solve_compact");
  SolveReport rep;
  rep.method = "compact";

  LpSolution nominal = solver.solve(lp);
  rep.lp_iterations += nominal.iterations;
  rep.time_solve += nominal.wall_time;
  if (nominal.status != LpStatus::Optimal) {
    rep.status = from_lp_status(nominal.status);
    rep.message = "nominal solve: " + to_string(nominal.status);
    return rep;
  }
  rep.objective_nominal = nominal.objective;

  CompactCounterpart cc = build_compact(lp, u);
  rep.added_vars = cc.added_vars();
  rep.added_rows = cc.added_rows();

  LpSolution robust = solver.solve(cc.rlp);
  rep.lp_iterations += robust.iterations;
  rep.time_solve += robust.wall_time;
  rep.iterations = 1;
  if (robust.status != LpStatus::Optimal) {
    rep.status = from_lp_status(robust.status);
    rep.message = "counterpart solve: " + to_string(robust.status) +
                  (robust.message.empty() ? "" : " (" + robust.message + ")");
    return rep;
  }
  minimize_dual_blocks(cc, robust.x);

  rep.objective_robust = robust.objective;
  rep.x = cc.extract_x(robust.x);
  rep.por_pct = price_of_robustness_pct(lp.sense, rep.objective_nominal, rep.objective_robust);

  // Cross-check the optimum against the flow oracle; a violated certificate
  // here means the two routes disagree on this instance.
  const auto t0 = std::chrono::steady_clock::now();
  for (const RobustnessCertificate& cert : check_robust(lp, u, rep.x, limits.tol)) {
    if (cert.violated) {
      rep.status = SolveStatus::InternalMismatch;
      rep.message = fmt::format("counterpart optimum violates row {} by {}", cert.row,
                                cert.violation_amount);
      rep.time_separate += seconds_since(t0);
      return rep;
    }
  }
  rep.time_separate += seconds_since(t0);
  rep.status = SolveStatus::Optimal;
  return rep;
}

SolveReport solve_cutting_planes(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                                 LpSolverInterface& solver, const SolveLimits& limits) {
  require_canonical_valid(lp, u, "solve_cutting_planes");
  const auto t_start = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.method = "cuts";

  const long max_iter = limits.max_iterations > 0
                            ? limits.max_iterations
                            : 10L * std::max(1, lp.num_rows()) * std::max(1, lp.num_vars());

  LinearProgram working = lp;
  std::set<std::pair<int, std::vector<int>>> pool;  // (row, band assignment)
  const bool warm = solver.capabilities().supports_warm_start;
  SimplexBasis basis;
  bool have_incumbent = false;

  while (true) {
    LpSolution sol = warm && !basis.basic_cols.empty() ? solver.solve(working, &basis)
                                                       : solver.solve(working);
    rep.lp_iterations += sol.iterations;
    rep.time_solve += sol.wall_time;
    ++rep.iterations;
    if (sol.status != LpStatus::Optimal) {
      rep.status = from_lp_status(sol.status);
      rep.message = fmt::format("working LP solve {}: {}", rep.iterations, to_string(sol.status));
      return rep;
    }
    if (warm) basis = solver.last_basis();
    if (rep.iterations == 1) rep.objective_nominal = sol.objective;
    rep.x = sol.x;
    rep.objective_robust = sol.objective;
    have_incumbent = true;

    const auto t0 = std::chrono::steady_clock::now();
    const auto certs = check_robust(lp, u, sol.x, limits.tol);
    rep.time_separate += seconds_since(t0);

    long added = 0, duplicates = 0;
    for (const RobustnessCertificate& cert : certs) {
      if (!cert.violated) continue;
      auto key = std::make_pair(cert.row, cert.assignment);
      if (!pool.insert(std::move(key)).second) {
        ++duplicates;
        continue;
      }
      const CutRow cut = emit_cut(cert, lp, u);
      working.rows.push_back(cut.coefficients);
      working.row_sense.push_back(RowSense::LessEqual);
      working.rhs.conservativeResize(working.num_rows());
      working.rhs(working.num_rows() - 1) = cut.rhs;
      ++added;
    }
    rep.cut_count += added;

    if (added == 0 && duplicates == 0) {
      rep.status = SolveStatus::Optimal;
      rep.por_pct = price_of_robustness_pct(lp.sense, rep.objective_nominal, rep.objective_robust);
      return rep;
    }
    if (added == 0) {
      // Every violated row repeated an already-added assignment: the working
      // LP cannot move further, so report the incumbent honestly.
      rep.status = SolveStatus::Limit;
      rep.message = fmt::format("{} violated rows reproduced pooled cuts; tolerance too tight",
                                duplicates);
      return rep;
    }
    if (rep.iterations >= max_iter || seconds_since(t_start) > limits.time_limit) {
      rep.status = SolveStatus::Limit;
      rep.message = have_incumbent ? "iteration or time limit; incumbent is not proven robust"
                                   : "iteration or time limit";
      return rep;
    }
  }
}

}  // namespace mblp
