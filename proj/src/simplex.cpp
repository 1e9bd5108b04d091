#include "mblp/simplex.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <unistd.h>

#include <fmt/format.h>

#include "mblp/instance_io.hpp"

namespace mblp {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::Limit: return "limit";
  }
  return "unknown";
}

namespace {

enum VStat : unsigned char { kAtLower = 0, kAtUpper = 1, kBasic = 2, kFree = 3 };

enum class RunOutcome { PhaseOptimal, Unbounded, IterLimit, NumericalFailure };

// Internal minimization core over the equality system A x + I s = b with
// bounded structural variables, bounded slacks encoding the row senses, and
// one artificial column per row for phase 1.
struct Core {
  int n = 0, m = 0;
  Eigen::MatrixXd A;  // m x n structural columns; slack/artificial columns are implicit
  Eigen::VectorXd b;
  Eigen::VectorXd lo, up;  // n + 2m entries
  Eigen::VectorXd art_sign;
  Eigen::VectorXd cost;  // active phase costs
  Eigen::VectorXd phase2_cost;

  std::vector<int> basic;
  std::vector<unsigned char> stat;
  Eigen::VectorXd xB;
  Eigen::MatrixXd Binv;

  SimplexOptions opts;
  long iters = 0;
  bool bland = false;
  int degenerate_streak = 0;

  int ncols() const { return n + 2 * m; }
  int slack_col(int r) const { return n + r; }
  int art_col(int r) const { return n + m + r; }
  bool is_art(int j) const { return j >= n + m; }
  bool fixed(int j) const { return up(j) - lo(j) <= 0.0; }

  double nb_value(int j) const {
    switch (stat[j]) {
      case kAtLower: return lo(j);
      case kAtUpper: return up(j);
      default: return 0.0;
    }
  }

  Eigen::VectorXd ftran(int j) const {
    if (j < n) return Binv * A.col(j);
    if (j < n + m) return Binv.col(j - n);
    return art_sign(j - n - m) * Binv.col(j - n - m);
  }

  double reduced_cost(int j, const Eigen::VectorXd& y, const Eigen::VectorXd& yA) const {
    if (j < n) return cost(j) - yA(j);
    if (j < n + m) return cost(j) - y(j - n);
    return cost(j) - art_sign(j - n - m) * y(j - n - m);
  }

  bool refactor() {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
    for (int r = 0; r < m; ++r) {
      const int j = basic[r];
      if (j < n)
        B.col(r) = A.col(j);
      else if (j < n + m)
        B(j - n, r) = 1.0;
      else
        B(j - n - m, r) = art_sign(j - n - m);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    Binv = lu.inverse();
    if (!usable(B, Binv)) {
      Eigen::FullPivLU<Eigen::MatrixXd> flu(B);
      flu.setThreshold(1e-14);
      Binv = flu.inverse();
      if (!usable(B, Binv)) {
        if (getenv("MBLP_DUMP")) {
          FILE* f = std::fopen("/tmp/badbasis.txt", "w");
          for (int r = 0; r < m; ++r) std::fprintf(f, "%d ", basic[r]);
          std::fprintf(f, "\n");
          for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) std::fprintf(f, "%.17g ", B(i, j));
            std::fprintf(f, "\n");
          }
          std::fclose(f);
          std::fprintf(stderr, "DUMPED m=%d iters=%ld\n", m, iters);
        }
        return false;
      }
    }
    recompute_basics();
    return true;
  }

  // An inverse is usable when residuals on a few probe directions are small;
  // an ill-conditioned but invertible basis passes, a numerically singular
  // one does not.
  bool usable(const Eigen::MatrixXd& B, const Eigen::MatrixXd& Inv) const {
    if (!Inv.allFinite()) return false;
    Eigen::VectorXd probe = Eigen::VectorXd::Ones(m);
    for (int t = 0; t < 3; ++t) {
      const Eigen::VectorXd res = B * (Inv * probe) - probe;
      if (!res.allFinite() || res.lpNorm<Eigen::Infinity>() > 1e-4 * probe.lpNorm<Eigen::Infinity>())
        return false;
      for (int i = 0; i < m; ++i) probe(i) = std::cos(0.7 * (t + 1) * (i + 1));
    }
    return true;
  }

  void recompute_basics() {
    Eigen::VectorXd rhs = b;
    for (int j = 0; j < ncols(); ++j) {
      if (stat[j] == kBasic) continue;
      const double v = nb_value(j);
      if (v == 0.0) continue;
      if (j < n)
        rhs -= A.col(j) * v;
      else if (j < n + m)
        rhs(j - n) -= v;
      else
        rhs(j - n - m) -= art_sign(j - n - m) * v;
    }
    xB = Binv * rhs;
  }

  void apply_pivot(int q, int dir, double step, int leave, bool leave_to_upper,
                   const Eigen::VectorXd& w) {
    if (step != 0.0) xB -= (dir * step) * w;
    if (leave < 0) {  // bound flip
      stat[q] = stat[q] == kAtLower ? kAtUpper : kAtLower;
      return;
    }
    const double enter_val = nb_value(q) + dir * step;
    const int lcol = basic[leave];
    stat[lcol] = leave_to_upper ? kAtUpper : kAtLower;
    basic[leave] = q;
    stat[q] = kBasic;
    xB(leave) = enter_val;

    const double piv = w(leave);
    Eigen::VectorXd factor = w;
    factor(leave) = 0.0;
    Binv.row(leave) /= piv;
    Binv.noalias() -= factor * Binv.row(leave);
  }

  RunOutcome run(bool phase1) {
    int since_refactor = 0;
    int stall_count = 0;
    while (true) {
      if (iters >= opts.max_iterations) return RunOutcome::IterLimit;
      if (since_refactor >= opts.refactor_every) {
        if (!refactor()) return RunOutcome::NumericalFailure;
        since_refactor = 0;
      }

      Eigen::VectorXd cB(m);
      for (int r = 0; r < m; ++r) cB(r) = cost(basic[r]);
      const Eigen::VectorXd y = Binv.transpose() * cB;
      const Eigen::VectorXd yA = A.transpose() * y;

      int q = -1, dir = 0;
      double best = opts.opt_tol;
      for (int j = 0; j < ncols(); ++j) {
        if (stat[j] == kBasic || fixed(j)) continue;
        if (!phase1 && is_art(j)) continue;
        const double d = reduced_cost(j, y, yA);
        int cand_dir = 0;
        if ((stat[j] == kAtLower || stat[j] == kFree) && d < -opts.opt_tol)
          cand_dir = 1;
        else if ((stat[j] == kAtUpper || stat[j] == kFree) && d > opts.opt_tol)
          cand_dir = -1;
        if (cand_dir == 0) continue;
        if (bland) {  // first eligible index
          q = j;
          dir = cand_dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          dir = cand_dir;
        }
      }
      if (q < 0) return RunOutcome::PhaseOptimal;

      ++iters;
      ++since_refactor;
      const Eigen::VectorXd w = ftran(q);

      // Harris-style two-pass ratio test. Pass 1 bounds the step with every
      // bound relaxed by ratio_eps; pass 2 picks the largest pivot (or the
      // smallest basic index under Bland's rule) whose exact ratio fits
      // within that bound. Rates below `tiny` cannot block.
      const double tiny = 1e-12;
      const double own = (lo(q) > -kInf && up(q) < kInf) ? up(q) - lo(q) : kInf;
      double step_bound = kInf;
      for (int r = 0; r < m; ++r) {
        const double rate = -dir * w(r);
        const int bj = basic[r];
        if (rate < -tiny && lo(bj) > -kInf)
          step_bound = std::min(step_bound, (xB(r) - lo(bj) + opts.ratio_eps) / -rate);
        else if (rate > tiny && up(bj) < kInf)
          step_bound = std::min(step_bound, (up(bj) - xB(r) + opts.ratio_eps) / rate);
      }

      int leave = -1;
      bool leave_upper = false;
      double best_metric = -kInf;
      double step = kInf;
      for (int r = 0; r < m; ++r) {
        const double rate = -dir * w(r);
        const int bj = basic[r];
        double s;
        bool to_upper;
        if (rate < -tiny && lo(bj) > -kInf) {
          s = std::max(0.0, (xB(r) - lo(bj)) / -rate);
          to_upper = false;
        } else if (rate > tiny && up(bj) < kInf) {
          s = std::max(0.0, (up(bj) - xB(r)) / rate);
          to_upper = true;
        } else {
          continue;
        }
        if (s > step_bound) continue;
        const double metric = bland ? -static_cast<double>(bj) : std::abs(w(r));
        if (metric > best_metric) {
          best_metric = metric;
          leave = r;
          leave_upper = to_upper;
          step = s;
        }
      }

      if (leave < 0 && own == kInf) return RunOutcome::Unbounded;
      if (leave < 0 || own <= step) {  // the entering variable blocks first
        apply_pivot(q, dir, own, -1, false, w);
        degenerate_streak = 0;
        continue;
      }

      // A pivot below pivot_tol is only trusted on a freshly factorized
      // basis; a poor-but-accepted pivot triggers an immediate refactor so
      // the exact factorization absorbs it.
      if (std::abs(w(leave)) < opts.pivot_tol) {
        if (++stall_count > 2) {
          if (getenv("MBLP_DUMP")) {
            std::fprintf(stderr, "FINALSTALL iters=%ld q=%d dir=%d own=%.3g step_bound=%.3g leave=%d piv=%.3e step=%.3g\n",
                         iters, q, dir, own, step_bound, leave, w(leave), step);
            int shown = 0;
            for (int r = 0; r < m && shown < 15; ++r) {
              const double rate = -dir * w(r);
              if (std::abs(rate) <= tiny) continue;
              const int bj = basic[r];
              double s = -1;
              if (rate < 0 && lo(bj) > -kInf) s = std::max(0.0, (xB(r) - lo(bj)) / -rate);
              else if (rate > 0 && up(bj) < kInf) s = std::max(0.0, (up(bj) - xB(r)) / rate);
              else continue;
              std::fprintf(stderr, "  r=%d bj=%d w=%.3e s=%.3e in_window=%d\n", r, bj, w(r), s, (int)(s <= step_bound));
              ++shown;
            }
          }
          return RunOutcome::NumericalFailure;
        }
        if (!refactor()) return RunOutcome::NumericalFailure;
        since_refactor = 0;
        continue;
      }
      stall_count = 0;
      if (std::abs(w(leave)) < 1e-5) since_refactor = opts.refactor_every;

      if (step <= 1e-12) {
        if (++degenerate_streak >= opts.bland_after_degenerate) bland = true;
      } else {
        degenerate_streak = 0;
      }
      apply_pivot(q, dir, step, leave, leave_upper, w);
    }
  }
};

double finite_or(double v, double fallback) { return std::isfinite(v) ? v : fallback; }

}  // namespace

LpSolution SimplexSolver::solve(const LinearProgram& lp) { return solve(lp, nullptr); }

LpSolution SimplexSolver::solve(const LinearProgram& lp, const SimplexBasis* hint) {
  LpSolution sol = solve_attempt(lp, hint, opts_);
  if (sol.status == LpStatus::Limit && sol.message.starts_with("numerical")) {
    SimplexOptions retry = opts_;
    retry.refactor_every = std::max(10, opts_.refactor_every / 8);
    retry.pivot_tol = 1e-6;
    LpSolution again = solve_attempt(lp, nullptr, retry);
    again.iterations += sol.iterations;
    again.wall_time += sol.wall_time;
    return again;
  }
  return sol;
}

LpSolution SimplexSolver::solve_attempt(const LinearProgram& lp, const SimplexBasis* hint,
                                        const SimplexOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  LpSolution sol;
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  const bool maximize = lp.sense == ObjSense::Maximize;
  auto finish = [&](LpSolution s) {
    s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
  };

  // No constraints: each variable sits at its best bound.
  if (m == 0) {
    sol.x = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      const double c = lp.objective(j);
      const bool want_high = maximize ? c > 0 : c < 0;
      const double v = want_high ? lp.var_upper(j) : lp.var_lower(j);
      if (!std::isfinite(v) && c != 0.0) {
        sol.status = LpStatus::Unbounded;
        return finish(sol);
      }
      sol.x(j) = finite_or(v, 0.0);
      if (lp.var_lower(j) > lp.var_upper(j)) {
        sol.status = LpStatus::Infeasible;
        return finish(sol);
      }
    }
    sol.status = LpStatus::Optimal;
    sol.objective = lp.objective.dot(sol.x);
    sol.duals = Eigen::VectorXd::Zero(0);
    return finish(sol);
  }

  Core c;
  c.opts = opts;
  c.n = n;
  c.m = m;
  c.b = lp.rhs;
  c.A = Eigen::MatrixXd::Zero(m, n);
  for (int i = 0; i < m; ++i)
    for (const RowEntry& e : lp.rows[i]) c.A(i, e.col) += e.value;

  // Geometric-mean equilibration with power-of-2 factors (exact to apply
  // and undo). Slack bounds are 0 or infinite, so they need no rescaling.
  Eigen::VectorXd row_scale = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd col_scale = Eigen::VectorXd::Ones(n);
  for (int pass = 0; pass < 3; ++pass) {
    for (int i = 0; i < m; ++i) {
      double amin = kInf, amax = 0.0;
      for (int j = 0; j < n; ++j) {
        const double a = std::abs(c.A(i, j));
        if (a == 0.0) continue;
        amin = std::min(amin, a);
        amax = std::max(amax, a);
      }
      if (amax == 0.0) continue;
      const double f = std::exp2(-std::round(std::log2(std::sqrt(amin * amax))));
      c.A.row(i) *= f;
      row_scale(i) *= f;
    }
    for (int j = 0; j < n; ++j) {
      double amin = kInf, amax = 0.0;
      for (int i = 0; i < m; ++i) {
        const double a = std::abs(c.A(i, j));
        if (a == 0.0) continue;
        amin = std::min(amin, a);
        amax = std::max(amax, a);
      }
      if (amax == 0.0) continue;
      const double f = std::exp2(-std::round(std::log2(std::sqrt(amin * amax))));
      c.A.col(j) *= f;
      col_scale(j) *= f;
    }
  }
  c.b = c.b.cwiseProduct(row_scale);

  c.lo.resize(c.ncols());
  c.up.resize(c.ncols());
  c.lo.head(n) = lp.var_lower.cwiseQuotient(col_scale);
  c.up.head(n) = lp.var_upper.cwiseQuotient(col_scale);
  for (int r = 0; r < m; ++r) {
    switch (lp.row_sense[r]) {
      case RowSense::LessEqual:
        c.lo(c.slack_col(r)) = 0.0;
        c.up(c.slack_col(r)) = kInf;
        break;
      case RowSense::GreaterEqual:
        c.lo(c.slack_col(r)) = -kInf;
        c.up(c.slack_col(r)) = 0.0;
        break;
      case RowSense::Equal:
        c.lo(c.slack_col(r)) = 0.0;
        c.up(c.slack_col(r)) = 0.0;
        break;
    }
    c.lo(c.art_col(r)) = 0.0;
    c.up(c.art_col(r)) = kInf;
  }
  for (int j = 0; j < n; ++j)
    if (c.lo(j) > c.up(j)) {
      sol.status = LpStatus::Infeasible;
      sol.x = Eigen::VectorXd::Zero(n);
      return finish(sol);
    }

  c.phase2_cost = Eigen::VectorXd::Zero(c.ncols());
  c.phase2_cost.head(n) =
      (maximize ? (-lp.objective).eval() : lp.objective).cwiseProduct(col_scale);

  // Nonbasic start: every structural and slack column at a finite bound.
  c.stat.assign(c.ncols(), kAtLower);
  for (int j = 0; j < n + m; ++j) {
    if (c.lo(j) > -kInf)
      c.stat[j] = kAtLower;
    else if (c.up(j) < kInf)
      c.stat[j] = kAtUpper;
    else
      c.stat[j] = kFree;
  }

  // Basis: warm hint where valid, artificials elsewhere.
  c.basic.assign(m, -1);
  c.art_sign = Eigen::VectorXd::Ones(m);
  int warm_rows = 0;
  if (hint && !hint->basic_cols.empty() && static_cast<int>(hint->basic_cols.size()) <= m &&
      static_cast<int>(hint->nonbasic.size()) == n + static_cast<int>(hint->basic_cols.size())) {
    const int m_old = static_cast<int>(hint->basic_cols.size());
    bool valid = true;
    for (int r = 0; r < m_old && valid; ++r) {
      const int j = hint->basic_cols[r];
      if (j < 0 || j >= n + m_old) valid = false;
    }
    if (valid) {
      for (int r = 0; r < m_old; ++r) {
        c.basic[r] = hint->basic_cols[r];
        c.stat[hint->basic_cols[r]] = kBasic;
      }
      for (int j = 0; j < n + m_old; ++j)
        if (hint->nonbasic[j] != kBasic) c.stat[j] = hint->nonbasic[j];
      warm_rows = m_old;
    }
  }
  for (int r = warm_rows; r < m; ++r) {
    c.basic[r] = c.art_col(r);
    c.stat[c.art_col(r)] = kBasic;
  }
  // Rows covered by the warm basis do not need phase-1 artificials.
  for (int r = 0; r < warm_rows; ++r) c.up(c.art_col(r)) = 0.0;

  if (!c.refactor()) {
    if (warm_rows > 0) return solve_attempt(lp, nullptr, opts);  // bad hint, cold restart
    sol.status = LpStatus::Limit;
    sol.message = "numerical: singular starting basis";
    sol.x = Eigen::VectorXd::Zero(n);
    return finish(sol);
  }
  // Flip artificial signs so their basic values are nonnegative, and cap
  // each artificial at its starting mass: it only ever needs to shrink, and
  // the cap rules out a phantom unbounded ray in phase 1.
  for (int r = 0; r < m; ++r) {
    if (c.basic[r] != c.art_col(r)) continue;
    if (c.xB(r) < 0.0) {
      c.art_sign(r) = -1.0;
      c.Binv.row(r) = -c.Binv.row(r);
      c.xB(r) = -c.xB(r);
    }
    c.up(c.art_col(r)) = std::max(c.xB(r), 1.0);
  }

  const double bscale = 1.0 + c.b.lpNorm<Eigen::Infinity>();

  // Phase 1: minimize the artificial mass.
  c.cost = Eigen::VectorXd::Zero(c.ncols());
  c.cost.tail(m).setOnes();
  RunOutcome out = c.run(true);
  if (out == RunOutcome::IterLimit || out == RunOutcome::NumericalFailure) {
    sol.status = LpStatus::Limit;
    sol.message = out == RunOutcome::NumericalFailure ? "numerical: failure in phase 1"
                                                      : "iteration limit in phase 1";
    sol.x = Eigen::VectorXd::Zero(n);
    sol.iterations = c.iters;
    return finish(sol);
  }
  double art_mass = 0.0;
  for (int r = 0; r < m; ++r)
    if (c.is_art(c.basic[r])) art_mass += c.xB(r);
  for (int j = n + m; j < c.ncols(); ++j)
    if (c.stat[j] == kAtUpper) art_mass += c.up(j);
  if (out == RunOutcome::Unbounded || art_mass > 1e-7 * bscale) {
    sol.status = LpStatus::Infeasible;
    sol.x = Eigen::VectorXd::Zero(n);
    sol.iterations = c.iters;
    return finish(sol);
  }

  // Drive leftover artificials out of the basis where a usable pivot exists.
  for (int r = 0; r < m; ++r) {
    if (!c.is_art(c.basic[r])) continue;
    const Eigen::RowVectorXd brow = c.Binv.row(r);
    const Eigen::RowVectorXd browA = brow * c.A;
    int found = -1;
    for (int j = 0; j < n + m; ++j) {
      if (c.stat[j] == kBasic || c.fixed(j)) continue;
      const double alpha = j < n ? browA(j) : brow(j - n);
      if (std::abs(alpha) > 1e-7) {
        found = j;
        break;
      }
    }
    if (found < 0) continue;  // dependent row; artificial stays pinned at 0
    const Eigen::VectorXd w = c.ftran(found);
    const int old_art = c.basic[r];
    c.stat[old_art] = kAtLower;
    c.basic[r] = found;
    c.stat[found] = kBasic;
    const double piv = w(r);
    Eigen::VectorXd factor = w;
    factor(r) = 0.0;
    c.Binv.row(r) /= piv;
    c.Binv.noalias() -= factor * c.Binv.row(r);
    c.recompute_basics();
  }
  for (int r = 0; r < m; ++r) c.up(c.art_col(r)) = 0.0;  // pin artificials
  for (int j = n + m; j < c.ncols(); ++j)
    if (c.stat[j] == kAtUpper) c.stat[j] = kAtLower;

  // Phase 2.
  c.cost = c.phase2_cost;
  c.bland = false;
  c.degenerate_streak = 0;
  out = c.run(false);

  sol.iterations = c.iters;
  if (out == RunOutcome::Unbounded) {
    sol.status = LpStatus::Unbounded;
    sol.x = Eigen::VectorXd::Zero(n);
    return finish(sol);
  }
  if (out == RunOutcome::NumericalFailure) {
    sol.status = LpStatus::Limit;
    sol.message = "numerical: failure in phase 2";
    sol.x = Eigen::VectorXd::Zero(n);
    return finish(sol);
  }

  if (!c.refactor()) {
    sol.status = LpStatus::Limit;
    sol.message = "numerical: singular basis at exit";
    sol.x = Eigen::VectorXd::Zero(n);
    return finish(sol);
  }

  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x(j) = c.stat[j] == kBasic ? 0.0 : c.nb_value(j);
  for (int r = 0; r < m; ++r)
    if (c.basic[r] < n) x(c.basic[r]) = c.xB(r);
  x = x.cwiseProduct(col_scale);
  sol.x = x;
  sol.objective = lp.objective.dot(x);

  Eigen::VectorXd cB(m);
  for (int r = 0; r < m; ++r) cB(r) = c.cost(c.basic[r]);
  const Eigen::VectorXd y = c.Binv.transpose() * cB;
  sol.duals = (maximize ? (-y).eval() : y).cwiseProduct(row_scale);

  if (out == RunOutcome::IterLimit) {
    sol.status = LpStatus::Limit;
    sol.message = "iteration limit in phase 2";
    return finish(sol);
  }

  // Feasibility audit of the final basis.
  double worst = 0.0;
  for (int r = 0; r < m; ++r) {
    const int bj = c.basic[r];
    worst = std::max(worst, c.lo(bj) - c.xB(r));
    worst = std::max(worst, c.xB(r) - c.up(bj));
  }
  if (worst > 1e-7 * bscale) {
    sol.status = LpStatus::Limit;
    sol.message = fmt::format("numerical: residual infeasibility {:.3e} after termination", worst);
    return finish(sol);
  }

  sol.status = LpStatus::Optimal;
  last_basis_.basic_cols.assign(c.basic.begin(), c.basic.end());
  last_basis_.nonbasic.assign(c.stat.begin(), c.stat.begin() + n + m);
  // A basis holding an artificial cannot seed a warm start.
  for (int r = 0; r < m; ++r)
    if (c.is_art(c.basic[r])) {
      last_basis_ = {};
      break;
    }
  return finish(sol);
}

LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& opts) {
  SimplexSolver solver(opts);
  return solver.solve(lp);
}

LpSolution ExecSolver::solve(const LinearProgram& lp) {
  LpSolution sol;
  char inst_path[] = "/tmp/mblp-inst-XXXXXX";
  char sol_path[] = "/tmp/mblp-sol-XXXXXX";
  const int fd1 = mkstemp(inst_path);
  const int fd2 = mkstemp(sol_path);
  if (fd1 < 0 || fd2 < 0) {
    sol.message = "cannot create temporary files";
    return sol;
  }
  close(fd1);
  close(fd2);

  write_instance_file(inst_path, Instance{lp, MultiBandUncertaintySet{
                                                  BandProfile::zero(0, 0, lp.num_vars()), {}, {}}});
  const std::string cmd = fmt::format("{} '{}' '{}'", command_, inst_path, sol_path);
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    sol.message = fmt::format("external solver exited with status {}", rc);
    std::remove(inst_path);
    std::remove(sol_path);
    return sol;
  }

  std::ifstream in(sol_path);
  std::string key;
  sol.x = Eigen::VectorXd::Zero(lp.num_vars());
  while (in >> key) {
    if (key == "status") {
      std::string v;
      in >> v;
      if (v == "optimal")
        sol.status = LpStatus::Optimal;
      else if (v == "infeasible")
        sol.status = LpStatus::Infeasible;
      else if (v == "unbounded")
        sol.status = LpStatus::Unbounded;
      else
        sol.status = LpStatus::Limit;
    } else if (key == "objective") {
      in >> sol.objective;
    } else if (key == "x") {
      int j;
      double v;
      in >> j >> v;
      if (j >= 0 && j < lp.num_vars()) sol.x(j) = v;
    } else {
      std::string skip;
      std::getline(in, skip);
    }
  }
  std::remove(inst_path);
  std::remove(sol_path);
  return sol;
}

std::unique_ptr<LpSolverInterface> make_solver(const std::string& spec) {
  if (spec == "builtin") return std::make_unique<SimplexSolver>();
  if (spec.starts_with("exec:")) return std::make_unique<ExecSolver>(spec.substr(5));
  throw std::invalid_argument("unknown solver spec: " + spec);
}

}  // namespace mblp
