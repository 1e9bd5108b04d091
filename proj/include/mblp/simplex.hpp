#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mblp/model.hpp"

namespace mblp {

enum class LpStatus { Optimal, Infeasible, Unbounded, Limit };

std::string to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::Limit;
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd duals;  // per-row shadow prices in the user's objective sense
  long iterations = 0;
  double wall_time = 0.0;
  std::string message;
};

/// Snapshot of a basis, reusable to warm start after rows were appended.
struct SimplexBasis {
  std::vector<int> basic_cols;          // column id per row; n+r encodes row r's slack
  std::vector<unsigned char> nonbasic;  // per structural+slack column: 0 lower, 1 upper, 2 basic, 3 free
};

struct SolverCapabilities {
  int max_rows = 0;
  int max_cols = 0;
  bool supports_warm_start = false;
};

class LpSolverInterface {
 public:
  virtual ~LpSolverInterface() = default;
  virtual SolverCapabilities capabilities() const = 0;
  virtual LpSolution solve(const LinearProgram& lp) = 0;
  /// Warm-started solve; adapters without warm-start support ignore `hint`.
  virtual LpSolution solve(const LinearProgram& lp, const SimplexBasis* hint) {
    (void)hint;
    return solve(lp);
  }
  /// Basis of the last optimal solve, empty if unsupported.
  virtual SimplexBasis last_basis() const { return {}; }
};

struct SimplexOptions {
  long max_iterations = 200000;
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-7;   // smallest pivot magnitude accepted into the basis
  double ratio_eps = 1e-8;   // Harris ratio-test bound relaxation
  int refactor_every = 100;
  int bland_after_degenerate = 200;  // consecutive degenerate pivots before Bland's rule
};

/// Bounded-variable primal simplex with an explicit, periodically
/// refactorized basis inverse. Two phases; phase 1 drives artificials out.
/// Intended for desk-scale problems (~2000 x 2000).
class SimplexSolver : public LpSolverInterface {
 public:
  SimplexSolver() = default;
  explicit SimplexSolver(const SimplexOptions& opts) : opts_(opts) {}

  SolverCapabilities capabilities() const override { return {2000, 2000, true}; }
  LpSolution solve(const LinearProgram& lp) override;
  LpSolution solve(const LinearProgram& lp, const SimplexBasis* hint) override;
  SimplexBasis last_basis() const override { return last_basis_; }

 private:
  LpSolution solve_attempt(const LinearProgram& lp, const SimplexBasis* hint,
                           const SimplexOptions& opts);

  SimplexOptions opts_;
  SimplexBasis last_basis_;
};

/// One-shot convenience wrapper around SimplexSolver.
LpSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& opts = {});

/// Adapter that shells out to `<command> <instance-file> <solution-file>`,
/// speaking the instance file format; see README for the solution grammar.
class ExecSolver : public LpSolverInterface {
 public:
  explicit ExecSolver(std::string command) : command_(std::move(command)) {}

  SolverCapabilities capabilities() const override { return {0, 0, false}; }
  LpSolution solve(const LinearProgram& lp) override;

 private:
  std::string command_;
};

/// `builtin` or `exec:<path>`.
std::unique_ptr<LpSolverInterface> make_solver(const std::string& spec);

}  // namespace mblp
