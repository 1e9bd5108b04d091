#include "mblp/reformulate.hpp"

#include <map>
#include <ostream>
#include <stdexcept>

#include "mblp/instance_io.hpp"

namespace mblp {

CompactCounterpart build_compact(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                                 const ReformulateOptions& opts) {
  if (!is_canonical(lp))
    throw std::invalid_argument("build_compact: input has a >= or = row; canonicalize first");

  const int n = lp.num_vars();
  const int m = lp.num_rows();

  struct RowInfo {
    std::vector<std::pair<int, const Eigen::VectorXd*>> uncertain;
    int effective_l0 = 0;
  };
  std::vector<RowInfo> info(m);
  for (int i = 0; i < m; ++i) {
    info[i].uncertain = u.row_uncertain(i);
    const int certain = n - static_cast<int>(info[i].uncertain.size());
    info[i].effective_l0 = std::max(0, u.profile_for(i).lower(0) - certain);
  }

  CompactCounterpart cc;
  cc.base_vars = n;
  cc.base_rows = m;

  // Column layout: x, then v, w, z blocks, each grouped by constraint row.
  std::map<std::pair<int, int>, int> v_col, w_col;  // (row, band) -> column
  std::map<CoeffKey, int> z_col;
  for (int j = 0; j < n; ++j) cc.var_map.push_back({VarMapEntry::Kind::X, -1, 0, j});
  int next = n;
  for (int i = 0; i < m; ++i) {
    if (info[i].uncertain.empty()) continue;
    const BandProfile& prof = u.profile_for(i);
    for (int k = prof.min_band(); k <= prof.max_band(); ++k) {
      v_col[{i, k}] = next++;
      cc.var_map.push_back({VarMapEntry::Kind::V, i, k, -1});
    }
  }
  for (int i = 0; i < m; ++i) {
    if (info[i].uncertain.empty()) continue;
    const BandProfile& prof = u.profile_for(i);
    for (int k = prof.min_band(); k <= prof.max_band(); ++k) {
      w_col[{i, k}] = next++;
      cc.var_map.push_back({VarMapEntry::Kind::W, i, k, -1});
    }
  }
  for (int i = 0; i < m; ++i)
    for (const auto& [j, d] : info[i].uncertain) {
      (void)d;
      z_col[CoeffKey{i, j}] = next++;
      cc.var_map.push_back({VarMapEntry::Kind::Z, i, 0, j});
    }

  LinearProgram& rlp = cc.rlp;
  rlp = LinearProgram::sized(lp.sense, next, 0);
  rlp.objective.head(n) = lp.objective;
  rlp.var_lower.head(n) = lp.var_lower;
  rlp.var_upper.head(n) = lp.var_upper;

  auto push_row = [&](SparseRow row, RowSense sense, double rhs, RowMapEntry origin) {
    rlp.rows.push_back(std::move(row));
    rlp.row_sense.push_back(sense);
    rlp.rhs.conservativeResize(rlp.rows.size());
    rlp.rhs(rlp.rows.size() - 1) = rhs;
    cc.row_map.push_back(origin);
  };

  // Robustified originals keep their positions.
  for (int i = 0; i < m; ++i) {
    SparseRow row = lp.rows[i];
    if (!info[i].uncertain.empty()) {
      const BandProfile& prof = u.profile_for(i);
      for (int k = prof.min_band(); k <= prof.max_band(); ++k) {
        const int l = k == 0 ? info[i].effective_l0 : prof.lower(k);
        row.push_back({v_col[{i, k}], static_cast<double>(-l)});
      }
      for (int k = prof.min_band(); k <= prof.max_band(); ++k)
        row.push_back({w_col[{i, k}], static_cast<double>(prof.upper(k))});
      for (const auto& [j, d] : info[i].uncertain) {
        (void)d;
        row.push_back({z_col[CoeffKey{i, j}], 1.0});
      }
    }
    push_row(std::move(row), RowSense::LessEqual, lp.rhs(i), {RowMapEntry::Kind::Robust, i, -1, 0});
  }

  // Dual feasibility: -v_ik + w_ik + z_ij >= d_ijk x_j.
  for (int i = 0; i < m; ++i) {
    const BandProfile& prof = u.profile_for(i);
    for (const auto& [j, dev] : info[i].uncertain)
      for (int k = prof.min_band(); k <= prof.max_band(); ++k) {
        const double d = (*dev)(prof.index(k));
        if (opts.elide_trivial_rows && d == 0.0 &&
            (k != 0 ? prof.lower(k) : info[i].effective_l0) == 0)
          continue;
        SparseRow row;
        if (d != 0.0) row.push_back({j, -d});
        row.push_back({v_col[{i, k}], -1.0});
        row.push_back({w_col[{i, k}], 1.0});
        row.push_back({z_col[CoeffKey{i, j}], 1.0});
        push_row(std::move(row), RowSense::GreaterEqual, 0.0, {RowMapEntry::Kind::Dual, i, j, k});
      }
  }
  return cc;
}

Eigen::VectorXd CompactCounterpart::extract_x(const Eigen::VectorXd& rlp_x) const {
  return rlp_x.head(base_vars);
}

double dual_block_value(const CompactCounterpart& cc, int row, const Eigen::VectorXd& rlp_x) {
  double v = 0.0;
  for (const RowEntry& e : cc.rlp.rows[row])
    if (e.col >= cc.base_vars) v += e.value * rlp_x(e.col);
  return v;
}

void minimize_dual_blocks(const CompactCounterpart& cc, Eigen::VectorXd& rlp_x,
                          const SimplexOptions& opts) {
  // Group block columns and dual rows per original constraint.
  std::map<int, std::vector<int>> block_cols;
  for (int c = cc.base_vars; c < cc.rlp.num_vars(); ++c) {
    const VarMapEntry& e = cc.var_map[c];
    block_cols[e.row].push_back(c);
  }

  SimplexSolver solver(opts);
  for (const auto& [row, cols] : block_cols) {
    std::map<int, int> local;  // rlp column -> local variable
    for (size_t t = 0; t < cols.size(); ++t) local[cols[t]] = static_cast<int>(t);

    LinearProgram sub = LinearProgram::sized(ObjSense::Minimize, static_cast<int>(cols.size()), 0);
    for (const RowEntry& e : cc.rlp.rows[row])
      if (e.col >= cc.base_vars) sub.objective(local.at(e.col)) = e.value;

    for (int r = cc.base_rows; r < cc.rlp.num_rows(); ++r) {
      if (cc.row_map[r].row != row) continue;
      SparseRow srow;
      double rhs = 0.0;
      for (const RowEntry& e : cc.rlp.rows[r]) {
        if (e.col < cc.base_vars)
          rhs -= e.value * rlp_x(e.col);  // -d x_j moves to the right-hand side
        else
          srow.push_back({local.at(e.col), e.value});
      }
      sub.rows.push_back(std::move(srow));
      sub.row_sense.push_back(RowSense::GreaterEqual);
      sub.rhs.conservativeResize(sub.rows.size());
      sub.rhs(sub.rows.size() - 1) = rhs;
    }

    const LpSolution sol = solver.solve(sub);
    if (sol.status != LpStatus::Optimal) continue;  // keep the untightened block
    for (size_t t = 0; t < cols.size(); ++t) rlp_x(cols[t]) = sol.x(static_cast<long>(t));
  }
}

void write_counterpart(std::ostream& out, const CompactCounterpart& cc) {
  write_instance(out, Instance{cc.rlp, MultiBandUncertaintySet{
                                           BandProfile::zero(0, 0, cc.rlp.num_vars()), {}, {}}});
  out << "[varmap]\n";
  for (int c = 0; c < cc.rlp.num_vars(); ++c) {
    const VarMapEntry& e = cc.var_map[c];
    switch (e.kind) {
      case VarMapEntry::Kind::X: out << "x " << c << ' ' << e.col << '\n'; break;
      case VarMapEntry::Kind::V: out << "v " << c << ' ' << e.row << ' ' << e.band << '\n'; break;
      case VarMapEntry::Kind::W: out << "w " << c << ' ' << e.row << ' ' << e.band << '\n'; break;
      case VarMapEntry::Kind::Z: out << "z " << c << ' ' << e.row << ' ' << e.col << '\n'; break;
    }
  }
  for (int r = 0; r < cc.rlp.num_rows(); ++r) {
    const RowMapEntry& e = cc.row_map[r];
    if (e.kind == RowMapEntry::Kind::Robust)
      out << "robust_row " << r << ' ' << e.row << '\n';
    else
      out << "dual_row " << r << ' ' << e.row << ' ' << e.col << ' ' << e.band << '\n';
  }
}

}  // namespace mblp
