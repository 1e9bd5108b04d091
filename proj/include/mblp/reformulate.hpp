#pragma once

#include <iosfwd>
#include <vector>

#include "mblp/model.hpp"
#include "mblp/simplex.hpp"

namespace mblp {

struct VarMapEntry {
  enum class Kind { X, V, W, Z };
  Kind kind = Kind::X;
  int row = -1;   // constraint index for V/W/Z
  int band = 0;   // band id for V/W
  int col = -1;   // original column for X, coefficient column for Z

  friend bool operator==(const VarMapEntry&, const VarMapEntry&) = default;
};

struct RowMapEntry {
  enum class Kind { Robust, Dual };
  Kind kind = Kind::Robust;
  int row = -1;   // original constraint index
  int col = -1;   // coefficient column for Dual rows
  int band = 0;   // band id for Dual rows

  friend bool operator==(const RowMapEntry&, const RowMapEntry&) = default;
};

/// The compact robust counterpart. Columns are ordered x, then v, w, z
/// blocks each grouped by constraint row; rows are the robustified
/// originals followed by the dual-feasibility rows ordered by
/// (row, coefficient, band).
struct CompactCounterpart {
  LinearProgram rlp;
  std::vector<VarMapEntry> var_map;
  std::vector<RowMapEntry> row_map;
  int base_vars = 0;
  int base_rows = 0;

  int added_vars() const { return rlp.num_vars() - base_vars; }
  int added_rows() const { return rlp.num_rows() - base_rows; }

  /// x-part of an RLP point.
  Eigen::VectorXd extract_x(const Eigen::VectorXd& rlp_x) const;
};

struct ReformulateOptions {
  /// Drop dual-feasibility rows whose deviation is exactly 0 (band 0)
  /// when they cannot bind; keeps the column structure intact.
  bool elide_trivial_rows = false;
};

/// Duality-based compact counterpart of a canonical pair. For each row with
/// uncertainty, one v/w column per band and one z column per uncertain
/// coefficient; one dual-feasibility row -v + w + z - d x >= 0 per
/// (row, uncertain coefficient, band). Certain coefficients absorb the
/// band-0 lower count, so the v_0 coefficient in the robustified row is
/// max(0, l_0 - #certain). Throws std::invalid_argument on non-canonical
/// input.
CompactCounterpart build_compact(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                                 const ReformulateOptions& opts = {});

/// Replace the v/w/z block values of an optimal RLP point with the minimal
/// dual certificate per row (a tiny LP each), leaving x untouched. After
/// this pass each row's block value equals DEV_i(x) exactly, which is the
/// strong-duality witness the tests assert.
void minimize_dual_blocks(const CompactCounterpart& cc, Eigen::VectorXd& rlp_x,
                          const SimplexOptions& opts = {});

/// Dual block value -sum l'_k v + sum u_k w + sum z of row `row` at an RLP point.
double dual_block_value(const CompactCounterpart& cc, int row, const Eigen::VectorXd& rlp_x);

/// Instance file body plus the [varmap] sidecar section.
void write_counterpart(std::ostream& out, const CompactCounterpart& cc);

}  // namespace mblp
