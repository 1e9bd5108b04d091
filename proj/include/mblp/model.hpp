#pragma once

#include <Eigen/Dense>

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace mblp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ObjSense { Maximize, Minimize };
enum class RowSense { LessEqual, GreaterEqual, Equal };

struct RowEntry {
  int col = 0;
  double value = 0.0;

  friend bool operator==(const RowEntry&, const RowEntry&) = default;
};

/// One constraint row, stored sparse and sorted by column index.
using SparseRow = std::vector<RowEntry>;

/// A linear program max/min c'x s.t. Ax {<=,>=,=} b, lo <= x <= up.
struct LinearProgram {
  ObjSense sense = ObjSense::Maximize;
  Eigen::VectorXd objective;
  std::vector<SparseRow> rows;
  std::vector<RowSense> row_sense;
  Eigen::VectorXd rhs;
  Eigen::VectorXd var_lower;  // default 0
  Eigen::VectorXd var_upper;  // default +inf

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  /// Sized LP with zero objective/rows and default bounds [0, +inf).
  static LinearProgram sized(ObjSense sense, int nvars, int nrows);

  /// a_i' x for the stored sparse row.
  double row_value(int row, const Eigen::VectorXd& x) const;

  /// Coefficient a_ij (0 when the entry is absent).
  double coefficient(int row, int col) const;
};

bool operator==(const LinearProgram& a, const LinearProgram& b);

/// Band index range {K-, ..., -1, 0, 1, ..., K+} with per-band counts.
/// Counts are stored densely; band k lives at offset k + negative_bands.
struct BandProfile {
  int negative_bands = 0;
  int positive_bands = 0;
  Eigen::VectorXi lower_counts;
  Eigen::VectorXi upper_counts;

  int min_band() const { return -negative_bands; }
  int max_band() const { return positive_bands; }
  int num_bands() const { return negative_bands + positive_bands + 1; }
  int index(int band) const { return band + negative_bands; }

  int lower(int band) const { return lower_counts(index(band)); }
  int upper(int band) const { return upper_counts(index(band)); }

  /// Profile for a sign-flipped row: band k maps to -k.
  BandProfile mirrored() const;

  /// All-zero counts except upper(0) = n.
  static BandProfile zero(int negative, int positive, int n);

  friend bool operator==(const BandProfile&, const BandProfile&) = default;
};

struct CoeffKey {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const CoeffKey&, const CoeffKey&) = default;
};

/// Multi-band uncertainty set: a band profile (optionally overridden per
/// row) plus per-coefficient deviation breakpoints. A coefficient absent
/// from the map is certain; it contributes zero deviation and can only sit
/// in band 0. Breakpoint vectors are aligned with the row's band range and
/// must be strictly increasing with d^0 = 0.
struct MultiBandUncertaintySet {
  BandProfile profile;
  std::map<int, BandProfile> row_profiles;
  std::map<CoeffKey, Eigen::VectorXd> deviations;

  const BandProfile& profile_for(int row) const;
  bool is_uncertain(int row, int col) const;

  /// d_ij^k; 0 for certain coefficients or band 0.
  double deviation(int row, int col, int band) const;

  /// Uncertain columns of a row, ascending, with their breakpoint vectors.
  std::vector<std::pair<int, const Eigen::VectorXd*>> row_uncertain(int row) const;
  int count_uncertain(int row) const;

  bool empty() const { return deviations.empty(); }
};

bool operator==(const MultiBandUncertaintySet& a, const MultiBandUncertaintySet& b);

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Structural validation of an (LP, uncertainty set) pair. Diagnostic:
/// returns the list of violated assumptions, never throws.
ValidationReport validate(const LinearProgram& lp, const MultiBandUncertaintySet& u);

enum class EqualityMode {
  Split,   // a = row becomes a <= / negated-<= pair with duplicated deviations
  Strict,  // equality rows are rejected
};

struct RowOrigin {
  int original_row = 0;
  bool negated = false;

  friend bool operator==(const RowOrigin&, const RowOrigin&) = default;
};

struct CanonicalInstance {
  LinearProgram lp;
  MultiBandUncertaintySet uncertainty;
  std::vector<RowOrigin> origins;  // canonical row -> original row
};

/// True iff every row has sense <=.
bool is_canonical(const LinearProgram& lp);

/// Rewrites every row to <= form. A >= row is negated together with its
/// deviation breakpoints (band k maps to -k so d^0 = 0 and the ordering are
/// preserved); equality rows are split per `mode`. Objective and variable
/// bounds are untouched. Throws std::invalid_argument on an equality row in
/// Strict mode.
CanonicalInstance canonicalize(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                               EqualityMode mode = EqualityMode::Split);

}  // namespace mblp
