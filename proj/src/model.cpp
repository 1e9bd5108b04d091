#include "mblp/model.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <set>
#include <stdexcept>

namespace mblp {

namespace {
constexpr double kZeroBreakpointTol = 1e-12;
}

LinearProgram LinearProgram::sized(ObjSense sense, int nvars, int nrows) {
  LinearProgram lp;
  lp.sense = sense;
  lp.objective = Eigen::VectorXd::Zero(nvars);
  lp.rows.resize(nrows);
  lp.row_sense.assign(nrows, RowSense::LessEqual);
  lp.rhs = Eigen::VectorXd::Zero(nrows);
  lp.var_lower = Eigen::VectorXd::Zero(nvars);
  lp.var_upper = Eigen::VectorXd::Constant(nvars, kInf);
  return lp;
}

double LinearProgram::row_value(int row, const Eigen::VectorXd& x) const {
  double v = 0.0;
  for (const RowEntry& e : rows[row]) v += e.value * x(e.col);
  return v;
}

double LinearProgram::coefficient(int row, int col) const {
  for (const RowEntry& e : rows[row])
    if (e.col == col) return e.value;
  return 0.0;
}

bool operator==(const LinearProgram& a, const LinearProgram& b) {
  return a.sense == b.sense && a.objective == b.objective && a.rows == b.rows &&
         a.row_sense == b.row_sense && a.rhs == b.rhs && a.var_lower == b.var_lower &&
         a.var_upper == b.var_upper;
}

BandProfile BandProfile::mirrored() const {
  BandProfile m;
  m.negative_bands = positive_bands;
  m.positive_bands = negative_bands;
  m.lower_counts = lower_counts.reverse();
  m.upper_counts = upper_counts.reverse();
  return m;
}

BandProfile BandProfile::zero(int negative, int positive, int n) {
  BandProfile p;
  p.negative_bands = negative;
  p.positive_bands = positive;
  p.lower_counts = Eigen::VectorXi::Zero(p.num_bands());
  p.upper_counts = Eigen::VectorXi::Zero(p.num_bands());
  p.upper_counts(p.index(0)) = n;
  return p;
}

const BandProfile& MultiBandUncertaintySet::profile_for(int row) const {
  auto it = row_profiles.find(row);
  return it == row_profiles.end() ? profile : it->second;
}

bool MultiBandUncertaintySet::is_uncertain(int row, int col) const {
  return deviations.contains(CoeffKey{row, col});
}

double MultiBandUncertaintySet::deviation(int row, int col, int band) const {
  auto it = deviations.find(CoeffKey{row, col});
  if (it == deviations.end()) return 0.0;
  return it->second(profile_for(row).index(band));
}

std::vector<std::pair<int, const Eigen::VectorXd*>> MultiBandUncertaintySet::row_uncertain(
    int row) const {
  std::vector<std::pair<int, const Eigen::VectorXd*>> out;
  for (auto it = deviations.lower_bound(CoeffKey{row, 0});
       it != deviations.end() && it->first.row == row; ++it)
    out.emplace_back(it->first.col, &it->second);
  return out;
}

int MultiBandUncertaintySet::count_uncertain(int row) const {
  int n = 0;
  for (auto it = deviations.lower_bound(CoeffKey{row, 0});
       it != deviations.end() && it->first.row == row; ++it)
    ++n;
  return n;
}

bool operator==(const MultiBandUncertaintySet& a, const MultiBandUncertaintySet& b) {
  return a.profile == b.profile && a.row_profiles == b.row_profiles &&
         a.deviations == b.deviations;
}

namespace {

void check_profile(const BandProfile& p, int n, const std::string& label,
                   std::vector<std::string>& out) {
  const int nb = p.num_bands();
  if (p.negative_bands < 0 || p.positive_bands < 0) {
    out.push_back(label + ": band range must contain band 0");
    return;
  }
  if (p.lower_counts.size() != nb || p.upper_counts.size() != nb) {
    out.push_back(label + ": count vectors must cover every band");
    return;
  }
  for (int k = p.min_band(); k <= p.max_band(); ++k) {
    const int l = p.lower(k), u = p.upper(k);
    if (l < 0 || l > u || u > n)
      out.push_back(fmt::format("{}: band {} needs 0 <= l <= u <= n, got l={} u={}", label, k, l, u));
  }
  if (p.upper(0) != n) out.push_back(fmt::format("{}: u_0 must equal n ({}), got {}", label, n, p.upper(0)));
  if (p.lower_counts.sum() > n)
    out.push_back(fmt::format("{}: sum of lower counts exceeds n ({} > {})", label, p.lower_counts.sum(), n));
}

}  // namespace

ValidationReport validate(const LinearProgram& lp, const MultiBandUncertaintySet& u) {
  ValidationReport rep;
  auto& out = rep.violations;
  const int n = lp.num_vars();
  const int m = lp.num_rows();

  if (static_cast<int>(lp.row_sense.size()) != m || lp.rhs.size() != m)
    out.push_back("lp: rows, row_sense and rhs must have equal length");
  if (lp.var_lower.size() != n || lp.var_upper.size() != n)
    out.push_back("lp: variable bound vectors must have one entry per variable");

  for (int i = 0; i < m; ++i) {
    std::set<int> seen;
    for (const RowEntry& e : lp.rows[i]) {
      if (e.col < 0 || e.col >= n)
        out.push_back(fmt::format("lp: row {} references column {} outside [0, {})", i, e.col, n));
      else if (!seen.insert(e.col).second)
        out.push_back(fmt::format("lp: row {} has duplicate column {}", i, e.col));
    }
  }
  if (lp.var_lower.size() == n && lp.var_upper.size() == n) {
    for (int j = 0; j < n; ++j) {
      if (lp.var_lower(j) > lp.var_upper(j))
        out.push_back(fmt::format("lp: variable {} has lower bound above upper bound", j));
      if (lp.var_lower(j) < 0.0)
        out.push_back(fmt::format("lp: variable {} has negative lower bound; x >= 0 is assumed", j));
    }
  }

  check_profile(u.profile, n, "bands", out);
  for (const auto& [row, prof] : u.row_profiles) {
    if (row < 0 || row >= m)
      out.push_back(fmt::format("bands: override references row {} outside [0, {})", row, m));
    else
      check_profile(prof, n, fmt::format("bands row {}", row), out);
  }

  for (const auto& [key, d] : u.deviations) {
    const auto tag = fmt::format("deviations ({},{})", key.row, key.col);
    if (key.row < 0 || key.row >= m || key.col < 0 || key.col >= n) {
      out.push_back(tag + ": index outside the LP");
      continue;
    }
    const BandProfile& prof = u.profile_for(key.row);
    if (d.size() != prof.num_bands()) {
      out.push_back(tag + ": breakpoint vector must cover every band of the row profile");
      continue;
    }
    for (int t = 1; t < d.size(); ++t)
      if (!(d(t - 1) < d(t))) {
        out.push_back(tag + ": breakpoints must be strictly increasing");
        break;
      }
    if (std::abs(d(prof.index(0))) > kZeroBreakpointTol)
      out.push_back(tag + ": d^0 must be 0");
  }

  // Per-row realizability: lower counts of nonzero bands can only be met by
  // uncertain coefficients, and certain coefficients absorb band 0.
  for (int i = 0; i < m; ++i) {
    const BandProfile& prof = u.profile_for(i);
    if (prof.lower_counts.size() != prof.num_bands()) continue;
    const int unc = u.count_uncertain(i);
    const int certain = n - unc;
    long need = std::max(0, prof.lower(0) - certain);
    for (int k = prof.min_band(); k <= prof.max_band(); ++k)
      if (k != 0) need += prof.lower(k);
    if (need > unc)
      out.push_back(fmt::format(
          "bands row {}: lower counts require {} deviating coefficients but only {} are uncertain",
          i, need, unc));
  }

  return rep;
}

bool is_canonical(const LinearProgram& lp) {
  return std::all_of(lp.row_sense.begin(), lp.row_sense.end(),
                     [](RowSense s) { return s == RowSense::LessEqual; });
}

namespace {

SparseRow negated(const SparseRow& row) {
  SparseRow out = row;
  for (RowEntry& e : out) e.value = -e.value;
  return out;
}

Eigen::VectorXd mirrored_breakpoints(const Eigen::VectorXd& d) {
  return -d.reverse();
}

}  // namespace

CanonicalInstance canonicalize(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                               EqualityMode mode) {
  if (is_canonical(lp)) return CanonicalInstance{lp, u, [&] {
                          std::vector<RowOrigin> o(lp.num_rows());
                          for (int i = 0; i < lp.num_rows(); ++i) o[i] = {i, false};
                          return o;
                        }()};

  CanonicalInstance out;
  out.lp = LinearProgram::sized(lp.sense, lp.num_vars(), 0);
  out.lp.objective = lp.objective;
  out.lp.var_lower = lp.var_lower;
  out.lp.var_upper = lp.var_upper;
  out.uncertainty.profile = u.profile;

  auto append = [&](int orig, bool negate) {
    const int idx = out.lp.num_rows();
    out.lp.rows.push_back(negate ? negated(lp.rows[orig]) : lp.rows[orig]);
    out.lp.row_sense.push_back(RowSense::LessEqual);
    out.lp.rhs.conservativeResize(idx + 1);
    out.lp.rhs(idx) = negate ? -lp.rhs(orig) : lp.rhs(orig);
    out.origins.push_back({orig, negate});

    const BandProfile& prof = u.profile_for(orig);
    const BandProfile eff = negate ? prof.mirrored() : prof;
    if (!(eff == out.uncertainty.profile)) out.uncertainty.row_profiles[idx] = eff;
    for (auto it = u.deviations.lower_bound(CoeffKey{orig, 0});
         it != u.deviations.end() && it->first.row == orig; ++it)
      out.uncertainty.deviations[CoeffKey{idx, it->first.col}] =
          negate ? mirrored_breakpoints(it->second) : it->second;
  };

  for (int i = 0; i < lp.num_rows(); ++i) {
    switch (lp.row_sense[i]) {
      case RowSense::LessEqual:
        append(i, false);
        break;
      case RowSense::GreaterEqual:
        append(i, true);
        break;
      case RowSense::Equal:
        if (mode == EqualityMode::Strict)
          throw std::invalid_argument(
              fmt::format("canonicalize: equality row {} rejected in strict mode", i));
        append(i, false);
        append(i, true);
        break;
    }
  }
  return out;
}

}  // namespace mblp
