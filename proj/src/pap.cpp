#include "mblp/pap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace mblp {

LinearProgram PapInstance::lp_view() const {
  LinearProgram lp = LinearProgram::sized(ObjSense::Minimize, num_tx(), num_users());
  lp.objective.setOnes();
  for (int i = 0; i < num_users(); ++i) {
    for (int j = 0; j < num_tx(); ++j)
      if (fading(i, j) != 0.0) lp.rows[i].push_back({j, fading(i, j)});
    lp.row_sense[i] = RowSense::GreaterEqual;
    lp.rhs(i) = threshold(i);
  }
  lp.var_upper = pmax;
  return lp;
}

PapInstance generate_pap(const PapParams& params) {
  if (params.num_tx < 1 || params.num_users < 1)
    throw std::invalid_argument("generate_pap: counts must be >= 1");

  PapInstance inst;
  RandomStream rng(params.seed, 0x9a9);
  inst.tx_pos.resize(params.num_tx, 2);
  inst.user_pos.resize(params.num_users, 2);
  for (int j = 0; j < params.num_tx; ++j) {
    inst.tx_pos(j, 0) = rng.uniform(0.0, params.area);
    inst.tx_pos(j, 1) = rng.uniform(0.0, params.area);
  }
  for (int i = 0; i < params.num_users; ++i) {
    inst.user_pos(i, 0) = rng.uniform(0.0, params.area);
    inst.user_pos(i, 1) = rng.uniform(0.0, params.area);
  }
  inst.pmax = Eigen::VectorXd::Constant(params.num_tx, params.pmax);
  inst.threshold = Eigen::VectorXd::Constant(params.num_users, params.threshold);

  const double d_ref = params.area / 10.0;
  const double d_min = params.area / 100.0;
  double radius =
      params.area * std::sqrt(params.target_degree / (3.14159265358979323846 * params.num_tx));

  // Widen the hearing radius until every user can be covered with margin.
  for (int attempt = 0;; ++attempt) {
    if (attempt > 64) throw std::runtime_error("generate_pap: cannot cover every user");
    inst.fading = Eigen::MatrixXd::Zero(params.num_users, params.num_tx);
    bool covered = true;
    for (int i = 0; i < params.num_users; ++i) {
      double reach = 0.0;
      for (int j = 0; j < params.num_tx; ++j) {
        const double dist = (inst.user_pos.row(i) - inst.tx_pos.row(j)).norm();
        if (dist > radius) continue;
        inst.fading(i, j) = std::pow(d_ref / std::max(dist, d_min), params.pathloss_exp);
        reach += inst.fading(i, j) * params.pmax;
      }
      if (reach < params.margin * params.threshold) covered = false;
    }
    if (covered) break;
    radius *= 1.25;
    inst.radius_adjustments = attempt + 1;
  }
  inst.hearing_radius = radius;
  return inst;
}

double DeviationDistribution::cdf_relative(double y) const {
  if (family == Family::LogNormalDb) {
    if (y <= -1.0) return 0.0;
    const double z = 10.0 * std::log10(1.0 + y) / sigma_db;
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
  }
  const auto it = std::upper_bound(samples.begin(), samples.end(), y);
  return static_cast<double>(it - samples.begin()) / static_cast<double>(samples.size());
}

double DeviationDistribution::sample_relative(RandomStream& rng) const {
  if (family == Family::LogNormalDb) return std::pow(10.0, sigma_db * rng.normal() / 10.0) - 1.0;
  return samples[rng.uniform_int(0, static_cast<int>(samples.size()) - 1)];
}

DeviationDistribution DeviationDistribution::log_normal_db(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma_db must be positive");
  DeviationDistribution d;
  d.family = Family::LogNormalDb;
  d.sigma_db = sigma;
  return d;
}

DeviationDistribution DeviationDistribution::empirical(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical sample list must be non-empty");
  DeviationDistribution d;
  d.family = Family::Empirical;
  d.sigma_db = 0.0;
  std::sort(samples.begin(), samples.end());
  d.samples = std::move(samples);
  return d;
}

Eigen::VectorXd BreakpointRule::breakpoints(double nominal) const {
  Eigen::VectorXd d(num_neg + num_pos + 1);
  for (int k = -num_neg; k <= num_pos; ++k) d(k + num_neg) = k * width_frac * std::abs(nominal);
  return d;
}

Calibration calibrate_bands(const DeviationDistribution& dist, int n, const BandSpec& spec) {
  if (spec.num_neg < 1 || spec.num_pos < 1)
    throw std::invalid_argument("calibrate_bands: need at least one band on each side");
  if (!(spec.width_frac > 0.0)) throw std::invalid_argument("calibrate_bands: band width must be positive");
  if (n < 1) throw std::invalid_argument("calibrate_bands: n must be >= 1");

  const int kmin = -spec.num_neg, kmax = spec.num_pos;
  Calibration cal;
  cal.rule = {spec.num_neg, spec.num_pos, spec.width_frac};
  cal.band_probs.resize(kmax - kmin + 1);
  for (int k = kmin; k <= kmax; ++k) {
    double p;
    if (k == kmin)
      p = dist.cdf_relative(k * spec.width_frac);
    else if (k == kmax)
      p = 1.0 - dist.cdf_relative((k - 1) * spec.width_frac);
    else
      p = dist.cdf_relative(k * spec.width_frac) - dist.cdf_relative((k - 1) * spec.width_frac);
    cal.band_probs(k - kmin) = p;
  }

  BandProfile& prof = cal.profile;
  prof.negative_bands = spec.num_neg;
  prof.positive_bands = spec.num_pos;
  prof.lower_counts.resize(prof.num_bands());
  prof.upper_counts.resize(prof.num_bands());
  for (int k = kmin; k <= kmax; ++k) {
    const double p = cal.band_probs(k - kmin);
    int u = static_cast<int>(std::ceil(n * p * spec.stretch));
    int l = static_cast<int>(std::floor(n * p * spec.shrink));
    u = std::min(u, n);
    l = std::min(l, u);
    prof.lower_counts(prof.index(k)) = l;
    prof.upper_counts(prof.index(k)) = u;
  }
  prof.upper_counts(prof.index(0)) = n;
  if (prof.lower_counts.sum() > n)
    throw std::invalid_argument(
        fmt::format("calibrate_bands: lower counts sum to {} > n = {}; shrink must be <= 1",
                    prof.lower_counts.sum(), n));
  return cal;
}

MultiBandUncertaintySet calibrate_uncertainty(const LinearProgram& lp,
                                              const DeviationDistribution& dist,
                                              const BandSpec& spec) {
  const int n = lp.num_vars();
  const int m = lp.num_rows();

  std::vector<int> row_nnz(m, 0);
  for (int i = 0; i < m; ++i)
    for (const RowEntry& e : lp.rows[i])
      if (e.value != 0.0) ++row_nnz[i];

  // Shared profile calibrated at the median row size; per-row overrides
  // where a row's own size calls for different counts.
  std::vector<int> sorted = row_nnz;
  std::sort(sorted.begin(), sorted.end());
  const int median = std::max(1, sorted.empty() ? 1 : sorted[sorted.size() / 2]);

  auto lifted = [&](int rows_n) {
    Calibration cal = calibrate_bands(dist, rows_n, spec);
    cal.profile.upper_counts(cal.profile.index(0)) = n;  // band 0 is never limited
    return cal;
  };

  MultiBandUncertaintySet u;
  const Calibration shared = lifted(median);
  u.profile = shared.profile;
  for (int i = 0; i < m; ++i) {
    if (row_nnz[i] == 0) {
      u.row_profiles[i] = BandProfile::zero(spec.num_neg, spec.num_pos, n);
      continue;
    }
    const Calibration cal = row_nnz[i] == median ? shared : lifted(row_nnz[i]);
    if (!(cal.profile == u.profile)) u.row_profiles[i] = cal.profile;
    for (const RowEntry& e : lp.rows[i])
      if (e.value != 0.0)
        u.deviations[CoeffKey{i, e.col}] = cal.rule.breakpoints(e.value);
  }
  return u;
}

BsSet bs_from_mb(const MultiBandUncertaintySet& u, int num_rows) {
  BsSet bs;
  bs.gamma.resize(num_rows);
  for (int i = 0; i < num_rows; ++i) {
    const BandProfile& prof = u.profile_for(i);
    if (prof.num_bands() < 2)
      throw std::invalid_argument("bs_from_mb: profile must have at least one nonzero band");
    int umax = 0;
    for (int k = prof.min_band(); k <= prof.max_band(); ++k)
      if (k != 0) umax = std::max(umax, prof.upper(k));
    bs.gamma(i) = static_cast<int>(std::ceil(0.8 * umax));
  }
  for (const auto& [key, d] : u.deviations) bs.d_plus[key] = d(d.size() - 1);
  return bs;
}

MultiBandUncertaintySet mb_from_bs(const BsSet& bs, int num_vars, int num_rows) {
  MultiBandUncertaintySet u;
  u.profile = BandProfile::zero(0, 1, num_vars);
  u.profile.upper_counts(u.profile.index(1)) = num_rows > 0 ? bs.gamma(0) : 0;
  for (int i = 0; i < num_rows; ++i) {
    BandProfile prof = BandProfile::zero(0, 1, num_vars);
    prof.upper_counts(prof.index(1)) = bs.gamma(i);
    if (!(prof == u.profile)) u.row_profiles[i] = prof;
  }
  for (const auto& [key, dplus] : bs.d_plus) {
    if (dplus <= 0.0) continue;  // a nonpositive top deviation never enters the budget worst case
    Eigen::VectorXd d(2);
    d << 0.0, dplus;
    u.deviations[key] = d;
  }
  return u;
}

BsRowUncertainty bs_row(const BsSet& bs, int row) {
  BsRowUncertainty out;
  out.gamma = bs.gamma(row);
  for (auto it = bs.d_plus.lower_bound(CoeffKey{row, 0});
       it != bs.d_plus.end() && it->first.row == row; ++it)
    out.d_plus.emplace_back(it->first.col, it->second);
  return out;
}

ProtectionReport evaluate_protection(const LinearProgram& lp, const Eigen::VectorXd& x,
                                     const DeviationDistribution& dist, long realizations,
                                     std::uint64_t seed) {
  if (realizations < 1) throw std::invalid_argument("evaluate_protection: realizations must be >= 1");
  ProtectionReport rep;
  rep.realizations = realizations;
  rep.seed = seed;
  rep.row_violation_freq = Eigen::VectorXd::Zero(lp.num_rows());

  for (long r = 0; r < realizations; ++r) {
    RandomStream rng(seed, static_cast<std::uint64_t>(r));
    bool feasible = true;
    for (int i = 0; i < lp.num_rows(); ++i) {
      double lhs = 0.0;
      for (const RowEntry& e : lp.rows[i])
        lhs += e.value * (1.0 + dist.sample_relative(rng)) * x(e.col);
      const double tol = 1e-9 * (1.0 + std::abs(lp.rhs(i)));
      bool ok = true;
      switch (lp.row_sense[i]) {
        case RowSense::LessEqual: ok = lhs <= lp.rhs(i) + tol; break;
        case RowSense::GreaterEqual: ok = lhs >= lp.rhs(i) - tol; break;
        case RowSense::Equal: ok = std::abs(lhs - lp.rhs(i)) <= tol; break;
      }
      if (!ok) {
        feasible = false;
        rep.row_violation_freq(i) += 1.0;
      }
    }
    if (feasible) ++rep.feasible_count;
  }
  rep.row_violation_freq /= static_cast<double>(realizations);
  rep.protect_pct = 100.0 * static_cast<double>(rep.feasible_count) / static_cast<double>(realizations);
  return rep;
}

StressReport in_set_stress(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                           const Eigen::VectorXd& x, long samples, std::uint64_t seed,
                           double tol) {
  if (!is_canonical(lp))
    throw std::invalid_argument("in_set_stress: input has a >= or = row; canonicalize first");
  StressReport rep;
  rep.samples = samples;
  rep.max_sampled_dev = Eigen::VectorXd::Constant(lp.num_rows(), -kInf);

  const int n = lp.num_vars();
  for (long s = 0; s < samples; ++s) {
    RandomStream rng(seed, static_cast<std::uint64_t>(s));
    bool violated_any = false;
    for (int i = 0; i < lp.num_rows(); ++i) {
      const BandProfile& prof = u.profile_for(i);
      const auto uncertain = u.row_uncertain(i);
      const int nu = static_cast<int>(uncertain.size());
      std::vector<int> order(nu);
      for (int t = 0; t < nu; ++t) order[t] = t;
      rng.shuffle(order.begin(), order.end());

      std::vector<int> counts(prof.num_bands(), 0);
      counts[prof.index(0)] = n - nu;  // certain slots sit in band 0
      std::vector<int> band(nu, prof.min_band() - 1);  // sentinel: unassigned
      int pos = 0;

      // Meet the lower counts first, then fill the rest at random.
      for (int k = prof.min_band(); k <= prof.max_band(); ++k) {
        if (k == 0) continue;
        for (int t = 0; t < prof.lower(k); ++t) {
          band[order[pos++]] = k;
          ++counts[prof.index(k)];
        }
      }
      for (int t = 0; t < std::max(0, prof.lower(0) - (n - nu)); ++t) {
        band[order[pos++]] = 0;
        ++counts[prof.index(0)];
      }
      for (; pos < nu; ++pos) {
        if (rng.uniform() < 0.5) continue;  // leave unassigned
        std::vector<int> open;
        for (int k = prof.min_band(); k <= prof.max_band(); ++k)
          if (counts[prof.index(k)] < prof.upper(k)) open.push_back(k);
        if (open.empty()) continue;
        const int k = open[rng.uniform_int(0, static_cast<int>(open.size()) - 1)];
        band[order[pos]] = k;
        ++counts[prof.index(k)];
      }

      double dev = 0.0;
      for (int t = 0; t < nu; ++t)
        if (band[t] >= prof.min_band())
          dev += (*uncertain[t].second)(prof.index(band[t])) * x(uncertain[t].first);
      rep.max_sampled_dev(i) = std::max(rep.max_sampled_dev(i), dev);

      const double lhs = lp.row_value(i, x) + dev;
      if (lhs > lp.rhs(i) + tol * std::max(1.0, std::abs(lp.rhs(i)))) {
        violated_any = true;
        if (rep.first_failure_row < 0) {
          rep.first_failure_row = i;
          rep.first_failure_sample = s;
        }
      }
    }
    if (violated_any) ++rep.failures;
  }
  return rep;
}

ComparisonResult run_comparison(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                                const DeviationDistribution& dist, long realizations,
                                std::uint64_t seed, LpSolverInterface& solver,
                                const SolveLimits& limits) {
  ComparisonResult res;
  res.num_rows = lp.num_rows();
  res.num_vars = lp.num_vars();

  const CanonicalInstance canon = canonicalize(lp, u);

  const auto t0 = std::chrono::steady_clock::now();
  const SolveReport compact = solve_compact(canon.lp, canon.uncertainty, solver, limits);
  res.time_compact = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto t1 = std::chrono::steady_clock::now();
  const SolveReport cuts = solve_cutting_planes(canon.lp, canon.uncertainty, solver, limits);
  res.time_cuts = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();

  res.status = compact.status;
  res.message = compact.message;
  if (cuts.status != SolveStatus::Optimal && res.status == SolveStatus::Optimal) {
    res.status = cuts.status;
    res.message = "cut loop: " + cuts.message;
  }
  res.objective_nominal = compact.objective_nominal;
  res.objective_mb = compact.objective_robust;
  res.por_mb_pct = compact.por_pct;
  res.added_vars = compact.added_vars;
  res.added_rows = compact.added_rows;
  res.mb_cut_count = cuts.cut_count;
  res.delta_t_pct = res.time_compact > 0.0
                        ? 100.0 * (res.time_cuts - res.time_compact) / res.time_compact
                        : 0.0;

  const BsSet bs = bs_from_mb(canon.uncertainty, canon.lp.num_rows());
  const MultiBandUncertaintySet bs_as_mb =
      mb_from_bs(bs, canon.lp.num_vars(), canon.lp.num_rows());
  const SolveReport bs_rep = solve_compact(canon.lp, bs_as_mb, solver, limits);
  if (bs_rep.status != SolveStatus::Optimal && res.status == SolveStatus::Optimal) {
    res.status = bs_rep.status;
    res.message = "budget baseline: " + bs_rep.message;
  }
  res.objective_bs = bs_rep.objective_robust;
  res.por_bs_pct = bs_rep.por_pct;

  if (res.status == SolveStatus::Optimal) {
    const LpSolution nominal = solver.solve(canon.lp);
    if (nominal.status == LpStatus::Optimal) {
      res.protect_nominal_pct =
          evaluate_protection(lp, nominal.x, dist, realizations, seed).protect_pct;
    }
    res.protect_mb_pct = evaluate_protection(lp, compact.x, dist, realizations, seed).protect_pct;
    res.protect_bs_pct = evaluate_protection(lp, bs_rep.x, dist, realizations, seed).protect_pct;
  }
  return res;
}

}  // namespace mblp
