#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mblp/model.hpp"
#include "mblp/rng.hpp"
#include "mblp/separation.hpp"
#include "mblp/solve.hpp"

namespace mblp {

struct PapParams {
  int num_tx = 50;
  int num_users = 20;
  double area = 100.0;
  double target_degree = 6.0;  // average transmitters heard per user
  std::uint64_t seed = 1;
  double pmax = 50.0;
  double threshold = 1.0;
  double margin = 2.0;  // coverage headroom required at full power
  double pathloss_exp = 3.5;
};

/// Synthetic power assignment instance: transmitters and users on a square,
/// inverse-power-law fading inside a hearing radius, zero outside.
struct PapInstance {
  Eigen::MatrixXd tx_pos;    // num_tx x 2
  Eigen::MatrixXd user_pos;  // num_users x 2
  Eigen::VectorXd pmax;
  Eigen::VectorXd threshold;
  Eigen::MatrixXd fading;  // num_users x num_tx
  double hearing_radius = 0.0;
  int radius_adjustments = 0;

  int num_tx() const { return static_cast<int>(fading.cols()); }
  int num_users() const { return static_cast<int>(fading.rows()); }

  /// min 1'p s.t. fading p >= threshold, 0 <= p <= pmax.
  LinearProgram lp_view() const;
};

/// Deterministic in the seed; widens the hearing radius until every user is
/// coverable with `margin` headroom at full power.
PapInstance generate_pap(const PapParams& params);

/// Distribution of relative coefficient deviations (fractions of nominal).
struct DeviationDistribution {
  enum class Family { LogNormalDb, Empirical };

  Family family = Family::LogNormalDb;
  double sigma_db = 5.5;
  std::vector<double> samples;  // sorted relative deviations, Empirical only

  /// P(relative deviation <= y).
  double cdf_relative(double y) const;
  /// One relative-deviation draw. A log-normal dB deviation D multiplies the
  /// nominal by 10^(D/10), so the relative deviation is 10^(D/10) - 1.
  double sample_relative(RandomStream& rng) const;

  static DeviationDistribution log_normal_db(double sigma);
  static DeviationDistribution empirical(std::vector<double> samples);
};

struct BandSpec {
  int num_neg = 3;
  int num_pos = 3;
  double width_frac = 0.05;  // band width as a fraction of the nominal value
  double shrink = 0.8;       // lower counts: floor(n * P_k * shrink)
  double stretch = 1.2;      // upper counts: ceil(n * P_k * stretch)
};

/// Breakpoints at signed multiples of the nominal value.
struct BreakpointRule {
  int num_neg = 0;
  int num_pos = 0;
  double width_frac = 0.0;

  Eigen::VectorXd breakpoints(double nominal) const;
};

struct Calibration {
  BandProfile profile;
  BreakpointRule rule;
  Eigen::VectorXd band_probs;  // per band, sums to 1
};

/// Band counts from the distribution's CDF evaluated at the band edges;
/// out-of-range mass goes to the extreme bands, u_0 is forced to n. Throws
/// std::invalid_argument on a spec the paper's assumptions cannot satisfy.
Calibration calibrate_bands(const DeviationDistribution& dist, int n, const BandSpec& spec);

/// Per-row calibrated uncertainty for an LP: every stored nonzero
/// coefficient becomes uncertain with breakpoints k * width * |a|, and each
/// row's counts are calibrated to its own uncertain-coefficient count.
MultiBandUncertaintySet calibrate_uncertainty(const LinearProgram& lp,
                                              const DeviationDistribution& dist,
                                              const BandSpec& spec);

/// Budget (single-band) uncertainty derived from a multi-band set:
/// gamma_i = ceil(0.8 * max_{k != 0} u_k) and d+ = the top breakpoint.
struct BsSet {
  Eigen::VectorXi gamma;  // per row
  std::map<CoeffKey, double> d_plus;
};

BsSet bs_from_mb(const MultiBandUncertaintySet& u, int num_rows);

/// Embed a budget set as a {0, +1}-band multi-band set (upper count gamma).
MultiBandUncertaintySet mb_from_bs(const BsSet& bs, int num_vars, int num_rows);

BsRowUncertainty bs_row(const BsSet& bs, int row);

struct ProtectionReport {
  long realizations = 0;
  long feasible_count = 0;
  double protect_pct = 0.0;
  Eigen::VectorXd row_violation_freq;
  std::uint64_t seed = 0;
};

/// Monte Carlo protection: every stored coefficient is independently
/// rescaled by a draw from `dist` (in the original row sense), and x is
/// checked against each realized matrix.
ProtectionReport evaluate_protection(const LinearProgram& lp, const Eigen::VectorXd& x,
                                     const DeviationDistribution& dist, long realizations,
                                     std::uint64_t seed);

struct StressReport {
  long samples = 0;
  long failures = 0;
  int first_failure_row = -1;
  long first_failure_sample = -1;
  Eigen::VectorXd max_sampled_dev;  // per row, over all sampled scenarios
};

/// Samples scenarios inside the uncertainty set (feasible band assignments,
/// deviations at band extremes) against a canonical pair; a failure means a
/// solve route returned a non-robust point.
StressReport in_set_stress(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                           const Eigen::VectorXd& x, long samples, std::uint64_t seed,
                           double tol = kViolationTol);

struct ComparisonResult {
  int num_rows = 0;
  int num_vars = 0;
  int added_rows = 0;  // |I+| of the multi-band counterpart
  int added_vars = 0;  // |J+|
  SolveStatus status = SolveStatus::Limit;
  std::string message;
  double objective_nominal = 0.0;
  double objective_mb = 0.0;
  double objective_bs = 0.0;
  double por_mb_pct = 0.0;
  double por_bs_pct = 0.0;
  long mb_cut_count = 0;
  double time_compact = 0.0;
  double time_cuts = 0.0;
  double delta_t_pct = 0.0;
  double protect_nominal_pct = 0.0;
  double protect_mb_pct = 0.0;
  double protect_bs_pct = 0.0;
};

/// The full experiment on one instance: nominal, multi-band by both routes,
/// budget baseline, and Monte Carlo protection of each solution.
ComparisonResult run_comparison(const LinearProgram& lp, const MultiBandUncertaintySet& u,
                                const DeviationDistribution& dist, long realizations,
                                std::uint64_t seed, LpSolverInterface& solver,
                                const SolveLimits& limits = {});

}  // namespace mblp
