// Command-line front end: reformulate, solve, separate, generate, calibrate,
// evaluate and compare subcommands over the line-oriented instance format.
// Human-readable output goes to stdout; --out writes a machine-readable JSON
// file that contains only deterministic fields (no wall-clock times), so a
// rerun with the same inputs and seed is byte-identical.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <fmt/format.h>

#include "mblp/instance_io.hpp"
#include "mblp/model.hpp"
#include "mblp/pap.hpp"
#include "mblp/reformulate.hpp"
#include "mblp/separation.hpp"
#include "mblp/simplex.hpp"
#include "mblp/solve.hpp"

namespace {

using mblp::kInf;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitLimit = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

void write_json(const std::string& path, const ordered_json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << j.dump(2) << '\n';
}

int status_exit_code(mblp::SolveStatus s) {
  switch (s) {
    case mblp::SolveStatus::Limit: return kExitLimit;
    case mblp::SolveStatus::InternalMismatch: return kExitInternal;
    default: return kExitOk;
  }
}

mblp::Instance load_validated(const std::string& path) {
  mblp::Instance inst = mblp::read_instance_file(path);
  const mblp::ValidationReport rep = mblp::validate(inst.lp, inst.uncertainty);
  if (!rep.ok()) {
    for (const std::string& v : rep.violations) std::cerr << "invalid instance: " << v << '\n';
    throw std::invalid_argument("instance failed validation");
  }
  return inst;
}

mblp::DeviationDistribution make_distribution(double sigma_db, const std::string& samples_path) {
  if (!samples_path.empty()) {
    const Eigen::VectorXd s = mblp::read_vector_file(samples_path);
    return mblp::DeviationDistribution::empirical(
        std::vector<double>(s.data(), s.data() + s.size()));
  }
  return mblp::DeviationDistribution::log_normal_db(sigma_db);
}

void print_report(const mblp::SolveReport& rep) {
  std::cout << "method " << rep.method << '\n';
  std::cout << "status " << to_string(rep.status) << '\n';
  std::cout << "objective_nominal " << mblp::format_double(rep.objective_nominal) << '\n';
  std::cout << "objective_robust " << mblp::format_double(rep.objective_robust) << '\n';
  std::cout << "por_pct " << mblp::format_double(rep.por_pct) << '\n';
  std::cout << "cuts " << rep.cut_count << '\n';
  std::cout << "iterations " << rep.iterations << '\n';
  std::cout << "lp_iterations " << rep.lp_iterations << '\n';
  std::cout << "added_vars " << rep.added_vars << '\n';
  std::cout << "added_rows " << rep.added_rows << '\n';
  std::cout << "time_solve_s " << mblp::format_double(rep.time_solve) << '\n';
  std::cout << "time_separate_s " << mblp::format_double(rep.time_separate) << '\n';
  if (!rep.message.empty()) std::cout << "message " << rep.message << '\n';
}

ordered_json report_json(const mblp::SolveReport& rep, int n, int m) {
  ordered_json j;
  j["method"] = rep.method;
  j["status"] = to_string(rep.status);
  j["vars"] = n;
  j["rows"] = m;
  j["objective_nominal"] = rep.objective_nominal;
  j["objective_robust"] = rep.objective_robust;
  j["por_pct"] = rep.por_pct;
  j["cuts"] = rep.cut_count;
  j["iterations"] = rep.iterations;
  j["added_vars"] = rep.added_vars;
  j["added_rows"] = rep.added_rows;
  j["x"] = std::vector<double>(rep.x.data(), rep.x.data() + rep.x.size());
  return j;
}

int cmd_reformulate(const std::string& instance_path, const std::string& out_path,
                    const std::string& json_path, bool elide, bool strict) {
  const mblp::Instance inst = load_validated(instance_path);
  const mblp::CanonicalInstance canon = mblp::canonicalize(
      inst.lp, inst.uncertainty, strict ? mblp::EqualityMode::Strict : mblp::EqualityMode::Split);
  const mblp::CompactCounterpart cc =
      mblp::build_compact(canon.lp, canon.uncertainty, {.elide_trivial_rows = elide});

  std::cout << "base_vars " << cc.base_vars << '\n';
  std::cout << "base_rows " << cc.base_rows << '\n';
  std::cout << "added_vars " << cc.added_vars() << '\n';
  std::cout << "added_rows " << cc.added_rows() << '\n';

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    mblp::write_counterpart(out, cc);
  }
  ordered_json j;
  j["base_vars"] = cc.base_vars;
  j["base_rows"] = cc.base_rows;
  j["added_vars"] = cc.added_vars();
  j["added_rows"] = cc.added_rows();
  write_json(json_path, j);
  return kExitOk;
}

int cmd_solve(const std::string& instance_path, const std::string& method,
              const std::string& solver_spec, const mblp::SolveLimits& limits,
              const std::string& json_path, const std::string& x_path) {
  const mblp::Instance inst = load_validated(instance_path);
  const mblp::CanonicalInstance canon = mblp::canonicalize(inst.lp, inst.uncertainty);
  const auto solver = mblp::make_solver(solver_spec);

  mblp::SolveReport rep;
  if (method == "compact")
    rep = mblp::solve_compact(canon.lp, canon.uncertainty, *solver, limits);
  else if (method == "cuts")
    rep = mblp::solve_cutting_planes(canon.lp, canon.uncertainty, *solver, limits);
  else
    throw std::invalid_argument("method must be compact or cuts");

  print_report(rep);
  write_json(json_path, report_json(rep, inst.lp.num_vars(), inst.lp.num_rows()));
  if (!x_path.empty() && rep.x.size() > 0) mblp::write_vector_file(x_path, rep.x);
  return status_exit_code(rep.status);
}

int cmd_separate(const std::string& instance_path, const std::string& x_path, double tol,
                 bool emit_cuts, const std::string& json_path) {
  const mblp::Instance inst = load_validated(instance_path);
  const mblp::CanonicalInstance canon = mblp::canonicalize(inst.lp, inst.uncertainty);
  const Eigen::VectorXd x = mblp::read_vector_file(x_path);
  if (x.size() != canon.lp.num_vars())
    throw std::invalid_argument(fmt::format("x vector has {} values, expected {}", x.size(),
                                            canon.lp.num_vars()));

  const auto certs = mblp::check_robust(canon.lp, canon.uncertainty, x, tol);
  std::cout << "row orig neg lhs_nominal dev lhs_worst rhs violated violation\n";
  long violated = 0;
  ordered_json rows = ordered_json::array();
  for (const auto& cert : certs) {
    const mblp::RowOrigin& origin = canon.origins[cert.row];
    std::cout << cert.row << ' ' << origin.original_row << ' ' << (origin.negated ? 1 : 0) << ' '
              << mblp::format_double(cert.lhs_nominal) << ' '
              << mblp::format_double(cert.worst_case_deviation) << ' '
              << mblp::format_double(cert.lhs_nominal + cert.worst_case_deviation) << ' '
              << mblp::format_double(canon.lp.rhs(cert.row)) << ' ' << (cert.violated ? 1 : 0)
              << ' ' << mblp::format_double(cert.violation_amount) << '\n';
    if (cert.violated) ++violated;
    ordered_json r;
    r["row"] = cert.row;
    r["origin_row"] = origin.original_row;
    r["negated"] = origin.negated;
    r["lhs_nominal"] = cert.lhs_nominal;
    r["dev"] = cert.worst_case_deviation;
    r["rhs"] = canon.lp.rhs(cert.row);
    r["violated"] = cert.violated;
    r["violation_amount"] = cert.violation_amount;
    rows.push_back(std::move(r));
  }
  std::cout << "violated_rows " << violated << '\n';

  if (emit_cuts) {
    for (const auto& cert : certs) {
      if (!cert.violated) continue;
      const mblp::CutRow cut = mblp::emit_cut(cert, canon.lp, canon.uncertainty);
      std::cout << "[cut row " << cert.row << "]\n";
      for (const mblp::RowEntry& e : cut.coefficients)
        std::cout << "a 0 " << e.col << ' ' << mblp::format_double(e.value) << '\n';
      std::cout << "rsense 0 <=\n";
      std::cout << "rhs 0 " << mblp::format_double(cut.rhs) << '\n';
    }
  }

  ordered_json j;
  j["violated_rows"] = violated;
  j["certificates"] = std::move(rows);
  write_json(json_path, j);
  return kExitOk;
}

int cmd_generate(const mblp::PapParams& params, const std::string& out_path,
                 const std::string& json_path) {
  const mblp::PapInstance pap = mblp::generate_pap(params);
  const mblp::LinearProgram lp = pap.lp_view();
  long nnz = 0;
  for (const auto& row : lp.rows) nnz += static_cast<long>(row.size());

  std::cout << "num_tx " << pap.num_tx() << '\n';
  std::cout << "num_users " << pap.num_users() << '\n';
  std::cout << "nnz " << nnz << '\n';
  std::cout << "hearing_radius " << mblp::format_double(pap.hearing_radius) << '\n';
  std::cout << "radius_adjustments " << pap.radius_adjustments << '\n';

  if (!out_path.empty())
    mblp::write_instance_file(
        out_path, {lp, mblp::MultiBandUncertaintySet{
                           mblp::BandProfile::zero(0, 0, lp.num_vars()), {}, {}}});
  ordered_json j;
  j["num_tx"] = pap.num_tx();
  j["num_users"] = pap.num_users();
  j["nnz"] = nnz;
  j["hearing_radius"] = pap.hearing_radius;
  j["radius_adjustments"] = pap.radius_adjustments;
  write_json(json_path, j);
  return kExitOk;
}

int cmd_calibrate(const std::string& instance_path, double sigma_db,
                  const std::string& samples_path, const mblp::BandSpec& spec,
                  const std::string& out_path, const std::string& json_path) {
  mblp::Instance inst = mblp::read_instance_file(instance_path);
  const mblp::DeviationDistribution dist = make_distribution(sigma_db, samples_path);
  inst.uncertainty = mblp::calibrate_uncertainty(inst.lp, dist, spec);
  const mblp::ValidationReport rep = mblp::validate(inst.lp, inst.uncertainty);
  if (!rep.ok()) throw std::runtime_error("calibration produced an invalid set: " + rep.violations.front());

  const mblp::BandProfile& p = inst.uncertainty.profile;
  std::cout << "bands " << p.num_bands() << '\n';
  for (int k = p.min_band(); k <= p.max_band(); ++k)
    std::cout << "band " << k << ' ' << p.lower(k) << ' ' << p.upper(k) << '\n';
  std::cout << "row_overrides " << inst.uncertainty.row_profiles.size() << '\n';
  std::cout << "uncertain_coefficients " << inst.uncertainty.deviations.size() << '\n';

  if (!out_path.empty()) mblp::write_instance_file(out_path, inst);
  ordered_json j;
  j["bands"] = p.num_bands();
  std::vector<int> lower(p.lower_counts.data(), p.lower_counts.data() + p.num_bands());
  std::vector<int> upper(p.upper_counts.data(), p.upper_counts.data() + p.num_bands());
  j["lower_counts"] = lower;
  j["upper_counts"] = upper;
  j["row_overrides"] = inst.uncertainty.row_profiles.size();
  j["uncertain_coefficients"] = inst.uncertainty.deviations.size();
  write_json(json_path, j);
  return kExitOk;
}

int cmd_evaluate(const std::string& instance_path, const std::string& x_path, double sigma_db,
                 const std::string& samples_path, long realizations, std::uint64_t seed,
                 const std::string& json_path) {
  const mblp::Instance inst = mblp::read_instance_file(instance_path);
  const Eigen::VectorXd x = mblp::read_vector_file(x_path);
  if (x.size() != inst.lp.num_vars())
    throw std::invalid_argument(fmt::format("x vector has {} values, expected {}", x.size(),
                                            inst.lp.num_vars()));
  const mblp::DeviationDistribution dist = make_distribution(sigma_db, samples_path);
  const mblp::ProtectionReport rep = mblp::evaluate_protection(inst.lp, x, dist, realizations, seed);

  std::cout << "realizations " << rep.realizations << '\n';
  std::cout << "feasible " << rep.feasible_count << '\n';
  std::cout << "protect_pct " << mblp::format_double(rep.protect_pct) << '\n';
  std::cout << "seed " << rep.seed << '\n';

  ordered_json j;
  j["realizations"] = rep.realizations;
  j["feasible"] = rep.feasible_count;
  j["protect_pct"] = rep.protect_pct;
  j["seed"] = rep.seed;
  j["row_violation_freq"] = std::vector<double>(
      rep.row_violation_freq.data(), rep.row_violation_freq.data() + rep.row_violation_freq.size());
  write_json(json_path, j);
  return kExitOk;
}

int cmd_compare(const std::string& instance_path, double sigma_db, const std::string& samples_path,
                long realizations, std::uint64_t seed, const std::string& solver_spec,
                const mblp::SolveLimits& limits, const std::string& json_path) {
  const mblp::Instance inst = load_validated(instance_path);
  if (inst.uncertainty.empty())
    throw std::invalid_argument("compare needs an instance with a calibrated [deviations] section");
  const mblp::DeviationDistribution dist = make_distribution(sigma_db, samples_path);
  const auto solver = mblp::make_solver(solver_spec);
  const mblp::ComparisonResult res =
      mblp::run_comparison(inst.lp, inst.uncertainty, dist, realizations, seed, *solver, limits);

  std::cout << "|I| |J| |I+| |J+| PoR%(MB) PoR%(BS) dt% Protect%(nom) Protect%(MB) Protect%(BS)\n";
  std::cout << res.num_rows << ' ' << res.num_vars << ' ' << res.added_rows << ' '
            << res.added_vars << ' ' << fmt::format("{:.2f}", res.por_mb_pct) << ' '
            << fmt::format("{:.2f}", res.por_bs_pct) << ' '
            << fmt::format("{:.1f}", res.delta_t_pct) << ' '
            << fmt::format("{:.2f}", res.protect_nominal_pct) << ' '
            << fmt::format("{:.2f}", res.protect_mb_pct) << ' '
            << fmt::format("{:.2f}", res.protect_bs_pct) << '\n';
  std::cout << "status " << to_string(res.status) << '\n';
  std::cout << "mb_cuts " << res.mb_cut_count << '\n';
  std::cout << "time_compact_s " << mblp::format_double(res.time_compact) << '\n';
  std::cout << "time_cuts_s " << mblp::format_double(res.time_cuts) << '\n';
  if (!res.message.empty()) std::cout << "message " << res.message << '\n';

  ordered_json j;
  j["rows"] = res.num_rows;
  j["vars"] = res.num_vars;
  j["added_rows"] = res.added_rows;
  j["added_vars"] = res.added_vars;
  j["status"] = to_string(res.status);
  j["objective_nominal"] = res.objective_nominal;
  j["objective_mb"] = res.objective_mb;
  j["objective_bs"] = res.objective_bs;
  j["por_mb_pct"] = res.por_mb_pct;
  j["por_bs_pct"] = res.por_bs_pct;
  j["mb_cuts"] = res.mb_cut_count;
  j["protect_nominal_pct"] = res.protect_nominal_pct;
  j["protect_mb_pct"] = res.protect_mb_pct;
  j["protect_bs_pct"] = res.protect_bs_pct;
  write_json(json_path, j);
  return status_exit_code(res.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust LP under multi-band uncertainty"};
  app.require_subcommand(1);

  std::string instance_path, out_path, json_path, x_path, solver_spec = "builtin";
  std::string samples_path;
  std::string method = "compact";
  bool elide = false, strict = false, emit_cuts = false;
  double sigma_db = 5.5;
  long realizations = 1000;
  std::uint64_t seed = 1;
  mblp::SolveLimits limits;
  mblp::BandSpec band_spec;
  mblp::PapParams pap_params;

  auto* ref = app.add_subcommand("reformulate", "Write the compact robust counterpart");
  ref->add_option("instance", instance_path)->required();
  ref->add_option("-o,--out", out_path, "counterpart + [varmap] output file");
  ref->add_option("--json", json_path, "machine-readable output file");
  ref->add_flag("--elide-trivial-rows", elide);
  ref->add_flag("--strict-equalities", strict);

  auto* solve = app.add_subcommand("solve", "Solve the robust counterpart");
  solve->add_option("instance", instance_path)->required();
  solve->add_option("--method", method, "compact|cuts")->check(CLI::IsMember({"compact", "cuts"}));
  solve->add_option("--solver", solver_spec, "builtin|exec:<path>");
  solve->add_option("--tol", limits.tol);
  solve->add_option("--max-iter", limits.max_iterations);
  solve->add_option("--time-limit", limits.time_limit, "seconds");
  solve->add_option("--json", json_path, "machine-readable output file");
  solve->add_option("--x-out", x_path, "write the robust solution vector");

  auto* sep = app.add_subcommand("separate", "Check robustness of a point and print certificates");
  sep->add_option("instance", instance_path)->required();
  sep->add_option("--x", x_path, "solution vector file")->required();
  sep->add_option("--tol", limits.tol);
  sep->add_flag("--emit-cuts", emit_cuts, "print violated rows' cuts in instance-file row syntax");
  sep->add_option("--json", json_path);

  auto* gen = app.add_subcommand("generate", "Generate a synthetic power assignment instance");
  gen->add_option("--tx", pap_params.num_tx);
  gen->add_option("--users", pap_params.num_users);
  gen->add_option("--area", pap_params.area);
  gen->add_option("--degree", pap_params.target_degree, "average transmitters heard per user");
  gen->add_option("--seed", pap_params.seed);
  gen->add_option("--pmax", pap_params.pmax);
  gen->add_option("--threshold", pap_params.threshold);
  gen->add_option("--margin", pap_params.margin);
  gen->add_option("-o,--out", out_path, "instance output file");
  gen->add_option("--json", json_path);

  auto* cal = app.add_subcommand("calibrate", "Attach a calibrated multi-band set to an instance");
  cal->add_option("instance", instance_path)->required();
  cal->add_option("--sigma-db", sigma_db, "log-normal std deviation in dB");
  cal->add_option("--samples", samples_path, "empirical relative deviations, one per line");
  cal->add_option("--neg", band_spec.num_neg);
  cal->add_option("--pos", band_spec.num_pos);
  cal->add_option("--width", band_spec.width_frac, "band width as fraction of nominal");
  cal->add_option("--shrink", band_spec.shrink);
  cal->add_option("--stretch", band_spec.stretch);
  cal->add_option("-o,--out", out_path, "calibrated instance output file");
  cal->add_option("--json", json_path);

  auto* eval = app.add_subcommand("evaluate", "Monte Carlo protection of a solution");
  eval->add_option("instance", instance_path)->required();
  eval->add_option("--x", x_path)->required();
  eval->add_option("--sigma-db", sigma_db);
  eval->add_option("--samples", samples_path);
  eval->add_option("--realizations", realizations);
  eval->add_option("--seed", seed);
  eval->add_option("--json", json_path);

  auto* cmp = app.add_subcommand("compare", "Nominal vs multi-band vs budget on one instance");
  cmp->add_option("instance", instance_path)->required();
  cmp->add_option("--sigma-db", sigma_db);
  cmp->add_option("--samples", samples_path);
  cmp->add_option("--realizations", realizations);
  cmp->add_option("--seed", seed);
  cmp->add_option("--solver", solver_spec);
  cmp->add_option("--tol", limits.tol);
  cmp->add_option("--max-iter", limits.max_iterations);
  cmp->add_option("--time-limit", limits.time_limit);
  cmp->add_option("--json", json_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ref->parsed()) return cmd_reformulate(instance_path, out_path, json_path, elide, strict);
    if (solve->parsed()) return cmd_solve(instance_path, method, solver_spec, limits, json_path, x_path);
    if (sep->parsed()) return cmd_separate(instance_path, x_path, limits.tol, emit_cuts, json_path);
    if (gen->parsed()) return cmd_generate(pap_params, out_path, json_path);
    if (cal->parsed())
      return cmd_calibrate(instance_path, sigma_db, samples_path, band_spec, out_path, json_path);
    if (eval->parsed())
      return cmd_evaluate(instance_path, x_path, sigma_db, samples_path, realizations, seed, json_path);
    if (cmp->parsed())
      return cmd_compare(instance_path, sigma_db, samples_path, realizations, seed, solver_spec,
                         limits, json_path);
  } catch (const mblp::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInput;
}
