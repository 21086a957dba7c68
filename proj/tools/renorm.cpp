// renorm: command-line surface for cycles, fixed points, alpha sweeps, the
// cascade oracle, bounds reports and the acceptance suite.
//
// Exit codes: 0 success, 1 domain-negative (absent cycle, bad document),
// 2 numeric failure (including failed criteria), 64 usage.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "renorm/acceptance.hpp"
#include "renorm/bounds.hpp"
#include "renorm/errors.hpp"
#include "renorm/oracle.hpp"
#include "renorm/record_io.hpp"
#include "renorm/solver.hpp"
#include "renorm/spectral.hpp"

namespace {

using namespace renorm;

constexpr int kExitDomain = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_config_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--alpha", cfg.alpha, "critical exponent")->capture_default_str();
  cmd->add_option("--period", cfg.period, "period of the combinatorics")->capture_default_str();
  cmd->add_option("--sigma", cfg.sigma_name, "doubling, first, or images such as 2,3,1")->capture_default_str();
  cmd->add_option("--degree", cfg.degree, "Chebyshev degree")->capture_default_str();
  cmd->add_option("--newton-tol", cfg.tol.newton, "Newton residual tolerance")->capture_default_str();
  cmd->add_option("--cycle-tol", cfg.tol.cycle, "cycle tolerance")->capture_default_str();
  cmd->add_option("--fd-step", cfg.tol.fd_step, "finite-difference step")->capture_default_str();
  cmd->add_option("--output-dir", cfg.output_dir, "output directory (default $RENORM_OUTPUT_DIR or .)");
}

void validate(const RunConfig& cfg) {
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

NewtonOptions newton_options(const RunConfig& cfg) {
  NewtonOptions o;
  o.degree = cfg.degree;
  o.coarse_degree = std::min(40, cfg.degree);
  o.confirm_degree = std::max(80, cfg.degree + 20);
  o.tolerance = cfg.tol.newton;
  return o;
}

SpectralOptions spectral_options(const RunConfig& cfg) {
  SpectralOptions o;
  o.fd_step = cfg.tol.fd_step;
  o.degrees = {40, cfg.degree, std::max(80, cfg.degree + 20)};
  if (cfg.degree == 40) o.degrees = {40, 60, 80};
  return o;
}

std::string output_path(const RunConfig& cfg, const std::string& explicit_path, const std::string& name) {
  if (!explicit_path.empty()) return explicit_path;
  std::filesystem::create_directories(cfg.output_dir);
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

std::string alpha_tag(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", alpha);
  return buf;
}

int cmd_find_cycle(const RunConfig& cfg, double t) {
  if (cfg.period < 2) throw UsageError("--period must be at least 2");
  validate(cfg);
  const Pair pair(PolyDiffeo::identity(cfg.degree), QtParams(t, cfg.alpha));
  CycleSearch search;
  if (cfg.sigma_name != "doubling" || cfg.period == 2) search.combinatorics = cfg.sigma();
  const auto cycle = find_cycle(pair, cfg.period, search);
  if (!cycle) {
    std::cout << "no cycle of period " << cfg.period << " at alpha " << cfg.alpha << ", t " << t << "\n";
    return kExitDomain;
  }
  std::printf("p = %.12f\ncombinatorics = %s\n", cycle->p, cycle->combinatorics.to_string().c_str());
  std::printf("%4s %20s %20s %12s\n", "i", "lo", "hi", "orientation");
  for (int i = 1; i <= cycle->period(); ++i) {
    const auto& iv = cycle->at(i);
    std::printf("%4d %20.15f %20.15f %12d\n", i, iv.lo, iv.hi, iv.orientation);
  }
  return 0;
}

int cmd_fixed_point(const RunConfig& cfg, const std::string& out) {
  validate(cfg);
  auto rec = fixed_point(cfg.alpha, cfg.sigma(), std::nullopt, newton_options(cfg));
  rec.spectral = analyze_fixed_point(rec, spectral_options(cfg));
  const auto path = output_path(cfg, out, "fixed_point_alpha" + alpha_tag(cfg.alpha) + ".json");
  write_record(path, rec, cfg);
  std::printf("residual = %.3e\nt_star = %.15f\ndelta = %.10f\nexpanding_count = %d\nrecord = %s\n", rec.residual,
              rec.t_star, rec.spectral->delta, rec.spectral->expanding_count, path.c_str());
  return rec.residual <= cfg.tol.newton ? 0 : kExitNumeric;
}

int cmd_check_record(const std::string& in) {
  const auto rec = read_record(in);
  const double residual = fixed_point_residual(rec.pair(), rec.sigma, rec.degree);
  std::printf("stored residual = %.3e\nrecomputed residual = %.3e\n", rec.residual, residual);
  return residual <= 10.0 * std::max(rec.residual, 1e-14) ? 0 : kExitNumeric;
}

int cmd_sweep_alpha(const RunConfig& cfg, double lo, double hi, double step, const std::string& out) {
  if (!(step > 0.0)) throw UsageError("--step must be positive");
  if (!(hi >= lo)) throw UsageError("--alpha-max must not be below --alpha-min");
  validate(cfg);
  const auto sigma = cfg.sigma();
  const auto newton = newton_options(cfg);
  const auto spectral = spectral_options(cfg);
  auto rec = fixed_point(2.0, sigma, std::nullopt, newton);
  if (lo != 2.0) rec = continue_in_alpha(rec, lo, 0.05, newton);

  std::ostringstream csv;
  csv.precision(17);
  csv << "alpha,t_star,delta,expanding_count,residual\n";
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int k = 0; k < count; ++k) {
    const double alpha = std::round((lo + k * step) * 1e12) / 1e12;
    if (k > 0) rec = continue_in_alpha(rec, alpha, std::min(step, 0.05), newton);
    const auto report = analyze_fixed_point(rec, spectral);
    csv << alpha << ',' << rec.t_star << ',' << report.delta << ',' << report.expanding_count << ',' << rec.residual
        << '\n';
  }
  std::cout << csv.str();
  if (!out.empty()) std::ofstream(out) << csv.str();
  return 0;
}

int cmd_oracle(double alpha, int levels, const std::string& out) {
  if (levels < 6) throw UsageError("--levels must be at least 6");
  if (!(alpha > 1.0)) throw UsageError("--alpha must exceed 1");
  const auto cascade = oracle::cascade_delta(alpha, levels);
  std::ostringstream csv;
  oracle::write_cascade_csv(csv, cascade);
  std::cout << csv.str();
  if (!out.empty()) std::ofstream(out) << csv.str();
  std::fprintf(stderr, "delta_hat = %.10f\n", cascade.delta);
  return cascade.complete ? 0 : kExitNumeric;
}

int cmd_bounds(const RunConfig& cfg, int depth, const std::string& out) {
  if (depth < 5) throw UsageError("--depth must be at least 5");
  validate(cfg);
  auto rec = fixed_point(cfg.alpha, cfg.sigma(), std::nullopt, newton_options(cfg));
  const auto orbit = nested_orbit(rec.pair(), cfg.sigma(), depth);
  const auto ratios = real_bounds_report(orbit.cycles);
  const auto decay = decomposition_decay(orbit, 2, depth - 1);
  std::ostringstream csv;
  write_bounds_csv(csv, cfg.alpha, ratios, decay);
  std::cout << csv.str();
  if (!out.empty()) std::ofstream(out) << csv.str();
  std::fprintf(stderr, "b = %.6f, slope of log S_phi = %.4f\n", ratios.b, decay.phi_slope);
  return 0;
}

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& criteria, const std::string& out, bool quiet) {
  validate(cfg);
  std::set<int> ids;
  try {
    ids = parse_criteria(criteria);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const auto results = run_acceptance(cfg, ids, quiet ? nullptr : &std::cerr);
  const auto report = format_report(results);
  std::cout << report;
  if (!out.empty()) std::ofstream(out) << report;
  return all_passed(results) ? 0 : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decomposed renormalization laboratory"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.output_dir = default_output_dir();

  double t = 0.9;
  auto* find = app.add_subcommand("find-cycle", "cycle of phi = id at parameter t");
  add_config_options(find, cfg);
  find->add_option("--t", t, "parameter t")->required();

  std::string out, in;
  auto* fixed = app.add_subcommand("fixed-point", "solve for the fixed point and write its record");
  add_config_options(fixed, cfg);
  fixed->add_option("--output", out, "record path (default <output-dir>/fixed_point_alpha<alpha>.json)");

  auto* check = app.add_subcommand("check-record", "re-measure the residual of a stored record");
  check->add_option("--input", in, "record path")->required();

  double lo = 2.0, hi = 2.0, step = 0.05;
  auto* sweep = app.add_subcommand("sweep-alpha", "t*, delta and expanding count along an alpha grid");
  add_config_options(sweep, cfg);
  sweep->add_option("--alpha-min", lo)->capture_default_str();
  sweep->add_option("--alpha-max", hi)->capture_default_str();
  sweep->add_option("--step", step)->capture_default_str();
  sweep->add_option("--output", out, "also write the CSV here");

  int levels = 9;
  auto* orc = app.add_subcommand("oracle", "superstable cascade table and delta estimate");
  add_config_options(orc, cfg);
  orc->add_option("--levels", levels)->capture_default_str();
  orc->add_option("--output", out, "also write the CSV here");

  int depth = 9;
  auto* bounds = app.add_subcommand("bounds", "real-bounds ratios and decay sums on the fixed point");
  add_config_options(bounds, cfg);
  bounds->add_option("--depth", depth, "number of nested cycles")->capture_default_str();
  bounds->add_option("--output", out, "also write the CSV here");

  std::vector<std::string> criteria;
  bool quiet = false;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  add_config_options(verify, cfg);
  verify->add_option("--criteria", criteria, "criterion ids or names (default: all)");
  verify->add_option("--report", out, "also write the report here");
  verify->add_flag("--quiet", quiet, "no progress lines on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*find) return cmd_find_cycle(cfg, t);
    if (*fixed) return cmd_fixed_point(cfg, out);
    if (*check) return cmd_check_record(in);
    if (*sweep) return cmd_sweep_alpha(cfg, lo, hi, step, out);
    if (*orc) return cmd_oracle(cfg.alpha, levels, out);
    if (*bounds) return cmd_bounds(cfg, depth, out);
    if (*verify) return cmd_verify(cfg, criteria, out, quiet);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SchemaError& e) {
    std::cerr << e.what() << "\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
