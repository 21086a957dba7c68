#include "renorm/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "renorm/bounds.hpp"
#include "renorm/errors.hpp"
#include "renorm/oracle.hpp"
#include "renorm/solver.hpp"
#include "renorm/spectral.hpp"

namespace renorm {

namespace {

constexpr double kDeltaReference = 4.669201;  // cascade_delta(2, 12), rounded

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Intermediate results shared between criteria within one suite run.
class Context {
 public:
  explicit Context(const RunConfig& config) : config_(config) {
    newton_.degree = config.degree;
    newton_.coarse_degree = std::min(40, config.degree);
    newton_.confirm_degree = std::max(80, config.degree + 20);
    newton_.tolerance = config.tol.newton;
    spectral_.fd_step = config.tol.fd_step;
    spectral_.degrees = {40, config.degree, std::max(80, config.degree + 20)};
    if (config.degree == 40) spectral_.degrees = {40, 60, 80};
  }

  const RunConfig& config() const { return config_; }
  const NewtonOptions& newton() const { return newton_; }
  const SpectralOptions& spectral_options() const { return spectral_; }
  UnimodalPermutation sigma() const { return UnimodalPermutation::doubling(); }

  const oracle::Cascade& cascade12() {
    if (!cascade12_) cascade12_ = oracle::cascade_delta(2.0, 12);
    return *cascade12_;
  }

  const FixedPointRecord& fixed_point2() {
    if (!fixed_) {
      auto rec = fixed_point(2.0, sigma(), std::nullopt, newton_);
      rec.spectral = analyze_fixed_point(rec, spectral_);
      fixed_ = std::move(rec);
    }
    return *fixed_;
  }

  // Continuation from alpha = 2 in steps of 0.05 up to 2.4 and down to 1.6.
  const std::map<int, FixedPointRecord>& sweep() {
    if (!sweep_) {
      std::map<int, FixedPointRecord> out;
      out.emplace(40, fixed_point2());
      for (int dir : {1, -1}) {
        FixedPointRecord prev = fixed_point2();
        for (int k = 1; k <= 8; ++k) {
          const int key = 40 + dir * k;
          prev = continue_in_alpha(prev, key * 0.05, 0.05, newton_);
          out.emplace(key, prev);
        }
      }
      sweep_ = std::move(out);
    }
    return *sweep_;
  }

  struct Universality {
    std::vector<std::string> labels;
    std::vector<OrbitReport> orbits;
  };
  const Universality& universality() {
    if (!universality_) {
      const auto& rec = fixed_point2();
      Universality u;
      const double c = 0.05 / (2.0 / (3.0 * std::sqrt(3.0)));  // sup |x^3 - x| on [-1,1] is 2/(3 sqrt 3)
      const PolyDiffeo perturbed(fit_from_samples([c](double x) { return x + c * (x * x * x - x); }, rec.degree));
      for (const auto& [label, phi] : {std::pair{std::string("identity"), PolyDiffeo::identity(rec.degree)},
                                       std::pair{std::string("cubic"), perturbed}}) {
        const double t = stable_manifold_t(phi, rec, 12);
        u.labels.push_back(label);
        u.orbits.push_back(iterate_orbit(Pair(phi, QtParams(t, 2.0)), sigma(), 10, rec, rec.degree));
      }
      universality_ = std::move(u);
    }
    return *universality_;
  }

  const NestedOrbit& nested() {
    if (!nested_) nested_ = nested_orbit(fixed_point2().pair(), sigma(), 9);
    return *nested_;
  }

 private:
  RunConfig config_;
  NewtonOptions newton_;
  SpectralOptions spectral_;
  std::optional<oracle::Cascade> cascade12_;
  std::optional<FixedPointRecord> fixed_;
  std::optional<std::map<int, FixedPointRecord>> sweep_;
  std::optional<Universality> universality_;
  std::optional<NestedOrbit> nested_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

using Check = std::function<CriterionResult(Context&)>;

CriterionResult oracle_delta(Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c9 = oracle::cascade_delta(2.0, 9);
  const double elapsed = seconds_since(t0);
  const auto& c12 = ctx.cascade12();
  const double err = std::abs(c9.delta - kDeltaReference);
  const bool ok = c9.complete && c12.complete && err < 1e-3 && std::abs(c12.delta - kDeltaReference) < 1e-5 &&
                  elapsed < 30.0;
  return {1, "", ok,
          fmt("delta(levels 9) = %.9f, delta(levels 12) = %.9f, |delta9 - 4.669201| = %.2e, runtime %s 30 s",
              c9.delta, c12.delta, err, elapsed < 30.0 ? "under" : "OVER")};
}

CriterionResult operator_delta(Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& rec = ctx.fixed_point2();
  const double elapsed = seconds_since(t0);
  const double oracle_delta = ctx.cascade12().delta;
  const double rel = std::abs(rec.spectral->delta - oracle_delta) / oracle_delta;
  const bool ok = rec.spectral->delta_real_simple && rel < 1e-3 && elapsed < 120.0;
  return {2, "", ok,
          fmt("operator delta = %.10f, oracle delta = %.10f, relative difference %.2e, runtime %s 2 min",
              rec.spectral->delta, oracle_delta, rel, elapsed < 120.0 ? "under" : "OVER")};
}

CriterionResult codimension_one(Context& ctx) {
  const auto& sweep = ctx.sweep();
  bool ok = true;
  std::string detail;
  for (int key : {36, 38, 40, 42, 44}) {
    const auto& base = sweep.at(key);
    const auto report = base.spectral ? *base.spectral : analyze_fixed_point(base, ctx.spectral_options());
    bool leading_stable = report.eigenvalues.size() >= 5;
    for (std::size_t i = 0; i < 5 && i < report.stable_flags.size(); ++i) leading_stable &= report.stable_flags[i];
    bool expanding_stable = true;
    for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
      if (std::abs(report.eigenvalues[i]) > 1.0 && !report.stable_flags[i]) expanding_stable = false;
    }
    const bool here = report.expanding_count == 1 && leading_stable && expanding_stable;
    ok &= here;
    detail += fmt("%salpha %.2f: expanding %d, delta %.6f%s", detail.empty() ? "" : "; ", key * 0.05,
                  report.expanding_count, report.delta, here ? "" : " (unstable across degrees)");
  }
  return {3, "", ok, detail};
}

CriterionResult residual_sweep(Context& ctx) {
  const auto& sweep = ctx.sweep();
  double worst = 0.0;
  double max_jump = 0.0;
  const FixedPointRecord* prev = nullptr;
  for (const auto& [key, rec] : sweep) {
    worst = std::max(worst, rec.residual);
    if (prev) max_jump = std::max(max_jump, std::abs(rec.t_star - prev->t_star));
    prev = &rec;
  }
  const bool ok = sweep.size() == 17 && worst <= 1e-10 && max_jump < 0.05;
  return {4, "", ok,
          fmt("%zu stops on [1.60, 2.40]: max residual %.2e, max |dt*| per step %.4f, t*(1.6) = %.9f, "
              "t*(2.4) = %.9f",
              sweep.size(), worst, max_jump, sweep.begin()->second.t_star, sweep.rbegin()->second.t_star)};
}

std::vector<Pair> conjugacy_pairs(const FixedPointRecord& rec) {
  std::vector<Pair> pairs;
  for (double t : {0.8, 0.85, 0.9}) pairs.emplace_back(PolyDiffeo::identity(), QtParams(t, 2.0));
  const double c = 0.05 / (2.0 / (3.0 * std::sqrt(3.0)));
  pairs.emplace_back(PolyDiffeo(fit_from_samples([c](double x) { return x + c * (x * x * x - x); }, rec.degree)),
                     QtParams(0.9, 2.0));
  pairs.emplace_back(PolyDiffeo(fit_from_samples([](double x) { return x + 0.1 * (x * x - 1.0); }, rec.degree)),
                     QtParams(0.87, 2.0));
  return pairs;
}

CriterionResult conjugacy(Context& ctx) {
  const auto& rec = ctx.fixed_point2();
  RenormOptions ro;
  ro.degree = rec.degree;
  double worst = 0.0;
  for (const auto& pair : conjugacy_pairs(rec)) {
    const auto lhs = compose_L(renormalize(pair, ctx.sigma(), ro).pair);
    const auto rhs = classic_renormalize(compose_L(pair), ctx.sigma());
    worst = std::max(worst, sup_distance(lhs.value, rhs.value));
  }
  return {5, "", worst < 1e-9, fmt("5 pairs at alpha 2: max |L(R~ f) - R(L f)| = %.2e", worst)};
}

CriterionResult spectrum_equality(Context& ctx) {
  const auto cmp = spectrum_equality_check(ctx.fixed_point2(), 5, ctx.spectral_options());
  std::string values;
  for (std::size_t i = 0; i < cmp.pair_side.size(); ++i) {
    values += fmt("%s%.9f", i ? ", " : "", cmp.pair_side[i].real());
  }
  return {6, "", cmp.passed(1e-5),
          fmt("top %zu: [%s]; max relative difference %.2e; multiplicities %s", cmp.pair_side.size(), values.c_str(),
              cmp.max_relative_difference, cmp.multiplicities_equal ? "equal" : "DIFFER")};
}

CriterionResult superstable(Context&) {
  const double t = find_superstable_t(PolyDiffeo::identity(), 2.0, 2, 0.51, 0.85);
  const double exact = (1.0 + std::sqrt(5.0)) / 4.0;
  const double err = std::abs(t - exact);
  return {7, "", err <= 1e-12, fmt("t = %.16f, (1 + sqrt 5)/4 = %.16f, difference %.1e", t, exact, err)};
}

CriterionResult universality(Context& ctx) {
  const auto& rec = ctx.fixed_point2();
  const auto stable = rec.spectral->stable_eigenvalues();
  const double lambda2 = stable.size() >= 2 ? std::abs(stable[1]) : 0.0;
  const auto& u = ctx.universality();
  bool ok = lambda2 > 0.0;
  std::string detail = fmt("|lambda2| = %.6f", lambda2);
  for (std::size_t i = 0; i < u.orbits.size(); ++i) {
    const auto& orbit = u.orbits[i];
    if (!orbit.complete || orbit.points.size() < 11) {
      ok = false;
      detail += "; " + u.labels[i] + ": orbit lost renormalizability";
      continue;
    }
    const double d8 = orbit.points[8].distance();
    const double factor = orbit.contraction_factor(3, 10);
    const double rel = std::abs(factor - lambda2) / lambda2;
    ok &= d8 < 1e-6 && rel < 0.1;
    detail += fmt("; %s: t0 = %.12f, distance at 8 = %.2e, contraction %.4f (%.1f%% off)", u.labels[i].c_str(),
                  orbit.pairs[0].t(), d8, factor, 100.0 * rel);
  }
  return {8, "", ok, detail};
}

CriterionResult real_bounds(Context& ctx) {
  const auto report = real_bounds_report(ctx.nested().cycles);
  double lo = 1.0, hi = 0.0;
  for (int n = 3; n <= 8; ++n) {
    const auto& l = report.level(n);
    for (double r : l.child) lo = std::min(lo, r), hi = std::max(hi, r);
    for (double r : l.gap) lo = std::min(lo, r), hi = std::max(hi, r);
  }
  return {9, "", report.within(0.05, 0.95, 3, 8),
          fmt("levels 3..8: ratios in [%.6f, %.6f], central scaling %.9f", lo, hi, report.level(8).central_ratio)};
}

CriterionResult decomposition_decay_check(Context& ctx) {
  const auto report = decomposition_decay(ctx.nested(), 2, 8, 0.05);
  const bool ok = report.phi_slope < 0.0 && report.q_strictly_decreasing(6);
  std::string qs;
  const auto& q6 = report.level(6).q_stadium;
  for (std::size_t k = 1; k < q6.size(); ++k) qs += fmt("%s%.3e", k > 1 ? ", " : "", q6[k]);
  return {10, "", ok,
          fmt("slope of log S_phi over n = 2..8: %.4f; S_q(6, k), k = 1..6: [%s]", report.phi_slope, qs.c_str())};
}

CriterionResult univalence(Context& ctx) {
  const auto& u = ctx.universality();
  const Stadium stadium(OrientedInterval(-1.0, 1.0), 0.1);
  bool ok = true;
  int checked = 0;
  for (std::size_t i = 0; i < u.orbits.size(); ++i) {
    for (int n = 1; n <= 6; ++n) {
      if (n >= static_cast<int>(u.orbits[i].pairs.size())) {
        ok = false;
        continue;
      }
      ok &= univalence_check(u.orbits[i].pairs[n].phi, stadium);
      ++checked;
    }
  }
  return {11, "", ok && checked == 12, fmt("%d diffeomorphic parts screened on the radius-0.1 stadium", checked)};
}

CriterionResult injectivity(Context&) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> coef(-0.1, 0.1);
  std::uniform_real_distribution<double> tdist(0.6, 1.0);
  std::uniform_real_distribution<double> log_step(std::log(2e-4), std::log(1e-2));
  auto make_phi = [](double a, double b) {
    return PolyDiffeo(fit_from_samples([a, b](double x) { return x + a * (x * x - 1.0) + b * (x * x * x - x); }, 8));
  };
  double min_dev = std::numeric_limits<double>::infinity();
  int tested = 0;
  while (tested < 100) {
    const double a1 = coef(rng), b1 = coef(rng), t1 = tdist(rng);
    double a2, b2, t2;
    if (tested % 2 == 0) {  // independent pairs
      a2 = coef(rng), b2 = coef(rng), t2 = tdist(rng);
    } else {  // nearby pairs
      const double h = std::exp(log_step(rng));
      a2 = a1 + h * coef(rng) * 10.0, b2 = b1 + h * coef(rng) * 10.0;
      t2 = std::clamp(t1 + h * coef(rng) * 10.0, 0.0, 1.0);
    }
    const Pair p(make_phi(a1, b1), QtParams(t1, 2.0));
    const Pair q(make_phi(a2, b2), QtParams(t2, 2.0));
    const double component = std::max(sup_distance(p.phi.as_fn(), q.phi.as_fn()), std::abs(t1 - t2));
    if (!(component > 1e-4)) continue;
    min_dev = std::min(min_dev, injectivity_probe(p, q));
    ++tested;
  }
  return {12, "", min_dev > 1e-8, fmt("%d pairs with component distance > 1e-4: min L-deviation %.3e", tested, min_dev)};
}

const std::vector<std::pair<CriterionInfo, Check>>& checks() {
  static const std::vector<std::pair<CriterionInfo, Check>> table = {
      {{1, "oracle-delta"}, oracle_delta},
      {{2, "operator-delta"}, operator_delta},
      {{3, "codimension-one"}, codimension_one},
      {{4, "residual-sweep"}, residual_sweep},
      {{5, "conjugacy"}, conjugacy},
      {{6, "spectrum-equality"}, spectrum_equality},
      {{7, "superstable"}, superstable},
      {{8, "universality"}, universality},
      {{9, "real-bounds"}, real_bounds},
      {{10, "decomposition-decay"}, decomposition_decay_check},
      {{11, "univalence"}, univalence},
      {{12, "injectivity"}, injectivity},
  };
  return table;
}

CriterionResult run_one(const std::pair<CriterionInfo, Check>& entry, Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = entry.second(ctx);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.id = entry.first.id;
  r.name = entry.first.name;
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<CriterionResult> run_checks(const RunConfig& config, const std::set<int>& ids, std::ostream* log) {
  Context ctx(config);
  std::vector<CriterionResult> out;
  for (const auto& entry : checks()) {
    if (!ids.count(entry.first.id)) continue;
    out.push_back(run_one(entry, ctx));
    if (log) {
      *log << "  [" << entry.first.id << "] " << entry.first.name << " done in " << fmt("%.1f", out.back().seconds)
           << " s\n";
      log->flush();
    }
  }
  return out;
}

}  // namespace

const std::vector<CriterionInfo>& acceptance_criteria() {
  static const std::vector<CriterionInfo> all = [] {
    std::vector<CriterionInfo> v;
    for (const auto& e : checks()) v.push_back(e.first);
    v.push_back({13, "determinism"});
    return v;
  }();
  return all;
}

std::set<int> parse_criteria(const std::vector<std::string>& selectors) {
  std::set<int> out;
  for (const auto& s : selectors) {
    bool found = false;
    for (const auto& c : acceptance_criteria()) {
      if (s == c.name || s == std::to_string(c.id)) {
        out.insert(c.id);
        found = true;
      }
    }
    if (!found) throw DomainError("unknown criterion '" + s + "'");
  }
  return out;
}

std::vector<CriterionResult> run_acceptance(const RunConfig& config, const std::set<int>& selected, std::ostream* log) {
  std::set<int> ids = selected;
  if (ids.empty()) {
    for (const auto& c : acceptance_criteria()) ids.insert(c.id);
  }
  std::set<int> base(ids.begin(), ids.end());
  base.erase(13);
  auto results = run_checks(config, base, log);

  if (ids.count(13)) {
    const auto t0 = std::chrono::steady_clock::now();
    // Two fresh runs of the other criteria (all of them when none is selected).
    std::set<int> others = base;
    if (others.empty()) {
      for (int i = 1; i <= 12; ++i) others.insert(i);
    }
    const auto first = base.empty() ? run_checks(config, others, nullptr) : results;
    const auto second = run_checks(config, others, nullptr);
    const bool same = format_report(first) == format_report(second);
    CriterionResult r;
    r.id = 13;
    r.name = "determinism";
    r.passed = same;
    r.detail = fmt("repeated run of %zu criteria: reports %s", others.size(), same ? "byte-identical" : "DIFFER");
    r.seconds = seconds_since(t0);
    if (log) *log << "  [13] determinism done in " << fmt("%.1f", r.seconds) << " s\n";
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_report(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    os << (r.passed ? "PASS" : "FAIL") << ' ' << fmt("%2d", r.id) << ' ' << r.name << ": " << r.detail << '\n';
  }
  return os.str();
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return !results.empty();
}

}  // namespace renorm
