#include "renorm/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "renorm/errors.hpp"

namespace renorm {

namespace {

bool by_modulus(const std::complex<double>& a, const std::complex<double>& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw NumericError("eigen-decomposition failed");
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), by_modulus);
  return ev;
}

void fill_summary(SpectralReport& report) {
  const auto stable = report.stable_eigenvalues();
  report.expanding_count = 0;
  for (const auto& z : stable) {
    if (std::abs(z) > 1.0) ++report.expanding_count;
  }
  report.delta = stable.empty() ? 0.0 : stable.front().real();
  report.delta_real_simple = false;
  if (!stable.empty()) {
    const auto top = stable.front();
    const bool real = std::abs(top.imag()) <= 1e-9 * std::abs(top);
    const bool simple = stable.size() < 2 || std::abs(stable[1]) < std::abs(top) * (1.0 - 1e-6);
    report.delta_real_simple = real && top.real() > 0.0 && simple;
  }
}

FixedPointRecord at_degree(const FixedPointRecord& record, int degree) {
  if (degree == record.degree) return record;
  NewtonOptions opt;
  opt.degree = degree;
  opt.confirm_degree = std::max(degree, opt.confirm_degree);
  return fixed_point(record.alpha, record.sigma, record.pair(), opt);
}

std::vector<std::complex<double>> top_nonzero(const std::vector<std::complex<double>>& stable, int count) {
  std::vector<std::complex<double>> out;
  for (const auto& z : stable) {
    if (static_cast<int>(out.size()) == count) break;
    if (std::abs(z) > 1e-10) out.push_back(z);
  }
  return out;
}

int multiplicity(const std::vector<std::complex<double>>& all, std::complex<double> z, double tol) {
  int m = 0;
  for (const auto& w : all) {
    if (std::abs(w - z) <= tol * std::abs(z)) ++m;
  }
  return m;
}

// Coefficients of a column image past its last entry above tol * (column max)
// are rounding noise; they are zeroed so that left eigenvectors, which weight
// high modes heavily, do not amplify them.
constexpr double kChopTol = 1e-14;

Eigen::MatrixXd chop_columns(Eigen::MatrixXd m, Eigen::Index coefficient_rows) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    auto col = m.col(j).head(coefficient_rows);
    const double top = col.cwiseAbs().maxCoeff();
    Eigen::Index last = -1;
    for (Eigen::Index i = 0; i < coefficient_rows; ++i) {
      if (std::abs(col(i)) > kChopTol * top) last = i;
    }
    for (Eigen::Index i = last + 1; i < coefficient_rows; ++i) col(i) = 0.0;
  }
  return m;
}

}  // namespace

std::vector<std::complex<double>> SpectralReport::stable_eigenvalues() const {
  std::vector<std::complex<double>> out;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (i < stable_flags.size() && stable_flags[i]) out.push_back(eigenvalues[i]);
  }
  return out;
}

Eigen::MatrixXd jacobian_matrix(const FixedPointRecord& record, double fd_step) {
  const Eigen::VectorXd u = pack_pair(record.pair());
  double h = fd_step;
  for (int attempt = 0; attempt <= 4; ++attempt, h *= 0.5) {
    try {
      return packed_jacobian(u, record.alpha, record.sigma, record.degree, h);
    } catch (const DomainError&) {
    }
  }
  throw NumericError("jacobian: perturbed pairs lose the cycle even at step " + std::to_string(h));
}

Eigen::MatrixXd tangent_jacobian(const FixedPointRecord& record) {
  try {
    const auto jac = packed_tangent_jacobian(pack_pair(record.pair()), record.alpha, record.sigma, record.degree);
    return chop_columns(jac, jac.rows() - 1);
  } catch (const DomainError& e) {
    throw NumericError(std::string("tangent jacobian: ") + e.what());
  }
}

Eigen::MatrixXd linearization(const FixedPointRecord& record, const SpectralOptions& options) {
  return options.exact_tangent ? tangent_jacobian(record) : jacobian_matrix(record, options.fd_step);
}

SpectralReport spectrum(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) throw DomainError("spectrum: matrix is not square");
  if (!matrix.allFinite()) throw DomainError("spectrum: matrix has non-finite entries");
  SpectralReport report;
  report.eigenvalues = sorted_eigenvalues(matrix);
  report.stable_flags.assign(report.eigenvalues.size(), true);
  report.degree = static_cast<int>(matrix.rows());
  fill_summary(report);
  return report;
}

std::vector<bool> truncation_stable(const std::vector<std::complex<double>>& base,
                                    const std::vector<std::vector<std::complex<double>>>& others, double rel_tol) {
  std::vector<bool> flags(base.size(), true);
  for (const auto& other : others) {
    std::vector<bool> used(other.size(), false);
    for (std::size_t i = 0; i < base.size(); ++i) {
      std::optional<std::size_t> best;
      double best_d = 0.0;
      for (std::size_t j = 0; j < other.size(); ++j) {
        if (used[j]) continue;
        const double d = std::abs(other[j] - base[i]);
        if (d <= rel_tol * std::abs(base[i]) && (!best || d < best_d)) {
          best = j;
          best_d = d;
        }
      }
      if (best) {
        used[*best] = true;
      } else {
        flags[i] = false;
      }
    }
  }
  return flags;
}

SpectralReport analyze_fixed_point(const FixedPointRecord& record, const SpectralOptions& options) {
  SpectralReport report = spectrum(linearization(record, options));
  report.fd_step = options.fd_step;
  report.degree = record.degree;
  std::vector<std::vector<std::complex<double>>> others;
  for (int d : options.degrees) {
    if (d == record.degree) continue;
    others.push_back(sorted_eigenvalues(linearization(at_degree(record, d), options)));
  }
  report.stable_flags = truncation_stable(report.eigenvalues, others, options.match_tol);
  fill_summary(report);
  return report;
}

std::vector<DeltaPoint> delta_of_alpha(const std::vector<double>& alphas, const UnimodalPermutation& sigma,
                                       const NewtonOptions& newton, const SpectralOptions& options) {
  std::vector<FixedPointRecord> solved{fixed_point(2.0, sigma, std::nullopt, newton)};
  std::vector<DeltaPoint> out;
  for (double a : alphas) {
    const auto nearest = std::min_element(solved.begin(), solved.end(), [a](const auto& x, const auto& y) {
      return std::abs(x.alpha - a) < std::abs(y.alpha - a);
    });
    FixedPointRecord rec;
    try {
      rec = continue_in_alpha(*nearest, a, 0.05, newton);
      const auto report = analyze_fixed_point(rec, options);
      out.push_back({a, report.delta, report.expanding_count, rec.t_star, rec.residual});
    } catch (const std::runtime_error& e) {
      throw NumericError("delta_of_alpha at alpha = " + std::to_string(a) + ": " + e.what());
    }
    solved.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------- classic

ChebSeries classic_series_of_pair(const Pair& pair, int degree) {
  const double t = pair.t();
  return ChebSeries::interpolate([&pair, t](double u) { return pair.phi(t * (1.0 - u) - 1.0); }, degree);
}

UnimodalMap classic_map(const ChebSeries& g_series, int r) {
  const ChebSeries d = g_series.derivative();
  return {[g_series, r](double x) { return g_series(2.0 * std::pow(x, 2 * r) - 1.0); },
          [d, r](double x) { return d(2.0 * std::pow(x, 2 * r) - 1.0) * 4.0 * r * std::pow(x, 2 * r - 1); }};
}

Eigen::VectorXd classic_pack(const ChebSeries& g_series) {
  const auto c = g_series.coeffs();
  Eigen::VectorXd v(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) v(k - 1) = c[k];
  return v;
}

namespace {

ChebSeries classic_complete(const Eigen::VectorXd& v, double value_at_one) {
  std::vector<double> c(v.size() + 1);
  double s = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    c[k + 1] = v(k);
    s += v(k);
  }
  c[0] = value_at_one - s;
  return ChebSeries(std::move(c));
}

}  // namespace

ChebSeries classic_unpack(const Eigen::VectorXd& v) { return classic_complete(v, -1.0); }
ChebSeries classic_unpack_tangent(const Eigen::VectorXd& dv) { return classic_complete(dv, 0.0); }

ChebSeries classic_renormalize_series(const ChebSeries& g_series, int r, const UnimodalPermutation& sigma, int degree) {
  const UnimodalMap g = classic_map(g_series, r);
  CycleSearch search;
  search.combinatorics = sigma;
  const int q = sigma.period();
  auto cycle = find_cycle(g, q, search);
  if (!cycle) throw DomainError("classic map has no cycle with combinatorics " + sigma.to_string());
  const double p = -cycle->p;
  return ChebSeries::interpolate(
      [&](double u) {
        const double z = std::pow(std::max(0.0, 0.5 * (u + 1.0)), 1.0 / (2.0 * r));
        return g.iterate(p * z, q) / p;
      },
      degree);
}

Eigen::MatrixXd classic_jacobian(const ChebSeries& g_series, int r, const UnimodalPermutation& sigma, double fd_step) {
  const Eigen::VectorXd v = classic_pack(g_series);
  const int degree = g_series.degree();
  const auto n = v.size();
  Eigen::MatrixXd jac(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = fd_step * std::max(1.0, std::abs(v(j)));
    Eigen::VectorXd vp = v, vm = v;
    vp(j) += h;
    vm(j) -= h;
    jac.col(j) = (classic_pack(classic_renormalize_series(classic_unpack(vp), r, sigma, degree)) -
                  classic_pack(classic_renormalize_series(classic_unpack(vm), r, sigma, degree))) /
                 (2.0 * h);
  }
  return jac;
}

Eigen::MatrixXd classic_tangent_jacobian(const ChebSeries& g_series, int r, const UnimodalPermutation& sigma) {
  const UnimodalMap g = classic_map(g_series, r);
  CycleSearch search;
  search.combinatorics = sigma;
  const int q = sigma.period();
  auto cycle = find_cycle(g, q, search);
  if (!cycle) throw NumericError("classic map has no cycle with combinatorics " + sigma.to_string());
  const double p = -cycle->p;  // g^q(p) = -p
  const int degree = g_series.degree();
  const auto n = static_cast<Eigen::Index>(degree);
  const auto nodes = cheb::lobatto_nodes(degree);

  // Per node: z, g^q(p z), (g^q)'(p z) do not depend on the direction.
  Eigen::MatrixXd jac(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(j) = 1.0;
    const ChebSeries w = classic_unpack_tangent(e);
    auto delta = [&](double x) { return w(2.0 * std::pow(x, 2 * r) - 1.0); };
    // Tangent of g^q along the orbit of z0 with initial displacement dz.
    auto propagate = [&](double z0, double dz, double& value, double& deriv) {
      double z = z0, d = 1.0, tan = dz;
      for (int i = 0; i < q; ++i) {
        const double gd = g.derivative(z);
        tan = delta(z) + gd * tan;
        d *= gd;
        z = g(z);
      }
      value = z;
      deriv = d;
      return tan;
    };
    double vp = 0.0, dpq = 0.0;
    const double tp = propagate(p, 0.0, vp, dpq);
    const double dp = -tp / (dpq + 1.0);
    std::vector<double> values(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double z = std::pow(std::max(0.0, 0.5 * (nodes[k] + 1.0)), 1.0 / (2.0 * r));
      double v = 0.0, d = 0.0;
      const double tan = propagate(p * z, z * dp, v, d);
      values[k] = tan / p - v * dp / (p * p);
    }
    const auto image = ChebSeries::from_lobatto_values(values);
    jac.col(j) = classic_pack(image);
  }
  return chop_columns(jac, jac.rows());
}

Eigen::VectorXcd dL_packed(const Pair& pair, const Eigen::VectorXcd& tangent, int degree) {
  const double t = pair.t();
  auto image = [&](const Eigen::VectorXd& part) {
    const auto n = part.size();
    const ChebSeries omega = unpack_tangent(part);
    const double v = part(n - 1);
    const auto w = ChebSeries::interpolate(
        [&](double u) {
          const double y = t * (1.0 - u) - 1.0;
          return omega(y) + pair.phi.derivative(y) * v * (1.0 - u);
        },
        degree);
    return classic_pack(w);
  };
  const Eigen::VectorXd re = image(tangent.real());
  const Eigen::VectorXd im = image(tangent.imag());
  Eigen::VectorXcd out(re.size());
  for (Eigen::Index i = 0; i < re.size(); ++i) out(i) = {re(i), im(i)};
  return out;
}

SpectrumComparison spectrum_equality_check(const FixedPointRecord& record, int count, const SpectralOptions& options) {
  const int r = even_half_exponent(record.alpha);
  SpectrumComparison cmp;

  // Pair side, keeping the eigenvectors at the record's degree.
  const Eigen::MatrixXd jp = linearization(record, options);
  auto classic_lin = [&](const ChebSeries& g) {
    return options.exact_tangent ? classic_tangent_jacobian(g, r, record.sigma)
                                 : classic_jacobian(g, r, record.sigma, options.fd_step);
  };
  Eigen::EigenSolver<Eigen::MatrixXd> esp(jp, true);
  if (esp.info() != Eigen::Success) throw NumericError("eigen-decomposition failed (pair side)");

  std::vector<std::vector<std::complex<double>>> pair_others, classic_others;
  Eigen::MatrixXd jc;
  for (int d : options.degrees) {
    const auto rec_d = at_degree(record, d);
    const Eigen::MatrixXd jcd = classic_lin(classic_series_of_pair(rec_d.pair(), d));
    if (d == record.degree) {
      jc = jcd;
    } else {
      pair_others.push_back(sorted_eigenvalues(linearization(rec_d, options)));
      classic_others.push_back(sorted_eigenvalues(jcd));
    }
  }
  if (jc.size() == 0) {
    jc = classic_lin(classic_series_of_pair(record.pair(), record.degree));
  }

  const auto pair_all = sorted_eigenvalues(jp);
  const auto classic_all = sorted_eigenvalues(jc);
  const auto pair_flags = truncation_stable(pair_all, pair_others, options.match_tol);
  const auto classic_flags = truncation_stable(classic_all, classic_others, options.match_tol);
  std::vector<std::complex<double>> pair_stable, classic_stable;
  for (std::size_t i = 0; i < pair_all.size(); ++i) {
    if (pair_flags[i]) pair_stable.push_back(pair_all[i]);
  }
  for (std::size_t i = 0; i < classic_all.size(); ++i) {
    if (classic_flags[i]) classic_stable.push_back(classic_all[i]);
  }
  cmp.pair_side = top_nonzero(pair_stable, count);
  cmp.classic_side = top_nonzero(classic_stable, count);

  cmp.multiplicities_equal = cmp.pair_side.size() == cmp.classic_side.size();
  const std::size_t m = std::min(cmp.pair_side.size(), cmp.classic_side.size());
  for (std::size_t i = 0; i < m; ++i) {
    const double rel = std::abs(cmp.pair_side[i] - cmp.classic_side[i]) / std::abs(cmp.pair_side[i]);
    cmp.max_relative_difference = std::max(cmp.max_relative_difference, rel);
    if (i == 0) cmp.dominant_relative_difference = rel;
    cmp.pair_multiplicity.push_back(multiplicity(pair_stable, cmp.pair_side[i], options.match_tol));
    cmp.classic_multiplicity.push_back(multiplicity(classic_stable, cmp.classic_side[i], options.match_tol));
    if (cmp.pair_multiplicity.back() != cmp.classic_multiplicity.back()) cmp.multiplicities_equal = false;
  }

  // DR_{L(pair)} (DL v) = lambda DL v for the top eigenpair.
  Eigen::Index top = 0;
  for (Eigen::Index i = 1; i < esp.eigenvalues().size(); ++i) {
    if (std::abs(esp.eigenvalues()(i)) > std::abs(esp.eigenvalues()(top))) top = i;
  }
  const std::complex<double> lambda = esp.eigenvalues()(top);
  const Eigen::VectorXcd w = dL_packed(record.pair(), esp.eigenvectors().col(top), record.degree);
  const Eigen::VectorXcd lhs = jc.cast<std::complex<double>>() * w;
  cmp.conjugation_residual = (lhs - lambda * w).norm() / (std::abs(lambda) * w.norm());
  return cmp;
}

}  // namespace renorm
