#include "renorm/chebyshev.hpp"

#include <cmath>
#include <numbers>

#include "renorm/errors.hpp"

namespace renorm {

ChebSeries::ChebSeries(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.push_back(0.0);
}

ChebSeries ChebSeries::from_lobatto_values(std::span<const double> values) {
  const int n = static_cast<int>(values.size()) - 1;
  if (n < 1) return ChebSeries({values.empty() ? 0.0 : values[0]});
  // DCT-I; cos(pi j k / n) only depends on jk mod 2n.
  std::vector<double> table(2 * n);
  for (int m = 0; m < 2 * n; ++m) table[m] = std::cos(std::numbers::pi * m / n);
  std::vector<double> c(n + 1);
  for (int k = 0; k <= n; ++k) {
    double s = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double w = (j == 0 || j == n) ? 0.5 : 1.0;
      s += w * values[j] * table[(static_cast<long>(j) * k) % (2 * n)];
    }
    c[k] = s * 2.0 / n;
  }
  c[0] *= 0.5;
  c[n] *= 0.5;
  return ChebSeries(std::move(c));
}

ChebSeries ChebSeries::interpolate(const RealFn& f, int degree) {
  const auto nodes = cheb::lobatto_nodes(degree);
  std::vector<double> values(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    values[j] = f(nodes[j]);
    if (!std::isfinite(values[j])) {
      throw DomainError("non-finite sample at x = " + std::to_string(nodes[j]));
    }
  }
  return from_lobatto_values(values);
}

double ChebSeries::operator()(double x) const { return cheb::clenshaw(std::span<const double>(c_), x); }

Complex ChebSeries::operator()(Complex z) const { return cheb::clenshaw(std::span<const double>(c_), z); }

ChebSeries ChebSeries::derivative() const {
  const int n = degree();
  if (n == 0) return ChebSeries({0.0});
  std::vector<double> d(n + 1, 0.0);
  // c'_{k-1} = c'_{k+1} + 2 k c_k
  for (int k = n; k >= 1; --k) {
    d[k - 1] = (k + 1 <= n ? d[k + 1] : 0.0) + 2.0 * k * c_[k];
  }
  d[0] *= 0.5;
  d.pop_back();
  return ChebSeries(std::move(d));
}

ChebSeries ChebSeries::resized(int degree) const {
  std::vector<double> c(c_);
  c.resize(degree + 1, 0.0);
  return ChebSeries(std::move(c));
}

namespace cheb {

std::vector<double> lobatto_nodes(int degree) {
  std::vector<double> x(degree + 1);
  for (int j = 0; j <= degree; ++j) {
    // Symmetric form keeps x_j = -x_{n-j} exactly.
    x[j] = std::sin(std::numbers::pi * (degree - 2.0 * j) / (2.0 * degree));
  }
  return x;
}

std::vector<double> first_kind_nodes(int n) {
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) x[j] = std::sin(std::numbers::pi * (n - 1 - 2.0 * j) / (2.0 * n));
  return x;
}

const std::vector<double>& check_grid() {
  static const std::vector<double> grid = first_kind_nodes(kCheckGridSize);
  return grid;
}

}  // namespace cheb
}  // namespace renorm
