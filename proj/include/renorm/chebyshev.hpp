#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace renorm {

using Complex = std::complex<double>;
using RealFn = std::function<double(double)>;
using ComplexFn = std::function<Complex(Complex)>;

// Truncated Chebyshev series sum_k c_k T_k(x) on [-1,1].
class ChebSeries {
 public:
  ChebSeries() = default;
  explicit ChebSeries(std::vector<double> coeffs);

  // Interpolates f at the degree+1 Chebyshev-Lobatto points cos(pi j / degree).
  // Throws DomainError when a sample is not finite.
  static ChebSeries interpolate(const RealFn& f, int degree);
  static ChebSeries from_lobatto_values(std::span<const double> values);

  double operator()(double x) const;
  Complex operator()(Complex z) const;

  ChebSeries derivative() const;
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  std::span<const double> coeffs() const { return c_; }

  // Zero-padded or truncated copy.
  ChebSeries resized(int degree) const;

 private:
  std::vector<double> c_{0.0};
};

namespace cheb {

std::vector<double> lobatto_nodes(int degree);

// n Chebyshev points of the first kind, cos(pi (j + 1/2) / n); never hits +-1.
std::vector<double> first_kind_nodes(int n);

// The fixed grid used for monotonicity and positivity checks.
inline constexpr int kCheckGridSize = 512;
const std::vector<double>& check_grid();

template <class T>
T clenshaw(std::span<const double> c, T x) {
  T b1{0.0}, b2{0.0};
  const T two_x = x + x;
  for (std::size_t k = c.size(); k-- > 1;) {
    const T b0 = c[k] + two_x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c.empty() ? T{0.0} : c[0] + x * b1 - b2;
}

}  // namespace cheb
}  // namespace renorm
