#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "renorm/spectral.hpp"

using namespace renorm;
using renorm::test::alpha2_fixed_point;

namespace {

constexpr double kDelta = 4.6692016091;  // cascade oracle, frozen
constexpr double kLambda2 = 0.1596284404;

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("spectrum of small test matrices") {
  const auto id = spectrum(Eigen::MatrixXd::Identity(5, 5));
  REQUIRE(id.eigenvalues.size() == 5);
  for (const auto& e : id.eigenvalues) CHECK(std::abs(e - std::complex<double>(1.0, 0.0)) < 1e-14);

  Eigen::MatrixXd d = Eigen::Vector3d(0.5, 3.0, 0.1).asDiagonal();
  const auto r = spectrum(d);
  REQUIRE(r.eigenvalues.size() == 3);
  CHECK(r.eigenvalues[0].real() == doctest::Approx(3.0));
  CHECK(r.eigenvalues[1].real() == doctest::Approx(0.5));
  CHECK(r.eigenvalues[2].real() == doctest::Approx(0.1));
  CHECK(r.delta == doctest::Approx(3.0));
  CHECK(r.expanding_count == 1);
}

TEST_CASE("truncation stability pairing") {
  using C = std::complex<double>;
  const std::vector<C> base{{4.0, 0.0}, {0.5, 0.0}, {0.01, 0.0}};
  const std::vector<std::vector<C>> others{{{4.0 + 1e-9, 0.0}, {0.5, 0.0}, {0.02, 0.0}},
                                           {{4.0, 0.0}, {0.5 - 1e-8, 0.0}}};
  const auto flags = truncation_stable(base, others, 1e-6);
  CHECK(flags == std::vector<bool>{true, true, false});
}

TEST_CASE("linearization at the alpha 2 fixed point") {
  const auto& rec = alpha2_fixed_point();
  const auto J = tangent_jacobian(rec);
  CHECK(J.rows() == J.cols());
  CHECK(J.rows() == rec.degree);
  CHECK((J * Eigen::VectorXd::Zero(J.cols())).norm() == 0.0);

  const auto s = spectrum(J);
  CHECK(s.eigenvalues[0].imag() == 0.0);
  CHECK(s.eigenvalues[0].real() == doctest::Approx(kDelta).epsilon(1e-9));
  CHECK(std::abs(s.eigenvalues[1]) == doctest::Approx(kLambda2).epsilon(1e-8));
  int expanding = 0;
  for (const auto& e : s.eigenvalues) expanding += std::abs(e) > 1.0;
  CHECK(expanding == 1);
}

TEST_CASE("finite-difference columns agree with the exact tangent") {
  const auto& rec = alpha2_fixed_point();
  const auto exact = tangent_jacobian(rec);
  const auto fd = jacobian_matrix(rec, 1e-6);
  const auto fd_half = jacobian_matrix(rec, 5e-7);
  for (int j : {0, 1, 2, 5, static_cast<int>(exact.cols()) - 1}) {
    const double scale = std::max(1.0, exact.col(j).norm());
    CHECK((fd.col(j) - exact.col(j)).norm() / scale < 1e-5);
    CHECK((fd_half.col(j) - exact.col(j)).norm() / scale < 1e-5);
  }
  // Dominant eigenvalue is insensitive to the step.
  const double d1 = spectrum(fd).delta, d2 = spectrum(fd_half).delta;
  CHECK(std::abs(d1 - d2) / d1 < 1e-6);
  CHECK(d1 == doctest::Approx(kDelta).epsilon(1e-6));
}

TEST_CASE("delta_of_alpha determinism") {
  const auto a = delta_of_alpha({2.0, 2.0}, UnimodalPermutation::doubling());
  REQUIRE(a.size() == 2);
  CHECK(a[0].delta == a[1].delta);
  CHECK(a[0].delta == doctest::Approx(kDelta).epsilon(1e-9));
  CHECK(a[0].expanding_count == 1);
}

TEST_CASE("classic side shares the spectrum") {
  const auto& rec = alpha2_fixed_point();
  const auto g = classic_series_of_pair(rec.pair(), rec.degree);
  const auto Jc = classic_tangent_jacobian(g, 1, rec.sigma);
  const auto sc = spectrum(Jc);
  CHECK(sc.eigenvalues[0].real() == doctest::Approx(kDelta).epsilon(1e-6));

  // Pushing the top eigenvector through DL gives an eigenvector of the classic linearization.
  Eigen::EigenSolver<Eigen::MatrixXd> es(tangent_jacobian(rec));
  int top = 0;
  for (int i = 1; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[top])) top = i;
  }
  const Eigen::VectorXcd w = dL_packed(rec.pair(), es.eigenvectors().col(top), rec.degree);
  const Eigen::VectorXcd lhs = Jc.cast<std::complex<double>>() * w;
  CHECK((lhs - es.eigenvalues()[top] * w).norm() / (std::abs(es.eigenvalues()[top]) * w.norm()) < 1e-6);

  const Eigen::VectorXcd zero = dL_packed(rec.pair(), Eigen::VectorXcd::Zero(rec.degree), rec.degree);
  CHECK(zero.norm() == 0.0);
}

}  // TEST_SUITE
