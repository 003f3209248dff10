#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tcr/fundsol.hpp"

using namespace tcr;

namespace {
const std::array<double, 7> kMedium = {1.0, 0.8, 1.2, 0.9, 1.1, 0.7, 1.3};

Complex radial(Complex lambda, double r) {
  return std::exp(Complex(0, 1) * lambda * r) / r;
}
}  // namespace

TEST_CASE("radial kernel jet matches finite differences") {
  const Complex lambda(1.3, 0.4);
  const Vector3 d(0.5, -0.3, 0.8);
  const KernelJet jet = radial_jet(lambda, d);
  const double h = 1e-5;
  auto f = [&](const Vector3& p) { return radial(lambda, p.norm()); };
  for (int i = 0; i < 3; ++i) {
    Vector3 e = Vector3::Zero();
    e(i) = h;
    const Complex fd = (f(d + e) - f(d - e)) / (2 * h);
    CHECK(std::abs(jet.grad(i) - fd) < 1e-8 * std::abs(fd) + 1e-10);
    for (int j = 0; j < 3; ++j) {
      Vector3 ej = Vector3::Zero();
      ej(j) = h;
      const Complex fd2 =
          (f(d + e + ej) - f(d + e - ej) - f(d - e + ej) + f(d - e - ej)) /
          (4 * h * h);
      CHECK(std::abs(jet.hess(i, j) - fd2) < 1e-5 * std::abs(fd2) + 1e-7);
    }
  }
}

TEST_CASE("third derivatives of the radial kernel match finite differences of the Hessian") {
  const Complex lambda(0.9, 0.1);
  const Vector3 d(0.4, 0.7, -0.2);
  const KernelJet jet = radial_jet(lambda, d);
  const double h = 1e-5;
  for (int l = 0; l < 3; ++l) {
    Vector3 e = Vector3::Zero();
    e(l) = h;
    const Matrix3c fd =
        (radial_jet(lambda, Vector3(d + e)).hess - radial_jet(lambda, Vector3(d - e)).hess) /
        (2 * h);
    CHECK((jet.third[l] - fd).norm() < 1e-6 * fd.norm());
  }
}

TEST_CASE("fundamental matrix columns solve the governing system") {
  const auto b = make_bundle<double>(kMedium);
  std::mt19937_64 rng(11);
  auto uni = [&](double a, double c) {
    return a + (c - a) * (double)(rng() >> 11) * 0x1.0p-53;
  };
  double worst = 0;
  for (int pt = 0; pt < 10; ++pt) {
    Vector3 x(uni(-1, 1), uni(-1, 1), uni(-1, 1));
    if (x.norm() < 0.4) x *= 0.6 / x.norm();
    for (int col = 0; col < 4; ++col) {
      auto field = [&](const Vector3& y) -> Vector4c { return psi(y, b).col(col); };
      const Vector4c res = apply_system_operator_fd(field, x, b.params);
      const double scale = psi(x, b).col(col).norm() / (x.norm() * x.norm());
      worst = std::max(worst, res.norm() / scale);
    }
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("argument-reflected matrix") {
  const auto b = make_bundle<double>(kMedium);
  const Vector3 x(0.3, -0.5, 0.8);
  CHECK((psi_tilde(x, b) - psi(Vector3(-x), b)).norm() < 1e-15);
}

TEST_CASE("matrix jet gradient matches finite differences") {
  const auto b = make_bundle<double>(kMedium);
  const Vector3 x(0.6, 0.2, -0.4);
  const MatrixJet jet = psi_jet(x, b);
  const double h = 1e-5;
  for (int i = 0; i < 3; ++i) {
    Vector3 e = Vector3::Zero();
    e(i) = h;
    const Matrix4c fd = (psi(Vector3(x + e), b) - psi(Vector3(x - e), b)) / (2 * h);
    CHECK((jet.DP[i] - fd).norm() < 1e-8 * fd.norm());
  }
}

TEST_CASE("boundary stress: closed-form and finite-difference paths agree") {
  const auto b = make_bundle<double>(kMedium);
  std::mt19937_64 rng(3);
  auto uni = [&](double a, double c) {
    return a + (c - a) * (double)(rng() >> 11) * 0x1.0p-53;
  };
  for (int trial = 0; trial < 5; ++trial) {
    // A smooth field: one fundamental column anchored outside the probe area.
    const Vector3 anchor(2.0 + uni(0, 1), uni(-1, 1), uni(-1, 1));
    const int col = trial % 4;
    auto field = [&](const Vector3& y) -> Vector4c {
      return psi(Vector3(y - anchor), b).col(col);
    };
    Vector3 y(uni(-0.5, 0.5), uni(-0.5, 0.5), uni(-0.5, 0.5));
    Vector3 nu(uni(-1, 1), uni(-1, 1), uni(-1, 1));
    nu.normalize();
    // Closed-form gradient via the matrix jet.
    const MatrixJet jet = psi_jet(Vector3(y - anchor), b);
    Gradient4c grad;
    for (int i = 0; i < 3; ++i) grad.row(i) = jet.DP[i].col(col).transpose();
    const Vector4c closed = apply_stress_R(grad, field(y), nu, b.params);
    const Vector4c fd = apply_stress_R(field, StressContext{y, nu}, b.params);
    CHECK((closed - fd).norm() < 1e-6 * closed.norm());
  }
}

TEST_CASE("singular point is rejected") {
  const auto b = make_bundle<double>(kMedium);
  CHECK_THROWS_AS(psi(Vector3(0, 0, 0), b), SingularPoint);
  CHECK_THROWS_AS(radial_jet(Complex(1, 0), Vector3(0, 0, 0)), SingularPoint);
}
