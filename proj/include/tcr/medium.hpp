#pragma once
// Physical parameters of the thermoelastic medium, the derived wave numbers
// and the coupling coefficients of the fundamental matrix.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "tcr/errors.hpp"

namespace tcr {

template <typename Real = double>
using ComplexT = std::complex<Real>;

template <typename Real = double>
struct MediumParams {
  Real lame_lambda{};
  Real shear_mu{};
  Real density_rho{};
  Real frequency_omega{};
  Real coupling_gamma{};
  Real coupling_eta{};
  Real theta{};
};

template <typename Real = double>
MediumParams<Real> make_medium(const std::array<Real, 7>& raw) {
  MediumParams<Real> m{raw[0], raw[1], raw[2], raw[3], raw[4], raw[5], raw[6]};
  if (!(m.shear_mu > 0)) throw ParameterViolation("mu");
  if (!(3 * m.lame_lambda + 2 * m.shear_mu > 0)) throw ParameterViolation("3λ+2μ");
  if (!(m.density_rho > 0)) throw ParameterViolation("rho");
  if (!(m.frequency_omega > 0)) throw ParameterViolation("omega");
  if (!(m.theta > 0)) throw ParameterViolation("theta");
  if (!(m.coupling_eta != 0) || !(m.coupling_gamma / m.coupling_eta > 0))
    throw ParameterViolation("gamma/eta");
  return m;
}

template <typename Real = double>
struct WaveNumbers {
  ComplexT<Real> k1_sq{};
  ComplexT<Real> k2_sq{};
  std::array<ComplexT<Real>, 3> lambda_l{};
};

namespace detail {
// Principal square root, flipped so the imaginary part is non-negative
// (radiation-type decay of exp(i*lambda*r)).
template <typename Real>
ComplexT<Real> branch_sqrt(ComplexT<Real> zsq) {
  ComplexT<Real> z = std::sqrt(zsq);
  return z.imag() < 0 ? -z : z;
}
}  // namespace detail

template <typename Real = double>
WaveNumbers<Real> wave_numbers(const MediumParams<Real>& m) {
  using C = ComplexT<Real>;
  const C i(0, 1);
  const Real lp2mu = m.lame_lambda + 2 * m.shear_mu;
  WaveNumbers<Real> w;
  w.k1_sq = C(m.density_rho * m.frequency_omega * m.frequency_omega / lp2mu, 0);
  w.k2_sq = i * m.frequency_omega / m.theta;
  // lambda1^2, lambda2^2 solve z^2 - b z + c = 0, the dispersion relation of
  // the coupled dilatational/thermal block; lambda3^2 is the shear branch.
  const C b = w.k1_sq + w.k2_sq +
              i * m.frequency_omega * m.coupling_eta * m.coupling_gamma / lp2mu;
  const C c = w.k1_sq * w.k2_sq;
  const C disc = std::sqrt(b * b - Real(4) * c);
  C r1 = (b - disc) / Real(2);
  C r2 = (b + disc) / Real(2);
  if (r2.real() < r1.real() ||
      (r2.real() == r1.real() && r2.imag() < r1.imag()))
    std::swap(r1, r2);
  if (std::abs(r1 - r2) < Real(1e-14) * std::max(std::abs(r1), std::abs(r2)))
    throw DegenerateRoots();
  const C l3sq(m.density_rho * m.frequency_omega * m.frequency_omega / m.shear_mu, 0);
  w.lambda_l = {detail::branch_sqrt(r1), detail::branch_sqrt(r2),
                detail::branch_sqrt(l3sq)};
  return w;
}

// Symbol matrix B(i z xi, omega) of the governing system for a unit direction
// xi; assembled entrywise, independently of the root solver, so it can act as
// an oracle for wave_numbers.
template <typename Real = double>
Eigen::Matrix<ComplexT<Real>, 4, 4> symbol_matrix(
    const MediumParams<Real>& m, const Eigen::Matrix<Real, 3, 1>& xi,
    ComplexT<Real> z) {
  using C = ComplexT<Real>;
  const C i(0, 1);
  Eigen::Matrix<C, 3, 1> d = (i * z) * xi.template cast<C>();
  const C dd = d(0) * d(0) + d(1) * d(1) + d(2) * d(2);
  Eigen::Matrix<C, 4, 4> B = Eigen::Matrix<C, 4, 4>::Zero();
  const Real om2 = m.frequency_omega * m.frequency_omega;
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      B(k, j) = (m.lame_lambda + m.shear_mu) * d(k) * d(j);
      if (k == j) B(k, j) += m.shear_mu * dd + m.density_rho * om2;
    }
    B(k, 3) = -m.coupling_gamma * d(k);
    B(3, k) = i * m.frequency_omega * m.coupling_eta * d(k);
  }
  B(3, 3) = dd + i * m.frequency_omega / m.theta;
  return B;
}

// Plane-wave dispersion residual: max over wave numbers and directions of the
// smallest singular value of B(i*lambda*xi, omega), normalised by the largest.
template <typename Real = double>
Real verify_wave_numbers(const MediumParams<Real>& m, const WaveNumbers<Real>& w) {
  using Mat = Eigen::Matrix<ComplexT<Real>, 4, 4>;
  const std::array<Eigen::Matrix<Real, 3, 1>, 5> dirs = {
      Eigen::Matrix<Real, 3, 1>(1, 0, 0), Eigen::Matrix<Real, 3, 1>(0, 1, 0),
      Eigen::Matrix<Real, 3, 1>(0, 0, 1),
      Eigen::Matrix<Real, 3, 1>(1, 1, 1).normalized(),
      Eigen::Matrix<Real, 3, 1>(Real(0.3), Real(-0.7), Real(0.648)).normalized()};
  Real worst = 0;
  for (const auto& xi : dirs) {
    for (const auto& lam : w.lambda_l) {
      Mat B = symbol_matrix(m, xi, lam);
      Eigen::JacobiSVD<Mat> svd(B);
      const auto& sv = svd.singularValues();
      worst = std::max(worst, sv(3) / sv(0));
    }
  }
  return worst;
}

template <typename Real = double>
struct CouplingCoefficients {
  std::array<ComplexT<Real>, 3> alpha{};
  std::array<ComplexT<Real>, 3> beta{};
  std::array<ComplexT<Real>, 3> gamma_c{};
};

template <typename Real = double>
CouplingCoefficients<Real> coupling_coefficients(const MediumParams<Real>& m,
                                                 const WaveNumbers<Real>& w) {
  using C = ComplexT<Real>;
  const C i(0, 1);
  const Real pi = Real(3.14159265358979323846L);
  const C l1 = w.lambda_l[0], l2 = w.lambda_l[1];
  const C dl = l2 * l2 - l1 * l1;
  if (std::abs(dl) < Real(1e-14) * std::max(std::abs(l1 * l1), std::abs(l2 * l2)))
    throw DegenerateRoots();
  const Real lp2mu = m.lame_lambda + 2 * m.shear_mu;
  const C D = 2 * pi * lp2mu * dl;
  const Real om2 = m.frequency_omega * m.frequency_omega;
  CouplingCoefficients<Real> cc;
  for (int l = 1; l <= 3; ++l) {
    const C ll = w.lambda_l[l - 1];
    const Real d12 = (l == 3) ? Real(0) : Real(1);
    const Real sgn = (l % 2 == 0) ? Real(1) : Real(-1);
    C a = sgn * (C(1) - i * m.frequency_omega / (m.theta * ll * ll)) * d12 / D;
    if (l == 3) a -= C(1) / (2 * pi * m.density_rho * om2);
    cc.alpha[l - 1] = a;
    cc.beta[l - 1] = sgn * d12 / D;
    cc.gamma_c[l - 1] = sgn * (ll * ll - w.k1_sq) * d12 / (2 * pi * dl);
  }
  return cc;
}

// Everything downstream consumes the medium through this bundle.
template <typename Real = double>
struct MediumBundle {
  MediumParams<Real> params;
  WaveNumbers<Real> waves;
  CouplingCoefficients<Real> coeffs;
};

template <typename Real = double>
MediumBundle<Real> make_bundle(const std::array<Real, 7>& raw) {
  MediumBundle<Real> b;
  b.params = make_medium(raw);
  b.waves = wave_numbers(b.params);
  b.coeffs = coupling_coefficients(b.params, b.waves);
  return b;
}

}  // namespace tcr
