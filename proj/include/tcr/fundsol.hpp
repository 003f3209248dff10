#pragma once
// Fundamental matrix of the coupled steady-state thermoelastic system, its
// reflection, closed-form derivative jets, and the boundary stress operators.
//
// Conventions (pinned by the dispersion/representation tests):
//   * kernel h_l(d) = exp(i lambda_l |d|)/|d|; the shear-branch Helmholtz term
//     delta_kj/(2 pi mu) is attached to l = 3,
//   * traction T_k = lambda nu_k div u + mu sum_j nu_j d_k u_j + mu d_nu u_k,
//   * R rows 1..3: T u - gamma nu_k v; row 4: d_nu v,
//   * associated R~ rows 1..3: T (row fields) - i omega eta nu_k (last entry);
//     row 4: d_nu of the last entry.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include "tcr/errors.hpp"
#include "tcr/medium.hpp"
#include "tcr/specfun.hpp"

namespace tcr {

using Complex = std::complex<double>;
using Vector3 = Eigen::Vector3d;
using Vector4c = Eigen::Vector4cd;
using Matrix3c = Eigen::Matrix3cd;
using Matrix4c = Eigen::Matrix4cd;
using Gradient4c = Eigen::Matrix<Complex, 3, 4>;  // (i, j) = d_i U_j

// Value/gradient/Hessian/third-derivative jet of a scalar kernel at one
// displacement d; third[i](j, l) = d_i d_j d_l of the kernel.
struct KernelJet {
  Complex val{};
  Eigen::Vector3cd grad = Eigen::Vector3cd::Zero();
  Matrix3c hess = Matrix3c::Zero();
  std::array<Matrix3c, 3> third = {Matrix3c::Zero(), Matrix3c::Zero(),
                                   Matrix3c::Zero()};
};

// Closed-form jet of h(d) = exp(i lambda |d|)/|d| by the radial chain rule.
inline KernelJet radial_jet(Complex lambda, const Vector3& d) {
  const double r = d.norm();
  if (!(r > 0)) throw SingularPoint();
  const Vector3 u = d / r;
  const Complex i(0, 1);
  const Complex e = std::exp(i * lambda * r);
  const Complex f1 = e * (i * lambda / r - 1.0 / (r * r));
  const Complex f2 =
      e * (-lambda * lambda / r - 2.0 * i * lambda / (r * r) + 2.0 / (r * r * r));
  const Complex f3 = e * (-i * lambda * lambda * lambda / r +
                          3.0 * lambda * lambda / (r * r) +
                          6.0 * i * lambda / (r * r * r) - 6.0 / (r * r * r * r));
  KernelJet jet;
  jet.val = e / r;
  jet.grad = f1 * u.cast<Complex>();
  const Complex hr = f1 / r;
  jet.hess = (f2 - hr) * (u * u.transpose()).cast<Complex>() +
             hr * Matrix3c::Identity();
  const Complex A = f3 - 3.0 * f2 / r + 3.0 * f1 / (r * r);
  const Complex B = (f2 - f1 / r) / r;
  for (int i3 = 0; i3 < 3; ++i3)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) {
        Complex t = A * u(i3) * u(j) * u(l);
        if (i3 == j) t += B * u(l);
        if (i3 == l) t += B * u(j);
        if (j == l) t += B * u(i3);
        jet.third[i3](j, l) = t;
      }
  return jet;
}

// Matrix value plus its gradient (per spatial direction of the jet variable).
struct MatrixJet {
  Matrix4c P = Matrix4c::Zero();
  std::array<Matrix4c, 3> DP = {Matrix4c::Zero(), Matrix4c::Zero(),
                                Matrix4c::Zero()};
};

// Shared assembler for Psi and the Carleman matrix: combines the three
// per-branch kernel jets into the 4x4 matrix structure.  coupling_sign is +1
// when the jets differentiate the matrix argument directly (Psi(x) in x) and
// -1 when they differentiate in y with the matrix argument x - y (the
// Carleman matrix and the reflected kernels), which flips odd derivatives.
template <typename Real = double>
MatrixJet assemble_matrix_jet(const MediumBundle<Real>& b,
                              const std::array<KernelJet, 3>& jets,
                              double coupling_sign) {
  const auto& m = b.params;
  const Complex i(0, 1);
  const Complex iwe = coupling_sign * i * m.frequency_omega * m.coupling_eta;
  const Complex gc = -coupling_sign * m.coupling_gamma;
  MatrixJet out;
  for (int l = 0; l < 3; ++l) {
    const KernelJet& J = jets[l];
    const Complex al = b.coeffs.alpha[l], be = b.coeffs.beta[l],
                  ga = b.coeffs.gamma_c[l];
    if (l == 2) {
      const double c = 1.0 / (2.0 * kPi * m.shear_mu);
      out.P.topLeftCorner<3, 3>() += c * J.val * Matrix3c::Identity();
      for (int d = 0; d < 3; ++d)
        out.DP[d].topLeftCorner<3, 3>() += c * J.grad(d) * Matrix3c::Identity();
    }
    out.P.topLeftCorner<3, 3>() -= al * J.hess;
    out.P.row(3).head<3>() += iwe * be * J.grad.transpose();
    out.P.col(3).head<3>() += gc * be * J.grad;
    out.P(3, 3) += ga * J.val;
    for (int d = 0; d < 3; ++d) {
      out.DP[d].topLeftCorner<3, 3>() -= al * J.third[d];
      out.DP[d].row(3).head<3>() += iwe * be * J.hess.row(d);
      out.DP[d].col(3).head<3>() += gc * be * J.hess.col(d);
      out.DP[d](3, 3) += ga * J.grad(d);
    }
  }
  return out;
}

// Psi(x) and its gradient in x.
template <typename Real = double>
MatrixJet psi_jet(const Vector3& x, const MediumBundle<Real>& b) {
  std::array<KernelJet, 3> jets = {radial_jet(b.waves.lambda_l[0], x),
                                   radial_jet(b.waves.lambda_l[1], x),
                                   radial_jet(b.waves.lambda_l[2], x)};
  return assemble_matrix_jet(b, jets, +1.0);
}

template <typename Real = double>
Matrix4c psi(const Vector3& x, const MediumBundle<Real>& b) {
  return psi_jet(x, b).P;
}

template <typename Real = double>
Matrix4c psi_tilde(const Vector3& x, const MediumBundle<Real>& b) {
  return psi(Vector3(-x), b);
}

struct StressContext {
  Vector3 point;
  Vector3 normal;  // unit outward
};

// Classical traction rows applied to a gradient table gradU(i, j) = d_i u_j.
template <typename Real = double>
Eigen::Vector3cd traction(const Gradient4c& gradU, const Vector3& nu,
                          const MediumParams<Real>& m) {
  Eigen::Vector3cd t;
  const Complex div = gradU(0, 0) + gradU(1, 1) + gradU(2, 2);
  for (int k = 0; k < 3; ++k) {
    Complex v = m.lame_lambda * nu(k) * div;
    for (int j = 0; j < 3; ++j) {
      v += m.shear_mu * nu(j) * gradU(k, j);  // nu_j d_k u_j
      v += m.shear_mu * nu(j) * gradU(j, k);  // mu d_nu u_k
    }
    t(k) = v;
  }
  return t;
}

// Boundary stress R U from closed-form value and gradient.
template <typename Real = double>
Vector4c apply_stress_R(const Gradient4c& gradU, const Vector4c& U,
                        const Vector3& nu, const MediumParams<Real>& m) {
  Vector4c out;
  out.head<3>() = traction(gradU, nu, m);
  out.head<3>() -= m.coupling_gamma * U(3) * nu.cast<Complex>();
  out(3) = nu(0) * gradU(0, 3) + nu(1) * gradU(1, 3) + nu(2) * gradU(2, 3);
  return out;
}

// Boundary stress R U from a sampled field, by 4th-order central differences
// with one Richardson step; throws when the two step sizes disagree.
template <typename Real = double, typename Field>
Vector4c apply_stress_R(Field&& field, const StressContext& ctx,
                        const MediumParams<Real>& m, double rel_tol = 1e-6) {
  const double h0 = std::max(1e-5, 1e-4 * ctx.point.norm());
  auto grad_at = [&](double h) {
    Gradient4c g;
    for (int i = 0; i < 3; ++i) {
      Vector3 e = Vector3::Zero();
      e(i) = h;
      const Vector4c fp1 = field(Vector3(ctx.point + e));
      const Vector4c fm1 = field(Vector3(ctx.point - e));
      const Vector4c fp2 = field(Vector3(ctx.point + 2 * e));
      const Vector4c fm2 = field(Vector3(ctx.point - 2 * e));
      g.row(i) = ((-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h)).transpose();
    }
    return g;
  };
  const Gradient4c g1 = grad_at(h0), g2 = grad_at(h0 / 2);
  const double scale = std::max(g2.cwiseAbs().maxCoeff(), 1e-300);
  if ((g1 - g2).cwiseAbs().maxCoeff() > 64 * rel_tol * scale)
    throw DifferentiationFailure("stress gradient did not converge");
  const Gradient4c g = (16.0 * g2 - g1) / 15.0;
  return apply_stress_R(g, field(ctx.point), ctx.normal, m);
}

// Associated stress operator applied column-wise to the rows of a matrix
// kernel: A(k, c) = (R~ applied to row c of P)_k, with DP[i] = d_{y_i} P.
template <typename Real = double>
Matrix4c apply_stress_R_tilde(const MatrixJet& PJ, const Vector3& nu,
                              const MediumParams<Real>& m) {
  const Complex i(0, 1);
  Matrix4c A;
  for (int c = 0; c < 4; ++c) {
    Gradient4c gr;  // gr(i, j) = d_i P(c, j)
    for (int d = 0; d < 3; ++d) gr.row(d) = PJ.DP[d].row(c);
    A.col(c).head<3>() = traction(gr, nu, m);
    A.col(c).head<3>() -=
        i * m.frequency_omega * m.coupling_eta * PJ.P(c, 3) * nu.cast<Complex>();
    A(3, c) = nu(0) * gr(0, 3) + nu(1) * gr(1, 3) + nu(2) * gr(2, 3);
  }
  return A;
}

// Finite-difference application of the governing operator B to a 4-vector
// field; diagnostic oracle only (the closed forms above are the product path).
template <typename Real = double, typename Field>
Vector4c apply_system_operator_fd(Field&& field, const Vector3& x,
                                  const MediumParams<Real>& m, double h = 1e-4) {
  const Complex i(0, 1);
  const Vector4c f0 = field(x);
  std::array<Vector4c, 3> fp, fm;
  Eigen::Matrix<Complex, 3, 4> grad;
  Vector4c lap = Vector4c::Zero();
  std::array<std::array<Vector4c, 3>, 3> hess;
  for (int k = 0; k < 3; ++k) {
    Vector3 ek = Vector3::Zero();
    ek(k) = h;
    fp[k] = field(Vector3(x + ek));
    fm[k] = field(Vector3(x - ek));
    grad.row(k) = ((fp[k] - fm[k]) / (2 * h)).transpose();
    hess[k][k] = (fp[k] - 2 * f0 + fm[k]) / (h * h);
    lap += hess[k][k];
  }
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < k; ++j) {
      Vector3 ek = Vector3::Zero(), ej = Vector3::Zero();
      ek(k) = h;
      ej(j) = h;
      hess[k][j] = (field(Vector3(x + ek + ej)) - field(Vector3(x + ek - ej)) -
                    field(Vector3(x - ek + ej)) + field(Vector3(x - ek - ej))) /
                   (4 * h * h);
      hess[j][k] = hess[k][j];
    }
  const double om2 = m.frequency_omega * m.frequency_omega;
  Vector4c out;
  for (int k = 0; k < 3; ++k) {
    Complex v = m.shear_mu * lap(k) + m.density_rho * om2 * f0(k);
    for (int j = 0; j < 3; ++j) v += (m.lame_lambda + m.shear_mu) * hess[k][j](j);
    v -= m.coupling_gamma * grad(k, 3);
    out(k) = v;
  }
  Complex v4 = lap(3) + i * m.frequency_omega / m.theta * f0(3);
  for (int j = 0; j < 3; ++j)
    v4 += i * m.frequency_omega * m.coupling_eta * grad(j, j);
  out(3) = v4;
  return out;
}

}  // namespace tcr
