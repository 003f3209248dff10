#pragma once
// Carleman kernels and the Carleman matrix.
//
// Cap (exponential weight): the scalar kernel admits two equivalent forms,
//   (a) the semi-infinite oscillatory u-integral (real wave number), and
//   (b) Phi_tau(d, k) = exp(-k r)/r - I(d), with
//       I(d) = int_k^tau exp(t d_3) J0(sigma sqrt(t^2 - k^2)) dt
//       (straight path k -> tau; empty when tau <= Re k).
// Every point of the path integrand solves the Helmholtz equation in d, so
// the difference G = Phi - exp(-kr)/r solves it too and is regular at d = 0.
//
// Cone (order-rho weight, rho = 2 closed form): the same structure with the
// path weighted by  erfc(t/(2 sqrt(tau)) - sqrt(tau) x3) / erfc(-sqrt(tau) x3),
// obtained by superposing the exponential path over the Gaussian subordinator
// of the order-2 entire function.  The weight lies in (0, 1), so the route is
// overflow-free, and the effective upper limit is 2 tau x3 + O(sqrt(tau)).
//
// All spatial derivative jets are taken under the integral sign through the
// entire function c_m(z) = J_m(z)/z^m.

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "tcr/errors.hpp"
#include "tcr/fundsol.hpp"
#include "tcr/geometry.hpp"
#include "tcr/medium.hpp"
#include "tcr/quadrature.hpp"
#include "tcr/specfun.hpp"

namespace tcr {

struct KernelSpec {
  enum class Kind { Exponential, MittagLeffler };
  Kind kind = Kind::Exponential;
  double tau = 1.0;
  double rho_exp = 2.0;  // only meaningful for MittagLeffler
  int dimension = 3;

  // n = 2m or n = 2m + 1: m = 1 for both supported dimensions.
  int m() const { return dimension / 2; }

  static KernelSpec exponential(double tau, int dim = 3) {
    if (!(tau >= 0)) throw ParameterViolation("tau");
    KernelSpec s;
    s.kind = Kind::Exponential;
    s.tau = tau;
    s.dimension = dim;
    return s;
  }
  static KernelSpec mittag_leffler(double tau, double rho, int dim = 3) {
    if (!(tau > 0)) throw ParameterViolation("tau");
    if (!(rho > 1)) throw ParameterViolation("rho_exp");
    KernelSpec s;
    s.kind = Kind::MittagLeffler;
    s.tau = tau;
    s.rho_exp = rho;
    s.dimension = dim;
    return s;
  }
};

// Normalisation constants of the kernel integral (kept verbatim; the tau->0
// closed-form oracle in the tests divides them out).
inline double kernel_norm_constant(int n) {
  if (n == 3) return -kPi / 2;
  if (n == 2) return 2 * kPi;
  throw std::invalid_argument("kernel dimension must be 2 or 3");
}

namespace detail_carleman {

// Jet of the path part  g(d) = -int w(t) exp(t d3) J0(sigma mu(t)) dt  for a
// given set of path nodes/weights; mu(t)^2 = t^2 - k^2.  Derivatives come from
// the entire functions c_m(z) = J_m(z)/z^m via the moment sums
//   M(a, m) = sum_p w_p t_p^a (mu_p^2)^m c_m(sigma mu_p) exp(t_p d3).
struct PathRule {
  std::vector<Complex> t, w;
};

inline KernelJet path_jet(const Vector3& d, Complex k, const PathRule& rule) {
  KernelJet jet;
  if (rule.t.empty()) return jet;
  const double sig2 = d(0) * d(0) + d(1) * d(1);
  const double b = d(2);
  Complex m00{}, m10{}, m20{}, m30{}, m01{}, m11{}, m21{}, m02{}, m12{}, m03{};
  const Complex k2 = k * k;
  for (size_t p = 0; p < rule.t.size(); ++p) {
    const Complex t = rule.t[p];
    const Complex mu2 = t * t - k2;
    const Complex z = std::sqrt(sig2 * mu2);
    const Complex base = rule.w[p] * std::exp(t * b);
    const Complex c0 = base * bessel_cms(0, z);
    const Complex c1 = base * bessel_cms(1, z);
    const Complex c2 = base * bessel_cms(2, z);
    const Complex c3 = base * bessel_cms(3, z);
    m00 += c0;
    m10 += t * c0;
    m20 += t * t * c0;
    m30 += t * t * t * c0;
    m01 += mu2 * c1;
    m11 += t * mu2 * c1;
    m21 += t * t * mu2 * c1;
    m02 += mu2 * mu2 * c2;
    m12 += t * mu2 * mu2 * c2;
    m03 += mu2 * mu2 * mu2 * c3;
  }
  jet.val = -m00;
  jet.grad(0) = m01 * d(0);
  jet.grad(1) = m01 * d(1);
  jet.grad(2) = -m10;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j)
      jet.hess(i, j) = ((i == j) ? m01 : Complex{}) - m02 * d(i) * d(j);
    jet.hess(i, 2) = jet.hess(2, i) = m11 * d(i);
  }
  jet.hess(2, 2) = -m20;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int l = 0; l < 2; ++l) {
        Complex v = m03 * d(i) * d(j) * d(l);
        if (i == j) v -= m02 * d(l);
        if (i == l) v -= m02 * d(j);
        if (j == l) v -= m02 * d(i);
        jet.third[i](j, l) = v;
      }
      const Complex v = ((i == j) ? m11 : Complex{}) - m12 * d(i) * d(j);
      jet.third[i](j, 2) = jet.third[i](2, j) = jet.third[2](i, j) = v;
    }
    const Complex v = m21 * d(i);
    jet.third[i](2, 2) = jet.third[2](i, 2) = jet.third[2](2, i) = v;
  }
  jet.third[2](2, 2) = -m30;
  return jet;
}

// Exponential-kernel path k -> tau (empty when tau does not exceed Re k).
inline PathRule cap_path(Complex k, double tau, const QuadratureControls& q) {
  PathRule rule;
  if (tau <= k.real() + 1e-14) return rule;
  const auto& [gx, gw] = gauss_legendre(q.path_points);
  const Complex span = Complex(tau, 0) - k;
  rule.t.resize(gx.size());
  rule.w.resize(gx.size());
  for (size_t i = 0; i < gx.size(); ++i) {
    rule.t[i] = k + span * ((gx[i] + 1) / 2);
    rule.w[i] = span / 2.0 * gw[i];
  }
  return rule;
}

// Cone (rho = 2) path: horizontal ray from k, Gauss-weighted by the
// complementary-error-function subordinator; normalised at the axis point x3.
inline PathRule cone_path(Complex k, double tau, double x3,
                          const QuadratureControls& q) {
  PathRule rule;
  const double tp = std::sqrt(tau);
  const double c = tp * x3;
  const double tmax = 2 * tau * x3 + 2 * q.cone_nsig * tp;
  if (tmax <= k.real()) return rule;
  const auto& [gx, gw] = gauss_legendre(q.path_points);
  const double span = tmax - k.real();
  const double denom = std::erfc(-c);
  rule.t.resize(gx.size());
  rule.w.resize(gx.size());
  for (size_t i = 0; i < gx.size(); ++i) {
    const Complex t = k + span * ((gx[i] + 1) / 2);
    rule.t[i] = t;
    rule.w[i] =
        span / 2.0 * gw[i] * erfc_complex(t / (2.0 * tp) - c) / denom;
  }
  return rule;
}

inline PathRule kernel_path(Complex k, const KernelSpec& spec, double x3,
                            const QuadratureControls& q) {
  if (spec.kind == KernelSpec::Kind::Exponential)
    return cap_path(k, spec.tau, q);
  if (spec.rho_exp != 2.0)
    throw std::invalid_argument(
        "analytic kernel path requires rho = 2; use the direct quadrature route");
  return cone_path(k, spec.tau, x3, q);
}

}  // namespace detail_carleman

// ---- scalar kernels ---------------------------------------------------------

// Cap kernel, path/closed-form route: Phi_tau(y - x, k) for any wave number k
// with Re k >= 0; exact Helmholtz solution in y for every tau.
inline Complex phi_cap(const Vector3& y, const Vector3& x, Complex k,
                       const KernelSpec& spec, const QuadratureControls& q = {}) {
  const Vector3 d = y - x;
  const double r = d.norm();
  if (!(r > 0)) throw SingularPoint();
  const auto rule = detail_carleman::cap_path(k, spec.tau, q);
  const KernelJet g = detail_carleman::path_jet(d, k, rule);
  return std::exp(-k * r) / r + g.val;
}

// Cap kernel, semi-infinite oscillatory route (real k >= 0); returns the same
// Phi_tau through the u-integral divided by the normalisation constant.  The
// n = 2 branch carries psi(ku) = u J0(ku).
inline Complex phi_cap_oscillatory(const Vector3& y, const Vector3& x, double k,
                                   const KernelSpec& spec,
                                   const QuadratureControls& q = {}) {
  const Vector3 d = y - x;
  const int n = spec.dimension;
  const double s = (n == 3) ? d(0) * d(0) + d(1) * d(1) : d(0) * d(0);
  const double b = (n == 3) ? d(2) : d(1);
  if (!(s + b * b > 0)) throw SingularPoint();
  const double tau = spec.tau;
  auto integrand = [&](double u) {
    const double a = std::sqrt(u * u + s);
    const double core = std::exp(tau * b) *
                        (b * std::sin(tau * a) - a * std::cos(tau * a)) /
                        (a * (a * a + b * b));
    return (n == 3) ? core * std::cos(k * u) : core * u * bessel_j0(k * u);
  };
  const double raw = osc_integral(integrand, tau + k + 1.0, q);
  return Complex(raw / kernel_norm_constant(n), 0.0);
}

// Closed form of the tau-derivative of the cap kernel (real k >= 0):
// zero below the threshold tau = k, Bessel/cosine branch above it.
inline Complex phi_cap_dtau(const Vector3& y, const Vector3& x, double k,
                            const KernelSpec& spec) {
  const Vector3 d = y - x;
  const int n = spec.dimension;
  const double s = (n == 3) ? d(0) * d(0) + d(1) * d(1) : d(0) * d(0);
  const double b = (n == 3) ? d(2) : d(1);
  const double tau = spec.tau;
  if (std::abs(tau - k) < 1e-9) throw OnLightCone();
  if (tau < k) return 0.0;
  const double mu = std::sqrt(tau * tau - k * k);
  const double psi_prime = (n == 3) ? (kPi / 2) * bessel_j0(std::sqrt(s) * mu)
                                    : std::cos(std::sqrt(s) * mu) / mu;
  return std::exp(tau * b) * psi_prime / kernel_norm_constant(n);
}

namespace detail_carleman {

// Oscillatory quadrature of the tau-derivative integrand of the cap kernel
// (differentiation of the u-integral under the integral sign; real k >= 0).
// Serves as the independent oracle for the closed form above.
inline Complex phi_cap_dtau_quadrature(const Vector3& y, const Vector3& x,
                                       Complex k, const KernelSpec& spec,
                                       const QuadratureControls& q = {}) {
  const Vector3 d = y - x;
  const int n = spec.dimension;
  const double s = (n == 3) ? d(0) * d(0) + d(1) * d(1) : d(0) * d(0);
  const double b = (n == 3) ? d(2) : d(1);
  const double tau = spec.tau;
  const double kr = k.real();
  auto integrand = [&](double u) {
    const double a = std::sqrt(u * u + s);
    const double core = std::exp(tau * b) * std::sin(tau * a) / a;
    return (n == 3) ? core * std::cos(kr * u) : core * u * bessel_j0(kr * u);
  };
  const double raw = osc_integral(integrand, tau + kr + 1.0, q);
  return Complex(raw / kernel_norm_constant(n), 0.0);
}

// Direct u-quadrature of the cone kernel integral with the entire function
// evaluated inside the integrand (any rho > 1, real k only).
inline Complex phi_cone_direct(const Vector3& y, const Vector3& x, Complex k,
                               const KernelSpec& spec,
                               const QuadratureControls& q = {}) {
  const Vector3 d = y - x;
  if (!(d.norm() > 0)) throw SingularPoint();
  if (!(x(2) > 0)) throw ParameterViolation("axis point x3");
  if (std::abs(k.imag()) > 1e-12)
    throw std::invalid_argument("direct cone quadrature requires real k");
  const double rho = spec.rho_exp;
  const double kp = std::pow(spec.tau, 1.0 / rho);
  const MLIndex idx(rho);
  const Complex i(0, 1);
  const double s = d(0) * d(0) + d(1) * d(1);
  const double b = d(2);
  const Complex norm = mittag_leffler(idx, kp * x(2));
  auto integrand = [&](double u) {
    const double a = std::sqrt(u * u + s);
    const Complex w = i * a + y(2);
    const Complex val = mittag_leffler(idx, kp * w) / (i * a + b);
    return val.imag() * std::cos(k.real() * u) / a;
  };
  // Head: the entire function still grows while a < y3; resolve its phase
  // with a tau-scaled composite rule, then extrapolate the oscillatory tail.
  const double uc = (y(2) * y(2) > s) ? std::sqrt(y(2) * y(2) - s) : 0.0;
  const double head_end = uc + 2.0;
  const int head_panels = 16 + (int)(2.0 * spec.tau * head_end);
  double head = 0.0;
  for (int p = 0; p < head_panels; ++p)
    head += panel_integrate(integrand, head_end * p / head_panels,
                            head_end * (p + 1) / head_panels, 16);
  const double tail =
      osc_integral(integrand, k.real() + kp + 1.0, q, head_end);
  return (head + tail) / (kernel_norm_constant(3) * norm);
}

}  // namespace detail_carleman

// Cone kernel.  rho = 2 uses the weighted-path closed route; other rho fall
// back to the direct u-quadrature.
inline Complex phi_cone(const Vector3& y, const Vector3& x, Complex k,
                        const KernelSpec& spec, const QuadratureControls& q = {}) {
  if (spec.rho_exp == 2.0) {
    const Vector3 d = y - x;
    const double r = d.norm();
    if (!(r > 0)) throw SingularPoint();
    if (!(x(2) > 0)) throw ParameterViolation("axis point x3");
    const auto rule = detail_carleman::cone_path(k, spec.tau, x(2), q);
    const KernelJet g = detail_carleman::path_jet(d, k, rule);
    return std::exp(-k * r) / r + g.val;
  }
  return detail_carleman::phi_cone_direct(y, x, k, spec, q);
}

// Gradient and Hessian of the scalar kernel with respect to y.  Analytic
// (differentiation under the integral sign) for the exponential kernel and
// the rho = 2 cone kernel; finite differences of the scalar kernel otherwise.
struct ScalarKernelJet {
  Complex val;
  Eigen::Vector3cd grad;
  Matrix3c hess;
};

inline ScalarKernelJet phi_gradients(const Vector3& y, const Vector3& x,
                                     Complex k, const KernelSpec& spec,
                                     const QuadratureControls& q = {},
                                     int order = 2) {
  if (order < 1 || order > 2)
    throw std::invalid_argument("phi_gradients: order must be 1 or 2");
  const Vector3 d = y - x;
  if (!(d.norm() > 0)) throw SingularPoint();
  ScalarKernelJet out;
  if (spec.kind == KernelSpec::Kind::Exponential || spec.rho_exp == 2.0) {
    const auto rule = detail_carleman::kernel_path(k, spec, x(2), q);
    const KernelJet g = detail_carleman::path_jet(d, k, rule);
    const KernelJet h = radial_jet(Complex(0, 1) * k, d);
    out.val = h.val + g.val;
    out.grad = h.grad + g.grad;
    out.hess = h.hess + g.hess;
    return out;
  }
  // General rho: central differences on the scalar kernel.
  const double h = 1e-4;
  auto f = [&](const Vector3& p) { return phi_cone(p, x, k, spec, q); };
  out.val = f(y);
  for (int i = 0; i < 3; ++i) {
    Vector3 e = Vector3::Zero();
    e(i) = h;
    const Complex fp = f(y + e), fm = f(y - e);
    out.grad(i) = (fp - fm) / (2 * h);
    out.hess(i, i) = (fp - 2.0 * out.val + fm) / (h * h);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) {
      Vector3 ei = Vector3::Zero(), ej = Vector3::Zero();
      ei(i) = h;
      ej(j) = h;
      out.hess(i, j) = out.hess(j, i) =
          (f(y + ei + ej) - f(y + ei - ej) - f(y - ei + ej) + f(y - ei - ej)) /
          (4 * h * h);
    }
  if (!out.hess.allFinite())
    throw DifferentiationFailure("cone kernel Hessian not finite");
  return out;
}

// ---- Carleman matrix --------------------------------------------------------

// Pi(y, x) with its y-gradient: the fundamental-matrix structure with each
// radial kernel exp(i lambda_l r)/r replaced by the Carleman scalar kernel at
// wave number k_l = -i lambda_l.
template <typename Real = double>
MatrixJet pi_with_gradient(const Vector3& y, const Vector3& x,
                           const MediumBundle<Real>& b, const KernelSpec& spec,
                           const QuadratureControls& q = {}) {
  const Vector3 d = y - x;
  if (!(d.norm() > 0)) throw SingularPoint();
  const Complex i(0, 1);
  std::array<KernelJet, 3> jets;
  for (int l = 0; l < 3; ++l) {
    const Complex lam = b.waves.lambda_l[l];
    const Complex k = -i * lam;
    jets[l] = radial_jet(lam, d);
    const auto rule = detail_carleman::kernel_path(k, spec, x(2), q);
    const KernelJet g = detail_carleman::path_jet(d, k, rule);
    jets[l].val += g.val;
    jets[l].grad += g.grad;
    jets[l].hess += g.hess;
    for (int t = 0; t < 3; ++t) jets[l].third[t] += g.third[t];
  }
  return assemble_matrix_jet(b, jets, -1.0);
}

template <typename Real = double>
Matrix4c pi_matrix(const Vector3& y, const Vector3& x, const MediumBundle<Real>& b,
                   const KernelSpec& spec, const QuadratureControls& q = {}) {
  return pi_with_gradient(y, x, b, spec, q).P;
}

// epsilon(tau) = int_Sigma (|Pi| + |R~ Pi|) ds: the decay of this functional
// in tau is the Carleman property.
template <typename Real = double>
double epsilon_sigma(const BoundaryMesh& mesh, const Vector3& x,
                     const MediumBundle<Real>& b, const KernelSpec& spec,
                     const QuadratureControls& q = {}) {
  return surface_integrate(mesh, SurfaceTag::Sigma, [&](Eigen::Index idx) {
    const Vector3 y = mesh.nodes.row(idx).transpose();
    const Vector3 nu = mesh.normals.row(idx).transpose();
    const MatrixJet PJ = pi_with_gradient(y, x, b, spec, q);
    const Matrix4c A = apply_stress_R_tilde(PJ, nu, b.params);
    return PJ.P.norm() + A.norm();
  });
}

}  // namespace tcr
