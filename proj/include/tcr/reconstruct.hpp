#pragma once
// Boundary-integral representation and the regularized reconstructions:
// full-boundary formula, data-on-S truncation U_tau, noisy-data U_tau_delta,
// the parameter rules tying tau to the noise level, and the stability bound.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "tcr/carleman.hpp"
#include "tcr/errors.hpp"
#include "tcr/fundsol.hpp"
#include "tcr/geometry.hpp"
#include "tcr/medium.hpp"

namespace tcr {

// Cauchy data sampled on a subset of mesh nodes: f = U, g = R U per node.
struct CauchyData {
  std::vector<Eigen::Index> node_ids;          // indices into the mesh
  Eigen::Matrix<Complex, Eigen::Dynamic, 4> f;  // boundary values
  Eigen::Matrix<Complex, Eigen::Dynamic, 4> g;  // stress values
};

struct ReconConfig {
  KernelSpec kernel = KernelSpec::exponential(1.0);
  std::optional<double> tau;  // explicit tau; empty -> choose_tau from (delta, M)
  double delta = 0.0;
  double M = 1.0;
  QuadratureControls quadrature;
  double standoff_factor = 3.0;
};

enum class DomainKind { Cap, Cone };

namespace detail_recon {

// Core layer evaluation: 1/2 sum over selected nodes of
//   w * (P(y, x) g(y) - {R~ P}^T f(y)),
// where P is either Psi(x - y) (kernel reduction, tau <= 0 path empty) or the
// Carleman matrix.  Fixed node order keeps results bit-reproducible.
template <typename Real = double>
Vector4c integrate_layer(const Vector3& x, const BoundaryMesh& mesh,
                         const CauchyData& data, const MediumBundle<Real>& b,
                         const KernelSpec& spec, const QuadratureControls& q,
                         bool carleman) {
  Vector4c acc = Vector4c::Zero();
  for (Eigen::Index row = 0; row < (Eigen::Index)data.node_ids.size(); ++row) {
    const Eigen::Index idx = data.node_ids[row];
    const Vector3 y = mesh.nodes.row(idx).transpose();
    const Vector3 nu = mesh.normals.row(idx).transpose();
    MatrixJet PJ;
    if (carleman) {
      PJ = pi_with_gradient(y, x, b, spec, q);
    } else {
      // Psi(x - y) expressed through jets in y (odd derivatives flip).
      const Vector3 d = y - x;
      std::array<KernelJet, 3> jets = {radial_jet(b.waves.lambda_l[0], d),
                                       radial_jet(b.waves.lambda_l[1], d),
                                       radial_jet(b.waves.lambda_l[2], d)};
      PJ = assemble_matrix_jet(b, jets, -1.0);
    }
    const Matrix4c A = apply_stress_R_tilde(PJ, nu, b.params);
    const Vector4c contrib =
        PJ.P * data.g.row(row).transpose() - A.transpose() * data.f.row(row).transpose();
    acc += mesh.weights(idx) * contrib;
  }
  return acc / 2.0;
}

inline void check_standoff(const Vector3& x, const BoundaryMesh& mesh,
                           double factor) {
  double dmin = std::numeric_limits<double>::max();
  for (Eigen::Index i = 0; i < mesh.size(); ++i)
    dmin = std::min(dmin, (mesh.nodes.row(i).transpose() - x).norm());
  const double need = factor * mesh.spacing();
  if (dmin < need)
    throw StandoffViolation("distance " + std::to_string(dmin) +
                            " < required " + std::to_string(need));
}

template <typename Real = double>
CauchyData gather(const BoundaryMesh& mesh, std::optional<SurfaceTag> tag,
                  const std::function<Vector4c(Eigen::Index)>& fval,
                  const std::function<Vector4c(Eigen::Index)>& gval) {
  CauchyData d;
  for (Eigen::Index i = 0; i < mesh.size(); ++i)
    if (!tag || mesh.tags[i] == *tag) d.node_ids.push_back(i);
  d.f.resize((Eigen::Index)d.node_ids.size(), 4);
  d.g.resize((Eigen::Index)d.node_ids.size(), 4);
  for (Eigen::Index r = 0; r < (Eigen::Index)d.node_ids.size(); ++r) {
    d.f.row(r) = fval(d.node_ids[r]).transpose();
    d.g.row(r) = gval(d.node_ids[r]).transpose();
  }
  return d;
}

}  // namespace detail_recon

// Full-boundary representation: data on all of the boundary reproduces the
// interior solution.
template <typename Real = double>
Vector4c represent_full(const Vector3& x, const BoundaryMesh& mesh,
                        const CauchyData& data, const MediumBundle<Real>& b,
                        const QuadratureControls& q = {},
                        double standoff_factor = 3.0) {
  detail_recon::check_standoff(x, mesh, standoff_factor);
  return detail_recon::integrate_layer(x, mesh, data, b, KernelSpec::exponential(0.0),
                                       q, /*carleman=*/false);
}

// Regularized reconstruction from Cauchy data on S only.
template <typename Real = double>
Vector4c reconstruct_exact(const Vector3& x, const CauchyData& data,
                           const ReconConfig& cfg, const BoundaryMesh& mesh,
                           const MediumBundle<Real>& b) {
  detail_recon::check_standoff(x, mesh, cfg.standoff_factor);
  KernelSpec spec = cfg.kernel;
  if (cfg.tau) spec.tau = *cfg.tau;
  if (spec.kind == KernelSpec::Kind::Exponential && spec.tau <= 0.0)
    return detail_recon::integrate_layer(x, mesh, data, b, spec, cfg.quadrature,
                                         /*carleman=*/false);
  return detail_recon::integrate_layer(x, mesh, data, b, spec, cfg.quadrature,
                                       /*carleman=*/true);
}

// Same formula applied to perturbed data; kept separate for call-site clarity.
template <typename Real = double>
Vector4c reconstruct_noisy(const Vector3& x, const CauchyData& noisy,
                           const ReconConfig& cfg, const BoundaryMesh& mesh,
                           const MediumBundle<Real>& b) {
  return reconstruct_exact(x, noisy, cfg, mesh, b);
}

// Parameter rule tying tau to the noise level.
//   cap:  tau = ln(M/delta) / xn0, xn0 = max over the domain of x_n,
//   cone: tau = (tau_rho R)^(-rho) ln(M/delta),
//         R^rho = max over S of Re(i sqrt(s) + y3)^rho.
template <typename Real = double>
double choose_tau(const ReconConfig& cfg, DomainKind kind,
                  const BoundaryMesh& mesh, double rho_exp = 2.0) {
  if (!(cfg.delta > 0) || cfg.delta >= cfg.M)
    throw InvalidNoiseModel("need 0 < delta < M");
  const double lnterm = std::max(std::log(cfg.M / cfg.delta), 0.0);
  if (kind == DomainKind::Cap) {
    double xn0 = 0.0;
    for (Eigen::Index i = 0; i < mesh.size(); ++i)
      xn0 = std::max(xn0, mesh.nodes(i, mesh.dim - 1));
    return lnterm / xn0;
  }
  const double tau_rho = std::tan(kPi / (2 * rho_exp));
  const Complex i(0, 1);
  double Rrho = 0.0;
  for (Eigen::Index idx = 0; idx < mesh.size(); ++idx) {
    if (mesh.tags[idx] != SurfaceTag::S) continue;
    const double s =
        mesh.nodes(idx, 0) * mesh.nodes(idx, 0) + mesh.nodes(idx, 1) * mesh.nodes(idx, 1);
    const Complex w = i * std::sqrt(s) + mesh.nodes(idx, 2);
    Rrho = std::max(Rrho, std::pow(w, rho_exp).real());
  }
  return lnterm / (std::pow(tau_rho, rho_exp) * Rrho);
}

// Diagnostic ceiling of the stability estimate:
//   C(x) * delta^(x_n/xn0) * (ln(M/delta))^m,
// with the constant estimated by mesh quadrature of r^-n over the boundary.
template <typename Real = double>
double stability_bound(const Vector3& x, const ReconConfig& cfg,
                       const BoundaryMesh& mesh) {
  if (!(cfg.delta > 0) || !(cfg.M > 0)) throw InvalidNoiseModel("delta, M > 0");
  double xn0 = 0.0;
  for (Eigen::Index i = 0; i < mesh.size(); ++i)
    xn0 = std::max(xn0, mesh.nodes(i, mesh.dim - 1));
  const double xn = x(mesh.dim - 1);
  const double lnterm = std::max(std::log(cfg.M / cfg.delta), 0.0);
  double c = 0.0;
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    const double r = (mesh.nodes.row(i).transpose() - x).norm();
    c += mesh.weights(i) / std::pow(r, mesh.dim);
  }
  const int m = cfg.kernel.m();
  return c * std::pow(cfg.delta, xn / xn0) * std::pow(lnterm, m);
}

}  // namespace tcr
