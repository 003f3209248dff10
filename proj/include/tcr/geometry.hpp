#pragma once
// Benchmark domains: the cap (disk Sigma on y_n = 0 closed by a hemisphere S)
// and the cone (lateral surface Sigma with aperture tan(pi/(2 rho)) closed by
// a spherical cap S), discretised as weighted quadrature nodes with outward
// normals.

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "tcr/errors.hpp"
#include "tcr/quadrature.hpp"

namespace tcr {

enum class SurfaceTag : uint8_t { S, Sigma };

struct BoundaryMesh {
  int dim = 3;
  Eigen::Matrix<double, Eigen::Dynamic, 3> nodes;    // n=2 uses columns 0..1
  Eigen::Matrix<double, Eigen::Dynamic, 3> normals;  // unit outward
  Eigen::VectorXd weights;
  std::vector<SurfaceTag> tags;

  Eigen::Index size() const { return nodes.rows(); }
  double area(SurfaceTag t) const {
    double a = 0;
    for (Eigen::Index i = 0; i < size(); ++i)
      if (tags[i] == t) a += weights(i);
    return a;
  }
  std::vector<Eigen::Index> indices(SurfaceTag t) const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < size(); ++i)
      if (tags[i] == t) out.push_back(i);
    return out;
  }
  // Representative node spacing, used by the evaluation-point standoff rule.
  double spacing() const {
    double total = weights.sum();
    return std::sqrt(total / std::max<Eigen::Index>(size(), 1));
  }
};

struct ConeSpec {
  double rho_exp;
  double tau_rho;
  double cap_radius;
  ConeSpec(double rho, double radius)
      : rho_exp(rho), tau_rho(std::tan(kPiOsc / (2 * rho))), cap_radius(radius) {
    if (!(rho > 1)) throw ParameterViolation("rho_exp");
    if (!(radius > 0)) throw ParameterViolation("cap_radius");
  }
};

namespace detail_geom {

// Composite Gauss rule on [a, b]: npan panels, fixed degree per panel.
inline void gauss_panels(double a, double b, int npan, int deg,
                         std::vector<double>& xs, std::vector<double>& ws) {
  const auto& [gx, gw] = gauss_legendre(deg);
  xs.clear();
  ws.clear();
  for (int p = 0; p < npan; ++p) {
    const double lo = a + (b - a) * p / npan, hi = a + (b - a) * (p + 1) / npan;
    for (size_t i = 0; i < gx.size(); ++i) {
      xs.push_back((hi - lo) / 2 * gx[i] + (hi + lo) / 2);
      ws.push_back((hi - lo) / 2 * gw[i]);
    }
  }
}

struct MeshBuilder {
  std::vector<Eigen::Vector3d> nodes, normals;
  std::vector<double> weights;
  std::vector<SurfaceTag> tags;
  void add(const Eigen::Vector3d& p, const Eigen::Vector3d& nu, double w,
           SurfaceTag t) {
    nodes.push_back(p);
    normals.push_back(nu);
    weights.push_back(w);
    tags.push_back(t);
  }
  BoundaryMesh finish(int dim) {
    BoundaryMesh m;
    m.dim = dim;
    const Eigen::Index n = (Eigen::Index)nodes.size();
    m.nodes.resize(n, 3);
    m.normals.resize(n, 3);
    m.weights.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      m.nodes.row(i) = nodes[i].transpose();
      m.normals.row(i) = normals[i].transpose();
      m.weights(i) = weights[i];
    }
    m.tags = std::move(tags);
    return m;
  }
};

}  // namespace detail_geom

// Cap domain: S = hemisphere (n=3) / semicircle (n=2) of the given radius in
// the half-space y_n > 0; Sigma = disk / segment on y_n = 0, outward normal
// -e_n.  Product rule: composite Gauss in the radial/polar parameter,
// trapezoid in the azimuth (periodic, spectrally accurate).
inline BoundaryMesh make_cap_domain(double radius, int resolution, int n = 3) {
  if (!(radius > 0)) throw ParameterViolation("radius");
  if (resolution < 4) throw ParameterViolation("resolution");
  detail_geom::MeshBuilder b;
  std::vector<double> xs, ws;
  if (n == 3) {
    const int nph = 2 * resolution;
    const double wph = 2 * kPiOsc / nph;
    detail_geom::gauss_panels(0, kPiOsc / 2, std::max(1, resolution / 8), 8, xs, ws);
    for (size_t it = 0; it < xs.size(); ++it) {
      const double t = xs[it], wt = ws[it];
      for (int ip = 0; ip < nph; ++ip) {
        const double p = ip * wph;
        Eigen::Vector3d nu(std::sin(t) * std::cos(p), std::sin(t) * std::sin(p),
                           std::cos(t));
        b.add(radius * nu, nu, radius * radius * std::sin(t) * wt * wph,
              SurfaceTag::S);
      }
    }
    detail_geom::gauss_panels(0, radius, std::max(1, resolution / 8), 8, xs, ws);
    for (size_t ir = 0; ir < xs.size(); ++ir) {
      for (int ip = 0; ip < nph; ++ip) {
        const double p = ip * wph;
        b.add({xs[ir] * std::cos(p), xs[ir] * std::sin(p), 0.0}, {0, 0, -1},
              xs[ir] * ws[ir] * wph, SurfaceTag::Sigma);
      }
    }
    return b.finish(3);
  }
  if (n != 2) throw ParameterViolation("dimension");
  // n = 2: boundary curve in the (y1, y2) plane, padded with a zero third
  // coordinate.  S: semicircle y2 > 0; Sigma: segment [-radius, radius].
  detail_geom::gauss_panels(0, kPiOsc, std::max(1, resolution / 4), 8, xs, ws);
  for (size_t i = 0; i < xs.size(); ++i) {
    Eigen::Vector3d nu(std::cos(xs[i]), std::sin(xs[i]), 0);
    b.add(radius * nu, nu, radius * ws[i], SurfaceTag::S);
  }
  detail_geom::gauss_panels(-radius, radius, std::max(1, resolution / 4), 8, xs, ws);
  for (size_t i = 0; i < xs.size(); ++i)
    b.add({xs[i], 0, 0}, {0, -1, 0}, ws[i], SurfaceTag::Sigma);
  return b.finish(2);
}

// Cone domain (n=3): lateral surface alpha1 = tau_rho * y3 (alpha1 the
// transverse radius), apex at the origin, closed by the spherical cap S of
// radius cap_radius centred at the apex.
inline BoundaryMesh make_cone_domain(const ConeSpec& spec, int resolution) {
  if (resolution < 4) throw ParameterViolation("resolution");
  detail_geom::MeshBuilder b;
  const double theta_c = std::atan(spec.tau_rho);  // half-aperture
  const int nph = 2 * resolution;
  const double wph = 2 * kPiOsc / nph;
  std::vector<double> xs, ws;
  detail_geom::gauss_panels(0, theta_c, std::max(1, resolution / 8), 8, xs, ws);
  const double R = spec.cap_radius;
  for (size_t it = 0; it < xs.size(); ++it) {
    const double t = xs[it], wt = ws[it];
    for (int ip = 0; ip < nph; ++ip) {
      const double p = ip * wph;
      Eigen::Vector3d nu(std::sin(t) * std::cos(p), std::sin(t) * std::sin(p),
                         std::cos(t));
      b.add(R * nu, nu, R * R * std::sin(t) * wt * wph, SurfaceTag::S);
    }
  }
  const double h = R * std::cos(theta_c);
  const double slant = std::sqrt(1 + spec.tau_rho * spec.tau_rho);
  detail_geom::gauss_panels(0, h, std::max(1, resolution / 8), 8, xs, ws);
  for (size_t iy = 0; iy < xs.size(); ++iy) {
    const double y = xs[iy], wy = ws[iy];
    for (int ip = 0; ip < nph; ++ip) {
      const double p = ip * wph;
      Eigen::Vector3d node(spec.tau_rho * y * std::cos(p),
                           spec.tau_rho * y * std::sin(p), y);
      Eigen::Vector3d nu(std::cos(p), std::sin(p), -spec.tau_rho);
      b.add(node, nu / slant, spec.tau_rho * y * slant * wy * wph,
            SurfaceTag::Sigma);
    }
  }
  return b.finish(3);
}

// Weighted sum of an arbitrary per-node integrand over one boundary part.
// The integrand receives the node index; accumulation order is the node
// order, so results are bit-reproducible.
template <typename F>
auto surface_integrate(const BoundaryMesh& mesh, SurfaceTag tag, F&& integrand)
    -> decltype(integrand(Eigen::Index(0))) {
  decltype(integrand(Eigen::Index(0))) acc{};
  bool touched = false;
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    if (mesh.tags[i] != tag) continue;
    if (!touched) {
      acc = mesh.weights(i) * integrand(i);
      touched = true;
    } else {
      acc += mesh.weights(i) * integrand(i);
    }
  }
  return acc;
}

// Debug/visualisation dump: tag, coordinates, normal, weight per row.
inline void dump_mesh_csv(const BoundaryMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open mesh dump file: " + path);
  out << "tag";
  for (int d = 1; d <= mesh.dim; ++d) out << ",x" << d;
  for (int d = 1; d <= mesh.dim; ++d) out << ",nu" << d;
  out << ",weight\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    out << (mesh.tags[i] == SurfaceTag::S ? "S" : "Sigma");
    for (int d = 0; d < mesh.dim; ++d) out << ',' << mesh.nodes(i, d);
    for (int d = 0; d < mesh.dim; ++d) out << ',' << mesh.normals(i, d);
    out << ',' << mesh.weights(i) << '\n';
  }
}

}  // namespace tcr
