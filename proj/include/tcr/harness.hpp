#pragma once
// Empirical study harness: manufactured exterior-source solutions, Cauchy-data
// sampling, calibrated noise injection, tau/delta sweeps, and rate fitting.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tcr/errors.hpp"
#include "tcr/fundsol.hpp"
#include "tcr/geometry.hpp"
#include "tcr/medium.hpp"
#include "tcr/reconstruct.hpp"

namespace tcr {

// One point source: a column of the fundamental matrix anchored at an
// exterior point, scaled by a complex weight.
struct SourceSpec {
  Vector3 point = {0.0, 0.0, 2.0};
  int column = 0;  // 0..2 elastic, 3 thermal
  Complex weight = {1.0, 0.0};
};

// A closed-form solution of the system away from its source points, with a
// closed-form gradient for exact stress data.
template <typename Real = double>
struct ManufacturedSolution {
  MediumBundle<Real> bundle;
  std::vector<SourceSpec> sources;

  Vector4c value(const Vector3& y) const {
    Vector4c u = Vector4c::Zero();
    for (const auto& s : sources) u += s.weight * psi(Vector3(y - s.point), bundle).col(s.column);
    return u;
  }
  Gradient4c gradient(const Vector3& y) const {
    Gradient4c g = Gradient4c::Zero();
    for (const auto& s : sources) {
      const MatrixJet jet = psi_jet(Vector3(y - s.point), bundle);
      for (int i = 0; i < 3; ++i) g.row(i) += s.weight * jet.DP[i].col(s.column).transpose();
    }
    return g;
  }
};

// Geometry + medium + sweep description for one study run.
struct StudySpec {
  DomainKind domain = DomainKind::Cap;
  double radius = 1.0;
  double rho_exp = 2.0;  // cone opening exponent; ignored for caps
  int resolution = 32;
  int dimension = 3;
  std::array<double, 7> medium = {1.0, 0.8, 1.2, 0.9, 1.1, 0.7, 1.3};
  std::vector<SourceSpec> sources;
  std::vector<double> taus;    // exact-data sweep
  std::vector<double> deltas;  // noisy-data sweep (tau from the noise rule)
  double bound_M = 10.0;
  std::vector<Vector3> eval_points;
  QuadratureControls quadrature;
  std::uint64_t seed = 0;
  std::string out_dir;
};

struct StudyRow {
  int point_id = 0;
  Vector3 x = Vector3::Zero();
  double tau = 0.0;
  double delta = 0.0;
  double err_abs = 0.0;
  double err_rel = 0.0;
  bool excluded = false;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
};

struct StudyReport {
  std::vector<StudyRow> rows;
  std::optional<FitResult> tau_fit;    // log err vs tau
  std::optional<FitResult> delta_fit;  // log err vs log delta
  double discretization_floor = 0.0;   // full-boundary representation error
  bool complete = true;                // false when a sweep aborted mid-run
  BoundaryMesh mesh;
};

// Least-squares line through (x_i, log err_i).  Throws when fewer than two
// usable points remain or the abscissae are degenerate.
inline FitResult fit_rate(const std::vector<double>& xs, const std::vector<double>& errs) {
  std::vector<double> ax, ay;
  for (std::size_t i = 0; i < xs.size() && i < errs.size(); ++i) {
    if (!(errs[i] > 0.0) || !std::isfinite(errs[i]) || !std::isfinite(xs[i])) continue;
    ax.push_back(xs[i]);
    ay.push_back(std::log(errs[i]));
  }
  const int n = (int)ax.size();
  if (n < 3) throw DegenerateFit("need at least three positive samples");
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) { mx += ax[i]; my += ay[i]; }
  mx /= n; my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (ax[i] - mx) * (ax[i] - mx);
    sxy += (ax[i] - mx) * (ay[i] - my);
    syy += (ay[i] - my) * (ay[i] - my);
  }
  if (!(sxx > 0)) throw DegenerateFit("abscissae are all equal");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = (syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.points_used = n;
  return f;
}

// Build the manufactured solution, rejecting sources on or near the closure
// of the domain (they must sit strictly outside for the field to solve the
// homogeneous system inside).
template <typename Real = double>
ManufacturedSolution<Real> manufacture_solution(const StudySpec& spec,
                                                const MediumBundle<Real>& b) {
  ManufacturedSolution<Real> ms;
  ms.bundle = b;
  if (spec.sources.empty()) throw SourceInsideDomain("no sources given");
  const double margin = 0.1 * spec.radius;
  for (const auto& s : spec.sources) {
    bool inside_closure = false;
    if (spec.domain == DomainKind::Cap) {
      inside_closure = s.point.norm() <= spec.radius + margin && s.point(2) >= -margin;
    } else {
      // Cone x3 > tau_rho * |x'| truncated by the sphere of given radius.
      const double tau_rho = std::tan(kPi / (2.0 * spec.rho_exp));
      const double rho_xy = std::hypot(s.point(0), s.point(1));
      inside_closure = s.point.norm() <= spec.radius + margin &&
                       s.point(2) >= tau_rho * rho_xy - margin;
    }
    if (inside_closure)
      throw SourceInsideDomain("source at distance " + std::to_string(s.point.norm()) +
                               " is inside or too close to the domain");
  }
  ms.sources = spec.sources;
  return ms;
}

// Exact Cauchy pair (f, g) = (U, R U) sampled on the tagged part of the mesh.
template <typename Real = double>
CauchyData sample_cauchy_data(const ManufacturedSolution<Real>& ms,
                              const BoundaryMesh& mesh,
                              std::optional<SurfaceTag> tag = SurfaceTag::S) {
  return detail_recon::gather<Real>(
      mesh, tag, [&](Eigen::Index i) { return ms.value(mesh.nodes.row(i).transpose()); },
      [&](Eigen::Index i) {
        const Vector3 y = mesh.nodes.row(i).transpose();
        const Vector3 nu = mesh.normals.row(i).transpose();
        return apply_stress_R(ms.gradient(y), ms.value(y), nu, ms.bundle.params);
      });
}

// Perturb (f, g) so that max-norm(f - f_delta) + max-norm(g - g_delta) lands
// just inside delta.  Deterministic for a fixed seed; delta = 0 is a no-op.
inline CauchyData add_noise(const CauchyData& data, double delta, std::uint64_t seed) {
  if (delta < 0.0) throw InvalidNoiseModel("delta must be nonnegative");
  if (delta == 0.0) return data;
  CauchyData out = data;
  std::mt19937_64 rng(seed);
  auto unit = [&]() { return (double)(rng() >> 11) * 0x1.0p-53; };
  const Eigen::Index n = out.f.rows();
  Eigen::Matrix<Complex, Eigen::Dynamic, 4> pf(n, 4), pg(n, 4);
  for (Eigen::Index r = 0; r < n; ++r)
    for (int c = 0; c < 4; ++c) {
      const double a1 = 2.0 * kPi * unit(), v1 = unit();
      const double a2 = 2.0 * kPi * unit(), v2 = unit();
      pf(r, c) = v1 * Complex(std::cos(a1), std::sin(a1));
      pg(r, c) = v2 * Complex(std::cos(a2), std::sin(a2));
    }
  double mf = 0.0, mg = 0.0;
  for (Eigen::Index r = 0; r < n; ++r)
    for (int c = 0; c < 4; ++c) {
      mf = std::max(mf, std::abs(pf(r, c)));
      mg = std::max(mg, std::abs(pg(r, c)));
    }
  if (!(mf + mg > 0)) throw InvalidNoiseModel("degenerate noise draw");
  const double scale = delta * (1.0 - 1e-9) / (mf + mg);
  out.f += scale * pf;
  out.g += scale * pg;
  return out;
}

namespace detail_harness {

inline BoundaryMesh build_mesh(const StudySpec& spec) {
  if (spec.domain == DomainKind::Cap)
    return make_cap_domain(spec.radius, spec.resolution, spec.dimension);
  return make_cone_domain(ConeSpec(spec.rho_exp, spec.radius), spec.resolution);
}

inline KernelSpec base_kernel(const StudySpec& spec, double tau) {
  if (spec.domain == DomainKind::Cap) return KernelSpec::exponential(tau, spec.dimension);
  return KernelSpec::mittag_leffler(tau, spec.rho_exp, spec.dimension);
}

}  // namespace detail_harness

// Run the configured sweeps: exact-data reconstructions over spec.taus, then
// noisy-data reconstructions over spec.deltas with tau from the noise rule.
// Rows whose error sits at the discretization floor are excluded from fits.
template <typename Real = double>
StudyReport run_study(const StudySpec& spec) {
  const auto b = make_bundle<Real>(spec.medium);
  StudyReport rep;
  rep.mesh = detail_harness::build_mesh(spec);
  const auto ms = manufacture_solution(spec, b);
  const CauchyData full = sample_cauchy_data(ms, rep.mesh, std::nullopt);
  const CauchyData onS = sample_cauchy_data(ms, rep.mesh, SurfaceTag::S);
  if (spec.eval_points.empty()) throw DegenerateFit("no evaluation points");

  // Discretization floor: full-boundary representation error at the
  // evaluation points.  Regularization error below this is unobservable.
  double floor = 0.0;
  try {
    for (const auto& x : spec.eval_points) {
      const Vector4c got = represent_full(x, rep.mesh, full, b, spec.quadrature);
      const Vector4c tru = ms.value(x);
      floor = std::max(floor, (got - tru).norm() / std::max(tru.norm(), 1e-300));
    }
  } catch (const std::exception&) {
    rep.complete = false;
    return rep;
  }
  rep.discretization_floor = floor;

  auto sweep_point = [&](const Vector3& x, const CauchyData& data, double tau,
                         double delta) {
    ReconConfig cfg;
    cfg.kernel = detail_harness::base_kernel(spec, tau);
    cfg.tau = tau;
    cfg.delta = delta;
    cfg.M = spec.bound_M;
    cfg.quadrature = spec.quadrature;
    const Vector4c got = reconstruct_exact(x, data, cfg, rep.mesh, b);
    const Vector4c tru = ms.value(x);
    StudyRow row;
    row.x = x;
    row.tau = tau;
    row.delta = delta;
    row.err_abs = (got - tru).norm();
    row.err_rel = row.err_abs / std::max(tru.norm(), 1e-300);
    row.excluded = row.err_rel < 3.0 * floor;
    return row;
  };

  // Exact-data tau sweep.  A failure mid-sweep leaves the rows gathered so
  // far and marks the report incomplete.
  std::vector<double> tau_x, tau_e;
  try {
  for (double tau : spec.taus) {
    double rms = 0.0;
    bool usable = true;
    for (int p = 0; p < (int)spec.eval_points.size(); ++p) {
      StudyRow row = sweep_point(spec.eval_points[p], onS, tau, 0.0);
      row.point_id = p;
      usable = usable && !row.excluded;
      rms += row.err_rel * row.err_rel;
      rep.rows.push_back(row);
    }
    rms = std::sqrt(rms / (double)spec.eval_points.size());
    if (usable) { tau_x.push_back(tau); tau_e.push_back(rms); }
  }
  if (tau_x.size() >= 3) rep.tau_fit = fit_rate(tau_x, tau_e);

  // Noisy-data delta sweep with the tau rule.
  std::vector<double> del_x, del_e;
  std::uint64_t draw = 0;
  for (double delta : spec.deltas) {
    ReconConfig cfg;
    cfg.delta = delta;
    cfg.M = spec.bound_M;
    const double tau = choose_tau(cfg, spec.domain, rep.mesh, spec.rho_exp);
    const CauchyData noisy = add_noise(onS, delta, spec.seed + 1000 * draw++);
    double rms = 0.0;
    bool usable = true;
    for (int p = 0; p < (int)spec.eval_points.size(); ++p) {
      StudyRow row = sweep_point(spec.eval_points[p], noisy, tau, delta);
      row.point_id = p;
      usable = usable && !row.excluded;
      rms += row.err_rel * row.err_rel;
      rep.rows.push_back(row);
    }
    rms = std::sqrt(rms / (double)spec.eval_points.size());
    if (usable) { del_x.push_back(std::log(delta)); del_e.push_back(rms); }
  }
  if (del_x.size() >= 3) rep.delta_fit = fit_rate(del_x, del_e);
  } catch (const std::exception&) {
    rep.complete = false;
  }
  return rep;
}

// --- CSV / JSON emission -------------------------------------------------

inline void write_report_csv(const StudyReport& rep, const std::string& path) {
  std::ofstream out(path);
  out.precision(17);
  out << "point_id,x1,x2,x3,tau,delta,err_abs,err_rel,excluded\n";
  for (const auto& r : rep.rows)
    out << r.point_id << ',' << r.x(0) << ',' << r.x(1) << ',' << r.x(2) << ','
        << r.tau << ',' << r.delta << ',' << r.err_abs << ',' << r.err_rel << ','
        << (r.excluded ? 1 : 0) << '\n';
}

inline void write_cauchy_csv(const CauchyData& d, const std::string& path) {
  std::ofstream out(path);
  out.precision(17);
  out << "node_id";
  for (int c = 1; c <= 4; ++c) out << ",f_" << c << "_re,f_" << c << "_im";
  for (int c = 1; c <= 4; ++c) out << ",g_" << c << "_re,g_" << c << "_im";
  out << '\n';
  for (Eigen::Index r = 0; r < (Eigen::Index)d.node_ids.size(); ++r) {
    out << d.node_ids[r];
    for (int c = 0; c < 4; ++c)
      out << ',' << d.f(r, c).real() << ',' << d.f(r, c).imag();
    for (int c = 0; c < 4; ++c)
      out << ',' << d.g(r, c).real() << ',' << d.g(r, c).imag();
    out << '\n';
  }
}

inline CauchyData read_cauchy_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  CauchyData d;
  std::vector<std::array<double, 16>> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::getline(ss, tok, ',');
    d.node_ids.push_back((Eigen::Index)std::stoll(tok));
    std::array<double, 16> v{};
    for (int i = 0; i < 16; ++i) {
      std::getline(ss, tok, ',');
      v[i] = std::stod(tok);
    }
    vals.push_back(v);
  }
  const Eigen::Index n = (Eigen::Index)vals.size();
  d.f.resize(n, 4);
  d.g.resize(n, 4);
  for (Eigen::Index r = 0; r < n; ++r)
    for (int c = 0; c < 4; ++c) {
      d.f(r, c) = Complex(vals[r][2 * c], vals[r][2 * c + 1]);
      d.g(r, c) = Complex(vals[r][8 + 2 * c], vals[r][8 + 2 * c + 1]);
    }
  return d;
}

}  // namespace tcr
