#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcr/harness.hpp"

using namespace tcr;

namespace {
const std::array<double, 7> kMedium = {1.0, 0.8, 1.2, 0.9, 1.1, 0.7, 1.3};

StudySpec base_spec(int resolution) {
  StudySpec s;
  s.resolution = resolution;
  s.medium = kMedium;
  s.sources = {{{0.3, 0.2, 1.8}, 0, {1.0, 0.0}},
               {{-0.5, 0.4, -0.9}, 3, {0.7, 0.3}}};
  s.quadrature.path_points = 200;
  return s;
}
}  // namespace

TEST_CASE("full-boundary representation reproduces the manufactured field") {
  const auto spec = base_spec(16);
  const auto b = make_bundle<double>(kMedium);
  const auto mesh = make_cap_domain(1.0, 16);
  const auto ms = manufacture_solution(spec, b);
  const CauchyData data = sample_cauchy_data(ms, mesh, std::nullopt);
  for (const Vector3& x : {Vector3(0.05, -0.02, 0.5), Vector3(0.2, 0.1, 0.3)}) {
    const Vector4c got = represent_full(x, mesh, data, b, spec.quadrature);
    const Vector4c want = ms.value(x);
    CHECK((got - want).norm() < 1e-5 * want.norm());
  }
}

TEST_CASE("representation error shrinks under mesh refinement") {
  const auto b = make_bundle<double>(kMedium);
  const auto spec8 = base_spec(8);
  const auto ms = manufacture_solution(spec8, b);
  const Vector3 x(0.0, 0.0, 0.5);
  double err[2];
  int idx = 0;
  for (int res : {16, 32}) {
    const auto mesh = make_cap_domain(1.0, res);
    const CauchyData data = sample_cauchy_data(ms, mesh, std::nullopt);
    err[idx++] =
        (represent_full(x, mesh, data, b) - ms.value(x)).norm() / ms.value(x).norm();
  }
  CHECK(err[1] < err[0] / 4.0);
}

TEST_CASE("evaluation too close to the boundary is rejected") {
  const auto b = make_bundle<double>(kMedium);
  const auto mesh = make_cap_domain(1.0, 12);
  const auto ms = manufacture_solution(base_spec(12), b);
  const CauchyData data = sample_cauchy_data(ms, mesh, std::nullopt);
  CHECK_THROWS_AS(represent_full(Vector3(0, 0, 0.999), mesh, data, b),
                  StandoffViolation);
}

TEST_CASE("partial-data reconstruction converges toward the field as tau grows") {
  const auto spec = base_spec(16);
  const auto b = make_bundle<double>(kMedium);
  const auto mesh = make_cap_domain(1.0, 16);
  const auto ms = manufacture_solution(spec, b);
  const CauchyData onS = sample_cauchy_data(ms, mesh, SurfaceTag::S);
  const Vector3 x(0, 0, 0.6);
  const Vector4c truth = ms.value(x);
  double prev = 1e300;
  for (double tau : {4.0, 7.0, 10.0}) {
    ReconConfig cfg;
    cfg.kernel = KernelSpec::exponential(tau, 3);
    cfg.tau = tau;
    cfg.quadrature = spec.quadrature;
    const double err = (reconstruct_exact(x, onS, cfg, mesh, b) - truth).norm() /
                       truth.norm();
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 5e-3);
}

TEST_CASE("noisy reconstruction with the automatic parameter rule") {
  const auto spec = base_spec(16);
  const auto b = make_bundle<double>(kMedium);
  const auto mesh = make_cap_domain(1.0, 16);
  const auto ms = manufacture_solution(spec, b);
  const CauchyData onS = sample_cauchy_data(ms, mesh, SurfaceTag::S);
  const Vector3 x(0, 0, 0.6);
  ReconConfig cfg;
  cfg.delta = 1e-3;
  cfg.M = 10.0;
  cfg.quadrature = spec.quadrature;
  const double tau = choose_tau(cfg, DomainKind::Cap, mesh);
  cfg.kernel = KernelSpec::exponential(tau, 3);
  cfg.tau = tau;
  const CauchyData noisy = add_noise(onS, cfg.delta, 19);
  const Vector4c got = reconstruct_noisy(x, noisy, cfg, mesh, b);
  const Vector4c truth = ms.value(x);
  // Error should be of the order of the noise, far below O(1).
  CHECK((got - truth).norm() / truth.norm() < 0.05);
}

TEST_CASE("parameter rule values and validation") {
  const auto mesh = make_cap_domain(1.0, 8);
  ReconConfig cfg;
  cfg.delta = 1e-3;
  cfg.M = 10.0;
  // Cap of radius 1: the domain height is read off the mesh bounding box,
  // which approaches 1 from below as the mesh refines, so tau is slightly
  // above ln(M / delta) = ln(1e4).
  const double tau_cap = choose_tau(cfg, DomainKind::Cap, mesh);
  const double xn0 = mesh.nodes.col(2).maxCoeff();
  CHECK(std::abs(tau_cap - std::log(1e4) / xn0) < 1e-12);
  CHECK(tau_cap > 9.21034037197618274);
  CHECK(tau_cap < 9.21034037197618274 * 1.01);

  ReconConfig bad = cfg;
  bad.delta = 0.0;
  CHECK_THROWS_AS(choose_tau(bad, DomainKind::Cap, mesh), InvalidNoiseModel);
  bad.delta = 20.0;  // delta >= M
  CHECK_THROWS_AS(choose_tau(bad, DomainKind::Cap, mesh), InvalidNoiseModel);

  const auto cone = make_cone_domain(ConeSpec(2.0, 1.0), 8);
  const double tc = choose_tau(cfg, DomainKind::Cone, cone, 2.0);
  CHECK(tc > 0.0);
}

TEST_CASE("stability bound is positive and decreasing in delta") {
  const auto mesh = make_cap_domain(1.0, 12);
  const Vector3 x(0, 0, 0.5);
  ReconConfig cfg;
  cfg.M = 10.0;
  double prev = 1e300;
  for (double d : {1e-1, 1e-2, 1e-3}) {
    cfg.delta = d;
    const double bnd = stability_bound(x, cfg, mesh);
    CHECK(bnd > 0.0);
    CHECK(bnd < prev);
    prev = bnd;
  }
}
