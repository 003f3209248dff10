#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "tcr/harness.hpp"

using namespace tcr;

namespace {
const std::array<double, 7> kMedium = {1.0, 0.8, 1.2, 0.9, 1.1, 0.7, 1.3};

StudySpec base_spec() {
  StudySpec s;
  s.resolution = 12;
  s.medium = kMedium;
  s.sources = {{{0.3, 0.2, 1.8}, 0, {1.0, 0.0}},
               {{-0.5, 0.4, -0.9}, 3, {0.7, 0.3}}};
  s.quadrature.path_points = 150;
  return s;
}
}  // namespace

TEST_CASE("sources inside or near the domain are rejected") {
  const auto b = make_bundle<double>(kMedium);
  auto s = base_spec();
  s.sources = {{{0.0, 0.0, 0.5}, 0, {1.0, 0.0}}};
  CHECK_THROWS_AS(manufacture_solution(s, b), SourceInsideDomain);
  s.sources = {{{0.0, 0.0, 1.05}, 0, {1.0, 0.0}}};  // within the 0.1 R margin
  CHECK_THROWS_AS(manufacture_solution(s, b), SourceInsideDomain);
  s.sources.clear();
  CHECK_THROWS_AS(manufacture_solution(s, b), SourceInsideDomain);
}

TEST_CASE("manufactured field is linear in its sources") {
  const auto b = make_bundle<double>(kMedium);
  auto s = base_spec();
  auto s1 = s, s2 = s;
  s1.sources = {s.sources[0]};
  s2.sources = {s.sources[1]};
  const auto both = manufacture_solution(s, b);
  const auto one = manufacture_solution(s1, b);
  const auto two = manufacture_solution(s2, b);
  const Vector3 x(0.1, -0.2, 0.4);
  CHECK((both.value(x) - one.value(x) - two.value(x)).norm() < 1e-15);
}

TEST_CASE("manufactured field solves the governing system inside the domain") {
  const auto b = make_bundle<double>(kMedium);
  const auto ms = manufacture_solution(base_spec(), b);
  double worst = 0;
  for (int p = 0; p < 10; ++p) {
    const double t = p / 9.0;
    const Vector3 x(0.4 * std::cos(2.1 * p), 0.4 * std::sin(2.1 * p), 0.1 + 0.7 * t);
    auto field = [&](const Vector3& y) { return ms.value(y); };
    const Vector4c res = apply_system_operator_fd(field, x, b.params);
    worst = std::max(worst, res.norm() / ms.value(x).norm());
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("sampled data is deterministic and matches the field") {
  const auto b = make_bundle<double>(kMedium);
  const auto ms = manufacture_solution(base_spec(), b);
  const auto mesh = make_cap_domain(1.0, 12);
  const CauchyData a = sample_cauchy_data(ms, mesh);
  const CauchyData c = sample_cauchy_data(ms, mesh);
  CHECK((a.f - c.f).norm() == 0.0);
  CHECK((a.g - c.g).norm() == 0.0);
  // Stress row vs the independent finite-difference path at a few nodes.
  for (Eigen::Index r : {Eigen::Index(0), a.f.rows() / 2, a.f.rows() - 1}) {
    const Eigen::Index i = a.node_ids[r];
    const Vector3 y = mesh.nodes.row(i).transpose();
    const Vector3 nu = mesh.normals.row(i).transpose();
    auto field = [&](const Vector3& p) { return ms.value(p); };
    const Vector4c fd = apply_stress_R(field, StressContext{y, nu}, b.params);
    CHECK((fd - a.g.row(r).transpose()).norm() < 1e-6 * fd.norm());
  }
}

TEST_CASE("noise injection calibrates exactly and reproducibly") {
  const auto b = make_bundle<double>(kMedium);
  const auto ms = manufacture_solution(base_spec(), b);
  const auto mesh = make_cap_domain(1.0, 12);
  const CauchyData clean = sample_cauchy_data(ms, mesh);

  SUBCASE("zero level is a no-op") {
    const CauchyData same = add_noise(clean, 0.0, 5);
    CHECK((same.f - clean.f).norm() == 0.0);
    CHECK((same.g - clean.g).norm() == 0.0);
  }
  SUBCASE("certified norm equals the requested level") {
    const double delta = 1e-2;
    const CauchyData noisy = add_noise(clean, delta, 5);
    double mf = 0, mg = 0;
    for (Eigen::Index r = 0; r < clean.f.rows(); ++r)
      for (int c = 0; c < 4; ++c) {
        mf = std::max(mf, std::abs(clean.f(r, c) - noisy.f(r, c)));
        mg = std::max(mg, std::abs(clean.g(r, c) - noisy.g(r, c)));
      }
    CHECK(mf + mg <= delta);
    CHECK(mf + mg > delta * (1 - 1e-6));
  }
  SUBCASE("same seed bitwise equal, different seed different") {
    const CauchyData n1 = add_noise(clean, 1e-3, 5);
    const CauchyData n2 = add_noise(clean, 1e-3, 5);
    const CauchyData n3 = add_noise(clean, 1e-3, 6);
    CHECK((n1.f - n2.f).norm() == 0.0);
    CHECK((n1.g - n2.g).norm() == 0.0);
    CHECK((n1.f - n3.f).norm() > 0.0);
  }
  SUBCASE("negative level is rejected") {
    CHECK_THROWS_AS(add_noise(clean, -1e-3, 5), InvalidNoiseModel);
  }
}

TEST_CASE("rate fitting") {
  SUBCASE("pure exponential decay") {
    std::vector<double> taus, errs;
    for (double t : {1.0, 2.0, 3.0, 4.0}) {
      taus.push_back(t);
      errs.push_back(std::exp(-2.0 * t));
    }
    const FitResult f = fit_rate(taus, errs);
    CHECK(std::abs(f.slope + 2.0) < 1e-12);
    CHECK(f.r_squared > 1.0 - 1e-12);
  }
  SUBCASE("power law in the noise level") {
    std::vector<double> lx, errs;
    for (double d : {1e-1, 1e-2, 1e-3}) {
      lx.push_back(std::log(d));
      errs.push_back(std::pow(d, 0.8));
    }
    const FitResult f = fit_rate(lx, errs);
    CHECK(std::abs(f.slope - 0.8) < 1e-12);
  }
  SUBCASE("degenerate inputs") {
    CHECK_THROWS_AS(fit_rate({1.0, 1.0, 1.0}, {0.5, 0.5, 0.5}), DegenerateFit);
    CHECK_THROWS_AS(fit_rate({1.0, 2.0}, {0.5, 0.25}), DegenerateFit);
    CHECK_THROWS_AS(fit_rate({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}), DegenerateFit);
  }
}

TEST_CASE("cauchy data csv round trip") {
  const auto b = make_bundle<double>(kMedium);
  const auto ms = manufacture_solution(base_spec(), b);
  const auto mesh = make_cap_domain(1.0, 8);
  const CauchyData d = sample_cauchy_data(ms, mesh);
  const std::string path = "cauchy_roundtrip_test.csv";
  write_cauchy_csv(d, path);
  const CauchyData back = read_cauchy_csv(path);
  CHECK(back.node_ids == d.node_ids);
  CHECK((back.f - d.f).norm() == 0.0);
  CHECK((back.g - d.g).norm() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("study run produces a complete report with negative tau slope") {
  auto s = base_spec();
  s.resolution = 16;  // standoff: 3x node spacing must fit inside 0.4 clearance
  s.taus = {4.0, 6.0, 8.0};
  s.deltas = {1e-1, 1e-2, 1e-3};
  s.bound_M = 10.0;
  s.eval_points = {{0.0, 0.0, 0.6}};
  s.seed = 7;
  const StudyReport rep = run_study(s);
  CHECK(rep.complete);
  CHECK(rep.rows.size() == 6);
  REQUIRE(rep.tau_fit.has_value());
  CHECK(rep.tau_fit->slope < 0.0);
  REQUIRE(rep.delta_fit.has_value());
  CHECK(rep.delta_fit->slope > 0.0);
  for (const auto& row : rep.rows) CHECK(row.err_abs >= 0.0);

  // End-to-end determinism: identical spec and seed give identical rows.
  const StudyReport rep2 = run_study(s);
  REQUIRE(rep2.rows.size() == rep.rows.size());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].err_abs == rep2.rows[i].err_abs);
    CHECK(rep.rows[i].err_rel == rep2.rows[i].err_rel);
  }
}
