#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "tcr/geometry.hpp"

using namespace tcr;
using Complex = std::complex<double>;
using Vector3 = Eigen::Vector3d;
constexpr double kPi = 3.14159265358979323846;

TEST_CASE("cap mesh areas converge to hemisphere plus disk") {
  // Radius 1: spherical part 2 pi, flat part pi.
  const auto mesh = make_cap_domain(1.0, 24);
  CHECK(std::abs(mesh.area(SurfaceTag::S) - 2.0 * kPi) < 1e-6);
  CHECK(std::abs(mesh.area(SurfaceTag::Sigma) - kPi) < 1e-6);
}

TEST_CASE("cap mesh normals are outward units") {
  const auto mesh = make_cap_domain(1.5, 16);
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    const Vector3 y = mesh.nodes.row(i).transpose();
    const Vector3 nu = mesh.normals.row(i).transpose();
    CHECK(std::abs(nu.norm() - 1.0) < 1e-12);
    if (mesh.tags[i] == SurfaceTag::S) {
      // Spherical part: normal is radial and points away from the origin.
      CHECK((nu - y / y.norm()).norm() < 1e-12);
    } else {
      // Flat part: normal is -e3.
      CHECK((nu - Vector3(0, 0, -1)).norm() < 1e-12);
      CHECK(std::abs(y(2)) < 1e-12);
    }
  }
}

TEST_CASE("surface integrals of smooth moments on the cap") {
  const auto mesh = make_cap_domain(1.0, 24);
  // int z dS over the unit hemisphere = pi.
  const Complex mz = surface_integrate(mesh, SurfaceTag::S, [&](Eigen::Index i) {
    return Complex(mesh.nodes(i, 2), 0.0);
  });
  CHECK(std::abs(mz - Complex(kPi, 0)) < 1e-8);
  // Odd moment vanishes by symmetry.
  const Complex mx = surface_integrate(mesh, SurfaceTag::S, [&](Eigen::Index i) {
    return Complex(mesh.nodes(i, 0), 0.0);
  });
  CHECK(std::abs(mx) < 1e-10);
}

TEST_CASE("cone mesh areas for opening exponent two") {
  // rho = 2 gives a quarter-opening cone (half-angle pi/4) truncated by the
  // unit sphere: spherical part 2 pi (1 - cos(pi/4)), lateral part
  // pi sin(pi/4); values frozen from the closed forms.
  const auto mesh = make_cone_domain(ConeSpec(2.0, 1.0), 32);
  CHECK(std::abs(mesh.area(SurfaceTag::S) - 1.84030236902122023) < 1e-6);
  CHECK(std::abs(mesh.area(SurfaceTag::Sigma) - 2.22144146907918312) < 1e-6);
}

TEST_CASE("cone normals are outward units and the lateral slope is correct") {
  const ConeSpec spec(2.0, 1.0);
  const auto mesh = make_cone_domain(spec, 20);
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    const Vector3 y = mesh.nodes.row(i).transpose();
    const Vector3 nu = mesh.normals.row(i).transpose();
    CHECK(std::abs(nu.norm() - 1.0) < 1e-12);
    if (mesh.tags[i] == SurfaceTag::S) {
      CHECK((nu - y / y.norm()).norm() < 1e-12);
    } else {
      // Lateral nodes satisfy |y'| = tau_rho * y3 and the normal points away
      // from the axis with the matching slope.
      const double rxy = std::hypot(y(0), y(1));
      CHECK(std::abs(rxy - spec.tau_rho * y(2)) < 1e-10);
      CHECK(std::abs(nu(2) + spec.tau_rho * std::hypot(nu(0), nu(1))) < 1e-10);
      CHECK(nu.dot(Vector3(y(0), y(1), 0.0)) > 0.0);
    }
  }
}

TEST_CASE("cone spec rejects degenerate parameters") {
  CHECK_THROWS_AS(ConeSpec(1.0, 1.0), ParameterViolation);
  CHECK_THROWS_AS(ConeSpec(0.5, 1.0), ParameterViolation);
  CHECK_THROWS_AS(ConeSpec(2.0, 0.0), ParameterViolation);
}

TEST_CASE("areas are spectrally accurate even on coarse meshes") {
  // The Gauss-panel rule already resolves the area to near machine
  // precision at the coarsest supported resolution.
  CHECK(std::abs(make_cap_domain(1.0, 8).area(SurfaceTag::S) - 2 * kPi) < 1e-12);
  CHECK(std::abs(make_cap_domain(1.0, 16).area(SurfaceTag::S) - 2 * kPi) < 1e-12);
}

TEST_CASE("mesh dump is readable and complete") {
  const auto mesh = make_cap_domain(1.0, 8);
  const std::string path = "mesh_dump_test.csv";
  dump_mesh_csv(mesh, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == "tag,x1,x2,x3,nu1,nu2,nu3,weight");
  Eigen::Index rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == mesh.size());
  std::remove(path.c_str());
}
