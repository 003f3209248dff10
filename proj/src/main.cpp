// Command-line front end: verification suites, one-shot reconstruction from a
// Cauchy-data file, and sweep studies driven by a JSON config.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "tcr/harness.hpp"

using nlohmann::json;
using namespace tcr;

namespace {

struct Gate {
  bool pass = true;
  void check(const std::string& name, bool ok, double value, double limit) {
    std::printf("%-52s %s  (value %.3e, limit %.3e)\n", name.c_str(),
                ok ? "PASS" : "FAIL", value, limit);
    pass = pass && ok;
  }
};

// --- verify fundamental ----------------------------------------------------

int verify_fundamental() {
  Gate gate;
  std::mt19937_64 rng(20260826);
  auto uni = [&](double a, double b) {
    return a + (b - a) * (double)(rng() >> 11) * 0x1.0p-53;
  };
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const std::array<double, 7> raw = {uni(0.5, 2.0), uni(0.5, 2.0), uni(0.5, 2.0),
                                       uni(0.5, 2.0), uni(0.5, 2.0), uni(0.5, 2.0),
                                       uni(0.5, 2.0)};
    const auto b = make_bundle<double>(raw);
    for (int pt = 0; pt < 4; ++pt) {
      Vector3 x(uni(-1, 1), uni(-1, 1), uni(-1, 1));
      if (x.norm() < 0.4) x *= 0.6 / x.norm();
      for (int col = 0; col < 4; ++col) {
        auto field = [&](const Vector3& y) -> Vector4c {
          return psi(y, b).col(col);
        };
        const Vector4c res = apply_system_operator_fd(field, x, b.params);
        const double scale = psi(x, b).col(col).norm() / (x.norm() * x.norm());
        worst = std::max(worst, res.norm() / std::max(scale, 1e-300));
      }
    }
  }
  gate.check("system residual of fundamental columns", worst < 1e-5, worst, 1e-5);
  return gate.pass ? 0 : 1;
}

// --- verify kernel ----------------------------------------------------------

int verify_kernel() {
  Gate gate;
  QuadratureControls q;

  // tau -> 0 reduction: kernel value is -(pi/(2 r)) e^{-k r} times the
  // normalizing constant; here we compare the normalized kernel directly.
  double worst11 = 0.0;
  for (double r : {0.3, 0.7, 1.4, 2.5}) {
    for (double k : {0.5, 1.0, 2.0, 4.0, 0.1}) {
      const Vector3 x(0, 0, r), y(0, 0, 0);
      const auto spec = KernelSpec::exponential(0.0, 3);
      const Complex got = phi_cap(y, x, Complex(k, 0), spec, q);
      const Complex want = std::exp(-k * r) / r;
      worst11 = std::max(worst11, std::abs(got - want) / std::abs(want));
    }
  }
  gate.check("kernel tau->0 reduction", worst11 < 1e-6, worst11, 1e-6);

  // Closed-form tau-derivative vs. oscillatory quadrature of its integrand.
  double worst12a = 0.0, worst12b = 0.0;
  for (double tau : {2.0, 5.0, 9.0}) {
    for (double k : {0.5, 1.5, 3.0}) {
      const Vector3 x(0.3, -0.2, 0.8), y(0.1, 0.4, 0.2);
      const auto spec = KernelSpec::exponential(tau, 3);
      const Complex cf = phi_cap_dtau(y, x, k, spec);
      const Complex qd = detail_carleman::phi_cap_dtau_quadrature(
          y, x, Complex(k, 0), spec, q);
      if (tau > k)
        worst12a = std::max(worst12a, std::abs(cf - qd) / std::abs(cf));
      else
        worst12b = std::max(worst12b, std::abs(qd));
    }
  }
  for (double k : {6.0, 12.0}) {
    const Vector3 x(0.3, -0.2, 0.8), y(0.1, 0.4, 0.2);
    const auto spec = KernelSpec::exponential(2.0, 3);
    const Complex qd = detail_carleman::phi_cap_dtau_quadrature(
        y, x, Complex(k, 0), spec, q);
    worst12b = std::max(worst12b, std::abs(qd));
  }
  gate.check("tau-derivative identity (tau > k)", worst12a < 1e-4, worst12a, 1e-4);
  gate.check("tau-derivative identity (tau < k)", worst12b < 1e-6, worst12b, 1e-6);

  // Cone kernel, rho = 2: error-function-weighted path route vs. the direct
  // slow-variable quadrature.
  double worst20 = 0.0;
  for (double tau : {3.0, 6.0}) {
    for (double k : {0.8, 2.0}) {
      const Vector3 x(0.1, 0.05, 0.8), y(0.4, -0.3, 0.1);
      const auto spec = KernelSpec::mittag_leffler(tau, 2.0, 3);
      const Complex fast = phi_cone(y, x, Complex(k, 0), spec, q);
      const Complex slow = detail_carleman::phi_cone_direct(y, x, Complex(k, 0), spec, q);
      worst20 = std::max(worst20, std::abs(fast - slow) / std::abs(fast));
    }
  }
  gate.check("cone kernel path vs direct quadrature", worst20 < 1e-6, worst20, 1e-6);
  return gate.pass ? 0 : 1;
}

// --- verify carleman --------------------------------------------------------

int verify_carleman() {
  Gate gate;
  const auto b = make_bundle<double>({1.0, 0.8, 1.2, 0.9, 1.1, 0.7, 1.3});
  const auto mesh = make_cap_domain(1.0, 24);
  QuadratureControls q;
  q.path_points = 250;
  const Vector3 x(0, 0, 0.6);
  std::vector<double> taus = {5, 10, 20}, eps;
  for (double tau : taus)
    eps.push_back(epsilon_sigma(mesh, x, b, KernelSpec::exponential(tau, 3), q));
  bool mono = eps[0] > eps[1] && eps[1] > eps[2];
  gate.check("truncation integral decreasing in tau", mono,
             eps.back() / eps.front(), 1.0);
  const FitResult fit = fit_rate(taus, eps);
  const double reldev = std::abs(fit.slope - (-x(2))) / x(2);
  gate.check("decay slope near -x_n", reldev < 0.20, fit.slope, -x(2));
  return gate.pass ? 0 : 1;
}

// --- JSON config ------------------------------------------------------------

StudySpec parse_spec(const json& j) {
  StudySpec s;
  if (j.contains("domain")) {
    const auto& d = j["domain"];
    const std::string kind = d.value("kind", "cap");
    if (kind == "cap") s.domain = DomainKind::Cap;
    else if (kind == "cone") s.domain = DomainKind::Cone;
    else throw CLI::ValidationError("domain.kind must be 'cap' or 'cone'");
    s.radius = d.value("radius", s.radius);
    s.rho_exp = d.value("rho_exp", s.rho_exp);
    s.resolution = d.value("resolution", s.resolution);
  }
  if (j.contains("medium")) {
    const auto& m = j["medium"];
    s.medium = {m.value("lambda", 1.0), m.value("mu", 0.8),
                m.value("rho", 1.2),    m.value("omega", 0.9),
                m.value("gamma", 1.1),  m.value("eta", 0.7),
                m.value("theta", 1.3)};
  }
  for (const auto& src : j.value("sources", json::array())) {
    SourceSpec sp;
    const auto& p = src.at("point");
    sp.point = Vector3(p.at(0).get<double>(), p.at(1).get<double>(),
                       p.at(2).get<double>());
    sp.column = src.value("column", 0);
    sp.weight = Complex(src.value("weight_re", 1.0), src.value("weight_im", 0.0));
    s.sources.push_back(sp);
  }
  if (j.contains("sweep")) {
    const auto& sw = j["sweep"];
    for (const auto& t : sw.value("taus", json::array()))
      s.taus.push_back(t.get<double>());
    for (const auto& d : sw.value("deltas", json::array()))
      s.deltas.push_back(d.get<double>());
    s.bound_M = sw.value("M", s.bound_M);
  }
  for (const auto& p : j.value("eval_points", json::array()))
    s.eval_points.push_back(Vector3(p.at(0).get<double>(), p.at(1).get<double>(),
                                    p.at(2).get<double>()));
  if (j.contains("quadrature")) {
    const auto& qq = j["quadrature"];
    s.quadrature.u_max = qq.value("u_max", s.quadrature.u_max);
    s.quadrature.panel_count = qq.value("panel_count", s.quadrature.panel_count);
    s.quadrature.path_points = qq.value("path_points", s.quadrature.path_points);
    s.quadrature.tolerance = qq.value("tolerance", s.quadrature.tolerance);
    s.quadrature.cone_nsig = qq.value("cone_nsig", s.quadrature.cone_nsig);
  }
  s.seed = j.value("seed", (std::uint64_t)0);
  s.out_dir = j.value("out", std::string("."));
  return s;
}

json fit_to_json(const FitResult& f) {
  return json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"r_squared", f.r_squared},
              {"points_used", f.points_used}};
}

// --- study ------------------------------------------------------------------

int run_study_cmd(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open config " << config_path << "\n";
    return 2;
  }
  const json j = json::parse(in);
  const StudySpec spec = parse_spec(j);
  std::filesystem::create_directories(spec.out_dir);
  const StudyReport rep = run_study(spec);

  write_report_csv(rep, spec.out_dir + "/report.csv");
  dump_mesh_csv(rep.mesh, spec.out_dir + "/mesh.csv");

  json summary;
  summary["complete"] = rep.complete;
  summary["discretization_floor"] = rep.discretization_floor;
  summary["rows"] = rep.rows.size();
  if (rep.tau_fit) summary["tau_fit"] = fit_to_json(*rep.tau_fit);
  if (rep.delta_fit) summary["delta_fit"] = fit_to_json(*rep.delta_fit);
  bool pass = rep.complete;
  if (!spec.taus.empty()) pass = pass && rep.tau_fit && rep.tau_fit->slope < 0;
  if (!spec.deltas.empty()) pass = pass && rep.delta_fit && rep.delta_fit->slope > 0;
  summary["pass"] = pass;
  std::ofstream(spec.out_dir + "/summary.json") << summary.dump(2) << "\n";
  std::cout << summary.dump(2) << "\n";
  return pass ? 0 : 1;
}

// --- reconstruct ------------------------------------------------------------

int run_reconstruct_cmd(const std::string& config_path, const std::string& data_path,
                        double tau_flag) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open config " << config_path << "\n";
    return 2;
  }
  const json j = json::parse(in);
  const StudySpec spec = parse_spec(j);
  std::filesystem::create_directories(spec.out_dir);
  const auto b = make_bundle<double>(spec.medium);
  const BoundaryMesh mesh = spec.domain == DomainKind::Cap
                                ? make_cap_domain(spec.radius, spec.resolution)
                                : make_cone_domain(ConeSpec(spec.rho_exp, spec.radius),
                                                   spec.resolution);
  dump_mesh_csv(mesh, spec.out_dir + "/mesh.csv");
  if (data_path.empty()) {
    std::cout << "mesh written to " << spec.out_dir
              << "/mesh.csv; supply --data to reconstruct\n";
    return 0;
  }
  const CauchyData data = read_cauchy_csv(data_path);
  double tau = tau_flag;
  if (!(tau > 0) && !spec.taus.empty()) tau = spec.taus.front();
  if (!(tau > 0)) {
    std::cerr << "no tau given (use --tau or sweep.taus in the config)\n";
    return 2;
  }
  ReconConfig cfg;
  cfg.kernel = spec.domain == DomainKind::Cap
                   ? KernelSpec::exponential(tau, 3)
                   : KernelSpec::mittag_leffler(tau, spec.rho_exp, 3);
  cfg.tau = tau;
  cfg.quadrature = spec.quadrature;

  std::ofstream out(spec.out_dir + "/reconstruction.csv");
  out.precision(17);
  out << "point_id,x1,x2,x3,tau";
  for (int c = 1; c <= 4; ++c) out << ",U_" << c << "_re,U_" << c << "_im";
  out << '\n';
  for (std::size_t p = 0; p < spec.eval_points.size(); ++p) {
    const Vector3& x = spec.eval_points[p];
    const Vector4c u = reconstruct_exact(x, data, cfg, mesh, b);
    out << p << ',' << x(0) << ',' << x(1) << ',' << x(2) << ',' << tau;
    for (int c = 0; c < 4; ++c) out << ',' << u(c).real() << ',' << u(c).imag();
    out << '\n';
    std::printf("point %zu  (%.3f, %.3f, %.3f):", p, x(0), x(1), x(2));
    for (int c = 0; c < 4; ++c)
      std::printf("  %.6e%+.6ei", u(c).real(), u(c).imag());
    std::printf("\n");
  }
  std::cout << "wrote " << spec.out_dir << "/reconstruction.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-data Cauchy reconstruction for coupled thermoelasticity"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->require_subcommand(1);
  auto* vf = verify->add_subcommand("fundamental", "system residual of the fundamental matrix");
  auto* vk = verify->add_subcommand("kernel", "kernel quadrature oracles");
  auto* vc = verify->add_subcommand("carleman", "truncation-integral decay");

  std::string config_path, data_path;
  double tau_flag = 0.0;
  auto* study = app.add_subcommand("study", "run a sweep study from a JSON config");
  study->add_option("--config", config_path, "JSON config file")->required();

  std::string rconfig_path, rdata_path;
  double rtau = 0.0;
  auto* recon = app.add_subcommand("reconstruct", "one-shot reconstruction from a data file");
  recon->add_option("--config", rconfig_path, "JSON config file")->required();
  recon->add_option("--data", rdata_path, "Cauchy-data CSV matched to the mesh dump");
  recon->add_option("--tau", rtau, "regularization parameter");

  CLI11_PARSE(app, argc, argv);
  (void)data_path;
  (void)tau_flag;

  try {
    if (vf->parsed()) return verify_fundamental();
    if (vk->parsed()) return verify_kernel();
    if (vc->parsed()) return verify_carleman();
    if (study->parsed()) return run_study_cmd(config_path);
    if (recon->parsed()) return run_reconstruct_cmd(rconfig_path, rdata_path, rtau);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
