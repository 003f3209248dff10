#pragma once
// Quadrature engines: Gauss-Legendre rules, panelised surface/path rules,
// and the semi-infinite oscillatory integrator (half-period panels plus Wynn
// epsilon extrapolation) used by the kernel u-integrals.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "tcr/errors.hpp"

namespace tcr {

inline constexpr double kPiOsc = 3.14159265358979323846;

struct QuadratureControls {
  double u_max = 400.0;        // hard cap on the semi-infinite range
  int panel_count = 96;        // half-period panels before extrapolation
  int extrap_depth = 5;        // leading partial sums dropped before Wynn
  double tolerance = 1e-8;     // target relative tolerance
  int path_points = 400;       // Gauss points on the finite kernel path
  double cone_nsig = 9.0;      // Gaussian-width multiples kept on the cone path
};

// Gauss-Legendre nodes/weights on [-1, 1], computed once per order by Newton
// iteration on the recurrence and cached.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(
    int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double z = std::cos(3.141592653589793238L * (i + 0.75L) / (n + 0.5L));
    long double pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        const long double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
      }
      pp = n * (z * p0 - p1) / (z * z - 1);
      const long double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-19L) break;
    }
    x[i] = (double)-z;
    x[n - 1 - i] = (double)z;
    w[i] = w[n - 1 - i] = (double)(2.0L / ((1.0L - z * z) * pp * pp));
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

// Integral over [a, b] with a fixed-order Gauss rule.
template <typename F>
auto panel_integrate(F&& f, double a, double b, int order = 16)
    -> decltype(f(0.0)) {
  const auto& [xs, ws] = gauss_legendre(order);
  decltype(f(0.0)) acc{};
  const double half = (b - a) / 2, mid = (a + b) / 2;
  for (size_t i = 0; i < xs.size(); ++i) acc += ws[i] * f(half * xs[i] + mid);
  return acc * half;
}

// Wynn epsilon algorithm on a sequence of partial sums; returns the deepest
// even-column estimate.
template <typename T>
T wynn_epsilon(const std::vector<T>& sums) {
  if (sums.empty()) throw QuadratureFailure("empty partial-sum sequence");
  std::vector<T> prev(sums.size() + 1, T{});
  std::vector<T> cur(sums.begin(), sums.end());
  T best = cur.back();
  for (size_t k = 1; k < sums.size(); ++k) {
    std::vector<T> nxt(cur.size() - 1);
    for (size_t i = 0; i + 1 < cur.size(); ++i) {
      const T d = cur[i + 1] - cur[i];
      nxt[i] = (std::abs(d) == 0) ? prev[i + 1] : prev[i + 1] + T(1) / d;
    }
    prev = std::move(cur);
    cur = std::move(nxt);
    if (k % 2 == 0 && !cur.empty()) best = cur.back();
  }
  return best;
}

// Semi-infinite integral of an oscillatory integrand with known dominant
// frequency: half-period panels, then epsilon extrapolation of the partial
// sums (the integrand decays only algebraically, so plain truncation stalls).
template <typename F>
auto osc_integral(F&& f, double freq, const QuadratureControls& q = {},
                  double u0 = 0.0) -> decltype(f(0.0)) {
  using T = decltype(f(0.0));
  const double h = kPiOsc / std::max(freq, 1e-8);
  int npanels = q.panel_count;
  if (u0 + npanels * h > q.u_max) {
    npanels = (int)((q.u_max - u0) / h);
    if (npanels < 8)
      throw QuadratureFailure("tail window shorter than eight half-periods");
  }
  std::vector<T> partial;
  partial.reserve(npanels);
  T acc{};
  for (int j = 0; j < npanels; ++j) {
    acc += panel_integrate(f, u0 + j * h, u0 + (j + 1) * h, 16);
    partial.push_back(acc);
  }
  const int skip = std::min<int>(q.extrap_depth, (int)partial.size() - 4);
  std::vector<T> tail(partial.begin() + std::max(skip, 0), partial.end());
  if (tail.size() < 4) throw QuadratureFailure("too few oscillation panels");
  return wynn_epsilon(tail);
}

}  // namespace tcr
