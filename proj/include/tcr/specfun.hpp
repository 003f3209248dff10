#pragma once
// Special functions required by the reconstruction kernels:
//   * Bessel J_m for complex argument (m = 0..3), exposed through the
//     entire scaled form cms(m, z) = J_m(z)/z^m used by the kernel jets,
//   * the Faddeeva function and complex erfc,
//   * the order-rho entire function E_rho (exp for rho=1, Faddeeva-based for
//     rho=2, series/asymptotics otherwise),
//   * scalar Helmholtz fundamental solutions in 2-D and 3-D.
// Internally series are summed in long double to absorb cancellation.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include "tcr/errors.hpp"

namespace tcr {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

namespace detail {

using CLD = std::complex<long double>;

// ---- Bessel J_m, complex argument ----------------------------------------

// Power series of J_m(z)/z^m (entire in z^2); reliable for |z| <= ~14 in
// long double despite the e^|z| internal term growth.
inline CLD cms_series(int m, CLD z) {
  const CLD q = -z * z / 4.0L;
  long double mfact = 1.0L;
  for (int j = 2; j <= m; ++j) mfact *= j;
  CLD term = 1.0L / (mfact * std::pow(2.0L, (long double)m));
  CLD sum = term;
  for (int j = 1; j < 240; ++j) {
    term *= q / (long double)(j * (j + m));
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return sum;
}

// Hankel asymptotic expansion of J_m(z), |arg z| < pi, |z| large.
inline CLD besselj_asym(int m, CLD z) {
  const long double mu = 4.0L * m * m;
  const CLD zi = 1.0L / (8.0L * z);
  CLD P = 1.0L, Q = 0.0L, term = 1.0L;
  long double prev = std::numeric_limits<long double>::max();
  for (int k = 0; k < 30; ++k) {
    const long double num = mu - (2.0L * k + 1.0L) * (2.0L * k + 1.0L);
    term *= num / (long double)(k + 1) * zi;
    if (std::abs(term) > prev) break;  // divergence onset of the asymptotic tail
    prev = std::abs(term);
    if (k % 4 == 0) Q += term;
    else if (k % 4 == 1) P -= term;
    else if (k % 4 == 2) Q -= term;
    else P += term;
    if (std::abs(term) < 1e-20L) break;
  }
  const long double pi = 3.141592653589793238462643L;
  const CLD omega = z - (2.0L * m + 1.0L) * pi / 4.0L;
  return std::sqrt(2.0L / (pi * z)) * (P * std::cos(omega) - Q * std::sin(omega));
}

inline constexpr long double kBesselSeriesCut = 14.0L;

inline CLD besselj(int m, CLD z) {
  if (std::abs(z) <= kBesselSeriesCut) {
    CLD v = cms_series(m, z);
    for (int j = 0; j < m; ++j) v *= z;
    return v;
  }
  return besselj_asym(m, z);
}

}  // namespace detail

// J_m(z)/z^m, entire in z; the small-z limit is 1/(2^m m!).
inline std::complex<double> bessel_cms(int m, std::complex<double> z) {
  using detail::CLD;
  CLD zl(z.real(), z.imag());
  if (std::abs(zl) < 1e-8L) {
    long double v = 1.0L;
    for (int j = 1; j <= m; ++j) v /= 2.0L * j;
    return {(double)v, 0.0};
  }
  CLD out;
  if (std::abs(zl) <= detail::kBesselSeriesCut) {
    out = detail::cms_series(m, zl);
  } else {
    out = detail::besselj_asym(m, zl);
    for (int j = 0; j < m; ++j) out /= zl;
  }
  return {(double)out.real(), (double)out.imag()};
}

inline std::complex<double> bessel_j(int m, std::complex<double> z) {
  detail::CLD v = detail::besselj(m, detail::CLD(z.real(), z.imag()));
  return {(double)v.real(), (double)v.imag()};
}

// Bessel function of order zero, real non-negative argument.
inline double bessel_j0(double x) { return bessel_j(0, {x, 0.0}).real(); }

// ---- Faddeeva function and complex erfc -----------------------------------

namespace detail {

// Maclaurin series w(z) = sum (iz)^n / Gamma(n/2 + 1); fine for |z| < 4.
inline CLD faddeeva_series(CLD z) {
  const CLD iz = CLD(0.0L, 1.0L) * z;
  CLD term = 1.0L, sum = 1.0L;
  for (int n = 1; n < 200; ++n) {
    term *= iz;
    const long double g = std::tgammal(0.5L * n + 1.0L);
    sum += term / g;
    if (std::abs(term) / g < 1e-22L * std::abs(sum) && n > 8) break;
  }
  return sum;
}

// Continued fraction (modified Lentz), valid for Im z >= 0 away from the
// origin; used for |z| >= 4.
inline CLD faddeeva_cf(CLD z) {
  // w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - 2/(z - ...)))));
  // the denominator is evaluated by the modified Lentz algorithm.
  const long double tiny = 1e-40L;
  CLD f = z, C = z, D = 0.0L;
  for (int n = 1; n < 300; ++n) {
    const CLD a = CLD(-0.5L * n);
    D = z + a * D;
    if (std::abs(D) == 0) D = tiny;
    C = z + a / C;
    if (std::abs(C) == 0) C = tiny;
    D = 1.0L / D;
    const CLD delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0L) < 1e-19L) break;
  }
  const long double spi = 1.772453850905516027298L;  // sqrt(pi)
  return CLD(0.0L, 1.0L) / spi / f;
}

inline CLD faddeeva_upper(CLD z) {  // requires Im z >= 0
  return (std::abs(z) < 4.0L) ? faddeeva_series(z) : faddeeva_cf(z);
}

}  // namespace detail

// w(z) = exp(-z^2) erfc(-iz).
inline std::complex<double> faddeeva_w(std::complex<double> zd) {
  detail::CLD z(zd.real(), zd.imag());
  detail::CLD out;
  if (z.imag() >= 0) {
    out = detail::faddeeva_upper(z);
  } else {
    const detail::CLD z2 = -z * z;
    if (z2.real() > 700.0L)
      throw EvaluationOverflow("faddeeva reflection exp(-z^2)");
    out = 2.0L * std::exp(z2) - detail::faddeeva_upper(-z);
  }
  return {(double)out.real(), (double)out.imag()};
}

inline std::complex<double> erfc_complex(std::complex<double> z) {
  if (z.real() < 0) {
    return 2.0 - erfc_complex(-z);
  }
  const std::complex<double> mz2 = -z * z;
  if (mz2.real() > 700.0) throw EvaluationOverflow("erfc exp(-z^2)");
  const std::complex<double> i(0, 1);
  return std::exp(mz2) * faddeeva_w(i * z);
}

// ---- E_rho: entire function of order rho ----------------------------------

struct MLIndex {
  double rho_exp;
  explicit MLIndex(double rho) : rho_exp(rho) {
    if (!(rho >= 1.0)) throw ParameterViolation("rho_exp");
  }
};

namespace detail {

inline CLD ml_series(long double rho, CLD w) {
  CLD sum = 1.0L, pw = 1.0L;
  for (int n = 1; n < 2000; ++n) {
    pw *= w;
    const long double lg = std::lgammal(1.0L + n / rho);
    if (lg > 11000.0L) break;
    const CLD term = pw * std::exp(CLD(-lg, 0.0L));
    sum += term;
    if (std::abs(term) < 1e-24L * std::abs(sum) && n > 8) break;
  }
  return sum;
}

inline std::complex<double> ml_algebraic_tail(double rho, std::complex<double> w) {
  // Asymptotic algebraic part: -sum_{j>=1} w^{-j} / Gamma(1 - j/rho).
  // The series is divergent; truncate optimally at the smallest term.
  std::complex<double> sum = 0.0, wi = 1.0 / w, pw = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= 64; ++j) {
    pw *= wi;
    const double a = 1.0 - j / rho;
    if (a <= 0.0 && std::abs(a - std::round(a)) < 1e-12) continue;  // 1/Gamma = 0
    const std::complex<double> term = pw / std::tgamma(a);
    const double mag = std::abs(term);
    if (mag > prev) break;
    prev = mag;
    sum -= term;
  }
  return sum;
}

}  // namespace detail

// E_rho(w) = sum_{n>=0} w^n / Gamma(1 + n/rho); entire of order rho, growing
// like rho*exp(w^rho) in |arg w| < pi/(2 rho) and algebraically decaying
// outside that sector.
inline std::complex<double> mittag_leffler(const MLIndex& idx,
                                           std::complex<double> w) {
  const double rho = idx.rho_exp;
  if (rho == 1.0) {
    if (w.real() > 700.0) throw EvaluationOverflow("E_1 growth");
    return std::exp(w);
  }
  if (rho == 2.0) {
    // E_2(w) = exp(w^2) erfc(-w) = w_faddeeva(-i w), exact identity.
    const std::complex<double> i(0, 1);
    const std::complex<double> miw = -i * w;
    if (miw.imag() >= 0) return faddeeva_w(miw);
    const std::complex<double> w2 = w * w;
    if (w2.real() > 700.0) throw EvaluationOverflow("E_2 growth");
    return 2.0 * std::exp(w2) - faddeeva_w(i * w);
  }
  const double aw = std::abs(w);
  // Outside the growth sector the series terms peak near exp(|w|^rho) while
  // the value is only O(1/|w|); long-double accumulation loses the result to
  // cancellation once |w|^rho exceeds roughly 25.  Past that the asymptotic
  // expansion is already accurate, so switch over.
  if (std::pow(aw, rho) <= 25.0) {
    detail::CLD v = detail::ml_series((long double)rho,
                                      detail::CLD(w.real(), w.imag()));
    return {(double)v.real(), (double)v.imag()};
  }
  // Large |w|: algebraic tail plus, within its validity sector, the
  // exponentially growing/decaying term rho * exp(w^rho).
  std::complex<double> out = detail::ml_algebraic_tail(rho, w);
  if (std::abs(std::arg(w)) <= 0.75 * kPi / rho + 1e-12) {
    const std::complex<double> wr = std::pow(w, rho);
    if (wr.real() > 700.0) throw EvaluationOverflow("E_rho growth sector");
    out += rho * std::exp(wr);
  }
  return out;
}

// ---- scalar Helmholtz fundamental solutions --------------------------------

namespace detail {

// Modified Bessel K_0, complex argument, |arg z| < pi.  Power series with the
// log term for |z| <= 8 (long double absorbs the exp(2 Re z) cancellation),
// asymptotic expansion beyond.
inline CLD bessel_k0(CLD z) {
  const long double eg = 0.577215664901532860606512L;
  if (std::abs(z) <= 8.0L) {
    const CLD q = z * z / 4.0L;
    CLD term = 1.0L, i0 = 1.0L, ksum = 0.0L;
    long double h = 0.0L;
    for (int j = 1; j < 120; ++j) {
      term *= q / (long double)(j * j);
      h += 1.0L / j;
      i0 += term;
      ksum += term * h;
      if (std::abs(term) * (1.0L + h) < 1e-24L * (std::abs(i0) + std::abs(ksum)))
        break;
    }
    return -(std::log(z / 2.0L) + eg) * i0 + ksum;
  }
  const long double pi = 3.141592653589793238462643L;
  CLD term = 1.0L, sum = 1.0L;
  long double prev = std::numeric_limits<long double>::max();
  for (int k = 1; k < 30; ++k) {
    const long double num = (2.0L * k - 1.0L) * (2.0L * k - 1.0L);
    term *= -num / (8.0L * k) / z;
    if (std::abs(term) > prev) break;
    prev = std::abs(term);
    sum += term;
    if (std::abs(term) < 1e-20L * std::abs(sum)) break;
  }
  return std::sqrt(pi / (2.0L * z)) * std::exp(-z) * sum;
}

}  // namespace detail

inline std::complex<double> bessel_k0(std::complex<double> z) {
  detail::CLD v = detail::bessel_k0(detail::CLD(z.real(), z.imag()));
  return {(double)v.real(), (double)v.imag()};
}

// Module-level normalization of the scalar fundamental solutions; all kernel
// assemblies route through helmholtz_phi so the convention cancels end to end.
inline constexpr double kHelmholtzNorm = 1.0;

// phi_n(k, r): n=3 gives exp(ikr)/r, n=2 the K_0-type solution under the same
// convention (K_0(-ikr) = (i pi/2) H^(1)_0(kr)).
inline std::complex<double> helmholtz_phi(int n, std::complex<double> k, double r) {
  if (!(r > 0)) throw SingularPoint();
  const std::complex<double> i(0, 1);
  if (n == 3) return kHelmholtzNorm * std::exp(i * k * r) / r;
  if (n == 2) return kHelmholtzNorm * bessel_k0(-i * k * r);
  throw std::invalid_argument("helmholtz_phi: dimension must be 2 or 3");
}

}  // namespace tcr
