#pragma once

// Independent reference evaluations for the unit tests. Nothing here calls
// into the library.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

inline Real chi(Real x, Real t) {
  if (x == 0) return 2 * t;
  return x / tanh(x / (2 * t));
}

inline double k(double p, double mu, double t) { return chi(Real(p * p - mu), t).convert_to<double>(); }

// The energies (p +- q)^2 - mu are rounded to double first, so the oracle
// measures evaluation error rather than the conditioning of the inputs.
inline double n(double p, double q, double mu, double t) {
  const Real xp = (p + q) * (p + q) - mu;
  const Real xm = (p - q) * (p - q) - mu;
  return (2 / (chi(xp, t) + chi(xm, t))).convert_to<double>();
}

// (tanh a + tanh b) / (2 (p^2 + q^2 - mu)) at 50 digits, with the numerator as
// sinh(a + b) / (cosh a cosh b) so opposite signs do not cancel; at the
// removable point the limit 1 / (2T cosh^2 a).
inline double b(double p, double q, double mu, double t) {
  const Real xp = (p + q) * (p + q) - mu;
  const Real xm = (p - q) * (p - q) - mu;
  const Real a = xp / (2 * t), bb = xm / (2 * t);
  const Real den = xp + xm;
  if (den == 0) return (1 / (2 * Real(t) * cosh(a) * cosh(a))).convert_to<double>();
  return (sinh(a + bb) / (cosh(a) * cosh(bb) * den)).convert_to<double>();
}

inline double m(double p, double q, double mu) {
  return 2.0 / (std::fabs((p - q) * (p - q) - mu) + std::fabs((p + q) * (p + q) - mu));
}

// Adaptive Gauss-Kronrod on [a, b] split at the given interior points.
template <class F>
double gk(F f, std::vector<double> pts, double tol = 1e-13) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 25, tol);
  }
  return sum;
}

// Symmetric eigenvalues by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  return ev;
}

}  // namespace oracle
