#include "bcs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bcs/errors.hpp"

namespace bcs {

namespace {

void require_temp(double temp) {
  if (!(temp > 0.0) || !std::isfinite(temp)) {
    throw DomainError("temperature must be finite and positive, got " + std::to_string(temp));
  }
}

// log(cosh x) without overflow.
double log_cosh(double x) {
  const double a = std::fabs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - M_LN2;
}

// log(sinh(u) / u), even in u.
double log_sinhc(double u) {
  const double a = std::fabs(u);
  if (a < kSeriesThreshold) return std::log1p(a * a / 6.0);
  if (a < 1.0) return std::log(std::sinh(a) / a);
  return a + std::log1p(-std::exp(-2.0 * a)) - M_LN2 - std::log(a);
}

}  // namespace

void validate(const PhysParams& params) {
  require_temp(params.temp);
  if (!std::isfinite(params.mu)) throw DomainError("mu must be finite");
  if (params.dim < 1 || params.dim > 3) {
    throw DomainError("dim must be 1, 2 or 3, got " + std::to_string(params.dim));
  }
}

double chi_ratio(double x, double temp) {
  require_temp(temp);
  if (!std::isfinite(x)) throw DomainError("chi_ratio: non-finite energy");
  const double y = x / (2.0 * temp);
  if (std::fabs(y) < kSeriesThreshold) return 2.0 * temp * (1.0 + y * y / 3.0);
  return x / std::tanh(y);
}

double k_t(double p, const PhysParams& params) {
  return chi_ratio(p * p - params.mu, params.temp);
}

double n_t(double p, double q, const PhysParams& params) {
  const double xp = (p + q) * (p + q) - params.mu;
  const double xm = (p - q) * (p - q) - params.mu;
  return 2.0 / (chi_ratio(xp, params.temp) + chi_ratio(xm, params.temp));
}

double b_t(double p, double q, const PhysParams& params) {
  require_temp(params.temp);
  const double t = params.temp;
  // At q = 0 the kernel is 1/K_T; evaluate it the same way so the two agree bitwise.
  if (q == 0.0) return 1.0 / chi_ratio(p * p - params.mu, t);
  const double xp = (p + q) * (p + q) - params.mu;
  const double xm = (p - q) * (p - q) - params.mu;
  const double a = xp / (2.0 * t);
  const double b = xm / (2.0 * t);
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("b_t: non-finite argument");
  const double u = a + b;  // (p^2 + q^2 - mu) / T
  if (std::fabs(u) < 1.0) {
    // tanh a + tanh b = sinh(a+b) / (cosh a cosh b), so the quotient is
    // sinhc(u) / (2T cosh a cosh b); the series branch covers u = 0.
    return std::exp(log_sinhc(u) - log_cosh(a) - log_cosh(b)) / (2.0 * t);
  }
  if ((a >= 0.0) == (b >= 0.0)) {
    return (std::tanh(std::fabs(a)) + std::tanh(std::fabs(b))) / std::fabs(xp + xm);
  }
  // Opposite signs: the same identity with the exponentials scaled out.
  const double aa = std::fabs(a), ab = std::fabs(b);
  const double num = 2.0 * std::exp(-2.0 * std::min(aa, ab)) * -std::expm1(-2.0 * std::fabs(u));
  const double den = (1.0 + std::exp(-2.0 * aa)) * (1.0 + std::exp(-2.0 * ab));
  return num / den / std::fabs(xp + xm);
}

double m_bound(double p, double q, double mu) {
  const double den = std::fabs((p - q) * (p - q) - mu) + std::fabs((p + q) * (p + q) - mu);
  if (den == 0.0) return kPoleSentinel;
  return 2.0 / den;
}

double f_strong(double x) { return chi_ratio(x, 1.0); }

double f_strong_prime(double x) {
  if (!std::isfinite(x)) throw DomainError("f_strong_prime: non-finite argument");
  const double u = 0.5 * x;
  const double u2 = u * u;
  if (std::fabs(u) < 1e-2) {
    return u * (2.0 / 3.0 + u2 * (-4.0 / 45.0 + u2 * (4.0 / 315.0)));
  }
  const double s = std::sinh(u);
  return 1.0 / std::tanh(u) - u / (s * s);
}

double n_strong(double p, double q, double nu) {
  return 2.0 / (f_strong((p + q) * (p + q) - nu) + f_strong((p - q) * (p - q) - nu));
}

}  // namespace bcs
