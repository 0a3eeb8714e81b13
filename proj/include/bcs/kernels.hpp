#pragma once

#include <limits>

namespace bcs {

// Units: hbar = 2m = 1, dispersion p^2 - mu.
struct PhysParams {
  double mu = 1.0;
  double temp = 1.0;
  int dim = 1;
};

// Throws DomainError unless temp > 0, mu finite and dim in {1,2,3}.
void validate(const PhysParams& params);

// Scaled-variable threshold below which removable singularities use series.
inline constexpr double kSeriesThreshold = 1e-6;

// Returned by m_bound on its pole set.
inline constexpr double kPoleSentinel = std::numeric_limits<double>::infinity();
inline bool is_pole(double m) { return m == kPoleSentinel; }

/// x / tanh(x / (2T)); even in x, >= 2T.
double chi_ratio(double x, double temp);

/// K_T(p) = chi_ratio(p^2 - mu, T).
double k_t(double p, const PhysParams& params);

/// N_T(p, q) = 2 / [chi((p+q)^2 - mu) + chi((p-q)^2 - mu)].
double n_t(double p, double q, const PhysParams& params);

/// B_T(p, q) = (tanh(a) + tanh(b)) / (2 (p^2 + q^2 - mu)),
/// a, b = ((p +- q)^2 - mu) / 2T.
double b_t(double p, double q, const PhysParams& params);

/// M(p, q) = 2 / (|(p-q)^2 - mu| + |(p+q)^2 - mu|); kPoleSentinel where both vanish.
double m_bound(double p, double q, double mu);

/// f(x) = x / tanh(x/2), f(0) = 2.
double f_strong(double x);

/// f'(x) = 1/tanh(x/2) - (x/2)/sinh^2(x/2), f'(0) = 0.
double f_strong_prime(double x);

/// N_{1,nu}(p, q) = 2 / (f((p+q)^2 - nu) + f((p-q)^2 - nu)).
double n_strong(double p, double q, double nu);

}  // namespace bcs
