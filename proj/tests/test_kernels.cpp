#include <cmath>
#include <random>

#include "bcs/errors.hpp"
#include "bcs/kernels.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bcs;
using doctest::Approx;

TEST_CASE("chi_ratio limits and values") {
  CHECK(chi_ratio(0.0, 0.3) == 0.6);
  CHECK(chi_ratio(1e-12, 0.3) == Approx(0.6).epsilon(1e-15));
  CHECK(chi_ratio(2.0, 1.0) == Approx(2.0 / std::tanh(1.0)).epsilon(1e-15));
  CHECK(chi_ratio(2.0, 1.0) == Approx(2.6260).epsilon(1e-4));
  CHECK(chi_ratio(-3.7, 0.2) == chi_ratio(3.7, 0.2));
  CHECK_THROWS_AS(chi_ratio(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(chi_ratio(1.0, -1.0), DomainError);
  CHECK_THROWS_AS(chi_ratio(NAN, 1.0), DomainError);
  CHECK_THROWS_AS(chi_ratio(INFINITY, 1.0), DomainError);
}

TEST_CASE("K_T") {
  CHECK(k_t(1.0, {1.0, 0.25, 1}) == 0.5);  // minimal value 2T on the Fermi sphere
  CHECK(k_t(0.0, {0.0, 1.0, 1}) == 2.0);
  CHECK(k_t(2.0, {1.0, 0.1, 1}) == Approx(3.0 / std::tanh(15.0)).epsilon(1e-15));
  CHECK(k_t(2.0, {1.0, 0.1, 1}) == Approx(3.0).epsilon(1e-10));
}

TEST_CASE("N_T scalar values") {
  CHECK(n_t(0.0, 0.0, {1.0, 0.5, 1}) == Approx(std::tanh(1.0)).epsilon(1e-15));
  CHECK(n_t(0.0, 0.0, {1.0, 0.5, 1}) == Approx(0.76159).epsilon(1e-5));
}

TEST_CASE("B_T scalar values") {
  const double expected = 0.5 * (std::tanh(6.0) + std::tanh(-2.0));
  CHECK(b_t(1.0, 1.0, {1.0, 0.25, 1}) == Approx(expected).epsilon(1e-14));
  CHECK(b_t(1.0, 1.0, {1.0, 0.25, 1}) == Approx(oracle::b(1.0, 1.0, 1.0, 0.25)).epsilon(1e-14));
}

TEST_CASE("B_T and N_T at q = 0 equal 1/K_T bitwise") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mom(-3.0, 3.0), logt(-5.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const PhysParams par{1.3, std::pow(10.0, logt(rng)), 1};
    const double p = mom(rng);
    const double inv = 1.0 / k_t(p, par);
    CHECK(b_t(p, 0.0, par) == inv);
    CHECK(n_t(p, 0.0, par) == inv);
  }
}

TEST_CASE("kernels against 50-digit evaluation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mom(-4.0, 4.0), logt(-5.0, 1.0), mus(0.05, 5.0);
  double worst_b = 0.0, worst_n = 0.0, worst_k = 0.0;
  for (int i = 0; i < 3000; ++i) {
    const double p = mom(rng), q = mom(rng), t = std::pow(10.0, logt(rng)), mu = mus(rng);
    const PhysParams par{mu, t, 1};
    const double ob = oracle::b(p, q, mu, t), on = oracle::n(p, q, mu, t), ok = oracle::k(p, mu, t);
    if (ob > 1e-300) worst_b = std::max(worst_b, std::fabs(b_t(p, q, par) / ob - 1.0));
    worst_n = std::max(worst_n, std::fabs(n_t(p, q, par) / on - 1.0));
    worst_k = std::max(worst_k, std::fabs(k_t(p, par) / ok - 1.0));
  }
  CHECK(worst_b < 1e-13);
  CHECK(worst_n < 1e-14);
  CHECK(worst_k < 1e-14);
}

TEST_CASE("B_T near the removable point p^2 + q^2 = mu") {
  const double mu = 1.0, t = 0.05, q = 0.6;
  const double p0 = std::sqrt(mu - q * q);
  const PhysParams par{mu, t, 1};
  for (double off : {0.0, 1e-12, 1e-8, -1e-8, 1e-4}) {
    const double p = p0 + off;
    CHECK(b_t(p, q, par) == Approx(oracle::b(p, q, mu, t)).epsilon(1e-10));
  }
  // Continuity across the point from offsets at +-1e-8.
  const double mid = 0.5 * (b_t(p0 + 1e-8, q, par) + b_t(p0 - 1e-8, q, par));
  CHECK(b_t(p0, q, par) == Approx(mid).epsilon(1e-8));
}

TEST_CASE("kernel ordering B <= N <= min(1/2T, M)") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mom(-3.0, 3.0);
  for (double t : {1e-3, 1e-1, 1.0}) {
    const PhysParams par{1.0, t, 1};
    for (int i = 0; i < 2000; ++i) {
      const double p = mom(rng), q = mom(rng);
      const double b = b_t(p, q, par), n = n_t(p, q, par), m = m_bound(p, q, 1.0);
      const double slack = 1.0 + 1e-15;
      CHECK(b <= n * slack);
      CHECK(n <= m * slack);
      CHECK(n <= slack / (2.0 * t));
    }
  }
}

TEST_CASE("N_T decreases in T") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> mom(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double p = mom(rng), q = mom(rng);
    double prev = INFINITY;
    for (double t : {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
      const double v = n_t(p, q, {1.0, t, 1});
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("M bound") {
  CHECK(m_bound(0.0, 0.0, 1.0) == 1.0);
  CHECK(is_pole(m_bound(1.0, 0.0, 1.0)));
  CHECK(is_pole(m_bound(0.0, 1.0, 1.0)));
  CHECK(m_bound(2.0, 1.0, 1.0) == Approx(oracle::m(2.0, 1.0, 1.0)));
  CHECK(m_bound(2.0, 1.0, 1.0) == 0.25);
}

TEST_CASE("strong-coupling f and f'") {
  CHECK(f_strong(0.0) == 2.0);
  CHECK(f_strong_prime(0.0) == 0.0);
  CHECK(f_strong(3.0) == Approx(3.0 / std::tanh(1.5)).epsilon(1e-15));
  // f' against a 50-digit central difference.
  for (double x : {-30.0, -2.5, -0.3, -1e-3, 1e-3, 0.011, 0.5, 4.0, 45.0}) {
    const oracle::Real h("1e-20");
    const oracle::Real xr(x);
    const oracle::Real d = (oracle::chi(xr + h, 1) - oracle::chi(xr - h, 1)) / (2 * h);
    CHECK(f_strong_prime(x) == Approx(d.convert_to<double>()).epsilon(1e-12));
  }
  // Beyond |x| ~ 45 the deficit 1 - |f'| is below double resolution.
  for (int i = 0; i <= 1000; ++i) {
    const double x = -50.0 + 0.1 * i;
    if (std::fabs(x) <= 40.0) {
      CHECK(std::fabs(f_strong_prime(x)) < 1.0);
    } else {
      CHECK(std::fabs(f_strong_prime(x)) <= 1.0);
    }
  }
  // f(x) >= max{2, |x|}, while 2 max{1, x} is exceeded at x = 4.
  for (double x : {-50.0, -3.0, -0.2, 0.0, 1.0, 1.0986, 4.0, 50.0}) {
    CHECK(f_strong(x) >= std::max(2.0, std::fabs(x)));
  }
  CHECK(f_strong(4.0) < 8.0);
  // N_{1,nu} is N_T at T = 1.
  for (double p : {0.0, 0.4, 1.7}) {
    for (double q : {0.0, 0.9, 2.2}) {
      CHECK(n_strong(p, q, 0.7) == n_t(p, q, {0.7, 1.0, 1}));
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate(PhysParams{1.0, 0.1, 3}));
  CHECK_THROWS_AS(validate(PhysParams{1.0, 0.0, 1}), DomainError);
  CHECK_THROWS_AS(validate(PhysParams{NAN, 0.1, 1}), DomainError);
  CHECK_THROWS_AS(validate(PhysParams{1.0, 0.1, 4}), DomainError);
  CHECK_THROWS_AS(b_t(1.0, 0.5, {1.0, 0.0, 1}), DomainError);
}
