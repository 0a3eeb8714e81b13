#include <cmath>

#include "bcs/bound_verifier.hpp"
#include "bcs/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bcs;
using doctest::Approx;

namespace {

const InteractionModel kSplit = make_gaussian_difference(2.9919563305407246, 1.0, 2.983912661081449, 0.5);

}  // namespace

TEST_CASE("singular approximant windows") {
  const SingularApproximant hot = singular_approximant(Kernel::N, 0.0, {1.0, 0.6, 1});
  CHECK_FALSE(hot.fermi_window);
  CHECK_FALSE(hot.zero_window);
  for (double r : {0.0, 0.7, 5.0}) CHECK(approximant_kernel(hot, r) == 0.0);

  const SingularApproximant q_only = singular_approximant(Kernel::B, 0.2, {1.0, 0.01, 1});
  CHECK(q_only.fermi_window);
  CHECK_FALSE(q_only.zero_window);
  const SingularApproximant w = singular_approximant(Kernel::N, 0.9, {1.0, 0.01, 1});
  CHECK_FALSE(w.fermi_window);
  CHECK(w.zero_window);
  // Window edges are closed.
  CHECK(singular_approximant(Kernel::N, 0.5, {1.0, 0.01, 1}).fermi_window);
  CHECK(singular_approximant(Kernel::N, 0.0, {1.0, 0.5, 1}).fermi_window);
}

TEST_CASE("kernel difference at r = 0 is bounded by the empirical constant") {
  const BoundReport rep = verify_lemma31_approx(make_gaussian(), 1.0);
  CHECK(rep.pass);
  for (double t : {0.1, 0.01, 0.001}) {
    const KernelDifference d = kernel_difference(Kernel::N, 0.0, {1.0, t, 1}, 0.0);
    CHECK(std::isfinite(d.exact));
    CHECK(std::fabs(d.exact - d.approx) <= rep.c_emp * (1.0 + 1e-9) + d.error);
  }
  CHECK(rep.c_emp_refined == Approx(rep.c_emp).epsilon(0.05));
}

TEST_CASE("lemma 3.2 suite at two chemical potentials") {
  for (double mu : {1.0, 2.0}) {
    const BoundReport r = verify_lemma32_bounds(mu);
    CHECK(r.pass);
    CHECK(std::isfinite(r.c_emp));
    CHECK(r.c_emp > 0.0);
  }
  const PhysParams par{1.0, 1e-3, 1};
  CHECK(std::isfinite(lemma32_m_log_terms(0.3, par)));
  CHECK(lemma32_n_log_terms(0.0, par) >= lemma32_m_log_terms(0.0, par) - 1e-12);
}

TEST_CASE("lemma 4.1 suite") {
  const BoundReport r = verify_lemma41(1.0);
  CHECK(r.pass);
  CHECK(r.c_emp == Approx(r.c_emp_refined).epsilon(0.01));
}

TEST_CASE("region suite") {
  for (int dim : {2, 3}) {
    const BoundReport r = verify_region_bounds(1.0, dim);
    CHECK(r.pass);
    CHECK(r.worst_margin > 0.0);
  }
  CHECK_THROWS_AS(verify_region_bounds(1.0, 1), PreconditionError);
}

TEST_CASE("strong-coupling pieces") {
  CHECK(k_majorant(0.0, 0.0) == n_strong(0.0, 0.0, 0.0));
  for (double p : {-3.0, 0.2, 1.7}) {
    for (double q : {-0.4, 0.0, 2.5}) {
      CHECK(k_majorant(p, q) == k_majorant(q, p));
      CHECK(n_strong(p, q, 0.0) <= k_majorant(p, q) * (1.0 + 1e-15));
    }
  }
  // d/dnu against a 50-digit central difference.
  for (double nu : {0.0, 0.5, 1.0}) {
    for (double p : {0.0, 0.8, 2.0}) {
      const double q = 0.3;
      const oracle::Real h("1e-20");
      const auto nn = [&](oracle::Real v) {
        const oracle::Real xp = (oracle::Real(p) + q) * (oracle::Real(p) + q) - v;
        const oracle::Real xm = (oracle::Real(p) - q) * (oracle::Real(p) - q) - v;
        return 2 / (oracle::chi(xp, 1) + oracle::chi(xm, 1));
      };
      const oracle::Real d = (nn(oracle::Real(nu) + h) - nn(oracle::Real(nu) - h)) / (2 * h);
      CHECK(n_strong_dnu(p, q, nu) == Approx(d.convert_to<double>()).epsilon(1e-10));
    }
  }
  // HS norms decrease in mu and agree with a doubled-resolution evaluation.
  double prev = INFINITY;
  for (double mu : {0.5, 0.1, 0.01}) {
    const NormResult a = strong_coupling_hs_norm(mu);
    const NormResult b = strong_coupling_hs_norm(mu, 10.0, 4, 24);
    CHECK(a.value < prev);
    CHECK(a.value == Approx(b.value).epsilon(1e-6));
    CHECK(a.tail_bound >= 0.0);
    prev = a.value;
  }
  const BoundReport rep = verify_strong_coupling();
  CHECK(rep.pass);
}

TEST_CASE("chain of bottom eigenvalues at Tc0") {
  const BoundReport r = verify_chain(make_gaussian(), 1.0, 1.0);
  CHECK(r.pass);
  // The split interaction stays positive in position space.
  CHECK(position_space_nonnegative(kSplit));
  CHECK_FALSE(position_space_nonnegative(make_gaussian_difference(1.0, 1.0, 2.0, 0.5)));
  CHECK(position_space_nonnegative(make_gaussian()));
}

TEST_CASE("E_T gap") {
  // Nonnegative transform: the sup sits at q = 0, so E_T(0) = 0.
  CHECK(std::fabs(e_gap(1e-3, 0.0, make_gaussian(), 1.0)) < 1e-12);
  CHECK(e_gap(1e-3, 0.5, make_gaussian(), 1.0) > 0.0);
  CHECK(e_gap(2.0, 0.5, make_gaussian(), 1.0) < 0.05);
  const BoundReport r = verify_e_gap(make_gaussian(), 1.0);
  CHECK(r.pass);
}
