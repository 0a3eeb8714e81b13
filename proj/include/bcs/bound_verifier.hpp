#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bcs/bs_spectra.hpp"
#include "bcs/interactions.hpp"
#include "bcs/kernels.hpp"

namespace bcs {

// Result of one verifier suite. c_emp is the empirical constant where only
// existence of a constant is known; c_emp_refined is the same quantity on
// grids refined 2x. pass also requires every entry of `checks` to hold.
struct BoundReport {
  std::string lemma;
  std::string grid;
  double worst_margin = 0.0;
  double c_emp = 0.0;
  double c_emp_refined = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;
};

// Singular approximant of the kernel at total momentum q. Q (kernel B) has
// only the F_mu part; W (kernel N) adds 2 F_0^dag F_0.
struct SingularApproximant {
  Kernel which = Kernel::N;
  double q = 0.0;
  PhysParams params;
  double coefficient = 0.0;  // m_T(q) or n_T(q)
  bool fermi_window = false; // max{T/mu, |q|/sqrt(mu)} <= 1/2
  bool zero_window = false;  // max{T/mu, ||q| - sqrt(mu)|/sqrt(mu)} <= 1/2, W only
};

SingularApproximant singular_approximant(Kernel which, double q, const PhysParams& params);

/// Position-space kernel of the approximant as a function of r = x - y.
double approximant_kernel(const SingularApproximant& approx, double r);

struct KernelDifference {
  double exact = 0.0;   // (1/pi) int_0^inf A(p, q) cos(p r) dp
  double approx = 0.0;
  double error = 0.0;   // quadrature estimate plus truncation bound
};

/// X_T(r) for kernel B or N at total momentum q.
KernelDifference kernel_difference(Kernel which, double q, const PhysParams& params, double r);

struct Lemma31Options {
  std::vector<double> temps;   // in units of mu; default {0.5, 1e-1, 1e-2, 1e-3, 1e-4}
  std::vector<double> qs;      // in units of sqrt(mu)
  double r_max = 12.0;         // in units of 1/sqrt(mu)
  int r_points = 49;
};

/// |X_T(r)| <= C (1 + |r|), C stable as T decreases over three decades.
BoundReport verify_lemma31_approx(const InteractionModel& interaction, double mu,
                                  const Lemma31Options& opts = {});

/// Upper bounds on m_T, n_T with the empirical C and the lower bounds at
/// q = 0 and q = sqrt(mu), each on a base grid and a 2x refined grid.
BoundReport verify_lemma32_bounds(double mu);

/// The log-terms of the m_T and n_T upper bounds (without C).
double lemma32_m_log_terms(double q, const PhysParams& params);
double lemma32_n_log_terms(double q, const PhysParams& params);

/// Suprema of the weighted M integrals over their q windows.
BoundReport verify_lemma41(double mu);

/// A2/A3 integrals of M in d = 2, 3 against the explicit caps on A2, plus
/// the A1 envelope sup M (1 + p^2).
BoundReport verify_region_bounds(double mu, int dim, double eps = 0.3,
                                 std::vector<double> qs = {});

/// True if V(r) >= 0 for every r (closed-form check per interaction family).
bool position_space_nonnegative(const InteractionModel& interaction);

/// E_T(q) = sup_q' top(N, q') - top(N, q), lambda-free, symmetric sector.
double e_gap(double temp, double q, const InteractionModel& interaction, double mu,
             const SupOptions& opts = {});

/// E_T at a q > eps against ln(1/T): reports the fitted growth rate.
BoundReport verify_e_gap(const InteractionModel& interaction, double mu, double q = 0.5);

struct StrongCouplingOptions {
  std::vector<double> mus{0.5, 0.2, 0.1, 0.05, 0.01};
  double box = 10.0;
  int grid_points = 200;   // k-majorization grid per axis on [-box, box]
  int samples = 10000;     // random samples for |f'| < 1 and convexity
  unsigned long long seed = 20240611ULL;
};

/// HS norm and sup-integral of N_{1,mu} - N_{1,0}; derivative bound in nu,
/// k-majorization, convexity and |f'| < 1.
BoundReport verify_strong_coupling(const StrongCouplingOptions& opts = {});

/// Hilbert-Schmidt norm of N_{1,mu} - N_{1,0} over R^2 (box plus certified tail).
struct NormResult {
  double value = 0.0;
  double tail_bound = 0.0;
};
NormResult strong_coupling_hs_norm(double mu, double box = 10.0, int panels_per_unit = 2,
                                   int nodes = 16);
NormResult strong_coupling_sup_integral(double mu, double box = 10.0, int panels_per_unit = 2,
                                        int nodes = 16);

/// k(p, q) = min{N_{1,0}(p, 0), N_{1,0}(0, q)}.
double k_majorant(double p, double q);

/// d/dnu N_{1,nu}(p, q).
double n_strong_dnu(double p, double q, double nu);

/// Envelope 1/4 on p^2 + q^2 < 2, 1/(p^2 + q^2 - 1)^2 beyond.
double strong_tail_envelope(double p, double q);

struct ChainValues {
  double temp = 0.0;
  double k_sym = 0.0;   // inf spec_s(K - lambda V), q = 0
  double l_sym = 0.0;   // inf_q inf spec_s(L_q - lambda V)
  double d_sym = 0.0;   // inf_q inf spec_s(D_q - lambda V)
  double k_all = 0.0;   // inf spec(K - lambda V), both sectors, q = 0
};

/// Bottom eigenvalues of diag(1/A) - lambda sqrt(w) V~ sqrt(w) at temp.
ChainValues chain_values(const InteractionModel& interaction, double mu, double lambda,
                         double temp, const SupOptions& opts = {});

/// Solves Tc0 and checks k_sym >= l_sym >= d_sym >= k_all, each within 1e-4 (2T) of 0.
BoundReport verify_chain(const InteractionModel& interaction, double mu, double lambda);

}  // namespace bcs
