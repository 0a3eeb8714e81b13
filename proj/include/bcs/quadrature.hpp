#pragma once

#include <functional>
#include <vector>

#include "bcs/kernels.hpp"

namespace bcs {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule (Newton on P_n). Thread-safe.
const GaussLegendreRule& gauss_legendre(int n);

// Panel quadrature plan. Each panel is integrated with nodes_per_panel and
// nodes_per_panel/2 Gauss-Legendre points; their difference is the panel error
// estimate. The worst panel is bisected until the summed estimate meets
// max(abs_tol, rel_tol*|I|).
struct PanelScheme {
  std::vector<double> breakpoints;
  int nodes_per_panel = 20;
  int max_panels = 20000;
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Throws AccuracyError (carrying the best estimate) if max_panels is exhausted.
IntegralResult integrate(const std::function<double(double)>& f, const PanelScheme& scheme);

struct QuadOptions {
  int nodes_per_panel = 20;
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_panels = 20000;
};

/// Breakpoints for kernels at total momentum q on [lo, hi]: the points where
/// (p +- q)^2 = mu, plus 0, sqrt(mu), sqrt(3 mu) when inside, plus a geometric
/// ladder of spacing scale*4^k around each Fermi point.
PanelScheme fermi_scheme(double q, double mu, double lo, double hi, double scale,
                         const QuadOptions& opts = {});

/// m_T(q) = int_0^{sqrt(3 mu)} B_T(p, q) dp.
IntegralResult integrate_m_t(double q, const PhysParams& params, const QuadOptions& opts = {});

/// n_T(q) = int_0^{sqrt(3 mu)} N_T(p, q) dp.
IntegralResult integrate_n_t(double q, const PhysParams& params, const QuadOptions& opts = {});

struct FullLineResult {
  double value = 0.0;       // 2 * (core + tail midpoint)
  double lower = 0.0;       // certified interval for the tail contribution
  double upper = 0.0;
  double core_error = 0.0;  // quadrature estimate on [0, p_tail]
  double p_tail = 0.0;
};

/// int_R N_T(p, q) dp. The tail |p| > p_tail is enclosed between
/// tanh(x_min/2T) M and M, with M = 1/(p^2 + q^2 - mu) integrated exactly.
/// p_tail <= 0 selects max(8 sqrt(mu + 1), 2 (sqrt(mu) + |q|)).
FullLineResult integrate_n_t_fullline(double q, const PhysParams& params, double p_tail = 0.0,
                                      const QuadOptions& opts = {});

enum class MWeight { one, abs_p_minus_sqrtmu, abs_p };

/// int_a^b M(p, q) w(p) dp for 0 <= a < b, breakpoints on the M singular set.
IntegralResult integrate_m_segment(double q, double mu, double a, double b, MWeight weight,
                                   const QuadOptions& opts = {});

/// int_{-sqrt(3mu)}^{sqrt(3mu)} M(p, q) w(p) dp. abs_p_minus_sqrtmu needs
/// |q| <= sqrt(mu)/2, abs_p needs ||q| - sqrt(mu)| <= sqrt(mu)/2.
IntegralResult weighted_m_integral(double q, double mu, MWeight weight,
                                   const QuadOptions& opts = {});

enum class Region { A1, A2, A3 };

struct RegionSpec {
  int dim = 2;
  Region region = Region::A2;
  double q = 0.0;
};

struct RegionOptions {
  double eps = 0.3;  // lower limit for q in A2/A3, in units of sqrt(mu)
  double tol = 1e-8;
  int nodes_per_panel = 20;
};

/// int_{R^d} M(p, q) chi_A(p) dp in (p1, |p~|) coordinates with angular factor
/// c_2 = 2, c_3 = 2 pi |p~|. A1 is rejected (the integral diverges for d >= 2);
/// use region_a1_envelope instead.
IntegralResult region_integral_m(const RegionSpec& spec, double mu, const RegionOptions& opts = {});

/// Angular factor bound c_d used by the region caps: 2 (d=2), 2 pi sqrt(mu) (d=3).
double region_cd(int dim, double mu);

/// sup over sampled p in A1 (|p| <= radius) of M(p, q) (1 + p^2).
double region_a1_envelope(double q, double mu, int dim, double radius = 50.0, int samples = 400);

enum class ClosedForm {
  inner_artanh,      // int_0^{sqrt(mu)-q} M dp,               0 < q < sqrt(mu)
  inner_zero,        // same at q = sqrt(mu)
  inner_arctan,      // int_0^{q-sqrt(mu)} M dp,               q > sqrt(mu)
  weighted_first,    // int_0^{sqrt(mu)-q} (sqrt(mu)-p) M dp,   0 < q < sqrt(mu)
  abs_p_first,       // int_0^{|sqrt(mu)-q|} p M dp,            q > 0, q != sqrt(mu)
  abs_p_middle,      // int_{|sqrt(mu)-q|}^{sqrt(mu)+q} p M dp, q > 0
  abs_p_third,       // int_{sqrt(mu)+q}^{sqrt(3mu)} p M dp,    0 < q <= (sqrt 3 - 1) sqrt(mu)
  nt_cut_first,      // int_0^{sqrt(mu)-q-T/sqrt(mu)} M dp,    sqrt(mu)-q-T/sqrt(mu) > 0
  middle_log,        // int_{sqrt(mu)-q}^{sqrt(mu)+q} M dp,     0 < q < sqrt(mu)
  third_log,         // int_{|q-sqrt(mu)|+T/sqrt(mu)}^{sqrt(mu)} M dp, below sqrt(mu)
};

struct ClosedFormArgs {
  double q = 0.0;
  double mu = 1.0;
  double temp = 0.0;  // only for nt_cut_first and third_log
};

/// Exact antiderivative value. Throws PreconditionError outside the branch.
double closed_form_oracle(ClosedForm name, const ClosedFormArgs& args);

/// The same integral by panel quadrature, for cross-checks.
IntegralResult closed_form_quadrature(ClosedForm name, const ClosedFormArgs& args,
                                      const QuadOptions& opts = {});

}  // namespace bcs
