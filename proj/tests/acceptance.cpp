// Acceptance runner: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bcs/bound_verifier.hpp"
#include "bcs/bs_spectra.hpp"
#include "bcs/commands.hpp"
#include "bcs/critical_temps.hpp"
#include "bcs/kernels.hpp"
#include "bcs/quadrature.hpp"

using namespace bcs;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// a <= b up to a few ulps of b.
bool leq(double a, double b) { return a <= b + 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(b); }

Outcome kernel_identities() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mom(-4.0, 4.0), logt(-5.0, 1.0), mus(0.05, 5.0);
  int bad_chain = 0, bad_product = 0, samples = 10000;
  double worst_product = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double p = mom(rng), q = mom(rng), t = std::pow(10.0, logt(rng)), mu = mus(rng);
    const PhysParams par{mu, t, 1};
    const double b = b_t(p, q, par), n = n_t(p, q, par), m = m_bound(p, q, mu);
    const double gap = std::fabs(p * p + q * q - mu);
    // M and 1/|p^2+q^2-mu| round differently; allow for the cancellation in the gap.
    const double cond = 8.0 * std::numeric_limits<double>::epsilon() * (p * p + q * q + mu) / gap;
    const bool ok = leq(b, n) && leq(n, std::min(1.0 / (2.0 * t), m)) &&
                    (gap == 0.0 || m <= (1.0 + cond) / gap);
    if (!ok) ++bad_chain;
    const double prod = n_t(p, 0.0, par) * k_t(p, par);
    worst_product = std::max(worst_product, std::fabs(prod - 1.0));
    if (std::fabs(prod - 1.0) > 1e-12) ++bad_product;
  }
  return {bad_chain == 0 && bad_product == 0,
          std::to_string(samples) + " samples, chain violations " + std::to_string(bad_chain) +
              ", max |N K - 1| " + fmt("%.2e", worst_product)};
}

Outcome q_zero_reduction() {
  bool identical = true;
  double worst = 0.0;
  for (double t : {0.5, 0.05, 0.002}) {
    for (const auto& v : {make_gaussian(), make_gaussian_difference(2.99, 1.0, 2.98, 0.5)}) {
      BSOperatorSpec spec;
      spec.params = {1.0, t, 1};
      spec.interaction = v;
      const MomentumGrid grid = make_grid(0.0, spec.params, spec.grid);
      spec.kernel = Kernel::K;
      const Eigen::MatrixXd hk = build_bs_matrix(spec, grid);
      spec.kernel = Kernel::B;
      const Eigen::MatrixXd hb = build_bs_matrix(spec, grid);
      spec.kernel = Kernel::N;
      const Eigen::MatrixXd hn = build_bs_matrix(spec, grid);
      for (Eigen::Index i = 0; i < hk.size(); ++i) {
        identical = identical && same_bits(hk.data()[i], hb.data()[i]) &&
                    same_bits(hk.data()[i], hn.data()[i]);
      }
      const double ek = top_eigenvalue(hk), eb = top_eigenvalue(hb), en = top_eigenvalue(hn);
      worst = std::max({worst, rel(ek, eb), rel(ek, en)});
    }
  }
  return {identical && worst <= 1e-12,
          std::string("matrices ") + (identical ? "identical" : "differ") +
              ", max top-eigenvalue difference " + fmt("%.1e", worst)};
}

Outcome closed_forms() {
  struct Point {
    ClosedForm name;
    ClosedFormArgs args;
  };
  const std::vector<Point> pts = {
      {ClosedForm::inner_artanh, {0.05, 1.0}},      {ClosedForm::inner_artanh, {0.7, 2.0}},
      {ClosedForm::inner_zero, {1.0, 1.0}},         {ClosedForm::inner_zero, {std::sqrt(3.0), 3.0}},
      {ClosedForm::inner_arctan, {1.5, 1.0}},       {ClosedForm::inner_arctan, {4.0, 0.5}},
      {ClosedForm::weighted_first, {0.2, 1.0}},     {ClosedForm::weighted_first, {0.45, 1.0}},
      {ClosedForm::abs_p_first, {0.6, 1.0}},        {ClosedForm::abs_p_first, {1.4, 1.0}},
      {ClosedForm::abs_p_middle, {0.5, 1.0}},       {ClosedForm::abs_p_middle, {1.3, 1.0}},
      {ClosedForm::abs_p_third, {0.3, 1.0}},        {ClosedForm::abs_p_third, {0.7, 2.0}},
      {ClosedForm::nt_cut_first, {0.1, 1.0, 1e-3}}, {ClosedForm::nt_cut_first, {0.5, 1.0, 0.1}},
      {ClosedForm::middle_log, {0.25, 1.0}},        {ClosedForm::middle_log, {0.9, 1.0}},
      {ClosedForm::third_log, {0.2, 1.0, 1e-4}},    {ClosedForm::third_log, {1.3, 1.0, 1e-2}},
  };
  double worst = 0.0;
  for (const auto& pt : pts) {
    const double exact = closed_form_oracle(pt.name, pt.args);
    const double quad = closed_form_quadrature(pt.name, pt.args).value;
    worst = std::max(worst, std::fabs(exact - quad) / std::max(1.0, std::fabs(exact)));
  }
  return {worst <= 1e-8, std::to_string(pts.size()) + " points, max difference " + fmt("%.1e", worst)};
}

Outcome singularity_coefficients() {
  bool pass = true;
  std::ostringstream d;
  for (double mu : {1.0, 0.5}) {
    std::vector<double> x, n0, nf, mf;
    for (int k = 0; k <= 8; ++k) {
      const double t = mu * std::pow(10.0, -2.0 - 0.5 * k);
      const PhysParams par{mu, t, 1};
      x.push_back(std::log(mu / t));
      n0.push_back(integrate_n_t(0.0, par).value * std::sqrt(mu));
      nf.push_back(integrate_n_t(std::sqrt(mu), par).value * std::sqrt(mu));
      mf.push_back(integrate_m_t(std::sqrt(mu), par).value);
    }
    const double s0 = fit_line(x, n0).slope, sf = fit_line(x, nf).slope;
    const double ratio = *std::max_element(mf.begin(), mf.end()) / *std::min_element(mf.begin(), mf.end());
    pass = pass && std::fabs(s0 - 1.0) <= 0.05 && std::fabs(sf - 0.5) <= 0.05 && ratio < 3.0;
    d << "mu=" << mu << ": slopes " << fmt("%.4f", s0) << ", " << fmt("%.4f", sf)
      << ", m ratio " << fmt("%.3f", ratio) << "; ";
  }
  return {pass, d.str()};
}

Outcome unique_tc() {
  bool pass = true;
  std::ostringstream d;
  for (double lambda : {1.0, 0.5}) {
    SolveSpec s;
    s.lambda = lambda;
    s.interaction = make_gaussian();
    const double t0 = solve_Tc0(s).temp, tl = solve_Tl(s).temp, tu = solve_Tu(s).temp;
    const double spread = std::max({rel(t0, tl), rel(t0, tu), rel(tl, tu)});
    const BoundReport chain = verify_chain(s.interaction, 1.0, lambda);
    pass = pass && spread <= 1e-3 && chain.pass;
    d << "lambda=" << lambda << ": Tc0 " << fmt("%.8g", t0) << ", spread " << fmt("%.1e", spread)
      << ", chain " << (chain.pass ? "ok" : "fails") << "; ";
  }
  return {pass, d.str()};
}

Outcome split_slopes() {
  SolveSpec base;
  base.interaction = make_gaussian_difference(2.9919563305407246, 1.0, 2.983912661081449, 0.5);
  const std::vector<double> lambdas = {0.6, 0.5, 0.42, 0.36, 0.31, 0.27, 0.24};
  const SphereSpectrum sp = sphere_operator_spectrum(base.interaction, 1.0, 1);
  base.target = Target::Tl;
  const SweepResult tl = weak_coupling_sweep(lambdas, base);
  base.target = Target::Tu;
  const SweepResult tu = weak_coupling_sweep(lambdas, base);
  const double pred_l = 1.0 / sp.e_s, pred_u = 1.0 / (0.5 * sp.e0_s);
  bool monotone = true;
  double prev = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!tl.records[i].solved || !tu.records[i].solved) {
      monotone = false;
      continue;
    }
    const double ratio = tu.records[i].temp / tl.records[i].temp;
    monotone = monotone && ratio > prev;
    prev = ratio;
  }
  const double el = rel(tl.fit.slope, pred_l), eu = rel(tu.fit.slope, pred_u);
  const bool pass = std::fabs(tl.fit.slope / pred_l - 1.0) < 0.15 &&
                    std::fabs(tu.fit.slope / pred_u - 1.0) < 0.15 && tu.fit.slope < tl.fit.slope &&
                    monotone;
  return {pass, "s_Tl " + fmt("%.4f", tl.fit.slope) + " (pred " + fmt("%.4f", pred_l) + ", " +
                    fmt("%.1f%%", 100 * el) + "), s_Tu " + fmt("%.4f", tu.fit.slope) + " (pred " +
                    fmt("%.4f", pred_u) + ", " + fmt("%.1f%%", 100 * eu) + "), Tu/Tl " +
                    (monotone ? "monotone" : "not monotone")};
}

Outcome delta_consistency() {
  double worst = 0.0;
  for (double lambda : {0.5, 1.0, 2.0}) {
    SolveSpec s;
    s.lambda = lambda;
    s.interaction = make_delta(1.0);
    s.rel_tol = 1e-9;
    const double matrix = solve_Tc0(s).temp;
    const double shortcut = solve_tc0_rank_one(lambda, 1.0, 1.0).temp;
    worst = std::max(worst, rel(matrix, shortcut));
  }
  return {worst <= 1e-5, "max relative difference " + fmt("%.1e", worst)};
}

Outcome region_bounds() {
  bool pass = true;
  std::ostringstream d;
  for (int dim : {2, 3}) {
    const BoundReport r = verify_region_bounds(1.0, dim, 0.3);
    pass = pass && r.pass;
    d << "d=" << dim << " margin " << fmt("%.3f", r.worst_margin) << (r.pass ? "" : " FAILED")
      << "; ";
  }
  return {pass, d.str()};
}

Outcome strong_coupling() {
  const std::vector<double> mus = {0.5, 0.2, 0.1, 0.05, 0.01};
  std::vector<double> hs, sup;
  for (double mu : mus) {
    hs.push_back(strong_coupling_hs_norm(mu).value);
    sup.push_back(strong_coupling_sup_integral(mu).value);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < mus.size(); ++i) {
    decreasing = decreasing && hs[i] < hs[i - 1] && sup[i] < sup[i - 1];
  }
  const bool shrink = hs.back() < 0.25 * hs.front() && sup.back() < 0.25 * sup.front();
  bool major = true;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const double p = -10.0 + 20.0 * i / 199.0, q = -10.0 + 20.0 * j / 199.0;
      major = major && leq(n_strong(p, q, 0.0), k_majorant(p, q));
    }
  }
  std::mt19937_64 rng(20240611ULL);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  bool fprime = true, convex = true;
  const auto g = [](double x) { return x == 0.0 ? 1.0 : x / std::tanh(x); };
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng), y = u(rng);
    fprime = fprime && std::fabs(f_strong_prime(x)) < 1.0;
    convex = convex && leq(g(0.5 * (x + y)), 0.5 * (g(x) + g(y)));
  }
  return {decreasing && shrink && major && fprime && convex,
          "HS " + fmt("%.4g", hs.front()) + " -> " + fmt("%.4g", hs.back()) + ", sup-int " +
              fmt("%.4g", sup.front()) + " -> " + fmt("%.4g", sup.back()) + ", majorization " +
              (major ? "ok" : "fails") + ", |f'|<1 " + (fprime ? "ok" : "fails") + ", convexity " +
              (convex ? "ok" : "fails")};
}

Outcome determinism() {
  bool identical = true;
  double worst = 0.0;
  std::vector<SolveSpec> specs;
  {
    SolveSpec s;
    s.interaction = make_gaussian();
    s.lambda = 1.0;
    specs.push_back(s);
    s.interaction = make_gaussian_difference(2.9919563305407246, 1.0, 2.983912661081449, 0.5);
    s.lambda = 0.5;
    s.target = Target::Tl;
    specs.push_back(s);
    s.target = Target::Tu;
    specs.push_back(s);
    s.interaction = make_delta(1.0);
    s.lambda = 1.0;
    s.target = Target::Tc0;
    specs.push_back(s);
  }
  for (const SolveSpec& s : specs) {
    const TcResult a = solve_tc(s), b = solve_tc(s);
    SolveSpec threaded = s;
    threaded.sup.threads = 3;
    const TcResult c = solve_tc(threaded);
    for (const TcResult* r : {&b, &c}) {
      identical = identical && same_bits(a.temp, r->temp) && same_bits(a.q_star, r->q_star) &&
                  same_bits(a.residual, r->residual) && a.iterations == r->iterations;
    }
    SolveSpec fine = s;
    fine.sup.grid.nodes_per_panel *= 2;
    worst = std::max(worst, rel(a.temp, solve_tc(fine).temp));
  }
  // The CLI path end to end.
  const char* argv[] = {"bcs-tc-lab", "kernel_eval", "--p-range", "0,3,31", "--q", "0,0.5,1"};
  std::ostringstream o1, o2, e1, e2;
  run_cli(6, argv, o1, e1);
  run_cli(6, argv, o2, e2);
  identical = identical && o1.str() == o2.str() && !o1.str().empty();
  return {identical && worst < 1e-5, std::string("results ") + (identical ? "identical" : "differ") +
                                         ", max grid-doubling change " + fmt("%.1e", worst)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // <= 0: no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "kernel identities", 1.0, kernel_identities},
      {2, "q=0 reduction", 1.0, q_zero_reduction},
      {3, "closed-form quadrature oracles", 5.0, closed_forms},
      {4, "singularity coefficients", 30.0, singularity_coefficients},
      {5, "unique critical temperature", 120.0, unique_tc},
      {6, "split weak-coupling slopes", 600.0, split_slopes},
      {7, "delta interaction consistency", 30.0, delta_consistency},
      {8, "region bounds", 120.0, region_bounds},
      {9, "strong-coupling lemmas", 120.0, strong_coupling},
      {10, "determinism and grid convergence", 0.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s <= 0.0 || secs < c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %2d %-34s %s  %s [%.2f s%s]\n", c.id, c.name, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
