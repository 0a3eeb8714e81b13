#pragma once

#include <string>
#include <vector>

#include "bcs/bs_spectra.hpp"
#include "bcs/interactions.hpp"

namespace bcs {

enum class Target { Tc0, Tl, Tu };

const char* to_string(Target target);
Target target_from_string(const std::string& name);

struct SolveSpec {
  double lambda = 1.0;
  Target target = Target::Tc0;
  double mu = 1.0;
  int dim = 1;
  InteractionModel interaction;
  double rel_tol = 1e-6;
  double bracket_lo = 0.0;  // <= 0: 1e-2 mu
  double bracket_hi = 0.0;  // <= 0: 1e-1 mu
  SupOptions sup;           // grid and q search; Tc0 uses sup.grid only
};

struct CriterionSample {
  double temp = 0.0;
  double value = 0.0;   // top eigenvalue, or a lower bound when early-stopped
  bool above = false;   // value >= 1/lambda
};

struct TcResult {
  double temp = 0.0;
  Target target = Target::Tc0;
  int iterations = 0;
  double q_star = 0.0;
  double residual = 0.0;        // |criterion(temp) - 1/lambda|
  bool boundary_warning = false;
  bool monotone = true;         // fully evaluated samples decrease in T
  int grid_size = 0;
  std::vector<CriterionSample> history;
};

/// Criterion value at T: top symmetric eigenvalue for Tc0, sup over q otherwise.
SupResult criterion(const SolveSpec& spec, double temp);

/// Bisection in log T for criterion(T) = 1/lambda. Throws NoRootError when no
/// bracket exists inside [1e-9 mu, 1e3 mu].
TcResult solve_tc(const SolveSpec& spec);
TcResult solve_Tc0(SolveSpec spec);
TcResult solve_Tl(SolveSpec spec);
TcResult solve_Tu(SolveSpec spec);

/// Contact interaction a delta in d = 1: the operator is rank one and
/// Tc0 solves (lambda a / 2 pi) int_R K_T(p)^{-1} dp = 1.
double rank_one_criterion(double temp, double lambda, double amplitude, double mu);
TcResult solve_tc0_rank_one(double lambda, double amplitude, double mu, double rel_tol = 1e-9);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Least squares y = slope * x + intercept; needs >= 3 points.
SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct SweepRecord {
  double lambda = 0.0;
  double temp = 0.0;
  double ln_ratio = 0.0;  // ln(mu / temp)
  double q_star = 0.0;
  bool solved = false;
  std::string error;
};

struct SweepResult {
  Target target = Target::Tc0;
  std::vector<SweepRecord> records;  // input order
  SlopeFit fit;                      // ln(mu/T) against 1/lambda, smallest half of lambda
  double predicted_slope = 0.0;
  bool heuristic = false;            // d = 2 prediction
};

/// Predicted weak-coupling slope of ln(mu/T) in 1/lambda.
double predicted_slope(Target target, const SphereSpectrum& spectrum);

/// Solves each lambda (threads > 1: in parallel) and fits the smallest half,
/// at least 4 points. Throws NoRootError when fewer than 4 solve.
SweepResult weak_coupling_sweep(const std::vector<double>& lambdas, const SolveSpec& base,
                                int threads = 1);

}  // namespace bcs
