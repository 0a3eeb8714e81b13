#include "bcs/critical_temps.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <limits>
#include <thread>
#include <tuple>

#include "bcs/errors.hpp"
#include "bcs/quadrature.hpp"

namespace bcs {

const char* to_string(Target target) {
  switch (target) {
    case Target::Tc0: return "tc0";
    case Target::Tl: return "tl";
    case Target::Tu: return "tu";
  }
  return "?";
}

Target target_from_string(const std::string& name) {
  if (name == "tc0") return Target::Tc0;
  if (name == "tl") return Target::Tl;
  if (name == "tu") return Target::Tu;
  throw ConfigError("unknown target '" + name + "' (expected tc0, tl or tu)");
}

namespace {

void check_spec(const SolveSpec& spec) {
  if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda)) {
    throw PreconditionError("lambda must be positive and finite");
  }
  if (!(spec.rel_tol > 0.0) || spec.rel_tol >= 1.0) {
    throw PreconditionError("rel_tol must lie in (0, 1)");
  }
  PhysParams params{spec.mu, 1.0, spec.dim};
  validate(params);
  validate(spec.interaction, spec.dim);
  if (spec.dim == 3) throw PreconditionError("critical temperatures are solved for d in {1, 2}");
  if (spec.dim == 2 && spec.target != Target::Tc0) {
    throw PreconditionError("d = 2 supports the q = 0 temperature Tc0 only");
  }
  if (spec.target != Target::Tc0 && !(spec.mu > 0.0)) {
    throw PreconditionError("Tl and Tu need mu > 0");
  }
}

SupResult evaluate(const SolveSpec& spec, double temp, std::optional<double> stop_above) {
  const PhysParams params{spec.mu, temp, spec.dim};
  if (spec.target == Target::Tc0) {
    BSOperatorSpec op;
    op.kernel = Kernel::K;
    op.q = 0.0;
    op.params = params;
    op.interaction = spec.interaction;
    op.grid = spec.sup.grid;
    SupResult out;
    out.value = bs_top(op).top;
    out.evaluations = 1;
    out.exceeded = stop_above && out.value >= *stop_above;
    return out;
  }
  const Kernel kernel = spec.target == Target::Tl ? Kernel::B : Kernel::N;
  return sup_over_q(kernel, params, spec.interaction, Sector::symmetric, spec.sup, stop_above);
}

int grid_size_at(const SolveSpec& spec, double temp, double q) {
  GridOptions g = spec.sup.grid;
  if (spec.interaction.kind == InteractionKind::delta) g.tail = true;
  return static_cast<int>(make_grid(q, {spec.mu, temp, spec.dim}, g).nodes.size());
}

template <class Above>
std::pair<double, double> bracket_root(double lo, double hi, double mu_scale, Above above,
                                       int& iterations) {
  const double t_min = 1e-9 * mu_scale, t_max = 1e3 * mu_scale;
  while (above(hi)) {
    ++iterations;
    if (hi >= t_max) throw NoRootError("criterion stays above 1/lambda up to 1e3 mu");
    lo = hi;
    hi = std::min(hi * 10.0, t_max);
  }
  while (!above(lo)) {
    ++iterations;
    if (lo <= t_min) {
      throw NoRootError("criterion stays below 1/lambda down to 1e-9 mu");
    }
    hi = lo;
    lo = std::max(lo / 10.0, t_min);
  }
  return {lo, hi};
}

template <class Above>
double bisect_log(double lo, double hi, double rel_tol, Above above, int& iterations) {
  while (hi / lo - 1.0 > rel_tol) {
    const double mid = std::sqrt(lo * hi);
    if (above(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iterations;
  }
  return std::sqrt(lo * hi);
}

}  // namespace

SupResult criterion(const SolveSpec& spec, double temp) {
  check_spec(spec);
  return evaluate(spec, temp, std::nullopt);
}

TcResult solve_tc(const SolveSpec& spec) {
  check_spec(spec);
  const double scale = spec.mu > 0.0 ? spec.mu : 1.0;
  const double threshold = 1.0 / spec.lambda;
  TcResult out;
  out.target = spec.target;
  auto above = [&](double temp) {
    const SupResult r = evaluate(spec, temp, threshold);
    const bool a = r.exceeded || r.value >= threshold;
    out.history.push_back({temp, r.value, a});
    return a;
  };
  double lo = spec.bracket_lo > 0.0 ? spec.bracket_lo : 1e-2 * scale;
  double hi = spec.bracket_hi > 0.0 ? spec.bracket_hi : 1e-1 * scale;
  if (!(hi > lo)) throw PreconditionError("bracket must satisfy lo < hi");
  int iterations = 0;
  std::tie(lo, hi) = bracket_root(lo, hi, scale, above, iterations);
  out.temp = bisect_log(lo, hi, spec.rel_tol, above, iterations);
  out.iterations = iterations;

  const SupResult final_eval = evaluate(spec, out.temp, std::nullopt);
  out.residual = std::fabs(final_eval.value - threshold);
  out.q_star = final_eval.q_star;
  out.boundary_warning = final_eval.boundary_warning;
  out.grid_size = grid_size_at(spec, out.temp, out.q_star);

  // Samples that ran to completion must decrease in T; early-stopped ones are
  // lower bounds and are only checked for consistency of the side.
  std::vector<CriterionSample> sorted = out.history;
  std::sort(sorted.begin(), sorted.end(),
            [](const CriterionSample& a, const CriterionSample& b) { return a.temp < b.temp; });
  bool seen_below = false;
  double last_full = std::numeric_limits<double>::infinity();
  for (const auto& s : sorted) {
    if (s.above && seen_below) out.monotone = false;
    if (!s.above) seen_below = true;
    const bool full = spec.target == Target::Tc0 || !s.above;
    if (full) {
      if (s.value > last_full) out.monotone = false;
      last_full = s.value;
    }
  }
  return out;
}

TcResult solve_Tc0(SolveSpec spec) {
  spec.target = Target::Tc0;
  return solve_tc(spec);
}

TcResult solve_Tl(SolveSpec spec) {
  spec.target = Target::Tl;
  return solve_tc(spec);
}

TcResult solve_Tu(SolveSpec spec) {
  spec.target = Target::Tu;
  return solve_tc(spec);
}

double rank_one_criterion(double temp, double lambda, double amplitude, double mu) {
  const PhysParams params{mu, temp, 1};
  QuadOptions opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-13;
  const FullLineResult r = integrate_n_t_fullline(0.0, params, 0.0, opts);
  return lambda * amplitude / (2.0 * M_PI) * r.value;
}

TcResult solve_tc0_rank_one(double lambda, double amplitude, double mu, double rel_tol) {
  if (!(lambda > 0.0) || !(amplitude > 0.0)) {
    throw PreconditionError("rank-one solve needs lambda > 0 and amplitude > 0");
  }
  const double scale = mu > 0.0 ? mu : 1.0;
  TcResult out;
  out.target = Target::Tc0;
  auto above = [&](double temp) {
    const double v = rank_one_criterion(temp, lambda, amplitude, mu);
    out.history.push_back({temp, v, v >= 1.0});
    return v >= 1.0;
  };
  int iterations = 0;
  const auto [lo, hi] = bracket_root(1e-2 * scale, 1e-1 * scale, scale, above, iterations);
  out.temp = bisect_log(lo, hi, rel_tol, above, iterations);
  out.iterations = iterations;
  out.residual = std::fabs(rank_one_criterion(out.temp, lambda, amplitude, mu) - 1.0);
  return out;
}

SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw PreconditionError("fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw PreconditionError("fit_line needs at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw PreconditionError("fit_line: x values are all equal");
  SlopeFit f;
  f.points = static_cast<int>(n);
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    sse += r * r;
  }
  f.stderr_slope = std::sqrt(sse / (n - 2) / sxx);
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return f;
}

double predicted_slope(Target target, const SphereSpectrum& spectrum) {
  if (!(spectrum.e_s > 0.0)) return std::numeric_limits<double>::infinity();
  if (spectrum.dim != 1) return std::pow(spectrum.mu, 1.0 - 0.5 * spectrum.dim) / spectrum.e_s;
  const double root = std::sqrt(spectrum.mu);
  if (target == Target::Tu) return root / std::max(spectrum.e_s, 0.5 * spectrum.e0_s);
  return root / spectrum.e_s;
}

SweepResult weak_coupling_sweep(const std::vector<double>& lambdas, const SolveSpec& base,
                                int threads) {
  if (lambdas.empty()) throw PreconditionError("empty lambda list");
  SweepResult out;
  out.target = base.target;
  out.heuristic = base.dim == 2;
  out.records.resize(lambdas.size());
  auto solve_one = [&](std::size_t i) {
    SweepRecord& rec = out.records[i];
    rec.lambda = lambdas[i];
    SolveSpec spec = base;
    spec.lambda = lambdas[i];
    spec.sup.threads = 1;
    try {
      const TcResult r = solve_tc(spec);
      rec.temp = r.temp;
      rec.ln_ratio = std::log(spec.mu / r.temp);
      rec.q_star = r.q_star;
      rec.solved = true;
    } catch (const NoRootError& e) {
      rec.error = e.what();
    } catch (const AccuracyError& e) {
      rec.error = e.what();
    }
  };
  const std::size_t nt = static_cast<std::size_t>(std::max(1, threads));
  if (nt == 1) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) solve_one(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < lambdas.size(); i += nt) solve_one(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<const SweepRecord*> solved;
  for (const auto& r : out.records) {
    if (r.solved) solved.push_back(&r);
  }
  if (solved.size() < 4) throw NoRootError("fewer than 4 solvable lambda points");
  std::sort(solved.begin(), solved.end(),
            [](const SweepRecord* a, const SweepRecord* b) { return a->lambda < b->lambda; });
  const std::size_t keep = std::max<std::size_t>(4, (solved.size() + 1) / 2);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < keep; ++i) {
    x.push_back(1.0 / solved[i]->lambda);
    y.push_back(solved[i]->ln_ratio);
  }
  out.fit = fit_line(x, y);
  if (base.mu > 0.0) {
    out.predicted_slope =
        predicted_slope(base.target, sphere_operator_spectrum(base.interaction, base.mu, base.dim));
  }
  return out;
}

}  // namespace bcs
