#include "bcs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <string>

#include "bcs/errors.hpp"

namespace bcs {

namespace {

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool alive = true;
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b,
                 const GaussLegendreRule& hi, const GaussLegendreRule& lo) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s_hi = 0.0;
  for (std::size_t i = 0; i < hi.nodes.size(); ++i) s_hi += hi.weights[i] * f(c + h * hi.nodes[i]);
  double s_lo = 0.0;
  for (std::size_t i = 0; i < lo.nodes.size(); ++i) s_lo += lo.weights[i] * f(c + h * lo.nodes[i]);
  return {a, b, h * s_hi, std::fabs(h * (s_hi - s_lo)), true};
}

double sqrt_mu(double mu) {
  if (!(mu > 0.0)) throw PreconditionError("this integral needs mu > 0");
  return std::sqrt(mu);
}

double m_weight(MWeight w, double p, double sq) {
  switch (w) {
    case MWeight::one: return 1.0;
    case MWeight::abs_p_minus_sqrtmu: return std::fabs(std::fabs(p) - sq);
    case MWeight::abs_p: return std::fabs(p);
  }
  return 1.0;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw PreconditionError("Gauss-Legendre order must be positive");
  static std::mutex mtx;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

IntegralResult integrate(const std::function<double(double)>& f, const PanelScheme& scheme) {
  if (scheme.nodes_per_panel < 2) throw PreconditionError("nodes_per_panel must be >= 2");
  std::vector<double> edges = scheme.breakpoints;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.size() < 2) return {};
  const GaussLegendreRule& hi = gauss_legendre(scheme.nodes_per_panel);
  const GaussLegendreRule& lo = gauss_legendre(scheme.nodes_per_panel / 2);

  std::vector<Panel> panels;
  using Entry = std::pair<double, long>;  // (error, -index): ties pop the lowest index
  std::priority_queue<Entry> heap;
  double total = 0.0, total_err = 0.0, frozen_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    panels.push_back(eval_panel(f, edges[i], edges[i + 1], hi, lo));
    total += panels.back().value;
    total_err += panels.back().error;
    heap.push({panels.back().error, -static_cast<long>(panels.size() - 1)});
  }

  int splits = 0;
  while (total_err + frozen_err > std::max(scheme.abs_tol, scheme.rel_tol * std::fabs(total))) {
    if (heap.empty()) break;
    if (static_cast<int>(panels.size()) >= scheme.max_panels) {
      throw AccuracyError("panel quadrature: tolerance not met within " +
                              std::to_string(scheme.max_panels) + " panels",
                          total, total_err + frozen_err);
    }
    const long idx = -heap.top().second;
    heap.pop();
    Panel& p = panels[idx];
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) {
      // Cannot be split further in double precision.
      total_err -= p.error;
      frozen_err += p.error;
      continue;
    }
    p.alive = false;
    const Panel left = eval_panel(f, p.a, mid, hi, lo);
    const Panel right = eval_panel(f, mid, p.b, hi, lo);
    total += left.value + right.value - p.value;
    total_err += left.error + right.error - p.error;
    panels.push_back(left);
    heap.push({left.error, -static_cast<long>(panels.size() - 1)});
    panels.push_back(right);
    heap.push({right.error, -static_cast<long>(panels.size() - 1)});
    if (++splits % 256 == 0) {
      total = 0.0;
      total_err = 0.0;
      for (const Panel& q : panels) {
        if (q.alive) {
          total += q.value;
          total_err += q.error;
        }
      }
      total_err -= frozen_err;
    }
  }

  std::vector<const Panel*> alive;
  for (const Panel& p : panels) {
    if (p.alive) alive.push_back(&p);
  }
  std::sort(alive.begin(), alive.end(), [](const Panel* x, const Panel* y) { return x->a < y->a; });
  IntegralResult out;
  for (const Panel* p : alive) {
    out.value += p->value;
    out.error += p->error;
  }
  out.panels = static_cast<int>(alive.size());
  return out;
}

PanelScheme fermi_scheme(double q, double mu, double lo, double hi, double scale,
                         const QuadOptions& opts) {
  PanelScheme s;
  s.nodes_per_panel = opts.nodes_per_panel;
  s.abs_tol = opts.abs_tol;
  s.rel_tol = opts.rel_tol;
  s.max_panels = opts.max_panels;
  s.breakpoints = {lo, hi};
  auto add = [&](double x) {
    if (x > lo && x < hi) s.breakpoints.push_back(x);
  };
  add(0.0);
  if (mu > 0.0) {
    const double sq = std::sqrt(mu);
    const double aq = std::fabs(q);
    add(sq);
    add(std::sqrt(3.0 * mu));
    const double fermi[2] = {std::fabs(sq - aq), sq + aq};
    for (double f : fermi) {
      add(f);
      if (scale > 0.0) {
        double d = scale;
        for (int k = 0; k < 40 && d < hi - lo; ++k, d *= 4.0) {
          add(f - d);
          add(f + d);
        }
      }
    }
  }
  std::sort(s.breakpoints.begin(), s.breakpoints.end());
  s.breakpoints.erase(std::unique(s.breakpoints.begin(), s.breakpoints.end()),
                      s.breakpoints.end());
  return s;
}

IntegralResult integrate_m_t(double q, const PhysParams& params, const QuadOptions& opts) {
  validate(params);
  const double sq = sqrt_mu(params.mu);
  const PanelScheme s = fermi_scheme(q, params.mu, 0.0, std::sqrt(3.0) * sq, params.temp / sq, opts);
  return integrate([&](double p) { return b_t(p, q, params); }, s);
}

IntegralResult integrate_n_t(double q, const PhysParams& params, const QuadOptions& opts) {
  validate(params);
  const double sq = sqrt_mu(params.mu);
  const PanelScheme s = fermi_scheme(q, params.mu, 0.0, std::sqrt(3.0) * sq, params.temp / sq, opts);
  return integrate([&](double p) { return n_t(p, q, params); }, s);
}

FullLineResult integrate_n_t_fullline(double q, const PhysParams& params, double p_tail,
                                      const QuadOptions& opts) {
  validate(params);
  const double aq = std::fabs(q);
  const double sq = std::sqrt(std::max(params.mu, 0.0));
  if (p_tail <= 0.0) p_tail = std::max(8.0 * std::sqrt(std::max(params.mu, 0.0) + 1.0), 2.0 * (sq + aq));
  const double x_min = (p_tail - aq) * (p_tail - aq) - params.mu;
  if (!(p_tail > aq) || !(x_min > 0.0)) {
    throw PreconditionError("p_tail must lie beyond every Fermi point");
  }
  const double scale = params.mu > 0.0 ? params.temp / sq : 0.0;
  const PanelScheme s = fermi_scheme(q, params.mu, 0.0, p_tail, scale, opts);
  const IntegralResult core = integrate([&](double p) { return n_t(p, q, params); }, s);

  // int_P^inf dp / (p^2 + c), c = q^2 - mu, P^2 + c > 0.
  const double c = aq * aq - params.mu;
  double i_m;
  if (c > 0.0) {
    i_m = std::atan(std::sqrt(c) / p_tail) / std::sqrt(c);
  } else if (c < 0.0) {
    i_m = std::atanh(std::sqrt(-c) / p_tail) / std::sqrt(-c);
  } else {
    i_m = 1.0 / p_tail;
  }
  FullLineResult out;
  out.p_tail = p_tail;
  out.upper = 2.0 * i_m;
  out.lower = 2.0 * std::tanh(x_min / (2.0 * params.temp)) * i_m;
  out.core_error = 2.0 * core.error;
  out.value = 2.0 * core.value + 0.5 * (out.lower + out.upper);
  return out;
}

IntegralResult integrate_m_segment(double q, double mu, double a, double b, MWeight weight,
                                   const QuadOptions& opts) {
  const double sq = sqrt_mu(mu);
  if (!(a >= 0.0) || !(b >= a)) throw PreconditionError("need 0 <= a <= b");
  if (b == a) return {};
  const PanelScheme s = fermi_scheme(q, mu, a, b, 0.0, opts);
  return integrate(
      [&](double p) {
        const double m = m_bound(p, q, mu);
        return is_pole(m) ? 0.0 : m * m_weight(weight, p, sq);
      },
      s);
}

IntegralResult weighted_m_integral(double q, double mu, MWeight weight, const QuadOptions& opts) {
  const double sq = sqrt_mu(mu);
  const double aq = std::fabs(q);
  if (weight == MWeight::abs_p_minus_sqrtmu && aq > 0.5 * sq) {
    throw PreconditionError("abs_p_minus_sqrtmu weight needs |q| <= sqrt(mu)/2");
  }
  if (weight == MWeight::abs_p && std::fabs(aq - sq) > 0.5 * sq) {
    throw PreconditionError("abs_p weight needs ||q| - sqrt(mu)| <= sqrt(mu)/2");
  }
  if (weight == MWeight::one && (aq == 0.0 || aq == sq)) {
    throw PreconditionError("unweighted M integral diverges at q in {0, sqrt(mu)}");
  }
  IntegralResult half = integrate_m_segment(aq, mu, 0.0, std::sqrt(3.0) * sq, weight, opts);
  half.value *= 2.0;
  half.error *= 2.0;
  return half;
}

double region_cd(int dim, double mu) {
  if (dim == 2) return 2.0;
  if (dim == 3) return 2.0 * M_PI * std::sqrt(mu);
  throw PreconditionError("region integrals are defined for d in {2, 3}");
}

IntegralResult region_integral_m(const RegionSpec& spec, double mu, const RegionOptions& opts) {
  if (spec.dim != 2 && spec.dim != 3) {
    throw PreconditionError("region integrals are defined for d in {2, 3}");
  }
  const double sq = sqrt_mu(mu);
  const double q = std::fabs(spec.q);
  if (spec.region == Region::A1) {
    throw PreconditionError("the A1 integral of M diverges for d >= 2; use region_a1_envelope");
  }
  if (q < opts.eps * sq) {
    throw PreconditionError("q below eps: A2/A3 integrals diverge as q -> 0");
  }
  const double r3 = std::sqrt(3.0 * mu);
  const bool want_a2 = spec.region == Region::A2;
  const int dim = spec.dim;

  QuadOptions inner_opts;
  inner_opts.nodes_per_panel = opts.nodes_per_panel;
  inner_opts.abs_tol = 0.01 * opts.tol;
  inner_opts.rel_tol = 1e-12;

  // For fixed p1 >= 0, integrate over rho = |p~| in [0, sqrt(3mu - p1^2)].
  auto inner = [&](double p1) {
    const double big = r3 * r3 - p1 * p1;
    if (!(big > 0.0)) return 0.0;
    const double rmax = std::sqrt(big);
    // mu - (p1 -+ q)^2 in factored form, exact near the circle edges.
    const double d1 = (sq - p1 + q) * (sq + p1 - q);
    const double d2 = (sq - p1 - q) * (sq + p1 + q);
    const double r1 = d1 > 0.0 ? std::sqrt(d1) : 0.0;
    const double r2 = d2 > 0.0 ? std::sqrt(d2) : 0.0;
    std::vector<double> cuts = {0.0, rmax};
    if (r1 > 0.0 && r1 < rmax) cuts.push_back(r1);
    if (r2 > 0.0 && r2 < rmax) cuts.push_back(r2);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k], b = cuts[k + 1];
      const double mid = 0.5 * (a + b);
      const int inside = (mid < r1 ? 1 : 0) + (mid < r2 ? 1 : 0);
      const bool is_a2 = inside == 1;
      if (is_a2 != want_a2) continue;
      if (is_a2) {
        // M = 1 / (2 p1 q) on A2.
        const double rho_part = dim == 2 ? 2.0 * (b - a) : M_PI * (b * b - a * a);
        total += rho_part / (2.0 * p1 * q);
        continue;
      }
      // M = 1 / |p^2 + q^2 - mu| on A3. Integrate in the distance u to the
      // nearer circle so the corner p1 -> 0 keeps full relative precision.
      PanelScheme s;
      s.nodes_per_panel = inner_opts.nodes_per_panel;
      s.abs_tol = inner_opts.abs_tol;
      s.rel_tol = inner_opts.rel_tol;
      const double gap = 2.0 * p1 * q;
      if (inside == 2) {
        // rho = r2 - u: mu - q^2 - p^2 = u (2 r2 - u) + 2 p1 q.
        s.breakpoints = {r2 - b, r2 - a};
        total += integrate(
                     [&](double u) {
                       const double rho = r2 - u;
                       const double c = dim == 2 ? 2.0 : 2.0 * M_PI * rho;
                       return c / (u * (2.0 * r2 - u) + gap);
                     },
                     s)
                     .value;
      } else {
        // rho = r1 + u: p^2 + q^2 - mu = u (u + 2 r1) + max(0, -d1) + 2 p1 q.
        const double base = (d1 > 0.0 ? 0.0 : -d1) + gap;
        s.breakpoints = {a - r1, b - r1};
        total += integrate(
                     [&](double u) {
                       const double rho = r1 + u;
                       const double c = dim == 2 ? 2.0 : 2.0 * M_PI * rho;
                       return c / (u * (u + 2.0 * r1) + base);
                     },
                     s)
                     .value;
      }
    }
    return total;
  };

  PanelScheme outer;
  outer.nodes_per_panel = opts.nodes_per_panel;
  outer.abs_tol = 0.5 * opts.tol;
  outer.rel_tol = 1e-12;
  outer.breakpoints = {0.0, r3};
  const double cand[] = {std::fabs(q - sq), sq - q, q, sq + q, sq, (2.0 * mu + q * q) / (2.0 * q)};
  for (double c : cand) {
    if (c > 0.0 && c < r3) outer.breakpoints.push_back(c);
  }
  IntegralResult half = integrate(inner, outer);
  half.value *= 2.0;  // p1 -> -p1 symmetry
  half.error *= 2.0;
  return half;
}

double region_a1_envelope(double q, double mu, int dim, double radius, int samples) {
  region_cd(dim, mu);
  const double r3 = std::sqrt(3.0) * sqrt_mu(mu);
  double worst = 0.0;
  // Radial direction times angle to q; M depends only on |p|, p.q.
  for (int i = 0; i <= samples; ++i) {
    const double r = r3 * std::pow(radius / r3, static_cast<double>(i) / samples) * (1.0 + 1e-12);
    for (int j = 0; j <= 64; ++j) {
      const double c = std::cos(M_PI * j / 64.0);
      const double pq = r * q * c;
      const double base = r * r + q * q - mu;
      const double m = 2.0 / (std::fabs(base - 2.0 * pq) + std::fabs(base + 2.0 * pq));
      worst = std::max(worst, m * (1.0 + r * r));
    }
  }
  return worst;
}

double closed_form_oracle(ClosedForm name, const ClosedFormArgs& args) {
  const double mu = args.mu;
  const double sq = sqrt_mu(mu);
  const double q = args.q;
  const double t = args.temp;
  auto fail = [](const char* what) -> double { throw PreconditionError(what); };
  switch (name) {
    case ClosedForm::inner_artanh:
      if (!(q > 0.0 && q < sq)) return fail("inner_artanh needs 0 < q < sqrt(mu)");
      return std::atanh(std::sqrt((sq - q) / (sq + q))) / std::sqrt(mu - q * q);
    case ClosedForm::inner_zero:
      if (q != sq) return fail("inner_zero needs q = sqrt(mu)");
      return 0.0;
    case ClosedForm::inner_arctan:
      if (!(q > sq)) return fail("inner_arctan needs q > sqrt(mu)");
      return std::atan(std::sqrt((q - sq) / (sq + q))) / std::sqrt(q * q - mu);
    case ClosedForm::weighted_first: {
      if (!(q > 0.0 && q < sq)) return fail("weighted_first needs 0 < q < sqrt(mu)");
      const double r = std::sqrt(mu - q * q);
      return 0.5 * sq * std::log(sq + r) / r + (0.5 - sq / (2.0 * r)) * std::log(q) -
             0.5 * std::log(0.5 * (sq + q));
    }
    case ClosedForm::abs_p_first:
      if (!(q > 0.0) || q == sq) return fail("abs_p_first needs q > 0, q != sqrt(mu)");
      return 0.5 * std::fabs(std::log((sq + q) / (2.0 * q)));
    case ClosedForm::abs_p_middle:
      if (!(q > 0.0)) return fail("abs_p_middle needs q > 0");
      return (sq + q - std::fabs(sq - q)) / (2.0 * q);
    case ClosedForm::abs_p_third:
      if (!(q > 0.0) || sq + q > std::sqrt(3.0 * mu)) {
        return fail("abs_p_third needs 0 < q <= (sqrt(3) - 1) sqrt(mu)");
      }
      return 0.5 * std::log((2.0 * mu + q * q) / (2.0 * q * (sq + q)));
    case ClosedForm::nt_cut_first: {
      const double top = sq - q - t / sq;
      if (!(q >= 0.0 && t >= 0.0 && top > 0.0)) {
        return fail("nt_cut_first needs sqrt(mu) - q - T/sqrt(mu) > 0");
      }
      const double r = std::sqrt(mu - q * q);
      return std::log1p(2.0 * top / (r - sq + q + t / sq)) / (2.0 * r);
    }
    case ClosedForm::middle_log:
      if (!(q > 0.0 && q < sq)) return fail("middle_log needs 0 < q < sqrt(mu)");
      return std::log1p(2.0 * q / (sq - q)) / (2.0 * q);
    case ClosedForm::third_log: {
      const double lo = std::fabs(q - sq) + t / sq;
      if (!(q > 0.0 && t >= 0.0 && lo < sq)) {
        return fail("third_log needs q > 0 and |q - sqrt(mu)| + T/sqrt(mu) < sqrt(mu)");
      }
      return std::log(sq / lo) / (2.0 * q);
    }
  }
  return 0.0;
}

IntegralResult closed_form_quadrature(ClosedForm name, const ClosedFormArgs& args,
                                      const QuadOptions& opts) {
  closed_form_oracle(name, args);  // branch check
  const double mu = args.mu;
  const double sq = std::sqrt(mu);
  const double q = args.q;
  const double t = args.temp;
  switch (name) {
    case ClosedForm::inner_artanh:
    case ClosedForm::inner_zero:
    case ClosedForm::inner_arctan:
      return integrate_m_segment(q, mu, 0.0, std::fabs(q - sq), MWeight::one, opts);
    case ClosedForm::weighted_first:
      return integrate_m_segment(q, mu, 0.0, sq - q, MWeight::abs_p_minus_sqrtmu, opts);
    case ClosedForm::abs_p_first:
      return integrate_m_segment(q, mu, 0.0, std::fabs(sq - q), MWeight::abs_p, opts);
    case ClosedForm::abs_p_middle:
      return integrate_m_segment(q, mu, std::fabs(sq - q), sq + q, MWeight::abs_p, opts);
    case ClosedForm::abs_p_third:
      return integrate_m_segment(q, mu, sq + q, std::sqrt(3.0 * mu), MWeight::abs_p, opts);
    case ClosedForm::nt_cut_first:
      return integrate_m_segment(q, mu, 0.0, sq - q - t / sq, MWeight::one, opts);
    case ClosedForm::middle_log:
      return integrate_m_segment(q, mu, sq - q, sq + q, MWeight::one, opts);
    case ClosedForm::third_log:
      return integrate_m_segment(q, mu, std::fabs(q - sq) + t / sq, sq, MWeight::one, opts);
  }
  return {};
}

}  // namespace bcs
