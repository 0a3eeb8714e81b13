#include "bcs/bs_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <utility>

#include "bcs/errors.hpp"
#include "bcs/quadrature.hpp"

namespace bcs {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

struct Builder {
  const GaussLegendreRule& rule;
  std::vector<std::pair<double, double>> pts;
  std::vector<double> edges;

  void plain(double a, double b, int panels) {
    for (int k = 0; k < panels; ++k) {
      const double lo = a + (b - a) * k / panels;
      const double hi = a + (b - a) * (k + 1) / panels;
      edges.push_back(lo);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        pts.emplace_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[i],
                         0.5 * (hi - lo) * rule.weights[i]);
      }
    }
    edges.push_back(b);
  }

  // p = s + dir * h sinh(t), t in [0, asinh(len / h)].
  void clustered(double s, double dir, double len, double h, int panels) {
    const double t_max = std::asinh(len / h);
    for (int k = 0; k < panels; ++k) {
      const double t0 = t_max * k / panels;
      const double t1 = t_max * (k + 1) / panels;
      edges.push_back(s + dir * h * std::sinh(t0));
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * rule.nodes[i];
        pts.emplace_back(s + dir * h * std::sinh(t),
                         h * std::cosh(t) * 0.5 * (t1 - t0) * rule.weights[i]);
      }
    }
    edges.push_back(s + dir * len);
  }
};

}  // namespace

const char* to_string(Kernel kernel) {
  switch (kernel) {
    case Kernel::K: return "K";
    case Kernel::B: return "B";
    case Kernel::N: return "N";
  }
  return "?";
}

const char* to_string(Sector sector) {
  return sector == Sector::symmetric ? "symmetric" : "antisymmetric";
}

MomentumGrid make_grid(double q, const PhysParams& params, const GridOptions& opts) {
  validate(params);
  if (opts.nodes_per_panel < 2 || opts.panels_per_side < 1) {
    throw PreconditionError("grid needs nodes_per_panel >= 2 and panels_per_side >= 1");
  }
  const double aq = std::fabs(q);
  const double mu = params.mu;
  const double sq = mu > 0.0 ? std::sqrt(mu) : 0.0;
  const double scale = mu > 0.0 ? sq : 1.0;
  MomentumGrid grid;
  grid.p_max = opts.p_max > 0.0 ? opts.p_max : 8.0 * std::sqrt(std::max(mu, 0.0) + 1.0);
  const double cw = opts.cluster_width > 0.0 ? opts.cluster_width : scale;
  const double ow = opts.outer_width > 0.0 ? opts.outer_width : 5.0 * scale;
  const double h = mu > 0.0 ? params.temp / sq : 1.0;

  std::vector<double> hard = {0.0, grid.p_max};
  std::vector<double> singular;
  if (mu > 0.0) {
    singular = {std::fabs(sq - aq), sq + aq};
    for (double x : {std::fabs(sq - aq), sq, sq + aq}) {
      if (x > 0.0 && x < grid.p_max) hard.push_back(x);
    }
  }
  std::sort(hard.begin(), hard.end());
  hard.erase(std::unique(hard.begin(), hard.end()), hard.end());
  auto is_singular = [&](double x) {
    return std::find(singular.begin(), singular.end(), x) != singular.end();
  };

  Builder b{gauss_legendre(opts.nodes_per_panel), {}, {}};
  auto plain = [&](double lo, double hi) {
    if (hi - lo <= 0.0) return;
    b.plain(lo, hi, std::max(1, static_cast<int>(std::ceil((hi - lo) / ow - 1e-12))));
  };
  for (std::size_t i = 0; i + 1 < hard.size(); ++i) {
    const double lo = hard[i], hi = hard[i + 1];
    const bool sl = is_singular(lo), sh = is_singular(hi);
    if (sl && sh) {
      const double mid = 0.5 * (lo + hi);
      b.clustered(lo, 1.0, mid - lo, h, opts.panels_per_side);
      b.clustered(hi, -1.0, hi - mid, h, opts.panels_per_side);
    } else if (sl) {
      const double len = std::min(hi - lo, cw);
      b.clustered(lo, 1.0, len, h, opts.panels_per_side);
      plain(lo + len, hi);
    } else if (sh) {
      const double len = std::min(hi - lo, cw);
      plain(lo, hi - len);
      b.clustered(hi, -1.0, len, h, opts.panels_per_side);
    } else {
      plain(lo, hi);
    }
  }
  std::sort(b.pts.begin(), b.pts.end());
  std::sort(b.edges.begin(), b.edges.end());
  b.edges.erase(std::unique(b.edges.begin(), b.edges.end()), b.edges.end());
  for (const auto& [p, w] : b.pts) {
    grid.nodes.push_back(p);
    grid.weights.push_back(w);
  }
  grid.panel_edges = std::move(b.edges);

  if (opts.tail) {
    const GaussLegendreRule& rule = gauss_legendre(opts.nodes_per_panel);
    std::vector<std::pair<double, double>> tail;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = 0.5 + 0.5 * rule.nodes[i];
      tail.emplace_back(grid.p_max / t, grid.p_max / (t * t) * 0.5 * rule.weights[i]);
    }
    std::sort(tail.begin(), tail.end());
    for (const auto& [p, w] : tail) {
      grid.nodes.push_back(p);
      grid.weights.push_back(w);
    }
    grid.tail_nodes = static_cast<int>(tail.size());
  }
  return grid;
}

double kernel_value(Kernel kernel, double p, double q, const PhysParams& params) {
  switch (kernel) {
    case Kernel::K:
      if (q != 0.0) throw PreconditionError("kernel K is the q = 0 restriction");
      return 1.0 / k_t(p, params);
    case Kernel::B: return b_t(p, q, params);
    case Kernel::N: return n_t(p, q, params);
  }
  return 0.0;
}

Eigen::MatrixXd build_bs_matrix(const BSOperatorSpec& spec, const MomentumGrid& grid,
                                int channel) {
  validate(spec.params);
  validate(spec.interaction, spec.params.dim);
  const int dim = spec.params.dim;
  if (dim == 3) throw PreconditionError("Birman-Schwinger matrices are built for d in {1, 2}");
  if (dim == 2 && spec.q != 0.0) {
    throw PreconditionError("d = 2 matrices are available at q = 0 only");
  }
  const std::size_t n = grid.nodes.size();
  Eigen::VectorXd s(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double a = kernel_value(spec.kernel, grid.nodes[i], spec.q, spec.params);
    if (!std::isfinite(a) || a < 0.0) {
      throw std::logic_error("non-finite kernel value on the momentum grid");
    }
    s(i) = std::sqrt(grid.weights[i] * a);
  }
  Eigen::MatrixXd h(n, n);
  if (dim == 1) {
    const double sign = spec.sector == Sector::symmetric ? 1.0 : -1.0;
    const double pref = 1.0 / std::sqrt(kTwoPi);
    for (std::size_t i = 0; i < n; ++i) {
      const double pi = grid.nodes[i];
      for (std::size_t j = 0; j <= i; ++j) {
        const double pj = grid.nodes[j];
        const double v = pref * (v_hat(spec.interaction, pi - pj, 1) +
                                 sign * v_hat(spec.interaction, pi + pj, 1));
        h(i, j) = h(j, i) = s(i) * v * s(j);
      }
    }
    return h;
  }
  // d = 2, channel l: (2 pi)^{-1} int_0^{2 pi} V^(|p - p'|) cos(l a) da, measure p dp.
  if (channel < 0) throw PreconditionError("d = 2 matrices need an angular channel");
  const int na = 64;
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = grid.nodes[i];
    for (std::size_t j = 0; j <= i; ++j) {
      const double pj = grid.nodes[j];
      double acc = 0.0;
      for (int k = 0; k < na; ++k) {
        const double alpha = kTwoPi * k / na;
        const double r2 = std::max(0.0, pi * pi + pj * pj - 2.0 * pi * pj * std::cos(alpha));
        acc += v_hat(spec.interaction, std::sqrt(r2), 2) * std::cos(channel * alpha);
      }
      const double v = acc / na * std::sqrt(pi * pj);
      h(i, j) = h(j, i) = s(i) * v * s(j);
    }
  }
  return h;
}

double top_eigenvalue(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() == 0) throw PreconditionError("empty matrix");
  if (!matrix.allFinite()) throw PreconditionError("matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw AccuracyError("symmetric eigensolver did not converge", 0.0, 0.0);
  }
  return es.eigenvalues()(matrix.rows() - 1);
}

double bottom_eigenvalue(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() == 0) throw PreconditionError("empty matrix");
  if (!matrix.allFinite()) throw PreconditionError("matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw AccuracyError("symmetric eigensolver did not converge", 0.0, 0.0);
  }
  return es.eigenvalues()(0);
}

namespace {

double spectrum_top(const BSOperatorSpec& spec, const MomentumGrid& grid) {
  if (spec.params.dim != 2) return top_eigenvalue(build_bs_matrix(spec, grid));
  double best = -std::numeric_limits<double>::infinity();
  const int first = spec.sector == Sector::symmetric ? 0 : 1;
  for (int l = first; l <= spec.max_channel; l += 2) {
    best = std::max(best, top_eigenvalue(build_bs_matrix(spec, grid, l)));
  }
  return best;
}

}  // namespace

SpectrumResult bs_top(const BSOperatorSpec& spec_in, bool with_refinement) {
  BSOperatorSpec spec = spec_in;
  // V^ of a contact interaction does not decay, so the grid must reach infinity.
  if (spec.interaction.kind == InteractionKind::delta) spec.grid.tail = true;
  const MomentumGrid grid = make_grid(spec.q, spec.params, spec.grid);
  SpectrumResult out;
  out.q = spec.q;
  out.sector = spec.sector;
  out.grid_size = static_cast<int>(grid.nodes.size());
  out.top = spectrum_top(spec, grid);
  if (with_refinement) {
    BSOperatorSpec fine = spec;
    fine.grid.nodes_per_panel *= 2;
    const MomentumGrid g2 = make_grid(spec.q, spec.params, fine.grid);
    out.refinement_delta = std::fabs(spectrum_top(fine, g2) - out.top);
  }
  return out;
}

std::vector<double> q_scan_grid(double mu, double q_max, int points) {
  if (points < 8) throw PreconditionError("q scan needs at least 8 points");
  const double sq = std::sqrt(mu);
  const int n_uniform = points / 2;
  const int n_zero = points / 8;
  const int n_fermi = points - n_uniform - n_zero - 1;
  std::vector<double> qs;
  for (int i = 0; i < n_uniform; ++i) qs.push_back(q_max * i / (n_uniform - 1));
  qs.push_back(sq);
  for (int j = 0; j < n_zero; ++j) qs.push_back(sq * std::pow(10.0, -0.5 * (j + 2)));
  const int n_left = (n_fermi + 1) / 2;
  for (int j = 0; j < n_left; ++j) qs.push_back(sq * (1.0 - std::pow(10.0, -0.5 * (j + 1))));
  for (int j = 0; j < n_fermi - n_left; ++j) qs.push_back(sq * (1.0 + std::pow(10.0, -0.5 * (j + 1))));
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  while (!qs.empty() && qs.back() > q_max) qs.pop_back();
  return qs;
}

SupResult sup_over_q(Kernel kernel, const PhysParams& params, const InteractionModel& interaction,
                     Sector sector, const SupOptions& opts, std::optional<double> stop_above) {
  if (kernel == Kernel::K) throw PreconditionError("sup over q needs kernel B or N");
  validate(params);
  if (!(params.mu > 0.0)) throw PreconditionError("sup over q needs mu > 0");
  const double sq = std::sqrt(params.mu);
  const double q_max = opts.q_max > 0.0 ? opts.q_max : 4.0 * sq;
  if (!(q_max > sq)) throw PreconditionError("q_max must exceed sqrt(mu)");

  BSOperatorSpec spec;
  spec.kernel = kernel;
  spec.sector = sector;
  spec.params = params;
  spec.interaction = interaction;
  spec.grid = opts.grid;
  SupResult out;
  auto eval = [&](double q) {
    BSOperatorSpec s = spec;
    s.q = q;
    return bs_top(s).top;
  };

  const std::vector<double> qs = q_scan_grid(params.mu, q_max, opts.scan_points);
  const std::size_t n = qs.size();
  std::vector<double> vals(n, 0.0);
  if (opts.threads > 1) {
    std::vector<std::thread> pool;
    const std::size_t nt = static_cast<std::size_t>(opts.threads);
    for (std::size_t t = 0; t < nt; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += nt) vals[i] = eval(qs[i]);
      });
    }
    for (auto& th : pool) th.join();
    out.evaluations += static_cast<int>(n);
  } else {
    // Likely maximizers first so a threshold query can stop early.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    const auto fermi_idx = static_cast<std::size_t>(
        std::find(qs.begin(), qs.end(), sq) - qs.begin());
    std::stable_partition(order.begin(), order.end(),
                          [&](std::size_t i) { return i == 0 || i == fermi_idx; });
    for (std::size_t i : order) {
      vals[i] = eval(qs[i]);
      ++out.evaluations;
      if (stop_above && vals[i] >= *stop_above) {
        out.q_star = qs[i];
        out.value = vals[i];
        out.exceeded = true;
        return out;
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (vals[i] > vals[best]) best = i;
  }
  if (stop_above && vals[best] >= *stop_above) {
    out.q_star = qs[best];
    out.value = vals[best];
    out.exceeded = true;
    return out;
  }

  std::vector<std::pair<double, double>> seen = {{qs[best], vals[best]}};
  double a = qs[best > 0 ? best - 1 : 0];
  double b = qs[best + 1 < n ? best + 1 : n - 1];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = eval(c), fd = eval(d);
  out.evaluations += 2;
  seen.emplace_back(c, fc);
  seen.emplace_back(d, fd);
  for (int it = 2; it < opts.golden_iterations; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = eval(c);
      seen.emplace_back(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = eval(d);
      seen.emplace_back(d, fd);
    }
    ++out.evaluations;
    if (stop_above && seen.back().second >= *stop_above) {
      out.q_star = seen.back().first;
      out.value = seen.back().second;
      out.exceeded = true;
      return out;
    }
  }
  for (std::size_t i = 0; i < n; ++i) seen.emplace_back(qs[i], vals[i]);
  std::pair<double, double> win = seen.front();
  for (const auto& sv : seen) {
    if (sv.second > win.second || (sv.second == win.second && sv.first < win.first)) win = sv;
  }
  out.q_star = win.first;
  out.value = win.second;
  out.boundary_warning = win.first >= q_max;
  return out;
}

}  // namespace bcs
