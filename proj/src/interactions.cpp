#include "bcs/interactions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bcs/errors.hpp"
#include "bcs/quadrature.hpp"

namespace bcs {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double gaussian_hat(double a, double w, double k, int dim) {
  return a * std::pow(w, dim) * std::exp(-0.5 * w * w * k * k);
}

double square_well_hat(double a, double r, double k, int dim) {
  const double kr = k * r;
  switch (dim) {
    case 1:
      // (2pi)^{-1/2} * 2 sin(kR)/k
      if (std::fabs(kr) < 1e-4) return a * 2.0 * r * (1.0 - kr * kr / 6.0) / std::sqrt(kTwoPi);
      return a * 2.0 * std::sin(kr) / k / std::sqrt(kTwoPi);
    case 2:
      // R J1(kR)/k
      if (std::fabs(kr) < 1e-4) return a * r * r * (0.5 - kr * kr / 16.0);
      return a * r * std::cyl_bessel_j(1.0, std::fabs(kr)) / std::fabs(k);
    default: {
      // (2pi)^{-3/2} 4pi (sin kR - kR cos kR)/k^3
      const double pref = a * 4.0 * M_PI / std::pow(kTwoPi, 1.5);
      if (std::fabs(kr) < 1e-3) return pref * r * r * r * (1.0 / 3.0 - kr * kr / 30.0);
      return pref * (std::sin(kr) - kr * std::cos(kr)) / (k * k * k);
    }
  }
}

void require_size(const InteractionModel& m, std::size_t n) {
  if (m.amplitudes.size() != n || m.widths.size() != n) {
    throw DomainError(to_string(m.kind) + " needs " + std::to_string(n) +
                      " amplitude(s) and width(s)");
  }
}

}  // namespace

InteractionModel make_gaussian(double amplitude, double width) {
  return {InteractionKind::gaussian, {amplitude}, {width}};
}

InteractionModel make_gaussian_difference(double a0, double w0, double a1, double w1) {
  return {InteractionKind::gaussian_difference, {a0, a1}, {w0, w1}};
}

InteractionModel make_square_well(double amplitude, double radius) {
  return {InteractionKind::square_well, {amplitude}, {radius}};
}

InteractionModel make_delta(double amplitude) {
  return {InteractionKind::delta, {amplitude}, {0.0}};
}

std::string to_string(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::gaussian: return "gaussian";
    case InteractionKind::gaussian_difference: return "gaussian_difference";
    case InteractionKind::square_well: return "square_well";
    case InteractionKind::delta: return "delta";
  }
  return "unknown";
}

InteractionKind interaction_kind_from_string(const std::string& name) {
  if (name == "gaussian") return InteractionKind::gaussian;
  if (name == "gaussian_difference") return InteractionKind::gaussian_difference;
  if (name == "square_well") return InteractionKind::square_well;
  if (name == "delta") return InteractionKind::delta;
  throw DomainError("unknown interaction kind '" + name + "'");
}

void validate(const InteractionModel& model, int dim) {
  if (dim < 1 || dim > 3) throw DomainError("dim must be 1, 2 or 3");
  const std::size_t n = model.kind == InteractionKind::gaussian_difference ? 2 : 1;
  require_size(model, n);
  for (double a : model.amplitudes) {
    if (!std::isfinite(a)) throw DomainError("non-finite amplitude");
  }
  if (model.kind == InteractionKind::delta) {
    if (dim != 1) throw DomainError("measure interactions admitted only for d=1");
    return;
  }
  for (double w : model.widths) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("widths must be finite and positive");
  }
}

double v_hat(const InteractionModel& model, double k, int dim) {
  const auto& a = model.amplitudes;
  const auto& w = model.widths;
  switch (model.kind) {
    case InteractionKind::gaussian:
      return gaussian_hat(a[0], w[0], k, dim);
    case InteractionKind::gaussian_difference:
      return gaussian_hat(a[0], w[0], k, dim) - gaussian_hat(a[1], w[1], k, dim);
    case InteractionKind::square_well:
      return square_well_hat(a[0], w[0], k, dim);
    case InteractionKind::delta:
      return a[0] / std::sqrt(kTwoPi);
  }
  return 0.0;
}

bool Assumption1Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

Assumption1Report validate_assumption1(const InteractionModel& model, int dim,
                                       bool weak_coupling) {
  Assumption1Report report;
  bool params_ok = true;
  std::string params_reason;
  try {
    InteractionModel probe = model;
    validate(probe, 1);
  } catch (const DomainError& e) {
    params_ok = false;
    params_reason = e.what();
  }
  report.checks.push_back({"parameters", params_ok, params_reason});

  AssumptionCheck integrability{"integrability", true, ""};
  if (dim < 1 || dim > 3) {
    integrability = {"integrability", false, "dimension must be 1, 2 or 3"};
  } else if (model.kind == InteractionKind::delta && dim != 1) {
    integrability = {"integrability", false, "measure interactions admitted only for d=1"};
  } else if (model.kind == InteractionKind::delta) {
    integrability.reason = "finite point measure (d=1)";
  } else if (model.kind == InteractionKind::square_well) {
    integrability.reason = "bounded with compact support";
  } else {
    integrability.reason = "Schwartz function";
  }
  report.checks.push_back(integrability);

  report.checks.push_back({"evenness", true, "radial by construction"});

  if (weak_coupling) {
    AssumptionCheck moment{"moment", true, ""};
    if (dim != 1) {
      moment.reason = "only required for d=1";
    } else if (model.kind == InteractionKind::delta) {
      moment = {"moment", false, "point measure is not in L^1"};
    } else {
      moment.reason = "(1+r^2)|V| integrable in closed form";
    }
    report.checks.push_back(moment);
  }
  return report;
}

SphereSpectrum sphere_operator_spectrum(const InteractionModel& model, double mu, int dim,
                                        int order) {
  if (!(mu > 0.0)) throw PreconditionError("sphere spectrum needs mu > 0");
  validate(model, dim);
  SphereSpectrum out;
  out.dim = dim;
  out.mu = mu;
  const double sq = std::sqrt(mu);

  if (dim == 1) {
    const double v0 = v_hat(model, 0.0, 1);
    const double v2 = v_hat(model, 2.0 * sq, 1);
    out.e_s = (v0 + v2) / std::sqrt(kTwoPi);
    out.e_a = (v0 - v2) / std::sqrt(kTwoPi);
    out.e0_s = 2.0 * v0 / std::sqrt(kTwoPi);
    out.coefficients = {out.e_s, out.e_a};
    return out;
  }
  if (order < 4) throw PreconditionError("sphere spectrum order must be >= 4");

  std::vector<double> coef(static_cast<std::size_t>(order), 0.0);
  if (dim == 2) {
    // Periodic trapezoid; exact for trigonometric polynomials below the node count.
    const int n = 4 * order;
    std::vector<double> samples(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double theta = kTwoPi * j / n;
      samples[j] = v_hat(model, 2.0 * sq * std::sin(0.5 * theta), 2);
    }
    for (int l = 0; l < order; ++l) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += samples[j] * std::cos(l * kTwoPi * j / n);
      coef[l] = s / n;  // (2pi)^{-1} * (2pi/n) * sum
    }
  } else {
    // Funk-Hecke: lambda_l = (2pi)^{-3/2} 2pi int_{-1}^{1} V^(sqrt(mu) sqrt(2-2t)) P_l(t) dt.
    const GaussLegendreRule& rule = gauss_legendre(2 * order);
    const double pref = kTwoPi / std::pow(kTwoPi, 1.5);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double t = rule.nodes[j];
      const double v = v_hat(model, sq * std::sqrt(std::max(0.0, 2.0 - 2.0 * t)), 3);
      for (int l = 0; l < order; ++l) {
        coef[l] += pref * rule.weights[j] * v * std::legendre(static_cast<unsigned>(l), t);
      }
    }
  }

  double scale = 0.0;
  for (double c : coef) scale = std::max(scale, std::fabs(c));
  const double tail = std::max(std::fabs(coef[order - 1]), std::fabs(coef[order - 2]));
  if (tail > 1e-12 * std::max(1.0, scale)) {
    throw AccuracyError("sphere spectrum modes have not decayed at order " + std::to_string(order),
                        coef[0], tail);
  }
  out.e_s = -std::numeric_limits<double>::infinity();
  out.e_a = -std::numeric_limits<double>::infinity();
  for (int l = 0; l < order; ++l) {
    double& target = (l % 2 == 0) ? out.e_s : out.e_a;
    target = std::max(target, coef[l]);
  }
  // In d = 2, modes +l and -l coincide; the list above holds l >= 0 only.
  out.e0_s = 2.0 * v_hat(model, 0.0, dim) / std::pow(kTwoPi, 0.5 * dim);
  out.coefficients = std::move(coef);
  return out;
}

}  // namespace bcs
