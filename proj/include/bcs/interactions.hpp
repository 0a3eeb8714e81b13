#pragma once

#include <string>
#include <vector>

namespace bcs {

enum class InteractionKind { gaussian, gaussian_difference, square_well, delta };

// Pair interaction V(r) with closed-form transform. Coupling lambda is applied
// by callers.
//   gaussian:            a0 exp(-r^2 / 2 w0^2)
//   gaussian_difference: a0 exp(-r^2 / 2 w0^2) - a1 exp(-r^2 / 2 w1^2)
//   square_well:         a0 for |r| < w0, else 0
//   delta:               a0 delta(r), d = 1 only
struct InteractionModel {
  InteractionKind kind = InteractionKind::gaussian;
  std::vector<double> amplitudes{1.0};
  std::vector<double> widths{1.0};
};

InteractionModel make_gaussian(double amplitude = 1.0, double width = 1.0);
InteractionModel make_gaussian_difference(double a0, double w0, double a1, double w1);
InteractionModel make_square_well(double amplitude, double radius);
InteractionModel make_delta(double amplitude = 1.0);

std::string to_string(InteractionKind kind);
InteractionKind interaction_kind_from_string(const std::string& name);

// Throws DomainError on missing or non-finite parameters, non-positive widths,
// or delta outside d = 1.
void validate(const InteractionModel& model, int dim);

/// V^(k) = (2 pi)^{-d/2} int e^{-ikr} V(r) dr, radial in k.
double v_hat(const InteractionModel& model, double k, int dim = 1);

struct AssumptionCheck {
  std::string name;
  bool pass = false;
  std::string reason;
};

struct Assumption1Report {
  std::vector<AssumptionCheck> checks;
  bool all_pass() const;
};

/// Report-only; moment condition is included when weak_coupling is set.
Assumption1Report validate_assumption1(const InteractionModel& model, int dim,
                                       bool weak_coupling = false);

struct SphereSpectrum {
  int dim = 1;
  double mu = 0.0;
  double e_s = 0.0;
  double e_a = 0.0;
  double e0_s = 0.0;
  std::vector<double> coefficients;  // d = 2: Fourier modes, d = 3: Legendre modes
};

/// Extremal even/odd eigenvalues of the Fermi-sphere operator
/// (2 pi)^{-d/2} V^(sqrt(mu)(p - p')). d = 2, 3 use `order` modes and throw
/// AccuracyError if the trailing modes have not decayed below 1e-12.
SphereSpectrum sphere_operator_spectrum(const InteractionModel& model, double mu, int dim,
                                        int order = 64);

}  // namespace bcs
