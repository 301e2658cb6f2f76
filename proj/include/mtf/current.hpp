#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtf/radial.hpp"
#include "mtf/smooth.hpp"
#include "mtf/solver.hpp"

namespace mtf {

enum class FieldProfile {
  rigid,  // 1 on [0, s], smooth taper to 0 at 2s
  bump,   // e * exp(-1 / (1 - (r/s)^2)) on [0, s)
  shell,  // bump of half-width s/2 centred at r = s
};

FieldProfile parse_field_profile(const std::string& name);
const char* to_string(FieldProfile profile);

// Perpendicular test field a(x) = g(|x|) (-x2, x1, 0), with
// g = sum_k weight_k * profile_k(r / scale_k). Then
//   a~ = (-a2, a1, 0) = -g(|x|) x_perp = a~_0,
//   b3 = 2 g + r_perp^2 g'(r) / r, whose spherical mean is 2 g + (2/3) r g'.
class TestField {
 public:
  struct Term {
    FieldProfile profile;
    double scale;
    double weight;
  };

  TestField() = default;
  TestField(FieldProfile profile, double scale, double weight = 1.0);

  TestField& add(FieldProfile profile, double scale, double weight = 1.0);
  TestField scaled(double factor) const;
  TestField plus(const TestField& other) const;

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double g(double r) const;
  double dg(double r) const;
  double b3(double r, double r_perp_sq) const;
  double b3_average(double r) const;
  double support_radius() const;

  // Profile on the scale a given length (typically ell) multiplied by the
  // profile's reach factor: rigid 5, bump 3, shell 2.
  static TestField standard(FieldProfile profile, double ell);

 private:
  std::vector<Term> terms_;
};

struct CurrentReport {
  double closed_form = 0.0;
  double j_kin = 0.0;
  double j_int = 0.0;
  double j_dens = 0.0;
  // closed_form - (j_kin - j_int + j_dens).
  double residual = 0.0;
  // Error estimate of the j_int quadrature.
  double quad_error = 0.0;
};

struct DAlphaResult {
  double value = 0.0;
  double quad_error = 0.0;
};

// int b3 {w P'(w) - (5/2) P(w)} with w = [V_eff]_-, the pairing of the
// current with B a.
double closed_form_current(const MtfSolution& sol, const TestField& field);

CurrentReport split_current(const MtfSolution& sol, const TestField& field);

// (1/2) iint rho1(x) (x - y).(a~(x) - a~(y)) / |x - y|^3 rho2(y) dx dy.
//
// With a~ = -g x_perp and radial densities, averaging over rotations replaces
// the perpendicular dot product by 2/3 of the full one, leaving
//   -(8 pi^2 / 3) iint rho1(r) rho2(s) r^2 s^2 C(r, s) dr ds,
//   C(r, s) = int_{-1}^{1} (x - y).(g(r) x - g(s) y) / |x - y|^3 dcos,
// integrated numerically over t = |x - y| (20-point Gauss-Legendre in log t;
// quad_error compares against the 10-point rule). The s-integral is split at
// s = r where C has a kink. Outer radii are distributed over threads.
DAlphaResult d_alpha(const RadialFunction& rho1, const RadialFunction& rho2, const TestField& field);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

// Monte-Carlo estimate of d_alpha from the full six-dimensional kernel, with
// points drawn from rho1 and rho2 (seeded, reproducible).
MonteCarloEstimate d_alpha_monte_carlo(const RadialFunction& rho1, const RadialFunction& rho2,
                                       const TestField& field, std::size_t samples, std::uint64_t seed);

}  // namespace mtf
