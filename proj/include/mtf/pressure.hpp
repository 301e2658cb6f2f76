#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtf {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Interface shared by the Landau pressure and its zero-field limit, so the
// self-consistent solver can run against either.
class PressureModel {
 public:
  virtual ~PressureModel() = default;

  virtual double pressure(double v) const = 0;
  // P'(v): the density a potential well of depth v supports.
  virtual double density(double v) const = 0;
  // Right derivative of density().
  virtual double density_slope(double v) const = 0;
  // Inverse of density(); `hint` is a starting guess and may be ignored.
  virtual double potential_for_density(double rho, double hint = -1.0) const = 0;
  // Legendre transform tau(rho) = sup_v (rho v - P(v)).
  virtual double kinetic(double rho) const = 0;
  // Scale at which the model is parameterised (the field strength, or 0).
  virtual double field() const = 0;
};

// How the sum over Landau levels j >= 1 is evaluated. Terms with 2jb > v vanish
// identically, so the sum is always finite. Up to `direct_limit` occupied
// levels are summed term by term; beyond that the smooth part of the sum is
// taken from an Euler-Maclaurin expansion after `exact_head` exact terms.
struct LevelSummation {
  std::size_t direct_limit = 256;
  std::size_t exact_head = 12;
};

class LandauPressure final : public PressureModel {
 public:
  explicit LandauPressure(double b, LevelSummation policy = {});

  double field() const override { return b_; }
  const LevelSummation& policy() const { return policy_; }

  // (b/3pi^2) (v^{3/2} + 2 sum_j (v - 2jb)_+^{3/2})
  double pressure(double v) const override;
  // (b/2pi^2) (v^{1/2} + 2 sum_j (v - 2jb)_+^{1/2})
  double density(double v) const override;
  // Right derivative of density(); +inf at v = 0 and at every kink v = 2jb.
  double density_slope(double v) const override;
  double potential_for_density(double rho, double hint = -1.0) const override;
  double kinetic(double rho) const override;

  // Number of Landau levels j >= 1 with 2jb < v.
  std::size_t occupied_levels(double v) const;
  // Largest density representable in the lowest Landau level alone,
  // b sqrt(2b) / (2 pi^2) (reached at v = 2b).
  double single_band_threshold() const;

  // Direct term-by-term sum over j = 1..level_cutoff regardless of policy.
  double pressure_truncated(double v, std::size_t level_cutoff) const;

 private:
  double b_;
  LevelSummation policy_;
};

// Kinetic energy density tau_b and its single-band threshold, expressed as a
// thin view over LandauPressure.
class KineticDensity {
 public:
  explicit KineticDensity(double b) : pressure_(b) {}
  double operator()(double rho) const { return pressure_.kinetic(rho); }
  double derivative(double rho) const { return pressure_.potential_for_density(rho); }
  double single_band_threshold() const { return pressure_.single_band_threshold(); }
  const LandauPressure& pressure() const { return pressure_; }

 private:
  LandauPressure pressure_;
};

// Zero-field Thomas-Fermi pressure 2 v^{5/2} / (15 pi^2), the b -> 0 limit of
// LandauPressure.
class ClassicalPressure final : public PressureModel {
 public:
  double field() const override { return 0.0; }
  double pressure(double v) const override;
  double density(double v) const override;
  double density_slope(double v) const override;
  double potential_for_density(double rho, double hint = -1.0) const override;
  double kinetic(double rho) const override;
};

double eval_pressure(double b, double v);
double eval_pressure_derivative(double b, double v);
double invert_derivative(double b, double rho);
double eval_tau(double b, double rho);

// Bracket width at which the inversion gives up refining v: 1e-12, or a few
// ulps of v when that is smaller. The iteration normally stops earlier, once
// |P'(v) - rho| <= 1e-14 rho. Below the single-band threshold the inverse is
// taken in closed form.
double inversion_tolerance(double v);

}  // namespace mtf
