#include "mtf/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mtf {
namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

// Euler-Maclaurin coefficients B_{2p} / (2p)!, p = 1..5.
constexpr double kEulerMaclaurin[5] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0,
                                       -1.0 / 1209600.0, 1.0 / 47900160.0};

double power(double t, double alpha) {
  if (alpha == 1.5) return t * std::sqrt(t);
  if (alpha == 0.5) return std::sqrt(t);
  if (alpha == -0.5) return 1.0 / std::sqrt(t);
  return std::pow(t, alpha);
}

// sum_{k=a}^{b} (f + k)^alpha for integers 1 <= a < b, via Euler-Maclaurin.
double smooth_tail(double f, double a, double b, double alpha) {
  const double ta = f + a;
  const double tb = f + b;
  const double ga = power(ta, alpha);
  const double gb = power(tb, alpha);
  double sum = (tb * gb - ta * ga) / (alpha + 1.0) + 0.5 * (ga + gb);
  // Odd derivatives g^{(2p-1)}(t) = c_{2p-1} t^{alpha - 2p + 1}.
  double coef = alpha;  // c_1
  double da = ga / ta;
  double db = gb / tb;
  for (int p = 0; p < 5; ++p) {
    sum += kEulerMaclaurin[p] * coef * (db - da);
    const double n = 2.0 * p + 1.0;  // current derivative order
    coef *= (alpha - n) * (alpha - n - 1.0);
    da /= ta * ta;
    db /= tb * tb;
  }
  return sum;
}

void check_field(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("field strength b must be positive and finite");
}

void check_level(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("potential level v must be finite and >= 0");
}

}  // namespace

LandauPressure::LandauPressure(double b, LevelSummation policy) : b_(b), policy_(policy) {
  check_field(b);
  if (policy_.exact_head < 2 || policy_.direct_limit <= policy_.exact_head + 1)
    throw DomainError("level summation policy needs direct_limit > exact_head + 1 >= 3");
}

std::size_t LandauPressure::occupied_levels(double v) const {
  check_level(v);
  const double x = v / (2.0 * b_);
  if (x > 1e15) throw DomainError("potential level too deep for Landau summation");
  return static_cast<std::size_t>(std::floor(x));
}

namespace {

// Sum over Landau levels j >= 1 of (v - 2jb)^alpha, for alpha in {3/2, 1/2,
// -1/2}. For alpha < 0 a term sitting exactly on its kink is infinite.
double level_sum(double v, double b, double alpha, std::size_t levels, const LevelSummation& policy) {
  if (levels == 0) return 0.0;
  if (levels <= policy.direct_limit) {
    double sum = 0.0;
    for (std::size_t j = 1; j <= levels; ++j) {
      const double t = v - 2.0 * static_cast<double>(j) * b;
      if (t > 0.0) sum += power(t, alpha);
      else if (alpha < 0.0) return std::numeric_limits<double>::infinity();
    }
    return sum;
  }
  // Reindex k = levels - j so the terms read (f + k)^alpha, f in [0, 1).
  const double x = v / (2.0 * b);
  const double f = std::max(0.0, x - static_cast<double>(levels));
  double head = 0.0;
  for (std::size_t k = 0; k < policy.exact_head; ++k) {
    const double t = f + static_cast<double>(k);
    if (t > 0.0) head += power(t, alpha);
    else if (alpha < 0.0) return std::numeric_limits<double>::infinity();
  }
  const double tail = smooth_tail(f, static_cast<double>(policy.exact_head),
                                  static_cast<double>(levels - 1), alpha);
  return power(2.0 * b, alpha) * (head + tail);
}

}  // namespace

double LandauPressure::pressure(double v) const {
  const std::size_t levels = occupied_levels(v);
  return b_ / (3.0 * kPi2) * (v * std::sqrt(v) + 2.0 * level_sum(v, b_, 1.5, levels, policy_));
}

double LandauPressure::pressure_truncated(double v, std::size_t level_cutoff) const {
  check_level(v);
  double sum = 0.0;
  for (std::size_t j = 1; j <= level_cutoff; ++j) {
    const double t = v - 2.0 * static_cast<double>(j) * b_;
    if (t > 0.0) sum += t * std::sqrt(t);
  }
  return b_ / (3.0 * kPi2) * (v * std::sqrt(v) + 2.0 * sum);
}

double LandauPressure::density(double v) const {
  const std::size_t levels = occupied_levels(v);
  return b_ / (2.0 * kPi2) * (std::sqrt(v) + 2.0 * level_sum(v, b_, 0.5, levels, policy_));
}

double LandauPressure::density_slope(double v) const {
  const std::size_t levels = occupied_levels(v);
  if (v == 0.0) return std::numeric_limits<double>::infinity();
  return b_ / (4.0 * kPi2) * (1.0 / std::sqrt(v) + 2.0 * level_sum(v, b_, -0.5, levels, policy_));
}

double LandauPressure::single_band_threshold() const {
  return b_ * std::sqrt(2.0 * b_) / (2.0 * kPi2);
}

double inversion_tolerance(double v) {
  return std::min(1e-12, 8.0 * std::numeric_limits<double>::epsilon() * std::max(v, 1e-300));
}

double LandauPressure::potential_for_density(double rho, double hint) const {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("density must be finite and >= 0");
  if (rho == 0.0) return 0.0;
  if (rho <= single_band_threshold()) {
    const double root = 2.0 * kPi2 * rho / b_;
    return root * root;
  }

  // P'(v) >= (b/2pi^2) v^{1/2} and P'(v) >= v^{3/2} / (6 pi^2) bound the root.
  double lo = 0.0;
  double hi = std::min(std::pow(2.0 * kPi2 * rho / b_, 2), std::pow(6.0 * kPi2 * rho, 2.0 / 3.0));
  while (density(hi) < rho) hi *= 2.0;

  double v = (hint > lo && hint < hi) ? hint : 0.5 * (lo + hi);
  const double kink_width = 1e-8 * b_;
  for (int it = 0; it < 400; ++it) {
    const double residual = density(v) - rho;
    if (std::abs(residual) <= 1e-14 * rho) return v;
    if (residual < 0.0) lo = v;
    else hi = v;
    if (hi - lo <= inversion_tolerance(v)) break;

    const double period = 2.0 * b_;
    const double to_kink = std::abs(v - period * std::round(v / period));
    double next = 0.5 * (lo + hi);
    if (to_kink > kink_width) {
      const double slope = density_slope(v);
      if (std::isfinite(slope) && slope > 0.0) {
        const double newton = v - residual / slope;
        if (newton > lo && newton < hi) next = newton;
      }
    }
    if (std::abs(next - v) <= inversion_tolerance(v)) {
      v = next;
      break;
    }
    v = next;
  }
  return v;
}

double LandauPressure::kinetic(double rho) const {
  if (rho == 0.0) return 0.0;
  const double v = potential_for_density(rho);
  return std::max(0.0, rho * v - pressure(v));
}

double ClassicalPressure::pressure(double v) const {
  check_level(v);
  return 2.0 * v * v * std::sqrt(v) / (15.0 * kPi2);
}

double ClassicalPressure::density(double v) const {
  check_level(v);
  return v * std::sqrt(v) / (3.0 * kPi2);
}

double ClassicalPressure::density_slope(double v) const {
  check_level(v);
  return std::sqrt(v) / (2.0 * kPi2);
}

double ClassicalPressure::potential_for_density(double rho, double) const {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("density must be finite and >= 0");
  return std::cbrt(3.0 * kPi2 * rho * 3.0 * kPi2 * rho);
}

double ClassicalPressure::kinetic(double rho) const {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("density must be finite and >= 0");
  return 0.6 * rho * potential_for_density(rho);
}

double eval_pressure(double b, double v) { return LandauPressure(b).pressure(v); }

double eval_pressure_derivative(double b, double v) { return LandauPressure(b).density(v); }

double invert_derivative(double b, double rho) { return LandauPressure(b).potential_for_density(rho); }

double eval_tau(double b, double rho) { return LandauPressure(b).kinetic(rho); }

}  // namespace mtf
