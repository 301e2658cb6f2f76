#include "mtf/scales.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtf {
namespace {

void check_positive(double Z, double B) {
  if (!(Z > 0.0) || !(B > 0.0) || !std::isfinite(Z) || !std::isfinite(B))
    throw std::invalid_argument("Z and B must be positive and finite");
}

bool above_strong_seam(double Z, double B) { return B > 2.0 * Z * Z * Z; }

}  // namespace

RegimeInput::RegimeInput(double z, double b, double n) : Z(z), B(b), N(n) {
  check_positive(Z, B);
  if (N >= 0.0 && !(N > 0.0)) throw std::invalid_argument("N must be positive");
}

double RegimeInput::beta() const { return B / std::pow(Z, 4.0 / 3.0); }

FieldRegime classify(double Z, double B) {
  check_positive(Z, B);
  if (B <= std::pow(Z, 4.0 / 3.0)) return FieldRegime::weak;
  if (B <= 2.0 * Z * Z * Z) return FieldRegime::intermediate;
  return FieldRegime::strong;
}

const char* to_string(FieldRegime regime) {
  switch (regime) {
    case FieldRegime::weak: return "weak";
    case FieldRegime::intermediate: return "intermediate";
    case FieldRegime::strong: return "strong";
  }
  return "unknown";
}

double cal_E(double Z, double B) {
  switch (classify(Z, B)) {
    case FieldRegime::weak: return std::pow(Z, 7.0 / 3.0);
    case FieldRegime::intermediate: return std::pow(B, 0.4) * std::pow(Z, 1.8);
    case FieldRegime::strong: {
      const double lg = std::log(B / (Z * Z * Z));
      return Z * Z * Z * lg * lg;
    }
  }
  return 0.0;
}

double length_scale_ell(double Z, double B) {
  check_positive(Z, B);
  const double beta = B / std::pow(Z, 4.0 / 3.0);
  return std::pow(Z, -1.0 / 3.0) * std::pow(1.0 + beta, -0.4);
}

double parallel_length(double Z, double B) {
  check_positive(Z, B);
  if (!above_strong_seam(Z, B)) return std::pow(Z, -0.4) * std::pow(B, -0.2);
  return 1.0 / (Z * std::log(B / (Z * Z * Z)));
}

LengthScales length_scales(double Z, double B) {
  LengthScales out{};
  out.ell = length_scale_ell(Z, B);
  out.L = parallel_length(Z, B);
  out.magnetic = 1.0 / std::sqrt(B);
  HeuristicScales& h = out.heuristic;
  h.regime = classify(Z, B);
  h.energy = cal_E(Z, B);
  switch (h.regime) {
    case FieldRegime::weak:
      h.a = std::pow(Z, -2.0 / 3.0);
      h.R = std::pow(Z, -1.0 / 3.0);
      h.L = h.a;
      break;
    case FieldRegime::intermediate:
      h.a = 0.0;
      h.L = std::pow(Z, -2.0 / 3.0) * std::pow(B, -0.2);
      h.R = std::pow(Z, 0.2) * std::pow(B, -0.4);
      break;
    case FieldRegime::strong:
      h.a = 0.0;
      h.L = 1.0 / (Z * std::log(B / (Z * Z * Z)));
      h.R = std::sqrt(Z / B);
      break;
  }
  return out;
}

EnergySeam energy_seam(double Z, double B) {
  check_positive(Z, B);
  EnergySeam s{};
  s.beta = B / std::pow(Z, 4.0 / 3.0);
  s.weak = std::pow(Z, 7.0 / 3.0);
  s.intermediate = std::pow(B, 0.4) * std::pow(Z, 1.8);
  s.ratio = s.intermediate / s.weak;
  return s;
}

SeamReport parallel_length_seam(double Z) {
  check_positive(Z, 1.0);
  const double B = 2.0 * Z * Z * Z;
  SeamReport s{};
  s.below = std::pow(Z, -0.4) * std::pow(B, -0.2);
  s.above = 1.0 / (Z * std::log(2.0));
  s.ratio = s.above / s.below;
  return s;
}

ConfinementErrors confinement_errors(double Z, double B, double delta, double mu_exponent) {
  check_positive(Z, B);
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  ConfinementErrors out{};
  const double beta = B / std::pow(Z, 4.0 / 3.0);
  const double root_b = std::sqrt(B);
  const bool strong = B >= 2.0 * Z * Z * Z;
  const double log_ratio = std::log(B / (Z * Z * Z));

  if (!strong) {
    out.R1 = std::min(std::pow(beta, -0.9) + std::pow(beta, -9.0 / 35.0) * std::pow(Z, -2.0 / 7.0),
                      std::pow(beta, -0.6));
  } else {
    out.R1 = std::min(std::pow(B, -1.0 / 3.0), Z / root_b);
  }
  out.r1_in_range = beta >= 1.0;
  if (!out.r1_in_range) out.warnings.emplace_back("R1 evaluated with beta < 1");

  const double L = parallel_length(Z, B);
  const double tail = strong ? std::min(std::pow(B, -1.0 / 3.0), Z / root_b * log_ratio) : std::pow(beta, -0.6);
  out.R2 = (Z / root_b) / delta * std::pow(delta * L * root_b, mu_exponent) * tail;

  out.r2_in_range = true;
  if (!(mu_exponent > 0.0 && mu_exponent < 0.5)) {
    out.r2_in_range = false;
    out.warnings.emplace_back("R2 exponent mu outside (0, 1/2)");
  }
  if (B < Z * Z) {
    out.r2_in_range = false;
    out.warnings.emplace_back("R2 evaluated with B < Z^2");
  }
  if (delta < 1.0 / (root_b * L) || delta > 1.0) {
    out.r2_in_range = false;
    out.warnings.emplace_back("R2 delta outside [B^{-1/2}/L, 1]");
  }
  return out;
}

}  // namespace mtf
