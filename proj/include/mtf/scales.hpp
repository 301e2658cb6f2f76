#pragma once

#include <string>
#include <vector>

namespace mtf {

struct RegimeInput {
  double Z = 1.0;
  double B = 1.0;
  double N = -1.0;  // negative: neutral, N = Z

  RegimeInput(double z, double b, double n = -1.0);
  double electrons() const { return N < 0.0 ? Z : N; }
  double lambda() const { return electrons() / Z; }
  double beta() const;
};

enum class FieldRegime { weak, intermediate, strong };

FieldRegime classify(double Z, double B);
const char* to_string(FieldRegime regime);

// Energy magnitude: Z^{7/3}, B^{2/5} Z^{9/5} or Z^3 log(B/Z^3)^2.
double cal_E(double Z, double B);

// Order-of-magnitude picture of the atom in each regime. `a` is only
// meaningful in the weak regime and is 0 otherwise.
struct HeuristicScales {
  FieldRegime regime;
  double a;
  double R;
  double L;
  double energy;
};

struct LengthScales {
  double ell;
  double L;
  double magnetic;  // B^{-1/2}
  HeuristicScales heuristic;
};

double length_scale_ell(double Z, double B);
double parallel_length(double Z, double B);
LengthScales length_scales(double Z, double B);

// The two L branches evaluated at B = 2 Z^3, and their ratio.
struct SeamReport {
  double below;
  double above;
  double ratio;
};
SeamReport parallel_length_seam(double Z);

// Weak and intermediate energy branches at (Z, B); they meet at B = Z^{4/3}.
struct EnergySeam {
  double beta;
  double weak;
  double intermediate;
  double ratio;  // intermediate / weak = beta^{2/5}
};
EnergySeam energy_seam(double Z, double B);

struct ConfinementErrors {
  double R1;
  double R2;
  bool r1_in_range;
  bool r2_in_range;
  std::vector<std::string> warnings;
};

// Error terms of the two confinement estimates. Evaluated even outside the
// parameter ranges where they are proved; the flags say when that happened.
ConfinementErrors confinement_errors(double Z, double B, double delta, double mu_exponent);

}  // namespace mtf
