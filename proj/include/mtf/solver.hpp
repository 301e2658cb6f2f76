#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtf/pressure.hpp"
#include "mtf/radial.hpp"

namespace mtf {

struct SolverTolerances {
  // sup |rho - P'([V_eff]_-)| / max rho at which the inner iteration stops.
  double scf = 1e-7;
  // Bisection on the chemical potential stops once the bracket is below mu * Z^2.
  double mu = 1e-10;
  std::size_t max_iterations = 50000;
  std::size_t max_mu_steps = 200;
};

enum class InitialGuess { zero, gaussian };

struct MtfProblem {
  double N = 1.0;
  double Z = 1.0;
  double B = 1.0;
  std::shared_ptr<const RadialGrid> grid;
  SolverTolerances tolerances;
  double mixing = 0.3;
  InitialGuess guess = InitialGuess::zero;

  // Log grid on [1e-4, rmax_over_ell] * ell(Z, B).
  static MtfProblem make(double N, double Z, double B, std::size_t grid_n = 512, double rmax_over_ell = 50.0);
  void validate() const;
};

struct EnergyComponents {
  double kinetic = 0.0;
  double attraction = 0.0;
  double repulsion = 0.0;
  double total = 0.0;
};

struct MtfSolution {
  RadialFunction rho;
  // V_eff = -Z/r + rho * |x|^{-1} - mu.
  RadialFunction v_eff;
  // Chemical potential dE/dN <= 0; zero when the mass constraint is slack.
  double mu = 0.0;
  double energy_functional = 0.0;
  // -int P_B([V_eff]_-) - D(rho, rho) + mu int rho.
  double energy_dual = 0.0;
  double particle_number = 0.0;
  EnergyComponents components{};
  std::size_t iterations = 0;
  // sup |rho - P'([V_eff]_-)| / max rho.
  double residual = 0.0;
  // int |rho - P'([V_eff]_-)| dx / max(Z, N).
  double charge_residual = 0.0;
  std::vector<double> energy_history{};
  std::shared_ptr<const PressureModel> model{};
  double N = 0.0;
  double Z = 0.0;
  double B = 0.0;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const { return history_; }

 private:
  std::vector<double> history_;
};

// Minimise the functional with the Landau pressure at field B.
MtfSolution solve(const MtfProblem& problem);
// Same iteration for an arbitrary pressure model (used for the b -> 0 limit).
MtfSolution solve(const MtfProblem& problem, std::shared_ptr<const PressureModel> model);

// Kinetic, attraction and repulsion of a solution, recomputed from rho.
EnergyComponents energy_components(const MtfSolution& sol);
EnergyComponents energy_components(const RadialFunction& rho, double Z, const PressureModel& model);

// Mass of the mu = 0 minimiser on the given grid.
double critical_number(double Z, double B, std::shared_ptr<const RadialGrid> grid);

}  // namespace mtf
