#include "mtf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "mtf/scales.hpp"

namespace mtf {
namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kMinMixing = 1e-6;
// Energy changes below this relative size are rounding noise and never
// trigger a damping backoff.
constexpr double kEnergySlack = 1e-10;

std::shared_ptr<const RadialGrid> share(RadialGrid g) { return std::make_shared<const RadialGrid>(std::move(g)); }

struct InnerResult {
  std::size_t iterations = 0;
  double residual = 0.0;
  double charge_residual = 0.0;
};

// Minimises F(rho) = int tau(rho) - Z int rho/r + D(rho, rho) + m int rho for
// a fixed Lagrange multiplier m >= 0 (the well floor is raised by m).
//
// Damped fixed-point steps rho <- (1 - s) rho + s P'([V_eff]_-), with s halved
// whenever F would increase, bring the iterate into the basin. Once the TF
// residual is small, projected Newton steps on the stationarity condition
// tau'(rho) = [V_eff]_- take over; they are accepted under the same energy
// test and fall back to a damped step otherwise. The fixed-point map alone
// stalls at the edge of the support, where P'' is unbounded.
class Iteration {
 public:
  Iteration(const MtfProblem& p, const PressureModel& model)
      : p_(p), model_(model), grid_(*p.grid), n_(grid_.size()), rho_(n_, 0.0), hint_(n_, -1.0) {
    if (p.guess == InitialGuess::gaussian) {
      const double s = length_scale_ell(p.Z, p.B);
      const double norm = p.N / std::pow(std::numbers::pi * s * s, 1.5);
      for (std::size_t i = 0; i < n_; ++i) rho_[i] = norm * std::exp(-(grid_[i] * grid_[i]) / (s * s));
    }
  }

  InnerResult run(double multiplier, std::size_t budget, std::vector<double>& energy_history) {
    multiplier_ = multiplier;
    std::vector<double> phi = potential(rho_);
    double energy = functional(rho_, phi, hint_);
    std::vector<double> target(n_), trial(n_), trial_hint(n_);
    double mixing = p_.mixing;
    InnerResult out;
    for (std::size_t it = 0;; ++it) {
      fill_target(phi, target);
      residuals(target, out);
      energy_history.push_back(energy);
      if (out.residual <= p_.tolerances.scf && out.charge_residual <= p_.tolerances.scf) {
        out.iterations = it;
        return out;
      }
      if (it >= budget) {
        out.iterations = it;
        std::ostringstream msg;
        msg << "SCF did not converge in " << budget << " iterations (residual " << out.residual
            << ", charge residual " << out.charge_residual << ")";
        throw NonConvergence(msg.str(), history_);
      }
      if (out.residual < kNewtonSwitch && newton_step(phi, energy)) continue;
      while (true) {
        for (std::size_t i = 0; i < n_; ++i) trial[i] = std::max(0.0, (1.0 - mixing) * rho_[i] + mixing * target[i]);
        std::vector<double> trial_phi = potential(trial);
        trial_hint = hint_;
        const double e = functional(trial, trial_phi, trial_hint);
        if (e <= energy + kEnergySlack * std::abs(energy) || mixing <= kMinMixing) {
          rho_.swap(trial);
          phi.swap(trial_phi);
          hint_.swap(trial_hint);
          energy = e;
          mixing = std::min(p_.mixing, 2.0 * mixing);
          break;
        }
        mixing *= 0.5;
      }
    }
  }

  const std::vector<double>& rho() const { return rho_; }
  double multiplier() const { return multiplier_; }
  double mass() const { return grid_.integrate_line(shell(rho_)); }

  std::vector<double> potential(const std::vector<double>& rho) const {
    RadialFunction f(p_.grid, rho);
    const RadialFunction phi = coulomb_potential(f);
    return {phi.values().begin(), phi.values().end()};
  }

  // Signed well depth Z/r - phi - m; the TF equation uses its positive part.
  double depth(const std::vector<double>& phi, std::size_t i) const {
    return p_.Z / grid_[i] - phi[i] - multiplier_;
  }
  double well(const std::vector<double>& phi, std::size_t i) const { return std::max(0.0, depth(phi, i)); }

 private:
  static constexpr double kNewtonSwitch = 1e-2;

  std::vector<double> shell(const std::vector<double>& f) const {
    std::vector<double> s(n_);
    for (std::size_t i = 0; i < n_; ++i) s[i] = kFourPi * grid_[i] * grid_[i] * f[i];
    return s;
  }

  void fill_target(const std::vector<double>& phi, std::vector<double>& target) const {
    for (std::size_t i = 0; i < n_; ++i) target[i] = model_.density(well(phi, i));
  }

  void residuals(const std::vector<double>& target, InnerResult& out) {
    double peak = 0.0;
    double sup = 0.0;
    std::vector<double> deviation(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double d = std::abs(rho_[i] - target[i]);
      peak = std::max(peak, std::max(rho_[i], target[i]));
      sup = std::max(sup, d);
      deviation[i] = kFourPi * grid_[i] * grid_[i] * d;
    }
    out.residual = peak > 0.0 ? sup / peak : 0.0;
    out.charge_residual = grid_.integrate_line(deviation) / std::max(p_.Z, p_.N);
    history_.push_back(out.residual);
  }

  // d phi_i / d rho_j of the discrete Coulomb map.
  const Eigen::MatrixXd& coulomb_matrix() {
    if (coulomb_.size() == 0) {
      coulomb_.resize(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
      std::vector<double> unit(n_, 0.0);
      for (std::size_t j = 0; j < n_; ++j) {
        unit[j] = 1.0;
        const std::vector<double> col = potential(unit);
        for (std::size_t i = 0; i < n_; ++i) coulomb_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
        unit[j] = 0.0;
      }
    }
    return coulomb_;
  }

  bool newton_step(std::vector<double>& phi, double& energy) {
    const Eigen::MatrixXd& a = coulomb_matrix();
    std::vector<Eigen::Index> free;
    std::vector<double> diag, rhs;
    for (std::size_t i = 0; i < n_; ++i) {
      const double d = depth(phi, i);
      if (rho_[i] == 0.0) {
        if (d <= 0.0) continue;  // stays at the bound
        free.push_back(static_cast<Eigen::Index>(i));
        diag.push_back(curvature_at_depth(d));
        rhs.push_back(d);
        continue;
      }
      const double v = hint_[i] >= 0.0 ? hint_[i] : model_.potential_for_density(rho_[i]);
      free.push_back(static_cast<Eigen::Index>(i));
      diag.push_back(curvature_at_depth(v));
      rhs.push_back(d - v);
    }
    const auto m = static_cast<Eigen::Index>(free.size());
    if (m == 0) return false;
    Eigen::MatrixXd jac(m, m);
    Eigen::VectorXd b(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) jac(r, c) = a(free[r], free[c]);
      jac(r, r) += diag[static_cast<std::size_t>(r)];
      b(r) = rhs[static_cast<std::size_t>(r)];
    }
    const Eigen::VectorXd delta = jac.partialPivLu().solve(b);
    if (!delta.allFinite()) return false;

    std::vector<double> trial(n_), trial_hint(n_);
    double t = 1.0;
    for (int k = 0; k < 30; ++k, t *= 0.5) {
      trial = rho_;
      for (Eigen::Index r = 0; r < m; ++r) {
        const auto i = static_cast<std::size_t>(free[r]);
        trial[i] = std::max(0.0, rho_[i] + t * delta(r));
      }
      std::vector<double> trial_phi = potential(trial);
      trial_hint = hint_;
      const double e = functional(trial, trial_phi, trial_hint);
      if (e <= energy + kEnergySlack * std::abs(energy)) {
        rho_.swap(trial);
        phi.swap(trial_phi);
        hint_.swap(trial_hint);
        energy = e;
        return true;
      }
    }
    return false;
  }

  // tau''(rho) = 1 / P''(v) at v = tau'(rho); zero where P'' is unbounded.
  double curvature_at_depth(double v) const {
    const double slope = model_.density_slope(v);
    if (!std::isfinite(slope)) return 0.0;
    return slope > 0.0 ? 1.0 / slope : 0.0;
  }

  double functional(const std::vector<double>& rho, const std::vector<double>& phi, std::vector<double>& hint) const {
    std::vector<double> integrand(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = grid_[i];
      double tau = 0.0;
      if (rho[i] > 0.0) {
        const double v = model_.potential_for_density(rho[i], hint[i]);
        hint[i] = v;
        tau = std::max(0.0, rho[i] * v - model_.pressure(v));
      } else {
        hint[i] = 0.0;
      }
      integrand[i] = kFourPi * r * r * (tau + rho[i] * (-p_.Z / r + 0.5 * phi[i] + multiplier_));
    }
    return grid_.integrate_line(integrand);
  }

  const MtfProblem& p_;
  const PressureModel& model_;
  const RadialGrid& grid_;
  std::size_t n_;
  std::vector<double> rho_;
  std::vector<double> hint_;
  std::vector<double> history_;
  Eigen::MatrixXd coulomb_;
  double multiplier_ = 0.0;
};

MtfSolution finish(const MtfProblem& p, std::shared_ptr<const PressureModel> model, const Iteration& it,
                   std::size_t iterations, const InnerResult& last, std::vector<double> energy_history) {
  const auto& grid = *p.grid;
  const std::size_t n = grid.size();
  const std::vector<double> phi = it.potential(it.rho());
  std::vector<double> v(n), pressure(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = -p.Z / grid[i] + phi[i] + it.multiplier();
    pressure[i] = model->pressure(it.well(phi, i));
  }
  RadialFunction rho(p.grid, it.rho());
  MtfSolution sol{.rho = rho, .v_eff = RadialFunction(p.grid, std::move(v))};
  sol.mu = it.multiplier() == 0.0 ? 0.0 : -it.multiplier();
  sol.particle_number = integrate(rho);
  sol.components = energy_components(rho, p.Z, *model);
  sol.energy_functional = sol.components.total;
  const double repulsion = sol.components.repulsion;
  sol.energy_dual = -integrate(RadialFunction(p.grid, std::move(pressure))) - repulsion + sol.mu * sol.particle_number;
  sol.iterations = iterations;
  sol.residual = last.residual;
  sol.charge_residual = last.charge_residual;
  sol.energy_history = std::move(energy_history);
  sol.model = std::move(model);
  sol.N = p.N;
  sol.Z = p.Z;
  sol.B = p.B;
  return sol;
}

}  // namespace

MtfProblem MtfProblem::make(double N, double Z, double B, std::size_t grid_n, double rmax_over_ell) {
  MtfProblem p;
  p.N = N;
  p.Z = Z;
  p.B = B;
  p.grid = share(RadialGrid::for_length_scale(length_scale_ell(Z, B), grid_n, rmax_over_ell));
  return p;
}

void MtfProblem::validate() const {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(N) || !positive(Z) || !positive(B)) throw std::invalid_argument("N, Z and B must be positive");
  if (!grid) throw std::invalid_argument("problem has no grid");
  if (!(mixing > 0.0 && mixing <= 1.0)) throw std::invalid_argument("mixing must lie in (0, 1]");
  if (!(tolerances.scf > 0.0) || !(tolerances.mu > 0.0)) throw std::invalid_argument("tolerances must be positive");
}

MtfSolution solve(const MtfProblem& problem) {
  return solve(problem, std::make_shared<const LandauPressure>(problem.B));
}

MtfSolution solve(const MtfProblem& problem, std::shared_ptr<const PressureModel> model) {
  problem.validate();
  if (!model) throw std::invalid_argument("missing pressure model");
  Iteration it(problem, *model);
  std::vector<double> energies;
  std::size_t total = 0;
  const std::size_t budget = problem.tolerances.max_iterations;

  InnerResult last = it.run(0.0, budget, energies);
  total += last.iterations;
  if (it.mass() <= problem.N) return finish(problem, model, it, total, last, std::move(energies));

  // Too much charge is bound at zero multiplier: raise the well floor until
  // the mass drops to N, then bisect.
  const double z2 = problem.Z * problem.Z;
  double lo = 0.0;
  double hi = z2;
  std::size_t steps = 0;
  while (true) {
    std::vector<double> scratch;
    last = it.run(hi, budget, scratch);
    total += last.iterations;
    if (it.mass() <= problem.N) break;
    lo = hi;
    hi *= 2.0;
    if (++steps > problem.tolerances.max_mu_steps) throw NonConvergence("chemical potential bracket failed", {});
  }
  while (hi - lo > problem.tolerances.mu * z2) {
    const double mid = 0.5 * (lo + hi);
    std::vector<double> scratch;
    last = it.run(mid, budget, scratch);
    total += last.iterations;
    if (it.mass() > problem.N) lo = mid;
    else hi = mid;
    if (++steps > problem.tolerances.max_mu_steps) throw NonConvergence("chemical potential bisection failed", {});
  }
  energies.clear();
  last = it.run(0.5 * (lo + hi), budget, energies);
  total += last.iterations;
  return finish(problem, model, it, total, last, std::move(energies));
}

EnergyComponents energy_components(const RadialFunction& rho, double Z, const PressureModel& model) {
  const auto& grid = rho.grid();
  std::vector<double> tau(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) tau[i] = rho[i] > 0.0 ? model.kinetic(rho[i]) : 0.0;
  EnergyComponents c;
  c.kinetic = integrate(RadialFunction(rho.grid_ptr(), std::move(tau)));
  c.attraction = -Z * integrate(rho, RadialWeight::inverse_r);
  c.repulsion = direct_energy(rho, rho);
  c.total = c.kinetic + c.attraction + c.repulsion;
  return c;
}

EnergyComponents energy_components(const MtfSolution& sol) {
  if (!sol.model) throw std::invalid_argument("solution carries no pressure model");
  return energy_components(sol.rho, sol.Z, *sol.model);
}

double critical_number(double Z, double B, std::shared_ptr<const RadialGrid> grid) {
  MtfProblem p;
  p.Z = Z;
  p.B = B;
  p.N = std::numeric_limits<double>::max() / 4.0;
  p.grid = std::move(grid);
  return solve(p).particle_number;
}

}  // namespace mtf
