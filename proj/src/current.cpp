#include "mtf/current.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "mtf/parallel.hpp"

namespace mtf {
namespace {

constexpr double kPi = std::numbers::pi;

// e * exp(-1 / (1 - x^2)) on |x| < 1, equal to 1 at x = 0.
double bump(double x) {
  const double q = 1.0 - x * x;
  return q > 0.0 ? std::exp(1.0 - 1.0 / q) : 0.0;
}
double bump_derivative(double x) {
  const double q = 1.0 - x * x;
  return q > 0.0 ? -2.0 * x / (q * q) * std::exp(1.0 - 1.0 / q) : 0.0;
}

double profile_value(FieldProfile p, double x) {
  switch (p) {
    case FieldProfile::rigid: return smooth_step(2.0 - x);
    case FieldProfile::bump: return bump(x);
    case FieldProfile::shell: return bump(2.0 * (x - 1.0));
  }
  return 0.0;
}

double profile_derivative(FieldProfile p, double x) {
  switch (p) {
    case FieldProfile::rigid: return -smooth_step_derivative(2.0 - x);
    case FieldProfile::bump: return bump_derivative(x);
    case FieldProfile::shell: return 2.0 * bump_derivative(2.0 * (x - 1.0));
  }
  return 0.0;
}

double profile_reach(FieldProfile p) {
  switch (p) {
    case FieldProfile::rigid: return 2.0;
    case FieldProfile::bump: return 1.0;
    case FieldProfile::shell: return 1.5;
  }
  return 0.0;
}

void check_support(const RadialGrid& grid, const TestField& field) {
  if (field.support_radius() > grid.r_max())
    throw std::invalid_argument("test field support exceeds the radial grid");
}

// C(r, s) = (1 / (r s)) int_{|r-s|}^{r+s} [(g_r - g_s)(r^2 - s^2) / (2 t^2) + (g_r + g_s) / 2] dt.
template <unsigned Points>
double angular_kernel(double r, double s, double gr, double gs) {
  const double a = 0.5 * (gr - gs) * (r * r - s * s);
  const double c = 0.5 * (gr + gs);
  const double hi = r + s;
  const double lo = std::abs(r - s);
  double integral;
  if (lo <= 1e-14 * hi) {
    integral = boost::math::quadrature::gauss<double, Points>::integrate([&](double) { return c; }, 0.0, hi);
  } else {
    // t = e^u: dt = t du.
    integral = boost::math::quadrature::gauss<double, Points>::integrate(
        [&](double u) {
          const double t = std::exp(u);
          return a / t + c * t;
        },
        std::log(lo), std::log(hi));
  }
  return integral / (r * s);
}

template <unsigned Points>
double d_alpha_rule(const RadialFunction& rho1, const RadialFunction& rho2, const std::vector<double>& g) {
  const auto& grid = rho1.grid();
  const std::size_t n = grid.size();
  std::vector<double> inner(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    if (rho1[i] == 0.0) return;
    std::vector<double> values(n);
    const double r = grid[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double s = grid[j];
      values[j] = rho2[j] == 0.0 ? 0.0 : rho2[j] * s * s * angular_kernel<Points>(r, s, g[i], g[j]);
    }
    inner[i] = grid.integrate_line_split(values, i);
  });
  std::vector<double> outer(n);
  for (std::size_t i = 0; i < n; ++i) outer[i] = rho1[i] * grid[i] * grid[i] * inner[i];
  return -(8.0 * kPi * kPi / 3.0) * grid.integrate_line(outer);
}

// Radius drawn from the radial mass distribution of rho (piecewise linear in
// the enclosed charge between nodes).
class RadialSampler {
 public:
  explicit RadialSampler(const RadialFunction& rho) : grid_(rho.grid()), cdf_(enclosed_charge(rho)) {
    for (double& c : cdf_) c = std::max(c, 0.0);
    for (std::size_t i = 1; i < cdf_.size(); ++i) cdf_[i] = std::max(cdf_[i], cdf_[i - 1]);
  }
  double total() const { return cdf_.back(); }
  double draw(double u) const {
    const double target = u * cdf_.back();
    if (target <= cdf_.front()) return grid_[0] * std::cbrt(cdf_.front() > 0.0 ? target / cdf_.front() : 0.0);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    const std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
    if (k >= cdf_.size()) return grid_.r_max();
    const double span = cdf_[k] - cdf_[k - 1];
    const double frac = span > 0.0 ? (target - cdf_[k - 1]) / span : 0.0;
    return grid_[k - 1] + frac * (grid_[k] - grid_[k - 1]);
  }

 private:
  const RadialGrid& grid_;
  std::vector<double> cdf_;
};

}  // namespace

FieldProfile parse_field_profile(const std::string& name) {
  if (name == "rigid") return FieldProfile::rigid;
  if (name == "bump") return FieldProfile::bump;
  if (name == "shell") return FieldProfile::shell;
  throw std::invalid_argument("unknown field profile '" + name + "' (expected rigid, bump or shell)");
}

const char* to_string(FieldProfile profile) {
  switch (profile) {
    case FieldProfile::rigid: return "rigid";
    case FieldProfile::bump: return "bump";
    case FieldProfile::shell: return "shell";
  }
  return "unknown";
}

TestField::TestField(FieldProfile profile, double scale, double weight) { add(profile, scale, weight); }

TestField& TestField::add(FieldProfile profile, double scale, double weight) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("field scale must be positive");
  if (!std::isfinite(weight)) throw std::invalid_argument("field weight must be finite");
  terms_.push_back({profile, scale, weight});
  return *this;
}

TestField TestField::scaled(double factor) const {
  TestField out = *this;
  for (auto& t : out.terms_) t.weight *= factor;
  return out;
}

TestField TestField::plus(const TestField& other) const {
  TestField out = *this;
  out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
  return out;
}

double TestField::g(double r) const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.weight * profile_value(t.profile, r / t.scale);
  return sum;
}

double TestField::dg(double r) const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.weight * profile_derivative(t.profile, r / t.scale) / t.scale;
  return sum;
}

double TestField::b3(double r, double r_perp_sq) const {
  return r > 0.0 ? 2.0 * g(r) + r_perp_sq * dg(r) / r : 2.0 * g(0.0);
}

double TestField::b3_average(double r) const { return 2.0 * g(r) + (2.0 / 3.0) * r * dg(r); }

double TestField::support_radius() const {
  double reach = 0.0;
  for (const auto& t : terms_) reach = std::max(reach, profile_reach(t.profile) * t.scale);
  return reach;
}

TestField TestField::standard(FieldProfile profile, double ell) {
  switch (profile) {
    case FieldProfile::rigid: return TestField(profile, 5.0 * ell);
    case FieldProfile::bump: return TestField(profile, 3.0 * ell);
    case FieldProfile::shell: return TestField(profile, 2.0 * ell);
  }
  throw std::invalid_argument("unknown field profile");
}

namespace {

// int b3_avg * (w P'(w) - c P(w)) with w = [V_eff]_-.
double pressure_moment(const MtfSolution& sol, const TestField& field, double c) {
  if (!sol.model) throw std::invalid_argument("solution carries no pressure model");
  const auto& grid = sol.rho.grid();
  check_support(grid, field);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = std::max(0.0, -sol.v_eff[i]);
    const double b = field.b3_average(grid[i]);
    values[i] = w > 0.0 && b != 0.0 ? b * (w * sol.model->density(w) - c * sol.model->pressure(w)) : 0.0;
  }
  return integrate(RadialFunction(sol.rho.grid_ptr(), std::move(values)));
}

}  // namespace

double closed_form_current(const MtfSolution& sol, const TestField& field) {
  return pressure_moment(sol, field, 2.5);
}

CurrentReport split_current(const MtfSolution& sol, const TestField& field) {
  CurrentReport rep;
  rep.closed_form = closed_form_current(sol, field);
  rep.j_kin = pressure_moment(sol, field, 1.5);
  const auto& grid = sol.rho.grid();
  std::vector<double> weighted(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) weighted[i] = sol.rho[i] * field.g(grid[i]);
  // x . a~_0 / |x|^3 = -g r_perp^2 / r^3.
  rep.j_dens = -sol.Z * integrate(RadialFunction(sol.rho.grid_ptr(), std::move(weighted)), RadialWeight::perp_over_r3);
  const DAlphaResult interaction = d_alpha(sol.rho, sol.rho, field);
  rep.j_int = interaction.value;
  rep.quad_error = interaction.quad_error;
  rep.residual = rep.closed_form - (rep.j_kin - rep.j_int + rep.j_dens);
  return rep;
}

DAlphaResult d_alpha(const RadialFunction& rho1, const RadialFunction& rho2, const TestField& field) {
  require_same_grid(rho1, rho2);
  const auto& grid = rho1.grid();
  check_support(grid, field);
  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) g[i] = field.g(grid[i]);
  DAlphaResult out;
  out.value = d_alpha_rule<20>(rho1, rho2, g);
  out.quad_error = std::abs(out.value - d_alpha_rule<10>(rho1, rho2, g));
  return out;
}

MonteCarloEstimate d_alpha_monte_carlo(const RadialFunction& rho1, const RadialFunction& rho2,
                                       const TestField& field, std::size_t samples, std::uint64_t seed) {
  require_same_grid(rho1, rho2);
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  const RadialSampler s1(rho1);
  const RadialSampler s2(rho2);
  MonteCarloEstimate est;
  est.samples = samples;
  if (s1.total() == 0.0 || s2.total() == 0.0) return est;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto point = [&](const RadialSampler& s, double* x) {
    const double r = s.draw(unit(rng));
    const double c = 2.0 * unit(rng) - 1.0;
    const double phi = 2.0 * kPi * unit(rng);
    const double st = std::sqrt(std::max(0.0, 1.0 - c * c));
    x[0] = r * st * std::cos(phi);
    x[1] = r * st * std::sin(phi);
    x[2] = r * c;
  };

  // Welford accumulation of (x - y).(a~(x) - a~(y)) / |x - y|^3.
  double mean = 0.0;
  double m2 = 0.0;
  double x[3], y[3];
  for (std::size_t k = 0; k < samples; ++k) {
    point(s1, x);
    point(s2, y);
    const double gx = field.g(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    const double gy = field.g(std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]));
    const double d[3] = {x[0] - y[0], x[1] - y[1], x[2] - y[2]};
    const double dist = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    double kernel = 0.0;
    if (dist > 0.0) {
      const double ax0 = -gx * x[0], ax1 = -gx * x[1];
      const double ay0 = -gy * y[0], ay1 = -gy * y[1];
      kernel = (d[0] * (ax0 - ay0) + d[1] * (ax1 - ay1)) / (dist * dist * dist);
    }
    const double delta = kernel - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (kernel - mean);
  }
  const double scale = 0.5 * s1.total() * s2.total();
  const double variance = m2 / static_cast<double>(samples - 1);
  est.mean = scale * mean;
  est.standard_error = scale * std::sqrt(variance / static_cast<double>(samples));
  return est;
}

}  // namespace mtf
