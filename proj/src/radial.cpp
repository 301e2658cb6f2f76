#include "mtf/radial.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace mtf {
namespace {

constexpr std::size_t kStencil = 8;
// Nodes of the stencil to the left of the interval being integrated.
constexpr std::size_t kLead = kStencil / 2 - 1;
constexpr double kFourPi = 4.0 * std::numbers::pi;

// kRule[m][p][k]: weight of node k when integrating the degree m-1 Lagrange
// interpolant through nodes 0..m-1 (unit spacing) over [p, p+1].
using RuleTable = std::array<std::array<std::array<double, kStencil>, kStencil>, kStencil + 1>;

RuleTable build_rules() {
  RuleTable table{};
  for (std::size_t m = 2; m <= kStencil; ++m) {
    for (std::size_t k = 0; k < m; ++k) {
      // Coefficients of L_k(x) = prod_{j != k} (x - j) / (k - j), low order first.
      std::array<double, kStencil + 1> c{};
      c[0] = 1.0;
      std::size_t degree = 0;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == k) continue;
        const double denom = static_cast<double>(k) - static_cast<double>(j);
        for (std::size_t d = degree + 2; d-- > 0;) {
          const double shifted = (d > 0) ? c[d - 1] : 0.0;
          c[d] = (shifted - static_cast<double>(j) * c[d]) / denom;
        }
        ++degree;
      }
      for (std::size_t p = 0; p + 1 < m; ++p) {
        double integral = 0.0;
        for (std::size_t d = 0; d <= degree; ++d) {
          const double e = static_cast<double>(d + 1);
          integral += c[d] * (std::pow(p + 1.0, e) - std::pow(static_cast<double>(p), e)) / e;
        }
        table[m][p][k] = integral;
      }
    }
  }
  return table;
}

const RuleTable& rules() {
  static const RuleTable table = build_rules();
  return table;
}

}  // namespace

RadialGrid::RadialGrid(double r_min, double r_max, std::size_t n) {
  if (n < kMinNodes) throw std::invalid_argument("radial grid needs at least 64 nodes");
  if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("radial grid needs 0 < r_min < r_max");
  h_ = std::log(r_max / r_min) / static_cast<double>(n - 1);
  r_.resize(n);
  for (std::size_t i = 0; i < n; ++i) r_[i] = r_min * std::exp(h_ * static_cast<double>(i));
  r_.back() = r_max;

  // Linear weights: apply the interval rules to unit node indicators.
  weights_.assign(n, 0.0);
  const auto& table = rules();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::size_t s = std::clamp<std::size_t>(k >= kLead ? k - kLead : 0, 0, n - kStencil);
    const std::size_t p = k - s;
    for (std::size_t j = 0; j < kStencil; ++j) weights_[s + j] += table[kStencil][p][j];
  }
  for (std::size_t i = 0; i < n; ++i) weights_[i] *= h_ * r_[i] * kFourPi * r_[i] * r_[i];
  weights_[0] += kFourPi * r_[0] * r_[0] * r_[0] / 3.0;
}

RadialGrid RadialGrid::for_length_scale(double ell, std::size_t n, double rmax_over_ell, double rmin_over_ell) {
  if (!(ell > 0.0)) throw std::invalid_argument("length scale must be positive");
  return RadialGrid(rmin_over_ell * ell, rmax_over_ell * ell, n);
}

double RadialGrid::interval(std::span<const double> values, std::size_t k, std::size_t lo, std::size_t hi) const {
  const std::size_t available = hi - lo + 1;
  const std::size_t m = std::min(kStencil, available);
  const std::size_t s = std::clamp<std::size_t>(k >= lo + kLead ? k - kLead : lo, lo, hi + 1 - m);
  const std::size_t p = k - s;
  const auto& w = rules()[m][p];
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) sum += w[j] * values[s + j] * r_[s + j];
  return h_ * sum;
}

double RadialGrid::origin_segment(std::span<const double> values) const {
  const double f0 = values[0];
  const double f1 = values[1];
  if (f0 == 0.0) return 0.0;
  double exponent = 2.0;
  if ((f0 > 0.0 && f1 > 0.0) || (f0 < 0.0 && f1 < 0.0))
    exponent = std::clamp(std::log(f1 / f0) / std::log(r_[1] / r_[0]), -0.9, 12.0);
  return f0 * r_[0] / (exponent + 1.0);
}

double RadialGrid::integrate_nodes(std::span<const double> values, std::size_t lo, std::size_t hi) const {
  if (values.size() != r_.size()) throw GridMismatch("sample count does not match grid");
  if (hi <= lo) return 0.0;
  double sum = 0.0;
  for (std::size_t k = lo; k < hi; ++k) sum += interval(values, k, lo, hi);
  return sum;
}

double RadialGrid::integrate_line(std::span<const double> values) const {
  return origin_segment(values) + integrate_nodes(values, 0, r_.size() - 1);
}

double RadialGrid::integrate_line_split(std::span<const double> values, std::size_t k) const {
  const std::size_t last = r_.size() - 1;
  if (k > last) throw std::out_of_range("split node outside grid");
  // A piece shorter than two intervals cannot carry a polynomial rule of its
  // own; merge it into the other side.
  if (k < 2 || last - k < 2) return integrate_line(values);
  return origin_segment(values) + integrate_nodes(values, 0, k) + integrate_nodes(values, k, last);
}

std::vector<double> RadialGrid::cumulative_from_origin(std::span<const double> values) const {
  if (values.size() != r_.size()) throw GridMismatch("sample count does not match grid");
  std::vector<double> out(r_.size());
  out[0] = origin_segment(values);
  for (std::size_t k = 0; k + 1 < r_.size(); ++k) out[k + 1] = out[k] + interval(values, k, 0, r_.size() - 1);
  return out;
}

std::vector<double> RadialGrid::cumulative_to_rmax(std::span<const double> values) const {
  if (values.size() != r_.size()) throw GridMismatch("sample count does not match grid");
  std::vector<double> out(r_.size());
  out.back() = 0.0;
  for (std::size_t k = r_.size() - 1; k-- > 0;) out[k] = out[k + 1] + interval(values, k, 0, r_.size() - 1);
  return out;
}

std::size_t RadialGrid::lower_index(double r) const {
  return static_cast<std::size_t>(std::lower_bound(r_.begin(), r_.end(), r) - r_.begin());
}

bool RadialGrid::same_as(const RadialGrid& other) const {
  return this == &other || (r_.size() == other.r_.size() && r_.front() == other.r_.front() &&
                            r_.back() == other.r_.back());
}

RadialFunction::RadialFunction(std::shared_ptr<const RadialGrid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("radial function needs a grid");
  if (values_.size() != grid_->size()) throw GridMismatch("value count does not match grid size");
}

RadialFunction RadialFunction::zero(std::shared_ptr<const RadialGrid> grid) {
  const std::size_t n = grid->size();
  return RadialFunction(std::move(grid), std::vector<double>(n, 0.0));
}

bool RadialFunction::is_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

RadialFunction RadialFunction::clipped() const {
  std::vector<double> v(values_);
  for (double& x : v) x = std::max(0.0, x);
  return RadialFunction(grid_, std::move(v));
}

void require_same_grid(const RadialFunction& a, const RadialFunction& b) {
  if (!a.grid().same_as(b.grid())) throw GridMismatch("radial functions live on different grids");
}

std::vector<double> enclosed_charge(const RadialFunction& f) {
  const auto& g = f.grid();
  std::vector<double> integrand(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) integrand[i] = kFourPi * g[i] * g[i] * f[i];
  return g.cumulative_from_origin(integrand);
}

RadialFunction coulomb_potential(const RadialFunction& rho) {
  const auto& g = rho.grid();
  const std::size_t n = g.size();
  std::vector<double> shell(n);
  for (std::size_t i = 0; i < n; ++i) shell[i] = kFourPi * g[i] * rho[i];
  const std::vector<double> inside = enclosed_charge(rho);
  const std::vector<double> outside = g.cumulative_to_rmax(shell);
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = inside[i] / g[i] + outside[i];
  return RadialFunction(rho.grid_ptr(), std::move(phi));
}

double direct_energy(const RadialFunction& f, const RadialFunction& g) {
  require_same_grid(f, g);
  const auto& grid = f.grid();
  const std::vector<double> qf = enclosed_charge(f);
  const std::vector<double> qg = enclosed_charge(g);
  std::vector<double> integrand(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    integrand[i] = kFourPi * r * (f[i] * qg[i] + g[i] * qf[i]);
  }
  return 0.5 * grid.integrate_line(integrand);
}

double integrate(const RadialFunction& f, RadialWeight weight) {
  const auto& g = f.grid();
  std::vector<double> integrand(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i];
    double w = 1.0;
    switch (weight) {
      case RadialWeight::one: w = 1.0; break;
      case RadialWeight::inverse_r: w = 1.0 / r; break;
      case RadialWeight::perp_over_r3: w = 2.0 / (3.0 * r); break;
      default: throw std::invalid_argument("unknown radial weight");
    }
    integrand[i] = kFourPi * r * r * f[i] * w;
  }
  return g.integrate_line(integrand);
}

void write_csv(std::ostream& out, const RadialFunction& f) {
  out << "r,value\n";
  char buf[64];
  const auto& g = f.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto res = std::to_chars(buf, buf + sizeof buf, g[i]);
    out.write(buf, res.ptr - buf);
    out << ',';
    res = std::to_chars(buf, buf + sizeof buf, f[i]);
    out.write(buf, res.ptr - buf);
    out << '\n';
  }
}

}  // namespace mtf
