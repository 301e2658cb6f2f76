#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace mtf {

struct GridMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Logarithmic radial grid r_i = r_min (r_max / r_min)^{i/(n-1)}.
//
// Integrals are taken in u = ln r with eighth-order piecewise-polynomial
// interval rules (one-sided near the ends), which is a trapezoid rule with
// high-order endpoint correction. The segment [0, r_min] is added assuming the
// integrand behaves like a power of r there; weights() exposes the linear
// special case where the integrand of 4 pi r^2 f has f constant near 0.
class RadialGrid {
 public:
  static constexpr std::size_t kMinNodes = 64;

  RadialGrid(double r_min, double r_max, std::size_t n);

  // Grid spanning [1e-4, 50] * ell.
  static RadialGrid for_length_scale(double ell, std::size_t n, double rmax_over_ell = 50.0,
                                     double rmin_over_ell = 1e-4);

  std::size_t size() const { return r_.size(); }
  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }
  double log_step() const { return h_; }
  std::span<const double> nodes() const { return r_; }
  double operator[](std::size_t i) const { return r_[i]; }

  // Volume weights w_i with sum_i w_i f(r_i) ~ int_0^{r_max} 4 pi r^2 f(r) dr.
  std::span<const double> weights() const { return weights_; }

  // int_0^{r_max} F(r) dr for node samples F_i = F(r_i) (no volume factor).
  double integrate_line(std::span<const double> values) const;
  // Running integrals C_i = int_0^{r_i} F(r) dr.
  std::vector<double> cumulative_from_origin(std::span<const double> values) const;
  // Running integrals T_i = int_{r_i}^{r_max} F(r) dr.
  std::vector<double> cumulative_to_rmax(std::span<const double> values) const;
  // integrate_line with the interval rules broken at node k, for integrands
  // with a kink there.
  double integrate_line_split(std::span<const double> values, std::size_t k) const;
  // int_{r_lo}^{r_hi} F(r) dr over node indices lo <= hi (no origin segment).
  double integrate_nodes(std::span<const double> values, std::size_t lo, std::size_t hi) const;

  // Index of the first node with r_i >= r (size() when r > r_max).
  std::size_t lower_index(double r) const;

  bool same_as(const RadialGrid& other) const;

 private:
  double interval(std::span<const double> values, std::size_t k, std::size_t lo, std::size_t hi) const;
  double origin_segment(std::span<const double> values) const;

  std::vector<double> r_;
  std::vector<double> weights_;
  double h_;
};

// A real function sampled on a radial grid (density, potential, ...).
// Values are immutable once constructed; the grid is shared.
class RadialFunction {
 public:
  RadialFunction(std::shared_ptr<const RadialGrid> grid, std::vector<double> values);
  static RadialFunction zero(std::shared_ptr<const RadialGrid> grid);

  const RadialGrid& grid() const { return *grid_; }
  const std::shared_ptr<const RadialGrid>& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  bool is_nonnegative() const;
  // Copy with negative entries set to zero.
  RadialFunction clipped() const;

 private:
  std::shared_ptr<const RadialGrid> grid_;
  std::vector<double> values_;
};

enum class RadialWeight {
  one,            // 1
  inverse_r,      // 1/r
  perp_over_r3,   // (x1^2 + x2^2)/|x|^3, spherically averaged to (2/3)/r
};

// phi(r) = (1/r) int_0^r 4 pi s^2 rho + int_r^inf 4 pi s rho (Newton's theorem).
RadialFunction coulomb_potential(const RadialFunction& rho);

// D(f, g) = (1/2) iint f(x) g(y) / |x - y|, evaluated as
// (1/2) [int F M_g / r + int G M_f / r] with M the enclosed charge, which is
// symmetric in its arguments to rounding.
double direct_energy(const RadialFunction& f, const RadialFunction& g);

// 4 pi int f(r) w(r) r^2 dr.
double integrate(const RadialFunction& f, RadialWeight weight = RadialWeight::one);

// Enclosed charge Q(r_i) = int_0^{r_i} 4 pi s^2 f(s) ds.
std::vector<double> enclosed_charge(const RadialFunction& f);

// `r,value` header then one row per node in full double precision.
void write_csv(std::ostream& out, const RadialFunction& f);

void require_same_grid(const RadialFunction& a, const RadialFunction& b);

}  // namespace mtf
