#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mtf {

using cplx = std::complex<double>;

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform n x n grid on [-R, R]^2; value index is i * n + j for (x1_i, x2_j).
class PlaneGrid {
 public:
  PlaneGrid(double half_width, std::size_t n);
  // R = 8 B^{-1/2} sqrt(m_max + 1), n >= 200.
  static PlaneGrid for_basis(double B, std::size_t m_max, std::size_t n = 240);

  std::size_t n() const { return n_; }
  std::size_t size() const { return n_ * n_; }
  double half_width() const { return R_; }
  double spacing() const { return h_; }
  double coord(std::size_t i) const { return -R_ + h_ * static_cast<double>(i); }
  double cell() const { return h_ * h_; }

  double norm(const std::vector<cplx>& f) const;
  cplx inner(const std::vector<cplx>& f, const std::vector<cplx>& g) const;

 private:
  double R_;
  std::size_t n_;
  double h_;
};

// Lowest Landau level in symmetric gauge for p_A = -i grad + A,
// A = (B/2)(-x2, x1, 0): psi_m = c_m (x1 - i x2)^m exp(-B |x|^2 / 4),
// c_m^2 = B^{m+1} / (2 pi 2^m m!). These span the range of the kernel
// (B/2pi) exp(iB(x1 y2 - x2 y1)/2) exp(-B|x - y|^2/4), and the lowering
// operator a = p1 - i p2 annihilates each of them.
class LandauBasis {
 public:
  LandauBasis(double B, std::size_t m_max);

  double field() const { return B_; }
  std::size_t m_max() const { return m_max_; }

  cplx value(std::size_t m, double x1, double x2) const;
  // (p1 psi_m, p2 psi_m).
  std::pair<cplx, cplx> momentum(std::size_t m, double x1, double x2) const;
  // a psi_m with a = p1 - i p2 (identically zero) and a* psi_m, a* = p1 + i p2.
  cplx lower(std::size_t m, double x1, double x2) const;
  cplx raise(std::size_t m, double x1, double x2) const;

  std::vector<cplx> sample(std::size_t m, const PlaneGrid& grid) const;

 private:
  double B_;
  std::size_t m_max_;
  std::vector<double> norm_;
};

struct Projection {
  std::vector<cplx> values;
  // Fraction of |Pi_0 f|^2 in the outer frame of the box (width 2 B^{-1/2}).
  double leakage = 0.0;
};

// Pi_0 f by direct quadrature of the kernel; the Gaussian factor is cut off
// where it drops below 1e-17 and rows or columns where f vanishes are skipped. Throws TruncationError when leakage > 1e-6.
Projection project_lll(double B, const PlaneGrid& grid, const std::vector<cplx>& f);

struct SchurConstant {
  double value;      // sup_x int |Pi_0(x, y)| |x - y| dy at B = 1
  double deviation;  // value - 2 sqrt(pi)
  double kernel_mass;
  // The same integral at field B, which scales as B^{-1/2}.
  double at_field(double B) const;
};

SchurConstant schur_commutator_constant();

struct CommutatorSample {
  double lhs;        // || [Pi_0, f] phi ||
  double grad_sup;   // max |grad f| over the grid
  double phi_norm;
  double rhs;        // 2 sqrt(pi) B^{-1/2} grad_sup ||phi||
  bool holds;
};

// One random pair: f a sum of plane waves, phi a complex Gaussian packet cut
// off at 4 B^{-1/2}. The grid must hold the projection of phi.
CommutatorSample commutator_sample(double B, const PlaneGrid& grid, std::uint64_t seed);

// A Gaussian packet sum_k w_k exp(-|x - c_k|^2 / (2 s_k^2)) in the plane.
struct GaussianSum {
  struct Term {
    double weight, c1, c2, sigma;
  };
  std::vector<Term> terms;

  double value(double x1, double x2) const;
  double laplacian(double x1, double x2) const;
  double sup_abs(const PlaneGrid& grid) const;
  GaussianSum scaled(double factor) const;
  GaussianSum plus(const GaussianSum& other) const;
};

// Perpendicular block of the matrix profile M (M33 = 0) and the field
// profile b3. The constraint is tr M = M11 + M22 = 2 b3.
struct J1Spec {
  GaussianSum m11, m12, m22;
  GaussianSum b3;

  // b3 = (M11 + M22) / 2 with random Gaussian entries on the magnetic scale.
  static J1Spec random_constrained(double B, std::uint64_t seed);
  // Same matrix with b3 multiplied by `factor`.
  J1Spec with_field_scaled(double factor) const;
  // max |M11 + M22 - 2 b3| / max(|b3|) on the grid.
  double constraint_violation(const PlaneGrid& grid) const;
};

struct J1Element {
  cplx value;
  double scale;  // B * sup |b3|
  bool constraints_hold;
};

// <psi_m, J1 psi_m'> with J1 = p_A M p_A - B b3 - (1/2) Lap b3 on spin-down
// lowest-level states (x3-independent profiles), by quadrature on `grid`.
J1Element j1_lll_matrix(const LandauBasis& basis, const PlaneGrid& grid, const J1Spec& spec, std::size_t m,
                        std::size_t m_prime);

// Potential sampled on a uniform 1D grid x_k = x0 + k h.
struct Potential1D {
  double x0;
  double h;
  std::vector<double> values;

  double x(std::size_t k) const { return x0 + h * static_cast<double>(k); }
  static Potential1D square_well(double depth, double half_width, double box_half_width, std::size_t n);
};

struct LtCheck {
  double sum_neg_eigs;
  double bound;  // -(4/3) int [v]_-^{3/2}
  bool satisfied;
  double slack;  // sum_neg_eigs - bound
  std::size_t bound_states;
};

// Negative eigenvalues of -d^2/dx^2 + v (second-order differences, Dirichlet
// box) against the Lieb-Thirring bound. Throws TruncationError when the
// ground state exceeds 1e-8 of its maximum at the box edge.
LtCheck lt_check_1d(const Potential1D& v);

struct CutoffNorm {
  double norm;
  double bound_ratio;  // norm a^s / (a gamma)^{1/q}
  double box;
  double spacing;
  std::size_t modes;
};

// || f(p/gamma) (a^2 + x^2)^{-s/2} f(p/gamma) || on the line, with f the
// cutoff_bump, from the Fourier matrix of the potential on a periodic box.
CutoffNorm cutoff_norm(double gamma, double a, double s, double q);

}  // namespace mtf
