#include "mtf/landau.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fftw3.h>

#include "mtf/smooth.hpp"

namespace mtf {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

std::mutex& fftw_planner_lock() {
  static std::mutex m;
  return m;
}

cplx ipow(cplx z, std::size_t m) {
  cplx out = 1.0;
  for (std::size_t k = 0; k < m; ++k) out *= z;
  return out;
}

}  // namespace

PlaneGrid::PlaneGrid(double half_width, std::size_t n) : R_(half_width), n_(n) {
  if (!(half_width > 0.0)) throw std::invalid_argument("plane grid half-width must be positive");
  if (n < 2) throw std::invalid_argument("plane grid needs at least two nodes per side");
  h_ = 2.0 * R_ / static_cast<double>(n - 1);
}

PlaneGrid PlaneGrid::for_basis(double B, std::size_t m_max, std::size_t n) {
  if (!(B > 0.0)) throw std::invalid_argument("field must be positive");
  if (n < 200) throw std::invalid_argument("plane grid needs at least 200 nodes per side");
  return PlaneGrid(8.0 / std::sqrt(B) * std::sqrt(static_cast<double>(m_max) + 1.0), n);
}

double PlaneGrid::norm(const std::vector<cplx>& f) const {
  double s = 0.0;
  for (const cplx& v : f) s += std::norm(v);
  return std::sqrt(s * cell());
}

cplx PlaneGrid::inner(const std::vector<cplx>& f, const std::vector<cplx>& g) const {
  cplx s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += std::conj(f[k]) * g[k];
  return s * cell();
}

LandauBasis::LandauBasis(double B, std::size_t m_max) : B_(B), m_max_(m_max) {
  if (!(B > 0.0) || !std::isfinite(B)) throw std::invalid_argument("field must be positive");
  norm_.resize(m_max + 1);
  for (std::size_t m = 0; m <= m_max; ++m) {
    const double md = static_cast<double>(m);
    const double log_c2 = (md + 1.0) * std::log(B) - std::log(2.0 * kPi) - md * std::log(2.0) - std::lgamma(md + 1.0);
    norm_[m] = std::exp(0.5 * log_c2);
  }
}

cplx LandauBasis::value(std::size_t m, double x1, double x2) const {
  const cplx zbar(x1, -x2);
  return norm_.at(m) * ipow(zbar, m) * std::exp(-0.25 * B_ * (x1 * x1 + x2 * x2));
}

std::pair<cplx, cplx> LandauBasis::momentum(std::size_t m, double x1, double x2) const {
  const cplx z(x1, x2);
  const cplx zbar(x1, -x2);
  const double gauss = norm_.at(m) * std::exp(-0.25 * B_ * (x1 * x1 + x2 * x2));
  const cplx head = m > 0 ? static_cast<double>(m) * ipow(zbar, m - 1) : cplx(0.0);
  const cplx tail = 0.5 * B_ * z * ipow(zbar, m);
  return {gauss * (-kI * head + kI * tail), gauss * (-head + tail)};
}

cplx LandauBasis::lower(std::size_t m, double x1, double x2) const {
  const auto [p1, p2] = momentum(m, x1, x2);
  return p1 - kI * p2;
}

cplx LandauBasis::raise(std::size_t m, double x1, double x2) const {
  const auto [p1, p2] = momentum(m, x1, x2);
  return p1 + kI * p2;
}

std::vector<cplx> LandauBasis::sample(std::size_t m, const PlaneGrid& grid) const {
  std::vector<cplx> out(grid.size());
  for (std::size_t i = 0; i < grid.n(); ++i)
    for (std::size_t j = 0; j < grid.n(); ++j) out[i * grid.n() + j] = value(m, grid.coord(i), grid.coord(j));
  return out;
}

Projection project_lll(double B, const PlaneGrid& grid, const std::vector<cplx>& f) {
  if (!(B > 0.0)) throw std::invalid_argument("field must be positive");
  const std::size_t n = grid.n();
  if (f.size() != grid.size()) throw std::invalid_argument("sample count does not match plane grid");
  const double h = grid.spacing();
  // exp(-B d^2 / 4) < 1e-17 beyond this many nodes.
  const auto band = static_cast<std::size_t>(std::ceil(std::sqrt(4.0 * 39.2 / B) / h));
  std::vector<double> gauss(band + 1);
  for (std::size_t d = 0; d <= band; ++d) gauss[d] = std::exp(-0.25 * B * (h * d) * (h * d));

  // Phase tables: exp(i B x1 y2 / 2) and exp(-i B x2 y1 / 2).
  std::vector<cplx> phase(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) phase[i * n + l] = std::polar(1.0, 0.5 * B * grid.coord(i) * grid.coord(l));

  std::size_t row_lo = n, row_hi = 0, col_lo = n, col_hi = 0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      if (f[k * n + l] == cplx(0.0)) continue;
      row_lo = std::min(row_lo, k);
      row_hi = std::max(row_hi, k);
      col_lo = std::min(col_lo, l);
      col_hi = std::max(col_hi, l);
    }
  }
  std::vector<cplx> out(grid.size(), 0.0);
  if (row_lo > row_hi) return {std::move(out), 0.0};
  std::vector<cplx> row(n, 0.0);
  const double prefactor = B / (2.0 * kPi) * grid.cell();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k_lo = std::max(row_lo, i > band ? i - band : 0);
    const std::size_t k_hi = std::min(row_hi, i + band);
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
      const double a1 = gauss[i > k ? i - k : k - i];
      for (std::size_t l = col_lo; l <= col_hi; ++l) row[l] = phase[i * n + l] * f[k * n + l];
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t l_lo = std::max(col_lo, j > band ? j - band : 0);
        const std::size_t l_hi = std::min(col_hi, j + band);
        cplx s = 0.0;
        for (std::size_t l = l_lo; l <= l_hi; ++l) s += gauss[j > l ? j - l : l - j] * row[l];
        // exp(-i B x2 y1 / 2) = conj(phase[j][k]).
        out[i * n + j] += a1 * std::conj(phase[j * n + k]) * s;
      }
    }
  }
  for (cplx& v : out) v *= prefactor;

  Projection p{std::move(out), 0.0};
  const double frame = grid.half_width() - 2.0 / std::sqrt(B);
  double edge = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = std::norm(p.values[i * n + j]);
      total += w;
      if (std::abs(grid.coord(i)) > frame || std::abs(grid.coord(j)) > frame) edge += w;
    }
  }
  p.leakage = total > 0.0 ? edge / total : 0.0;
  if (p.leakage > 1e-6) throw TruncationError("projection leaks out of the quadrature box");
  return p;
}

double SchurConstant::at_field(double B) const { return value / std::sqrt(B); }

SchurConstant schur_commutator_constant() {
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  // |Pi_0(x, y)| = exp(-|x - y|^2 / 4) / (2 pi) at B = 1 depends on x - y only,
  // so the sup over x is attained everywhere; integrate in polar coordinates
  // about x.
  const double weighted = 2.0 * kPi * gauss_kronrod<double, 61>::integrate(
      [](double r) { return r * r * std::exp(-0.25 * r * r) / (2.0 * kPi); }, 0.0, inf, 15, 1e-15);
  const double mass = 2.0 * kPi * gauss_kronrod<double, 61>::integrate(
      [](double r) { return r * std::exp(-0.25 * r * r) / (2.0 * kPi); }, 0.0, inf, 15, 1e-15);
  return {weighted, weighted - 2.0 * std::sqrt(kPi), mass};
}

CommutatorSample commutator_sample(double B, const PlaneGrid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double len = 1.0 / std::sqrt(B);

  struct Wave {
    double amp, k1, k2, phase;
  };
  std::vector<Wave> waves(3);
  for (auto& w : waves) {
    const double k = (0.2 + 1.8 * unit(rng)) / len;
    const double dir = 2.0 * kPi * unit(rng);
    w = {2.0 * unit(rng) - 1.0, k * std::cos(dir), k * std::sin(dir), 2.0 * kPi * unit(rng)};
  }
  struct Packet {
    cplx weight;
    double c1, c2, sigma, k1, k2;
  };
  std::vector<Packet> packets(2);
  for (auto& p : packets) {
    p = {cplx(2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0), len * (2.0 * unit(rng) - 1.0),
         len * (2.0 * unit(rng) - 1.0), len * (0.5 + unit(rng)), (2.0 * unit(rng) - 1.0) / len,
         (2.0 * unit(rng) - 1.0) / len};
  }

  const std::size_t n = grid.n();
  std::vector<cplx> phi(grid.size()), f_phi(grid.size());
  std::vector<double> f(grid.size());
  double grad_sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x1 = grid.coord(i), x2 = grid.coord(j);
      double fv = 0.0, g1 = 0.0, g2 = 0.0;
      for (const auto& w : waves) {
        const double arg = w.k1 * x1 + w.k2 * x2 + w.phase;
        fv += w.amp * std::sin(arg);
        g1 += w.amp * w.k1 * std::cos(arg);
        g2 += w.amp * w.k2 * std::cos(arg);
      }
      grad_sup = std::max(grad_sup, std::hypot(g1, g2));
      cplx pv = 0.0;
      const double cut = cutoff_bump(std::hypot(x1, x2) / (2.0 * len));
      if (cut > 0.0) {
        for (const auto& p : packets) {
          const double d2 = (x1 - p.c1) * (x1 - p.c1) + (x2 - p.c2) * (x2 - p.c2);
          pv += p.weight * std::exp(-0.5 * d2 / (p.sigma * p.sigma)) * std::polar(1.0, p.k1 * x1 + p.k2 * x2);
        }
        pv *= cut;
      }
      const std::size_t idx = i * n + j;
      f[idx] = fv;
      phi[idx] = pv;
      f_phi[idx] = fv * pv;
    }
  }
  const Projection a = project_lll(B, grid, f_phi);
  const Projection b = project_lll(B, grid, phi);
  std::vector<cplx> comm(grid.size());
  for (std::size_t k = 0; k < comm.size(); ++k) comm[k] = a.values[k] - f[k] * b.values[k];

  CommutatorSample out{};
  out.lhs = grid.norm(comm);
  out.grad_sup = grad_sup;
  out.phi_norm = grid.norm(phi);
  out.rhs = schur_commutator_constant().at_field(B) * grad_sup * out.phi_norm;
  out.holds = out.lhs <= out.rhs;
  return out;
}

double GaussianSum::value(double x1, double x2) const {
  double s = 0.0;
  for (const auto& t : terms) {
    const double d2 = (x1 - t.c1) * (x1 - t.c1) + (x2 - t.c2) * (x2 - t.c2);
    s += t.weight * std::exp(-0.5 * d2 / (t.sigma * t.sigma));
  }
  return s;
}

double GaussianSum::laplacian(double x1, double x2) const {
  double s = 0.0;
  for (const auto& t : terms) {
    const double s2 = t.sigma * t.sigma;
    const double d2 = (x1 - t.c1) * (x1 - t.c1) + (x2 - t.c2) * (x2 - t.c2);
    s += t.weight * std::exp(-0.5 * d2 / s2) * (d2 / (s2 * s2) - 2.0 / s2);
  }
  return s;
}

double GaussianSum::sup_abs(const PlaneGrid& grid) const {
  double m = 0.0;
  for (std::size_t i = 0; i < grid.n(); ++i)
    for (std::size_t j = 0; j < grid.n(); ++j) m = std::max(m, std::abs(value(grid.coord(i), grid.coord(j))));
  return m;
}

GaussianSum GaussianSum::scaled(double factor) const {
  GaussianSum out = *this;
  for (auto& t : out.terms) t.weight *= factor;
  return out;
}

GaussianSum GaussianSum::plus(const GaussianSum& other) const {
  GaussianSum out = *this;
  out.terms.insert(out.terms.end(), other.terms.begin(), other.terms.end());
  return out;
}

J1Spec J1Spec::random_constrained(double B, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double len = 1.0 / std::sqrt(B);
  auto entry = [&]() {
    GaussianSum g;
    for (int k = 0; k < 3; ++k) {
      const double radius = 2.0 * len * std::sqrt(unit(rng));
      const double angle = 2.0 * kPi * unit(rng);
      g.terms.push_back({2.0 * unit(rng) - 1.0, radius * std::cos(angle), radius * std::sin(angle),
                         len * (1.0 + 1.5 * unit(rng))});
    }
    return g;
  };
  J1Spec spec;
  spec.m11 = entry();
  spec.m12 = entry();
  spec.m22 = entry();
  spec.b3 = spec.m11.plus(spec.m22).scaled(0.5);
  return spec;
}

J1Spec J1Spec::with_field_scaled(double factor) const {
  J1Spec out = *this;
  out.b3 = b3.scaled(factor);
  return out;
}

double J1Spec::constraint_violation(const PlaneGrid& grid) const {
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < grid.n(); ++i) {
    for (std::size_t j = 0; j < grid.n(); ++j) {
      const double x1 = grid.coord(i), x2 = grid.coord(j);
      const double b = b3.value(x1, x2);
      worst = std::max(worst, std::abs(m11.value(x1, x2) + m22.value(x1, x2) - 2.0 * b));
      scale = std::max(scale, std::abs(b));
    }
  }
  return scale > 0.0 ? worst / scale : worst;
}

J1Element j1_lll_matrix(const LandauBasis& basis, const PlaneGrid& grid, const J1Spec& spec, std::size_t m,
                        std::size_t m_prime) {
  if (m > basis.m_max() || m_prime > basis.m_max()) throw std::out_of_range("angular index above m_max");
  const double B = basis.field();
  cplx sum = 0.0;
  double sup_b = 0.0;
  for (std::size_t i = 0; i < grid.n(); ++i) {
    for (std::size_t j = 0; j < grid.n(); ++j) {
      const double x1 = grid.coord(i), x2 = grid.coord(j);
      const double b = spec.b3.value(x1, x2);
      sup_b = std::max(sup_b, std::abs(b));
      const auto [p1a, p2a] = basis.momentum(m, x1, x2);
      const auto [p1b, p2b] = basis.momentum(m_prime, x1, x2);
      const double a11 = spec.m11.value(x1, x2);
      const double a12 = spec.m12.value(x1, x2);
      const double a22 = spec.m22.value(x1, x2);
      const cplx kinetic = std::conj(p1a) * (a11 * p1b + a12 * p2b) + std::conj(p2a) * (a12 * p1b + a22 * p2b);
      const double potential = B * b + 0.5 * spec.b3.laplacian(x1, x2);
      sum += kinetic - std::conj(basis.value(m, x1, x2)) * potential * basis.value(m_prime, x1, x2);
    }
  }
  return {sum * grid.cell(), B * sup_b, spec.constraint_violation(grid) <= 1e-12};
}

Potential1D Potential1D::square_well(double depth, double half_width, double box_half_width, std::size_t n) {
  if (n < 3 || !(box_half_width > half_width)) throw std::invalid_argument("invalid square-well grid");
  Potential1D v{-box_half_width, 2.0 * box_half_width / static_cast<double>(n - 1), std::vector<double>(n, 0.0)};
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(v.x(k)) <= half_width) v.values[k] = -depth;
  return v;
}

LtCheck lt_check_1d(const Potential1D& v) {
  const std::size_t n = v.values.size();
  if (n < 3 || !(v.h > 0.0)) throw std::invalid_argument("potential grid needs h > 0 and at least 3 nodes");
  const double inv_h2 = 1.0 / (v.h * v.h);
  Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
  double integral = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(v.values[k])) throw std::invalid_argument("potential must be finite");
    diag(static_cast<Eigen::Index>(k)) = 2.0 * inv_h2 + v.values[k];
    const double neg = std::max(0.0, -v.values[k]);
    integral += neg * std::sqrt(neg);
  }
  sub.setConstant(-inv_h2);
  integral *= v.h;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigensolver failed");
  const Eigen::VectorXd& eig = solver.eigenvalues();

  LtCheck out{};
  for (Eigen::Index k = 0; k < eig.size() && eig(k) < 0.0; ++k) {
    out.sum_neg_eigs += eig(k);
    ++out.bound_states;
  }
  out.bound = -(4.0 / 3.0) * integral;
  out.slack = out.sum_neg_eigs - out.bound;
  out.satisfied = out.slack >= 0.0;

  if (out.bound_states > 0) {
    // Ground state by inverse iteration (Thomas algorithm) just below e0.
    const double shift = eig(0) - 1e-10 * std::max(1.0, std::abs(eig(0)));
    std::vector<double> psi(n, 1.0), c(n), d(n);
    for (int sweep = 0; sweep < 3; ++sweep) {
      double denom = diag(0) - shift;
      c[0] = -inv_h2 / denom;
      d[0] = psi[0] / denom;
      for (std::size_t k = 1; k < n; ++k) {
        denom = diag(static_cast<Eigen::Index>(k)) - shift + inv_h2 * c[k - 1];
        c[k] = -inv_h2 / denom;
        d[k] = (psi[k] + inv_h2 * d[k - 1]) / denom;
      }
      psi[n - 1] = d[n - 1];
      for (std::size_t k = n - 1; k-- > 0;) psi[k] = d[k] - c[k] * psi[k + 1];
      double peak = 0.0;
      for (double x : psi) peak = std::max(peak, std::abs(x));
      for (double& x : psi) x /= peak;
    }
    if (std::max(std::abs(psi.front()), std::abs(psi.back())) > 1e-8)
      throw TruncationError("ground state reaches the edge of the box");
  }
  return out;
}

CutoffNorm cutoff_norm(double gamma, double a, double s, double q) {
  if (!(gamma > 0.0) || !(a > 0.0)) throw std::invalid_argument("gamma and a must be positive");
  if (!(s >= 1.0) || !(q > 1.0)) throw std::invalid_argument("need s >= 1 and q > 1");
  const double box = 100.0 * std::max(a, 1.0 / gamma);
  const double h_max = std::min(a / 8.0, kPi / (4.0 * gamma));
  auto n = static_cast<std::size_t>(std::ceil(box / h_max));
  n += n % 2;
  constexpr std::size_t kMaxNodes = std::size_t{1} << 25;
  if (n > kMaxNodes) throw TruncationError("periodic grid cannot resolve both 1/gamma and a");
  const double h = box / static_cast<double>(n);

  // Wrap-ordered samples of W(x) = (a^2 + x^2)^{-s/2}; Fourier coefficients
  // c_k = (1/L) int W exp(-i k x) dx are real because W is even.
  std::vector<double> samples(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = h * (j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n));
    samples[j] = std::pow(a * a + x * x, -0.5 * s);
  }
  std::vector<fftw_complex> spectrum(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_lock());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), samples.data(), spectrum.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_lock());
    fftw_destroy_plan(plan);
  }

  // Modes k = 2 pi m / L with f(k / gamma) != 0, i.e. |k| < 2 gamma.
  const double dk = 2.0 * kPi / box;
  std::vector<double> weights;
  std::vector<long> index;
  const auto m_max = static_cast<long>(std::floor(2.0 * gamma / dk));
  for (long m = -m_max; m <= m_max; ++m) {
    const double f = cutoff_bump(dk * static_cast<double>(m) / gamma);
    if (f > 0.0) {
      weights.push_back(f);
      index.push_back(m);
    }
  }
  const auto modes = static_cast<Eigen::Index>(weights.size());
  if (modes == 0) throw TruncationError("box too short to hold any frequency below 2 gamma");
  if (static_cast<std::size_t>(2 * m_max) >= n / 2) throw TruncationError("spectrum too coarse for the cutoff");
  Eigen::MatrixXd mat(modes, modes);
  for (Eigen::Index r = 0; r < modes; ++r) {
    for (Eigen::Index c = 0; c < modes; ++c) {
      const auto d = static_cast<std::size_t>(std::abs(index[static_cast<std::size_t>(r)] - index[static_cast<std::size_t>(c)]));
      mat(r, c) = weights[static_cast<std::size_t>(r)] * weights[static_cast<std::size_t>(c)] * spectrum[d][0] / static_cast<double>(n);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  CutoffNorm out{};
  out.norm = solver.eigenvalues().maxCoeff();
  out.bound_ratio = out.norm * std::pow(a, s) / std::pow(a * gamma, 1.0 / q);
  out.box = box;
  out.spacing = h;
  out.modes = static_cast<std::size_t>(modes);
  return out;
}

}  // namespace mtf
