#include <cmath>
#include <random>

#include "doctest.h"
#include "mtf/landau.hpp"
#include "mtf/smooth.hpp"

using namespace mtf;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Random smooth function on the plane: Gaussian packets, optionally cut off
// at 4 B^{-1/2}.
std::vector<cplx> random_packet(const PlaneGrid& grid, double B, std::uint64_t seed, bool cutoff = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double len = 1.0 / std::sqrt(B);
  struct P {
    cplx w;
    double c1, c2, s, k1, k2;
  };
  std::vector<P> ps(3);
  for (auto& p : ps) p = {cplx(u(rng), u(rng)), len * u(rng), len * u(rng), len * (1.0 + 0.4 * u(rng)), u(rng) / len, u(rng) / len};
  std::vector<cplx> f(grid.size());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    for (std::size_t j = 0; j < grid.n(); ++j) {
      const double x1 = grid.coord(i), x2 = grid.coord(j);
      const double cut = cutoff ? cutoff_bump(std::hypot(x1, x2) / (2.0 * len)) : 1.0;
      cplx v = 0.0;
      if (cut > 0.0)
        for (const auto& p : ps)
          v += p.w * std::exp(-0.5 * ((x1 - p.c1) * (x1 - p.c1) + (x2 - p.c2) * (x2 - p.c2)) / (p.s * p.s)) *
               std::polar(1.0, p.k1 * x1 + p.k2 * x2);
      f[i * grid.n() + j] = cut * v;
    }
  }
  return f;
}

double distance(const PlaneGrid& grid, const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  return grid.norm(d);
}

}  // namespace

TEST_CASE("landau: basis is orthonormal and annihilated by the lowering operator") {
  for (double B : {1.0, 4.0}) {
    const LandauBasis basis(B, 6);
    const PlaneGrid grid = PlaneGrid::for_basis(B, 6);
    std::vector<std::vector<cplx>> s;
    for (std::size_t m = 0; m <= 6; ++m) s.push_back(basis.sample(m, grid));
    for (std::size_t m = 0; m <= 6; ++m)
      for (std::size_t k = 0; k <= 6; ++k) CHECK(std::abs(grid.inner(s[m], s[k]) - (m == k ? 1.0 : 0.0)) < 1e-8);
    for (std::size_t m = 0; m <= 6; ++m) {
      for (double x1 : {-0.7, 0.0, 0.4}) {
        for (double x2 : {-0.2, 0.9}) {
          CHECK(std::abs(basis.lower(m, x1, x2)) < 1e-12 * (1.0 + std::abs(basis.raise(m, x1, x2))));
        }
      }
    }
  }
}

TEST_CASE("landau: momentum against finite differences") {
  const LandauBasis basis(2.0, 4);
  const double h = 1e-6;
  for (std::size_t m = 0; m <= 4; ++m) {
    for (double x1 : {-0.5, 0.3}) {
      for (double x2 : {0.2, -0.8}) {
        // p_A = -i grad + A with A = (B/2)(-x2, x1).
        const cplx d1 = (basis.value(m, x1 + h, x2) - basis.value(m, x1 - h, x2)) / (2 * h);
        const cplx d2 = (basis.value(m, x1, x2 + h) - basis.value(m, x1, x2 - h)) / (2 * h);
        const cplx psi = basis.value(m, x1, x2);
        const cplx p1 = cplx(0, -1) * d1 - 1.0 * x2 * psi;
        const cplx p2 = cplx(0, -1) * d2 + 1.0 * x1 * psi;
        const auto [q1, q2] = basis.momentum(m, x1, x2);
        CHECK(std::abs(q1 - p1) < 1e-7);
        CHECK(std::abs(q2 - p2) < 1e-7);
      }
    }
  }
}

TEST_CASE("landau: projector fixes the lowest level and kills the next one") {
  const double B = 1.0;
  const LandauBasis basis(B, 3);
  const PlaneGrid grid = PlaneGrid::for_basis(B, 3, 200);
  const std::vector<cplx> psi0 = basis.sample(0, grid);
  CHECK(distance(grid, project_lll(B, grid, psi0).values, psi0) < 1e-8);
  // a* psi_0 lies in the first excited band.
  std::vector<cplx> up(grid.size());
  for (std::size_t i = 0; i < grid.n(); ++i)
    for (std::size_t j = 0; j < grid.n(); ++j) up[i * grid.n() + j] = basis.raise(0, grid.coord(i), grid.coord(j));
  CHECK(grid.norm(project_lll(B, grid, up).values) < 1e-6 * grid.norm(up));
}

TEST_CASE("landau: projector is idempotent and a contraction") {
  const double B = 1.0;
  const PlaneGrid grid = PlaneGrid::for_basis(B, 3, 200);
  for (std::uint64_t seed : {1u, 2u}) {
    const std::vector<cplx> f = random_packet(grid, B, seed);
    const Projection p1 = project_lll(B, grid, f);
    const Projection p2 = project_lll(B, grid, p1.values);
    CHECK(distance(grid, p2.values, p1.values) < 1e-8 * grid.norm(f));
    CHECK(grid.norm(p1.values) <= grid.norm(f) + 1e-10);
    CHECK(p1.leakage < 1e-6);
  }
}

TEST_CASE("landau: projection is resolved at doubled resolution") {
  // Pi_0 f at sample nodes by a direct kernel sum on a grid with half the
  // spacing, for an analytic f.
  const double B = 1.0;
  const PlaneGrid coarse = PlaneGrid::for_basis(B, 3, 200);
  const PlaneGrid fine(coarse.half_width(), 399);
  const std::vector<cplx> fc = random_packet(coarse, B, 9, false), ff = random_packet(fine, B, 9, false);
  const Projection pc = project_lll(B, coarse, fc);
  double peak = 0.0;
  for (const cplx& v : pc.values) peak = std::max(peak, std::abs(v));
  double diff = 0.0;
  for (std::size_t i = 70; i <= 130; i += 15) {
    for (std::size_t j = 70; j <= 130; j += 15) {
      const double x1 = coarse.coord(i), x2 = coarse.coord(j);
      cplx s = 0.0;
      for (std::size_t k = 0; k < fine.n(); ++k) {
        for (std::size_t l = 0; l < fine.n(); ++l) {
          const double y1 = fine.coord(k), y2 = fine.coord(l);
          const double d2 = (x1 - y1) * (x1 - y1) + (x2 - y2) * (x2 - y2);
          if (d2 > 160.0 / B) continue;
          s += std::exp(-0.25 * B * d2) * std::polar(1.0, 0.5 * B * (x1 * y2 - x2 * y1)) * ff[k * fine.n() + l];
        }
      }
      s *= B / (2.0 * kPi) * fine.cell();
      diff = std::max(diff, std::abs(s - pc.values[i * coarse.n() + j]));
    }
  }
  CHECK(diff < 1e-8 * peak);
}

TEST_CASE("landau: truncation is detected") {
  const double B = 1.0;
  const PlaneGrid tiny(2.0, 200);
  std::vector<cplx> f(tiny.size(), 1.0);
  CHECK_THROWS_AS(project_lll(B, tiny, f), TruncationError);
  CHECK_THROWS_AS(PlaneGrid::for_basis(1.0, 2, 100), std::invalid_argument);
}

TEST_CASE("landau: Schur constant") {
  const SchurConstant s = schur_commutator_constant();
  CHECK(std::abs(s.value - 2.0 * std::sqrt(kPi)) < 1e-6);
  CHECK(std::abs(s.value - 3.5449077) < 1e-6);
  CHECK(std::abs(s.deviation) < 1e-6);
  CHECK(s.kernel_mass == doctest::Approx(2.0).epsilon(1e-12));
  // With x = B^{-1/2} u the first moment picks up one factor B^{-1/2}.
  CHECK(s.at_field(4.0) == doctest::Approx(s.value / 2.0).epsilon(1e-15));
}

TEST_CASE("landau: commutator bound on random pairs") {
  const double B = 1.0;
  const PlaneGrid grid = PlaneGrid::for_basis(B, 3, 200);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const CommutatorSample c = commutator_sample(B, grid, seed);
    CHECK(c.holds);
    CHECK(c.lhs > 0.0);
    CHECK(c.lhs <= c.rhs);
  }
}

TEST_CASE("landau: J1 vanishes between lowest-level states") {
  const double B = 2.0;
  const LandauBasis basis(B, 6);
  const PlaneGrid grid = PlaneGrid::for_basis(B, 6);
  const J1Spec empty;
  const J1Element zero = j1_lll_matrix(basis, grid, empty, 0, 0);
  CHECK(zero.value == cplx(0.0));

  const J1Spec spec = J1Spec::random_constrained(B, 77);
  CHECK(spec.constraint_violation(grid) < 1e-12);
  double worst = 0.0;
  for (std::size_t m = 0; m <= 6; ++m) {
    for (std::size_t k = m; k <= 6; ++k) {
      const J1Element e = j1_lll_matrix(basis, grid, spec, m, k);
      CHECK(e.constraints_hold);
      worst = std::max(worst, std::abs(e.value) / e.scale);
      if (k != m) {
        const J1Element t = j1_lll_matrix(basis, grid, spec, k, m);
        CHECK(std::abs(t.value - std::conj(e.value)) < 1e-12 * e.scale);
      }
    }
  }
  CHECK(worst < 1e-6);

  const J1Spec broken = spec.with_field_scaled(1.1);
  CHECK(broken.constraint_violation(grid) > 0.05);
  double largest = 0.0;
  for (std::size_t m = 0; m <= 6; ++m) {
    const J1Element e = j1_lll_matrix(basis, grid, broken, m, m);
    CHECK_FALSE(e.constraints_hold);
    largest = std::max(largest, std::abs(e.value) / e.scale);
  }
  CHECK(largest > 1e-3);
}

TEST_CASE("landau: reduced Lieb-Thirring") {
  const LtCheck none = lt_check_1d(Potential1D{-10.0, 0.01, std::vector<double>(2001, 0.0)});
  CHECK(none.sum_neg_eigs == 0.0);
  CHECK(none.bound == 0.0);
  CHECK(none.satisfied);
  for (double depth : {1.0, 5.0, 25.0}) {
    const LtCheck c = lt_check_1d(Potential1D::square_well(depth, 1.0, 30.0, 6001));
    CHECK(c.satisfied);
    CHECK(c.slack >= 0.0);
    CHECK(c.bound == doctest::Approx(-(4.0 / 3.0) * 2.0 * std::pow(depth, 1.5)).epsilon(1e-2));
    CHECK(c.bound_states >= 1);
    MESSAGE("depth " << depth << ": sum " << c.sum_neg_eigs << " bound " << c.bound << " slack " << c.slack);
  }
  // Ground state of the depth-1 well against the transcendental equation
  // k tan(k) = kappa, k^2 + kappa^2 = depth (half-width 1).
  {
    double lo = 0.0, hi = kPi / 2 - 1e-12;
    for (int it = 0; it < 200; ++it) {
      const double k = 0.5 * (lo + hi);
      if (k * std::tan(k) < std::sqrt(std::max(0.0, 1.0 - k * k))) lo = k;
      else hi = k;
    }
    const double e0 = lo * lo - 1.0;
    const LtCheck c = lt_check_1d(Potential1D::square_well(1.0, 1.0, 30.0, 24001));
    CHECK(c.bound_states == 1);
    CHECK(c.sum_neg_eigs == doctest::Approx(e0).epsilon(1e-3));
  }
  // Weyl asymptotics: sum/bound -> (2/(3 pi)) / (4/3) = 1/(2 pi).
  const LtCheck deep = lt_check_1d(Potential1D::square_well(400.0, 1.0, 4.0, 8001));
  const double ratio = deep.sum_neg_eigs / deep.bound;
  CHECK(ratio < 1.0);
  CHECK(std::abs(ratio - 1.0 / (2.0 * kPi)) < 0.01);
  CHECK_THROWS_AS(lt_check_1d(Potential1D::square_well(5.0, 1.0, 2.5, 501)), TruncationError);
}

TEST_CASE("landau: cutoff norm") {
  // Wide cutoff: the norm tends to sup W = 1/a.
  double prev = 0.0;
  for (double gamma : {1.0, 3.0, 10.0}) {
    const CutoffNorm c = cutoff_norm(gamma, 1.0, 1.0, 2.0);
    CHECK(c.norm > prev);
    CHECK(c.norm < 1.0);
    prev = c.norm;
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(0.01));
  // Tightening the cutoff at fixed a never increases the norm.
  for (double a : {0.05, 0.3, 1.0}) {
    double last = std::numeric_limits<double>::infinity();
    for (double gamma : {3.0, 1.0, 0.3, 0.1, 0.03}) {
      const CutoffNorm c = cutoff_norm(gamma, a, 1.0, 2.0);
      CHECK(c.norm > 0.0);
      CHECK(c.norm <= last * (1.0 + 1e-9));
      last = c.norm;
    }
  }
  CHECK_THROWS_AS(cutoff_norm(1.0, 1.0, 0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(cutoff_norm(1.0, 1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cutoff_norm(1e-7, 1e-3, 1.0, 2.0), TruncationError);
}

TEST_CASE("landau: cutoff bump") {
  CHECK(cutoff_bump(0.0) == 1.0);
  CHECK(cutoff_bump(1.0) == 1.0);
  CHECK(cutoff_bump(-1.0) == 1.0);
  CHECK(cutoff_bump(2.0) == 0.0);
  CHECK(cutoff_bump(2.5) == 0.0);
  CHECK(cutoff_bump(1.5) == doctest::Approx(0.5));
  CHECK(cutoff_bump(1.3) == cutoff_bump(-1.3));
}
