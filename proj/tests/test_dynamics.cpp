// Split-step Crank-Nicolson propagator and orbital-stability experiment.
// Oracles: the closed-form free Gaussian (width a0 + 2it), exact conservation
// laws of the Cayley step, and the phase-orbit distance identities.

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "radnls/dynamics.hpp"

using namespace radnls;

namespace {

using cd = std::complex<double>;

Potential cubic_quintic() {
  return Potential::power_sum({{-1.0, 3.0}, {1.0, 5.0}}, 3);
}

// psi(t, r) = (a0/(a0+2it))^{N/2} exp(-r^2 / (2(a0+2it))) solves
// i psi_t = -lap psi in R^3 with psi(0) = exp(-r^2/(2 a0)).
std::vector<cd> free_gaussian(const RadialGrid& g, double a0, double t) {
  const cd a(a0, 2.0 * t);
  const cd amp = std::pow(a0 / a, 1.5);
  std::vector<cd> psi(g.interior());
  for (int i = 0; i < g.interior(); ++i)
    psi[i] = amp * std::exp(-g.r[i] * g.r[i] / (2.0 * a));
  return psi;
}

double sup_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// rho = 4 binds comfortably above the finite-ball threshold; 1e-6 relative
// residual is reachable before the Armijo step hits evaluation noise.
GroundState coarse_ground_state(const RadialGrid& g) {
  FlowConfig cfg;
  cfg.residual_tol = 1e-6;
  cfg.max_iters = 200000;
  return minimize_on_sphere(g, cubic_quintic(), 4.0, cfg);
}

}  // namespace

TEST(Dynamics, ConfigValidation) {
  EvolutionConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = EvolutionConfig{};
  cfg.t_final = -1.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = EvolutionConfig{};
  cfg.dt = 2.0;
  cfg.t_final = 1.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = EvolutionConfig{};
  cfg.record_every = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(Dynamics, FreeGaussianOracle) {
  const RadialGrid g = build_grid(3, 16.0, 1600);
  const std::vector<cd> psi0 = free_gaussian(g, 1.0, 0.0);
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 1.0;
  cfg.record_every = 1000;
  const Trajectory traj = evolve(g, Potential::zero(3), psi0, cfg);
  const std::vector<cd> exact = free_gaussian(g, 1.0, 1.0);
  EXPECT_LE(sup_abs_diff(traj.snapshots.back(), exact), 2e-4);
}

// Self-convergence isolates the O(dt^2) time error from the fixed spatial
// bias: successive dt-halvings must shrink the difference by ~4.
TEST(Dynamics, SecondOrderInTime) {
  const RadialGrid g = build_grid(3, 16.0, 800);
  const std::vector<cd> psi0 = free_gaussian(g, 1.0, 0.0);
  std::vector<std::vector<cd>> finals;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.t_final = 0.5;
    cfg.record_every = 1 << 20;  // only the final snapshot matters
    finals.push_back(evolve(g, Potential::zero(3), psi0, cfg).snapshots.back());
  }
  const double d0 = sup_abs_diff(finals[0], finals[1]);
  const double d1 = sup_abs_diff(finals[1], finals[2]);
  EXPECT_GT(d0 / d1, 3.3);
  EXPECT_LT(d0 / d1, 4.7);
}

TEST(Dynamics, ZeroStateStaysZero) {
  const RadialGrid g = build_grid(3, 10.0, 64);
  std::vector<cd> psi0(g.interior(), cd{0.0, 0.0});
  EvolutionConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_final = 0.1;
  const Trajectory traj = evolve(g, cubic_quintic(), psi0, cfg);
  for (const auto& v : traj.snapshots.back()) EXPECT_EQ(v, cd(0.0, 0.0));
}

// The Cayley step is unitary in the weighted inner product and the phase
// substeps are pointwise rotations: mass is conserved to roundoff.
TEST(Dynamics, MassConservedToRoundoff) {
  const RadialGrid g = build_grid(3, 16.0, 400);
  std::vector<cd> psi0(g.interior());
  for (int i = 0; i < g.interior(); ++i)
    psi0[i] = std::exp(-0.5 * g.r[i] * g.r[i]) * cd{1.0, 0.3};
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 1.0;
  cfg.record_every = 100;
  const double m0 = mass_of(g, psi0);
  const Trajectory traj = evolve(g, cubic_quintic(), psi0, cfg);
  for (const auto& snap : traj.snapshots)
    EXPECT_NEAR(mass_of(g, snap), m0, 1e-12 * m0);
}

// For F = 0 the quadratic energy commutes with the Cayley operator: it is
// conserved exactly, not just to O(dt^2).
TEST(Dynamics, FreeEnergyConservedExactly) {
  const RadialGrid g = build_grid(3, 16.0, 400);
  std::vector<cd> psi0(g.interior());
  for (int i = 0; i < g.interior(); ++i)
    psi0[i] = std::exp(-0.5 * g.r[i] * g.r[i]);
  EvolutionConfig cfg;
  cfg.dt = 5e-3;
  cfg.t_final = 1.0;
  cfg.record_every = 200;
  const Potential z = Potential::zero(3);
  const double e0 = energy_of(g, z, psi0);
  const Trajectory traj = evolve(g, z, psi0, cfg);
  EXPECT_NEAR(energy_of(g, z, traj.snapshots.back()), e0, 1e-11 * e0);
}

// Multiplying the initial state by a global phase commutes with the flow,
// nonlinearity included (F' sees only |psi|).
TEST(Dynamics, GaugeCovariance) {
  const RadialGrid g = build_grid(3, 12.0, 200);
  std::vector<cd> psi0(g.interior());
  for (int i = 0; i < g.interior(); ++i)
    psi0[i] = std::exp(-0.5 * g.r[i] * g.r[i]);
  const cd phase = std::polar(1.0, 0.77);
  std::vector<cd> psi0p(g.interior());
  for (int i = 0; i < g.interior(); ++i) psi0p[i] = phase * psi0[i];

  EvolutionConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_final = 0.2;
  const Potential pot = cubic_quintic();
  const std::vector<cd> a = evolve(g, pot, psi0, cfg).snapshots.back();
  std::vector<cd> b = evolve(g, pot, psi0p, cfg).snapshots.back();
  for (auto& v : b) v /= phase;
  EXPECT_LE(sup_abs_diff(a, b), 1e-12);
}

// A converged minimizer evolves as a standing wave: modulus frozen, global
// phase rotating at rate -lambda.
TEST(Dynamics, StandingWave) {
  const RadialGrid g = build_grid(3, 16.0, 160);
  const GroundState gs = coarse_ground_state(g);
  ASSERT_TRUE(gs.converged);

  std::vector<cd> psi(g.interior());
  for (int i = 0; i < g.interior(); ++i) psi[i] = gs.u.values[i];
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 1.0;
  cfg.record_every = 1000;
  const Trajectory traj = evolve(g, cubic_quintic(), psi, cfg);
  const std::vector<cd>& psiT = traj.snapshots.back();

  double sup = 0.0, dev = 0.0;
  for (int i = 0; i < g.interior(); ++i) {
    sup = std::max(sup, gs.u.values[i]);
    dev = std::max(dev, std::abs(std::abs(psiT[i]) - gs.u.values[i]));
  }
  EXPECT_LE(dev, 1e-4 * sup);

  cd z{0.0, 0.0};
  for (int i = 0; i < g.interior(); ++i) z += g.w[i] * psiT[i] * gs.u.values[i];
  const double rate = -std::arg(z) / cfg.t_final;
  EXPECT_NEAR(rate, gs.lambda, 1e-3 * std::abs(gs.lambda));
}

TEST(Dynamics, OrbitDistanceIdentities) {
  const RadialGrid g = build_grid(3, 12.0, 200);
  std::vector<double> u(g.interior());
  for (int i = 0; i < g.interior(); ++i) u[i] = std::exp(-0.4 * g.r[i] * g.r[i]);

  // distance to itself and to any global phase rotation of itself is zero
  std::vector<cd> psi(g.interior());
  for (int i = 0; i < g.interior(); ++i) psi[i] = u[i];
  EXPECT_NEAR(orbit_distance(g, psi, u), 0.0, 1e-12);
  const cd phase = std::polar(1.0, -1.91);
  for (auto& v : psi) v *= phase;
  // the distance is a square root of cancelled large terms, so its noise
  // floor is sqrt(eps) * ||u||_{H^1}, not eps
  const double unorm = std::sqrt(h1_norm_sq(g, u));
  EXPECT_NEAR(orbit_distance(g, psi, u), 0.0, 1e-6 * unorm);

  // an H^1-orthogonal perturbation contributes in quadrature:
  // d(u + eps v, u) = eps ||v||_{H^1} exactly
  std::vector<double> bump(g.interior());
  for (int i = 0; i < g.interior(); ++i) {
    const double d = g.r[i] - 3.0;
    bump[i] = std::exp(-2.0 * d * d);
  }
  const double cross = dirichlet_form(g, bump, u) + [&] {
    double acc = 0.0;
    for (int i = 0; i < g.interior(); ++i) acc += g.w[i] * bump[i] * u[i];
    return acc;
  }();
  const double unorm2 = h1_norm_sq(g, u);
  std::vector<double> v(g.interior());
  for (int i = 0; i < g.interior(); ++i)
    v[i] = bump[i] - (cross / unorm2) * u[i];  // H^1 Gram-Schmidt
  const double eps = 1e-3;
  for (int i = 0; i < g.interior(); ++i) psi[i] = u[i] + eps * v[i];
  const double expect = eps * std::sqrt(h1_norm_sq(g, v));
  EXPECT_NEAR(orbit_distance(g, psi, u), expect, 1e-6 * expect);

  // and the same after an arbitrary global phase
  for (auto& w : psi) w *= std::polar(1.0, 0.33);
  EXPECT_NEAR(orbit_distance(g, psi, u), expect, 1e-6 * expect);
}

TEST(Dynamics, BoundaryContaminationAborts) {
  const RadialGrid g = build_grid(3, 10.0, 100);
  // a state with substantial outer-band density trips the guard immediately
  std::vector<cd> psi0(g.interior());
  for (int i = 0; i < g.interior(); ++i) psi0[i] = 1.0;
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 0.1;
  EXPECT_THROW(evolve(g, Potential::zero(3), psi0, cfg), EvolutionAborted);
}

TEST(Dynamics, NonFiniteStateAborts) {
  const RadialGrid g = build_grid(3, 10.0, 100);
  std::vector<cd> psi0(g.interior(), cd{0.0, 0.0});
  psi0[3] = cd{std::nan(""), 0.0};
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 0.1;
  EXPECT_THROW(evolve(g, Potential::zero(3), psi0, cfg), EvolutionAborted);
}

TEST(Dynamics, RecordCadence) {
  const RadialGrid g = build_grid(3, 10.0, 64);
  std::vector<cd> psi0(g.interior());
  for (int i = 0; i < g.interior(); ++i)
    psi0[i] = 0.1 * std::exp(-g.r[i] * g.r[i]);
  EvolutionConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_final = 0.1;  // 10 steps
  cfg.record_every = 3;
  int sink_calls = 0;
  const Trajectory traj =
      evolve(g, Potential::zero(3), psi0, cfg,
             [&](double, const std::vector<cd>&) { ++sink_calls; });
  // records at t=0, steps 3, 6, 9, and the final step 10
  ASSERT_EQ(traj.times.size(), 5u);
  EXPECT_EQ(sink_calls, 5);
  EXPECT_DOUBLE_EQ(traj.times.front(), 0.0);
  EXPECT_NEAR(traj.times.back(), 0.1, 1e-12);
}

TEST(Stability, RequiresConvergedState) {
  const RadialGrid g = build_grid(3, 16.0, 160);
  GroundState gs;  // default: not converged
  gs.u = RadialField{&g, std::vector<double>(g.interior(), 0.1)};
  EvolutionConfig cfg;
  EXPECT_THROW(stability_experiment(g, cubic_quintic(), gs, 1e-3, cfg), DomainError);
}

TEST(Stability, UnperturbedOrbitStaysPut) {
  const RadialGrid g = build_grid(3, 16.0, 160);
  const GroundState gs = coarse_ground_state(g);
  ASSERT_TRUE(gs.converged);
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 1.0;
  cfg.record_every = 100;
  const StabilityResult res = stability_experiment(g, cubic_quintic(), gs, 0.0, cfg);
  const double unorm = std::sqrt(h1_norm_sq(g, gs.u.values));
  EXPECT_LE(res.delta0, 1e-7 * unorm);
  EXPECT_LE(res.max_excursion, 1e-4 * unorm);
  EXPECT_THROW(stability_experiment(g, cubic_quintic(), gs, -1.0, cfg), DomainError);
}

TEST(Stability, PerturbationSizeTracksDelta) {
  const RadialGrid g = build_grid(3, 16.0, 160);
  const GroundState gs = coarse_ground_state(g);
  ASSERT_TRUE(gs.converged);
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 0.5;
  cfg.record_every = 100;
  const double unorm = std::sqrt(h1_norm_sq(g, gs.u.values));
  double prev_delta0 = 0.0;
  for (double delta : {1e-3, 1e-2}) {
    const StabilityResult res =
        stability_experiment(g, cubic_quintic(), gs, delta, cfg);
    EXPECT_GT(res.delta0, 0.2 * delta * unorm);
    EXPECT_LT(res.delta0, 2.0 * delta * unorm);
    EXPECT_GE(res.max_excursion, res.delta0 * 0.5);
    EXPECT_GT(res.delta0, prev_delta0);
    prev_delta0 = res.delta0;
    // mass stays pinned to the sphere along the run
    EXPECT_NEAR(res.mass_series.back(), res.mass_series.front(),
                1e-10 * res.mass_series.front());
    ASSERT_FALSE(res.times.empty());
    EXPECT_DOUBLE_EQ(res.times.front(), 0.0);
    EXPECT_NEAR(res.times.back(), cfg.t_final, 1e-12);
  }
}
