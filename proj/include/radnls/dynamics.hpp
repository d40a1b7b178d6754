#ifndef RADNLS_DYNAMICS_HPP
#define RADNLS_DYNAMICS_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "radnls/functionals.hpp"
#include "radnls/grid.hpp"
#include "radnls/minimize.hpp"
#include "radnls/potential.hpp"

namespace radnls {

struct EvolutionConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  int record_every = 1;
  double boundary_tol = 1e-6;  // abort when outer-band |psi|^2 exceeds this fraction of peak

  void validate() const {
    if (!(dt > 0)) throw ValidationError("evolve: dt must be positive");
    if (!(t_final > 0)) throw ValidationError("evolve: t_final must be positive");
    if (!(dt < t_final)) throw ValidationError("evolve: need dt < t_final");
    if (record_every < 1) throw ValidationError("evolve: record_every must be >= 1");
    if (!(boundary_tol > 0)) throw ValidationError("evolve: boundary_tol must be positive");
  }
};

inline double mass_of(const RadialGrid& g, const std::vector<std::complex<double>>& psi) {
  return mass(g, psi);
}

// E(psi) = 1/2 int |grad psi|^2 + int F(|psi|); for real psi this is J.
inline double energy_of(const RadialGrid& g, const Potential& pot,
                        const std::vector<std::complex<double>>& psi) {
  detail::check_shape(g, psi.size());
  double nl = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) nl += g.w[i] * pot.eval(std::abs(psi[i]), 0);
  return 0.5 * grad_norm_sq(g, psi) + nl;
}

// min over a global phase of || psi - e^{i theta} u ||_{H^1}; the optimum is
// theta* = arg <psi, u>_{H^1}, giving d^2 = |psi|^2 + |u|^2 - 2 |<psi,u>|.
inline double orbit_distance(const RadialGrid& g,
                             const std::vector<std::complex<double>>& psi,
                             const std::vector<double>& u) {
  detail::check_shape(g, psi.size());
  detail::check_shape(g, u.size());
  const int n = g.interior();
  std::complex<double> z{0.0, 0.0};
  for (int e = 1; e < n; ++e)
    z += g.cond[e] * (psi[e] - psi[e - 1]) * (u[e] - u[e - 1]);
  z += g.cond[n] * psi[n - 1] * u[n - 1];
  z *= g.surface;
  for (int i = 0; i < n; ++i) z += g.w[i] * psi[i] * u[i];
  const double d2 = h1_norm_sq(g, psi) + h1_norm_sq(g, u) - 2.0 * std::abs(z);
  return std::sqrt(std::max(d2, 0.0));
}

namespace detail {

// Crank-Nicolson step for i psi_t = -lap psi in the weighted discrete space:
//   (W + i dt/2 K) psi' = (W - i dt/2 K) psi,
// with K the (real, symmetric, tridiagonal) stiffness matrix of the flux
// Laplacian.  The Cayley form is unitary in the W inner product, and the
// system matrix is strictly diagonally dominant (real part W > 0), so the
// tridiagonal elimination below cannot break down.
class CnSolver {
 public:
  CnSolver(const RadialGrid& g, double dt) : g_(&g), n_(g.interior()) {
    kd_.resize(n_);
    ko_.resize(n_ - 1);
    for (int i = 0; i < n_; ++i) {
      const double right = (i == n_ - 1) ? g.cond[n_] : g.cond[i + 1];
      kd_[i] = g.surface * (g.cond[i] + right);
      if (i < n_ - 1) ko_[i] = -g.surface * g.cond[i + 1];
    }
    half_dt_ = 0.5 * dt;
    // precompute the elimination coefficients of A = W + i dt/2 K
    cp_.resize(n_);
    inv_.resize(n_);
    std::complex<double> prev{0.0, 0.0};
    for (int i = 0; i < n_; ++i) {
      const std::complex<double> a{g.w[i], half_dt_ * kd_[i]};
      const std::complex<double> c =
          (i > 0) ? std::complex<double>{0.0, half_dt_ * ko_[i - 1]} : 0.0;
      const std::complex<double> denom = a - c * prev;
      inv_[i] = 1.0 / denom;
      if (i < n_ - 1) {
        cp_[i] = std::complex<double>{0.0, half_dt_ * ko_[i]} * inv_[i];
        prev = cp_[i];
      }
    }
    rhs_.resize(n_);
  }

  void step(std::vector<std::complex<double>>& psi) {
    // rhs = (W - i dt/2 K) psi
    for (int i = 0; i < n_; ++i) {
      std::complex<double> k = kd_[i] * psi[i];
      if (i > 0) k += ko_[i - 1] * psi[i - 1];
      if (i < n_ - 1) k += ko_[i] * psi[i + 1];
      rhs_[i] = g_->w[i] * psi[i] - std::complex<double>{0.0, half_dt_} * k;
    }
    // forward sweep with precomputed coefficients
    std::complex<double> prev{0.0, 0.0};
    for (int i = 0; i < n_; ++i) {
      const std::complex<double> c =
          (i > 0) ? std::complex<double>{0.0, half_dt_ * ko_[i - 1]} : 0.0;
      rhs_[i] = (rhs_[i] - c * prev) * inv_[i];
      prev = rhs_[i];
    }
    // back substitution
    psi[n_ - 1] = rhs_[n_ - 1];
    for (int i = n_ - 2; i >= 0; --i) psi[i] = rhs_[i] - cp_[i] * psi[i + 1];
  }

 private:
  const RadialGrid* g_;
  int n_;
  double half_dt_;
  std::vector<double> kd_, ko_;
  std::vector<std::complex<double>> cp_, inv_, rhs_;
};

// One Strang step: half nonlinear phase, CN linear step, half nonlinear phase.
// The nonlinear substep rotates each value by exp(-i dt/2 F'(|psi|)/|psi|),
// leaving |psi| untouched pointwise.
class StrangStepper {
 public:
  StrangStepper(const RadialGrid& g, const Potential& pot, const EvolutionConfig& cfg)
      : g_(&g), pot_(&pot), cfg_(cfg), cn_(g, cfg.dt) {
    cfg.validate();
    boundary_start_ = 0;
    while (boundary_start_ < g.interior() && g.r[boundary_start_] < 0.99 * g.r_max)
      ++boundary_start_;
    if (boundary_start_ >= g.interior()) boundary_start_ = g.interior() - 1;
  }

  void step(std::vector<std::complex<double>>& psi) const {
    half_phase(psi);
    cn_.step(psi);
    half_phase(psi);
  }

  // throws EvolutionAborted on contamination or non-finite values
  void check(const std::vector<std::complex<double>>& psi, double t) const {
    double peak = 0.0, outer = 0.0;
    for (int i = 0; i < g_->interior(); ++i) {
      const double d = std::norm(psi[i]);
      if (!std::isfinite(d))
        throw EvolutionAborted("non-finite value at t=" + std::to_string(t));
      peak = std::max(peak, d);
      if (i >= boundary_start_) outer = std::max(outer, d);
    }
    if (peak > 0.0 && outer > cfg_.boundary_tol * peak)
      throw EvolutionAborted("boundary contamination at t=" + std::to_string(t) +
                             ": outer-band density exceeds tolerance");
  }

 private:
  void half_phase(std::vector<std::complex<double>>& psi) const {
    const double hdt = 0.5 * cfg_.dt;
    for (auto& v : psi) {
      const double a = std::abs(v);
      if (a < 1e-300) continue;
      const double w = pot_->phase_rate(a);
      v *= std::complex<double>{std::cos(hdt * w), -std::sin(hdt * w)};
    }
  }

  const RadialGrid* g_;
  const Potential* pot_;
  EvolutionConfig cfg_;
  mutable CnSolver cn_;
  int boundary_start_;
};

}  // namespace detail

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<std::complex<double>>> snapshots;
};

// Integrate i psi_t + lap psi - F'(psi) = 0 from psi0 to t_final, recording a
// snapshot every record_every steps (plus the initial state).  An optional
// sink receives every recorded (t, psi) for streaming output.
inline Trajectory evolve(
    const RadialGrid& g, const Potential& pot,
    const std::vector<std::complex<double>>& psi0, const EvolutionConfig& cfg,
    const std::function<void(double, const std::vector<std::complex<double>>&)>& sink = {}) {
  detail::check_shape(g, psi0.size());
  cfg.validate();
  detail::StrangStepper stepper(g, pot, cfg);
  std::vector<std::complex<double>> psi = psi0;
  stepper.check(psi, 0.0);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.snapshots.push_back(psi);
  if (sink) sink(0.0, psi);

  const long steps = std::lround(cfg.t_final / cfg.dt);
  for (long k = 1; k <= steps; ++k) {
    stepper.step(psi);
    if (k % cfg.record_every == 0 || k == steps) {
      const double t = k * cfg.dt;
      stepper.check(psi, t);
      traj.times.push_back(t);
      traj.snapshots.push_back(psi);
      if (sink) sink(t, psi);
    }
  }
  return traj;
}

struct StabilityResult {
  std::vector<double> times;
  std::vector<double> mass_series;
  std::vector<double> energy_series;
  std::vector<double> orbit_distance_series;
  double delta0 = 0.0;
  double max_excursion = 0.0;
};

// Perturb the ground state by a fixed radial bump of relative H^1 size delta,
// renormalize back to the sphere, and track the distance to the phase orbit
// of the unperturbed profile.
inline StabilityResult stability_experiment(const RadialGrid& g, const Potential& pot,
                                            const GroundState& gs, double delta,
                                            const EvolutionConfig& cfg) {
  if (!gs.converged)
    throw DomainError("stability_experiment: ground state is not converged");
  if (delta < 0) throw DomainError("stability_experiment: delta must be >= 0");
  cfg.validate();
  detail::check_shape(g, gs.u.values.size());

  const std::vector<double>& u = gs.u.values;
  const int n = g.interior();
  std::vector<std::complex<double>> psi(n);
  if (delta > 0) {
    std::vector<double> bump(n);
    for (int i = 0; i < n; ++i) {
      const double d = g.r[i] - 2.0;
      bump[i] = std::exp(-d * d);
    }
    const double bnorm = std::sqrt(h1_norm_sq(g, bump));
    const double unorm = std::sqrt(h1_norm_sq(g, u));
    const double amp = delta * unorm / bnorm;
    for (int i = 0; i < n; ++i) psi[i] = u[i] + amp * bump[i];
    const double m = mass(g, psi);
    const double beta = gs.rho / std::sqrt(m);
    for (auto& v : psi) v *= beta;
  } else {
    for (int i = 0; i < n; ++i) psi[i] = u[i];
  }

  detail::StrangStepper stepper(g, pot, cfg);
  stepper.check(psi, 0.0);

  StabilityResult res;
  res.delta0 = orbit_distance(g, psi, u);
  auto record = [&](double t) {
    res.times.push_back(t);
    res.mass_series.push_back(mass(g, psi));
    res.energy_series.push_back(energy_of(g, pot, psi));
    const double d = orbit_distance(g, psi, u);
    res.orbit_distance_series.push_back(d);
    res.max_excursion = std::max(res.max_excursion, d);
  };
  record(0.0);

  const long steps = std::lround(cfg.t_final / cfg.dt);
  for (long k = 1; k <= steps; ++k) {
    stepper.step(psi);
    if (k % cfg.record_every == 0 || k == steps) {
      const double t = k * cfg.dt;
      stepper.check(psi, t);
      record(t);
    }
  }
  return res;
}

}  // namespace radnls

#endif  // RADNLS_DYNAMICS_HPP
