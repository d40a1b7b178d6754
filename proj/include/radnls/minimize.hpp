#ifndef RADNLS_MINIMIZE_HPP
#define RADNLS_MINIMIZE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "radnls/functionals.hpp"
#include "radnls/grid.hpp"
#include "radnls/potential.hpp"
#include "radnls/profiles.hpp"

namespace radnls {

enum class Verdict { Converged, Vanishing, IterLimit };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "Converged";
    case Verdict::Vanishing: return "Vanishing";
    case Verdict::IterLimit: return "IterLimit";
  }
  return "IterLimit";
}

struct InitProfile {
  enum class Kind { Gaussian, Plateau, Field } kind = Kind::Gaussian;
  double width = 0.0;  // Gaussian; <= 0 means r_max/8
  double s0 = 1.0, R = 0.0;     // Plateau
  std::vector<double> values;   // Field: direct seed (CLI file init lands here)
};

struct FlowConfig {
  double initial_step = 0.0;     // <= 0: auto, 0.1 h^2
  double backtrack_factor = 0.5;
  double residual_tol = 1e-8;    // relative: converged when residual <= tol * rho
  int max_iters = 200000;
  int rearrange_every = 50;      // 0 = off
  int check_every = 50;          // verdict / residual cadence
  double vanish_tol = 1e-8;      // literal inner-sup collapse threshold
  double bind_tol = 1e-8;        // J >= -bind_tol * rho^2 counts as unbound
  double omega_shift = 0.0;      // Omega; reported omega = lambda - Omega
  InitProfile init;

  void validate() const {
    if (!(backtrack_factor > 0.0) || !(backtrack_factor < 1.0))
      throw ValidationError("flow: backtrack_factor must lie in (0,1)");
    if (!(residual_tol > 0.0)) throw ValidationError("flow: residual_tol must be positive");
    if (max_iters < 1) throw ValidationError("flow: max_iters must be >= 1");
    if (rearrange_every < 0) throw ValidationError("flow: rearrange_every must be >= 0");
    if (check_every < 1) throw ValidationError("flow: check_every must be >= 1");
  }
};

struct GroundState {
  RadialField u;
  double rho = 0;
  double lambda = 0;
  double omega = 0;
  IdentityDiagnostics diag;
  bool converged = false;
  Verdict verdict = Verdict::IterLimit;
  int iterations = 0;
  std::string warning;
};

namespace detail {

inline std::vector<double> build_init(const RadialGrid& g, const InitProfile& init) {
  switch (init.kind) {
    case InitProfile::Kind::Gaussian: {
      const double w = init.width > 0.0 ? init.width : g.r_max / 8.0;
      return make_gaussian(g, w);
    }
    case InitProfile::Kind::Plateau: {
      const double R = init.R > 0.0 ? init.R : g.r_max / 4.0;
      return make_plateau(g, init.s0, R);
    }
    case InitProfile::Kind::Field: {
      check_shape(g, init.values.size());
      return init.values;
    }
  }
  throw ValidationError("flow: unknown init profile");
}

// fused gradient g = -lap u + F'(u), plus <g,u>_w, all in one sweep
inline double gradient_into(const RadialGrid& g, const Potential& pot,
                            const std::vector<double>& u, std::vector<double>& out) {
  const int n = g.interior();
  out.resize(n);
  double gu = 0.0;
  for (int i = 0; i < n; ++i) {
    const double left = (i == 0) ? 0.0 : g.cond[i] * (u[i] - u[i - 1]);
    const double right = (i == n - 1) ? g.cond[n] * u[i]
                                      : g.cond[i + 1] * (u[i] - u[i + 1]);
    out[i] = g.surface * (left + right) / g.w[i] + pot.eval(u[i], 1);
    gu += g.w[i] * out[i] * u[i];
  }
  return gu;
}

}  // namespace detail

// Projected gradient flow on the sphere int u^2 = rho^2 with Armijo
// backtracking, nonnegativity by |.|, and guarded rearrangement.  J strictly
// decreases at every accepted step.
//
// Verdicts: Converged when the eigenvalue residual meets residual_tol and the
// state is a genuine bound state (J < 0, lambda < 0); Vanishing when the flow
// reaches a stationary or steadily spreading configuration with no negative
// energy to bind it (on the truncated ball the infimum-not-attained scenario
// shows up as a box mode, so the energy sign is the honest discriminator, and
// the literal inner-peak collapse test is kept as a secondary trigger);
// IterLimit otherwise.
inline GroundState minimize_on_sphere(const RadialGrid& g, const Potential& pot,
                                      double rho, const FlowConfig& cfg) {
  if (!(rho > 0.0)) throw ValidationError("minimize_on_sphere: rho must be positive");
  cfg.validate();
  const int n = g.interior();
  const double rho2 = rho * rho;

  std::vector<double> u = detail::build_init(g, cfg.init);
  for (double& x : u) x = std::abs(x);
  {
    const double m0 = mass(g, u);
    if (m0 <= 0.0) throw ValidationError("minimize_on_sphere: init profile is zero");
    const double beta = rho / std::sqrt(m0);
    for (double& x : u) x *= beta;
  }

  std::string warning;
  if (check_hypotheses(pot, 10.0, 1000).nonexistence_holds)
    warning = "potential satisfies the nonexistence inequality 0 <= 2F <= F's; "
              "no bound state exists";

  double J = energy_j(g, pot, u);
  double tau = cfg.initial_step > 0.0 ? cfg.initial_step : 0.1 * g.h * g.h;
  const double tau_floor = 1e-18 * g.h * g.h;

  int inner_n = 0;  // nodes with r < r_max / 2
  while (inner_n < n && g.r[inner_n] < 0.5 * g.r_max) ++inner_n;
  auto inner_sup = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (int i = 0; i < inner_n; ++i) s = std::max(s, std::abs(v[i]));
    return s;
  };
  const double sup0 = inner_sup(u);
  double sup_prev = std::numeric_limits<double>::infinity();
  int spread_run = 0;
  const double eps_bind = cfg.bind_tol * rho2;

  std::vector<double> grad(n), gt(n), trial(n);
  Verdict verdict = Verdict::IterLimit;
  int iters = 0;
  bool done = false;

  for (int k = 1; k <= cfg.max_iters && !done; ++k) {
    iters = k;
    const double gu = detail::gradient_into(g, pot, u, grad);
    const double lam = gu / rho2;
    double gt2 = 0.0;
    for (int i = 0; i < n; ++i) {
      gt[i] = grad[i] - lam * u[i];
      gt2 += g.w[i] * gt[i] * gt[i];
    }

    // residual / verdict checkpoint (gradient is fresh here)
    if (k % cfg.check_every == 1 || cfg.check_every == 1) {
      const double res = std::sqrt(gt2);  // == pde_residual(u, lam) on the sphere
      if (res <= cfg.residual_tol * rho) {
        verdict = (J < -eps_bind && lam < 0.0) ? Verdict::Converged : Verdict::Vanishing;
        break;
      }
      const double sup = inner_sup(u);
      if (sup < cfg.vanish_tol * sup0) {
        verdict = Verdict::Vanishing;
        break;
      }
      if (J >= -eps_bind && sup <= sup_prev * (1.0 + 1e-12) && sup <= 0.25 * sup0) {
        if (++spread_run >= 10) {
          verdict = Verdict::Vanishing;
          break;
        }
      } else {
        spread_run = 0;
      }
      sup_prev = sup;
    }

    // backtracking step on the composite map u -> renormalize(|u - tau gt|).
    // Deep in the bowl the Armijo decrease 1e-4 tau gt2 falls below the
    // roundoff of J itself and every honest step would be rejected; once the
    // residual is small we therefore also accept steps that keep J within
    // measurement noise while strictly shrinking the squared residual, which
    // is a cancellation-free sum and stays a clean signal far below J's
    // noise floor.
    bool accepted = false;
    const double noise_guard = 1e-10 * (1.0 + std::abs(J));
    const bool noise_regime = gt2 <= 1e-6 * rho2;  // residual below 1e-3 rho
    while (tau > tau_floor) {
      for (int i = 0; i < n; ++i) trial[i] = std::abs(u[i] - tau * gt[i]);
      const double mt = mass(g, trial);
      if (mt > 0.0) {
        const double beta = rho / std::sqrt(mt);
        double nl = 0.0;
        for (int i = 0; i < n; ++i) {
          trial[i] *= beta;
          nl += g.w[i] * pot.eval(trial[i], 0);
        }
        const double Jt = 0.5 * dirichlet_form(g, trial, trial) + nl;
        if (Jt <= J - 1e-4 * tau * gt2) {
          u.swap(trial);
          J = Jt;
          tau *= 1.25;
          accepted = true;
          break;
        }
        if (noise_regime && Jt <= J + noise_guard) {
          const double gu_t = detail::gradient_into(g, pot, trial, grad);
          const double lam_t = gu_t / rho2;
          double gt2_t = 0.0;
          for (int i = 0; i < n; ++i) {
            const double d = grad[i] - lam_t * trial[i];
            gt2_t += g.w[i] * d * d;
          }
          if (gt2_t < gt2) {
            u.swap(trial);
            J = Jt;
            tau *= 1.25;
            accepted = true;
            break;
          }
        }
      }
      tau *= cfg.backtrack_factor;
    }
    if (!accepted) {
      // no descent step exists at roundoff scale; classify what we have
      const double res = std::sqrt(gt2);
      if (res <= cfg.residual_tol * rho)
        verdict = (J < -eps_bind && lam < 0.0) ? Verdict::Converged : Verdict::Vanishing;
      else if (J >= -eps_bind)
        verdict = Verdict::Vanishing;
      else
        verdict = Verdict::IterLimit;
      break;
    }

    if (cfg.rearrange_every > 0 && k % cfg.rearrange_every == 0) {
      std::vector<double> ur = rearrange_decreasing(g, u);
      const double Jr = energy_j(g, pot, ur);
      if (Jr <= J) {
        u.swap(ur);
        J = Jr;
      }
    }
  }

  GroundState gs;
  gs.rho = rho;
  gs.verdict = verdict;
  gs.iterations = iters;
  gs.converged = (verdict == Verdict::Converged);

  // final rearrangement: converged profiles are monotone already, so this is
  // a near-fixed-point; keep it only if it does not break the certificate
  {
    std::vector<double> ur = rearrange_decreasing(g, u);
    const double Jr = energy_j(g, pot, ur);
    if (Jr <= J + 1e-12 * (1.0 + std::abs(J))) {
      if (gs.converged) {
        const double lam_r = lagrange_multiplier(g, pot, ur);
        if (pde_residual(g, pot, ur, lam_r) <= cfg.residual_tol * rho) u.swap(ur);
      } else {
        u.swap(ur);
      }
    }
  }

  gs.u = RadialField{&g, std::move(u)};
  gs.diag = diagnostics(g, pot, gs.u.values);
  gs.lambda = gs.diag.lambda_rayleigh;
  gs.omega = gs.lambda - cfg.omega_shift;

  double peak = 0.0, outer = 0.0;
  for (int i = 0; i < n; ++i) {
    peak = std::max(peak, std::abs(gs.u.values[i]));
    if (g.r[i] >= 0.9 * g.r_max) outer = std::max(outer, std::abs(gs.u.values[i]));
  }
  if (outer > 1e-8 * peak) {
    if (!warning.empty()) warning += "; ";
    warning += "outer-band field magnitude above 1e-8 of peak; r_max may be too small";
  }
  gs.warning = warning;
  return gs;
}

struct SubadditivityCheck {
  double theta = 0;
  double rho = 0;
  double lhs = 0;  // I(theta rho^2)
  double rhs = 0;  // theta I(rho^2)
  bool holds = false;
};

struct RhoScan {
  std::vector<double> rho_values;
  std::vector<double> i_values;
  std::vector<double> lambda_values;
  std::vector<Verdict> verdicts;
  std::optional<double> rho_bar_estimate;
  std::vector<SubadditivityCheck> subadditivity_checks;
};

namespace detail {

// deterministic multistart: Gaussian, plateau at the sampled minimizer of F,
// mass-pinned scaled plateau, plus optional extra seeds
inline GroundState best_of_multistart(const RadialGrid& g, const Potential& pot,
                                      double rho, const FlowConfig& base,
                                      const std::vector<std::vector<double>>& extra = {}) {
  double smin = 1.0, fmin = 0.0;
  for (int j = 1; j <= 400; ++j) {
    const double x = 10.0 * j / 400.0;
    const double fx = pot.eval(x, 0);
    if (fx < fmin) {
      fmin = fx;
      smin = x;
    }
  }
  std::vector<std::vector<double>> starts;
  starts.push_back(make_gaussian(g, g.r_max / 8.0));
  starts.push_back(make_plateau(g, smin, g.r_max / 4.0));
  starts.push_back(make_scaled_plateau(g, rho * rho, g.r_max / 4.0));
  for (const auto& e : extra) starts.push_back(e);

  std::optional<GroundState> best;
  for (auto& s : starts) {
    FlowConfig cfg = base;
    cfg.init.kind = InitProfile::Kind::Field;
    cfg.init.values = std::move(s);
    GroundState gs = minimize_on_sphere(g, pot, rho, cfg);
    if (!best || gs.diag.j_value < best->diag.j_value) best = std::move(gs);
  }
  return *best;
}

}  // namespace detail

// Sweep I(rho^2) = best J over the multistart for each rho; locate the first
// mass with strictly negative energy (bisected to 1% when an upper neighbor
// exists); record strict subadditivity checks I(theta rho^2) < theta I(rho^2)
// for every scanned rho in the bound regime with theta rho^2 inside the
// scanned range.
inline RhoScan scan_rho(const RadialGrid& g, const Potential& pot,
                        const std::vector<double>& rho_list,
                        const std::vector<double>& thetas, const FlowConfig& cfg) {
  if (rho_list.empty()) throw ValidationError("scan_rho: empty rho list");
  for (std::size_t i = 0; i + 1 < rho_list.size(); ++i)
    if (!(rho_list[i] < rho_list[i + 1]))
      throw ValidationError("scan_rho: rho list must be strictly ascending");
  if (!(rho_list.front() > 0)) throw ValidationError("scan_rho: rho must be positive");
  for (double t : thetas)
    if (!(t > 1.0)) throw ValidationError("scan_rho: thetas must exceed 1");

  RhoScan scan;
  scan.rho_values = rho_list;
  std::vector<std::vector<double>> profiles;
  for (double rho : rho_list) {
    GroundState gs = detail::best_of_multistart(g, pot, rho, cfg);
    scan.i_values.push_back(gs.diag.j_value);
    scan.lambda_values.push_back(gs.lambda);
    scan.verdicts.push_back(gs.verdict);
    profiles.push_back(gs.u.values);
  }

  auto neg_tol = [&](double rho) { return 1e-8 * rho * rho; };
  std::size_t first_neg = rho_list.size();
  for (std::size_t i = 0; i < rho_list.size(); ++i) {
    if (scan.i_values[i] < -neg_tol(rho_list[i])) {
      first_neg = i;
      break;
    }
  }

  if (first_neg < rho_list.size() && first_neg > 0) {
    double lo = rho_list[first_neg - 1], hi = rho_list[first_neg];
    while (hi - lo > 0.01 * hi) {
      const double mid = 0.5 * (lo + hi);
      GroundState gs = detail::best_of_multistart(g, pot, mid, cfg);
      if (gs.diag.j_value < -neg_tol(mid))
        hi = mid;
      else
        lo = mid;
    }
    scan.rho_bar_estimate = hi;
  }
  // all-negative scans have no bracketed threshold: leave the estimate empty

  const double max_mass = rho_list.back() * rho_list.back();
  for (double theta : thetas) {
    for (std::size_t i = 0; i < rho_list.size(); ++i) {
      const double rho = rho_list[i];
      if (!(scan.i_values[i] < -neg_tol(rho))) continue;
      if (theta * rho * rho > max_mass) continue;
      const double rho_t = rho * std::sqrt(theta);
      std::vector<std::vector<double>> extra;
      extra.push_back(dilate_to_mass(g, profiles[i], theta * rho * rho));
      GroundState gs = detail::best_of_multistart(g, pot, rho_t, cfg, extra);
      SubadditivityCheck c;
      c.theta = theta;
      c.rho = rho;
      c.lhs = gs.diag.j_value;
      c.rhs = theta * scan.i_values[i];
      c.holds = c.lhs < c.rhs;
      scan.subadditivity_checks.push_back(c);
    }
  }
  return scan;
}

}  // namespace radnls

#endif  // RADNLS_MINIMIZE_HPP
