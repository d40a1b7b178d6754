#ifndef RADNLS_PROFILES_HPP
#define RADNLS_PROFILES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "radnls/functionals.hpp"
#include "radnls/grid.hpp"
#include "radnls/potential.hpp"

namespace radnls {

inline std::vector<double> make_gaussian(const RadialGrid& g, double width) {
  if (!(width > 0)) throw DomainError("make_gaussian: width must be positive");
  std::vector<double> u(g.interior());
  for (int i = 0; i < g.interior(); ++i)
    u[i] = std::exp(-g.r[i] * g.r[i] / (2.0 * width * width));
  return u;
}

// Flat level s0 on [0, R], linear down to 0 across a collar of width 1.
inline std::vector<double> make_plateau(const RadialGrid& g, double s0, double R) {
  if (!(R > 0) || R + 1.0 >= g.r_max)
    throw DomainError("make_plateau: need 0 < R and R + 1 < r_max");
  std::vector<double> u(g.interior(), 0.0);
  for (int i = 0; i < g.interior(); ++i) {
    const double r = g.r[i];
    if (r <= R)
      u[i] = s0;
    else if (r < R + 1.0)
      u[i] = s0 * (R + 1.0 - r);
  }
  return u;
}

// Level s = sqrt(gamma / R^N) on [0, R], linear down to 0 on [R, 2R]; the
// level is tied to R so the bulk mass stays pinned as R grows.
inline std::vector<double> make_scaled_plateau(const RadialGrid& g, double gamma,
                                               double R) {
  if (!(gamma > 0)) throw DomainError("make_scaled_plateau: gamma must be positive");
  if (!(R > 0) || 2.0 * R >= g.r_max)
    throw DomainError("make_scaled_plateau: need 0 < 2R < r_max");
  const double s = std::sqrt(gamma / std::pow(R, g.dim));
  std::vector<double> u(g.interior(), 0.0);
  for (int i = 0; i < g.interior(); ++i) {
    const double r = g.r[i];
    if (r <= R)
      u[i] = s;
    else if (r < 2.0 * R)
      u[i] = s * (2.0 * R - r) / R;
  }
  return u;
}

// Radially nonincreasing transport rearrangement of |u|: the weighted value
// distribution is laid out along the cumulative radial measure in decreasing
// order and each node receives the mean value of its measure slice.  Fields
// that are already nonincreasing are exact fixed points.  The result is
// rescaled so int u^2 is preserved to roundoff.
inline std::vector<double> rearrange_decreasing(const RadialGrid& g,
                                                const std::vector<double>& u) {
  detail::check_shape(g, u.size());
  const int n = g.interior();
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = std::abs(u[i]);
  std::vector<int> ord(n);
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(),
                   [&](int i, int j) { return a[i] > a[j]; });
  std::vector<double> out(n, 0.0);
  int sp = 0;
  double avail = g.w[ord[0]];
  for (int i = 0; i < n; ++i) {
    double need = g.w[i];
    double acc = 0.0;
    while (need > 0.0 && sp < n) {
      const double take = std::min(need, avail);
      acc += take * a[ord[sp]];
      need -= take;
      avail -= take;
      if (avail <= 1e-300) {
        if (++sp < n) avail = g.w[ord[sp]];
      }
    }
    out[i] = acc / g.w[i];
  }
  const double m0 = mass(g, u);
  const double m1 = mass(g, out);
  if (m1 > 0.0) {
    const double beta = std::sqrt(m0 / m1);
    for (double& x : out) x *= beta;
  }
  return out;
}

// Smallest R in a geometric sweep with J(plateau(s0, R)) < 0; +inf if the
// sweep exhausts the grid.  Requires F(s0) < 0 (otherwise no R can work:
// both the gradient collar and the bulk term would be nonnegative).
inline double negative_energy_radius(const RadialGrid& g, const Potential& pot,
                                     double s0) {
  if (!(pot.eval(s0, 0) < 0.0))
    throw DomainError("negative_energy_radius: requires F(s0) < 0");
  for (double R = std::max(2.0 * g.h, 0.5); R + 1.0 < g.r_max; R *= 1.3) {
    if (energy_j(g, pot, make_plateau(g, s0, R)) < 0.0) return R;
  }
  return std::numeric_limits<double>::infinity();
}

// u(r / sigma) resampled on the same grid (flat extension through r = 0,
// zero beyond r_max).
inline std::vector<double> dilate(const RadialGrid& g, const std::vector<double>& u,
                                  double sigma) {
  detail::check_shape(g, u.size());
  if (!(sigma > 0)) throw DomainError("dilate: sigma must be positive");
  const int n = g.interior();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = g.r[i] / sigma;
    if (x >= g.r_max) continue;
    const double t = x / g.h;  // node coordinate, node j at (j+1)h
    if (t <= 1.0) {
      out[i] = u[0];  // flat through the origin
    } else {
      const int j = std::min(static_cast<int>(t) - 1, n - 1);
      const double frac = t - (j + 1);
      const double right = (j + 1 < n) ? u[j + 1] : 0.0;
      out[i] = u[j] + frac * (right - u[j]);
    }
  }
  return out;
}

// Dilation u(r/sigma) with sigma chosen so the resampled mass hits the
// target, then an exact amplitude rescale.
inline std::vector<double> dilate_to_mass(const RadialGrid& g,
                                          const std::vector<double>& u,
                                          double target_mass) {
  const double m0 = mass(g, u);
  if (m0 <= 0.0) throw DomainError("dilate_to_mass: zero field");
  if (!(target_mass > 0)) throw DomainError("dilate_to_mass: target must be positive");
  const double sigma = std::pow(target_mass / m0, 1.0 / g.dim);
  std::vector<double> v = dilate(g, u, sigma);
  const double m1 = mass(g, v);
  if (m1 <= 0.0) return v;
  const double beta = std::sqrt(target_mass / m1);
  for (double& x : v) x *= beta;
  return v;
}

}  // namespace radnls

#endif  // RADNLS_PROFILES_HPP
