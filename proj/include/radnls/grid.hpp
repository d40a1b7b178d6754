#ifndef RADNLS_GRID_HPP
#define RADNLS_GRID_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "radnls/errors.hpp"

namespace radnls {

// Uniform radial mesh for spherically symmetric fields on a ball in R^N,
// N >= 3.  Nodes r_i = i*h for i = 1..M-1 with h = r_max/M; the field is
// even across r = 0 and clamped to zero at r = r_max (Dirichlet wall).
//
// Quadrature: int f dx ~ sum_i w_i f(r_i) with w_i = surface * r_i^{N-1} * h.
//
// The Laplacian is assembled in conservative flux form with one conductance
// per edge.  The conductances are chosen so that the stencil is exact on
// every quadratic a + b r^2 (hence second-order accurate up to and including
// the node next to the origin, where naive midpoint areas lose consistency):
//   kappa_{i+1/2} = h^{N-2} * 2N * (sum_{j<=i} j^{N-1}) / (2i+1),
// with kappa_{1/2} = 0, which encodes the even extension across r = 0.
// For N = 3 this reduces to the familiar kappa_{i+1/2} = r_i r_{i+1} / h.
struct RadialGrid {
  int dim = 0;          // N
  double r_max = 0;
  int cells = 0;        // M; the field carries M-1 interior values
  double h = 0;
  double surface = 0;   // area of the unit (N-1)-sphere
  std::vector<double> r;     // interior nodes, size M-1
  std::vector<double> w;     // quadrature weights, size M-1
  std::vector<double> cond;  // edge conductances kappa_{i+1/2}, size M, cond[0] = 0

  int interior() const { return cells - 1; }
};

struct RadialField {
  const RadialGrid* grid = nullptr;
  std::vector<double> values;
};

struct ComplexField {
  const RadialGrid* grid = nullptr;
  std::vector<std::complex<double>> values;
};

inline double unit_sphere_area(int dim) {
  return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

inline RadialGrid build_grid(int dim, double r_max, int cells) {
  if (dim < 3) throw ValidationError("grid: unsupported dimension (need N >= 3)");
  if (!(r_max > 0)) throw ValidationError("grid: r_max must be positive");
  if (cells < 16) throw ValidationError("grid: need at least 16 cells");
  RadialGrid g;
  g.dim = dim;
  g.r_max = r_max;
  g.cells = cells;
  g.h = r_max / cells;
  g.surface = unit_sphere_area(dim);
  g.r.resize(cells - 1);
  g.w.resize(cells - 1);
  for (int i = 1; i < cells; ++i) {
    g.r[i - 1] = i * g.h;
    g.w[i - 1] = g.surface * std::pow(g.r[i - 1], dim - 1) * g.h;
  }
  g.cond.resize(cells);
  const double hpow = std::pow(g.h, dim - 2);
  double s = 0.0;  // running sum of j^{N-1}
  g.cond[0] = 0.0;
  for (int i = 1; i < cells; ++i) {
    s += std::pow(double(i), dim - 1);
    g.cond[i] = hpow * 2.0 * dim * s / (2.0 * i + 1.0);
  }
  return g;
}

inline RadialField make_field(const RadialGrid& g) {
  return RadialField{&g, std::vector<double>(g.interior(), 0.0)};
}

inline ComplexField make_complex_field(const RadialGrid& g) {
  return ComplexField{&g, std::vector<std::complex<double>>(g.interior(), 0.0)};
}

namespace detail {

inline void check_shape(const RadialGrid& g, std::size_t n) {
  if (n != static_cast<std::size_t>(g.interior()))
    throw ValidationError("grid: field size does not match grid");
}

}  // namespace detail

// sum_i w_i f_i
inline double integrate(const RadialGrid& g, const std::vector<double>& f) {
  detail::check_shape(g, f.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += g.w[i] * f[i];
  return acc;
}

// Dirichlet (gradient) bilinear form: surface * sum_edges kappa (du)(dv).
// Works for real or complex values; complex arguments are NOT conjugated,
// callers combine components as needed.
template <class T>
inline T dirichlet_form(const RadialGrid& g, const std::vector<T>& u,
                        const std::vector<T>& v) {
  detail::check_shape(g, u.size());
  detail::check_shape(g, v.size());
  const int n = g.interior();
  T acc{};
  for (int e = 1; e < n; ++e)  // interior edges between nodes e-1 and e
    acc += g.cond[e] * (u[e] - u[e - 1]) * (v[e] - v[e - 1]);
  acc += g.cond[n] * u[n - 1] * v[n - 1];  // edge to the Dirichlet wall
  return g.surface * acc;
}

// Discrete radial Laplacian (flux form).  Exact summation by parts:
//   integrate(-laplacian(u) * v) == dirichlet_form(u, v)  to roundoff.
template <class T>
inline std::vector<T> laplacian(const RadialGrid& g, const std::vector<T>& u) {
  detail::check_shape(g, u.size());
  const int n = g.interior();
  std::vector<T> out(n);
  for (int i = 0; i < n; ++i) {
    T left = (i == 0) ? T{} : g.cond[i] * (u[i - 1] - u[i]);  // cond[0] = 0 region
    T right = (i == n - 1) ? g.cond[n] * (-u[i]) : g.cond[i + 1] * (u[i + 1] - u[i]);
    out[i] = g.surface * (left + right) / g.w[i];
  }
  return out;
}

inline double mass(const RadialGrid& g, const std::vector<double>& u) {
  detail::check_shape(g, u.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += g.w[i] * u[i] * u[i];
  return acc;
}

inline double mass(const RadialGrid& g, const std::vector<std::complex<double>>& u) {
  detail::check_shape(g, u.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += g.w[i] * std::norm(u[i]);
  return acc;
}

inline double grad_norm_sq(const RadialGrid& g, const std::vector<double>& u) {
  return dirichlet_form(g, u, u);
}

inline double grad_norm_sq(const RadialGrid& g,
                           const std::vector<std::complex<double>>& u) {
  detail::check_shape(g, u.size());
  const int n = g.interior();
  double acc = 0.0;
  for (int e = 1; e < n; ++e) acc += g.cond[e] * std::norm(u[e] - u[e - 1]);
  acc += g.cond[n] * std::norm(u[n - 1]);
  return g.surface * acc;
}

template <class T>
inline double h1_norm_sq(const RadialGrid& g, const std::vector<T>& u) {
  return grad_norm_sq(g, u) + mass(g, u);
}

inline double integrate(const RadialField& f) { return integrate(*f.grid, f.values); }
inline double mass(const RadialField& f) { return mass(*f.grid, f.values); }
inline double mass(const ComplexField& f) { return mass(*f.grid, f.values); }

}  // namespace radnls

#endif  // RADNLS_GRID_HPP
