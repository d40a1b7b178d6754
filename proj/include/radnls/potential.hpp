#ifndef RADNLS_POTENTIAL_HPP
#define RADNLS_POTENTIAL_HPP

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "radnls/errors.hpp"

namespace radnls {

// Growth thresholds tied to the space dimension.
inline double sobolev_critical(int dim) { return 2.0 * dim / (dim - 2.0); }  // 2*
inline double mass_critical(int dim) { return 2.0 + 4.0 / dim; }             // 2 + 4/N

namespace detail {

inline double powi(double t, int k) {
  double acc = 1.0;
  while (k > 0) {
    if (k & 1) acc *= t;
    t *= t;
    k >>= 1;
  }
  return acc;
}

// |s|^e with fast paths for small integer and half-integer exponents; these
// dominate the flow's inner loop where std::pow would be the bottleneck.
inline double pow_fast(double t, double e) {
  const double k2 = 2.0 * e;
  const double k2r = std::nearbyint(k2);
  if (std::abs(k2 - k2r) < 1e-12 && k2r >= 0 && k2r <= 64) {
    const int n2 = static_cast<int>(k2r);
    double v = powi(t, n2 / 2);
    if (n2 & 1) v *= std::sqrt(t);
    return v;
  }
  return std::pow(t, e);
}

}  // namespace detail

enum class Family { PowerSum, Rational, PurePower, Zero };

// The nonlinearity F.  All families are even functions of s with
// F(0) = F'(0) = F''(0) = 0, guaranteed by requiring every growth exponent
// to lie in (2, 2*).
//
//   PowerSum:  F(s) = sum_k c_k |s|^{p_k}
//   Rational:  F(s) = -|s|^q / (1 + |s|^{q-p}),  2 < p < q
//   PurePower: F(s) = sign * |s|^p / p
//   Zero:      F == 0
struct Potential {
  Family family = Family::Zero;
  std::vector<std::pair<double, double>> coefficients;  // (c_k, p_k) for PowerSum
  double q = 0.0, p = 0.0;                              // Rational
  int power_sign = 1;                                   // PurePower
  double power_exponent = 0.0;                          // PurePower
  int dim = 3;

  static Potential power_sum(std::vector<std::pair<double, double>> terms, int dim) {
    Potential f;
    f.family = Family::PowerSum;
    f.coefficients = std::move(terms);
    f.dim = dim;
    f.validate();
    return f;
  }

  static Potential rational(double q, double p, int dim) {
    Potential f;
    f.family = Family::Rational;
    f.q = q;
    f.p = p;
    f.dim = dim;
    f.validate();
    return f;
  }

  static Potential pure_power(int sign, double exponent, int dim) {
    Potential f;
    f.family = Family::PurePower;
    f.power_sign = sign >= 0 ? 1 : -1;
    f.power_exponent = exponent;
    f.dim = dim;
    f.validate();
    return f;
  }

  static Potential zero(int dim) {
    Potential f;
    f.family = Family::Zero;
    f.dim = dim;
    f.validate();
    return f;
  }

  void validate() const {
    if (dim < 3) throw ValidationError("potential: dimension must be >= 3");
    const double crit = sobolev_critical(dim);
    auto check_exp = [&](double e) {
      if (!(e > 2.0) || !(e < crit))
        throw ValidationError("potential: exponent " + std::to_string(e) +
                              " outside (2, 2N/(N-2))");
    };
    switch (family) {
      case Family::PowerSum:
        if (coefficients.empty())
          throw ValidationError("potential: power_sum needs at least one term");
        for (auto& [c, e] : coefficients) {
          if (c == 0.0) throw ValidationError("potential: zero coefficient");
          check_exp(e);
        }
        break;
      case Family::Rational:
        check_exp(p);
        check_exp(q);
        if (!(q > p)) throw ValidationError("potential: rational family needs q > p");
        break;
      case Family::PurePower:
        check_exp(power_exponent);
        break;
      case Family::Zero:
        break;
    }
  }

  // F, F', F'' at s.  order selects the derivative.
  double eval(double s, int order) const {
    if (!std::isfinite(s)) throw DomainError("potential: non-finite sample point");
    if (order < 0 || order > 2) throw DomainError("potential: order must be 0, 1, or 2");
    const double t = std::abs(s);
    const double sgn = (s < 0.0) ? -1.0 : 1.0;
    switch (family) {
      case Family::Zero:
        return 0.0;
      case Family::PowerSum: {
        double acc = 0.0;
        for (auto& [c, e] : coefficients) {
          if (order == 0)
            acc += c * detail::pow_fast(t, e);
          else if (order == 1)
            acc += c * e * detail::pow_fast(t, e - 1.0);
          else
            acc += c * e * (e - 1.0) * detail::pow_fast(t, e - 2.0);
        }
        return (order == 1) ? sgn * acc : acc;
      }
      case Family::PurePower: {
        const double e = power_exponent;
        if (order == 0) return power_sign * detail::pow_fast(t, e) / e;
        if (order == 1) return sgn * power_sign * detail::pow_fast(t, e - 1.0);
        return power_sign * (e - 1.0) * detail::pow_fast(t, e - 2.0);
      }
      case Family::Rational: {
        if (t == 0.0) return 0.0;
        const double d = 1.0 + detail::pow_fast(t, q - p);
        if (order == 0) return -detail::pow_fast(t, q) / d;
        const double num1 = q * detail::pow_fast(t, q - 1.0) +
                            p * detail::pow_fast(t, 2.0 * q - p - 1.0);
        if (order == 1) return -sgn * num1 / (d * d);
        const double num2 = q * (q - 1.0) * detail::pow_fast(t, q - 2.0) +
                            p * (2.0 * q - p - 1.0) * detail::pow_fast(t, 2.0 * q - p - 2.0);
        return -num2 / (d * d) +
               2.0 * (q - p) * detail::pow_fast(t, q - p - 1.0) * num1 / (d * d * d);
      }
    }
    return 0.0;
  }

  // F'(s)/s, extended by its limit 0 at s = 0 (forced by F''(0) = 0).
  // Even in s; used by the dynamics phase rotation.
  double phase_rate(double s) const {
    const double t = std::abs(s);
    if (t < 1e-300 || family == Family::Zero) return 0.0;
    return eval(t, 1) / t;
  }

  // Exponent pair (low, high) bounding the growth of F' as in
  // |F'(s)| <= c1 |s|^{low-1} + c2 |s|^{high-1}.  Both lie in (2, 2*) by
  // construction.  Zero family: (0, 0) sentinel.
  std::pair<double, double> growth_exponents() const {
    switch (family) {
      case Family::Zero:
        return {0.0, 0.0};
      case Family::PurePower:
        return {power_exponent, power_exponent};
      case Family::Rational:
        return {p, q};
      case Family::PowerSum: {
        double lo = coefficients.front().second, hi = lo;
        for (auto& [c, e] : coefficients) {
          lo = std::min(lo, e);
          hi = std::max(hi, e);
        }
        return {lo, hi};
      }
    }
    return {0.0, 0.0};
  }
};

// Certified facts about F gathered from its closed form plus dense sampling
// on (0, s_max].  Booleans whose content is an inequality are decided on the
// sampled range only; certificates record the constants that witnessed them.
struct HypothesisReport {
  bool fp_holds = false;       // |F'| and |F''| bounded by the declared powers
  double fp_q = 0, fp_p = 0;   // exponent pair (low, high)
  double fp_c1 = 0, fp_c2 = 0; // constants witnessing the F' bound
  bool f0_holds = false;       // F >= -c1 s^2 - c2 |s|^gamma
  double f0_c1 = 0, f0_c2 = 0, f0_gamma = 0;
  bool f1_holds = false;       // some F(s0) < 0
  double f1_witness = std::numeric_limits<double>::quiet_NaN();
  bool f2_holds = false;       // F(s) < -s^{2+eps} for small s, eps in (0, 4/N)
  double f2_epsilon = std::numeric_limits<double>::quiet_NaN();
  bool coercivity_exponent_ok = false;  // gamma < 2 + 4/N
  bool nonexistence_holds = false;      // 0 <= 2F(s) <= F'(s) s on the range
  double sample_min = 0, sample_max = 0;
  int sample_count = 0;
};

inline HypothesisReport check_hypotheses(const Potential& pot, double s_max = 10.0,
                                         int samples = 10000) {
  if (!(s_max > 0)) throw ValidationError("check_hypotheses: s_max must be positive");
  if (samples < 100) throw ValidationError("check_hypotheses: need at least 100 samples");
  pot.validate();

  HypothesisReport rep;
  rep.sample_count = samples;
  rep.sample_max = s_max;
  rep.sample_min = s_max * 1e-6;
  // geometric ladder: resolves the small-s conditions and the O(1) range alike
  std::vector<double> s(samples);
  const double lo = std::log(rep.sample_min), hi = std::log(s_max);
  for (int j = 0; j < samples; ++j)
    s[j] = std::exp(lo + (hi - lo) * j / double(samples - 1));
  s.back() = s_max;

  // ---- (growth) exponent window is enforced at construction; find constants
  auto [eq, ep] = pot.growth_exponents();
  rep.fp_q = eq;
  rep.fp_p = ep;
  if (pot.family == Family::Zero) {
    rep.fp_holds = true;  // F' == 0; any constants work
  } else {
    double c_d1 = 0.0, c_d2 = 0.0;
    for (double x : s) {
      const double b1 = detail::pow_fast(x, eq - 1.0) + detail::pow_fast(x, ep - 1.0);
      const double b2 = detail::pow_fast(x, eq - 2.0) + detail::pow_fast(x, ep - 2.0);
      c_d1 = std::max(c_d1, std::abs(pot.eval(x, 1)) / b1);
      c_d2 = std::max(c_d2, std::abs(pot.eval(x, 2)) / b2);
    }
    rep.fp_c1 = rep.fp_c2 = 1.0001 * std::max(c_d1, c_d2);
    rep.fp_holds = std::isfinite(rep.fp_c1);
  }

  // ---- lower bound F >= -c1 s^2 - c2 |s|^gamma, certificate per family
  double c1 = 0.0, c2 = 0.0, gamma = 2.0;
  switch (pot.family) {
    case Family::Zero:
      break;
    case Family::PurePower:
      if (pot.power_sign < 0) {
        gamma = pot.power_exponent;
        c2 = 1.0001 / pot.power_exponent;
      }
      break;
    case Family::Rational:
      gamma = pot.p;  // -F(s) <= |s|^p for all s
      c2 = 1.0001;
      break;
    case Family::PowerSum: {
      auto lead = pot.coefficients.front();
      for (auto& term : pot.coefficients)
        if (term.second > lead.second) lead = term;
      if (lead.first > 0) {
        gamma = 2.0;  // F -> +inf; a quadratic floor suffices
        double worst = 0.0;
        for (double x : s) worst = std::max(worst, -pot.eval(x, 0) / (x * x));
        c1 = 1.0001 * worst + 1e-300;
      } else {
        gamma = lead.second;
        double worst = -lead.first;  // asymptotic ratio -F/|s|^gamma
        for (double x : s)
          worst = std::max(worst, -pot.eval(x, 0) / detail::pow_fast(x, gamma));
        c2 = 1.0001 * worst;
        double need = 0.0;  // cover the mid range with the quadratic term
        for (double x : s)
          need = std::max(need, (-pot.eval(x, 0) - c2 * detail::pow_fast(x, gamma)) / (x * x));
        c1 = (need > 0) ? 1.0001 * need : 0.0;
      }
      break;
    }
  }
  rep.f0_c1 = c1;
  rep.f0_c2 = c2;
  rep.f0_gamma = gamma;
  rep.f0_holds = true;
  for (double x : s) {
    const double bound = -c1 * x * x - c2 * detail::pow_fast(x, gamma);
    if (pot.eval(x, 0) < bound - 1e-12 * (1.0 + std::abs(bound))) {
      rep.f0_holds = false;
      break;
    }
  }
  rep.coercivity_exponent_ok = rep.f0_holds && gamma < mass_critical(pot.dim);

  // ---- negativity witness: the sampled s with the most negative F
  double fmin = 0.0;
  for (double x : s) {
    const double fx = pot.eval(x, 0);
    if (fx < fmin) {
      fmin = fx;
      rep.f1_witness = x;
    }
  }
  rep.f1_holds = fmin < 0.0;

  // ---- small-s dominance F(s) < -s^{2+eps}: a limit property, so it is
  // decided on the smallest sampled decade; scan eps over (0, 4/N)
  const double eps_hi = 4.0 / pot.dim;
  const double s_cut = 10.0 * rep.sample_min;
  for (int k = 1; k <= 64 && !rep.f2_holds; ++k) {
    const double eps = eps_hi * k / 65.0;
    bool ok = false;
    for (double x : s) {
      if (x > s_cut) break;
      if (!(pot.eval(x, 0) < -std::pow(x, 2.0 + eps))) {
        ok = false;
        break;
      }
      ok = true;
    }
    if (ok) {
      rep.f2_holds = true;
      rep.f2_epsilon = eps;
    }
  }

  // ---- 0 <= 2F(s) <= F'(s) s on the sampled range
  rep.nonexistence_holds = true;
  for (double x : s) {
    const double f = pot.eval(x, 0), fps = pot.eval(x, 1) * x;
    const double slack = 1e-12 * (1.0 + std::abs(fps));
    if (2.0 * f < -slack || 2.0 * f > fps + slack) {
      rep.nonexistence_holds = false;
      break;
    }
  }
  return rep;
}

}  // namespace radnls

#endif  // RADNLS_POTENTIAL_HPP
