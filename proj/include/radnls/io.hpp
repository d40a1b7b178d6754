#ifndef RADNLS_IO_HPP
#define RADNLS_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "radnls/dynamics.hpp"
#include "radnls/errors.hpp"
#include "radnls/grid.hpp"
#include "radnls/minimize.hpp"
#include "radnls/potential.hpp"

namespace radnls {

inline const char* kSchemaVersion = "radnls-report/1";

// 17 significant digits: enough for bit-exact double round-trips, and a
// fixed format keeps reports byte-identical across runs.
inline std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Minimal ordered-key JSON writer.  Nonfinite numbers are emitted as null
// (JSON has no literal for them).
class JsonWriter {
 public:
  JsonWriter() { out_ << "{"; }

  JsonWriter& field(const std::string& key, double v) {
    sep();
    out_ << '"' << key << "\": ";
    if (std::isfinite(v))
      out_ << fmt17(v);
    else
      out_ << "null";
    return *this;
  }
  JsonWriter& field(const std::string& key, int v) {
    sep();
    out_ << '"' << key << "\": " << v;
    return *this;
  }
  JsonWriter& field(const std::string& key, bool v) {
    sep();
    out_ << '"' << key << "\": " << (v ? "true" : "false");
    return *this;
  }
  JsonWriter& field(const std::string& key, const std::string& v) {
    sep();
    out_ << '"' << key << "\": \"" << escape(v) << '"';
    return *this;
  }
  JsonWriter& field(const std::string& key, const char* v) {
    return field(key, std::string(v));
  }
  JsonWriter& field_null(const std::string& key) {
    sep();
    out_ << '"' << key << "\": null";
    return *this;
  }
  JsonWriter& field_raw(const std::string& key, const std::string& raw) {
    sep();
    out_ << '"' << key << "\": " << raw;
    return *this;
  }
  JsonWriter& field(const std::string& key, const std::vector<double>& v) {
    sep();
    out_ << '"' << key << "\": [";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out_ << ", ";
      out_ << (std::isfinite(v[i]) ? fmt17(v[i]) : "null");
    }
    out_ << "]";
    return *this;
  }

  std::string str() const { return out_.str() + "}\n"; }

 private:
  void sep() {
    if (first_)
      first_ = false;
    else
      out_ << ", ";
  }
  static std::string escape(const std::string& s) {
    std::string r;
    for (char c : s) {
      if (c == '"' || c == '\\') r += '\\';
      r += c;
    }
    return r;
  }
  std::ostringstream out_;
  bool first_ = true;
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path);
  f << content;
  if (!f) throw ValidationError("write failed for " + path);
}

// ---------- CSV ----------

inline std::string profile_csv(const RadialGrid& g, const std::vector<double>& u) {
  detail::check_shape(g, u.size());
  std::string s = "r,value\n";
  for (int i = 0; i < g.interior(); ++i)
    s += fmt17(g.r[i]) + "," + fmt17(u[i]) + "\n";
  return s;
}

// Reads a two-column r,value CSV produced by profile_csv; the r column must
// match the grid nodes.
inline std::vector<double> read_profile_csv(const std::string& path,
                                            const RadialGrid& g) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read profile " + path);
  std::string line;
  if (!std::getline(f, line)) throw ValidationError("empty profile " + path);
  std::vector<double> u;
  u.reserve(g.interior());
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ValidationError("malformed profile row in " + path);
    const double r = std::strtod(line.c_str(), nullptr);
    const double v = std::strtod(line.c_str() + comma + 1, nullptr);
    const std::size_t i = u.size();
    if (i >= static_cast<std::size_t>(g.interior()))
      throw ValidationError("profile " + path + " has more rows than the grid");
    if (std::abs(r - g.r[i]) > 1e-9 * g.r_max)
      throw ValidationError("profile " + path + " nodes do not match the grid");
    u.push_back(v);
  }
  if (u.size() != static_cast<std::size_t>(g.interior()))
    throw ValidationError("profile " + path + " has fewer rows than the grid");
  return u;
}

inline std::string scan_csv(const RhoScan& scan) {
  std::string s = "rho,I,lambda,verdict\n";
  for (std::size_t i = 0; i < scan.rho_values.size(); ++i)
    s += fmt17(scan.rho_values[i]) + "," + fmt17(scan.i_values[i]) + "," +
         fmt17(scan.lambda_values[i]) + "," + verdict_name(scan.verdicts[i]) + "\n";
  return s;
}

inline std::string trajectory_csv_header() { return "t,r,re,im\n"; }

inline void append_trajectory_rows(std::string& csv, const RadialGrid& g, double t,
                                   const std::vector<std::complex<double>>& psi) {
  for (int i = 0; i < g.interior(); ++i)
    csv += fmt17(t) + "," + fmt17(g.r[i]) + "," + fmt17(psi[i].real()) + "," +
           fmt17(psi[i].imag()) + "\n";
}

inline std::string stability_series_csv(const std::vector<double>& deltas,
                                        const std::vector<StabilityResult>& results) {
  std::string s = "delta,t,mass,energy,orbit_distance\n";
  for (std::size_t k = 0; k < results.size(); ++k)
    for (std::size_t i = 0; i < results[k].times.size(); ++i)
      s += fmt17(deltas[k]) + "," + fmt17(results[k].times[i]) + "," +
           fmt17(results[k].mass_series[i]) + "," + fmt17(results[k].energy_series[i]) +
           "," + fmt17(results[k].orbit_distance_series[i]) + "\n";
  return s;
}

// ---------- JSON reports ----------

inline std::string potential_json_fragment(const Potential& pot) {
  JsonWriter w;
  switch (pot.family) {
    case Family::PowerSum: {
      w.field("family", "power_sum");
      std::string terms = "[";
      for (std::size_t i = 0; i < pot.coefficients.size(); ++i) {
        if (i) terms += ", ";
        terms += "[" + fmt17(pot.coefficients[i].first) + ", " +
                 fmt17(pot.coefficients[i].second) + "]";
      }
      terms += "]";
      w.field_raw("terms", terms);
      break;
    }
    case Family::Rational:
      w.field("family", "rational").field("q", pot.q).field("p", pot.p);
      break;
    case Family::PurePower:
      w.field("family", "pure_power")
          .field("sign", pot.power_sign)
          .field("exponent", pot.power_exponent);
      break;
    case Family::Zero:
      w.field("family", "zero");
      break;
  }
  w.field("dimension", pot.dim);
  std::string s = w.str();
  s.pop_back();  // drop trailing newline for embedding
  return s;
}

inline std::string check_report_json(const Potential& pot, const HypothesisReport& r) {
  JsonWriter w;
  w.field("schema", kSchemaVersion)
      .field_raw("potential", potential_json_fragment(pot))
      .field("fp_holds", r.fp_holds)
      .field("fp_q", r.fp_q)
      .field("fp_p", r.fp_p)
      .field("fp_c1", r.fp_c1)
      .field("fp_c2", r.fp_c2)
      .field("f0_holds", r.f0_holds)
      .field("f0_c1", r.f0_c1)
      .field("f0_c2", r.f0_c2)
      .field("f0_gamma", r.f0_gamma)
      .field("f1_holds", r.f1_holds)
      .field("f1_witness", r.f1_witness)
      .field("f2_holds", r.f2_holds)
      .field("f2_epsilon", r.f2_epsilon)
      .field("coercivity_exponent_ok", r.coercivity_exponent_ok)
      .field("nonexistence_holds", r.nonexistence_holds)
      .field("sample_min", r.sample_min)
      .field("sample_max", r.sample_max)
      .field("sample_count", r.sample_count);
  return w.str();
}

inline std::string diagnostics_json_fragment(const IdentityDiagnostics& d) {
  JsonWriter w;
  w.field("j_value", d.j_value)
      .field("mass", d.mass)
      .field("lambda_rayleigh", d.lambda_rayleigh)
      .field("lambda_ar", d.lambda_ar)
      .field("pde_residual", d.pde_residual)
      .field("pohozaev_residual", d.pohozaev_residual)
      .field("derrick_value", d.derrick_value);
  std::string gn = "[";
  for (std::size_t i = 0; i < d.gn_quotients.size(); ++i) {
    if (i) gn += ", ";
    gn += "[" + fmt17(d.gn_quotients[i].first) + ", " +
          fmt17(d.gn_quotients[i].second) + "]";
  }
  gn += "]";
  w.field_raw("gn_quotients", gn);
  std::string s = w.str();
  s.pop_back();
  return s;
}

inline std::string ground_state_json(const GroundState& gs) {
  JsonWriter w;
  w.field("schema", kSchemaVersion)
      .field("rho", gs.rho)
      .field("lambda", gs.lambda)
      .field("omega", gs.omega)
      .field("j_value", gs.diag.j_value)
      .field("verdict", verdict_name(gs.verdict))
      .field("converged", gs.converged)
      .field("iterations", gs.iterations)
      .field("pde_residual", gs.diag.pde_residual)
      .field("pohozaev_residual", gs.diag.pohozaev_residual)
      .field("derrick_value", gs.diag.derrick_value)
      .field_raw("diagnostics", diagnostics_json_fragment(gs.diag))
      .field("warning", gs.warning);
  return w.str();
}

inline std::string scan_json(const RhoScan& scan) {
  JsonWriter w;
  w.field("schema", kSchemaVersion)
      .field("rho_values", scan.rho_values)
      .field("i_values", scan.i_values)
      .field("lambda_values", scan.lambda_values);
  std::string verdicts = "[";
  for (std::size_t i = 0; i < scan.verdicts.size(); ++i) {
    if (i) verdicts += ", ";
    verdicts += std::string("\"") + verdict_name(scan.verdicts[i]) + "\"";
  }
  verdicts += "]";
  w.field_raw("verdicts", verdicts);
  if (scan.rho_bar_estimate)
    w.field("rho_bar_estimate", *scan.rho_bar_estimate);
  else
    w.field_null("rho_bar_estimate");
  std::string checks = "[";
  for (std::size_t i = 0; i < scan.subadditivity_checks.size(); ++i) {
    const auto& c = scan.subadditivity_checks[i];
    if (i) checks += ", ";
    JsonWriter cw;
    cw.field("theta", c.theta)
        .field("rho", c.rho)
        .field("lhs", c.lhs)
        .field("rhs", c.rhs)
        .field("holds", c.holds);
    std::string cs = cw.str();
    cs.pop_back();
    checks += cs;
  }
  checks += "]";
  w.field_raw("subadditivity_checks", checks);
  return w.str();
}

inline std::string identities_json(const IdentityDiagnostics& d) {
  JsonWriter w;
  w.field("schema", kSchemaVersion).field_raw("diagnostics", diagnostics_json_fragment(d));
  return w.str();
}

inline std::string stability_json(const std::vector<double>& deltas,
                                  const std::vector<StabilityResult>& results) {
  JsonWriter w;
  w.field("schema", kSchemaVersion);
  std::string arr = "[";
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (k) arr += ", ";
    JsonWriter rw;
    rw.field("delta", deltas[k])
        .field("delta0", results[k].delta0)
        .field("max_excursion", results[k].max_excursion)
        .field("samples", static_cast<int>(results[k].times.size()))
        .field("final_orbit_distance", results[k].orbit_distance_series.back())
        .field("mass_initial", results[k].mass_series.front())
        .field("mass_final", results[k].mass_series.back())
        .field("energy_initial", results[k].energy_series.front())
        .field("energy_final", results[k].energy_series.back());
    std::string rs = rw.str();
    rs.pop_back();
    arr += rs;
  }
  arr += "]";
  w.field_raw("runs", arr);
  return w.str();
}

inline std::string evolution_json(const RadialGrid& g, const Trajectory& traj,
                                  double mass0, double mass1, double e0, double e1) {
  JsonWriter w;
  w.field("schema", kSchemaVersion)
      .field("snapshots", static_cast<int>(traj.times.size()))
      .field("t_final", traj.times.back())
      .field("nodes", g.interior())
      .field("mass_initial", mass0)
      .field("mass_final", mass1)
      .field("energy_initial", e0)
      .field("energy_final", e1);
  return w.str();
}

}  // namespace radnls

#endif  // RADNLS_IO_HPP
