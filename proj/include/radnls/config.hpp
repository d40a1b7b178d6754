#ifndef RADNLS_CONFIG_HPP
#define RADNLS_CONFIG_HPP

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "radnls/dynamics.hpp"
#include "radnls/errors.hpp"
#include "radnls/grid.hpp"
#include "radnls/minimize.hpp"
#include "radnls/potential.hpp"

namespace radnls {

// INI-style config: [section] headers, key = value lines, # or ; comments.
class IniFile {
 public:
  static IniFile parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot read config " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
  }

  static IniFile parse(const std::string& text, const std::string& name = "<config>") {
    IniFile ini;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find_first_of("#;");
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ValidationError(name + ":" + std::to_string(lineno) +
                                ": malformed section header");
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ValidationError(name + ":" + std::to_string(lineno) +
                              ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty())
        throw ValidationError(name + ":" + std::to_string(lineno) + ": empty key");
      ini.values_[section + "." + key] = value;
    }
    return ini;
  }

  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  double get_double(const std::string& section, const std::string& key,
                    double fallback) const {
    const auto v = get(section, key);
    return v ? parse_double(*v, section + "." + key) : fallback;
  }

  int get_int(const std::string& section, const std::string& key, int fallback) const {
    const auto v = get(section, key);
    if (!v) return fallback;
    const double d = parse_double(*v, section + "." + key);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
      throw ValidationError(section + "." + key + " must be an integer");
    return i;
  }

  static double parse_double(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
      throw ValidationError(where + ": cannot parse number '" + s + "'");
    return v;
  }

  static std::vector<double> parse_list(const std::string& s, const std::string& where) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      out.push_back(parse_double(item, where));
    }
    if (out.empty()) throw ValidationError(where + ": empty list");
    return out;
  }

  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

 private:
  std::map<std::string, std::string> values_;
};

struct RunConfig {
  Potential potential = Potential::zero(3);
  int dimension = 3;
  double r_max = 20.0;
  int cells = 400;

  double rho = 1.0;
  FlowConfig flow;
  std::string init_file;  // set when flow init comes from a file

  std::vector<double> scan_rho_values;
  std::vector<double> scan_thetas{2.0};

  double check_s_max = 10.0;
  int check_samples = 10000;

  EvolutionConfig evolve;
  std::string psi0_source = "ground_state";  // or "file"
  std::string psi0_file;

  std::vector<double> stability_deltas{1e-3, 1e-2};
  double stability_dt = 1e-3;
  double stability_t_final = 20.0;
  int stability_record_every = 10;

  std::string identities_profile;

  std::string output_dir = ".";
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(IniFile::trim(item));
  return out;
}

inline Potential parse_potential(const IniFile& ini, int dim) {
  const auto family = ini.get("potential", "family");
  if (!family) throw ValidationError("potential.family is required");
  if (*family == "zero") return Potential::zero(dim);
  if (*family == "power_sum") {
    const auto terms = ini.get("potential", "terms");
    if (!terms) throw ValidationError("potential.terms is required for power_sum");
    std::vector<std::pair<double, double>> cp;
    for (const auto& item : split(*terms, ',')) {
      if (item.empty()) continue;
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        throw ValidationError("potential.terms entries must look like coeff:exponent");
      cp.emplace_back(IniFile::parse_double(item.substr(0, colon), "potential.terms"),
                      IniFile::parse_double(item.substr(colon + 1), "potential.terms"));
    }
    return Potential::power_sum(cp, dim);
  }
  if (*family == "rational") {
    const auto q = ini.get("potential", "q");
    const auto p = ini.get("potential", "p");
    if (!q || !p) throw ValidationError("potential.q and potential.p are required");
    return Potential::rational(IniFile::parse_double(*q, "potential.q"),
                               IniFile::parse_double(*p, "potential.p"), dim);
  }
  if (*family == "pure_power") {
    const auto sign = ini.get("potential", "sign");
    const auto expo = ini.get("potential", "exponent");
    if (!sign || !expo)
      throw ValidationError("potential.sign and potential.exponent are required");
    return Potential::pure_power(IniFile::parse_double(*sign, "potential.sign"),
                                 IniFile::parse_double(*expo, "potential.exponent"), dim);
  }
  throw ValidationError("unknown potential.family '" + *family + "'");
}

inline InitProfile parse_init(const std::string& spec, std::string& file_out) {
  InitProfile init;
  const auto parts = split(spec, ':');
  if (parts.empty() || parts[0].empty())
    throw ValidationError("flow.init: empty specification");
  if (parts[0] == "gaussian") {
    init.kind = InitProfile::Kind::Gaussian;
    if (parts.size() > 1)
      init.width = IniFile::parse_double(parts[1], "flow.init gaussian width");
    if (parts.size() > 2) throw ValidationError("flow.init: too many gaussian fields");
    return init;
  }
  if (parts[0] == "plateau") {
    if (parts.size() != 3)
      throw ValidationError("flow.init: plateau needs plateau:height:radius");
    init.kind = InitProfile::Kind::Plateau;
    init.s0 = IniFile::parse_double(parts[1], "flow.init plateau height");
    init.R = IniFile::parse_double(parts[2], "flow.init plateau radius");
    return init;
  }
  if (parts[0] == "file") {
    if (parts.size() < 2) throw ValidationError("flow.init: file needs file:PATH");
    init.kind = InitProfile::Kind::Field;
    // Paths may contain ':'; rejoin the remainder.
    file_out = spec.substr(spec.find(':') + 1);
    return init;
  }
  throw ValidationError("flow.init: unknown kind '" + parts[0] + "'");
}

}  // namespace detail

inline RunConfig load_config(const IniFile& ini) {
  RunConfig cfg;

  cfg.dimension = ini.get_int("grid", "dimension", 3);
  cfg.r_max = ini.get_double("grid", "r_max", 20.0);
  cfg.cells = ini.get_int("grid", "cells", 400);

  cfg.potential = detail::parse_potential(ini, cfg.dimension);

  cfg.rho = ini.get_double("flow", "rho", 1.0);
  if (!(cfg.rho > 0.0)) throw ValidationError("flow.rho must be positive");
  cfg.flow.initial_step = ini.get_double("flow", "initial_step", 0.0);
  cfg.flow.backtrack_factor = ini.get_double("flow", "backtrack_factor", 0.5);
  cfg.flow.residual_tol = ini.get_double("flow", "residual_tol", 1e-8);
  cfg.flow.max_iters = ini.get_int("flow", "max_iters", 200000);
  cfg.flow.rearrange_every = ini.get_int("flow", "rearrange_every", 50);
  cfg.flow.check_every = ini.get_int("flow", "check_every", 50);
  cfg.flow.omega_shift = ini.get_double("flow", "omega_shift", 0.0);
  if (const auto init = ini.get("flow", "init"))
    cfg.flow.init = detail::parse_init(*init, cfg.init_file);
  cfg.flow.validate();

  if (const auto rv = ini.get("scan", "rho_values"))
    cfg.scan_rho_values = IniFile::parse_list(*rv, "scan.rho_values");
  if (const auto th = ini.get("scan", "thetas"))
    cfg.scan_thetas = IniFile::parse_list(*th, "scan.thetas");

  cfg.check_s_max = ini.get_double("check", "s_max", 10.0);
  cfg.check_samples = ini.get_int("check", "samples", 10000);
  if (!(cfg.check_s_max > 0.0)) throw ValidationError("check.s_max must be positive");
  if (cfg.check_samples < 10) throw ValidationError("check.samples must be >= 10");

  cfg.evolve.dt = ini.get_double("evolve", "dt", 1e-3);
  cfg.evolve.t_final = ini.get_double("evolve", "t_final", 1.0);
  cfg.evolve.record_every = ini.get_int("evolve", "record_every", 1);
  cfg.evolve.boundary_tol = ini.get_double("evolve", "boundary_tol", 1e-6);
  cfg.evolve.validate();
  if (const auto src = ini.get("evolve", "psi0")) {
    if (*src == "ground_state") {
      cfg.psi0_source = "ground_state";
    } else if (src->rfind("file:", 0) == 0) {
      cfg.psi0_source = "file";
      cfg.psi0_file = src->substr(5);
      if (cfg.psi0_file.empty()) throw ValidationError("evolve.psi0: file needs a path");
    } else {
      throw ValidationError("evolve.psi0 must be ground_state or file:PATH");
    }
  }

  if (const auto d = ini.get("stability", "deltas"))
    cfg.stability_deltas = IniFile::parse_list(*d, "stability.deltas");
  for (double d : cfg.stability_deltas)
    if (!(d >= 0.0)) throw ValidationError("stability.deltas must be nonnegative");
  cfg.stability_dt = ini.get_double("stability", "dt", 1e-3);
  cfg.stability_t_final = ini.get_double("stability", "t_final", 20.0);
  cfg.stability_record_every = ini.get_int("stability", "record_every", 10);
  if (!(cfg.stability_dt > 0.0)) throw ValidationError("stability.dt must be positive");
  if (!(cfg.stability_t_final > 0.0))
    throw ValidationError("stability.t_final must be positive");
  if (cfg.stability_record_every < 1)
    throw ValidationError("stability.record_every must be >= 1");

  if (const auto p = ini.get("identities", "profile")) cfg.identities_profile = *p;

  if (const auto od = ini.get("output", "directory")) cfg.output_dir = *od;

  // Grid arguments are validated eagerly so a bad config fails before any
  // compute starts.
  build_grid(cfg.dimension, cfg.r_max, cfg.cells);
  return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
  return load_config(IniFile::parse_file(path));
}

}  // namespace radnls

#endif  // RADNLS_CONFIG_HPP
