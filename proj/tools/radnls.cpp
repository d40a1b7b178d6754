// Command-line driver for the radial NLS ground-state library.
//
// Subcommands:
//   check      certify structural hypotheses on the nonlinearity
//   minimize   run the constrained gradient flow and report the minimizer
//   scan       sweep the constraint mass and report the infimum curve
//   identities evaluate variational identities on a stored profile
//   evolve     propagate an initial state under the focusing dynamics
//   stability  perturb the minimizer and track the orbital distance
//
// Exit codes: 0 success, 2 invalid configuration, 3 flow did not converge
// (with --require-converged or where convergence is required), 4 evolution
// aborted (boundary contamination or nonfinite state).

#include <complex>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "radnls/radnls.hpp"

namespace {

namespace fs = std::filesystem;
using namespace radnls;

struct CommonArgs {
  std::string config_path;
  std::string output_dir;  // overrides [output] directory when nonempty
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "configuration file (INI)")
      ->required();
  cmd->add_option("-o,--output-dir", args.output_dir,
                  "directory for report files (overrides config)");
  cmd->add_flag("-q,--quiet", args.quiet, "suppress progress output");
}

fs::path resolve_output_dir(const RunConfig& cfg, const CommonArgs& args) {
  fs::path dir = args.output_dir.empty() ? fs::path(cfg.output_dir)
                                         : fs::path(args.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir.string());
  return dir;
}

RunConfig load(const CommonArgs& args) { return load_config_file(args.config_path); }

std::vector<double> load_init_values(const RunConfig& cfg, const RadialGrid& g) {
  if (cfg.flow.init.kind != InitProfile::Kind::Field) return {};
  if (cfg.init_file.empty())
    throw ValidationError("flow.init file path is empty");
  return read_profile_csv(cfg.init_file, g);
}

GroundState run_minimize(const RunConfig& cfg, const RadialGrid& g, bool quiet) {
  FlowConfig flow = cfg.flow;
  if (flow.init.kind == InitProfile::Kind::Field)
    flow.init.values = load_init_values(cfg, g);
  GroundState gs = minimize_on_sphere(g, cfg.potential, cfg.rho, flow);
  if (!quiet) {
    std::cout << "verdict=" << verdict_name(gs.verdict) << " iterations=" << gs.iterations
              << " J=" << fmt17(gs.diag.j_value) << " lambda=" << fmt17(gs.lambda)
              << " residual=" << fmt17(gs.diag.pde_residual) << "\n";
    if (!gs.warning.empty()) std::cout << "warning: " << gs.warning << "\n";
  }
  return gs;
}

int cmd_check(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const HypothesisReport report =
      check_hypotheses(cfg.potential, cfg.check_s_max, cfg.check_samples);
  const fs::path dir = resolve_output_dir(cfg, args);
  write_text_file((dir / "check.json").string(), check_report_json(cfg.potential, report));
  if (!args.quiet)
    std::cout << "fp=" << report.fp_holds << " f0=" << report.f0_holds
              << " f1=" << report.f1_holds << " f2=" << report.f2_holds
              << " coercive=" << report.coercivity_exponent_ok
              << " nonexistence=" << report.nonexistence_holds << "\n";
  return 0;
}

int cmd_minimize(const CommonArgs& args, bool require_converged) {
  const RunConfig cfg = load(args);
  const RadialGrid g = build_grid(cfg.dimension, cfg.r_max, cfg.cells);
  const GroundState gs = run_minimize(cfg, g, args.quiet);
  const fs::path dir = resolve_output_dir(cfg, args);
  write_text_file((dir / "ground_state.json").string(), ground_state_json(gs));
  write_text_file((dir / "ground_state_profile.csv").string(),
                  profile_csv(g, gs.u.values));
  if (require_converged && !gs.converged) {
    std::cerr << "error: not-converged: flow verdict " << verdict_name(gs.verdict)
              << " after " << gs.iterations << " iterations\n";
    return 3;
  }
  return 0;
}

int cmd_scan(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  if (cfg.scan_rho_values.empty())
    throw ValidationError("scan.rho_values is required for the scan subcommand");
  const RadialGrid g = build_grid(cfg.dimension, cfg.r_max, cfg.cells);
  const RhoScan scan =
      scan_rho(g, cfg.potential, cfg.scan_rho_values, cfg.scan_thetas, cfg.flow);
  const fs::path dir = resolve_output_dir(cfg, args);
  write_text_file((dir / "rho_scan.csv").string(), scan_csv(scan));
  write_text_file((dir / "rho_scan.json").string(), scan_json(scan));
  if (!args.quiet) {
    for (std::size_t i = 0; i < scan.rho_values.size(); ++i)
      std::cout << "rho=" << fmt17(scan.rho_values[i]) << " I=" << fmt17(scan.i_values[i])
                << " verdict=" << verdict_name(scan.verdicts[i]) << "\n";
    if (scan.rho_bar_estimate)
      std::cout << "rho_bar=" << fmt17(*scan.rho_bar_estimate) << "\n";
  }
  return 0;
}

int cmd_identities(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  if (cfg.identities_profile.empty())
    throw ValidationError("identities.profile is required for the identities subcommand");
  const RadialGrid g = build_grid(cfg.dimension, cfg.r_max, cfg.cells);
  RadialField u = make_field(g);
  u.values = read_profile_csv(cfg.identities_profile, g);
  const IdentityDiagnostics d = diagnostics(g, cfg.potential, u.values);
  const fs::path dir = resolve_output_dir(cfg, args);
  write_text_file((dir / "identities.json").string(), identities_json(d));
  if (!args.quiet)
    std::cout << "J=" << fmt17(d.j_value) << " lambda=" << fmt17(d.lambda_rayleigh)
              << " pohozaev=" << fmt17(d.pohozaev_residual)
              << " derrick=" << fmt17(d.derrick_value) << "\n";
  return 0;
}

int cmd_evolve(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const RadialGrid g = build_grid(cfg.dimension, cfg.r_max, cfg.cells);

  ComplexField psi0 = make_complex_field(g);
  if (cfg.psi0_source == "file") {
    const auto u = read_profile_csv(cfg.psi0_file, g);
    for (int i = 0; i < g.interior(); ++i) psi0.values[i] = u[i];
  } else {
    const GroundState gs = run_minimize(cfg, g, args.quiet);
    if (!gs.converged) {
      std::cerr << "error: not-converged: evolve needs a converged minimizer (verdict "
                << verdict_name(gs.verdict) << ")\n";
      return 3;
    }
    for (int i = 0; i < g.interior(); ++i) psi0.values[i] = gs.u.values[i];
  }

  const fs::path dir = resolve_output_dir(cfg, args);
  std::string csv = trajectory_csv_header();
  auto sink = [&](double t, const std::vector<std::complex<double>>& psi) {
    append_trajectory_rows(csv, g, t, psi);
  };
  const double mass0 = mass_of(g, psi0.values);
  const double e0 = energy_of(g, cfg.potential, psi0.values);
  const Trajectory traj = evolve(g, cfg.potential, psi0.values, cfg.evolve, sink);
  const double mass1 = mass_of(g, traj.snapshots.back());
  const double e1 = energy_of(g, cfg.potential, traj.snapshots.back());
  write_text_file((dir / "trajectory.csv").string(), csv);
  write_text_file((dir / "evolution.json").string(),
                  evolution_json(g, traj, mass0, mass1, e0, e1));
  if (!args.quiet)
    std::cout << "snapshots=" << traj.times.size() << " mass_drift="
              << fmt17(std::abs(mass1 - mass0)) << " energy_drift="
              << fmt17(std::abs(e1 - e0)) << "\n";
  return 0;
}

int cmd_stability(const CommonArgs& args) {
  const RunConfig cfg = load(args);
  const RadialGrid g = build_grid(cfg.dimension, cfg.r_max, cfg.cells);
  const GroundState gs = run_minimize(cfg, g, args.quiet);
  if (!gs.converged) {
    std::cerr << "error: not-converged: stability needs a converged minimizer (verdict "
              << verdict_name(gs.verdict) << ")\n";
    return 3;
  }
  EvolutionConfig ecfg;
  ecfg.dt = cfg.stability_dt;
  ecfg.t_final = cfg.stability_t_final;
  ecfg.record_every = cfg.stability_record_every;
  ecfg.boundary_tol = cfg.evolve.boundary_tol;
  std::vector<StabilityResult> results;
  for (double delta : cfg.stability_deltas) {
    results.push_back(stability_experiment(g, cfg.potential, gs, delta, ecfg));
    if (!args.quiet)
      std::cout << "delta=" << fmt17(delta)
                << " delta0=" << fmt17(results.back().delta0)
                << " max_excursion=" << fmt17(results.back().max_excursion) << "\n";
  }
  const fs::path dir = resolve_output_dir(cfg, args);
  write_text_file((dir / "stability.json").string(),
                  stability_json(cfg.stability_deltas, results));
  write_text_file((dir / "stability_series.csv").string(),
                  stability_series_csv(cfg.stability_deltas, results));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial constrained minimization and NLS dynamics"};
  app.require_subcommand(1);

  CommonArgs check_args, min_args, scan_args, id_args, evolve_args, stab_args;
  bool require_converged = false;

  add_common(app.add_subcommand("check", "certify hypotheses on the nonlinearity"),
             check_args);
  CLI::App* min_cmd =
      app.add_subcommand("minimize", "run the constrained gradient flow");
  add_common(min_cmd, min_args);
  min_cmd->add_flag("--require-converged", require_converged,
                    "exit 3 unless the flow converged");
  add_common(app.add_subcommand("scan", "sweep the constraint mass"), scan_args);
  add_common(app.add_subcommand("identities", "evaluate identities on a profile"),
             id_args);
  add_common(app.add_subcommand("evolve", "propagate the focusing dynamics"),
             evolve_args);
  add_common(app.add_subcommand("stability", "perturbed-orbit experiment"), stab_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("check")) return cmd_check(check_args);
    if (app.got_subcommand("minimize")) return cmd_minimize(min_args, require_converged);
    if (app.got_subcommand("scan")) return cmd_scan(scan_args);
    if (app.got_subcommand("identities")) return cmd_identities(id_args);
    if (app.got_subcommand("evolve")) return cmd_evolve(evolve_args);
    if (app.got_subcommand("stability")) return cmd_stability(stab_args);
  } catch (const EvolutionAborted& e) {
    std::cerr << "error: evolution-aborted: " << e.what() << "\n";
    return 4;
  } catch (const ValidationError& e) {
    std::cerr << "error: invalid-config: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: invalid-config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
