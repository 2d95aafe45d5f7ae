#include "curvemag/cli/commands.hpp"

#include "curvemag/analytic.hpp"
#include "curvemag/cli/config.hpp"
#include "curvemag/dimension3d.hpp"
#include "curvemag/io.hpp"
#include "curvemag/optimizer.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace curvemag::cli {

namespace {

using nlohmann::json;

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output.dir) / name).string();
}

json metadata() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return {{"timestamp", buf}, {"threads", max_threads()}};
}

std::optional<DemagMatrix> make_demag(const RunConfig& cfg) {
  const auto q = make_cross_section(cfg);
  if (!q) return std::nullopt;
  return demag_matrix(*q, cfg.cross_section.panels, demag_units(cfg));
}

int cmd_frame(const RunConfig& cfg, std::ostream& out) {
  const Curve curve = make_curve(cfg);
  std::ostringstream csv;
  write_frame_csv(csv, curve);
  const std::string path = out_path(cfg, "frame.csv");
  write_file(path, csv.str());
  out << "wrote " << path << " (" << curve.nodes() << " rows)\n";
  return kOk;
}

int cmd_demag(const RunConfig& cfg, std::ostream& out) {
  const auto q = make_cross_section(cfg);
  if (!q) throw ConfigError("config key 'cross_section.kind': demag needs a cross-section");
  const DemagUnits units = demag_units(cfg);
  const int p = cfg.cross_section.panels;
  json table = json::array();
  std::vector<std::pair<int, Mat2>> levels;
  for (int panels : {p / 4, p / 2, p}) {
    if (panels < 64) continue;
    const Mat2 m = demag_matrix(*q, panels, units).m;
    levels.emplace_back(panels, m);
    table.push_back(json{{"panels", panels}, {"m", to_json(m)}});
  }
  const Mat2 m = levels.back().second;
  json doc = {{"units", units == DemagUnits::si ? "si" : "reduced"},
              {"panels", p},
              {"area", q->area()},
              {"m", to_json(m)},
              {"convergence", table},
              {"metadata", metadata()}};
  if (levels.size() >= 2) {
    const Mat2 coarse = levels[levels.size() - 2].second;
    doc["richardson"] = to_json(m + (m - coarse) / 3.0);
  }
  const std::string path = out_path(cfg, "demag.json");
  write_file(path, doc.dump(2) + "\n");
  out << doc.dump(2) << "\n";
  return kOk;
}

DirectorField initial(const RunConfig& cfg, const Curve& curve, const BoundaryCondition& bc) {
  MinimizeOptions opts = cfg.minimize.options;
  if (opts.init == InitKind::custom) {
    const FieldSamples f = read_field_csv(cfg.minimize.file);
    if (static_cast<int>(f.v.size()) != curve.nodes()) {
      throw ConfigError("config key 'minimize.file': " + std::to_string(f.v.size()) + " rows but the grid has " +
                        std::to_string(curve.nodes()) + " nodes");
    }
    opts.custom = f.v;
  }
  return initial_field(curve, bc, opts);
}

int cmd_minimize(const RunConfig& cfg, std::ostream& out) {
  const Curve curve = make_curve(cfg);
  const PerturbationModel model = make_model(cfg);
  const auto demag = make_demag(cfg);
  const ReducedEnergy energy(curve, model, demag);
  const BoundaryCondition bc = make_bc(cfg, curve);
  auto [field, rep] = minimize(initial(cfg, curve, bc), energy, cfg.minimize.options);

  const NormalizedEnergy norm = energy_normalization(rep.energy, model, field, curve);
  json doc = {{"energy", to_json(rep.energy)},
              {"energy_normalization", {{"limit", norm.limit}, {"exchange_convention", norm.exchange_convention}}},
              {"iterations", rep.iterations},
              {"gradient_norm", rep.gradient_norm},
              {"converged", rep.converged},
              {"line_search_failed", rep.line_search_failed},
              {"history_length", rep.history.size()},
              {"initial_energy", rep.history.front()},
              {"metadata", metadata()}};
  if (demag) doc["demag_m"] = to_json(demag->m);
  if (curve.kind() == CurveKind::line && bc.kind == BoundaryKind::pinned && demag) {
    const double q_tilde = 0.25 * (demag->m(0, 0) + demag->m(1, 1));
    try {
      const WallFit fit = fit_wall_rate(field, curve, q_tilde);
      doc["wall"] = {{"q_tilde", q_tilde},
                     {"analytic_energy", wall_profile(model.kappa(), q_tilde).energy()},
                     {"fitted_rate", fit.lambda},
                     {"first_integral_rate", fit.first_integral_rate},
                     {"reference_rate", fit.reference_rate},
                     {"center", fit.center}};
    } catch (const NumericalError&) {
      doc["wall"] = nullptr;
    }
  }
  std::ostringstream csv;
  write_field_csv(csv, curve, field);
  write_file(out_path(cfg, "field.csv"), csv.str());
  write_file(out_path(cfg, "report.json"), doc.dump(2) + "\n");
  if (cfg.output.svg) write_file(out_path(cfg, "plot.svg"), field_svg(curve, field, "minimized field"));
  out << "energy " << rep.energy.total << " iterations " << rep.iterations << " gradient " << rep.gradient_norm
      << (rep.converged ? " converged" : " not converged") << "\n";
  return kOk;
}

FieldFactory gamma_field(const RunConfig& cfg) {
  const std::string kind = cfg.gamma.field;
  if (kind == "constant_minimizer") {
    if (cfg.curve.kind != "ring" || cfg.perturbation.kind != "dmi") {
      throw ConfigError("config key 'gamma.field': constant_minimizer needs a ring and a dmi perturbation");
    }
    const double r = cfg.curve.radius, k = cfg.perturbation.kappa;
    const int sign = cfg.gamma.sign;
    return [r, k, sign](const Curve& c) { return ring_family(ring_constant_minimizer(r, k, sign), c); };
  }
  if (kind == "wall") {
    if (cfg.curve.kind != "line") throw ConfigError("config key 'gamma.field': wall needs a line");
    const double k = cfg.perturbation.kappa, q = cfg.analytic.q_tilde;
    return [k, q](const Curve& c) { return wall_field(k, q, c).field; };
  }
  const Vec3 v = cfg.minimize.options.constant_value;
  return [v, cfg](const Curve& c) { return DirectorField(std::vector<Vec3>(c.nodes(), v), make_bc(cfg, c)); };
}

int cmd_gamma(const RunConfig& cfg, std::ostream& out) {
  const auto q = make_cross_section(cfg);
  if (!q) throw ConfigError("config key 'cross_section.kind': the study needs a cross-section");
  const PerturbationModel model = make_model(cfg);
  const auto rows = gamma_convergence_study([&](int n) { return make_curve(cfg, n); }, gamma_field(cfg), model, *q,
                                            cfg.gamma.epsilons, cfg.gamma.options);
  std::ostringstream csv;
  write_gamma_csv(csv, rows);
  write_file(out_path(cfg, "gamma.csv"), csv.str());
  json slopes = json::array();
  for (std::size_t k = 1; k < rows.size(); ++k) {
    slopes.push_back(std::log(rows[k - 1].gap / rows[k].gap) / std::log(rows[k - 1].epsilon / rows[k].epsilon));
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < rows.size(); ++k) decreasing = decreasing && rows[k].gap < rows[k - 1].gap;
  json doc = {{"rows", json::array()}, {"observed_slopes", slopes}, {"gap_decreasing", decreasing},
              {"metadata", metadata()}};
  for (const auto& r : rows) {
    doc["rows"].push_back(
        json{{"epsilon", r.epsilon}, {"segments", r.segments}, {"e3d", r.e3d}, {"e1d", r.e1d}, {"gap", r.gap}});
  }
  write_file(out_path(cfg, "gamma.json"), doc.dump(2) + "\n");
  out << csv.str();
  return kOk;
}

int cmd_analytic(const RunConfig& cfg, std::ostream& out) {
  const auto& a = cfg.analytic;
  const Curve curve = make_curve(cfg);
  const PerturbationModel model = make_model(cfg);
  const double kappa = cfg.perturbation.kappa;
  json params = {{"solution", a.solution}};
  std::optional<DirectorField> field;
  if (a.solution == "wall") {
    WallField w = wall_field(kappa, a.q_tilde, curve);
    params["lambda"] = w.profile.lambda;
    params["q_tilde"] = a.q_tilde;
    params["analytic_energy"] = w.energy;
    params["reference_rate"] = 1.0 / std::sqrt(4.0 * kPi);
    field = std::move(w.field);
  } else if (a.solution == "ring_family" || a.solution == "ring_constant") {
    RingSolution s = a.solution == "ring_constant" ? ring_constant_minimizer(cfg.curve.radius, kappa, a.sign)
                                                   : RingSolution{cfg.curve.radius, kappa, a.a, a.b, a.phi0};
    params["a"] = s.a;
    params["b"] = s.b;
    params["phi0"] = s.phi0;
    params["omega"] = s.omega();
    params["periodic"] = s.periodic();
    field = ring_family(s, curve, a.force);
  } else if (a.solution == "ring_demag") {
    RingDemagSolution s = ring_demag_solution(curve, kappa, a.sign);
    params["gamma"] = s.gamma;
    field = std::move(s.field);
  } else {
    params["n"] = a.n;
    params["phi0"] = a.phi0;
    field = ring_planar_spiral(curve, kappa, a.n, a.phi0);
  }
  const auto demag = make_demag(cfg);
  const ReducedEnergy energy(curve, model, demag);
  std::vector<Vec3> g;
  const EnergyBreakdown e = energy.energy_and_gradient(*field, g);
  params["energy"] = to_json(e);
  params["gradient_norm"] = sup_norm(g);
  params["metadata"] = metadata();
  std::ostringstream csv;
  write_field_csv(csv, curve, *field);
  write_file(out_path(cfg, "analytic.csv"), csv.str());
  write_file(out_path(cfg, "analytic.json"), params.dump(2) + "\n");
  if (cfg.output.svg) write_file(out_path(cfg, "analytic.svg"), field_svg(curve, *field, a.solution));
  out << params.dump(2) << "\n";
  return kOk;
}

}  // namespace

int run_cli(int argc, char** argv, char** envp, std::ostream& out, std::ostream& err) {
  CLI::App app{"curvemag: thin curved magnetic wires in the thin-tube limit"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--seed", seed, "random seed (overrides minimize.seed)");
  app.add_option("--threads", threads, "OpenMP threads")->check(CLI::NonNegativeNumber);
  std::string chosen;
  for (const char* name : {"frame", "demag", "minimize", "gamma", "analytic"}) {
    static const std::map<std::string, std::string> help = {
        {"frame", "write the sampled Frenet frame"},
        {"demag", "shape anisotropy matrix of the cross-section"},
        {"minimize", "minimize the thin-wire energy"},
        {"gamma", "3D-to-1D convergence study"},
        {"analytic", "sample a closed-form solution"}};
    app.add_subcommand(name, help.at(name))->fallthrough()->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    RawConfig raw = config_path.empty() ? RawConfig{} : read_ini_file(config_path);
    for (const auto& [k, v] : env_overrides(envp)) raw[k] = v;
    RunConfig cfg = build_config(raw);
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    if (seed) cfg.minimize.options.seed = *seed;
    set_num_threads(threads);
    if (chosen == "frame") return cmd_frame(cfg, out);
    if (chosen == "demag") return cmd_demag(cfg, out);
    if (chosen == "minimize") return cmd_minimize(cfg, out);
    if (chosen == "gamma") return cmd_gamma(cfg, out);
    return cmd_analytic(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace curvemag::cli
