// spintop: command-line surface of the spinning-particle library.
//
// Subcommands: casimir | hessian | fundcheck | integrate | tube | spinor | dof.
// Every subcommand reads a JSON config (--config FILE, "-" for stdin), writes
// CSV or JSON to --out (stdout when omitted; tube requires --out DIR), and is
// deterministic for a fixed config and --seed.
//
// Exit codes: 0 ok, 1 runtime failure, 2 config/schema error, 3 domain or
// chart error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spintop/dynamics.hpp"
#include "spintop/errors.hpp"
#include "spintop/hessian.hpp"
#include "spintop/io.hpp"
#include "spintop/model.hpp"
#include "spintop/noether.hpp"
#include "spintop/sampling.hpp"
#include "spintop/spinor.hpp"

namespace {

using spintop::io::json;

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw spintop::Error("cannot open output file '" + out_path + "'");
  f << text;
}

std::vector<double> linspace_spec(const json& a, const std::string& where) {
  if (!a.is_array() || a.size() != 3)
    throw spintop::ConfigError(where + ": expected [lo, hi, n]");
  const double lo = a[0].get<double>();
  const double hi = a[1].get<double>();
  if (!a[2].is_number_integer()) throw spintop::ConfigError(where + ": n must be an integer");
  const int n = a[2].get<int>();
  if (n < 1) throw spintop::ConfigError(where + ": n must be >= 1");
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    v.push_back(n == 1 ? lo : lo + (hi - lo) * (static_cast<double>(i) / (n - 1)));
  return v;
}

json vec4_json(const spintop::FourVector& v) {
  return json::array({v[0], v[1], v[2], v[3]});
}

int run_casimir(const json& cfg, const std::string& out) {
  spintop::io::require_keys(cfg, {"model", "grid"}, "casimir");
  const spintop::ModelU m = spintop::io::model_from_json(cfg.at("model"));
  const json& grid = cfg.at("grid");
  spintop::io::require_keys(grid, {"x", "y"}, "casimir.grid");
  const auto xs = linspace_spec(grid.at("x"), "casimir.grid.x");
  const auto ys = linspace_spec(grid.at("y"), "casimir.grid.y");
  std::ostringstream ss;
  spintop::io::write_casimir_csv(ss, m, xs, ys);
  emit(out, ss.str());
  return 0;
}

int run_hessian(const json& cfg, const std::string& out) {
  spintop::io::require_keys(cfg, {"model", "state", "m", "ell", "policy"}, "hessian");
  const spintop::ModelU mu = spintop::io::model_from_json(cfg.at("model"));
  const spintop::ReducedState st = spintop::io::reduced_state_from_json(cfg.at("state"));
  const double m = cfg.contains("m") ? cfg.at("m").get<double>() : 1.0;
  const double ell = cfg.contains("ell") ? cfg.at("ell").get<double>() : 1.0;
  spintop::StepPolicy pol;
  if (cfg.contains("policy")) pol = spintop::io::step_policy_from_json(cfg.at("policy"));
  const spintop::HessianReport rep = spintop::hessian_matrix(mu, m, ell, st, pol);
  json o;
  o["family"] = mu.family();
  o["rank"] = rep.rank;
  o["det"] = rep.det;
  o["threshold"] = rep.threshold;
  o["singular_values"] = rep.singular_values;
  o["H"] = rep.H;
  emit(out, o.dump(2) + "\n");
  return 0;
}

int run_fundcheck(const json& cfg, std::uint64_t seed, const std::string& out) {
  spintop::io::require_keys(cfg, {"model", "n"}, "fundcheck");
  const spintop::ModelU mu = spintop::io::model_from_json(cfg.at("model"));
  if (!cfg.contains("n") || !cfg.at("n").is_number_integer())
    throw spintop::ConfigError("fundcheck.n: expected an integer");
  const int n = cfg.at("n").get<int>();
  const spintop::ResidualReport rep = spintop::fundamental_residuals(mu, n, seed);
  json o;
  o["family"] = mu.family();
  o["n"] = rep.n;
  o["transformed"] = rep.transformed;
  o["max_mass_residual"] = rep.max_mass_residual;
  o["max_spin_residual"] = rep.max_spin_residual;
  emit(out, o.dump(2) + "\n");
  return 0;
}

spintop::PhasePoint resolve_initial(bool random_initial, const spintop::PhasePoint& given,
                                    double m, double ell, std::uint64_t seed) {
  if (!random_initial) return given;
  spintop::Rng rng(seed);
  return spintop::random_surface_point(rng, m, ell);
}

int run_integrate(const json& cfg, std::uint64_t seed, const std::string& out) {
  const spintop::io::IntegrateConfig c = spintop::io::integrate_config_from_json(cfg);
  const spintop::PhasePoint pt =
      resolve_initial(c.random_initial, c.initial, c.m, c.ell, seed);
  const spintop::Trajectory tr =
      spintop::integrate(pt, c.gauge, c.m, c.ell, c.span, c.tol, c.samples);
  std::ostringstream ss;
  spintop::io::write_trajectory_csv(ss, tr, c.m, c.ell);
  emit(out, ss.str());
  return 0;
}

int run_tube(const json& cfg, std::uint64_t seed, const std::string& out) {
  if (out.empty()) throw spintop::ConfigError("tube: --out DIR is required");
  const spintop::io::TubeConfig c = spintop::io::tube_config_from_json(cfg);
  const spintop::PhasePoint pt =
      resolve_initial(c.random_initial, c.initial, c.m, c.ell, seed);
  std::vector<spintop::GaugeFunctions> gauges;
  gauges.reserve(c.c_phis.size());
  for (const spintop::GaugeSpec& phi : c.c_phis)
    gauges.push_back(spintop::GaugeFunctions{c.c_t, phi});
  const spintop::TubeResult res =
      spintop::tube_sample(pt, gauges, c.m, c.ell, c.span, c.tol, c.samples);

  std::filesystem::create_directories(out);
  for (std::size_t i = 0; i < res.members.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "member_%02zu.csv", i);
    std::ofstream f(std::filesystem::path(out) / name);
    if (!f) throw spintop::Error("cannot open output file in '" + out + "'");
    spintop::io::write_trajectory_csv(f, res.members[i], c.m, c.ell);
  }
  json o;
  o["members"] = res.members.size();
  o["distinct_worldlines"] = res.report.distinct_worldlines;
  o["max_separation"] = res.report.max_separation;
  o["min_separation"] = res.report.min_separation;
  o["separation_threshold"] = res.report.separation_threshold;
  o["axis_distance_max_dev"] = res.report.axis_distance_max_dev;
  std::ofstream f(std::filesystem::path(out) / "tube_report.json");
  if (!f) throw spintop::Error("cannot open output file in '" + out + "'");
  f << o.dump(2) << "\n";
  return 0;
}

int run_spinor(const json& cfg, const std::string& out) {
  spintop::io::require_keys(cfg, {"u", "lambda_samples"}, "spinor");
  const json& u = cfg.at("u");
  if (!u.is_array() || u.size() != 2)
    throw spintop::ConfigError("spinor.u: expected [[re0, im0], [re1, im1]]");
  double comp[2][2];
  for (int i = 0; i < 2; ++i) {
    const json& c = u[static_cast<std::size_t>(i)];
    if (!c.is_array() || c.size() != 2)
      throw spintop::ConfigError("spinor.u: expected [[re0, im0], [re1, im1]]");
    for (int r = 0; r < 2; ++r) {
      if (!c[static_cast<std::size_t>(r)].is_number())
        throw spintop::ConfigError("spinor.u: expected numbers");
      comp[i][r] = c[static_cast<std::size_t>(r)].get<double>();
    }
  }
  std::vector<double> lambdas = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  if (cfg.contains("lambda_samples")) {
    lambdas.clear();
    for (const json& v : cfg.at("lambda_samples")) lambdas.push_back(v.get<double>());
  }

  const spintop::Spinor sp{{comp[0][0], comp[0][1]}, {comp[1][0], comp[1][1]}};
  const spintop::NullTriad t = spintop::flag_from_spinor(sp);
  const auto flag = spintop::null_bivector_check(spintop::flag_bivector(sp));
  json o;
  o["k"] = vec4_json(t.k);
  o["a"] = vec4_json(t.a);
  o["b"] = vec4_json(t.b);
  o["triad_residual"] = spintop::triad_residual(t);
  o["flag_norm2"] = flag.first;
  o["flag_pseudo_invariant"] = flag.second;
  json sphere = json::array();
  for (const spintop::SpherePoint& pnt : spintop::riemann_sphere_data(t, lambdas)) {
    json row;
    row["family"] = std::string(1, pnt.family);
    row["lambda"] = pnt.lambda;
    row["dir"] = json::array({pnt.dir.x, pnt.dir.y, pnt.dir.z});
    sphere.push_back(row);
  }
  o["sphere"] = sphere;
  emit(out, o.dump(2) + "\n");
  return 0;
}

int run_dof(const json& cfg, const std::string& out) {
  spintop::io::require_keys(cfg, {"N_v", "N_I", "N_II", "single_relation"}, "dof");
  for (const char* key : {"N_v", "N_I", "N_II"})
    if (!cfg.contains(key) || !cfg.at(key).is_number_integer())
      throw spintop::ConfigError(std::string("dof.") + key + ": expected an integer");
  const bool single =
      cfg.contains("single_relation") ? cfg.at("single_relation").get<bool>() : false;
  const spintop::DofCount d = spintop::dof_count(
      cfg.at("N_v").get<int>(), cfg.at("N_I").get<int>(), cfg.at("N_II").get<int>(), single);
  json o;
  o["lagrangian"] = d.lagrangian;
  o["hamiltonian"] = d.hamiltonian;
  o["discrepancy"] = d.discrepancy;
  emit(out, o.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric models of relativistic spinning particles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;

  const char* names[] = {"casimir", "hessian", "fundcheck", "integrate",
                         "tube",    "spinor",  "dof"};
  const char* descs[] = {"Casimir closed forms on a model grid (CSV)",
                         "velocity Hessian report at a chart state (JSON)",
                         "fundamental-condition residual scan (JSON)",
                         "integrate one gauge choice (CSV)",
                         "integrate a family of gauges into a tube (CSVs + report)",
                         "null flag of a two-component spinor (JSON)",
                         "degree-of-freedom bookkeeping (JSON)"};
  for (int i = 0; i < 7; ++i) {
    CLI::App* sc = app.add_subcommand(names[i], descs[i]);
    sc->add_option("--config", config_path, "JSON config file; '-' reads stdin")->required();
    sc->add_option("--seed", seed, "random seed for sampling commands");
    sc->add_option("--out", out_path, "output file (directory for tube); stdout if omitted");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const json cfg = spintop::io::load_config(config_path);
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "casimir") return run_casimir(cfg, out_path);
    if (cmd == "hessian") return run_hessian(cfg, out_path);
    if (cmd == "fundcheck") return run_fundcheck(cfg, seed, out_path);
    if (cmd == "integrate") return run_integrate(cfg, seed, out_path);
    if (cmd == "tube") return run_tube(cfg, seed, out_path);
    if (cmd == "spinor") return run_spinor(cfg, out_path);
    if (cmd == "dof") return run_dof(cfg, out_path);
    return 2;
  } catch (const spintop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const spintop::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const spintop::ChartError& e) {
    std::cerr << "chart error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
