#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "spintop/dynamics.hpp"
#include "spintop/hessian.hpp"
#include "spintop/model.hpp"

// JSON config parsing and the CSV/JSON emitters shared by the command-line
// tool. Every parser rejects unknown keys so that config typos fail loudly
// rather than silently falling back to defaults.

namespace spintop::io {

using nlohmann::json;

/// Reads the whole file ("-" for stdin) and parses it; parse failures and
/// unreadable files throw ConfigError.
json load_config(const std::string& path);

/// Throws ConfigError naming the first key of `obj` not in `allowed`.
void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where);

ModelU model_from_json(const json& j);
GaugeSpec gauge_from_json(const json& j, const std::string& where);
PhasePoint phase_point_from_json(const json& j);
ReducedState reduced_state_from_json(const json& j);
StepPolicy step_policy_from_json(const json& j);

struct IntegrateConfig {
  double m = 1.0, ell = 1.0;
  bool random_initial = false;  // "initial": "random" draws from --seed
  PhasePoint initial{};
  GaugeFunctions gauge;
  Span span;
  Tolerances tol;
  int samples = 200;
};
IntegrateConfig integrate_config_from_json(const json& j);

struct TubeConfig {
  double m = 1.0, ell = 1.0;
  bool random_initial = false;
  PhasePoint initial{};
  GaugeSpec c_t;
  std::vector<GaugeSpec> c_phis;
  Span span;
  Tolerances tol;
  int samples = 200;
};
TubeConfig tube_config_from_json(const json& j);

/// Full round-trip precision ("%.17g").
std::string format_g17(double v);

/// Header row plus one data row per sample:
/// tau,t,x0..x3,p0..p3,k0..k3,pi0..pi3,res_pp,res_kk,res_kpi,res_pipi,
/// res_ppi,res_kp,Psi,R_c,axis_distance. R_c is empty where the transverse
/// speed vanishes.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr, double m, double ell);

/// Header row x,y,C_M,C_J,E_C,jacobian,hessian_factor; grid points outside
/// the model's domain keep their x,y cells and leave the rest empty.
void write_casimir_csv(std::ostream& os, const ModelU& mU, const std::vector<double>& xs,
                       const std::vector<double>& ys);

}  // namespace spintop::io
