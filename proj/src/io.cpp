#include "spintop/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>

#include "spintop/errors.hpp"

namespace spintop::io {
namespace {

double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

const json& field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing key '" + key + "'");
  return *it;
}

double num_field(const json& obj, const char* key, const std::string& where) {
  return as_double(field(obj, key, where), where + "." + key);
}

double num_or(const json& obj, const char* key, double fallback, const std::string& where) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_double(*it, where + "." + key);
}

int int_or(const json& obj, const char* key, int fallback, const std::string& where) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_int(*it, where + "." + key);
}

FourVector vec4_field(const json& obj, const char* key, const std::string& where) {
  const json& a = field(obj, key, where);
  if (!a.is_array() || a.size() != 4)
    throw ConfigError(where + "." + key + ": expected an array of 4 numbers");
  FourVector v;
  for (int i = 0; i < 4; ++i) v[i] = as_double(a[static_cast<std::size_t>(i)], where + "." + key);
  return v;
}

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

}  // namespace

json load_config(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
}

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  expect_object(obj, where);
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

ModelU model_from_json(const json& j) {
  expect_object(j, "model");
  const json& fam = field(j, "family", "model");
  if (!fam.is_string()) throw ConfigError("model.family: expected a string");
  const std::string f = fam.get<std::string>();
  if (f == "generic") {
    require_keys(j, {"family", "coeff"}, "model");
    const json& c = field(j, "coeff", "model");
    if (!c.is_array() || c.empty())
      throw ConfigError("model.coeff: expected a nonempty array of rows");
    GenericPoly g;
    for (const json& row : c) {
      if (!row.is_array()) throw ConfigError("model.coeff: expected rows of numbers");
      std::vector<double> r;
      for (const json& v : row) r.push_back(as_double(v, "model.coeff"));
      g.coeff.push_back(std::move(r));
    }
    return ModelU(g);
  }
  if (f == "legendre") {
    require_keys(j, {"family", "epsilon", "sign"}, "model");
    FundamentalLegendre l;
    l.epsilon = int_or(j, "epsilon", 1, "model");
    l.sign = int_or(j, "sign", 1, "model");
    return ModelU(l);
  }
  if (f == "developable") {
    require_keys(j, {"family", "kappa", "sign"}, "model");
    FundamentalDevelopable d;
    d.kappa = num_or(j, "kappa", 0.0, "model");
    d.sign = int_or(j, "sign", 1, "model");
    return ModelU(d);
  }
  if (f == "rotator") {
    require_keys(j, {"family", "sign"}, "model");
    Rotator r;
    r.sign = int_or(j, "sign", 1, "model");
    return ModelU(r);
  }
  throw ConfigError("model.family: unknown family '" + f + "'");
}

GaugeSpec gauge_from_json(const json& j, const std::string& where) {
  expect_object(j, where);
  const json& ty = field(j, "type", where);
  if (!ty.is_string()) throw ConfigError(where + ".type: expected a string");
  const std::string t = ty.get<std::string>();
  if (t == "const") {
    require_keys(j, {"type", "c"}, where);
    return GaugeConst{num_field(j, "c", where)};
  }
  if (t == "polynomial") {
    require_keys(j, {"type", "coeff"}, where);
    const json& c = field(j, "coeff", where);
    if (!c.is_array()) throw ConfigError(where + ".coeff: expected an array");
    GaugePoly p;
    for (const json& v : c) p.coeff.push_back(as_double(v, where + ".coeff"));
    return p;
  }
  if (t == "sinusoid") {
    require_keys(j, {"type", "amplitude", "frequency", "phase", "offset"}, where);
    GaugeSinusoid s;
    s.amplitude = num_field(j, "amplitude", where);
    s.frequency = num_field(j, "frequency", where);
    s.phase = num_or(j, "phase", 0.0, where);
    s.offset = num_or(j, "offset", 0.0, where);
    return s;
  }
  throw ConfigError(where + ".type: unknown gauge type '" + t + "'");
}

PhasePoint phase_point_from_json(const json& j) {
  require_keys(j, {"x", "p", "k", "pi"}, "initial");
  PhasePoint pt;
  pt.x = vec4_field(j, "x", "initial");
  pt.p = vec4_field(j, "p", "initial");
  pt.k = vec4_field(j, "k", "initial");
  pt.pi = vec4_field(j, "pi", "initial");
  return pt;
}

ReducedState reduced_state_from_json(const json& j) {
  require_keys(j, {"q", "qdot"}, "state");
  ReducedState s;
  for (const char* key : {"q", "qdot"}) {
    const json& a = field(j, key, "state");
    if (!a.is_array() || a.size() != 6)
      throw ConfigError(std::string("state.") + key + ": expected an array of 6 numbers");
    auto& dst = (key[0] == 'q' && key[1] == '\0') ? s.q : s.qdot;
    for (int i = 0; i < 6; ++i)
      dst[static_cast<std::size_t>(i)] =
          as_double(a[static_cast<std::size_t>(i)], std::string("state.") + key);
  }
  return s;
}

StepPolicy step_policy_from_json(const json& j) {
  require_keys(j, {"h_abs", "h_rel", "rich_tol", "tau_rank", "q_min"}, "policy");
  StepPolicy p;
  p.h_abs = num_or(j, "h_abs", p.h_abs, "policy");
  p.h_rel = num_or(j, "h_rel", p.h_rel, "policy");
  p.rich_tol = num_or(j, "rich_tol", p.rich_tol, "policy");
  p.tau_rank = num_or(j, "tau_rank", p.tau_rank, "policy");
  p.q_min = num_or(j, "q_min", p.q_min, "policy");
  return p;
}

namespace {

void common_run_fields(const json& j, double* m, double* ell, Span* span, Tolerances* tol,
                       int* samples, const std::string& where) {
  *m = num_or(j, "m", 1.0, where);
  *ell = num_or(j, "ell", 1.0, where);
  const json& sp = field(j, "span", where);
  if (!sp.is_array() || sp.size() != 2)
    throw ConfigError(where + ".span: expected [tau0, tau1]");
  span->t0 = as_double(sp[0], where + ".span");
  span->t1 = as_double(sp[1], where + ".span");
  tol->rtol = num_or(j, "rtol", tol->rtol, where);
  tol->atol = num_or(j, "atol", tol->atol, where);
  *samples = int_or(j, "samples", *samples, where);
}

bool parse_initial(const json& j, PhasePoint* pt, const std::string& where) {
  const json& ini = field(j, "initial", where);
  if (ini.is_string()) {
    if (ini.get<std::string>() != "random")
      throw ConfigError(where + ".initial: expected an object or the string \"random\"");
    return true;
  }
  *pt = phase_point_from_json(ini);
  return false;
}

}  // namespace

IntegrateConfig integrate_config_from_json(const json& j) {
  require_keys(j, {"m", "ell", "initial", "gauge", "span", "rtol", "atol", "samples"},
               "integrate");
  IntegrateConfig c;
  common_run_fields(j, &c.m, &c.ell, &c.span, &c.tol, &c.samples, "integrate");
  c.random_initial = parse_initial(j, &c.initial, "integrate");
  const json& g = field(j, "gauge", "integrate");
  require_keys(g, {"c_t", "c_phi"}, "integrate.gauge");
  c.gauge.c_t = gauge_from_json(field(g, "c_t", "integrate.gauge"), "integrate.gauge.c_t");
  c.gauge.c_phi =
      gauge_from_json(field(g, "c_phi", "integrate.gauge"), "integrate.gauge.c_phi");
  return c;
}

TubeConfig tube_config_from_json(const json& j) {
  require_keys(j, {"m", "ell", "initial", "c_t", "c_phis", "span", "rtol", "atol", "samples"},
               "tube");
  TubeConfig c;
  common_run_fields(j, &c.m, &c.ell, &c.span, &c.tol, &c.samples, "tube");
  c.random_initial = parse_initial(j, &c.initial, "tube");
  c.c_t = gauge_from_json(field(j, "c_t", "tube"), "tube.c_t");
  const json& ph = field(j, "c_phis", "tube");
  if (!ph.is_array() || ph.empty())
    throw ConfigError("tube.c_phis: expected a nonempty array of gauge specs");
  for (std::size_t i = 0; i < ph.size(); ++i)
    c.c_phis.push_back(gauge_from_json(ph[i], "tube.c_phis[" + std::to_string(i) + "]"));
  return c;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr, double m, double ell) {
  os << "tau,t,x0,x1,x2,x3,p0,p1,p2,p3,k0,k1,k2,k3,pi0,pi1,pi2,pi3,"
        "res_pp,res_kk,res_kpi,res_pipi,res_ppi,res_kp,Psi,R_c,axis_distance\n";
  const ObservableSeries obs = observables(tr, m, ell);
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const Sample& s = tr.samples[i];
    const ObsSample& o = obs.rows[i];
    os << format_g17(s.tau) << ',' << format_g17(s.t);
    for (int c = 0; c < 4; ++c) os << ',' << format_g17(s.pt.x[c]);
    for (int c = 0; c < 4; ++c) os << ',' << format_g17(s.pt.p[c]);
    for (int c = 0; c < 4; ++c) os << ',' << format_g17(s.pt.k[c]);
    for (int c = 0; c < 4; ++c) os << ',' << format_g17(s.pt.pi[c]);
    for (int c = 0; c < 6; ++c) os << ',' << format_g17(s.residuals[static_cast<std::size_t>(c)]);
    os << ',' << format_g17(o.Psi);
    os << ',';
    if (o.has_rc) os << format_g17(o.R_c);
    os << ',' << format_g17(o.axis_distance) << '\n';
  }
}

void write_casimir_csv(std::ostream& os, const ModelU& mU, const std::vector<double>& xs,
                       const std::vector<double>& ys) {
  os << "x,y,C_M,C_J,E_C,jacobian,hessian_factor\n";
  for (const double x : xs)
    for (const double y : ys) {
      os << format_g17(x) << ',' << format_g17(y);
      try {
        const Jet2 jet = mU.eval(x, y);
        os << ',' << format_g17(casimir_mass(jet, x, y));
        os << ',' << format_g17(casimir_spin(jet, x, y));
        os << ',' << format_g17(e_c(jet, x, y));
        os << ',' << format_g17(jacobian_cmcj(mU, x, y));
        os << ',' << format_g17(closed_form_hessian_factor(jet, x, y));
      } catch (const DomainError&) {
        os << ",,,,,";
      } catch (const ChartError&) {
        os << ",,,,,";
      }
      os << '\n';
    }
}

}  // namespace spintop::io
