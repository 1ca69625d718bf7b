#include <herglotz/derive.hpp>
#include <herglotz/dispersion.hpp>
#include <herglotz/fieldsim.hpp>
#include <herglotz/herglotz1d.hpp>
#include <herglotz/stationarity.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Run configuration. Precedence: defaults < config file < explicit flags
// (the config file is applied before CLI11 parses the command line, so flags
// overwrite only what the user actually passed).

struct RunConfig {
  std::string command;
  std::string preset;
  std::string problem_file;
  std::string out_dir;
  std::string format;
  std::uint64_t seed = 0;
  bool wide = false;

  // 1-D Herglotz run ("herglotz" block)
  struct {
    double x0 = 1.0, v0 = 0.0, S0 = 0.0;
    double span_a = 0.0, span_b = 2.0 * M_PI;
    int steps = 4096;
  } ode;

  // space-time grid ("grid" block)
  struct {
    int nx = 256, nt = 1024;
    double length = 1.0, tmax = 1.0;
    double xmin = -16.0, xmax = 16.0;
  } grid;

  // physics parameters ("params" block)
  struct {
    double mu = 1.0, tension = 1.0, gamma = 0.0;
    double gamma0 = 0.0, gamma1 = 0.0;
    double c = 1.0, m = 1.0, k = 1.0, hbar = 1.0;
    double sigma = 1.0, k0 = 0.0, center = 0.0;
  } params;

  std::string bc = "dirichlet";
  int mode = 1;
  std::string potential = "none";

  // stationarity test ("verify" block)
  struct {
    double eps = 1e-4, offset = 0.1;
    double bump_center = std::nan(""), bump_width = std::nan("");
    double bump_center_x = std::nan(""), bump_width_x = std::nan("");
    double bump_amp = 1.0;
  } verify;

  // dispersion inputs ("dispersion" block)
  struct {
    double gamma0 = 0.0, k = 1.0, c = 1.0;
  } disp;
};

[[noreturn]] void config_error(const std::string& msg) {
  throw herglotz::Error("cli.config", msg);
}

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      config_error("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void take(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

void apply_config(RunConfig& c, json j) {
  j.erase("command");
  j.erase("outputs");  // emitted manifests are themselves valid config files
  require_keys(j,
               {"preset", "problem", "out", "format", "seed", "wide", "herglotz", "grid",
                "params", "bc", "mode", "potential", "verify", "dispersion"},
               "config");
  take(j, "preset", c.preset);
  take(j, "problem", c.problem_file);
  take(j, "out", c.out_dir);
  take(j, "format", c.format);
  take(j, "seed", c.seed);
  take(j, "wide", c.wide);
  take(j, "bc", c.bc);
  take(j, "mode", c.mode);
  take(j, "potential", c.potential);
  if (j.contains("herglotz")) {
    const json& h = j.at("herglotz");
    require_keys(h, {"x0", "v0", "S0", "span", "steps"}, "herglotz");
    take(h, "x0", c.ode.x0);
    take(h, "v0", c.ode.v0);
    take(h, "S0", c.ode.S0);
    take(h, "steps", c.ode.steps);
    if (h.contains("span")) {
      auto span = h.at("span").get<std::vector<double>>();
      if (span.size() != 2) config_error("herglotz.span must be [a, b]");
      c.ode.span_a = span[0];
      c.ode.span_b = span[1];
    }
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    require_keys(g, {"nx", "nt", "length", "tmax", "xmin", "xmax"}, "grid");
    take(g, "nx", c.grid.nx);
    take(g, "nt", c.grid.nt);
    take(g, "length", c.grid.length);
    take(g, "tmax", c.grid.tmax);
    take(g, "xmin", c.grid.xmin);
    take(g, "xmax", c.grid.xmax);
  }
  if (j.contains("params")) {
    const json& p = j.at("params");
    require_keys(p,
                 {"mu", "tension", "gamma", "gamma0", "gamma1", "c", "m", "k", "hbar",
                  "sigma", "k0", "center"},
                 "params");
    take(p, "mu", c.params.mu);
    take(p, "tension", c.params.tension);
    take(p, "gamma", c.params.gamma);
    take(p, "gamma0", c.params.gamma0);
    take(p, "gamma1", c.params.gamma1);
    take(p, "c", c.params.c);
    take(p, "m", c.params.m);
    take(p, "k", c.params.k);
    take(p, "hbar", c.params.hbar);
    take(p, "sigma", c.params.sigma);
    take(p, "k0", c.params.k0);
    take(p, "center", c.params.center);
  }
  if (j.contains("verify")) {
    const json& v = j.at("verify");
    require_keys(v,
                 {"eps", "offset", "bump_center", "bump_width", "bump_center_x",
                  "bump_width_x", "bump_amp"},
                 "verify");
    take(v, "eps", c.verify.eps);
    take(v, "offset", c.verify.offset);
    take(v, "bump_center", c.verify.bump_center);
    take(v, "bump_width", c.verify.bump_width);
    take(v, "bump_center_x", c.verify.bump_center_x);
    take(v, "bump_width_x", c.verify.bump_width_x);
    take(v, "bump_amp", c.verify.bump_amp);
  }
  if (j.contains("dispersion")) {
    const json& d = j.at("dispersion");
    require_keys(d, {"gamma0", "k", "c"}, "dispersion");
    take(d, "gamma0", c.disp.gamma0);
    take(d, "k", c.disp.k);
    take(d, "c", c.disp.c);
  }
}

json effective_config(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  if (!c.preset.empty()) j["preset"] = c.preset;
  if (!c.problem_file.empty()) j["problem"] = c.problem_file;
  j["format"] = c.format;
  j["seed"] = c.seed;
  j["wide"] = c.wide;
  j["bc"] = c.bc;
  j["mode"] = c.mode;
  j["potential"] = c.potential;
  j["herglotz"] = {{"x0", c.ode.x0},
                   {"v0", c.ode.v0},
                   {"S0", c.ode.S0},
                   {"span", {c.ode.span_a, c.ode.span_b}},
                   {"steps", c.ode.steps}};
  j["grid"] = {{"nx", c.grid.nx},     {"nt", c.grid.nt},     {"length", c.grid.length},
               {"tmax", c.grid.tmax}, {"xmin", c.grid.xmin}, {"xmax", c.grid.xmax}};
  j["params"] = {{"mu", c.params.mu},         {"tension", c.params.tension},
                 {"gamma", c.params.gamma},   {"gamma0", c.params.gamma0},
                 {"gamma1", c.params.gamma1}, {"c", c.params.c},
                 {"m", c.params.m},           {"k", c.params.k},
                 {"hbar", c.params.hbar},     {"sigma", c.params.sigma},
                 {"k0", c.params.k0},         {"center", c.params.center}};
  json v;
  v["eps"] = c.verify.eps;
  v["offset"] = c.verify.offset;
  v["bump_amp"] = c.verify.bump_amp;
  if (!std::isnan(c.verify.bump_center)) v["bump_center"] = c.verify.bump_center;
  if (!std::isnan(c.verify.bump_width)) v["bump_width"] = c.verify.bump_width;
  if (!std::isnan(c.verify.bump_center_x)) v["bump_center_x"] = c.verify.bump_center_x;
  if (!std::isnan(c.verify.bump_width_x)) v["bump_width_x"] = c.verify.bump_width_x;
  j["verify"] = v;
  j["dispersion"] = {{"gamma0", c.disp.gamma0}, {"k", c.disp.k}, {"c", c.disp.c}};
  return j;
}

void ensure_out(const RunConfig& c) {
  if (!c.out_dir.empty()) fs::create_directories(c.out_dir);
}

void write_manifest(const RunConfig& c, const std::vector<std::string>& outputs) {
  if (c.out_dir.empty()) return;
  json m = effective_config(c);
  m["outputs"] = outputs;
  std::ofstream os(fs::path(c.out_dir) / "manifest.json");
  os << m.dump(2) << "\n";
}

herglotz::VariationalProblem resolve_problem(const RunConfig& c) {
  if (!c.preset.empty()) return herglotz::preset(c.preset);
  if (!c.problem_file.empty()) {
    std::ifstream is(c.problem_file);
    if (!is) config_error("cannot open problem file " + c.problem_file);
    return herglotz::load_problem(json::parse(is));
  }
  config_error("either --preset or --problem is required");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_presets(const RunConfig& c) {
  if (c.format == "json") {
    json out = json::array();
    for (const auto& name : herglotz::preset_names())
      out.push_back(herglotz::problem_to_json(herglotz::preset(name)));
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& name : herglotz::preset_names()) {
      auto p = herglotz::preset(name);
      std::cout << name << "\n    " << p.description << "\n    L = " << p.lagrangian_text
                << "\n";
    }
  }
  return 0;
}

int cmd_derive(const RunConfig& c) {
  auto p = resolve_problem(c);
  auto gamma = herglotz::extract_gamma(p);
  auto eqs = herglotz::derive_field_equations(p);

  std::vector<std::string> outputs;
  if (c.format == "json") {
    json out;
    out["problem"] = herglotz::problem_to_json(p);
    json g = json::array();
    for (const auto& comp : gamma.components) g.push_back(herglotz::sym::to_string(comp));
    out["gamma"] = g;
    json es = json::array();
    for (const auto& eq : eqs) es.push_back(herglotz::equation_to_json(eq));
    out["equations"] = es;
    out["config"] = effective_config(c);
    std::cout << out.dump(2) << "\n";
    if (!c.out_dir.empty()) {
      ensure_out(c);
      std::ofstream os(fs::path(c.out_dir) / "equations.json");
      os << out.dump(2) << "\n";
      outputs.push_back("equations.json");
    }
  } else {
    std::string text;
    for (const auto& eq : eqs) {
      if (eqs.size() > 1) text += eq.field + ": ";
      text += herglotz::sym::to_string(eq.lhs) + " = 0\n";
    }
    std::cout << text;
    if (!c.out_dir.empty()) {
      ensure_out(c);
      std::ofstream os(fs::path(c.out_dir) / "equations.txt");
      os << text;
      outputs.push_back("equations.txt");
    }
  }
  write_manifest(c, outputs);
  return 0;
}

int simulate_oscillator(const RunConfig& c) {
  // Runs the symbolically derived equation of motion with U(x) = k x^2 / 2.
  auto p = herglotz::preset("oscillator");
  std::map<std::string, double> params{{"m", c.params.m}, {"gamma", c.params.gamma}};
  const double k = c.params.k;
  std::map<std::string, herglotz::OpaqueRealFn> opaques{
      {"U", [k](int order, double x) {
         switch (order) {
           case 0: return 0.5 * k * x * x;
           case 1: return k * x;
           case 2: return k;
           default: return 0.0;
         }
       }}};
  auto sys = herglotz::ode_from_problem(p, params, opaques);
  auto traj = herglotz::integrate_ivp(sys, c.ode.x0, c.ode.v0, c.ode.S0, c.ode.span_a,
                                      c.ode.span_b, c.ode.steps);
  std::vector<std::string> outputs;
  if (!c.out_dir.empty()) {
    ensure_out(c);
    std::ofstream os(fs::path(c.out_dir) / "trajectory.csv");
    herglotz::write_csv(traj, os);
    outputs.push_back("trajectory.csv");
  } else {
    herglotz::write_csv(traj, std::cout);
  }
  write_manifest(c, outputs);
  return 0;
}

herglotz::DampedWaveParams wave_params_for(const RunConfig& c) {
  herglotz::DampedWaveParams w;
  if (c.preset == "string") {
    w.c2 = c.params.tension / c.params.mu;
    w.a = c.params.gamma / c.params.mu;
    w.b = 0.0;
  } else if (c.preset == "klein_gordon_1p1") {
    // t-units telegraph: u_tt = c^2 u_xx - gamma0 c u_t - m^2 c^2 u
    w.c2 = c.params.c * c.params.c;
    w.a = c.params.gamma0 * c.params.c;
    w.b = c.params.m * c.params.m * c.params.c * c.params.c;
  } else if (c.preset == "em_1p1") {
    // the grid time axis is x0 = ct
    w.c2 = 1.0;
    w.a = c.params.gamma0;
    w.b = 0.0;
  } else {
    config_error("preset '" + c.preset + "' has no damped-wave simulation");
  }
  return w;
}

herglotz::RealFieldSeries run_wave(const RunConfig& c, const herglotz::DampedWaveParams& w,
                                   const herglotz::Grid1P1D& grid) {
  Eigen::VectorXd u0(grid.nx), v0(grid.nx);
  for (int j = 0; j < grid.nx; ++j) {
    double s = std::sin(c.mode * M_PI * (grid.x(j) - grid.x0) / grid.length());
    u0[j] = s;
    v0[j] = -0.5 * w.a * s;  // pure decaying mode
  }
  auto bc = c.bc == "periodic" ? herglotz::BoundaryKind::Periodic
                               : herglotz::BoundaryKind::Dirichlet;
  return herglotz::simulate_damped_wave(w, u0, v0, bc, grid);
}

int simulate_wave(const RunConfig& c) {
  auto w = wave_params_for(c);
  auto grid = herglotz::Grid1P1D::make(c.grid.length, c.grid.tmax, c.grid.nx, c.grid.nt);
  auto series = run_wave(c, w, grid);
  std::vector<std::string> outputs;
  if (!c.out_dir.empty()) {
    ensure_out(c);
    std::ofstream os(fs::path(c.out_dir) / "field.csv");
    herglotz::write_csv(series, os, c.wide);
    outputs.push_back("field.csv");
  } else {
    herglotz::write_csv(series, std::cout, c.wide);
  }
  write_manifest(c, outputs);
  return 0;
}

int simulate_schrodinger_cmd(const RunConfig& c) {
  const double length = c.grid.xmax - c.grid.xmin;
  auto grid =
      herglotz::Grid1P1D::make(length, c.grid.tmax, c.grid.nx, c.grid.nt, c.grid.xmin);
  Eigen::VectorXd V(grid.nx);
  for (int j = 0; j < grid.nx; ++j) {
    double x = grid.x(j);
    if (c.potential == "harmonic")
      V[j] = 0.5 * x * x;
    else if (c.potential == "none")
      V[j] = 0.0;
    else
      config_error("unknown potential '" + c.potential + "'");
  }
  Eigen::VectorXcd psi0(grid.nx);
  const double norm = std::pow(M_PI * c.params.sigma * c.params.sigma, -0.25);
  for (int j = 0; j < grid.nx; ++j) {
    double x = grid.x(j) - c.params.center;
    psi0[j] = norm * std::exp(-x * x / (2 * c.params.sigma * c.params.sigma)) *
              std::exp(std::complex<double>(0, c.params.k0 * grid.x(j)));
  }
  auto series = herglotz::simulate_schrodinger(V, c.params.gamma0, c.params.gamma1, psi0,
                                               grid, c.params.hbar, c.params.m);
  std::vector<std::string> outputs;
  if (!c.out_dir.empty()) {
    ensure_out(c);
    std::ofstream os(fs::path(c.out_dir) / "field.csv");
    herglotz::write_csv(series, os, c.wide);
    outputs.push_back("field.csv");
  } else {
    herglotz::write_csv(series, std::cout, c.wide);
  }
  write_manifest(c, outputs);
  return 0;
}

int cmd_simulate(const RunConfig& c) {
  if (c.preset == "oscillator") return simulate_oscillator(c);
  if (c.preset == "schrodinger_1d") return simulate_schrodinger_cmd(c);
  if (c.preset == "string" || c.preset == "klein_gordon_1p1" || c.preset == "em_1p1")
    return simulate_wave(c);
  config_error(c.preset.empty() ? "simulate requires --preset"
                                : "preset '" + c.preset + "' has no simulation");
}

int cmd_dispersion(const RunConfig& c) {
  auto r = herglotz::classify(c.disp.gamma0, c.disp.k);
  json row;
  row["gamma0"] = c.disp.gamma0;
  row["k"] = c.disp.k;
  row["regime"] = herglotz::regime_name(r.regime);
  row["gamma_prime"] = r.gamma_prime;
  row["lambda_plus"] = {{"re", r.lambda_plus.real()}, {"im", r.lambda_plus.imag()}};
  row["lambda_minus"] = {{"re", r.lambda_minus.real()}, {"im", r.lambda_minus.imag()}};
  auto lt = herglotz::exponent_in_time_units(r.lambda_plus, c.disp.c);
  auto lm = herglotz::exponent_in_time_units(r.lambda_minus, c.disp.c);
  row["lambda_plus_t"] = {{"re", lt.real()}, {"im", lt.imag()}};
  row["lambda_minus_t"] = {{"re", lm.real()}, {"im", lm.imag()}};
  if (r.speed) row["speed"] = *r.speed;

  if (c.format == "json") {
    json out;
    out["result"] = row;
    out["config"] = effective_config(c);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "gamma0,k,regime,re_lambda_plus,im_lambda_plus,re_lambda_minus,"
                 "im_lambda_minus,speed\n"
              << fmt(c.disp.gamma0) << "," << fmt(c.disp.k) << ","
              << herglotz::regime_name(r.regime) << "," << fmt(r.lambda_plus.real()) << ","
              << fmt(r.lambda_plus.imag()) << "," << fmt(r.lambda_minus.real()) << ","
              << fmt(r.lambda_minus.imag()) << "," << (r.speed ? fmt(*r.speed) : "")
              << "\n";
  }
  std::vector<std::string> outputs;
  if (!c.out_dir.empty()) {
    ensure_out(c);
    std::ofstream os(fs::path(c.out_dir) / "dispersion.json");
    os << row.dump(2) << "\n";
    outputs.push_back("dispersion.json");
  }
  write_manifest(c, outputs);
  return 0;
}

int cmd_verify(const RunConfig& c) {
  json report;
  if (c.preset == "oscillator" || c.preset.empty()) {
    auto sys = herglotz::oscillator_ode(c.params.m, c.params.k, c.params.gamma);
    auto traj = herglotz::integrate_ivp(sys, c.ode.x0, c.ode.v0, c.ode.S0, c.ode.span_a,
                                        c.ode.span_b, c.ode.steps);
    herglotz::BumpPerturbation bump;
    bump.center_t = std::isnan(c.verify.bump_center)
                        ? 0.5 * (c.ode.span_a + c.ode.span_b)
                        : c.verify.bump_center;
    bump.width_t = std::isnan(c.verify.bump_width) ? (c.ode.span_b - c.ode.span_a) / 6.0
                                                   : c.verify.bump_width;
    bump.amplitude = c.verify.bump_amp;
    auto rep = herglotz::stationarity_test_1d(sys.lagrangian, traj.t, traj.x, c.ode.S0,
                                              bump, c.verify.eps, c.verify.offset);
    report = {{"S0", rep.S0},
              {"dS", rep.dS},
              {"ref_dS", rep.ref_dS},
              {"ratio", rep.ratio},
              {"grid", {{"steps", c.ode.steps}}},
              {"eps", c.verify.eps},
              {"bump",
               {{"center", bump.center_t},
                {"width", bump.width_t},
                {"amplitude", bump.amplitude}}}};
  } else if (c.preset == "string") {
    RunConfig wc = c;
    auto w = wave_params_for(wc);
    auto grid = herglotz::Grid1P1D::make(c.grid.length, c.grid.tmax, c.grid.nx, c.grid.nt);
    auto series = run_wave(c, w, grid);
    herglotz::BumpPerturbation bump;
    bump.center_t =
        std::isnan(c.verify.bump_center) ? 0.5 * c.grid.tmax : c.verify.bump_center;
    bump.width_t = std::isnan(c.verify.bump_width) ? c.grid.tmax / 4.0 : c.verify.bump_width;
    bump.center_x =
        std::isnan(c.verify.bump_center_x) ? 0.5 * c.grid.length : c.verify.bump_center_x;
    bump.width_x =
        std::isnan(c.verify.bump_width_x) ? c.grid.length / 4.0 : c.verify.bump_width_x;
    bump.amplitude = c.verify.bump_amp;
    const double mu = c.params.mu, tension = c.params.tension;
    auto density0 = [mu, tension](const herglotz::RealFieldSeries& s) {
      return herglotz::string_density0(s, mu, tension);
    };
    Eigen::VectorXd s1_init = Eigen::VectorXd::Zero(grid.nx);
    auto rep = herglotz::stationarity_test_field(density0, -c.params.gamma / mu, series,
                                                 s1_init, bump, c.verify.eps,
                                                 c.verify.offset);
    report = {{"S0", rep.S0},
              {"dS", rep.dS},
              {"ref_dS", rep.ref_dS},
              {"ratio", rep.ratio},
              {"grid", {{"nx", c.grid.nx}, {"nt", c.grid.nt}}},
              {"eps", c.verify.eps},
              {"bump",
               {{"center_t", bump.center_t},
                {"width_t", bump.width_t},
                {"center_x", *bump.center_x},
                {"width_x", *bump.width_x},
                {"amplitude", bump.amplitude}}}};
  } else {
    config_error("verify supports presets oscillator and string");
  }
  std::cout << report.dump(2) << "\n";
  std::vector<std::string> outputs;
  if (!c.out_dir.empty()) {
    ensure_out(c);
    std::ofstream os(fs::path(c.out_dir) / "report.json");
    os << report.dump(2) << "\n";
    outputs.push_back("report.json");
  }
  write_manifest(c, outputs);
  return 0;
}

std::string find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // Load the config file (if any) before binding flags so explicit flags win.
  try {
    std::string config_file = find_config_arg(argc, argv);
    if (!config_file.empty()) {
      std::ifstream is(config_file);
      if (!is) {
        std::cerr << "error: cli.config: cannot open config file " << config_file << "\n";
        return 1;
      }
      apply_config(cfg, json::parse(is));
    }
  } catch (const herglotz::Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: cli.config: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"derivation, simulation and verification toolkit for action-dependent "
               "Lagrangians"};
  app.require_subcommand(1);

  std::string config_file_opt, grid_spec, span_spec, format_flag;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file_opt, "JSON config file (flags take precedence)");
    sub->add_option("--preset", cfg.preset, "preset problem name");
    sub->add_option("--out", cfg.out_dir, "output directory (also receives manifest.json)");
    sub->add_option("--format", format_flag, "output format");
    sub->add_option("--seed", cfg.seed, "seed recorded in the manifest");
  };

  CLI::App* presets_cmd = app.add_subcommand("presets", "list preset problems");
  add_common(presets_cmd);

  CLI::App* derive_cmd = app.add_subcommand("derive", "derive field equations");
  add_common(derive_cmd);
  derive_cmd->add_option("--problem", cfg.problem_file, "problem JSON file");

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "run a numeric simulation");
  add_common(simulate_cmd);
  simulate_cmd->add_flag("--wide", cfg.wide, "wide CSV layout for fields");
  simulate_cmd->add_option("--grid", grid_spec, "space-time grid as nx,nt");
  simulate_cmd->add_option("--steps", cfg.ode.steps, "ODE steps");
  simulate_cmd->add_option("--span", span_spec, "ODE time span as a,b");
  simulate_cmd->add_option("--x0", cfg.ode.x0, "initial position");
  simulate_cmd->add_option("--v0", cfg.ode.v0, "initial velocity");
  simulate_cmd->add_option("--S0", cfg.ode.S0, "initial action");
  simulate_cmd->add_option("--m", cfg.params.m, "mass");
  simulate_cmd->add_option("--k", cfg.params.k, "oscillator stiffness");
  simulate_cmd->add_option("--gamma", cfg.params.gamma, "damping coefficient");
  simulate_cmd->add_option("--gamma0", cfg.params.gamma0, "temporal damping component");
  simulate_cmd->add_option("--gamma1", cfg.params.gamma1, "spatial damping component");
  simulate_cmd->add_option("--mu", cfg.params.mu, "string mass density");
  simulate_cmd->add_option("--tension", cfg.params.tension, "string tension");
  simulate_cmd->add_option("--c", cfg.params.c, "wave speed scale");
  simulate_cmd->add_option("--hbar", cfg.params.hbar, "hbar");
  simulate_cmd->add_option("--length", cfg.grid.length, "spatial domain length");
  simulate_cmd->add_option("--tmax", cfg.grid.tmax, "time horizon");
  simulate_cmd->add_option("--xmin", cfg.grid.xmin, "left endpoint (Schrodinger)");
  simulate_cmd->add_option("--xmax", cfg.grid.xmax, "right endpoint (Schrodinger)");
  simulate_cmd->add_option("--bc", cfg.bc, "boundary condition: dirichlet|periodic");
  simulate_cmd->add_option("--ic-mode", cfg.mode, "initial sine mode number");
  simulate_cmd->add_option("--potential", cfg.potential, "none|harmonic");
  simulate_cmd->add_option("--sigma", cfg.params.sigma, "Gaussian packet width");
  simulate_cmd->add_option("--k0", cfg.params.k0, "Gaussian packet momentum");
  simulate_cmd->add_option("--center", cfg.params.center, "Gaussian packet center");

  CLI::App* dispersion_cmd =
      app.add_subcommand("dispersion", "classify the damping regime of a wave mode");
  add_common(dispersion_cmd);
  dispersion_cmd->add_option("--gamma0", cfg.disp.gamma0, "temporal damping (ct units)");
  dispersion_cmd->add_option("--k", cfg.disp.k, "spatial wavenumber");
  dispersion_cmd->add_option("--c", cfg.disp.c, "speed of light for t-unit exponents");

  CLI::App* verify_cmd = app.add_subcommand("verify", "first-variation stationarity report");
  add_common(verify_cmd);
  verify_cmd->add_option("--gamma", cfg.params.gamma, "damping coefficient");
  verify_cmd->add_option("--m", cfg.params.m, "oscillator mass");
  verify_cmd->add_option("--k", cfg.params.k, "oscillator stiffness");
  verify_cmd->add_option("--mu", cfg.params.mu, "string mass density");
  verify_cmd->add_option("--tension", cfg.params.tension, "string tension");
  verify_cmd->add_option("--x0", cfg.ode.x0, "initial position");
  verify_cmd->add_option("--v0", cfg.ode.v0, "initial velocity");
  verify_cmd->add_option("--steps", cfg.ode.steps, "trajectory steps");
  verify_cmd->add_option("--span", span_spec, "time span as a,b");
  verify_cmd->add_option("--grid", grid_spec, "field grid as nx,nt");
  verify_cmd->add_option("--length", cfg.grid.length, "string length");
  verify_cmd->add_option("--tmax", cfg.grid.tmax, "time horizon");
  verify_cmd->add_option("--eps", cfg.verify.eps, "variation step");
  verify_cmd->add_option("--offset", cfg.verify.offset, "non-solution offset");
  verify_cmd->add_option("--bump-center", cfg.verify.bump_center, "bump center (time)");
  verify_cmd->add_option("--bump-width", cfg.verify.bump_width, "bump width (time)");
  verify_cmd->add_option("--bump-center-x", cfg.verify.bump_center_x, "bump center (space)");
  verify_cmd->add_option("--bump-width-x", cfg.verify.bump_width_x, "bump width (space)");
  verify_cmd->add_option("--bump-amp", cfg.verify.bump_amp, "bump amplitude");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: cli.usage: " << e.what() << "\n";
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (sub->count("--format") > 0) {
      cfg.format = format_flag;
    } else if (cfg.format.empty()) {
      if (cfg.command == "simulate") cfg.format = "csv";
      else if (cfg.command == "verify") cfg.format = "json";
      else cfg.format = "text";
    }

    if (!grid_spec.empty() &&
        std::sscanf(grid_spec.c_str(), "%d,%d", &cfg.grid.nx, &cfg.grid.nt) != 2)
      config_error("--grid expects nx,nt");
    if (!span_spec.empty() &&
        std::sscanf(span_spec.c_str(), "%lf,%lf", &cfg.ode.span_a, &cfg.ode.span_b) != 2)
      config_error("--span expects a,b");

    if (cfg.command == "presets") return cmd_presets(cfg);
    if (cfg.command == "derive") return cmd_derive(cfg);
    if (cfg.command == "simulate") return cmd_simulate(cfg);
    if (cfg.command == "dispersion") return cmd_dispersion(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    std::cerr << "error: cli.usage: unknown command\n";
    return 2;
  } catch (const herglotz::Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: cli.internal: " << e.what() << "\n";
    return 1;
  }
}
