#include "cli.hpp"

#include "mvp/diagnostics/diagnostics.hpp"
#include "mvp/ineq_harness/ineq_harness.hpp"
#include "mvp/symkernel/catalog.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace mvp::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Cursor {
  const std::string& origin;
  int line;
  std::string key;
  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(origin, line, key + ": " + what); }
};

double to_double(const std::string& v, const Cursor& c) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    c.fail("expected a number, got '" + v + "'");
  }
  if (pos != v.size() || !std::isfinite(d)) c.fail("expected a number, got '" + v + "'");
  return d;
}

long long to_integer(const std::string& v, const Cursor& c) {
  std::size_t pos = 0;
  long long n = 0;
  try {
    n = std::stoll(v, &pos);
  } catch (const std::exception&) {
    c.fail("expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) c.fail("expected an integer, got '" + v + "'");
  return n;
}

std::size_t to_count(const std::string& v, const Cursor& c) {
  const long long n = to_integer(v, c);
  if (n <= 0) c.fail("must be a positive integer");
  return static_cast<std::size_t>(n);
}

bool to_bool(const std::string& v, const Cursor& c) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  c.fail("expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_double_list(const std::string& v, const Cursor& c) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(item, c));
  if (out.empty()) c.fail("expected a comma-separated list");
  return out;
}

std::vector<int> to_int_list(const std::string& v, const Cursor& c) {
  std::vector<int> out;
  for (const auto& item : split_list(v)) out.push_back(static_cast<int>(to_integer(item, c)));
  if (out.empty()) c.fail("expected a comma-separated list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const Cursor&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"initial_data",
       {
           {"epsilon", [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.init.epsilon = to_double(v, c); }},
           {"peak_field", [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.peak_field = to_double(v, c); }},
           {"profile",
            [](RunConfig& r, const std::string& v, const Cursor& c) {
              try {
                r.sim.init.profile = radial_profile_from_name(v);
              } catch (const std::exception& e) {
                c.fail(e.what());
              }
            }},
           {"radial_scale",
            [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.init.radial_scale = to_double(v, c); }},
           {"v_support_low", [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.init.v_low = to_double(v, c); }},
           {"v_support_high",
            [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.init.v_high = to_double(v, c); }},
           {"anisotropy", [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.init.anisotropy = to_double(v, c); }},
       }},
      {"grid",
       {
           {"r_max", [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.grid = RadialGrid(to_double(v, c), r.sim.grid.n_cells); }},
           {"cells", [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.grid = RadialGrid(r.sim.grid.r_max, static_cast<int>(to_count(v, c))); }},
       }},
      {"integration",
       {
           {"dt", [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.dt = to_double(v, c); }},
           {"t_end", [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.t_end = to_double(v, c); }},
           {"sigma", [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.sigma = to_double(v, c); }},
           {"barrier_speed", [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.barrier_speed = to_double(v, c); }},
       }},
      {"run",
       {
           {"particles", [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.particles = to_count(v, c); }},
           {"seed",
            [](RunConfig& r, const std::string& v, const Cursor& c) {
              const long long n = to_integer(v, c);
              if (n < 0) c.fail("must be non-negative");
              r.sim.seed = static_cast<std::uint64_t>(n);
            }},
           {"snapshot_every",
            [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.snapshot_every = static_cast<int>(to_count(v, c)); }},
           {"tangents", [](RunConfig& r, const std::string& v, const Cursor& c) { r.sim.tangents = to_bool(v, c); }},
           {"output_dir", [](RunConfig& r, const std::string& v, const Cursor&) { r.output_dir = v; }},
       }},
      {"free_stream",
       {
           {"times", [](RunConfig& r, const std::string& v, const Cursor& c) { r.free_stream.times = to_double_list(v, c); }},
           {"particles", [](RunConfig& r, const std::string& v, const Cursor& c) { r.free_stream.particles = to_count(v, c); }},
           {"r_max", [](RunConfig& r, const std::string& v, const Cursor& c) { r.free_stream.r_max = to_double(v, c); }},
           {"cells", [](RunConfig& r, const std::string& v, const Cursor& c) { r.free_stream.cells = to_count(v, c); }},
       }},
      {"inequality",
       {
           {"family", [](RunConfig& r, const std::string& v, const Cursor&) { r.inequality.family = v; }},
           {"times", [](RunConfig& r, const std::string& v, const Cursor& c) { r.inequality.times = to_double_list(v, c); }},
           {"p", [](RunConfig& r, const std::string& v, const Cursor& c) { r.inequality.p = to_int_list(v, c); }},
           {"tolerance", [](RunConfig& r, const std::string& v, const Cursor& c) { r.inequality.tolerance = to_double(v, c); }},
           {"nodes", [](RunConfig& r, const std::string& v, const Cursor& c) { r.inequality.nodes = static_cast<int>(to_count(v, c)); }},
           {"radii", [](RunConfig& r, const std::string& v, const Cursor& c) { r.inequality.radii = static_cast<int>(to_count(v, c)); }},
       }},
  };
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("<validation>", 0, what);
}

std::filesystem::path output_path(const RunConfig& cfg, const std::string& name) { return cfg.output_dir / name; }

void check_output_dir(const RunConfig& cfg) {
  std::error_code ec;
  if (!std::filesystem::is_directory(cfg.output_dir, ec))
    throw IoError("output directory '" + cfg.output_dir.string() + "' does not exist");
}

std::string csv_of(const std::function<void(std::ostream&)>& writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

InitialData calibrated(const SimConfig& sim) {
  InitialData init = sim.init;
  if (sim.peak_field > 0.0) init.epsilon = calibrate_epsilon(init, sim.grid, sim.peak_field);
  return init;
}

int run_verify_algebra(const RunConfig& cfg, std::ostream& log) {
  check_output_dir(cfg);
  const auto report = sym::verify_identity_catalog();
  write_atomic(output_path(cfg, "certificate.json"), report.to_json());
  log << report.to_table();
  log << report.proved() << " proved, " << report.failed() << " failed\n";
  return report.all_proved() ? kSuccess : kFailed;
}

int run_simulate(const RunConfig& cfg, std::ostream& log) {
  check_output_dir(cfg);
  SimResult res;
  try {
    res = run(cfg.sim);
  } catch (const BarrierViolation& e) {
    log << "barrier violated: " << e.what() << "\n";
    nlohmann::json j;
    j["status"] = "barrier_violation";
    j["message"] = e.what();
    write_atomic(output_path(cfg, "summary.json"), j.dump(2));
    return kFailed;
  }
  write_atomic(output_path(cfg, "snapshots.csv"), csv_of([&](std::ostream& o) { write_snapshots_csv(res.snapshots, o); }));
  write_atomic(output_path(cfg, "field_final.csv"), csv_of([&](std::ostream& o) { write_field_csv(res.final_field, o); }));
  auto summary = nlohmann::json::parse(run_summary_json(res));
  if (res.final_ensemble.has_tangents()) {
    const Deposit dep = deposit(res.final_ensemble, res.final_field.grid);
    const SourceContext ctx{&res.final_field, &dep.current, cfg.sim.sigma};
    std::vector<EnergyNormEstimate> norms;
    for (int n : {0, 1}) norms.push_back(energy_norm(res.final_ensemble, n, 0));
    norms.push_back(energy_norm(res.final_ensemble, 1, 1, ctx));
    const double residual = charge_identity_check(res.final_ensemble, &res.final_field, cfg.sim.sigma);
    summary["diagnostics"] = nlohmann::json::parse(energy_norm_json(norms, residual));
  }
  summary["status"] = "ok";
  write_atomic(output_path(cfg, "summary.json"), summary.dump(2));
  const double drift = summary["charge_drift_rel"].get<double>();
  log << "t_end " << cfg.sim.t_end << ", charge drift " << drift << ", energy drift "
      << summary["energy_drift_rel"].get<double>() << ", min speed " << summary["min_speed"].get<double>() << "\n";
  if (!(drift <= 1e-10)) {
    log << "charge conservation violated\n";
    return kFailed;
  }
  return kSuccess;
}

int run_free_stream(const RunConfig& cfg, std::ostream& log) {
  check_output_dir(cfg);
  const InitialData init = calibrated(cfg.sim);
  const FreeStreamConfig& fs = cfg.free_stream;
  std::vector<double> times = fs.times;
  std::sort(times.begin(), times.end());
  ParticleEnsemble ens = sample(init, fs.particles, cfg.sim.seed, true);
  const double Q = ens.total_weight();
  const RadialGrid grid(fs.r_max, static_cast<int>(fs.cells));

  std::ostringstream csv;
  csv << "t,r,mu,mu_quadrature,weighted\n";
  csv.precision(17);
  std::vector<MomentSnapshot> mc, quad;
  nlohmann::json per_time = nlohmann::json::array();
  bool invariant_ok = true;
  for (double t : times) {
    free_stream(ens, t - ens.t);
    const Deposit dep = deposit(ens, grid);
    MomentSnapshot m{t, {}, dep.rho}, q{t, {}, {}};
    for (int j = 0; j < grid.num_nodes(); ++j) {
      m.r.push_back(grid.node(j));
      q.r.push_back(grid.node(j));
      q.mu.push_back(free_stream_moment(init, t, grid.node(j)));
      const double tm = tau(t, grid.node(j)).minus;
      const double w = (1.0 + grid.node(j)) * (1.0 + grid.node(j)) * tm * tm;
      csv << t << ',' << grid.node(j) << ',' << m.mu[j] << ',' << q.mu[j] << ',' << w * m.mu[j] << '\n';
    }
    const double total = charge(grid, dep.rho) + dep.overflow_weight;
    const double charge_error = std::abs(total - Q) / std::abs(Q);
    if (!(charge_error <= 1e-12)) invariant_ok = false;
    std::vector<EnergyNormEstimate> norms = {energy_norm(ens, 0, 0), energy_norm(ens, 1, 0), energy_norm(ens, 1, 1)};
    const double residual = charge_identity_check(ens);
    auto j = nlohmann::json::parse(energy_norm_json(norms, residual));
    j["t"] = t;
    j["moment_charge_error"] = charge_error;
    per_time.push_back(j);
    log << "t=" << t << " charge identity residual " << residual << "\n";
    mc.push_back(std::move(m));
    quad.push_back(std::move(q));
  }
  nlohmann::json out;
  out["version"] = 1;
  out["epsilon"] = init.epsilon;
  out["particles"] = fs.particles;
  out["snapshots"] = per_time;
  auto decay_json = [](const std::vector<MomentSnapshot>& s) {
    nlohmann::json d;
    if (s.size() < 3) return d;
    const DecayReport rep = decay_fit(s);
    d = {{"t", rep.t},         {"weighted_sup", rep.weighted_sup}, {"sup_moment", rep.sup_moment},
         {"slope", rep.slope}, {"max_ratio", rep.max_ratio},       {"spread", rep.spread}};
    return d;
  };
  std::vector<MomentSnapshot> mc_pos, quad_pos;
  for (std::size_t k = 0; k < mc.size(); ++k)
    if (mc[k].t > 0.0) {
      mc_pos.push_back(mc[k]);
      quad_pos.push_back(quad[k]);
    }
  out["decay_quadrature"] = decay_json(quad_pos);
  out["decay_particles"] = decay_json(mc_pos);
  write_atomic(output_path(cfg, "free_stream_moments.csv"), csv.str());
  write_atomic(output_path(cfg, "free_stream.json"), out.dump(2));
  if (!invariant_ok) {
    log << "moment profile does not carry the total charge\n";
    return kFailed;
  }
  return kSuccess;
}

int run_inequality(const RunConfig& cfg, std::ostream& log) {
  check_output_dir(cfg);
  const InequalityConfig& iq = cfg.inequality;
  const TestFamily family = family_from_name(iq.family);
  bool gates = true;
  for (const auto& g : family) {
    const GateReport gate = validate_member(g);
    log << "gate " << g.name << ": max relative error " << gate.max_rel_error << (gate.passed ? "" : " FAILED") << "\n";
    gates = gates && gate.passed;
  }
  ScanOptions opt;
  opt.rhs.nodes = iq.nodes;
  opt.rhs.tolerance = iq.tolerance;
  opt.radii = iq.radii;
  const InequalityReport rep = constant_scan(family, iq.times, iq.p, opt);
  write_atomic(output_path(cfg, "inequality.csv"), csv_of([&](std::ostream& o) { write_inequality_csv(rep, o); }));
  auto j = nlohmann::json::parse(inequality_json(rep));
  j["family_name"] = iq.family;
  j["gates_passed"] = gates;
  j["nodes"] = iq.nodes;
  j["tolerance"] = iq.tolerance;
  write_atomic(output_path(cfg, "inequality.json"), j.dump(2));
  for (const auto& f : rep.family) log << "p=" << f.p << " family max variation across t: " << f.variation << "\n";
  if (!rep.all_converged) log << "note: some right-hand sides did not reach the requested tolerance\n";
  return gates && rep.all_finite ? kSuccess : kFailed;
}

int run_report(const RunConfig& cfg, std::ostream& log) {
  check_output_dir(cfg);
  nlohmann::json report;
  report["version"] = 1;
  bool any = false;
  for (const std::string name : {"certificate.json", "summary.json", "free_stream.json", "inequality.json"}) {
    const auto path = output_path(cfg, name);
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    try {
      report[name.substr(0, name.size() - 5)] = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw IoError("malformed " + path.string() + ": " + e.what());
    }
    log << "collected " << name << "\n";
    any = true;
  }
  if (!any) throw IoError("no outputs found in '" + cfg.output_dir.string() + "'");
  write_atomic(output_path(cfg, "report.json"), report.dump(2));
  return kSuccess;
}

}  // namespace

ConfigError::ConfigError(const std::string& origin, int line, const std::string& what)
    : std::runtime_error(line > 0 ? origin + ":" + std::to_string(line) + ": " + what : origin + ": " + what),
      line_(line) {}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(origin, line, "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (!schema().count(section)) throw ConfigError(origin, line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(origin, line, "expected key = value, got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) throw ConfigError(origin, line, "key '" + key + "' outside a section");
    const auto& keys = schema().at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(origin, line, "unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) throw ConfigError(origin, line, key + ": missing value");
    it->second(cfg, value, Cursor{origin, line, section + "." + key});
  }
  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.string());
}

void validate(const RunConfig& cfg) {
  const SimConfig& s = cfg.sim;
  require(s.init.epsilon > 0.0, "initial_data.epsilon must be positive");
  require(s.peak_field >= 0.0, "initial_data.peak_field must be non-negative");
  require(s.init.radial_scale > 0.0, "initial_data.radial_scale must be positive");
  require(s.init.v_low >= 2.0, "initial_data.v_support_low must be at least 2 (f0 must vanish for |v| <= 2)");
  require(s.init.v_high > s.init.v_low, "initial_data.v_support_high must exceed v_support_low");
  require(std::abs(s.init.anisotropy) < 1.0, "initial_data.anisotropy must lie in (-1, 1)");
  require(s.grid.r_max > 0.0, "grid.r_max must be positive");
  require(s.dt > 0.0, "integration.dt must be positive");
  require(s.t_end > 0.0, "integration.t_end must be positive");
  require(s.sigma == 1.0 || s.sigma == -1.0 || s.sigma == 0.0, "integration.sigma must be -1, 0 or 1");
  require(s.barrier_speed > 0.0, "integration.barrier_speed must be positive");
  require(cfg.free_stream.r_max > 0.0, "free_stream.r_max must be positive");
  for (double t : cfg.free_stream.times) require(t >= 0.0, "free_stream.times must be non-negative");
  for (double t : cfg.inequality.times) require(t >= 0.0, "inequality.times must be non-negative");
  for (int p : cfg.inequality.p) require(p >= 0, "inequality.p must be non-negative");
  require(cfg.inequality.tolerance > 0.0, "inequality.tolerance must be positive");
  require(cfg.inequality.nodes >= 4 && cfg.inequality.nodes <= 16, "inequality.nodes must lie in [4, 16]");
  require(cfg.inequality.radii >= 2, "inequality.radii must be at least 2");
  const auto names = family_names();
  require(std::find(names.begin(), names.end(), cfg.inequality.family) != names.end(),
          "inequality.family must be one of the registered families");
  if (!cfg.mode.empty()) {
    const auto m = modes();
    require(std::find(m.begin(), m.end(), cfg.mode) != m.end(), "unknown mode '" + cfg.mode + "'");
  }
}

std::vector<std::string> modes() { return {"verify-algebra", "free-stream", "simulate", "inequality", "report"}; }

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

int dispatch(const RunConfig& cfg, std::ostream& log) {
  try {
    validate(cfg);
    if (cfg.mode == "verify-algebra") return run_verify_algebra(cfg, log);
    if (cfg.mode == "simulate") return run_simulate(cfg, log);
    if (cfg.mode == "free-stream") return run_free_stream(cfg, log);
    if (cfg.mode == "inequality") return run_inequality(cfg, log);
    if (cfg.mode == "report") return run_report(cfg, log);
    throw ConfigError("<validation>", 0, "no mode selected");
  } catch (const IoError& e) {
    log << "error: " << e.what() << "\n";
    return kIoError;
  }
}

}  // namespace mvp::cli
