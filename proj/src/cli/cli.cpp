#include "tvc/cli.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <gmp.h>

#include "tvc/bounds.hpp"
#include "tvc/covering.hpp"
#include "tvc/experiments.hpp"
#include "tvc/solver_io.hpp"

#ifndef TVC_VERSION
#define TVC_VERSION "0.0.0"
#endif

namespace tvc {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Kind { Number, Integer, Text, Flag, NumberList, IntegerList };

struct Key {
  std::string name;
  Kind kind;
  Json fallback;  // null: optional, unset by default
  std::string help;
};

std::string flag_name(const std::string& key) {
  std::string s = key;
  for (char& c : s)
    if (c == '_') c = '-';
  return "--" + s;
}

std::string env_name(const std::string& key) {
  std::string s = "TVC_";
  for (char c : key) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError(key + ": expected a number, got '" + text + "'");
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError(key + ": expected an integer, got '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) items.push_back(item);
  return items;
}

Json parse_text(const Key& key, const std::string& text) {
  switch (key.kind) {
    case Kind::Number: return parse_number(key.name, text);
    case Kind::Integer: return parse_integer(key.name, text);
    case Kind::Text: return text;
    case Kind::Flag:
      if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
      if (text == "0" || text == "false" || text == "no" || text == "off") return false;
      throw UsageError(key.name + ": expected a boolean, got '" + text + "'");
    case Kind::NumberList: {
      Json a = Json::array();
      for (const auto& item : split_list(text)) a.push_back(parse_number(key.name, item));
      return a;
    }
    case Kind::IntegerList: {
      Json a = Json::array();
      for (const auto& item : split_list(text)) a.push_back(parse_integer(key.name, item));
      return a;
    }
  }
  return nullptr;
}

void check_json_kind(const Key& key, const Json& v) {
  if (v.is_null()) return;
  bool ok = false;
  switch (key.kind) {
    case Kind::Number: ok = v.is_number(); break;
    case Kind::Integer: ok = v.is_number_integer(); break;
    case Kind::Text: ok = v.is_string(); break;
    case Kind::Flag: ok = v.is_boolean(); break;
    case Kind::NumberList:
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_number(); });
      break;
    case Kind::IntegerList:
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_number_integer(); });
      break;
  }
  if (!ok) throw UsageError("config key '" + key.name + "' has the wrong type");
}

std::vector<Key> solver_keys() {
  const SolverConfig d;
  return {{"method", Kind::Text, to_string(d.method), "split-bregman or primal-dual"},
          {"max_outer_iters", Kind::Integer, d.max_outer_iters, "iteration cap"},
          {"constraint_tolerance", Kind::Number, d.constraint_tolerance, "relative slack on eta^2"},
          {"change_tolerance", Kind::Number, d.change_tolerance, "relative iterate change for stopping"},
          {"gap_tolerance", Kind::Number, d.gap_tolerance, "duality gap relative to max(TV, M)"},
          {"penalty", Kind::Number, d.penalty, "split Bregman shrinkage weight"},
          {"fidelity", Kind::Number, d.fidelity, "split Bregman data splitting weight"},
          {"inner_sweeps", Kind::Integer, d.inner_sweeps, "Gauss-Seidel sweeps per step"},
          {"check_every", Kind::Integer, d.check_every, "diagnostics cadence"}};
}

SolverConfig solver_from(const Json& cfg) {
  Json j = Json::object();
  for (const auto& k : solver_keys()) j[k.name] = cfg.at(k.name);
  return solver_config_from_json(j);
}

std::vector<Key> bound_keys() {
  return {{"M", Kind::Number, 1.0, "pixel bound"},
          {"Cf", Kind::Number, 1.0, "TV growth constant"},
          {"a", Kind::Number, nullptr, "radius exponent (default max(1, 1-b))"},
          {"b", Kind::Number, 0.0, "TV growth exponent"},
          {"d", Kind::Integer, 2, "dimension"},
          {"N", Kind::Integer, 64, "grid extent"},
          {"rho", Kind::Number, 0.5, "sampling density"},
          {"eta", Kind::Number, 0.0, "noise level"}};
}

BoundParams bound_params_from(const Json& cfg) {
  BoundParams p;
  p.M = cfg.at("M").get<double>();
  p.C_f = cfg.at("Cf").get<double>();
  p.b = cfg.at("b").get<double>();
  p.a = cfg.at("a").is_null() ? BoundParams::default_a(p.b) : cfg.at("a").get<double>();
  p.d = cfg.at("d").get<int>();
  p.N = cfg.at("N").get<long long>();
  p.rho = cfg.at("rho").get<double>();
  p.eta = cfg.at("eta").get<double>();
  if (cfg.contains("s") && !cfg.at("s").is_null()) p.s = cfg.at("s").get<double>();
  p.validate();
  return p;
}

Json params_json(const BoundParams& p) {
  Json j{{"M", p.M}, {"Cf", p.C_f}, {"a", p.a}, {"b", p.b}, {"d", p.d}, {"N", p.N}, {"rho", p.rho}, {"eta", p.eta}};
  if (p.s) j["s"] = *p.s;
  return j;
}

struct Context {
  std::string subcommand;
  Json config;
  std::vector<std::string> argv;
  Json outputs = Json::array();
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << text;
}

void write_json_file(Context& ctx, const fs::path& path, const Json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_json(path, j);
  ctx.outputs.push_back(path.filename().string());
}

void write_manifest(const Context& ctx, const fs::path& dir) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  Json versions{{"tvc", TVC_VERSION},
                {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION)},
                {"gmp", gmp_version},
                {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                {"compiler", __VERSION__}};
  Json seeds = Json::object();
  if (ctx.config.contains("seed")) seeds["seed"] = ctx.config["seed"];
  Json m{{"format", "tvc-manifest"},
         {"version", 1},
         {"subcommand", ctx.subcommand},
         {"config", ctx.config},
         {"seeds", seeds},
         {"argv", ctx.argv},
         {"outputs", ctx.outputs},
         {"versions", versions},
         {"created", stamp},
         {"rerun", "tvc " + ctx.subcommand + " --config <this manifest>"}};
  fs::create_directories(dir.empty() ? fs::path(".") : dir);
  save_json((dir.empty() ? fs::path(".") : dir) / "manifest.json", m);
}

void diagnostic(int code, const std::string& kind, const std::string& message, const Json& extra = {}) {
  Json j{{"status", "error"}, {"exit_code", code}, {"kind", kind}, {"message", message}};
  if (!extra.is_null()) j["details"] = extra;
  std::cerr << j.dump() << '\n';
}

std::optional<std::string> text_or_null(const Json& cfg, const std::string& key) {
  if (cfg.at(key).is_null()) return std::nullopt;
  return cfg.at(key).get<std::string>();
}

// ---- solve -------------------------------------------------------------

int run_solve(Context& ctx) {
  const Json& cfg = ctx.config;
  const auto input = text_or_null(cfg, "input");
  if (!input) throw UsageError("solve: --input is required");
  const TVProblem problem = problem_from_json(load_json(*input));
  const SolveResult result = solve(problem, solver_from(cfg));
  const fs::path out = cfg.at("out").get<std::string>();
  write_json_file(ctx, out, to_json(result));
  if (const auto history = text_or_null(cfg, "history")) {
    save_history_csv(*history, result);
    ctx.outputs.push_back(fs::path(*history).filename().string());
  }
  write_manifest(ctx, out.parent_path());
  const bool bounded = check_max_principle(result, problem.M, 1e-6);
  Json summary{{"tv_value", result.tv_value},
               {"constraint_residual", result.constraint_residual},
               {"duality_gap", result.duality_gap},
               {"iterations", result.iterations},
               {"converged", result.converged},
               {"max_principle", bounded},
               {"out", out.string()}};
  std::cout << summary.dump(2) << '\n';
  if (!result.converged) {
    diagnostic(2, "non-convergence", result.message, summary);
    return 2;
  }
  return 0;
}

// ---- sweeps ------------------------------------------------------------

std::vector<Key> sweep_common_keys() {
  const SweepConfig d;
  std::vector<Key> keys{{"realizations", Kind::Integer, d.realizations, "realizations per cell"},
                        {"eta", Kind::Number, d.eta, "noise level"},
                        {"seed", Kind::Integer, static_cast<long long>(d.seed), "master seed"},
                        {"phantom", Kind::Text, "modified", "modified or classic Shepp-Logan"},
                        {"threads", Kind::Integer, d.threads, "worker threads (0: all cores)"},
                        {"paper_scale", Kind::Flag, false,
                         "full-size campaign: N=512 or J=5..10, 100 realizations (hours of CPU)"}};
  for (auto& k : solver_keys()) keys.push_back(k);
  return keys;
}

SweepConfig sweep_from(const Json& cfg, SweepMode mode) {
  SweepConfig s = mode == SweepMode::Density ? SweepConfig::density_defaults() : SweepConfig::resolution_defaults();
  s.realizations = cfg.at("realizations").get<int>();
  s.eta = cfg.at("eta").get<double>();
  s.seed = cfg.at("seed").get<std::uint64_t>();
  s.phantom = phantom_kind_from_string(cfg.at("phantom").get<std::string>());
  s.threads = cfg.at("threads").get<int>();
  s.solver = solver_from(cfg);
  if (mode == SweepMode::Density) {
    s.N = cfg.at("N").get<Index>();
    s.rhos = cfg.at("rhos").get<std::vector<double>>();
  } else {
    s.levels = cfg.at("levels").get<std::vector<int>>();
    s.resolution_rho = cfg.at("rho").get<double>();
  }
  if (cfg.at("paper_scale").get<bool>()) {
    s.realizations = 100;
    if (mode == SweepMode::Density) s.N = 512;
    else s.levels = {5, 6, 7, 8, 9, 10};
  }
  s.validate();
  return s;
}

int run_sweep(Context& ctx, SweepMode mode) {
  const SweepConfig s = sweep_from(ctx.config, mode);
  const Report report = mode == SweepMode::Density ? run_density_sweep(s) : run_resolution_sweep(s);
  const fs::path dir = ctx.config.at("out_dir").get<std::string>();
  write_json_file(ctx, dir / "report.json", to_json(report));
  write_text(dir / "summary.csv", summary_csv(report));
  write_text(dir / "plot.svg", report_svg(report));
  ctx.outputs.push_back("summary.csv");
  ctx.outputs.push_back("plot.svg");
  write_manifest(ctx, dir);
  Json summary{{"kind", report.kind},
               {"constant", report.constant},
               {"violations", report.violations},
               {"nonconverged", report.nonconverged},
               {"wall_seconds", report.wall_seconds},
               {"out_dir", dir.string()}};
  std::cout << summary.dump(2) << '\n';
  if (report.nonconverged > 0) {
    diagnostic(2, "non-convergence", std::to_string(report.nonconverged) + " realizations did not converge", summary);
    return 2;
  }
  return 0;
}

// ---- bounds ------------------------------------------------------------

Json bounds_record(const Json& cfg) {
  const BoundParams p = bound_params_from(cfg);
  Json j{{"params", params_json(p)},
         {"omega", p.omega()},
         {"m", p.m()},
         {"covering_constant", covering_constant(p)},
         {"c_tilde", theorem2_constant(p)}};
  const double eps = epsilon_star(p);
  j["epsilon_star"] = eps;
  j["prob_success_at_epsilon_star"] = prob_success_lower_bound(p, eps);
  Json t2{{"constant", theorem2_constant(p)}, {"rate", theorem2_rate(p)}};
  if (p.b < 1.0) t2["bound"] = theorem2_bound(p);
  j["theorem2"] = t2;
  if (!cfg.at("r").is_null()) {
    const double r = cfg.at("r").get<double>();
    Json c{{"r", r}, {"rough_log_bound", rough_covering_log_bound(p.M, r, static_cast<long long>(p.omega()))}};
    if (r >= std::pow(p.omega(), -p.a)) c["log_bound"] = covering_log_bound(p, r);
    j["covering"] = c;
  }
  if (p.s) {
    const auto t3 = theorem3_bounds(p);
    j["theorem3"] = {{"constant", t3.constant}, {"by_density", t3.by_density}, {"by_count", t3.by_count}};
  }
  if (!cfg.at("J").is_null()) {
    if (cfg.at("tv").is_null()) throw UsageError("bounds: --J needs --tv (TV of the continuum function)");
    const int J = cfg.at("J").get<int>();
    const auto t4 = theorem4_bounds(J, p.rho, p.eta, p.M, cfg.at("tv").get<double>(), p.a);
    j["theorem4"] = {{"J", J},
                     {"constant", t4.constant},
                     {"C1", t4.C1},
                     {"C2", t4.C2},
                     {"C3", t4.C3},
                     {"discrete_bound", t4.discrete_bound},
                     {"continuum_bound", t4.continuum_bound},
                     {"continuum_bound_reduced",
                      std::isfinite(t4.continuum_bound_reduced) ? Json(t4.continuum_bound_reduced) : Json(nullptr)},
                     {"probability", t4.probability}};
  }
  return j;
}

int run_bounds(Context& ctx) {
  const Json j = bounds_record(ctx.config);
  std::cout << j.dump(2) << '\n';
  if (const auto out = text_or_null(ctx.config, "out")) {
    write_json_file(ctx, *out, j);
    write_manifest(ctx, fs::path(*out).parent_path());
  }
  return 0;
}

// ---- covering ----------------------------------------------------------

int run_covering(Context& ctx) {
  const Json& cfg = ctx.config;
  if (cfg.at("r").is_null()) throw UsageError("covering: --r is required");
  const double r = cfg.at("r").get<double>();
  const BoundParams p = bound_params_from(cfg);
  const auto size = quantized_class_log_size(p, r);
  Json j{{"params", params_json(p)},
         {"r", r},
         {"quantized_class",
          {{"R", size.R},
           {"K", size.K},
           {"kappa", size.kappa},
           {"exact_log_size", size.exact_log_size},
           {"chain_log_bound", size.chain_log_bound},
           {"covering_log_bound", size.thm1_log_bound ? Json(*size.thm1_log_bound) : Json(nullptr)}}},
         {"rough_log_bound", rough_covering_log_bound(p.M, r, static_cast<long long>(p.omega()))}};
  if (cfg.at("sandwich").get<bool>()) {
    SandwichInstance inst;
    inst.shape = cfg.at("shape").get<Shape>();
    inst.points = cfg.at("points").get<int>();
    inst.M = p.M;
    inst.tv_max = cfg.at("tv_max").get<double>();
    const auto s = brute_force_covering_sandwich(inst, r);
    j["sandwich"] = {{"shape", inst.shape},
                     {"points", inst.points},
                     {"tv_max", inst.tv_max},
                     {"class_size", s.class_size},
                     {"packing_lower", s.lower},
                     {"cover_upper", s.upper},
                     {"cover_verified", s.cover_verified}};
  }
  std::cout << j.dump(2) << '\n';
  if (const auto out = text_or_null(cfg, "out")) {
    write_json_file(ctx, *out, j);
    write_manifest(ctx, fs::path(*out).parent_path());
  }
  return 0;
}

// ---- continuum test functions -----------------------------------------

void require_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw UsageError(what + " must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw UsageError(what + ": unknown key '" + k + "'");
}

std::vector<CatalogEntry> load_catalog(const Json& cfg) {
  if (cfg.at("catalog").is_null()) return builtin_catalog();
  const Json j = load_json(cfg.at("catalog").get<std::string>());
  if (!j.is_array()) throw UsageError("catalog must be a JSON array of {\"name\", \"function\"}");
  std::vector<CatalogEntry> out;
  for (const auto& e : j) {
    require_keys(e, {"name", "function"}, "catalog entry");
    out.push_back({e.at("name").get<std::string>(), e.at("function")});
  }
  return out;
}

const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog, const std::string& name) {
  for (const auto& e : catalog)
    if (e.name == name) return e;
  throw UsageError("no catalog function named '" + name + "'");
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int run_bv_check(Context& ctx) {
  const Json& cfg = ctx.config;
  const auto catalog = load_catalog(cfg);
  auto names = cfg.at("functions").get<std::vector<std::string>>();
  if (names.empty())
    for (const auto& e : catalog) names.push_back(e.name);
  const auto levels = cfg.at("levels").get<std::vector<int>>();
  if (levels.empty()) throw UsageError("bv-check: empty level list");

  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "function,J,error_sq,bound,ratio,bessel_lhs,bessel_rhs,tv_discrete,tv_scaled_bound\n";
  Json results = Json::array();
  bool all_hold = true;
  for (const auto& name : names) {
    const auto f = function_from_json(find_entry(catalog, name).spec);
    std::vector<double> js, logs;
    Json rows = Json::array();
    for (int J : levels) {
      const double err = l2_error(interpolate(local_average_samples(f, J), J), f);
      const double bound = (16.0 + 4.0 * std::sqrt(M_PI)) * std::ldexp(1.0, -J) * f.total_variation() * f.sup_norm();
      const auto bessel = bessel_check(f, J);
      const auto tv = discrete_tv_vs_continuum(f, J);
      csv << name << ',' << J << ',' << err << ',' << bound << ',' << err / bound << ',' << bessel.lhs << ','
          << bessel.rhs << ',' << tv.discrete << ',' << tv.scaled_bound << '\n';
      rows.push_back({{"J", J}, {"error_sq", err}, {"bound", bound}, {"holds", err <= bound},
                      {"bessel_holds", bessel.holds()}, {"tv_holds", tv.holds()}});
      all_hold = all_hold && err <= bound && bessel.holds() && tv.holds();
      if (err > 0.0) {
        js.push_back(J);
        logs.push_back(std::log2(err));
      }
    }
    Json entry{{"function", name}, {"tv", f.total_variation()}, {"sup_norm", f.sup_norm()}, {"levels", rows}};
    entry["log2_slope"] = js.size() >= 2 ? Json(fitted_slope(js, logs)) : Json(nullptr);
    results.push_back(entry);
  }
  const fs::path dir = cfg.at("out_dir").get<std::string>();
  write_text(dir / "bv_check.csv", csv.str());
  ctx.outputs.push_back("bv_check.csv");
  const Json j{{"format", "tvc-bv-check"}, {"version", 1}, {"all_hold", all_hold}, {"functions", results}};
  write_json_file(ctx, dir / "bv_check.json", j);
  write_manifest(ctx, dir);
  std::cout << j.dump(2) << '\n';
  return 0;
}

// ---- step example and continuum pipeline -------------------------------

int run_step_example(Context& ctx) {
  const Json& cfg = ctx.config;
  const auto rec = step_signal_example(cfg.at("N").get<Index>(), cfg.at("m").get<Index>(),
                                       cfg.at("trials").get<long long>(), cfg.at("seed").get<std::uint64_t>());
  const Json j = to_json(rec);
  std::cout << j.dump(2) << '\n';
  if (const auto out = text_or_null(cfg, "out")) {
    write_json_file(ctx, *out, j);
    write_manifest(ctx, fs::path(*out).parent_path());
  }
  return 0;
}

int run_thm4_pipeline(Context& ctx) {
  const Json& cfg = ctx.config;
  const auto catalog = load_catalog(cfg);
  const auto f = function_from_json(find_entry(catalog, cfg.at("function").get<std::string>()).spec);
  PipelineConfig p;
  p.J = cfg.at("J").get<int>();
  p.rho = cfg.at("rho").get<double>();
  p.eta = cfg.at("eta").get<double>();
  p.M = cfg.at("M").get<double>();
  p.a = cfg.at("a").get<double>();
  p.trials = cfg.at("trials").get<int>();
  p.seed = cfg.at("seed").get<std::uint64_t>();
  p.threads = cfg.at("threads").get<int>();
  p.solver = solver_from(cfg);
  const auto rep = full_pipeline_thm4(f, p);
  const fs::path dir = cfg.at("out_dir").get<std::string>();
  Json j = to_json(rep);
  j["function"] = cfg.at("function");
  write_json_file(ctx, dir / "report.json", j);
  write_manifest(ctx, dir);
  Json summary{{"discrete_violations", rep.discrete_violations},
               {"continuum_violations", rep.continuum_violations},
               {"nonconverged", rep.nonconverged},
               {"discrete_bound", rep.bounds.discrete_bound},
               {"continuum_bound", rep.reduced_form ? rep.bounds.continuum_bound_reduced : rep.bounds.continuum_bound},
               {"out_dir", dir.string()}};
  std::cout << summary.dump(2) << '\n';
  if (rep.nonconverged > 0) {
    diagnostic(2, "non-convergence", std::to_string(rep.nonconverged) + " trials did not converge", summary);
    return 2;
  }
  return 0;
}

// ---- command table -----------------------------------------------------

struct Command {
  std::string name;
  std::string description;
  std::vector<Key> keys;
  std::function<int(Context&)> run;
};

std::vector<Command> commands() {
  std::vector<Command> cmds;

  std::vector<Key> solve_keys{{"input", Kind::Text, nullptr, "problem JSON (format tvc-problem)"},
                              {"out", Kind::Text, "u.json", "result JSON"},
                              {"history", Kind::Text, nullptr, "optional iteration history CSV"}};
  for (auto& k : solver_keys()) solve_keys.push_back(k);
  cmds.push_back({"solve", "Minimize anisotropic TV subject to the data constraint", solve_keys, run_solve});

  const SweepConfig dd = SweepConfig::density_defaults();
  std::vector<Key> density{{"N", Kind::Integer, dd.N, "phantom size"},
                           {"rhos", Kind::NumberList, dd.rhos, "sampling densities"},
                           {"out_dir", Kind::Text, "sweep-density", "output directory"}};
  for (auto& k : sweep_common_keys()) density.push_back(k);
  cmds.push_back({"sweep-density", "Error against sampling density on the phantom", density,
                  [](Context& c) { return run_sweep(c, SweepMode::Density); }});

  const SweepConfig rd = SweepConfig::resolution_defaults();
  std::vector<Key> resolution{{"levels", Kind::IntegerList, rd.levels, "resolution levels J (N = 2^J)"},
                              {"rho", Kind::Number, rd.resolution_rho, "sampling density"},
                              {"out_dir", Kind::Text, "sweep-resolution", "output directory"}};
  for (auto& k : sweep_common_keys()) resolution.push_back(k);
  cmds.push_back({"sweep-resolution", "Error against resolution on the phantom", resolution,
                  [](Context& c) { return run_sweep(c, SweepMode::Resolution); }});

  std::vector<Key> bkeys = bound_keys();
  bkeys.push_back({"s", Kind::Number, nullptr, "gradient support size (sparse-gradient bound)"});
  bkeys.push_back({"r", Kind::Number, nullptr, "covering radius"});
  bkeys.push_back({"J", Kind::Integer, nullptr, "continuum level (needs --tv)"});
  bkeys.push_back({"tv", Kind::Number, nullptr, "TV of the continuum function"});
  bkeys.push_back({"out", Kind::Text, nullptr, "optional JSON output"});
  cmds.push_back({"bounds", "Print constants and error bounds", bkeys, run_bounds});

  std::vector<Key> ckeys = bound_keys();
  ckeys.push_back({"r", Kind::Number, nullptr, "covering radius (required)"});
  ckeys.push_back({"sandwich", Kind::Flag, false, "also bracket the covering number by enumeration"});
  ckeys.push_back({"shape", Kind::IntegerList, Json::array({2}), "sandwich grid shape"});
  ckeys.push_back({"points", Kind::Integer, 5, "sandwich values per entry"});
  ckeys.push_back({"tv_max", Kind::Number, 0.0, "sandwich TV budget"});
  ckeys.push_back({"out", Kind::Text, nullptr, "optional JSON output"});
  cmds.push_back({"covering", "Covering-number estimates of the bounded-TV class", ckeys, run_covering});

  cmds.push_back({"bv-check",
                  "Spline approximation, Bessel and TV checks on continuum test functions",
                  {{"catalog", Kind::Text, nullptr, "catalog JSON (default: built-in)"},
                   {"functions", Kind::Text, nullptr, ""},  // replaced below
                   {"levels", Kind::IntegerList, Json::array({1, 2, 3, 4, 5, 6}), "levels J"},
                   {"out_dir", Kind::Text, "bv-check", "output directory"}},
                  run_bv_check});
  cmds.back().keys[1] = {"functions", Kind::Text, nullptr, "comma-separated catalog names (default: all)"};

  cmds.push_back({"step-example",
                  "Non-uniqueness of the 1-D step reconstruction",
                  {{"N", Kind::Integer, 10, "signal length (even)"},
                   {"m", Kind::Integer, 3, "samples"},
                   {"trials", Kind::Integer, 100000, "random sample sets"},
                   {"seed", Kind::Integer, 1, "seed"},
                   {"out", Kind::Text, nullptr, "optional JSON output"}},
                  run_step_example});

  const PipelineConfig pd;
  std::vector<Key> pkeys{{"function", Kind::Text, "two-rectangles", "catalog function name"},
                         {"catalog", Kind::Text, nullptr, "catalog JSON (default: built-in)"},
                         {"J", Kind::Integer, pd.J, "level"},
                         {"rho", Kind::Number, pd.rho, "sampling density"},
                         {"eta", Kind::Number, pd.eta, "noise level"},
                         {"M", Kind::Number, pd.M, "pixel bound"},
                         {"a", Kind::Number, pd.a, "radius exponent"},
                         {"trials", Kind::Integer, pd.trials, "random sample sets"},
                         {"seed", Kind::Integer, static_cast<long long>(pd.seed), "seed"},
                         {"threads", Kind::Integer, pd.threads, "worker threads (0: all cores)"},
                         {"out_dir", Kind::Text, "thm4-pipeline", "output directory"}};
  for (auto& k : solver_keys()) pkeys.push_back(k);
  cmds.push_back({"thm4-pipeline", "Continuum error of TV completion for a test function", pkeys, run_thm4_pipeline});
  return cmds;
}

Json resolve_config(const Command& cmd, const std::optional<std::string>& config_path,
                    const std::map<std::string, std::string>& flags) {
  Json cfg = Json::object();
  std::map<std::string, const Key*> by_name;
  for (const auto& k : cmd.keys) {
    cfg[k.name] = k.fallback;
    by_name[k.name] = &k;
  }
  if (config_path) {
    Json file = load_json(*config_path);
    if (file.is_object() && file.value("format", "") == "tvc-manifest") {
      if (file.value("subcommand", "") != cmd.name)
        throw UsageError("manifest was written by '" + file.value("subcommand", "") + "', not '" + cmd.name + "'");
      file = file.at("config");
    }
    if (!file.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [key, value] : file.items()) {
      const auto it = by_name.find(key);
      if (it == by_name.end()) throw UsageError("config file: unknown key '" + key + "' for " + cmd.name);
      check_json_kind(*it->second, value);
      cfg[key] = value;
    }
  }
  for (const auto& k : cmd.keys)
    if (const char* env = std::getenv(env_name(k.name).c_str())) cfg[k.name] = parse_text(k, env);
  for (const auto& [key, text] : flags) cfg[key] = parse_text(*by_name.at(key), text);
  if (cfg.contains("functions") && cfg["functions"].is_string()) {
    Json a = Json::array();
    for (const auto& s : split_list(cfg["functions"].get<std::string>())) a.push_back(s);
    cfg["functions"] = a;
  } else if (cfg.contains("functions") && cfg["functions"].is_null()) {
    cfg["functions"] = Json::array();
  }
  return cfg;
}

} // namespace

AnalyticFunction2D function_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw UsageError("function spec needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "half-plane") {
      require_keys(j, {"kind", "split", "height"}, "half-plane");
      return AnalyticFunction2D::half_plane(j.value("split", 0.5), j.value("height", 1.0));
    }
    if (kind == "constant") {
      require_keys(j, {"kind", "value"}, "constant");
      return AnalyticFunction2D::constant(j.value("value", 0.0));
    }
    if (kind == "rectangles") {
      require_keys(j, {"kind", "rects"}, "rectangles");
      std::vector<Rectangle> rects;
      for (const auto& r : j.at("rects")) {
        const auto v = r.get<std::vector<double>>();
        if (v.size() != 5) throw UsageError("rectangle needs [x1_lo, x1_hi, x2_lo, x2_hi, height]");
        rects.push_back({v[0], v[1], v[2], v[3], v[4]});
      }
      return AnalyticFunction2D::rectangle_sum(rects);
    }
    if (kind == "bump") {
      require_keys(j, {"kind", "alpha", "c1", "c2", "w1", "w2"}, "bump");
      return AnalyticFunction2D::separable_bump(j.value("alpha", 1.0), j.value("c1", 0.5), j.value("c2", 0.5),
                                                j.value("w1", 0.5), j.value("w2", 0.5));
    }
  } catch (const Json::exception& e) {
    throw UsageError(std::string("function spec: ") + e.what());
  }
  throw UsageError("unknown function kind '" + kind + "'");
}

std::vector<CatalogEntry> builtin_catalog() {
  return {{"half-plane", {{"kind", "half-plane"}, {"split", 0.5}, {"height", 1.0}}},
          {"two-rectangles",
           {{"kind", "rectangles"},
            {"rects", Json::array({Json::array({0.125, 0.5, 0.25, 0.75, 1.0}),
                                   Json::array({0.5, 0.875, 0.375, 0.625, 0.5})})}}},
          {"bump", {{"kind", "bump"}, {"alpha", 1.0}, {"c1", 0.5}, {"c2", 0.5}, {"w1", 0.5}, {"w2", 0.5}}}};
}

int run_cli(int argc, char** argv) {
  CLI::App app{"tvc: total-variation data completion toolkit", "tvc"};
  app.set_version_flag("--version", TVC_VERSION);
  app.require_subcommand(1);
  app.footer("Configuration layers: defaults < --config FILE < TVC_<KEY> environment < flags.\n"
             "Exit codes: 0 success, 1 usage or input error, 2 numerical failure.");

  const auto cmds = commands();
  std::vector<CLI::App*> subs;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::string> config_paths;
  for (const auto& cmd : cmds) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
    sub->add_option("--config", config_paths[cmd.name], "JSON config file or manifest");
    for (const auto& k : cmd.keys) {
      std::string help = k.help;
      if (!k.fallback.is_null()) help += " [" + k.fallback.dump() + "]";
      auto& slot = values[cmd.name][k.name];
      if (k.kind == Kind::Flag) {
        sub->add_flag(flag_name(k.name), [&slot](std::int64_t n) { slot = n > 0 ? "true" : "false"; }, help);
      } else {
        sub->add_option(flag_name(k.name), slot, help);
      }
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n\n" << app.help() << '\n';
    diagnostic(1, "usage", e.what());
    return 1;
  }

  for (std::size_t i = 0; i < cmds.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const Command& cmd = cmds[i];
    Context ctx;
    ctx.subcommand = cmd.name;
    for (int a = 0; a < argc; ++a) ctx.argv.emplace_back(argv[a]);
    try {
      std::map<std::string, std::string> given;
      for (const auto& k : cmd.keys)
        if (subs[i]->count(flag_name(k.name)) > 0) given[k.name] = values[cmd.name][k.name];
      const auto& cp = config_paths[cmd.name];
      ctx.config = resolve_config(cmd, cp.empty() ? std::nullopt : std::optional<std::string>(cp), given);
      return cmd.run(ctx);
    } catch (const UsageError& e) {
      std::cerr << subs[i]->help() << '\n';
      diagnostic(1, "usage", e.what());
      return 1;
    } catch (const NumericalError& e) {
      diagnostic(2, "numerical", e.what());
      return 2;
    } catch (const ParameterError& e) {
      diagnostic(1, "parameter", e.what());
      return 1;
    } catch (const PreconditionError& e) {
      diagnostic(1, "precondition", e.what());
      return 1;
    } catch (const Json::exception& e) {
      diagnostic(1, "input", e.what());
      return 1;
    } catch (const std::exception& e) {
      diagnostic(1, "io", e.what());
      return 1;
    }
  }
  return 1;
}

} // namespace tvc
