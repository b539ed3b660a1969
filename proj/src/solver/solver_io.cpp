#include <fstream>
#include <iomanip>
#include <limits>
#include <set>

#include "tvc/solver_io.hpp"

namespace tvc {

Json to_json(const TVProblem& problem) {
  Json j;
  j["format"] = "tvc-problem";
  j["version"] = 1;
  j["shape"] = problem.shape;
  j["M"] = problem.M;
  j["eta"] = problem.eta;
  j["samples"] = to_json(problem.samples);
  j["g"] = std::vector<double>(problem.g.data(), problem.g.data() + problem.g.size());
  return j;
}

TVProblem problem_from_json(const Json& j) {
  if (j.value("format", "") != "tvc-problem") throw ParameterError("problem json: missing or wrong \"format\"");
  const auto g = j.at("g").get<std::vector<double>>();
  return TVProblem::make(j.at("shape").get<Shape>(), samples_from_json(j.at("samples")),
                         Eigen::Map<const Eigen::ArrayXd>(g.data(), static_cast<Index>(g.size())),
                         j.value("eta", 0.0), j.value("M", 1.0));
}

Json to_json(const SolverConfig& c) {
  return Json{{"method", to_string(c.method)},
              {"max_outer_iters", c.max_outer_iters},
              {"constraint_tolerance", c.constraint_tolerance},
              {"change_tolerance", c.change_tolerance},
              {"gap_tolerance", c.gap_tolerance},
              {"penalty", c.penalty},
              {"fidelity", c.fidelity},
              {"inner_sweeps", c.inner_sweeps},
              {"check_every", c.check_every}};
}

SolverConfig solver_config_from_json(const Json& j, SolverConfig c) {
  static const std::set<std::string> known{"method", "max_outer_iters", "constraint_tolerance",
                                           "change_tolerance", "gap_tolerance", "penalty",
                                           "fidelity", "inner_sweeps", "check_every"};
  if (!j.is_object()) throw ParameterError("solver config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ParameterError("solver config: unknown key '" + key + "'");
  try {
    if (j.contains("method")) c.method = solver_method_from_string(j["method"].get<std::string>());
    c.max_outer_iters = j.value("max_outer_iters", c.max_outer_iters);
    c.constraint_tolerance = j.value("constraint_tolerance", c.constraint_tolerance);
    c.change_tolerance = j.value("change_tolerance", c.change_tolerance);
    c.gap_tolerance = j.value("gap_tolerance", c.gap_tolerance);
    c.penalty = j.value("penalty", c.penalty);
    c.fidelity = j.value("fidelity", c.fidelity);
    c.inner_sweeps = j.value("inner_sweeps", c.inner_sweeps);
    c.check_every = j.value("check_every", c.check_every);
  } catch (const Json::type_error& e) {
    throw ParameterError(std::string("solver config: ") + e.what());
  }
  c.validate();
  return c;
}

Json to_json(const SolveResult& r) {
  Json history = Json::array();
  for (const auto& h : r.history) history.push_back({h.iteration, h.tv, h.residual, h.gap});
  return Json{{"format", "tvc-result"},
              {"version", 1},
              {"field", to_json(r.u)},
              {"tv_value", r.tv_value},
              {"constraint_residual", r.constraint_residual},
              {"duality_gap", r.duality_gap},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"method", to_string(r.method)},
              {"message", r.message},
              {"history", history}};
}

SolveResult result_from_json(const Json& j) {
  if (j.value("format", "") != "tvc-result") throw ParameterError("result json: missing or wrong \"format\"");
  SolveResult r;
  r.u = field_from_json(j.at("field"));
  r.tv_value = j.at("tv_value").get<double>();
  r.constraint_residual = j.at("constraint_residual").get<double>();
  r.duality_gap = j.value("duality_gap", 0.0);
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.method = solver_method_from_string(j.at("method").get<std::string>());
  r.message = j.value("message", "");
  for (const auto& h : j.value("history", Json::array()))
    r.history.push_back({h.at(0).get<int>(), h.at(1).get<double>(), h.at(2).get<double>(), h.at(3).get<double>()});
  return r;
}

void save_history_csv(const std::filesystem::path& path, const SolveResult& result) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "iter,tv,residual,gap\n";
  for (const auto& h : result.history) out << h.iteration << ',' << h.tv << ',' << h.residual << ',' << h.gap << '\n';
}

} // namespace tvc
