#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <sstream>

#include "tvc/experiments.hpp"
#include "tvc/solver_io.hpp"

namespace tvc {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

Json optional_number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

} // namespace

Json to_json(const SweepConfig& c) {
  return Json{{"mode", c.mode == SweepMode::Density ? "density" : "resolution"},
              {"N", c.N},
              {"rhos", c.rhos},
              {"levels", c.levels},
              {"resolution_rho", c.resolution_rho},
              {"realizations", c.realizations},
              {"eta", c.eta},
              {"seed", c.seed},
              {"solver", to_json(c.solver)},
              {"phantom", to_string(c.phantom)},
              {"calibration", "worst-cell equality"}};
}

Json to_json(const Report& r, bool include_timing) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    Json j{{"label", c.label},
           {"parameter", c.parameter},
           {"N", c.N},
           {"rho", c.rho},
           {"m", c.m},
           {"errors", c.errors},
           {"iterations", c.iterations},
           {"converged", std::vector<bool>(c.converged.begin(), c.converged.end())},
           {"max_error", c.max_error},
           {"mean_error", c.mean_error},
           {"shape", c.shape},
           {"theory", c.theory},
           {"calibration", c.calibration},
           {"violation", c.violation}};
    if (include_timing) j["wall_seconds"] = c.wall_seconds;
    cells.push_back(std::move(j));
  }
  Json j{{"format", "tvc-sweep-report"},
         {"version", 1},
         {"kind", r.kind},
         {"config", to_json(r.config)},
         {"constant", r.constant},
         {"violations", r.violations},
         {"nonconverged", r.nonconverged},
         {"cells", cells}};
  if (include_timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

Json to_json(const StepExampleRecord& r) {
  return Json{{"N", r.N},
              {"m", r.m},
              {"trials", r.trials},
              {"misses", r.misses},
              {"empirical_miss_rate", r.empirical_miss_rate},
              {"exact_rate", r.exact_rate},
              {"constructed", r.constructed},
              {"interpolation_failures", r.interpolation_failures},
              {"tv_failures", r.tv_failures},
              {"one_sided", r.one_sided},
              {"worst_solution_error", r.worst_solution_error},
              {"mean_worst_solution_error", r.mean_worst_solution_error},
              {"below_threshold", r.below_threshold}};
}

Json to_json(const PipelineReport& r) {
  Json trials = Json::array();
  for (const auto& t : r.trials)
    trials.push_back({{"discrete_error", t.discrete_error},
                      {"continuum_error", t.continuum_error},
                      {"converged", t.converged},
                      {"iterations", t.iterations},
                      {"tv_value", t.tv_value}});
  Json j{{"format", "tvc-pipeline-report"},
         {"version", 1},
         {"J", r.J},
         {"rho", r.rho},
         {"eta", r.eta},
         {"M", r.M},
         {"tv_f", r.tv_f},
         {"seed", r.seed},
         {"bounds",
          {{"constant", r.bounds.constant},
           {"C1", r.bounds.C1},
           {"C2", r.bounds.C2},
           {"C3", r.bounds.C3},
           {"discrete_bound", r.bounds.discrete_bound},
           {"continuum_bound", r.bounds.continuum_bound},
           {"continuum_bound_reduced", optional_number(r.bounds.continuum_bound_reduced)},
           {"probability", r.bounds.probability}}},
         {"thm5_bound", r.thm5_bound},
         {"sampling_error", r.sampling_error},
         {"reduced_form", r.reduced_form},
         {"trials", trials},
         {"discrete_violations", r.discrete_violations},
         {"continuum_violations", r.continuum_violations},
         {"nonconverged", r.nonconverged}};
  if (r.support_count) j["support_count"] = *r.support_count;
  if (r.piecewise)
    j["piecewise_bounds"] = {{"discrete_bound", r.piecewise->discrete_bound},
                             {"continuum_bound", r.piecewise->continuum_bound}};
  return j;
}

std::string summary_csv(const Report& r) {
  std::ostringstream os;
  os << "cell,parameter,N,rho,m,max_err,mean_err,theory,calibration,violations,nonconverged\n";
  for (const auto& c : r.cells) {
    const auto nc = std::count(c.converged.begin(), c.converged.end(), false);
    os << c.label << ',' << short_num(c.parameter) << ',' << c.N << ',' << short_num(c.rho) << ',' << c.m << ','
       << num(c.max_error) << ',' << num(c.mean_error) << ',' << num(c.theory) << ',' << (c.calibration ? 1 : 0)
       << ',' << (c.violation ? 1 : 0) << ',' << nc << '\n';
  }
  return os.str();
}

std::string report_svg(const Report& r) {
  const double W = 640, H = 420, left = 80, right = 20, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::string xlabel = r.kind == "density" ? "sampling density rho" : "resolution level J";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << r.kind
     << " sweep: max empirical error vs calibrated theory</text>\n";

  std::vector<double> ys;
  for (const auto& c : r.cells)
    for (double v : {c.max_error, c.mean_error, c.theory})
      if (v > 0.0) ys.push_back(std::log10(v));
  if (r.cells.empty() || ys.empty()) {
    os << "<text x=\"" << W / 2 << "\" y=\"" << H / 2 << "\" text-anchor=\"middle\">no positive errors</text>\n</svg>\n";
    return os.str();
  }
  double ylo = std::floor(*std::min_element(ys.begin(), ys.end()));
  double yhi = std::ceil(*std::max_element(ys.begin(), ys.end()));
  if (yhi <= ylo) yhi = ylo + 1;
  double xlo = r.cells.front().parameter, xhi = xlo;
  for (const auto& c : r.cells) {
    xlo = std::min(xlo, c.parameter);
    xhi = std::max(xhi, c.parameter);
  }
  if (xhi <= xlo) xhi = xlo + 1;
  auto X = [&](double x) { return left + pw * (x - xlo) / (xhi - xlo); };
  auto Y = [&](double v) { return top + ph * (yhi - std::log10(v)) / (yhi - ylo); };

  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(ylo); e <= static_cast<int>(yhi); ++e) {
    const double y = Y(std::pow(10.0, e));
    os << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
       << "\" stroke=\"#ddd\"/>\n<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e"
       << e << "</text>\n";
  }
  for (const auto& c : r.cells)
    os << "<text x=\"" << X(c.parameter) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
       << short_num(c.parameter) << "</text>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";

  auto polyline = [&](auto value, const char* colour, const char* dash) {
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\"" << dash << " points=\"";
    for (const auto& c : r.cells)
      if (value(c) > 0.0) os << X(c.parameter) << ',' << Y(value(c)) << ' ';
    os << "\"/>\n";
    for (const auto& c : r.cells)
      if (value(c) > 0.0)
        os << "<circle cx=\"" << X(c.parameter) << "\" cy=\"" << Y(value(c)) << "\" r=\"3\" fill=\"" << colour
           << "\"/>\n";
  };
  polyline([](const CellReport& c) { return c.theory; }, "#c0392b", "");
  polyline([](const CellReport& c) { return c.max_error; }, "#2c3e50", "");
  polyline([](const CellReport& c) { return c.mean_error; }, "#7f8c8d", " stroke-dasharray=\"5,4\"");

  const double lx = left + pw - 170, ly = top + 12;
  const char* names[] = {"theory (calibrated)", "max empirical", "mean empirical"};
  const char* colours[] = {"#c0392b", "#2c3e50", "#7f8c8d"};
  for (int i = 0; i < 3; ++i)
    os << "<line x1=\"" << lx << "\" y1=\"" << ly + 16 * i << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly + 16 * i
       << "\" stroke=\"" << colours[i] << "\" stroke-width=\"2\"/>\n<text x=\"" << lx + 30 << "\" y=\""
       << ly + 16 * i + 4 << "\">" << names[i] << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

} // namespace tvc
