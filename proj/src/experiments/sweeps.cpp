#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "tvc/experiments.hpp"
#include "tvc/rng.hpp"

namespace tvc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs job(0..count-1) on `threads` workers; the first exception is rethrown.
template <typename Job>
void parallel_for(std::size_t count, int threads, Job job) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_lock);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

struct Realization {
  double error = 0.0;
  int iterations = 0;
  bool converged = false;
};

Realization run_realization(const ScalarField& f, double rho, const SweepConfig& cfg, std::uint64_t seed) {
  const Index total = f.size();
  const Index m = std::clamp<Index>(std::llround(rho * static_cast<double>(total)), 1, total);
  const SampleSet samples = sample_uniform_subset(total, m, substream_seed(seed, {0}));
  SolveResult r;
  if (cfg.eta == 0.0) {
    r = solve_equality(TVProblem::from_field(f, samples, 0.0, 1.0), cfg.solver);
  } else {
    const Eigen::ArrayXd g = noisy_observation(f, samples, cfg.eta, 1.0, substream_seed(seed, {1}));
    r = solve(TVProblem::make(f.shape(), samples, g, cfg.eta, 1.0), cfg.solver);
  }
  return {(r.u.values() - f.values()).square().mean(), r.iterations, r.converged};
}

Report run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  Report report;
  report.kind = cfg.mode == SweepMode::Density ? "density" : "resolution";
  report.config = cfg;

  std::vector<ScalarField> phantoms;
  if (cfg.mode == SweepMode::Density) {
    phantoms.push_back(shepp_logan(cfg.N, cfg.phantom));
    for (double rho : cfg.rhos) {
      CellReport c;
      char buf[32];
      std::snprintf(buf, sizeof buf, "rho=%g", rho);
      c.label = buf;
      c.parameter = rho;
      c.N = cfg.N;
      c.rho = rho;
      c.shape = 1.0 / std::sqrt(rho);
      report.cells.push_back(c);
    }
  } else {
    for (int J : cfg.levels) {
      phantoms.push_back(shepp_logan(Index{1} << J, cfg.phantom));
      CellReport c;
      c.label = "J=" + std::to_string(J);
      c.parameter = J;
      c.N = Index{1} << J;
      c.rho = cfg.resolution_rho;
      c.shape = std::pow(J, 1.5) * std::pow(2.0, -0.5 * J);
      report.cells.push_back(c);
    }
  }

  const std::size_t cells = report.cells.size();
  const std::size_t reps = static_cast<std::size_t>(cfg.realizations);
  std::vector<Realization> out(cells * reps);
  std::vector<double> seconds(cells * reps, 0.0);
  parallel_for(out.size(), cfg.threads, [&](std::size_t task) {
    const std::size_t cell = task / reps, rep = task % reps;
    const ScalarField& f = phantoms[cfg.mode == SweepMode::Density ? 0 : cell];
    const auto start = Clock::now();
    out[task] = run_realization(f, report.cells[cell].rho, cfg, substream_seed(cfg.seed, {cell, rep}));
    seconds[task] = seconds_since(start);
  });

  for (std::size_t cell = 0; cell < cells; ++cell) {
    CellReport& c = report.cells[cell];
    const Index total = c.N * c.N;
    c.m = std::clamp<Index>(std::llround(c.rho * static_cast<double>(total)), 1, total);
    double sum = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const Realization& r = out[cell * reps + rep];
      c.errors.push_back(r.error);
      c.iterations.push_back(r.iterations);
      c.converged.push_back(r.converged);
      c.max_error = std::max(c.max_error, r.error);
      sum += r.error;
      c.wall_seconds += seconds[cell * reps + rep];
      if (!r.converged) ++report.nonconverged;
    }
    c.mean_error = sum / static_cast<double>(reps);
  }
  calibrate(report);
  report.wall_seconds = seconds_since(t0);
  return report;
}

} // namespace

SweepConfig SweepConfig::density_defaults() { return SweepConfig{}; }

SweepConfig SweepConfig::resolution_defaults() {
  SweepConfig cfg;
  cfg.mode = SweepMode::Resolution;
  return cfg;
}

void SweepConfig::validate() const {
  if (realizations < 1) throw ParameterError("sweep: realizations must be >= 1");
  if (!(eta >= 0.0) || eta >= 1.0) throw ParameterError("sweep: eta must be in [0, 1)");
  if (threads < 0) throw ParameterError("sweep: threads must be >= 0");
  solver.validate();
  if (mode == SweepMode::Density) {
    if (N < 8) throw ParameterError("sweep: N must be >= 8");
    if (rhos.empty()) throw ParameterError("sweep: rho list is empty");
    for (double r : rhos)
      if (!(r > 0.0 && r <= 1.0)) throw ParameterError("sweep: rho must lie in (0, 1]");
  } else {
    if (levels.empty()) throw ParameterError("sweep: J list is empty");
    for (int J : levels)
      if (J < 3 || J > 12) throw ParameterError("sweep: J must lie in [3, 12]");
    if (!(resolution_rho > 0.0 && resolution_rho <= 1.0)) throw ParameterError("sweep: rho must lie in (0, 1]");
  }
}

Report run_density_sweep(const SweepConfig& cfg) {
  SweepConfig c = cfg;
  c.mode = SweepMode::Density;
  return run_sweep(c);
}

Report run_resolution_sweep(const SweepConfig& cfg) {
  SweepConfig c = cfg;
  c.mode = SweepMode::Resolution;
  return run_sweep(c);
}

void calibrate(Report& report) {
  if (report.cells.empty()) return;
  // Worst cell: lowest density or coarsest resolution.
  std::size_t worst = 0;
  for (std::size_t i = 1; i < report.cells.size(); ++i)
    if (report.cells[i].parameter < report.cells[worst].parameter) worst = i;
  const CellReport& w = report.cells[worst];
  report.constant = w.max_error / w.shape;
  report.violations = 0;
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    CellReport& c = report.cells[i];
    c.calibration = i == worst;
    c.theory = c.calibration ? c.max_error : report.constant * c.shape;
    c.violation = !c.calibration && c.max_error > c.theory;
    if (c.violation) ++report.violations;
  }
}

} // namespace tvc
