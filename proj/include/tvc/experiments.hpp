#pragma once

// Simulation campaigns: density and resolution sweeps on the Shepp-Logan
// phantom with worst-cell calibration, the 1-D step example with its family
// of non-unique minimizers, and the continuum pipeline for BV test functions.

#include <cstdint>
#include <string>
#include <vector>

#include "tvc/bounds.hpp"
#include "tvc/bvapprox.hpp"
#include "tvc/grid.hpp"
#include "tvc/io.hpp"
#include "tvc/solver.hpp"

namespace tvc {

enum class PhantomKind { Modified, Classic };

std::string to_string(PhantomKind kind);
PhantomKind phantom_kind_from_string(const std::string& name);

/// n x n Shepp-Logan head phantom on [-1,1]^2, first row at y = 1, clamped to [0,1].
ScalarField shepp_logan(Index n, PhantomKind kind = PhantomKind::Modified);

/// Membership test for row `row` (0..9) of the ellipse table.
bool phantom_ellipse_contains(int row, double x, double y);
double phantom_intensity(int row, PhantomKind kind);

enum class SweepMode { Density, Resolution };

struct SweepConfig {
  SweepMode mode = SweepMode::Density;
  Index N = 64;                      // density mode grid extent
  std::vector<double> rhos{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  std::vector<int> levels{4, 5, 6};  // resolution mode: N = 2^J
  double resolution_rho = 0.5;
  int realizations = 20;
  double eta = 0.0;
  std::uint64_t seed = 20240601;
  SolverConfig solver;
  PhantomKind phantom = PhantomKind::Modified;
  int threads = 0;  // 0: hardware concurrency

  static SweepConfig density_defaults();
  static SweepConfig resolution_defaults();
  void validate() const;
};

struct CellReport {
  std::string label;
  double parameter = 0.0;  // rho (density) or J (resolution)
  Index N = 0;
  double rho = 0.0;
  Index m = 0;
  std::vector<double> errors;  // (1/|Omega|) |u - f|^2 per realization
  std::vector<int> iterations;
  std::vector<bool> converged;
  double max_error = 0.0;
  double mean_error = 0.0;
  double shape = 0.0;   // rho^-1/2 or J^3/2 2^-J/2
  double theory = 0.0;  // calibrated constant times shape
  bool calibration = false;
  bool violation = false;
  double wall_seconds = 0.0;
};

struct Report {
  std::string kind;  // "density" or "resolution"
  SweepConfig config;
  std::vector<CellReport> cells;
  double constant = 0.0;  // calibrated c
  int violations = 0;
  int nonconverged = 0;
  double wall_seconds = 0.0;
};

/// Runs every (cell, realization) pair on a thread pool; results are
/// index-ordered, so the report depends only on the configuration.
Report run_density_sweep(const SweepConfig& cfg);
Report run_resolution_sweep(const SweepConfig& cfg);

/// Sets theory = c * shape with c fixed by equality at the calibration cell
/// and counts cells whose max error exceeds their theory value.
void calibrate(Report& report);

struct StepExampleRecord {
  Index N = 0;
  Index m = 0;
  long long trials = 0;
  long long misses = 0;          // trials with the jump index unsampled
  double empirical_miss_rate = 0.0;
  double exact_rate = 0.0;       // 1 - m/N
  long long constructed = 0;     // step minimizers built over all missed trials
  long long interpolation_failures = 0;
  long long tv_failures = 0;
  long long one_sided = 0;       // misses with samples on one side only
  double worst_solution_error = 0.0;      // min over missed trials of the worst minimizer error
  double mean_worst_solution_error = 0.0;
  long long below_threshold = 0;  // missed trials whose worst error < 1/N
};

/// Step f = 1_{k >= N/2}. On each trial with N/2 unsampled the minimizers
/// 1_{k >= L}, L = k1+1..k2, are built between the last sampled index below
/// N/2 and the first above it. With samples on one side only, the unique
/// minimizer is the constant of the sampled value.
StepExampleRecord step_signal_example(Index N, Index m, long long trials, std::uint64_t seed);

struct PipelineTrial {
  double discrete_error = 0.0;   // (1/2^2J) |u - f|^2
  double continuum_error = 0.0;  // |u_J - f|^2_L2
  bool converged = false;
  int iterations = 0;
  double tv_value = 0.0;
};

struct PipelineReport {
  int J = 0;
  double rho = 0.0;
  double eta = 0.0;
  double M = 1.0;
  double tv_f = 0.0;
  std::uint64_t seed = 0;
  ContinuumBounds bounds;
  double thm5_bound = 0.0;  // (16 + 4 sqrt(pi)) 2^-J TV(f) |f|_inf
  double sampling_error = 0.0;  // |f_J - f|^2_L2
  bool reduced_form = false;    // J >= -2 log2(eta)
  std::optional<long long> support_count;  // |S| for piecewise-constant f
  std::optional<PiecewiseBounds> piecewise;
  std::vector<PipelineTrial> trials;
  int discrete_violations = 0;
  int continuum_violations = 0;
  int nonconverged = 0;
};

struct PipelineConfig {
  int J = 4;
  double rho = 0.5;
  double eta = 0.0;
  double M = 1.0;
  int trials = 20;
  double a = 1.0;
  std::uint64_t seed = 7;
  SolverConfig solver;
  int threads = 0;
};

/// Samples f by cell averages, observes a random subset (with bounded noise of
/// masked MSE exactly eta^2 before clipping to [0, M]), solves, and compares
/// discrete and continuum errors with the continuum bounds.
PipelineReport full_pipeline_thm4(const AnalyticFunction2D& f, const PipelineConfig& cfg);

/// Noisy observation of f on the samples: f + e with |e|^2 / m = eta^2, then
/// clipped to [0, M] (which can only shrink the residual).
Eigen::ArrayXd noisy_observation(const ScalarField& f, const SampleSet& samples, double eta, double M,
                                 std::uint64_t seed);

Json to_json(const SweepConfig& cfg);
Json to_json(const Report& report, bool include_timing = true);
Json to_json(const StepExampleRecord& record);
Json to_json(const PipelineReport& report);

/// cell,parameter,N,rho,m,max_err,mean_err,theory,calibration,violations,nonconverged
std::string summary_csv(const Report& report);

/// Log-scale plot of max and mean empirical error against the theory curve.
std::string report_svg(const Report& report);

} // namespace tvc
