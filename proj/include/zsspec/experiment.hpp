#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zsspec/io.hpp"

namespace zs {

/// One (h, eps) point of a sweep.
struct Cell {
  double h = 0.0;
  double eps = 0.0;
};

/// h_list x (eps_list + {0}), ordered by descending h and ascending eps.
std::vector<Cell> sweep_cells(const ExperimentConfig& config);

ProblemSpec problem_spec(const ExperimentConfig& config, double h, double eps);

/// Runs fn(0..n-1) on up to `jobs` threads. Results land at their own index, so the output
/// order never depends on scheduling.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

struct RecordsReport {
  std::vector<EigenvalueRecord> records;
  std::vector<std::string> errors;
  int failed_cells = 0;
};

RecordsReport run_wkb(const ExperimentConfig& config, int jobs = 1);
/// Complex direct solver per cell; a cell whose winding count disagrees with its roots fails.
RecordsReport run_direct(const ExperimentConfig& config, int jobs = 1);

/// Pairs eigenvalues by ascending distance (greedy nearest-neighbour). Leftovers become
/// one-sided rows. k_proxy is the index of the nearest WKB eigenvalue.
std::vector<ComparisonRow> match_spectra(double h, double eps, const std::vector<EigenvalueRecord>& wkb,
                                         const std::vector<EigenvalueRecord>& direct);

/// Least-squares slope of log y against log x; nullopt with fewer than two usable points.
std::optional<double> fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct CompareReport {
  std::vector<ComparisonRow> rows;
  /// (h, max abs_diff) at eps = 0, descending h.
  std::vector<std::pair<double, double>> max_diff;
  std::optional<double> slope;
  int failed_cells = 0;
};

CompareReport run_compare(const ExperimentConfig& config, int jobs = 1);

struct PtReport {
  std::vector<PtRow> rows;
  int failed_cells = 0;
};

PtReport run_pt_sweep(const ExperimentConfig& config, int jobs = 1);

/// Stokes graph at (lambda, eps) with the first h of the config.
StokesGraph run_stokes(const ExperimentConfig& config, cplx lambda, double eps);

}  // namespace zs
