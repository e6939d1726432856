#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zsspec/problem.hpp"
#include "zsspec/quantize.hpp"
#include "zsspec/stokes.hpp"

namespace zs {

struct ExperimentConfig {
  PotentialSpec potential;
  double lambda0 = 1.5;
  double delta = 0.2;
  std::vector<double> h_list;
  /// Perturbation strengths; the eps = 0 baseline is always run in addition.
  std::vector<double> eps_list;
  double cutoff = 8.0;
  Tolerances tolerances;
  std::string output_dir = ".";
  std::string seed_metadata;
};

/// One row of the cross-method table. A missing side means the eigenvalue was unmatched.
struct ComparisonRow {
  double h = 0.0;
  double eps = 0.0;
  int k_proxy = 0;
  std::optional<cplx> lambda_wkb;
  std::optional<cplx> lambda_direct;
  std::optional<double> abs_diff;
  Branch branch = Branch::HalfInteger;
  std::string errors;
};

struct PtRow {
  double eps = 0.0;
  double h = 0.0;
  double max_im = 0.0;
  int found = 0;
  int winding = 0;
  bool complete = false;
  SymmetryClass symmetry = SymmetryClass::None;
  std::string errors;
};

/// 17 significant digits, locale independent.
std::string format_double(double value);

std::string potential_to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const std::string& text);

/// Parses and validates a config document; throws ConfigError with a readable message.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Canonical form: keys sorted, every tolerance spelled out.
std::string config_to_json(const ExperimentConfig& config);
/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Name/value pairs of every tolerance, in declaration order.
std::vector<std::pair<std::string, double>> tolerance_entries(const Tolerances& tol);

/// '#'-prefixed provenance lines written ahead of every CSV header.
std::string csv_metadata(const ExperimentConfig& config, const std::string& kind);

void write_records_csv(std::ostream& out, const std::vector<EigenvalueRecord>& records);
std::vector<EigenvalueRecord> read_records_csv(std::istream& in);

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);
/// abs_diff is recomputed from the lambda columns, not trusted from the file.
std::vector<ComparisonRow> read_comparison_csv(std::istream& in);

void write_pt_csv(std::ostream& out, const std::vector<PtRow>& rows);

/// {turning_points: [[re, im]...], curves: [{origin, angle, points, termination, ...}]} plus an
/// optional metadata object.
std::string graph_to_json(const StokesGraph& graph, const std::string& metadata_json = "");
StokesGraph graph_from_json(const std::string& text);

/// Metadata object (config hash, tolerances, seed metadata) embedded in JSON outputs.
std::string metadata_json(const ExperimentConfig& config, const std::string& kind);

}  // namespace zs
