// Batch driver: validate | wkb | direct | compare | pt-sweep | stokes.
//
// Exit status: 0 on success, 1 for configuration errors, 2 when at least one sweep cell
// failed numerically (outputs are still written).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "zsspec/error.hpp"
#include "zsspec/experiment.hpp"

namespace {

using namespace zs;

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct Options {
  std::string config;
  std::string out;
  int jobs = 1;
  bool verbose = false;
  double lambda_re = std::nan("");
  double lambda_im = 0.0;
  double eps = 0.0;
};

bool is_config_error(const Error& e) {
  return e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::InvalidSpec ||
         e.code() == ErrorCode::A1Violated;
}

std::string output_path(const Options& opt, const ExperimentConfig& config, const std::string& name) {
  if (!opt.out.empty()) return opt.out;
  return (std::filesystem::path(config.output_dir) / name).string();
}

void write_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
  out << content;
}

void report_errors(const Options& opt, const std::vector<std::string>& errors) {
  if (!opt.verbose) return;
  for (const auto& e : errors) std::cerr << "  " << e << '\n';
}

int cmd_validate(const Options& opt, const ExperimentConfig& config) {
  std::ostringstream out;
  out << csv_metadata(config, "validate");
  out << "h,eps,alpha0,beta0,well_type,symmetry_class,x_left,x_right\n";
  for (const auto& cell : sweep_cells(config)) {
    const Problem p(problem_spec(config, cell.h, cell.eps));
    out << format_double(cell.h) << ',' << format_double(cell.eps) << ',' << format_double(p.a1().alpha0) << ','
        << format_double(p.a1().beta0) << ',' << to_string(p.a1().well_type) << ',' << to_string(p.symmetry())
        << ',' << format_double(p.x_left()) << ',' << format_double(p.x_right()) << '\n';
  }
  if (opt.out.empty()) {
    std::cout << out.str();
  } else {
    write_file(opt.out, out.str());
  }
  std::cerr << "config ok (hash " << config_hash(config) << ")\n";
  return 0;
}

int cmd_records(const Options& opt, const ExperimentConfig& config, bool direct) {
  const RecordsReport report = direct ? run_direct(config, opt.jobs) : run_wkb(config, opt.jobs);
  std::ostringstream out;
  out << csv_metadata(config, direct ? "direct" : "wkb");
  write_records_csv(out, report.records);
  const std::string path = output_path(opt, config, direct ? "direct.csv" : "wkb.csv");
  write_file(path, out.str());
  std::cerr << report.records.size() << " eigenvalues, " << report.failed_cells << " failed cells -> " << path
            << '\n';
  report_errors(opt, report.errors);
  return report.failed_cells > 0 ? kExitNumerical : 0;
}

int cmd_compare(const Options& opt, const ExperimentConfig& config) {
  const CompareReport report = run_compare(config, opt.jobs);
  std::ostringstream out;
  out << csv_metadata(config, "compare");
  for (const auto& [h, diff] : report.max_diff) {
    out << "# max_abs_diff h=" << format_double(h) << " eps=0: " << format_double(diff) << '\n';
  }
  out << "# slope_eps0=" << (report.slope ? format_double(*report.slope) : "nan") << '\n';
  write_comparison_csv(out, report.rows);
  const std::string path = output_path(opt, config, "compare.csv");
  write_file(path, out.str());
  std::cerr << report.rows.size() << " rows, slope "
            << (report.slope ? format_double(*report.slope) : std::string("n/a")) << ", " << report.failed_cells
            << " failed cells -> " << path << '\n';
  if (opt.verbose) {
    for (const auto& r : report.rows) {
      if (!r.errors.empty()) std::cerr << "  h=" << r.h << " eps=" << r.eps << ": " << r.errors << '\n';
    }
  }
  return report.failed_cells > 0 ? kExitNumerical : 0;
}

int cmd_pt_sweep(const Options& opt, const ExperimentConfig& config) {
  const PtReport report = run_pt_sweep(config, opt.jobs);
  std::ostringstream out;
  out << csv_metadata(config, "pt-sweep");
  write_pt_csv(out, report.rows);
  const std::string path = output_path(opt, config, "pt_sweep.csv");
  write_file(path, out.str());
  std::cerr << report.rows.size() << " cells, " << report.failed_cells << " failed -> " << path << '\n';
  if (opt.verbose) {
    for (const auto& r : report.rows) {
      std::cerr << "  eps=" << r.eps << " h=" << r.h << " max|Im|=" << r.max_im << " found=" << r.found
                << " winding=" << r.winding << (r.errors.empty() ? "" : " " + r.errors) << '\n';
    }
  }
  return report.failed_cells > 0 ? kExitNumerical : 0;
}

int cmd_stokes(const Options& opt, const ExperimentConfig& config) {
  const cplx lambda(std::isnan(opt.lambda_re) ? config.lambda0 : opt.lambda_re, opt.lambda_im);
  const StokesGraph graph = run_stokes(config, lambda, opt.eps);
  const std::string path = output_path(opt, config, "stokes.json");
  write_file(path, graph_to_json(graph, metadata_json(config, "stokes")) + "\n");
  int connecting = 0;
  for (const auto& c : graph.curves) {
    if (c.termination == Termination::NearTurningPoint && c.end_index != c.origin_index) ++connecting;
  }
  std::cerr << graph.turning_points.size() << " turning points, " << graph.curves.size() << " curves, "
            << connecting << " ending at the other turning point -> " << path << '\n';
  report_errors(opt, graph.errors);
  return graph.errors.empty() ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical Zakharov-Shabat eigenvalue toolkit"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--jobs", opt.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", opt.verbose, "Print per-cell diagnostics");

  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "Experiment config (JSON)")->required();
    sub->add_option("--out", opt.out, "Output file (default: <output_dir>/<subcommand file>)");
    sub->add_option("--jobs", opt.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_flag("--verbose", opt.verbose, "Print per-cell diagnostics");
    return sub;
  };
  CLI::App* validate = add("validate", "Check the config and the well geometry of every cell");
  CLI::App* wkb = add("wkb", "Quantization-condition eigenvalues");
  CLI::App* direct = add("direct", "Shooting eigenvalues with winding-number completeness");
  CLI::App* compare = add("compare", "WKB vs direct table with the eps = 0 convergence slope");
  CLI::App* pt = add("pt-sweep", "Largest |Im lambda| per (eps, h)");
  CLI::App* stokes = add("stokes", "Stokes graph as JSON");
  stokes->add_option("--lambda-re", opt.lambda_re, "Re lambda (default lambda0)");
  stokes->add_option("--lambda-im", opt.lambda_im, "Im lambda");
  stokes->add_option("--eps", opt.eps, "Perturbation strength")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const ExperimentConfig config = load_config(opt.config);
    if (*validate) return cmd_validate(opt, config);
    if (*wkb) return cmd_records(opt, config, false);
    if (*direct) return cmd_records(opt, config, true);
    if (*compare) return cmd_compare(opt, config);
    if (*pt) return cmd_pt_sweep(opt, config);
    if (*stokes) return cmd_stokes(opt, config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_config_error(e) ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
