#include "zsspec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "zsspec/direct.hpp"
#include "zsspec/error.hpp"

namespace zs {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

bool record_less(const EigenvalueRecord& a, const EigenvalueRecord& b) {
  if (a.h != b.h) return a.h > b.h;
  if (a.eps != b.eps) return a.eps < b.eps;
  if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
  return a.lambda.imag() < b.lambda.imag();
}

struct CellOutcome {
  std::vector<EigenvalueRecord> records;
  std::vector<std::string> errors;
};

// Per-cell runner shared by the sweeps: converts thrown errors into messages.
template <class Fn>
std::vector<CellOutcome> run_cells(const std::vector<Cell>& cells, int jobs, Fn fn) {
  std::vector<CellOutcome> out(cells.size());
  parallel_for(static_cast<int>(cells.size()), jobs, [&](int i) {
    try {
      out[i] = fn(cells[i]);
    } catch (const std::exception& e) {
      out[i].errors.emplace_back(e.what());
    }
  });
  return out;
}

CellOutcome wkb_cell(const ExperimentConfig& config, const Cell& cell) {
  const Problem problem(problem_spec(config, cell.h, cell.eps));
  WkbSpectrum spec = wkb_spectrum(problem);
  return {std::move(spec.records), std::move(spec.errors)};
}

CellOutcome direct_cell(const ExperimentConfig& config, const Cell& cell) {
  const Problem problem(problem_spec(config, cell.h, cell.eps));
  ComplexSpectrum spec = direct_spectrum_complex(problem);
  if (!spec.complete && spec.errors.empty()) {
    spec.errors.push_back("winding " + std::to_string(spec.count.winding) + " != found " +
                          std::to_string(spec.records.size()));
  }
  return {std::move(spec.records), std::move(spec.errors)};
}

RecordsReport collect(const std::vector<Cell>& cells, std::vector<CellOutcome> outcomes) {
  RecordsReport report;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& o = outcomes[i];
    report.records.insert(report.records.end(), o.records.begin(), o.records.end());
    if (!o.errors.empty()) {
      ++report.failed_cells;
      report.errors.push_back("h=" + format_double(cells[i].h) + " eps=" + format_double(cells[i].eps) + ": " +
                              join(o.errors));
    }
  }
  std::sort(report.records.begin(), report.records.end(), record_less);
  return report;
}

}  // namespace

std::vector<Cell> sweep_cells(const ExperimentConfig& config) {
  std::vector<double> eps = config.eps_list;
  if (std::find(eps.begin(), eps.end(), 0.0) == eps.end()) eps.push_back(0.0);
  std::sort(eps.begin(), eps.end());
  std::vector<double> hs = config.h_list;
  std::sort(hs.begin(), hs.end(), std::greater<>());
  std::vector<Cell> cells;
  for (double h : hs) {
    for (double e : eps) cells.push_back({h, e});
  }
  return cells;
}

ProblemSpec problem_spec(const ExperimentConfig& config, double h, double eps) {
  ProblemSpec spec;
  spec.potential = config.potential;
  spec.lambda0 = config.lambda0;
  spec.delta = config.delta;
  spec.h = h;
  spec.eps = eps;
  spec.cutoff = config.cutoff;
  spec.tol = config.tolerances;
  return spec;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(jobs, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

RecordsReport run_wkb(const ExperimentConfig& config, int jobs) {
  const auto cells = sweep_cells(config);
  return collect(cells, run_cells(cells, jobs, [&](const Cell& c) { return wkb_cell(config, c); }));
}

RecordsReport run_direct(const ExperimentConfig& config, int jobs) {
  const auto cells = sweep_cells(config);
  return collect(cells, run_cells(cells, jobs, [&](const Cell& c) { return direct_cell(config, c); }));
}

std::vector<ComparisonRow> match_spectra(double h, double eps, const std::vector<EigenvalueRecord>& wkb,
                                         const std::vector<EigenvalueRecord>& direct) {
  struct Candidate {
    double distance;
    std::size_t i, j;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < wkb.size(); ++i) {
    for (std::size_t j = 0; j < direct.size(); ++j) {
      candidates.push_back({std::abs(wkb[i].lambda - direct[j].lambda), i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.distance, a.i, a.j) < std::tie(b.distance, b.i, b.j);
  });
  std::vector<bool> used_wkb(wkb.size()), used_direct(direct.size());
  std::vector<ComparisonRow> rows;
  auto base = [&](Branch branch) {
    ComparisonRow r;
    r.h = h;
    r.eps = eps;
    r.branch = branch;
    return r;
  };
  for (const auto& c : candidates) {
    if (used_wkb[c.i] || used_direct[c.j]) continue;
    used_wkb[c.i] = used_direct[c.j] = true;
    ComparisonRow r = base(wkb[c.i].branch);
    r.k_proxy = wkb[c.i].k;
    r.lambda_wkb = wkb[c.i].lambda;
    r.lambda_direct = direct[c.j].lambda;
    r.abs_diff = c.distance;
    rows.push_back(r);
  }
  for (std::size_t i = 0; i < wkb.size(); ++i) {
    if (used_wkb[i]) continue;
    ComparisonRow r = base(wkb[i].branch);
    r.k_proxy = wkb[i].k;
    r.lambda_wkb = wkb[i].lambda;
    r.errors = "unmatched wkb eigenvalue";
    rows.push_back(r);
  }
  for (std::size_t j = 0; j < direct.size(); ++j) {
    if (used_direct[j]) continue;
    ComparisonRow r = base(direct[j].branch);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& w : wkb) {
      if (std::abs(w.lambda - direct[j].lambda) < best) {
        best = std::abs(w.lambda - direct[j].lambda);
        r.k_proxy = w.k;
      }
    }
    r.lambda_direct = direct[j].lambda;
    r.errors = "unmatched direct eigenvalue";
    rows.push_back(r);
  }
  auto key = [](const ComparisonRow& r) {
    const cplx z = r.lambda_wkb ? *r.lambda_wkb : *r.lambda_direct;
    return std::make_tuple(z.real(), z.imag(), r.lambda_wkb.has_value());
  };
  std::sort(rows.begin(), rows.end(), [&](const ComparisonRow& a, const ComparisonRow& b) { return key(a) < key(b); });
  return rows;
}

std::optional<double> fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2 || denom == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

CompareReport run_compare(const ExperimentConfig& config, int jobs) {
  const auto cells = sweep_cells(config);
  struct Pair {
    CellOutcome wkb, direct;
  };
  std::vector<Pair> outcomes(cells.size());
  // both methods of a cell are one job; the direct solve dominates the cost
  parallel_for(static_cast<int>(cells.size()), jobs, [&](int i) {
    try {
      outcomes[i].wkb = wkb_cell(config, cells[i]);
    } catch (const std::exception& e) {
      outcomes[i].wkb.errors.emplace_back(e.what());
    }
    try {
      outcomes[i].direct = direct_cell(config, cells[i]);
    } catch (const std::exception& e) {
      outcomes[i].direct.errors.emplace_back(e.what());
    }
  });

  CompareReport report;
  std::vector<double> hs, diffs;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& [h, eps] = cells[i];
    auto rows = match_spectra(h, eps, outcomes[i].wkb.records, outcomes[i].direct.records);
    std::vector<std::string> errors;
    for (const auto& e : outcomes[i].wkb.errors) errors.push_back("wkb: " + e);
    for (const auto& e : outcomes[i].direct.errors) errors.push_back("direct: " + e);
    if (!errors.empty()) {
      ++report.failed_cells;
      const std::string note = join(errors);
      if (rows.empty()) {
        ComparisonRow r;
        r.h = h;
        r.eps = eps;
        rows.push_back(r);
      }
      for (auto& r : rows) r.errors = r.errors.empty() ? note : r.errors + "; " + note;
    }
    if (eps == 0.0) {
      double worst = 0.0;
      for (const auto& r : rows) {
        if (r.abs_diff) worst = std::max(worst, *r.abs_diff);
      }
      report.max_diff.emplace_back(h, worst);
      hs.push_back(h);
      diffs.push_back(worst);
    }
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  report.slope = fit_loglog_slope(hs, diffs);
  return report;
}

PtReport run_pt_sweep(const ExperimentConfig& config, int jobs) {
  const auto cells = sweep_cells(config);
  PtReport report;
  report.rows.resize(cells.size());
  parallel_for(static_cast<int>(cells.size()), jobs, [&](int i) {
    PtRow& row = report.rows[i];
    row.h = cells[i].h;
    row.eps = cells[i].eps;
    try {
      const Problem problem(problem_spec(config, row.h, row.eps));
      row.symmetry = problem.symmetry();
      const ComplexSpectrum spec = direct_spectrum_complex(problem);
      row.found = static_cast<int>(spec.records.size());
      row.winding = spec.count.winding;
      row.complete = spec.complete;
      for (const auto& r : spec.records) row.max_im = std::max(row.max_im, std::abs(r.lambda.imag()));
      row.errors = join(spec.errors);
    } catch (const std::exception& e) {
      row.errors = e.what();
    }
  });
  std::sort(report.rows.begin(), report.rows.end(), [](const PtRow& a, const PtRow& b) {
    return std::make_pair(a.eps, -a.h) < std::make_pair(b.eps, -b.h);
  });
  for (const auto& r : report.rows) {
    if (!r.errors.empty() || !r.complete) ++report.failed_cells;
  }
  return report;
}

StokesGraph run_stokes(const ExperimentConfig& config, cplx lambda, double eps) {
  const Problem problem(problem_spec(config, config.h_list.front(), eps));
  return build_graph(problem, lambda);
}

}  // namespace zs
