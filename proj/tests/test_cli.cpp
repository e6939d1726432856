#include <cmath>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "zsspec/error.hpp"
#include "zsspec/experiment.hpp"

using namespace zs;

namespace {

const char* kTanhConfig = R"({
  "potential": {"family": "monotone-odd", "params": [2.0]},
  "lambda0": 1.0, "delta": 0.3,
  "h_list": [0.1, 0.05], "eps_list": [0.05],
  "seed_metadata": "unit test"
})";

ErrorCode config_error_of(const std::string& text) {
  try {
    config_from_json(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("config was accepted: " << text);
  return ErrorCode::InvalidSpec;
}

std::string records_csv(const RecordsReport& r) {
  std::ostringstream out;
  write_records_csv(out, r.records);
  return out.str();
}

}  // namespace

TEST_CASE("number formatting is fixed at 17 significant digits") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-2.0) == "-2");
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(1e-20) == "9.9999999999999995e-21");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("config parsing and validation") {
  const ExperimentConfig c = config_from_json(kTanhConfig);
  CHECK(c.potential.family == Family::MonotoneOdd);
  CHECK(c.potential.strip_half_width == 0.5);
  CHECK(c.h_list == std::vector<double>{0.1, 0.05});
  CHECK(c.tolerances.quad_max_nodes == 4096);

  const std::string pot = R"("potential": {"family": "well-even", "params": [2, 1]})";
  CHECK(config_error_of("{" + pot + R"(, "h_list": []})") == ErrorCode::ConfigError);
  CHECK(config_error_of("{" + pot + R"(, "h_list": [0.05, 0.1]})") == ErrorCode::ConfigError);
  CHECK(config_error_of("{" + pot + R"(, "h_list": [0.1, -0.05]})") == ErrorCode::ConfigError);
  CHECK(config_error_of("{" + pot + R"(, "h_list": [0.1], "delta": -1})") == ErrorCode::ConfigError);
  CHECK(config_error_of("{" + pot + R"(, "h_list": [0.1], "tolerances": {"ode_rel": 0}})") ==
        ErrorCode::ConfigError);
  CHECK(config_error_of("{" + pot + R"(, "h_list": [0.1], "tolerances": {"bogus": 1}})") ==
        ErrorCode::ConfigError);
  CHECK(config_error_of("{" + pot + R"(, "h_list": [0.1], "colour": 3})") == ErrorCode::ConfigError);
  CHECK(config_error_of(R"({"potential": {"family": "quartic"}, "h_list": [0.1]})") == ErrorCode::ConfigError);
  CHECK(config_error_of("{not json") == ErrorCode::ConfigError);
}

TEST_CASE("config canonical form and hash") {
  const ExperimentConfig c = config_from_json(kTanhConfig);
  const ExperimentConfig again = config_from_json(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));
  CHECK(config_hash(again) == config_hash(c));
  CHECK(config_hash(c).size() == 16);
  ExperimentConfig changed = c;
  changed.tolerances.ode_rel = 1e-9;
  CHECK(config_hash(changed) != config_hash(c));
  const std::string meta = csv_metadata(c, "wkb");
  CHECK(meta.find("# config_hash=" + config_hash(c)) != std::string::npos);
  CHECK(meta.find("ode_rel=1e-10") != std::string::npos);
}

TEST_CASE("potential JSON round-trip") {
  const PotentialSpec spec = test::control_spec().potential;
  const PotentialSpec back = potential_from_json(potential_to_json(spec));
  CHECK(back.family == spec.family);
  CHECK(back.params == spec.params);
  CHECK(back.strip_half_width == spec.strip_half_width);
}

TEST_CASE("record CSV round-trip") {
  std::vector<EigenvalueRecord> records(2);
  records[0] = {cplx(1.25, -3e-17), 4, Branch::Integer, Method::Direct, 1e-14, 0.05, 0.01};
  records[1] = {cplx(0.1, 0.0), 0, Branch::HalfInteger, Method::Wkb, 0.0, 0.025, 0.0};
  std::stringstream io;
  io << "# comment line\n";
  write_records_csv(io, records);
  const auto back = read_records_csv(io);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].lambda == records[i].lambda);
    CHECK(back[i].k == records[i].k);
    CHECK(back[i].branch == records[i].branch);
    CHECK(back[i].method == records[i].method);
    CHECK(back[i].residual == records[i].residual);
    CHECK(back[i].h == records[i].h);
    CHECK(back[i].eps == records[i].eps);
  }
}

TEST_CASE("comparison CSV recomputes abs_diff on load") {
  ComparisonRow row;
  row.h = 0.05;
  row.lambda_wkb = cplx(1.0, 0.0);
  row.lambda_direct = cplx(1.0003, 0.0004);
  row.abs_diff = 42.0;  // deliberately wrong
  ComparisonRow lonely;
  lonely.h = 0.05;
  lonely.lambda_direct = cplx(1.2, 0.0);
  lonely.errors = "unmatched, direct";
  std::stringstream io;
  write_comparison_csv(io, {row, lonely});
  const auto back = read_comparison_csv(io);
  REQUIRE(back.size() == 2);
  REQUIRE(back[0].abs_diff.has_value());
  CHECK(*back[0].abs_diff == doctest::Approx(5e-4).epsilon(1e-12));
  CHECK(!back[1].abs_diff.has_value());
  CHECK(!back[1].lambda_wkb.has_value());
  CHECK(back[1].errors == "unmatched; direct");
}

TEST_CASE("nearest-eigenvalue matching") {
  auto rec = [](double re, int k) {
    EigenvalueRecord r;
    r.lambda = re;
    r.k = k;
    return r;
  };
  const std::vector<EigenvalueRecord> wkb{rec(1.0, 3), rec(1.1, 4), rec(1.2, 5)};
  const std::vector<EigenvalueRecord> direct{rec(1.2001, 2), rec(1.0002, 0), rec(1.0999, 1)};
  const auto rows = match_spectra(0.05, 0.0, wkb, direct);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    REQUIRE(r.lambda_wkb.has_value());
    REQUIRE(r.lambda_direct.has_value());
    CHECK(*r.abs_diff < 3e-4);
  }
  CHECK(rows[0].k_proxy == 3);

  const auto extra = match_spectra(0.05, 0.0, wkb, {rec(1.0002, 0)});
  int one_sided = 0;
  for (const auto& r : extra) one_sided += !r.lambda_direct.has_value();
  CHECK(one_sided == 2);
}

TEST_CASE("log-log slope fit") {
  const std::vector<double> h{0.1, 0.05, 0.025};
  CHECK(*fit_loglog_slope(h, {3e-2, 7.5e-3, 1.875e-3}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(!fit_loglog_slope({0.1}, {1.0}).has_value());
}

TEST_CASE("sweep cells always include the eps = 0 baseline") {
  const auto cells = sweep_cells(config_from_json(kTanhConfig));
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].h == 0.1);
  CHECK(cells[0].eps == 0.0);
  CHECK(cells[1].eps == 0.05);
}

TEST_CASE("worker pool output does not depend on the job count") {
  std::vector<int> out(50);
  parallel_for(50, 4, [&](int i) { out[i] = i * i; });
  for (int i = 0; i < 50; ++i) CHECK(out[i] == i * i);

  const ExperimentConfig c = config_from_json(kTanhConfig);
  const std::string serial = records_csv(run_wkb(c, 1));
  CHECK(records_csv(run_wkb(c, 3)) == serial);
  CHECK(records_csv(run_wkb(c, 1)) == serial);
}

TEST_CASE("compare reports the unperturbed convergence data") {
  ExperimentConfig c = config_from_json(kTanhConfig);
  c.eps_list = {0.0};
  const CompareReport r = run_compare(c, 2);
  CHECK(r.failed_cells == 0);
  CHECK(r.max_diff.size() == 2);
  for (const auto& row : r.rows) {
    CHECK(row.lambda_wkb.has_value());
    CHECK(row.lambda_direct.has_value());
  }
}

TEST_CASE("stokes graph JSON round-trip") {
  const ExperimentConfig c = config_from_json(kTanhConfig);
  const StokesGraph g = run_stokes(c, 1.0, 0.0);
  const std::string text = graph_to_json(g, metadata_json(c, "stokes"));
  const StokesGraph back = graph_from_json(text);
  REQUIRE(back.curves.size() == 6);
  CHECK(back.turning_points == g.turning_points);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(back.curves[i].points == g.curves[i].points);
    CHECK(back.curves[i].termination == g.curves[i].termination);
    CHECK(back.curves[i].end_index == g.curves[i].end_index);
  }
  CHECK(has_connecting_curve(back));
  CHECK(text.find(config_hash(c)) != std::string::npos);
}
