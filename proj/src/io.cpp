#include "zsspec/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "zsspec/error.hpp"

namespace zs {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

struct RealTol {
  const char* name;
  double Tolerances::*field;
};
struct IntTol {
  const char* name;
  int Tolerances::*field;
};

constexpr RealTol kRealTols[] = {
    {"root_residual", &Tolerances::root_residual},
    {"root_step", &Tolerances::root_step},
    {"collision", &Tolerances::collision},
    {"quad_rel", &Tolerances::quad_rel},
    {"quantize_residual", &Tolerances::quantize_residual},
    {"ode_rel", &Tolerances::ode_rel},
    {"ode_abs", &Tolerances::ode_abs},
    {"ode_min_step", &Tolerances::ode_min_step},
    {"bracket", &Tolerances::bracket},
    {"newton_fd_step", &Tolerances::newton_fd_step},
    {"distinct", &Tolerances::distinct},
    {"boundary_zero", &Tolerances::boundary_zero},
    {"stokes_step", &Tolerances::stokes_step},
    {"stokes_max_length", &Tolerances::stokes_max_length},
    {"stokes_start", &Tolerances::stokes_start},
};
constexpr IntTol kIntTols[] = {
    {"homotopy_steps", &Tolerances::homotopy_steps},
    {"newton_cap", &Tolerances::newton_cap},
    {"quad_min_nodes", &Tolerances::quad_min_nodes},
    {"quad_max_nodes", &Tolerances::quad_max_nodes},
    {"winding_max_samples", &Tolerances::winding_max_samples},
};

json potential_json(const PotentialSpec& spec) {
  return json{{"family", to_string(spec.family)}, {"params", spec.params}, {"strip_half_width", spec.strip_half_width}};
}

PotentialSpec parse_potential(const json& j) {
  if (!j.is_object()) config_error("potential must be an object");
  if (!j.contains("family") || !j["family"].is_string()) config_error("potential.family must be a string");
  PotentialSpec spec;
  try {
    spec.family = family_from_string(j["family"].get<std::string>());
  } catch (const Error& e) {
    config_error(e.what());
  }
  if (j.contains("params")) {
    if (!j["params"].is_array()) config_error("potential.params must be an array");
    for (const auto& v : j["params"]) {
      if (!v.is_number()) config_error("potential.params must hold numbers");
      spec.params.push_back(v.get<double>());
    }
  } else {
    spec.params = spec.family == Family::WellEven      ? PotentialSpec::well_even().params
                  : spec.family == Family::MonotoneOdd ? PotentialSpec::monotone_odd().params
                                                       : std::vector<double>{};
  }
  if (j.contains("strip_half_width")) {
    if (!j["strip_half_width"].is_number()) config_error("potential.strip_half_width must be a number");
    spec.strip_half_width = j["strip_half_width"].get<double>();
  } else {
    spec.strip_half_width = PotentialSpec::default_strip(spec.family, spec.params);
  }
  // reuse the factory checks on arity and ranges
  try {
    if (spec.family == Family::WellEven) {
      if (spec.params.size() != 2) config_error("well-even takes params [a, b]");
      PotentialSpec::well_even(spec.params[0], spec.params[1]);
    } else if (spec.family == Family::MonotoneOdd) {
      if (spec.params.size() != 1) config_error("monotone-odd takes params [a]");
      PotentialSpec::monotone_odd(spec.params[0]);
    } else {
      PotentialSpec::custom(spec.params, spec.strip_half_width);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error(e.what());
  }
  if (!(spec.strip_half_width > 0.0)) config_error("potential.strip_half_width must be positive");
  return spec;
}

double number_field(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) config_error(std::string(key) + " must be a number");
  return j[key].get<double>();
}

std::vector<double> list_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) config_error(std::string(key) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) config_error(std::string(key) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  if (out.empty()) config_error(std::string(key) + " must not be empty");
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i] < out[i - 1])) config_error(std::string(key) + " must be sorted strictly descending");
  }
  return out;
}

json tolerances_json(const Tolerances& tol) {
  json j = json::object();
  for (const auto& t : kRealTols) j[t.name] = tol.*t.field;
  for (const auto& t : kIntTols) j[t.name] = tol.*t.field;
  return j;
}

Tolerances parse_tolerances(const json& j) {
  Tolerances tol;
  if (!j.is_object()) config_error("tolerances must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) config_error("tolerance '" + key + "' must be a number");
    const double v = value.get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) config_error("tolerance '" + key + "' must be positive");
    bool known = false;
    for (const auto& t : kRealTols) {
      if (key == t.name) {
        tol.*t.field = v;
        known = true;
      }
    }
    for (const auto& t : kIntTols) {
      if (key == t.name) {
        if (v != std::floor(v) || v > 1e9) config_error("tolerance '" + key + "' must be an integer");
        tol.*t.field = static_cast<int>(v);
        known = true;
      }
    }
    if (!known) config_error("unknown tolerance '" + key + "'");
  }
  return tol;
}

json config_json(const ExperimentConfig& c) {
  return json{{"potential", potential_json(c.potential)},
              {"lambda0", c.lambda0},
              {"delta", c.delta},
              {"h_list", c.h_list},
              {"eps_list", c.eps_list},
              {"cutoff", c.cutoff},
              {"tolerances", tolerances_json(c.tolerances)},
              {"output_dir", c.output_dir},
              {"seed_metadata", c.seed_metadata}};
}

std::string sanitize(std::string text) {
  for (char& ch : text) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return text;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    config_error("malformed number '" + text + "' in CSV");
  }
  return v;
}

int parse_int(const std::string& text) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    config_error("malformed integer '" + text + "' in CSV");
  }
  return v;
}

Branch parse_branch(const std::string& text) {
  if (text == "half-integer") return Branch::HalfInteger;
  if (text == "integer") return Branch::Integer;
  config_error("unknown branch '" + text + "'");
}

Method parse_method(const std::string& text) {
  if (text == "wkb") return Method::Wkb;
  if (text == "direct") return Method::Direct;
  config_error("unknown method '" + text + "'");
}

// Rows of a CSV keyed by header name; '#' lines are skipped.
class CsvTable {
 public:
  explicit CsvTable(std::istream& in) {
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      if (!have_header) {
        const auto names = split(line);
        for (std::size_t i = 0; i < names.size(); ++i) columns_[names[i]] = i;
        have_header = true;
        continue;
      }
      rows_.push_back(split(line));
      rows_.back().resize(columns_.size());
    }
    if (!have_header) config_error("CSV has no header row");
  }

  std::size_t size() const { return rows_.size(); }
  const std::string& at(std::size_t row, const std::string& column) const {
    const auto it = columns_.find(column);
    if (it == columns_.end()) config_error("CSV lacks column '" + column + "'");
    return rows_[row][it->second];
  }

 private:
  std::map<std::string, std::size_t> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> optional_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_double(text);
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string potential_to_json(const PotentialSpec& spec) { return potential_json(spec).dump(); }

PotentialSpec potential_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  return parse_potential(j);
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  static const char* const kKnown[] = {"potential", "lambda0",    "delta",      "h_list",       "eps_list",
                                       "cutoff",    "tolerances", "output_dir", "seed_metadata"};
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown), [&](const char* k) { return key == k; }) ==
        std::end(kKnown)) {
      config_error("unknown config key '" + key + "'");
    }
  }
  ExperimentConfig c;
  if (!j.contains("potential")) config_error("config lacks 'potential'");
  c.potential = parse_potential(j["potential"]);
  c.lambda0 = number_field(j, "lambda0", c.lambda0);
  c.delta = number_field(j, "delta", c.delta);
  c.cutoff = number_field(j, "cutoff", c.cutoff);
  c.h_list = list_field(j, "h_list");
  c.eps_list = j.contains("eps_list") ? list_field(j, "eps_list") : std::vector<double>{0.0};
  if (j.contains("tolerances")) c.tolerances = parse_tolerances(j["tolerances"]);
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) config_error("output_dir must be a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("seed_metadata")) {
    c.seed_metadata = j["seed_metadata"].is_string() ? j["seed_metadata"].get<std::string>()
                                                     : j["seed_metadata"].dump();
  }

  if (!(c.lambda0 > 0.0)) config_error("lambda0 must be positive");
  if (!(c.delta > 0.0)) config_error("delta must be positive");
  if (!(c.delta < c.lambda0)) config_error("delta must be smaller than lambda0");
  if (!(c.cutoff > 0.0)) config_error("cutoff must be positive");
  for (double h : c.h_list) {
    if (!(h > 0.0)) config_error("h_list entries must be positive");
  }
  for (double eps : c.eps_list) {
    if (!(eps >= 0.0)) config_error("eps_list entries must be non-negative");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(); }

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char ch : config_to_json(config)) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::vector<std::pair<std::string, double>> tolerance_entries(const Tolerances& tol) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& t : kRealTols) out.emplace_back(t.name, tol.*t.field);
  for (const auto& t : kIntTols) out.emplace_back(t.name, static_cast<double>(tol.*t.field));
  return out;
}

std::string csv_metadata(const ExperimentConfig& config, const std::string& kind) {
  std::string out = "# zsspec " + kind + "\n# config_hash=" + config_hash(config) + "\n# tolerances=";
  bool first = true;
  for (const auto& [name, value] : tolerance_entries(config.tolerances)) {
    if (!first) out += ';';
    out += name + "=" + format_double(value);
    first = false;
  }
  out += "\n";
  if (!config.seed_metadata.empty()) out += "# seed_metadata=" + sanitize(config.seed_metadata) + "\n";
  return out;
}

void write_records_csv(std::ostream& out, const std::vector<EigenvalueRecord>& records) {
  out << "re_lambda,im_lambda,k,branch,method,residual,h,eps\n";
  for (const auto& r : records) {
    out << format_double(r.lambda.real()) << ',' << format_double(r.lambda.imag()) << ',' << r.k << ','
        << to_string(r.branch) << ',' << to_string(r.method) << ',' << format_double(r.residual) << ','
        << format_double(r.h) << ',' << format_double(r.eps) << '\n';
  }
}

std::vector<EigenvalueRecord> read_records_csv(std::istream& in) {
  const CsvTable table(in);
  std::vector<EigenvalueRecord> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    EigenvalueRecord r;
    r.lambda = {parse_double(table.at(i, "re_lambda")), parse_double(table.at(i, "im_lambda"))};
    r.k = parse_int(table.at(i, "k"));
    r.branch = parse_branch(table.at(i, "branch"));
    r.method = parse_method(table.at(i, "method"));
    r.residual = parse_double(table.at(i, "residual"));
    r.h = parse_double(table.at(i, "h"));
    r.eps = parse_double(table.at(i, "eps"));
    out.push_back(r);
  }
  return out;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "h,eps,k_proxy,re_lambda_wkb,im_lambda_wkb,re_lambda_direct,im_lambda_direct,abs_diff,branch,errors\n";
  auto part = [](const std::optional<cplx>& z, bool real) {
    return z ? format_double(real ? z->real() : z->imag()) : std::string();
  };
  for (const auto& r : rows) {
    out << format_double(r.h) << ',' << format_double(r.eps) << ',' << r.k_proxy << ',' << part(r.lambda_wkb, true)
        << ',' << part(r.lambda_wkb, false) << ',' << part(r.lambda_direct, true) << ','
        << part(r.lambda_direct, false) << ',' << optional_cell(r.abs_diff) << ',' << to_string(r.branch) << ','
        << sanitize(r.errors) << '\n';
  }
}

std::vector<ComparisonRow> read_comparison_csv(std::istream& in) {
  const CsvTable table(in);
  std::vector<ComparisonRow> out;
  auto complex_cell = [&](std::size_t i, const char* re, const char* im) -> std::optional<cplx> {
    const auto a = optional_number(table.at(i, re));
    const auto b = optional_number(table.at(i, im));
    if (!a || !b) return std::nullopt;
    return cplx(*a, *b);
  };
  for (std::size_t i = 0; i < table.size(); ++i) {
    ComparisonRow r;
    r.h = parse_double(table.at(i, "h"));
    r.eps = parse_double(table.at(i, "eps"));
    r.k_proxy = parse_int(table.at(i, "k_proxy"));
    r.lambda_wkb = complex_cell(i, "re_lambda_wkb", "im_lambda_wkb");
    r.lambda_direct = complex_cell(i, "re_lambda_direct", "im_lambda_direct");
    if (r.lambda_wkb && r.lambda_direct) r.abs_diff = std::abs(*r.lambda_wkb - *r.lambda_direct);
    r.branch = parse_branch(table.at(i, "branch"));
    r.errors = table.at(i, "errors");
    out.push_back(r);
  }
  return out;
}

void write_pt_csv(std::ostream& out, const std::vector<PtRow>& rows) {
  out << "eps,h,max_abs_im_lambda,found,winding,complete,symmetry_class,errors\n";
  for (const auto& r : rows) {
    out << format_double(r.eps) << ',' << format_double(r.h) << ',' << format_double(r.max_im) << ',' << r.found
        << ',' << r.winding << ',' << (r.complete ? "true" : "false") << ',' << to_string(r.symmetry) << ','
        << sanitize(r.errors) << '\n';
  }
}

std::string metadata_json(const ExperimentConfig& config, const std::string& kind) {
  json tol = json::object();
  for (const auto& [name, value] : tolerance_entries(config.tolerances)) tol[name] = value;
  return json{{"kind", kind},
              {"config_hash", config_hash(config)},
              {"tolerances", tol},
              {"seed_metadata", config.seed_metadata}}
      .dump();
}

std::string graph_to_json(const StokesGraph& graph, const std::string& metadata) {
  auto pair = [](cplx z) { return json::array({z.real(), z.imag()}); };
  json j;
  j["turning_points"] = json::array();
  for (cplx z : graph.turning_points) j["turning_points"].push_back(pair(z));
  j["curves"] = json::array();
  for (const auto& c : graph.curves) {
    json points = json::array();
    for (cplx z : c.points) points.push_back(pair(z));
    json curve{{"origin", c.origin_index},
               {"angle", c.initial_angle},
               {"points", std::move(points)},
               {"termination", to_string(c.termination)},
               {"arc_length", c.arc_length},
               {"max_level_error", c.max_level_error}};
    if (c.end_index >= 0) curve["end"] = c.end_index;
    j["curves"].push_back(std::move(curve));
  }
  j["errors"] = graph.errors;
  if (!metadata.empty()) j["metadata"] = json::parse(metadata);
  return j.dump(1);
}

StokesGraph graph_from_json(const std::string& text) {
  StokesGraph graph;
  try {
    const json j = json::parse(text);
    auto point = [](const json& p) { return cplx(p.at(0).get<double>(), p.at(1).get<double>()); };
    for (const auto& p : j.at("turning_points")) graph.turning_points.push_back(point(p));
    for (const auto& c : j.at("curves")) {
      StokesCurve curve;
      curve.origin_index = c.at("origin").get<int>();
      curve.initial_angle = c.at("angle").get<double>();
      for (const auto& p : c.at("points")) curve.points.push_back(point(p));
      curve.termination = termination_from_string(c.at("termination").get<std::string>());
      curve.end_index = c.value("end", -1);
      curve.arc_length = c.value("arc_length", 0.0);
      curve.max_level_error = c.value("max_level_error", 0.0);
      graph.curves.push_back(std::move(curve));
    }
    if (j.contains("errors")) graph.errors = j["errors"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    config_error(std::string("malformed graph JSON: ") + e.what());
  }
  return graph;
}

}  // namespace zs
