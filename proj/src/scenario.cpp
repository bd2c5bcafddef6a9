#include "intersample/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace intersample {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), result.ptr);
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioError("scenario: field '" + where + "' " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where + key, "is missing");
  return *it;
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) fail(where, "must be a number");
  return value.get<double>();
}

std::string text(const json& value, const std::string& where) {
  if (!value.is_string()) fail(where, "must be a string");
  return value.get<std::string>();
}

std::int64_t integer(const json& value, const std::string& where) {
  if (!value.is_number_integer()) fail(where, "must be an integer");
  return value.get<std::int64_t>();
}

Matrix parse_matrix(const json& value, const std::string& where) {
  if (!value.is_array() || value.empty()) fail(where, "must be a nonempty array of rows");
  const std::size_t cols = value.front().is_array() ? value.front().size() : 0;
  if (cols == 0) fail(where, "rows must be nonempty arrays");
  Matrix out(static_cast<Index>(value.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < value.size(); ++r) {
    const json& row = value[r];
    if (!row.is_array() || row.size() != cols) fail(where, "rows must all have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      out(static_cast<Index>(r), static_cast<Index>(c)) =
          number(row[c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  if (!out.allFinite()) fail(where, "must contain only finite numbers");
  return out;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector parse_vector(const json& value, const std::string& where) {
  if (!value.is_array()) fail(where, "must be an array");
  Vector out(static_cast<Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    out(static_cast<Index>(i)) = number(value[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& [key, unused] : obj.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(where + key, "is not a recognized field");
  }
}

ThresholdSpec parse_thresholds(const json& obj, const std::string& where) {
  if (!obj.is_object()) fail(where, "must be an object");
  reject_unknown(obj, {"kind", "scale", "value", "values"}, where + ".");
  const std::string kind = text(field(obj, "kind", where + "."), where + ".kind");
  if (kind == "linear") {
    return ThresholdSpec::linear(number(field(obj, "scale", where + "."), where + ".scale"));
  }
  if (kind == "constant") {
    return ThresholdSpec::constant(number(field(obj, "value", where + "."), where + ".value"));
  }
  if (kind == "explicit") {
    const json& values = field(obj, "values", where + ".");
    if (!values.is_array() || values.empty()) fail(where + ".values", "must be a nonempty array");
    std::vector<double> list;
    list.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      list.push_back(number(values[i], where + ".values[" + std::to_string(i) + "]"));
    }
    return ThresholdSpec::explicit_list(std::move(list));
  }
  fail(where + ".kind", "must be one of linear, constant, explicit");
}

json thresholds_to_json(const ThresholdSpec& spec) {
  json obj;
  switch (spec.kind) {
    case ThresholdSpec::Kind::Linear:
      obj["kind"] = "linear";
      obj["scale"] = spec.scale;
      break;
    case ThresholdSpec::Kind::Constant:
      obj["kind"] = "constant";
      obj["value"] = spec.scale;
      break;
    case ThresholdSpec::Kind::Explicit:
      obj["kind"] = "explicit";
      obj["values"] = spec.values;
      break;
  }
  return obj;
}

json open_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ScenarioError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return doc;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

TimingGrid Scenario::true_grid() const {
  if (!mismatch) return design_grid();
  return TimingGrid::make(mismatch->hold_period, mismatch->sample_period, mismatch->offset,
                          mismatch->max_denominator);
}

Scenario load_scenario(const std::filesystem::path& path) {
  const json doc = open_json(path);
  if (!doc.is_object()) throw ScenarioError("scenario: top level must be an object");
  reject_unknown(doc,
                 {"name", "system", "timing", "thresholds", "t_star", "clusters", "tolerances",
                  "sim", "mismatch"},
                 "");
  Scenario s;
  if (doc.contains("name")) s.name = text(doc["name"], "name");

  const json& system = field(doc, "system", "");
  reject_unknown(system, {"A", "B", "C"}, "system.");
  s.A = parse_matrix(field(system, "A", "system."), "system.A");
  s.B = parse_matrix(field(system, "B", "system."), "system.B");
  s.C = parse_matrix(field(system, "C", "system."), "system.C");
  try {
    (void)s.system();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("scenario: system matrices are inconsistent: ") + e.what());
  }

  const json& timing = field(doc, "timing", "");
  reject_unknown(timing, {"hold_period", "sample_period", "offset", "max_denominator"}, "timing.");
  s.hold_period = number(field(timing, "hold_period", "timing."), "timing.hold_period");
  s.sample_period = number(field(timing, "sample_period", "timing."), "timing.sample_period");
  if (timing.contains("offset")) s.offset = number(timing["offset"], "timing.offset");
  if (timing.contains("max_denominator")) {
    s.max_denominator = integer(timing["max_denominator"], "timing.max_denominator");
  }

  if (doc.contains("thresholds")) s.thresholds = parse_thresholds(doc["thresholds"], "thresholds");
  if (doc.contains("t_star")) {
    const json& t = doc["t_star"];
    if (t.is_string() && t.get<std::string>() == "auto") {
      s.t_star.reset();
    } else if (t.is_string()) {
      try {
        s.t_star = Rational::parse(t.get<std::string>());
      } catch (const std::invalid_argument& e) {
        fail("t_star", std::string("is not 'auto' or a fraction: ") + e.what());
      }
    } else {
      fail("t_star", "must be the string 'auto' or a fraction like '1/2'");
    }
  }
  if (doc.contains("clusters")) {
    s.clusters = integer(doc["clusters"], "clusters");
    if (s.clusters < 0) fail("clusters", "must be nonnegative");
  }
  if (doc.contains("tolerances")) {
    const json& tolerances = doc["tolerances"];
    reject_unknown(tolerances, {"rank_rtol", "residual_atol", "stealth_tol"}, "tolerances.");
    if (tolerances.contains("rank_rtol")) {
      s.tol.rank_rtol = number(tolerances["rank_rtol"], "tolerances.rank_rtol");
    }
    if (tolerances.contains("residual_atol")) {
      s.tol.residual_atol = number(tolerances["residual_atol"], "tolerances.residual_atol");
    }
    if (tolerances.contains("stealth_tol")) {
      s.stealth_tol = number(tolerances["stealth_tol"], "tolerances.stealth_tol");
    }
    try {
      s.tol.check();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(std::string("scenario: tolerances: ") + e.what());
    }
  }
  if (doc.contains("sim")) {
    const json& sim = doc["sim"];
    reject_unknown(sim, {"fine_steps_per_hold"}, "sim.");
    if (sim.contains("fine_steps_per_hold")) {
      const std::int64_t steps = integer(sim["fine_steps_per_hold"], "sim.fine_steps_per_hold");
      if (steps < 1 || steps > 100000) fail("sim.fine_steps_per_hold", "must lie in [1, 100000]");
      s.fine_steps_per_hold = static_cast<int>(steps);
    }
  }
  if (doc.contains("mismatch")) {
    const json& mm = doc["mismatch"];
    reject_unknown(mm, {"hold_period", "sample_period", "offset", "max_denominator"}, "mismatch.");
    Scenario::Mismatch m;
    m.hold_period = number(field(mm, "hold_period", "mismatch."), "mismatch.hold_period");
    m.sample_period = number(field(mm, "sample_period", "mismatch."), "mismatch.sample_period");
    if (mm.contains("offset")) m.offset = number(mm["offset"], "mismatch.offset");
    if (mm.contains("max_denominator")) {
      m.max_denominator = integer(mm["max_denominator"], "mismatch.max_denominator");
    }
    s.mismatch = m;
  }
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["system"] = {{"A", matrix_to_json(s.A)}, {"B", matrix_to_json(s.B)},
                   {"C", matrix_to_json(s.C)}};
  doc["timing"] = {{"hold_period", s.hold_period},
                   {"sample_period", s.sample_period},
                   {"offset", s.offset},
                   {"max_denominator", s.max_denominator}};
  doc["thresholds"] = thresholds_to_json(s.thresholds);
  doc["t_star"] = s.t_star ? s.t_star->str() : "auto";
  doc["clusters"] = s.clusters;
  doc["tolerances"] = {{"rank_rtol", s.tol.rank_rtol},
                       {"residual_atol", s.tol.residual_atol},
                       {"stealth_tol", s.stealth_tol}};
  doc["sim"] = {{"fine_steps_per_hold", s.fine_steps_per_hold}};
  if (s.mismatch) {
    doc["mismatch"] = {{"hold_period", s.mismatch->hold_period},
                       {"sample_period", s.mismatch->sample_period},
                       {"offset", s.mismatch->offset},
                       {"max_denominator", s.mismatch->max_denominator}};
  }
  return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  write_text(path, scenario_to_json(s));
}

std::vector<std::string> demo_names() {
  return {"sec4a", "sec4c", "sec4c-mismatch", "x38-shape"};
}

namespace {

// deterministic unit-interval stream for the synthetic demo model
double lcg_unit(std::uint64_t& state) {
  state = state * 6364136223846793005ull + 1442695040888963407ull;
  return static_cast<double>((state >> 11) & 0xFFFFFFFFFFFFull) / 281474976710656.0;
}

Scenario demo_sec4a() {
  Scenario s;
  s.name = "sec4a";
  s.A = Matrix{{-1.0, 0.0, 0.0}, {0.0, -5.0, -3.0}, {0.0, 2.0, 0.0}};
  s.B = Matrix{{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}};
  s.C = Matrix{{1.0, 0.0, 1.0}};
  s.hold_period = 1.0;
  s.sample_period = 1.0;
  s.offset = 0.0;
  s.thresholds = ThresholdSpec::linear(1.0);
  s.clusters = 10;
  return s;
}

Scenario demo_sec4c() {
  Scenario s;
  s.name = "sec4c";
  // single-output plant built from three one-column blocks with transfer
  // functions 1/(s+1), 2/((s+2)(s+3)), 4/((s+4)(s+5))
  s.A = Matrix::Zero(5, 5);
  s.A(0, 0) = -1.0;
  s.A(1, 2) = 1.0;
  s.A(2, 1) = -6.0;
  s.A(2, 2) = -5.0;
  s.A(3, 4) = 1.0;
  s.A(4, 3) = -20.0;
  s.A(4, 4) = -9.0;
  s.B = Matrix::Zero(5, 3);
  s.B(0, 0) = 1.0;
  s.B(2, 1) = 1.0;
  s.B(4, 2) = 1.0;
  s.C = Matrix::Zero(1, 5);
  s.C(0, 0) = 1.0;
  s.C(0, 1) = 2.0;
  s.C(0, 3) = 4.0;
  s.hold_period = 1.0;
  s.sample_period = 0.4;
  s.offset = 0.3;
  s.thresholds = ThresholdSpec::linear(10.0);
  s.clusters = 20;
  return s;
}

Scenario demo_x38_shape(std::uint64_t seed) {
  // Synthetic stand-in with the dimensions of a multirate flight-control
  // loop (11 states, 3 inputs, 9 outputs, holds four times faster than
  // samples). The entries are generated, not real vehicle data.
  Scenario s;
  s.name = "x38-shape";
  const Index n = 11, p = 3, q = 9;
  s.A = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    s.A(i, i) = -(0.5 + 0.2 * static_cast<double>(i));
    if (i + 1 < n) {
      s.A(i, i + 1) = 0.35;
      s.A(i + 1, i) = -0.25;
    }
  }
  std::uint64_t stream = seed == 0 ? 0x5eed : seed;
  s.B = Matrix::Zero(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) s.B(i, j) = 2.0 * lcg_unit(stream) - 1.0;
  }
  s.C = Matrix::Zero(q, n);
  for (Index i = 0; i < q; ++i) {
    s.C(i, i) = 1.0;
    s.C(i, i + 2) = 0.5;
  }
  s.hold_period = 0.04;
  s.sample_period = 0.16;
  s.offset = 0.0;
  s.thresholds = ThresholdSpec::linear(0.5);
  s.clusters = 10;
  return s;
}

}  // namespace

Scenario demo_scenario(const std::string& name, std::uint64_t seed) {
  if (name == "sec4a") return demo_sec4a();
  if (name == "sec4c") return demo_sec4c();
  if (name == "sec4c-mismatch") {
    Scenario s = demo_sec4c();
    s.name = "sec4c-mismatch";
    Scenario::Mismatch m;
    m.hold_period = 1.0;
    m.sample_period = 0.4004;
    m.offset = 0.3;
    m.max_denominator = 10000;
    s.mismatch = m;
    return s;
  }
  if (name == "x38-shape") return demo_x38_shape(seed);
  std::string known;
  for (const std::string& d : demo_names()) known += " " + d;
  throw ScenarioError("unknown demo '" + name + "'; available:" + known);
}

std::string report_to_json(const RedundancyReport& report) {
  json doc;
  doc["feasible"] = report.feasible();
  doc["kernel"] = {{"nontrivial", report.kernel_nontrivial},
                   {"dim", report.kernel_dim}};
  json disruption;
  disruption["reachable"] = report.disruption_reachable;
  disruption["t_star"] = report.t_star ? json(report.t_star->str()) : json(nullptr);
  disruption["i_star"] = report.i_star ? json(*report.i_star) : json(nullptr);
  doc["disruption"] = disruption;
  doc["carryover"] = {{"cancellable", report.carryover_cancellable}};
  doc["ranks"] = {{"output_forced", report.rank_output_forced},
                  {"output_forced_augmented", report.rank_output_forced_aug}};
  json sufficient;
  sufficient["count_inequality"] = report.count_inequality;
  sufficient["output_forced_full_row_rank"] = report.output_forced_full_row_rank;
  sufficient["forced_full_row_rank"] = report.forced_full_row_rank;
  json single_rate;
  single_rate["applicable"] = report.single_rate.applicable;
  if (report.single_rate.applicable) {
    single_rate["stacked_escape"] = report.single_rate.stacked_escape;
    single_rate["output_kernel_meets_range"] = report.single_rate.output_kernel_meets_range;
  }
  sufficient["single_rate"] = single_rate;
  doc["sufficient"] = sufficient;
  return doc.dump(2) + "\n";
}

std::string verification_to_json(const VerificationReport& report) {
  json doc;
  doc["stealthy"] = report.stealthy;
  doc["disruptive"] = report.disruptive;
  doc["max_sampled_residual"] = report.max_sampled_residual;
  doc["stealth_tol"] = report.stealth_tol;
  doc["first_detection_sample"] =
      report.first_detection_sample ? json(*report.first_detection_sample) : json(nullptr);
  doc["margins"] = report.margins;
  return doc.dump(2) + "\n";
}

void write_plan(const AttackPlan& plan, const std::filesystem::path& json_path) {
  const std::string csv_name = json_path.stem().string() + ".csv";

  json doc;
  doc["format"] = "intersample-plan/1";
  doc["timing"] = {{"hold_period", plan.grid.hold_period},
                   {"sample_period", plan.grid.sample_period},
                   {"offset", plan.grid.offset},
                   {"max_denominator",
                    std::max({plan.grid.alpha, plan.grid.beta, plan.grid.delta.den()})}};
  doc["t_star"] = plan.t_star.str();
  doc["kernel_dim"] = plan.kernel_dim;
  doc["direction_rule"] = "max-drive kernel direction";
  doc["stealth_direction"] = vector_to_json(plan.stealth_direction);
  doc["holds_csv"] = csv_name;
  json clusters = json::array();
  for (std::int64_t k = 1; k <= plan.clusters(); ++k) {
    const std::size_t i = static_cast<std::size_t>(k - 1);
    json cluster;
    cluster["k"] = k;
    cluster["threshold"] = plan.thresholds[i];
    cluster["gain"] = plan.gains[i];
    cluster["correction"] = vector_to_json(plan.corrections[i]);
    cluster["terminal_state"] = vector_to_json(plan.terminal_states[i]);
    cluster["predicted_disruption_norm"] = plan.predicted_disruption_norms[i];
    cluster["disruption_time"] = plan.disruption_times[i];
    clusters.push_back(std::move(cluster));
  }
  doc["clusters"] = clusters;
  write_text(json_path, doc.dump(2) + "\n");

  std::ostringstream csv;
  csv << "i,t_start";
  const Index width = plan.stealth_direction.size() / std::max<std::int64_t>(1, plan.grid.beta);
  for (Index c = 1; c <= width; ++c) csv << ",a_" << c;
  csv << "\n";
  for (std::size_t i = 0; i < plan.holds.size(); ++i) {
    csv << i << "," << format_double(plan.grid.actuation_time(static_cast<std::int64_t>(i)));
    for (Index c = 0; c < plan.holds[i].size(); ++c) {
      csv << "," << format_double(plan.holds[i](c));
    }
    csv << "\n";
  }
  write_text(json_path.parent_path() / csv_name, csv.str());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  return cells;
}

double parse_cell(const std::string& cell, const std::string& where) {
  double value = 0.0;
  const auto result = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (result.ec != std::errc() || result.ptr != cell.data() + cell.size()) {
    throw ScenarioError("csv: cannot parse number '" + cell + "' in " + where);
  }
  return value;
}

}  // namespace

AttackPlan load_plan(const std::filesystem::path& json_path) {
  const json doc = open_json(json_path);
  if (!doc.is_object() || doc.value("format", "") != "intersample-plan/1") {
    throw ScenarioError("'" + json_path.string() + "' is not an intersample plan file");
  }
  AttackPlan plan;
  const json& timing = field(doc, "timing", "plan.");
  plan.grid = TimingGrid::make(number(field(timing, "hold_period", "plan.timing."),
                                      "plan.timing.hold_period"),
                               number(field(timing, "sample_period", "plan.timing."),
                                      "plan.timing.sample_period"),
                               number(field(timing, "offset", "plan.timing."),
                                      "plan.timing.offset"),
                               integer(field(timing, "max_denominator", "plan.timing."),
                                       "plan.timing.max_denominator"));
  plan.t_star = Rational::parse(text(field(doc, "t_star", "plan."), "plan.t_star"));
  plan.kernel_dim = integer(field(doc, "kernel_dim", "plan."), "plan.kernel_dim");
  plan.stealth_direction = parse_vector(field(doc, "stealth_direction", "plan."),
                                        "plan.stealth_direction");
  const json& cluster_list = field(doc, "clusters", "plan.");
  if (!cluster_list.is_array()) fail("clusters", "must be an array");
  for (const json& cluster : cluster_list) {
    plan.thresholds.push_back(number(field(cluster, "threshold", "plan.clusters."),
                                     "plan.clusters.threshold"));
    plan.gains.push_back(number(field(cluster, "gain", "plan.clusters."), "plan.clusters.gain"));
    plan.corrections.push_back(parse_vector(field(cluster, "correction", "plan.clusters."),
                                            "plan.clusters.correction"));
    plan.terminal_states.push_back(parse_vector(field(cluster, "terminal_state", "plan.clusters."),
                                                "plan.clusters.terminal_state"));
    plan.predicted_disruption_norms.push_back(
        number(field(cluster, "predicted_disruption_norm", "plan.clusters."),
               "plan.clusters.predicted_disruption_norm"));
    plan.disruption_times.push_back(number(field(cluster, "disruption_time", "plan.clusters."),
                                           "plan.clusters.disruption_time"));
  }

  const std::filesystem::path csv_path =
      json_path.parent_path() / text(field(doc, "holds_csv", "plan."), "plan.holds_csv");
  std::ifstream csv(csv_path);
  if (!csv) throw ScenarioError("cannot open plan holds file '" + csv_path.string() + "'");
  std::string line;
  if (!std::getline(csv, line)) throw ScenarioError("plan holds file is empty");
  const std::size_t columns = split_csv_line(line).size();
  if (columns < 3) throw ScenarioError("plan holds file needs columns i,t_start,a_1..a_p");
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != columns) throw ScenarioError("plan holds row has wrong column count");
    Vector hold(static_cast<Index>(columns - 2));
    for (std::size_t c = 2; c < columns; ++c) {
      hold(static_cast<Index>(c - 2)) = parse_cell(cells[c], "plan holds");
    }
    plan.holds.push_back(std::move(hold));
  }
  if (plan.holds.size() !=
      static_cast<std::size_t>(plan.clusters() * plan.grid.beta)) {
    throw ScenarioError("plan holds row count does not match clusters * beta");
  }
  return plan;
}

void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path) {
  std::ostringstream csv;
  const Index n = trace.states.empty() ? 0 : trace.states.front().size();
  const Index q = trace.outputs.empty() ? 0 : trace.outputs.front().size();
  csv << "t";
  for (Index i = 1; i <= n; ++i) csv << ",x_" << i;
  for (Index i = 1; i <= q; ++i) csv << ",y_" << i;
  csv << ",is_sensing,is_actuation,is_disruption\n";
  for (std::size_t e = 0; e < trace.times.size(); ++e) {
    csv << format_double(trace.times[e]);
    for (Index i = 0; i < n; ++i) csv << "," << format_double(trace.states[e](i));
    for (Index i = 0; i < q; ++i) csv << "," << format_double(trace.outputs[e](i));
    csv << "," << int(trace.sensing_flag[e]) << "," << int(trace.actuation_flag[e]) << ","
        << int(trace.disruption_flag[e]) << "\n";
  }
  write_text(path, csv.str());
}

SimTrace load_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open trace file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ScenarioError("trace file is empty");
  const auto header = split_csv_line(line);
  Index n = 0, q = 0;
  for (const std::string& name : header) {
    if (name.rfind("x_", 0) == 0) ++n;
    if (name.rfind("y_", 0) == 0) ++q;
  }
  if (header.size() != static_cast<std::size_t>(1 + n + q + 3)) {
    throw ScenarioError("trace header must be t,x_*,y_*,is_sensing,is_actuation,is_disruption");
  }
  SimTrace trace;
  std::int64_t j = 0;
  std::int64_t k = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw ScenarioError("trace row has wrong column count");
    const double t = parse_cell(cells[0], "trace");
    Vector x(n), y(q);
    for (Index i = 0; i < n; ++i) x(i) = parse_cell(cells[static_cast<std::size_t>(1 + i)], "trace");
    for (Index i = 0; i < q; ++i) {
      y(i) = parse_cell(cells[static_cast<std::size_t>(1 + n + i)], "trace");
    }
    const bool sensing = parse_cell(cells[cells.size() - 3], "trace") != 0.0;
    const bool actuation = parse_cell(cells[cells.size() - 2], "trace") != 0.0;
    const bool disruption = parse_cell(cells.back(), "trace") != 0.0;
    trace.times.push_back(t);
    trace.states.push_back(x);
    trace.outputs.push_back(y);
    trace.sensing_flag.push_back(sensing ? 1 : 0);
    trace.actuation_flag.push_back(actuation ? 1 : 0);
    trace.disruption_flag.push_back(disruption ? 1 : 0);
    trace.hold_index.push_back(-1);
    if (sensing) trace.sampled.push_back({++j, t, y});
    if (disruption) trace.disruption_samples.push_back({++k, t, x.norm()});
  }
  if (!trace.times.empty()) trace.span = trace.times.back();
  return trace;
}

}  // namespace intersample
