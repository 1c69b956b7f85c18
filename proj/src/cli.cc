#include "influence/cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "influence/core.h"
#include "influence/error.h"
#include "influence/estimators.h"
#include "influence/games.h"
#include "influence/linear.h"
#include "influence/measures.h"
#include "influence/pipeline.h"

namespace influence {
namespace {

using Json = nlohmann::ordered_json;

struct CommonOptions {
  std::string format = "json";
  std::string output;
};

struct DataOptions {
  std::string input;
  std::string space_file;
  std::size_t value_columns = 1;
  std::vector<std::string> features;
  bool all = false;
};

Json stats_json(const SummaryStats& s) {
  return Json{{"max", s.max},
              {"min", s.min},
              {"mean", s.mean},
              {"median", s.median},
              {"stddev", s.stddev}};
}

Json new_report(const std::string& measure) {
  return Json{{"schema", kReportSchema},
              {"measure", measure},
              {"features", Json::array()},
              {"items", Json::array()},
              {"stats", Json::object()},
              {"config", Json::object()}};
}

std::optional<FeatureSpace> load_space(const std::string& path) {
  if (path.empty()) return std::nullopt;
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw InfluenceError(ErrorCode::kMalformedRow,
                         "space file '" + path + "': " + e.what());
  }
  std::vector<Feature> features;
  try {
    for (const auto& f : j.at("features")) {
      features.push_back(
          {f.at("name").get<std::string>(), f.at("states").get<std::vector<std::string>>()});
    }
  } catch (const Json::exception& e) {
    throw InfluenceError(ErrorCode::kMalformedRow,
                         "space file '" + path + "': " + e.what());
  }
  return build_space(std::move(features));
}

std::vector<std::size_t> selected_features(const FeatureSpace& space,
                                           const DataOptions& opts) {
  std::vector<std::size_t> out;
  if (opts.all || opts.features.empty()) {
    for (std::size_t i = 0; i < space.feature_count(); ++i) out.push_back(i);
    return out;
  }
  for (const auto& name : opts.features) out.push_back(space.feature_index(name));
  return out;
}

LabeledDataset load_dataset(const DataOptions& opts, std::ostream& err) {
  LabeledDataset d =
      ingest_labeled_csv(opts.input, opts.value_columns, load_space(opts.space_file));
  if (d.duplicates_dropped() > 0) {
    err << "warning: " << d.duplicates_dropped()
        << " duplicate record(s) with equal values were merged\n";
  }
  return d;
}

Json data_config(const DataOptions& opts) {
  Json c{{"input", opts.input}, {"value_columns", opts.value_columns}};
  if (!opts.space_file.empty()) c["space"] = opts.space_file;
  return c;
}

void add_feature_rows(Json& report, const LabeledDataset& d,
                      const std::vector<std::size_t>& features,
                      const std::vector<double>& raw,
                      const std::vector<double>& normalized) {
  for (std::size_t k = 0; k < features.size(); ++k) {
    report["features"].push_back(Json{{"name", d.space().feature(features[k]).name},
                                      {"raw", raw[k]},
                                      {"normalized", normalized[k]}});
  }
  if (!raw.empty()) report["stats"] = stats_json(stats_report(raw));
}

PseudoDistance parse_distance(const std::string& name) {
  if (name == "discrete") return PseudoDistance::discrete();
  if (name == "abs") return PseudoDistance::absolute();
  if (name == "cosine") return PseudoDistance::cosine();
  throw InfluenceError(ErrorCode::kInvalidArgument, "unknown distance '" + name + "'");
}

Normalization parse_normalization(const std::string& name) {
  if (name == "per-pair") return Normalization::kPerPair;
  if (name == "per-point") return Normalization::kPerPoint;
  if (name == "raw") return Normalization::kRaw;
  throw InfluenceError(ErrorCode::kInvalidArgument,
                       "unknown normalization '" + name + "'");
}

WeightFunction load_weights(const std::string& path, const LabeledDataset& d) {
  const CsvTable csv = parse_csv(read_file(path));
  const auto& space = d.space();
  if (csv.header.size() != space.feature_count() + 1 || csv.rows.empty()) {
    throw InfluenceError(ErrorCode::kMalformedRow,
                         "weights file needs the feature columns and a weight column");
  }
  std::vector<std::size_t> column_feature;
  for (std::size_t c = 0; c + 1 < csv.header.size(); ++c) {
    column_feature.push_back(space.feature_index(csv.header[c]));
  }
  WeightFunction w;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    if (row.size() != csv.header.size()) {
      throw InfluenceError(ErrorCode::kMalformedRow,
                           "line " + std::to_string(csv.line_numbers[r]) +
                               ": wrong number of cells");
    }
    Profile p;
    p.states.resize(space.feature_count());
    for (std::size_t c = 0; c < column_feature.size(); ++c) {
      p.states[column_feature[c]] = space.state_index(column_feature[c], row[c]);
    }
    std::size_t used = 0;
    double weight = 0;
    try {
      weight = std::stod(row.back(), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != row.back().size()) {
      throw InfluenceError(ErrorCode::kNonNumeric,
                           "line " + std::to_string(csv.line_numbers[r]) +
                               ": weight '" + row.back() + "' is not a number");
    }
    w.set(encode(space, p), weight);
  }
  return w;
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return v.dump();
}

// One CSV block per array-of-objects section; nested objects become
// "outer.inner" columns. Stats follow as their own block.
std::string report_to_csv(const Json& report) {
  std::ostringstream out;
  bool first_block = true;
  auto start_block = [&] {
    if (!first_block) out << "\n";
    first_block = false;
  };
  for (const char* section : {"features", "states", "items", "axioms", "pairs"}) {
    if (!report.contains(section) || report[section].empty()) continue;
    start_block();
    const Json& rows = report[section];
    std::vector<std::pair<std::string, Json::json_pointer>> columns;
    for (const auto& [key, value] : rows.front().items()) {
      if (value.is_object()) {
        for (const auto& [inner, unused] : value.items()) {
          columns.emplace_back(key + "." + inner, Json::json_pointer("/" + key + "/" + inner));
        }
      } else {
        columns.emplace_back(key, Json::json_pointer("/" + key));
      }
    }
    out << "section";
    for (const auto& c : columns) out << "," << c.first;
    out << "\n";
    for (const auto& row : rows) {
      out << section;
      for (const auto& c : columns) {
        out << "," << (row.contains(c.second) ? csv_cell(row[c.second]) : "");
      }
      out << "\n";
    }
  }
  const Json& stats = report.value("stats", Json::object());
  if (!stats.empty()) {
    start_block();
    const char* names[] = {"max", "min", "mean", "median", "stddev"};
    out << "section,name";
    for (const char* n : names) out << "," << n;
    out << "\n";
    auto row = [&](const std::string& name, const Json& s) {
      out << "stats," << csv_cell(name);
      for (const char* n : names) out << "," << csv_cell(s[n]);
      out << "\n";
    };
    if (stats.begin()->is_object()) {
      for (const auto& [name, s] : stats.items()) row(name, s);
    } else {
      row("", stats);
    }
  }
  return out.str();
}

void emit(const Json& report, const CommonOptions& common, std::ostream& out) {
  std::string text;
  if (common.format == "csv") {
    text = report_to_csv(report);
  } else {
    text = report.dump(2) + "\n";
  }
  if (common.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(common.output, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw InfluenceError(ErrorCode::kIo, "cannot write '" + common.output + "'");
  }
  file << text;
}

std::vector<double> parse_weight_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0) {
      throw InfluenceError(ErrorCode::kNonNumeric, "bad weight '" + cell + "'");
    }
    out.push_back(x);
  }
  return out;
}

// ---- subcommands ----

Json run_compute(const DataOptions& data, const std::string& measure,
                 const std::string& distance_name, const std::string& weights_file,
                 std::ostream& err) {
  const LabeledDataset d = load_dataset(data, err);
  const auto features = selected_features(d.space(), data);
  Json report = new_report(measure);
  std::vector<double> raw, normalized;
  const double points = static_cast<double>(d.size());
  for (std::size_t i : features) {
    double r = 0;
    if (measure == "chi" || measure == "chi-norm") {
      r = static_cast<double>(chi(d, i));
    } else if (measure == "win-loss") {
      r = static_cast<double>(chi_win_loss_form(d, i));
    } else if (measure == "distance") {
      r = chi_distance(d, parse_distance(distance_name), i);
    } else if (measure == "weighted") {
      if (weights_file.empty()) {
        throw InfluenceError(ErrorCode::kInvalidArgument,
                             "--measure weighted needs --weights-file");
      }
      r = chi_weighted(d, load_weights(weights_file, d), i);
    } else {
      throw InfluenceError(ErrorCode::kInvalidArgument,
                           "measure '" + measure +
                               "' is not a per-feature measure; use the `state` "
                               "subcommand");
    }
    raw.push_back(r);
    normalized.push_back(r / points);
  }
  add_feature_rows(report, d, features, raw, normalized);
  report["config"] = data_config(data);
  report["config"]["observed_profiles"] = d.size();
  if (measure == "distance") report["config"]["distance"] = distance_name;
  if (measure == "weighted") report["config"]["weights_file"] = weights_file;
  return report;
}

Json run_state(const DataOptions& data, bool zeta, bool raw_zeta,
               std::ostream& err) {
  const LabeledDataset d = load_dataset(data, err);
  const auto features = selected_features(d.space(), data);
  Json report = new_report(zeta ? (raw_zeta ? "zeta-raw" : "zeta") : "chi-state");
  report["states"] = Json::array();
  std::vector<double> totals, normalized, all_values;
  for (std::size_t i : features) {
    KahanSum total;
    for (StateIndex b = 0; b < d.space().state_count(i); ++b) {
      const double v = zeta ? zeta_state(d, i, b, raw_zeta)
                            : static_cast<double>(chi_state(d, i, b));
      total.add(v);
      all_values.push_back(v);
      report["states"].push_back(Json{{"feature", d.space().feature(i).name},
                                      {"state", d.space().feature(i).states[b]},
                                      {"value", v}});
    }
    totals.push_back(total.value());
    normalized.push_back(total.value() / static_cast<double>(d.size()));
  }
  add_feature_rows(report, d, features, totals, normalized);
  report["stats"] = stats_json(stats_report(all_values));
  report["config"] = data_config(data);
  return report;
}

Json run_weighted(const DataOptions& data, const std::string& weights_file,
                  const std::string& form, const std::string& weighting,
                  std::ostream& err) {
  const LabeledDataset d = load_dataset(data, err);
  const WeightFunction w = load_weights(weights_file, d);
  const auto features = selected_features(d.space(), data);
  ConditionalWeighting cw;
  if (weighting == "point") {
    cw = ConditionalWeighting::kPoint;
  } else if (weighting == "conditional") {
    cw = ConditionalWeighting::kConditional;
  } else {
    throw InfluenceError(ErrorCode::kInvalidArgument,
                         "unknown weighting '" + weighting + "'");
  }
  Json report = new_report(form == "plain" ? "chi-weighted" : "chi-p");
  std::vector<double> raw, normalized;
  for (std::size_t i : features) {
    double r = 0;
    if (form == "plain") {
      r = chi_weighted(d, w, i);
    } else if (form == "conditional") {
      r = chi_weighted_conditional(d, w, i, cw);
    } else {
      throw InfluenceError(ErrorCode::kInvalidArgument, "unknown form '" + form + "'");
    }
    raw.push_back(r);
    normalized.push_back(r / static_cast<double>(d.size()));
  }
  add_feature_rows(report, d, features, raw, normalized);
  report["config"] = data_config(data);
  report["config"]["weights_file"] = weights_file;
  report["config"]["form"] = form;
  if (form == "conditional") report["config"]["weighting"] = weighting;
  return report;
}

Json run_distance(const DataOptions& data, const std::string& distance_name,
                  const std::string& normalization, std::ostream& err) {
  const LabeledDataset d = load_dataset(data, err);
  const auto features = selected_features(d.space(), data);
  const PseudoDistance distance = parse_distance(distance_name);
  const Normalization mode = parse_normalization(normalization);
  Json report = new_report("distance");
  std::vector<double> raw, normalized;
  for (std::size_t i : features) {
    const double r = chi_distance(d, distance, i);
    raw.push_back(r);
    normalized.push_back(normalize_total(r, d, i, mode));
  }
  add_feature_rows(report, d, features, raw, normalized);
  report["config"] = data_config(data);
  report["config"]["distance"] = distance_name;
  report["config"]["normalization"] = normalization;
  return report;
}

Json run_sample(const DataOptions& data, const EstimatorConfig& config,
                const std::string& distance_name, std::ostream& err) {
  const LabeledDataset d = load_dataset(data, err);
  const auto features = selected_features(d.space(), data);
  Json report = new_report(distance_name.empty() ? "chi-sampled" : "distance-sampled");
  std::vector<double> raw, normalized;
  for (std::size_t i : features) {
    const Estimate e =
        distance_name.empty()
            ? sample_chi(d, i, config)
            : sample_chi_distance(d, parse_distance(distance_name), i, config);
    raw.push_back(e.value);
    normalized.push_back(e.value / static_cast<double>(d.size()));
    report["features"].push_back(Json{{"name", d.space().feature(i).name},
                                      {"raw", e.value},
                                      {"normalized", normalized.back()},
                                      {"half_width", e.half_width},
                                      {"samples", e.samples_used}});
  }
  if (!raw.empty()) report["stats"] = stats_json(stats_report(raw));
  report["config"] = data_config(data);
  report["config"]["samples"] = config.sample_count;
  report["config"]["seed"] = config.seed;
  report["config"]["confidence"] = config.confidence;
  if (!distance_name.empty()) report["config"]["distance"] = distance_name;
  return report;
}

Json run_linear(const std::string& weights_text, double threshold,
                const std::string& method, const std::vector<std::string>& names,
                std::uint64_t samples, std::uint64_t seed, double confidence,
                std::size_t resolution, double tolerance) {
  const LinearClassifier clf(parse_weight_list(weights_text), threshold);
  const std::size_t n = clf.dimension();
  std::vector<std::size_t> features;
  if (names.empty()) {
    for (std::size_t i = 0; i < n; ++i) features.push_back(i);
  } else {
    for (const auto& name : names) {
      std::size_t i = 0;
      if (name.size() < 2 || name[0] != 'x' ||
          (i = std::stoul(name.substr(1))) < 1 || i > n) {
        throw InfluenceError(ErrorCode::kUnknownFeature,
                             "linear features are named x1..x" + std::to_string(n));
      }
      features.push_back(i - 1);
    }
  }
  auto feature_name = [](std::size_t i) { return "x" + std::to_string(i + 1); };

  Json report = new_report("chi-linear");
  Json config{{"weights", clf.weights()}, {"threshold", threshold}, {"method", method}};
  std::vector<double> values;
  if (method == "closed") {
    std::vector<double> chis, pivs;
    if (n == 1) {
      chis.push_back(chi_linear_1d_closed(clf.weights()[0], threshold));
      pivs.push_back(chis.back() / 2);
    } else if (n == 2) {
      const auto cf = chi_linear_2d_closed(clf.weights()[0], clf.weights()[1], threshold);
      chis = {cf.chi1, cf.chi2};
      pivs = {cf.piv1, cf.piv2};
    } else {
      throw InfluenceError(ErrorCode::kUnsupportedSignPattern,
                           "closed forms exist for one or two features only");
    }
    for (std::size_t i : features) {
      values.push_back(chis[i]);
      report["features"].push_back(Json{{"name", feature_name(i)},
                                        {"raw", chis[i]},
                                        {"normalized", chis[i]},
                                        {"piv_volume", pivs[i]}});
    }
  } else if (method == "mc") {
    for (std::size_t i : features) {
      const auto e = chi_linear_mc(clf, i, samples, seed, confidence);
      values.push_back(e.chi.value);
      report["features"].push_back(Json{{"name", feature_name(i)},
                                        {"raw", e.chi.value},
                                        {"normalized", e.chi.value},
                                        {"half_width", e.chi.half_width},
                                        {"piv_volume", e.pivotal.piv_volume},
                                        {"anti_piv_volume", e.pivotal.anti_piv_volume}});
    }
    config["samples"] = samples;
    config["seed"] = seed;
    config["confidence"] = confidence;
  } else if (method == "grid") {
    for (std::size_t i : features) {
      const double v = chi_linear_grid(clf, i, resolution);
      values.push_back(v);
      report["features"].push_back(
          Json{{"name", feature_name(i)}, {"raw", v}, {"normalized", v}});
    }
    config["resolution"] = resolution;
  } else if (method == "monotonicity") {
    MonotonicityOptions mo;
    mo.sample_count = samples;
    mo.seed = seed;
    mo.confidence = confidence;
    mo.tolerance = tolerance;
    const auto rep = check_weight_monotonicity(clf, mo);
    for (std::size_t i = 0; i < n; ++i) {
      values.push_back(rep.chi[i].value);
      report["features"].push_back(Json{{"name", feature_name(i)},
                                        {"raw", rep.chi[i].value},
                                        {"normalized", rep.chi[i].value},
                                        {"half_width", rep.chi[i].half_width}});
    }
    report["pairs"] = Json::array();
    for (const auto& p : rep.pairs) {
      const char* verdict = p.verdict == PairVerdict::kConfirmed   ? "confirmed"
                            : p.verdict == PairVerdict::kViolation ? "violation"
                                                                   : "inconclusive";
      report["pairs"].push_back(Json{{"heavier", feature_name(p.i)},
                                     {"lighter", feature_name(p.j)},
                                     {"gap", p.gap},
                                     {"margin", p.margin},
                                     {"verdict", verdict}});
    }
    report["violations"] = rep.violations();
    config["samples"] = samples;
    config["seed"] = seed;
    config["confidence"] = confidence;
    config["tolerance"] = tolerance;
  } else {
    throw InfluenceError(ErrorCode::kInvalidArgument, "unknown method '" + method + "'");
  }
  if (!values.empty()) report["stats"] = stats_json(stats_report(values));
  report["config"] = std::move(config);
  return report;
}

Json run_check_axioms(const std::string& measure_name, std::size_t trials,
                      std::uint64_t seed) {
  MeasureUnderTest measure;
  if (measure_name == "chi") {
    measure = [](const LabeledDataset& d, std::size_t i) {
      return static_cast<double>(chi(d, i));
    };
  } else if (measure_name == "chi-norm") {
    measure = [](const LabeledDataset& d, std::size_t i) { return chi_normalized(d, i); };
  } else if (measure_name == "zero") {
    measure = [](const LabeledDataset&, std::size_t) { return 0.0; };
  } else {
    throw InfluenceError(ErrorCode::kInvalidArgument,
                         "axioms can be checked for chi, chi-norm or zero");
  }
  AxiomCheckOptions options;
  options.trials = trials;
  options.seed = seed;
  Json report = new_report(measure_name);
  report["axioms"] = Json::array();
  for (const auto& v : check_all_axioms(measure, options)) {
    Json row{{"axiom", v.axiom},
             {"trials", v.trials},
             {"failures", v.failures},
             {"passed", v.passed()}};
    if (v.witness) row["witness"] = *v.witness;
    report["axioms"].push_back(std::move(row));
  }
  report["config"] = Json{{"trials", trials}, {"seed", seed}};
  return report;
}

Json run_pipeline_command(const std::string& counts, const std::string& space_file,
                          std::uint64_t min_count, const std::string& normalization,
                          std::ostream& err) {
  const FrequencyTable table = ingest_counts_csv(counts, load_space(space_file));
  const PipelineResult result =
      run_pipeline(table, min_count, parse_normalization(normalization));
  for (const auto& item : result.values.dropped) {
    err << "warning: item '" << item << "' shown fewer than " << min_count
        << " times; dropped\n";
  }
  const auto& space = result.values.space;
  Json report = new_report("vector-cosine");
  for (const auto& f : result.vector_influence) {
    report["features"].push_back(
        Json{{"name", f.feature}, {"raw", f.raw}, {"normalized", f.normalized}});
  }
  for (const auto& item : result.items) {
    Json influence = Json::object();
    for (std::size_t i = 0; i < space.feature_count(); ++i) {
      influence[space.feature(i).name] = item.per_feature[i];
    }
    report["items"].push_back(
        Json{{"id", item.item}, {"total", item.total}, {"influence", influence}});
  }
  Json stats = Json::object();
  for (std::size_t i = 0; i < space.feature_count(); ++i) {
    stats[space.feature(i).name] = stats_json(result.stats[i]);
  }
  report["stats"] = std::move(stats);
  report["config"] = Json{{"counts", counts},
                          {"min_count", min_count},
                          {"normalization", normalization},
                          {"retained_items", result.values.items.size()},
                          {"dropped_items", result.values.dropped.size()},
                          {"profiles", result.values.profiles.size()}};
  return report;
}

void add_data_options(CLI::App* cmd, DataOptions& data) {
  cmd->add_option("--input", data.input, "Labeled CSV: features then value column(s)")
      ->required();
  cmd->add_option("--space", data.space_file,
                  "JSON feature space {features:[{name,states}]}; inferred if absent");
  cmd->add_option("--values", data.value_columns, "Number of trailing value columns")
      ->check(CLI::PositiveNumber);
  auto* feature = cmd->add_option("--feature", data.features, "Feature name (repeatable)");
  auto* all = cmd->add_flag("--all", data.all, "All features (default)");
  feature->excludes(all);
}

void add_common_options(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--format", common.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output", common.output, "Write the report here instead of stdout");
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Feature influence of black-box classifiers", "influence"};
  app.require_subcommand(1);

  CommonOptions common;
  DataOptions data;
  std::string measure = "chi";
  std::string distance_name = "discrete";
  std::string weights_file;
  std::string normalization = "per-pair";

  auto* compute = app.add_subcommand("compute", "Per-feature influence on a labeled CSV");
  add_data_options(compute, data);
  add_common_options(compute, common);
  compute->add_option("--measure", measure)
      ->check(CLI::IsMember({"chi", "chi-norm", "win-loss", "state", "weighted", "distance"}));
  compute->add_option("--distance", distance_name)
      ->check(CLI::IsMember({"discrete", "abs", "cosine"}));
  compute->add_option("--weights-file", weights_file);

  bool zeta = false, raw_zeta = false;
  auto* state = app.add_subcommand("state", "Per-state influence (chi_{i,b} or zeta)");
  add_data_options(state, data);
  add_common_options(state, common);
  state->add_flag("--zeta", zeta, "Signed zeta instead of chi_{i,b}");
  state->add_flag("--raw", raw_zeta, "Omit zeta's 1/|A| factor");

  std::string form = "plain", weighting = "point";
  auto* weighted = app.add_subcommand("weighted", "Weighted influence");
  add_data_options(weighted, data);
  add_common_options(weighted, common);
  weighted->add_option("--weights-file", weights_file,
                       "CSV: feature columns then weight")->required();
  weighted->add_option("--form", form)->check(CLI::IsMember({"plain", "conditional"}));
  weighted->add_option("--weighting", weighting)
      ->check(CLI::IsMember({"point", "conditional"}));

  auto* distance = app.add_subcommand("distance", "Pseudo-distance influence");
  add_data_options(distance, data);
  add_common_options(distance, common);
  distance->add_option("--distance", distance_name)
      ->check(CLI::IsMember({"discrete", "abs", "cosine"}));
  distance->add_option("--normalization", normalization)
      ->check(CLI::IsMember({"per-pair", "per-point", "raw"}));

  EstimatorConfig est;
  std::string sample_distance;
  auto* sample = app.add_subcommand("sample", "Monte Carlo estimate of chi");
  add_data_options(sample, data);
  add_common_options(sample, common);
  sample->add_option("--samples", est.sample_count)->check(CLI::PositiveNumber);
  sample->add_option("--seed", est.seed);
  sample->add_option("--confidence", est.confidence)->check(CLI::Range(0.0, 1.0));
  sample->add_option("--distance", sample_distance, "Estimate chi_distance instead")
      ->check(CLI::IsMember({"discrete", "abs", "cosine"}));

  std::string linear_weights, method = "closed";
  double threshold = 0;
  std::uint64_t linear_samples = 1000000, linear_seed = 0;
  double linear_confidence = 0.95, tolerance = 1e-9;
  std::size_t resolution = 200;
  std::vector<std::string> linear_features;
  auto* linear = app.add_subcommand("linear", "Influence for a linear classifier on [0,1]^n");
  add_common_options(linear, common);
  linear->add_option("--weights", linear_weights, "Comma-separated weights")->required();
  linear->add_option("--threshold", threshold)->required();
  linear->add_option("--method", method)
      ->check(CLI::IsMember({"closed", "mc", "grid", "monotonicity"}));
  linear->add_option("--feature", linear_features, "x1..xn (repeatable)");
  linear->add_option("--samples", linear_samples)->check(CLI::PositiveNumber);
  linear->add_option("--seed", linear_seed);
  linear->add_option("--confidence", linear_confidence)->check(CLI::Range(0.0, 1.0));
  linear->add_option("--resolution", resolution)->check(CLI::Range(2, 100000));
  linear->add_option("--tolerance", tolerance);

  std::string axiom_measure = "chi";
  std::size_t trials = 500;
  std::uint64_t axiom_seed = 0;
  auto* axioms = app.add_subcommand("check-axioms", "Run the axiom checkers on a measure");
  add_common_options(axioms, common);
  axioms->add_option("--measure", axiom_measure)
      ->check(CLI::IsMember({"chi", "chi-norm", "zero"}));
  axioms->add_option("--trials", trials)->check(CLI::PositiveNumber);
  axioms->add_option("--seed", axiom_seed);

  std::string counts, pipeline_space;
  std::uint64_t min_count = kDefaultMinCount;
  auto* pipeline = app.add_subcommand("pipeline",
                                      "Counts -> normalize -> per-item and vector influence");
  add_common_options(pipeline, common);
  pipeline->add_option("--counts", counts, "CSV: feature columns, item, count")->required();
  pipeline->add_option("--space", pipeline_space);
  pipeline->add_option("--min-count", min_count);
  pipeline->add_option("--normalization", normalization)
      ->check(CLI::IsMember({"per-pair", "per-point", "raw"}));

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitInputError;
  }

  try {
    Json report;
    if (compute->parsed()) {
      if (measure == "state") {
        report = run_state(data, false, false, err);
      } else {
        report = run_compute(data, measure, distance_name, weights_file, err);
      }
    } else if (state->parsed()) {
      report = run_state(data, zeta, raw_zeta, err);
    } else if (weighted->parsed()) {
      report = run_weighted(data, weights_file, form, weighting, err);
    } else if (distance->parsed()) {
      report = run_distance(data, distance_name, normalization, err);
    } else if (sample->parsed()) {
      report = run_sample(data, est, sample_distance, err);
    } else if (linear->parsed()) {
      report = run_linear(linear_weights, threshold, method, linear_features,
                          linear_samples, linear_seed, linear_confidence, resolution,
                          tolerance);
    } else if (axioms->parsed()) {
      report = run_check_axioms(axiom_measure, trials, axiom_seed);
    } else if (pipeline->parsed()) {
      report = run_pipeline_command(counts, pipeline_space, min_count, normalization, err);
    }
    emit(report, common, out);
    return kExitOk;
  } catch (const InfluenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace influence
