#include "influence/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "influence/error.h"

namespace influence {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string strip(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string where(std::size_t line) { return "line " + std::to_string(line); }

double parse_number(const std::string& cell, std::size_t line) {
  double x = 0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, x);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(x)) {
    throw InfluenceError(ErrorCode::kNonNumeric,
                         where(line) + ": '" + cell + "' is not a number");
  }
  return x;
}

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string quote_if_needed(const std::string& s) {
  const bool plain =
      !s.empty() && !is_space(s.front()) && !is_space(s.back()) &&
      s.find_first_of(",\"\n") == std::string::npos;
  if (plain) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Resolves the feature columns of a header: column c holds feature
// column_feature[c]. Builds the space from observed labels when none given.
struct FeatureColumns {
  FeatureSpace space;
  std::vector<std::size_t> column_feature;
};

FeatureColumns resolve_features(const CsvTable& csv, std::size_t feature_columns,
                                const std::optional<FeatureSpace>& space) {
  FeatureColumns out;
  if (space) {
    if (feature_columns != space->feature_count()) {
      throw InfluenceError(ErrorCode::kMalformedRow,
                           "header has " + std::to_string(feature_columns) +
                               " feature columns, space has " +
                               std::to_string(space->feature_count()));
    }
    out.space = *space;
    std::set<std::size_t> seen;
    for (std::size_t c = 0; c < feature_columns; ++c) {
      const std::size_t f = space->feature_index(csv.header[c]);
      if (!seen.insert(f).second) {
        throw InfluenceError(ErrorCode::kDuplicateName,
                             "column '" + csv.header[c] + "' repeated");
      }
      out.column_feature.push_back(f);
    }
    return out;
  }
  std::vector<Feature> features(feature_columns);
  for (std::size_t c = 0; c < feature_columns; ++c) {
    std::set<std::string> labels;
    for (const auto& row : csv.rows) labels.insert(row[c]);
    features[c] = {csv.header[c], {labels.begin(), labels.end()}};
    out.column_feature.push_back(c);
  }
  out.space = build_space(std::move(features));
  return out;
}

Profile row_profile(const FeatureColumns& fc, const std::vector<std::string>& row) {
  Profile p;
  p.states.resize(fc.column_feature.size());
  for (std::size_t c = 0; c < fc.column_feature.size(); ++c) {
    const std::size_t f = fc.column_feature[c];
    p.states[f] = fc.space.state_index(f, row[c]);
  }
  return p;
}

void check_row_widths(const CsvTable& csv) {
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    if (csv.rows[r].size() != csv.header.size()) {
      throw InfluenceError(ErrorCode::kMalformedRow,
                           where(csv.line_numbers[r]) + ": expected " +
                               std::to_string(csv.header.size()) + " cells, got " +
                               std::to_string(csv.rows[r].size()));
    }
  }
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;      // inside quotes
  bool was_quoted = false;  // current cell started with a quote
  bool row_has_content = false;
  std::size_t line = 1, row_line = 1;

  auto end_cell = [&] {
    row.push_back(was_quoted ? cell : strip(cell));
    cell.clear();
    was_quoted = false;
  };
  auto end_row = [&] {
    end_cell();
    const bool blank = !row_has_content && row.size() == 1 && row[0].empty();
    if (!blank) {
      if (table.header.empty()) {
        table.header = std::move(row);
      } else {
        table.rows.push_back(std::move(row));
        table.line_numbers.push_back(row_line);
      }
    }
    row.clear();
    row_has_content = false;
  };

  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          cell += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        cell += c;
      }
      continue;
    }
    if (c == '"' && strip(cell).empty()) {
      quoted = was_quoted = row_has_content = true;
      cell.clear();
    } else if (c == ',') {
      row_has_content = true;
      end_cell();
    } else if (c == '\n') {
      end_row();
      row_line = ++line;
    } else if (was_quoted) {
      if (!is_space(c)) {
        throw InfluenceError(ErrorCode::kMalformedRow,
                             where(line) + ": text after closing quote");
      }
    } else {
      if (!is_space(c)) row_has_content = true;
      cell += c;
    }
  }
  if (quoted) {
    throw InfluenceError(ErrorCode::kMalformedRow, "unterminated quoted cell");
  }
  if (!cell.empty() || !row.empty() || was_quoted) end_row();
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InfluenceError(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LabeledDataset parse_labeled_csv(std::string_view text, std::size_t value_columns,
                                 const std::optional<FeatureSpace>& space) {
  const CsvTable csv = parse_csv(text);
  if (csv.header.empty() || csv.rows.empty()) {
    throw InfluenceError(ErrorCode::kEmptyInput, "labeled CSV has no data rows");
  }
  if (value_columns == 0 || csv.header.size() <= value_columns) {
    throw InfluenceError(ErrorCode::kMalformedRow,
                         "header needs feature columns followed by " +
                             std::to_string(value_columns) + " value column(s)");
  }
  check_row_widths(csv);
  const std::size_t feature_columns = csv.header.size() - value_columns;
  const FeatureColumns fc = resolve_features(csv, feature_columns, space);

  std::vector<std::vector<double>> numbers;
  numbers.reserve(csv.rows.size());
  bool all_binary = value_columns == 1;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    std::vector<double> xs;
    for (std::size_t c = feature_columns; c < csv.header.size(); ++c) {
      xs.push_back(parse_number(csv.rows[r][c], csv.line_numbers[r]));
    }
    if (all_binary && xs[0] != 0.0 && xs[0] != 1.0) all_binary = false;
    numbers.push_back(std::move(xs));
  }

  std::vector<Record> records;
  records.reserve(csv.rows.size());
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    Value v;
    if (value_columns > 1) {
      v = Value::vector(std::move(numbers[r]));
    } else if (all_binary) {
      v = Value::binary(numbers[r][0] == 1.0);
    } else {
      v = Value::scalar(numbers[r][0]);
    }
    records.push_back({row_profile(fc, csv.rows[r]), std::move(v)});
  }
  return build_dataset(fc.space, std::move(records));
}

LabeledDataset ingest_labeled_csv(const std::string& path,
                                  std::size_t value_columns,
                                  const std::optional<FeatureSpace>& space) {
  return parse_labeled_csv(read_file(path), value_columns, space);
}

std::string write_labeled_csv(const LabeledDataset& dataset) {
  const auto& space = dataset.space();
  std::string out;
  for (std::size_t k = 0; k < space.feature_count(); ++k) {
    out += quote_if_needed(space.feature(k).name) + ",";
  }
  for (std::size_t c = 0; c < dataset.dimension(); ++c) {
    out += (c ? ",value" : "value") + (dataset.dimension() > 1 ? std::to_string(c + 1) : "");
  }
  out += "\n";
  for (std::size_t p = 0; p < dataset.size(); ++p) {
    const Profile profile = dataset.profile(p);
    for (std::size_t k = 0; k < profile.size(); ++k) {
      out += quote_if_needed(space.feature(k).states[profile[k]]) + ",";
    }
    const auto v = dataset.value(p);
    for (std::size_t c = 0; c < v.size(); ++c) {
      out += (c ? "," : "") + format_number(v[c]);
    }
    out += "\n";
  }
  return out;
}

FrequencyTable parse_counts_csv(std::string_view text,
                                const std::optional<FeatureSpace>& space) {
  const CsvTable csv = parse_csv(text);
  if (csv.header.empty() || csv.rows.empty()) {
    throw InfluenceError(ErrorCode::kEmptyInput, "counts CSV has no data rows");
  }
  if (csv.header.size() < 3) {
    throw InfluenceError(ErrorCode::kMalformedRow,
                         "counts CSV needs feature columns, item and count");
  }
  check_row_widths(csv);
  const std::size_t feature_columns = csv.header.size() - 2;
  const FeatureColumns fc = resolve_features(csv, feature_columns, space);

  std::set<std::string> item_set;
  for (const auto& row : csv.rows) item_set.insert(row[feature_columns]);
  FrequencyTable table;
  table.space = fc.space;
  table.items.assign(item_set.begin(), item_set.end());

  std::set<ProfileKey> profiles;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    const std::size_t line = csv.line_numbers[r];
    const double count = parse_number(row[feature_columns + 1], line);
    if (count < 0) {
      throw InfluenceError(ErrorCode::kNegativeCount,
                           where(line) + ": negative count");
    }
    if (count != std::floor(count) || count > 9.0e15) {
      throw InfluenceError(ErrorCode::kNonNumeric,
                           where(line) + ": count must be a whole number");
    }
    const ProfileKey key = encode(fc.space, row_profile(fc, row));
    const std::size_t item =
        std::lower_bound(table.items.begin(), table.items.end(), row[feature_columns]) -
        table.items.begin();
    table.counts[{key, item}] += static_cast<std::uint64_t>(count);
    profiles.insert(key);
  }
  table.profiles.assign(profiles.begin(), profiles.end());
  return table;
}

FrequencyTable ingest_counts_csv(const std::string& path,
                                 const std::optional<FeatureSpace>& space) {
  return parse_counts_csv(read_file(path), space);
}

NormalizedValues normalize_counts(const FrequencyTable& table,
                                  std::uint64_t min_total) {
  const std::size_t item_count = table.items.size();
  std::vector<std::uint64_t> totals(item_count, 0);
  for (const auto& [key, count] : table.counts) totals[key.second] += count;

  NormalizedValues out;
  out.space = table.space;
  out.profiles = table.profiles;
  std::vector<std::size_t> retained(item_count, SIZE_MAX);
  for (std::size_t k = 0; k < item_count; ++k) {
    if (totals[k] < min_total || totals[k] == 0) {
      out.dropped.push_back(table.items[k]);
      continue;
    }
    retained[k] = out.items.size();
    out.items.push_back(table.items[k]);
    out.totals.push_back(totals[k]);
  }
  if (out.items.empty()) {
    throw InfluenceError(ErrorCode::kNothingToAnalyze,
                         "every item fell below the minimum count of " +
                             std::to_string(min_total));
  }
  out.values.assign(out.items.size(), std::vector<double>(out.profiles.size(), 0.0));
  for (const auto& [key, count] : table.counts) {
    const std::size_t k = retained[key.second];
    if (k == SIZE_MAX) continue;
    const std::size_t p =
        std::lower_bound(out.profiles.begin(), out.profiles.end(), key.first) -
        out.profiles.begin();
    out.values[k][p] =
        static_cast<double>(count) / static_cast<double>(out.totals[k]);
  }
  return out;
}

std::string_view normalization_name(Normalization n) {
  switch (n) {
    case Normalization::kPerPair: return "per-pair";
    case Normalization::kPerPoint: return "per-point";
    case Normalization::kRaw: return "raw";
  }
  return "unknown";
}

LabeledDataset stacked_dataset(const NormalizedValues& values) {
  const std::size_t dim = values.items.size();
  std::vector<double> flat;
  flat.reserve(values.profiles.size() * dim);
  for (std::size_t p = 0; p < values.profiles.size(); ++p) {
    for (std::size_t k = 0; k < dim; ++k) flat.push_back(values.values[k][p]);
  }
  return make_dataset_from_sorted(values.space, ValueKind::kVector, dim,
                                  values.profiles, std::move(flat));
}

LabeledDataset item_dataset(const NormalizedValues& values, std::size_t item) {
  return make_dataset_from_sorted(values.space, ValueKind::kScalar, 1,
                                  values.profiles, values.values.at(item));
}

double normalize_total(double raw, const LabeledDataset& dataset,
                       std::size_t feature, Normalization mode) {
  switch (mode) {
    case Normalization::kPerPair: {
      const std::uint64_t pairs = substitution_pair_count(dataset, feature);
      return pairs == 0 ? 0.0 : raw / static_cast<double>(pairs);
    }
    case Normalization::kPerPoint:
      return raw / static_cast<double>(dataset.size());
    case Normalization::kRaw:
      return raw;
  }
  return raw;
}

double vector_influence(const NormalizedValues& values, std::size_t feature,
                        Normalization mode) {
  const LabeledDataset d = stacked_dataset(values);
  return normalize_total(chi_distance(d, PseudoDistance::cosine(), feature), d,
                         feature, mode);
}

double per_item_influence(const NormalizedValues& values, std::string_view item,
                          std::size_t feature, Normalization mode) {
  auto it = std::find(values.items.begin(), values.items.end(), item);
  if (it == values.items.end()) {
    throw InfluenceError(ErrorCode::kUnknownItem,
                         "item '" + std::string(item) + "' is not retained");
  }
  const LabeledDataset d = item_dataset(values, it - values.items.begin());
  return normalize_total(chi_distance(d, PseudoDistance::absolute(), feature), d,
                         feature, mode);
}

PipelineResult run_pipeline(const FrequencyTable& table, std::uint64_t min_total,
                            Normalization mode) {
  PipelineResult result;
  result.values = normalize_counts(table, min_total);
  const auto& values = result.values;
  const auto& space = values.space;
  const std::size_t n = space.feature_count();

  const LabeledDataset stacked = stacked_dataset(values);
  for (std::size_t i = 0; i < n; ++i) {
    const double raw = chi_distance(stacked, PseudoDistance::cosine(), i);
    result.vector_influence.push_back(
        {space.feature(i).name, raw, normalize_total(raw, stacked, i, mode)});
  }

  std::vector<std::vector<double>> columns(n);
  for (std::size_t k = 0; k < values.items.size(); ++k) {
    const LabeledDataset d = item_dataset(values, k);
    ItemInfluence item{values.items[k], values.totals[k], {}};
    for (std::size_t i = 0; i < n; ++i) {
      const double raw = chi_distance(d, PseudoDistance::absolute(), i);
      item.per_feature.push_back(normalize_total(raw, d, i, mode));
      columns[i].push_back(item.per_feature.back());
    }
    result.items.push_back(std::move(item));
  }
  for (const auto& column : columns) result.stats.push_back(stats_report(column));
  return result;
}

}  // namespace influence
