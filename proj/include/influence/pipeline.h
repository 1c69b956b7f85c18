#ifndef INFLUENCE_PIPELINE_H_
#define INFLUENCE_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "influence/core.h"
#include "influence/measures.h"

namespace influence {

// Comma-separated, first row is the header. Unquoted cells are
// whitespace-stripped; quoted cells ("...", with "" as an escaped quote) are
// kept verbatim. Blank lines are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line per row
};

CsvTable parse_csv(std::string_view text);
// Throws kIo when the file cannot be read.
std::string read_file(const std::string& path);

// Header: feature columns then value_columns value columns. With a space the
// feature columns must match its names (any order) and every label must be
// one of its states; without one, states are inferred and sorted. A single
// all-0/1 column yields a binary dataset, a single numeric column a scalar
// one, several columns a vector dataset.
LabeledDataset parse_labeled_csv(std::string_view text,
                                 std::size_t value_columns = 1,
                                 const std::optional<FeatureSpace>& space = {});
LabeledDataset ingest_labeled_csv(const std::string& path,
                                  std::size_t value_columns = 1,
                                  const std::optional<FeatureSpace>& space = {});

// Inverse of parse_labeled_csv: header of feature names then value1..valueK.
std::string write_labeled_csv(const LabeledDataset& dataset);

struct FrequencyTable {
  FeatureSpace space;
  std::vector<std::string> items;  // sorted
  // (profile, item index) -> count; repeated rows are summed.
  std::map<std::pair<ProfileKey, std::size_t>, std::uint64_t> counts;
  std::vector<ProfileKey> profiles;  // every profile seen, sorted
};

// Columns f1..fn,item,count.
FrequencyTable parse_counts_csv(std::string_view text,
                                const std::optional<FeatureSpace>& space = {});
FrequencyTable ingest_counts_csv(const std::string& path,
                                 const std::optional<FeatureSpace>& space = {});

struct NormalizedValues {
  FeatureSpace space;
  std::vector<ProfileKey> profiles;             // sorted
  std::vector<std::string> items;               // retained
  std::vector<std::uint64_t> totals;            // per retained item
  std::vector<std::vector<double>> values;      // [item][profile], sums to 1
  std::vector<std::string> dropped;             // below the count filter
};

inline constexpr std::uint64_t kDefaultMinCount = 100;

// Keeps items with total >= min_total and rescales each to sum to 1 over
// the profiles. Throws kNothingToAnalyze when every item is dropped.
NormalizedValues normalize_counts(const FrequencyTable& table,
                                  std::uint64_t min_total = kDefaultMinCount);

enum class Normalization {
  kPerPair,   // divide by the number of ordered substitution pairs
  kPerPoint,  // divide by |B|
  kRaw,
};

std::string_view normalization_name(Normalization n);

// Vector-valued dataset a -> (v_1(a), ..., v_K(a)).
LabeledDataset stacked_dataset(const NormalizedValues& values);
// Scalar dataset a -> v_k(a).
LabeledDataset item_dataset(const NormalizedValues& values, std::size_t item);

// Applies a normalization to a raw chi_distance total.
double normalize_total(double raw, const LabeledDataset& dataset,
                       std::size_t feature, Normalization mode);

// chi_distance with cosine distance over the stacked vectors.
double vector_influence(const NormalizedValues& values, std::size_t feature,
                        Normalization mode = Normalization::kPerPair);

// chi_distance with absolute difference over one item's values. Throws
// kUnknownItem.
double per_item_influence(const NormalizedValues& values, std::string_view item,
                          std::size_t feature,
                          Normalization mode = Normalization::kPerPair);

struct ItemInfluence {
  std::string item;
  std::uint64_t total = 0;
  std::vector<double> per_feature;
};

struct PipelineResult {
  NormalizedValues values;
  std::vector<FeatureInfluence> vector_influence;  // raw + normalized
  std::vector<ItemInfluence> items;
  std::vector<SummaryStats> stats;  // per feature, over items
};

PipelineResult run_pipeline(const FrequencyTable& table,
                            std::uint64_t min_total = kDefaultMinCount,
                            Normalization mode = Normalization::kPerPair);

}  // namespace influence

#endif  // INFLUENCE_PIPELINE_H_
