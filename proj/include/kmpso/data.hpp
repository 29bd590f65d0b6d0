#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kmpso/rng.hpp"

namespace kmpso {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Per-column range used by min-max normalization.
struct ColumnStats {
  double min = 0.0;
  double max = 0.0;

  bool operator==(const ColumnStats&) const = default;
};

/// Normalized examples ready for the network: features in [0,1], 1-of-m targets.
struct Dataset {
  Matrix features;                      // p x n
  Matrix targets;                       // p x m, one 1 per row
  std::vector<std::size_t> labels;      // p class indices in [0, m)
  std::vector<ColumnStats> attribute_stats;
  std::vector<std::size_t> row_ids;     // rows of the source table

  std::size_t size() const noexcept { return features.rows(); }
  std::size_t n_inputs() const noexcept { return features.cols(); }
  std::size_t n_classes() const noexcept { return targets.cols(); }
};

/// Column roles and lexical conventions of a delimited input file.
struct Schema {
  /// Class column index (0-based); the last column when unset.
  std::optional<std::size_t> class_col;
  /// Field separator; '\0' splits on runs of whitespace.
  char delimiter = ',';
  std::string missing = "?";
  std::vector<std::size_t> ignore_cols;
  /// Declared class values in label order. When empty, labels are assigned
  /// in first-seen order.
  std::vector<std::string> classes;
  /// Collapse classes to two: this value becomes label 0, every other value 1.
  std::optional<std::string> binarize;
  std::size_t skip_lines = 0;
};

/// Reads a `key = value` schema file (keys: class_col, delimiter, missing,
/// ignore_cols, classes, binarize, skip_lines).
Schema load_schema(const std::string& path);

/// Applies one schema key; throws ConfigError on unknown keys or bad values.
void set_schema_value(Schema& schema, const std::string& key, const std::string& value);

/// Parsed file before imputation and normalization.
struct RawTable {
  Matrix values;               // p x n, categorical cells hold integer codes
  std::vector<char> missing;   // p x n flags, row-major
  std::vector<std::size_t> labels;
  std::vector<std::string> class_names;
  std::vector<bool> categorical;   // per feature column

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }
  bool is_missing(std::size_t r, std::size_t c) const {
    return missing[r * values.cols() + c] != 0;
  }
  std::size_t n_classes() const noexcept { return class_names.size(); }
};

RawTable parse_table(std::istream& in, const Schema& schema);
RawTable load_csv(const std::string& path, const Schema& schema);

/// Mean of the non-missing cells of each column, over `rows` (all rows when
/// empty). Throws DataError when a column has no observed value.
std::vector<double> column_means(const RawTable& table, std::span<const std::size_t> rows = {});

/// Replaces every missing cell with its column mean.
RawTable impute_missing(const RawTable& table);
RawTable impute_missing(const RawTable& table, std::span<const double> fill);

std::vector<ColumnStats> column_stats(const Matrix& values);

/// Min-max scales each column into [0,1] with the given stats, clamping
/// values that fall outside the stats' range. Constant columns map to 0.
Matrix normalize(const Matrix& values, std::span<const ColumnStats> stats);
inline Matrix normalize(const Matrix& values) { return normalize(values, column_stats(values)); }

/// 1-of-m target rows.
Matrix encode_labels(std::span<const std::size_t> labels, std::size_t n_classes);

/// Builds a normalized dataset from a subset of rows of a complete table.
/// Stats default to those of the selected rows.
Dataset make_dataset(const RawTable& table, std::span<const std::size_t> rows,
                     std::optional<std::vector<ColumnStats>> stats = std::nullopt);

/// Rows of `values` selected by index.
Matrix select_rows(const Matrix& values, std::span<const std::size_t> rows);

struct FoldPlan {
  std::vector<std::size_t> assignment;  // fold index of each example
  std::size_t folds = 0;

  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;
  std::vector<std::size_t> sizes() const;
};

/// Shuffles 0..p-1 and deals the examples round-robin into `folds` folds.
FoldPlan kfold_split(std::size_t p, std::size_t folds, Rng& rng);

}  // namespace kmpso
